//! Complete cyclic push-to-the-top Gray codes over `S_n`.
//!
//! The transition sequence is built recursively: `n = 1` has none, `n = 2` is
//! `t_{↑2}, t_{↑2}`, and the sequence for `n` replaces every transition `t_{↑j}` of
//! the sequence for `n − 1` by `t_{↑n+1−j}` followed by `n − 1` copies of `t_{↑n}`.
//! Since `t_{↑n}^{n−1} t_{↑i} = t_{↓i}`, the codewords at block boundaries form a
//! push-to-the-bottom code fixing position 1 whose reversed, complemented tail is
//! the complete code of order `n − 1`. Every block of `n` consecutive codewords is
//! the set of cyclic shifts of one permutation, and the code starts at the
//! identity.

use crate::error::{Error, Result};
use crate::gray::GrayCode;
use crate::perm::{Permutation, MAX_ORDER};

/// Largest `n` with `n!` representable in a `u128`.
pub const MAX_RANKABLE_ORDER: usize = 34;

/// `n!` with overflow checking.
pub fn factorial(n: usize) -> Result<u128> {
    (1..=n as u128).try_fold(1u128, |acc, i| {
        acc.checked_mul(i)
            .ok_or_else(|| Error::Overflow(format!("{n}! does not fit in 128 bits")))
    })
}

/// The complete code `G↑(n, n!)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompleteCode {
    n: usize,
}

impl CompleteCode {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_ORDER {
            return Err(Error::InvalidOrder(format!(
                "complete code order must lie in 1..={MAX_ORDER}, got {n}"
            )));
        }
        Ok(CompleteCode { n })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> Result<u128> {
        factorial(self.n)
    }

    /// The push index of the transition leaving codeword `s`, for `0 ≤ s < n!`.
    /// Amortized O(1) over consecutive `s`.
    pub fn transition_at(&self, s: u128) -> usize {
        transition_at(self.n, s)
    }

    /// Lazy iterator over the codewords in order.
    pub fn iter(&self) -> Result<CompleteIter> {
        Ok(CompleteIter {
            n: self.n,
            cur: Permutation::identity(self.n),
            step: 0,
            total: self.size()?,
        })
    }

    /// Materializes the generating sequence, guarded by `limit` codewords.
    pub fn gray_code(&self, limit: u128) -> Result<GrayCode> {
        let size = self.size()?;
        if size > limit {
            return Err(Error::TooLarge { size, limit });
        }
        let transitions = if self.n == 1 {
            Vec::new()
        } else {
            (0..size).map(|s| self.transition_at(s) as u8).collect()
        };
        GrayCode::new(Permutation::identity(self.n), transitions)
    }

    /// 0-based position of `sigma` in enumeration order. O(n²) word operations.
    pub fn rank(&self, sigma: &Permutation) -> Result<u128> {
        if sigma.len() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: sigma.len(),
            });
        }
        rank(sigma.as_slice())
    }

    /// The codeword at position `m`. O(n²).
    pub fn unrank(&self, m: u128) -> Result<Permutation> {
        let size = self.size()?;
        if m >= size {
            return Err(Error::RankOutOfRange { rank: m, size });
        }
        Ok(Permutation::from_vec_unchecked(unrank(self.n, m)?))
    }
}

pub(crate) fn transition_at(n: usize, mut s: u128) -> usize {
    debug_assert!(n >= 2);
    // Unwinding the recursion, each level either lands inside a block (t_{↑k})
    // or complements the index produced by the level below.
    let mut k = n;
    while k > 2 && s.is_multiple_of(k as u128) {
        s /= k as u128;
        k -= 1;
    }
    // levels k+1..=n each complemented the index
    (k + 1..=n).fold(k, |j, m| m + 1 - j)
}

// Position of the permutation `a` (values 1..=n) in the complete code of order
// `a.len()`. A codeword at position `(r − 1)·n + u` (mod n!) is the rotation by
// `u` of a block representative `b` with `b(1) = 1`, and the reversed complement
// of `b`'s tail has rank `r` (mod (n−1)!) in the code of order n − 1.
pub(crate) fn rank(a: &[u8]) -> Result<u128> {
    let n = a.len();
    if n <= 1 {
        return Ok(0);
    }
    let pos = a.iter().position(|&v| v == 1).expect("1 is always present") + 1;
    let u = if pos >= 2 { pos - 1 } else { n };
    // b is `a` rotated left by u, so b[0] = 1
    let b: Vec<u8> = (0..n).map(|i| a[(i + u) % n]).collect();
    let g: Vec<u8> = (1..n).map(|q| (n + 1) as u8 - b[n - q]).collect();
    let sub = factorial(n - 1)?;
    let r_prime = rank(&g)?;
    let r = if r_prime >= 1 { r_prime } else { sub };
    let total = sub * n as u128;
    Ok(((r - 1) * n as u128 + u as u128) % total)
}

pub(crate) fn unrank(n: usize, m: u128) -> Result<Vec<u8>> {
    if m == 0 || n == 1 {
        return Ok((1..=n as u8).collect());
    }
    let u = ((m - 1) % n as u128) as usize + 1;
    let r = (m - 1) / n as u128 + 1;
    let sub = factorial(n - 1)?;
    let c = unrank(n - 1, r % sub)?;
    let mut b = vec![0u8; n];
    b[0] = 1;
    for q in 1..n {
        b[n - q] = (n + 1) as u8 - c[q - 1];
    }
    let mut out = vec![0u8; n];
    for i in 0..n {
        out[(i + u) % n] = b[i];
    }
    Ok(out)
}

/// Streaming enumeration cursor over a complete code.
#[derive(Clone, Debug)]
pub struct CompleteIter {
    n: usize,
    cur: Permutation,
    step: u128,
    total: u128,
}

impl Iterator for CompleteIter {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.step >= self.total {
            return None;
        }
        let out = self.cur.clone();
        if self.n >= 2 {
            self.cur.push_to_top(transition_at(self.n, self.step));
        }
        self.step += 1;
        Some(out)
    }
}
