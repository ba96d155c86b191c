//! Permutations in one-line (vector) notation over `[n] = {1, ..., n}`.
//!
//! A [`Permutation`] stores `σ(1), ..., σ(n)` as 1-based values. Composition follows
//! the functional convention `(σ ∘ τ)(k) = σ(τ(k))`, so a left factor relabels values
//! and a right factor rearranges positions. Push transitions are right
//! multiplications and therefore commute with left translations.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest order accepted anywhere in the crate. Values are stored as `u8`.
pub const MAX_ORDER: usize = 64;

/// A bijection on `[n]` in vector notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<u8>,
}

/// Sign of a permutation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    /// Group product in `{±1}`.
    pub fn combine(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// A single push transition, with 1-based indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Transition {
    /// `t_{i↑j}`: the element at index `j` moves to index `i`, `1 ≤ i < j`.
    PushToIndex { i: usize, j: usize },
    /// `t_{↓j}`: the element at index `j` moves to the last index.
    PushToBottom { j: usize },
}

impl Transition {
    /// The push-to-the-top transition `t_{↑j}`.
    pub fn push_to_top(j: usize) -> Self {
        Transition::PushToIndex { i: 1, j }
    }

    fn check(&self, n: usize) -> Result<()> {
        let ok = match *self {
            Transition::PushToIndex { i, j } => 1 <= i && i < j && j <= n,
            Transition::PushToBottom { j } => 1 <= j && j <= n,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::IndexOutOfBounds {
                n,
                detail: format!("{self:?}"),
            })
        }
    }
}

impl Permutation {
    /// The identity of `S_n`.
    pub fn identity(n: usize) -> Self {
        assert!(
            (1..=MAX_ORDER).contains(&n),
            "order {n} outside 1..={MAX_ORDER}"
        );
        Permutation {
            image: (1..=n as u8).collect(),
        }
    }

    /// Builds a permutation from 1-based images, validating bijectivity.
    pub fn from_images<T>(images: &[T]) -> Result<Self>
    where
        T: Copy + TryInto<usize>,
    {
        let n = images.len();
        if n == 0 || n > MAX_ORDER {
            return Err(Error::InvalidPermutation(format!(
                "length {n} outside 1..={MAX_ORDER}"
            )));
        }
        let mut seen = vec![false; n + 1];
        let mut image = Vec::with_capacity(n);
        for &v in images {
            let v: usize = v
                .try_into()
                .map_err(|_| Error::InvalidPermutation("value does not fit".into()))?;
            if v == 0 || v > n {
                return Err(Error::InvalidPermutation(format!(
                    "value {v} outside 1..={n}"
                )));
            }
            if seen[v] {
                return Err(Error::InvalidPermutation(format!("value {v} repeated")));
            }
            seen[v] = true;
            image.push(v as u8);
        }
        Ok(Permutation { image })
    }

    /// Wraps images that are already known to form a bijection.
    pub(crate) fn from_vec_unchecked(image: Vec<u8>) -> Self {
        let p = Permutation { image };
        debug_assert!(p.is_bijection(), "not a bijection: {p}");
        p
    }

    fn is_bijection(&self) -> bool {
        let n = self.image.len();
        let mut seen = vec![false; n + 1];
        self.image.iter().all(|&v| {
            let v = v as usize;
            v >= 1 && v <= n && !std::mem::replace(&mut seen[v], true)
        })
    }

    /// The cycle `(a_1, a_2, ..., a_k)` in `S_n`.
    pub fn cycle(n: usize, elements: &[usize]) -> Result<Self> {
        let mut image: Vec<u8> = (1..=n as u8).collect();
        for (idx, &a) in elements.iter().enumerate() {
            let b = elements[(idx + 1) % elements.len()];
            if a == 0 || a > n || b == 0 || b > n {
                return Err(Error::InvalidPermutation(
                    "cycle element out of range".to_string(),
                ));
            }
            image[a - 1] = b as u8;
        }
        Permutation::from_images(&image)
    }

    /// The transposition `(a, b)` in `S_n`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        Permutation::cycle(n, &[a, b])
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    /// The images `σ(1), ..., σ(n)`.
    pub fn as_slice(&self) -> &[u8] {
        &self.image
    }

    /// `σ(i)` for a 1-based index `i`.
    pub fn image(&self, i: usize) -> usize {
        self.image[i - 1] as usize
    }

    /// `σ⁻¹(v)` as a 1-based index.
    pub fn position_of(&self, v: usize) -> usize {
        self.image
            .iter()
            .position(|&x| x as usize == v)
            .expect("value outside the permutation range")
            + 1
    }

    pub fn is_identity(&self) -> bool {
        self.image
            .iter()
            .enumerate()
            .all(|(i, &v)| v as usize == i + 1)
    }

    /// `self ∘ tau`.
    pub fn compose(&self, tau: &Permutation) -> Result<Permutation> {
        if self.len() != tau.len() {
            return Err(Error::DimensionMismatch {
                left: self.len(),
                right: tau.len(),
            });
        }
        let image = tau
            .image
            .iter()
            .map(|&t| self.image[t as usize - 1])
            .collect();
        Ok(Permutation::from_vec_unchecked(image))
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.len()];
        for (i, &v) in self.image.iter().enumerate() {
            inv[v as usize - 1] = (i + 1) as u8;
        }
        Permutation::from_vec_unchecked(inv)
    }

    /// Sign via cycle decomposition, O(n).
    pub fn parity(&self) -> Parity {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut transpositions = 0usize;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.image[x] as usize - 1;
                len += 1;
            }
            transpositions += len - 1;
        }
        if transpositions.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_even(&self) -> bool {
        self.parity() == Parity::Even
    }

    /// Applies a transition, returning the new permutation.
    pub fn apply(&self, t: Transition) -> Result<Permutation> {
        t.check(self.len())?;
        let mut out = self.clone();
        match t {
            Transition::PushToIndex { i, j } => out.image[i - 1..j].rotate_right(1),
            Transition::PushToBottom { j } => out.image[j - 1..].rotate_left(1),
        }
        Ok(out)
    }

    /// In-place `t_{↑j}`. Panics if `j` is out of range.
    pub fn push_to_top(&mut self, j: usize) {
        self.image[..j].rotate_right(1);
    }

    /// In-place `t_{i↑j}`. Panics if the indices are out of range.
    pub fn push_to_index(&mut self, i: usize, j: usize) {
        self.image[i - 1..j].rotate_right(1);
    }

    /// In-place inverse of `t_{↑j}`: the top element moves down to index `j`.
    pub fn pull_from_top(&mut self, j: usize) {
        self.image[..j].rotate_left(1);
    }

    /// `(a, b) ∘ σ`: exchanges the values `a` and `b`.
    pub fn swap_values(&self, a: usize, b: usize) -> Permutation {
        let mut out = self.clone();
        for v in out.image.iter_mut() {
            if *v as usize == a {
                *v = b as u8;
            } else if *v as usize == b {
                *v = a as u8;
            }
        }
        out
    }

    /// `σ ∘ (i, j)`: exchanges the entries at indices `i` and `j`.
    pub fn swap_positions(&self, i: usize, j: usize) -> Permutation {
        let mut out = self.clone();
        out.image.swap(i - 1, j - 1);
        out
    }

    /// Restriction of a permutation fixing every index above `m` to `S_m`.
    pub fn truncate(&self, m: usize) -> Result<Permutation> {
        Permutation::from_images(&self.image[..m])
    }

    /// Embeds into `S_n`, `n ≥ len`, fixing the new points.
    pub fn extend(&self, n: usize) -> Permutation {
        let mut image = self.image.clone();
        image.extend((self.len() + 1..=n).map(|v| v as u8));
        Permutation::from_vec_unchecked(image)
    }
}

fn check_len(a: &Permutation, b: &Permutation) -> Result<()> {
    if a.len() != b.len() {
        Err(Error::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        })
    } else {
        Ok(())
    }
}

/// `d∞(σ, τ) = max_j |σ(j) − τ(j)|`.
pub fn dist_linf(sigma: &Permutation, tau: &Permutation) -> Result<usize> {
    check_len(sigma, tau)?;
    Ok(sigma
        .image
        .iter()
        .zip(&tau.image)
        .map(|(&a, &b)| a.abs_diff(b) as usize)
        .max()
        .unwrap_or(0))
}

/// Kendall τ distance by direct pair counting, O(n²).
pub fn dist_kendall(sigma: &Permutation, tau: &Permutation) -> Result<usize> {
    check_len(sigma, tau)?;
    let n = sigma.len();
    let mut count = 0;
    for i in 0..n {
        for j in 0..n {
            if sigma.image[i] < sigma.image[j] && tau.image[i] > tau.image[j] {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Kendall τ distance by merge-sort inversion counting, O(n log n).
pub fn dist_kendall_fast(sigma: &Permutation, tau: &Permutation) -> Result<usize> {
    check_len(sigma, tau)?;
    // Order positions by σ-value; the τ-values read in that order have exactly
    // d_K(σ, τ) inversions.
    let sigma_inv = sigma.inverse();
    let mut seq: Vec<u8> = sigma_inv
        .image
        .iter()
        .map(|&pos| tau.image[pos as usize - 1])
        .collect();
    let mut buf = seq.clone();
    Ok(merge_count(&mut seq, &mut buf))
}

fn merge_count(a: &mut [u8], buf: &mut [u8]) -> usize {
    let n = a.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut inv = merge_count(&mut a[..mid], &mut buf[..mid]);
    inv += merge_count(&mut a[mid..], &mut buf[mid..]);
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if a[i] <= a[j] {
            buf[k] = a[i];
            i += 1;
        } else {
            buf[k] = a[j];
            inv += mid - i;
            j += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&a[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&a[j..n]);
    a.copy_from_slice(&buf[..n]);
    inv
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.image.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_string().replace(' ', ","))
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Parses the space-separated 1-based format, e.g. `"4 1 5 2 6 3"`.
    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad value {tok:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::from_images(&values)
    }
}

/// All of `S_n` in lexicographic order. Intended for small `n`.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = (1..=n as u8).collect();
    loop {
        out.push(Permutation::from_vec_unchecked(cur.clone()));
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1))
            .rev()
            .find(|&i| cur[i] < cur[i + 1])
        else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Permutation {
        Permutation::from_images(v).unwrap()
    }

    #[test]
    fn compose_examples() {
        assert_eq!(
            p(&[2, 1, 3]).compose(&p(&[1, 3, 2])).unwrap(),
            p(&[2, 3, 1])
        );
        let s = p(&[3, 1, 4, 2]);
        let id = Permutation::identity(4);
        assert_eq!(s.compose(&id).unwrap(), s);
        assert_eq!(id.compose(&s).unwrap(), s);
        assert!(matches!(
            s.compose(&Permutation::identity(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(p(&[1, 2, 3]).inverse(), p(&[1, 2, 3]));
        assert_eq!(p(&[3, 1, 2]).inverse(), p(&[2, 3, 1]));
    }

    #[test]
    fn sign_examples() {
        assert_eq!(Permutation::identity(5).parity(), Parity::Even);
        assert_eq!(p(&[2, 1, 3]).parity(), Parity::Odd);
        assert_eq!(p(&[3, 2, 4, 1]).parity(), Parity::Even);
    }

    #[test]
    fn transition_examples() {
        let t = Transition::push_to_top(3);
        assert_eq!(p(&[1, 2, 3, 4]).apply(t).unwrap(), p(&[3, 1, 2, 4]));
        let t = Transition::PushToIndex { i: 3, j: 5 };
        assert_eq!(
            p(&[4, 1, 3, 5, 2, 6]).apply(t).unwrap(),
            p(&[4, 1, 2, 3, 5, 6])
        );
        let t = Transition::PushToBottom { j: 3 };
        assert_eq!(p(&[4, 1, 2, 3]).apply(t).unwrap(), p(&[4, 1, 3, 2]));
    }

    #[test]
    fn transition_bounds() {
        let s = Permutation::identity(4);
        assert!(s.apply(Transition::push_to_top(5)).is_err());
        assert!(s.apply(Transition::PushToIndex { i: 3, j: 3 }).is_err());
        assert!(s.apply(Transition::PushToBottom { j: 0 }).is_err());
    }

    #[test]
    fn linf_examples() {
        let s = p(&[1, 2, 4, 6, 5, 3]);
        assert_eq!(dist_linf(&s, &s).unwrap(), 0);
        assert_eq!(dist_linf(&s, &p(&[1, 3, 4, 5, 6, 2])).unwrap(), 1);
        let sigma = p(&[11, 1, 8, 6, 7, 2, 12, 13, 3, 5, 9, 14, 4, 10, 15]);
        let tau = p(&[12, 3, 9, 7, 5, 2, 11, 15, 1, 6, 8, 13, 4, 10, 14]);
        assert_eq!(dist_linf(&tau, &sigma).unwrap(), 2);
    }

    #[test]
    fn kendall_examples() {
        let id = Permutation::identity(3);
        assert_eq!(dist_kendall(&id, &id).unwrap(), 0);
        assert_eq!(dist_kendall(&id, &p(&[1, 3, 2])).unwrap(), 1);
        assert_eq!(dist_kendall(&id, &p(&[3, 2, 1])).unwrap(), 3);
        assert_eq!(dist_kendall_fast(&id, &p(&[3, 2, 1])).unwrap(), 3);
    }

    #[test]
    fn parse_and_display() {
        let s: Permutation = "4 1 5 2 6 3".parse().unwrap();
        assert_eq!(s.to_string(), "4 1 5 2 6 3");
        assert!("1 1 2".parse::<Permutation>().is_err());
        assert!("0 1".parse::<Permutation>().is_err());
        assert!("".parse::<Permutation>().is_err());
        assert!("1 x".parse::<Permutation>().is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(all_permutations(1).len(), 1);
        assert_eq!(all_permutations(4).len(), 24);
        let all = all_permutations(5);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }
}
