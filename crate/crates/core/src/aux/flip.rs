//! The flip construction for even orders.
//!
//! Blocks of `k` consecutive codewords are the cyclic shifts of permutations
//! beginning with `[k, 1]`; the reversed, complemented tails of the block
//! representatives run through the complete code of order `k − 2`.
//! Membership: `1` cyclically follows `k` in the vector notation.

use super::{AuxCode, AuxFamily, Body};
use crate::complete::{self, factorial};
use crate::error::{Error, Result};
use crate::perm::Permutation;

pub(super) fn build(k: usize) -> Result<AuxCode> {
    if k < 4 || !k.is_multiple_of(2) {
        return Err(Error::InvalidOrder(format!(
            "flip construction needs an even order ≥ 4, got {k}"
        )));
    }
    let size = factorial(k - 2)?
        .checked_mul(k as u128)
        .ok_or_else(|| Error::Overflow(format!("flip code size for k={k}")))?;
    Ok(AuxCode {
        order: k,
        family: AuxFamily::Flip,
        size,
        body: Body::Flip,
    })
}

// The unshifted sequence starts at [k, 1, 2, ..., k−1] and its last codeword is
// id, so the id-anchored code reads it from index M − 1.
pub(super) fn transition_at(k: usize, size: u128, s: u128) -> usize {
    let s = (s + size - 1) % size;
    if !s.is_multiple_of(k as u128) {
        k
    } else {
        k + 1 - complete::transition_at(k - 2, s / k as u128)
    }
}

pub(super) fn contains(pi: &Permutation) -> bool {
    let k = pi.len();
    let pos = pi.position_of(k);
    pi.image(pos % k + 1) == 1
}

pub(super) fn rank(pi: &Permutation, size: u128) -> Result<u128> {
    if !contains(pi) {
        return Err(Error::NotInCode(pi.to_string()));
    }
    let k = pi.len();
    let a = pi.as_slice();
    let pos = pi.position_of(k);
    let u = if pos >= 2 { pos - 1 } else { k };
    // c = pi rotated left by u, so c starts with [k, 1]
    let c: Vec<u8> = (0..k).map(|i| a[(i + u) % k]).collect();
    let tail: Vec<u8> = (1..=k - 2).map(|q| k as u8 - c[k - q]).collect();
    let r_prime = complete::rank(&tail)?;
    let r = if r_prime >= 1 {
        r_prime
    } else {
        factorial(k - 2)?
    };
    let e = ((r - 1) * k as u128 + u as u128) % size;
    Ok((e + 1) % size)
}

pub(super) fn unrank(k: usize, size: u128, m: u128) -> Result<Permutation> {
    let e = (m + size - 1) % size;
    let v = (e + size - 1) % size;
    let u = (v % k as u128) as usize + 1;
    let r = v / k as u128 + 1;
    let tail = complete::unrank(k - 2, r % factorial(k - 2)?)?;
    let mut c = vec![0u8; k];
    c[0] = k as u8;
    c[1] = 1;
    for q in 1..=k - 2 {
        c[k - q] = k as u8 - tail[q - 1];
    }
    let mut out = vec![0u8; k];
    for i in 0..k {
        out[(i + u) % k] = c[i];
    }
    Ok(Permutation::from_vec_unchecked(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aux::verify_aux;
    use crate::perm::all_permutations;

    fn p(v: &[usize]) -> Permutation {
        Permutation::from_images(v).unwrap()
    }

    #[test]
    fn order_four_listing() {
        let code = build(4).unwrap();
        let expected = vec![
            p(&[1, 2, 3, 4]),
            p(&[4, 1, 2, 3]),
            p(&[2, 4, 1, 3]),
            p(&[3, 2, 4, 1]),
            p(&[1, 3, 2, 4]),
            p(&[4, 1, 3, 2]),
            p(&[3, 4, 1, 2]),
            p(&[2, 3, 4, 1]),
        ];
        assert_eq!(code.materialize(100).unwrap(), expected);
        assert_eq!(code.size(), 8);
        assert!(verify_aux(&code, 100).unwrap().passed());
    }

    #[test]
    fn order_six_size() {
        let code = build(6).unwrap();
        assert_eq!(code.size(), 144);
        assert!(verify_aux(&code, 1000).unwrap().passed());
    }

    #[test]
    fn rejects_odd_and_small() {
        assert!(build(5).is_err());
        assert!(build(2).is_err());
    }

    #[test]
    fn membership_rule_agrees_with_set() {
        for k in [4, 6] {
            let code = build(k).unwrap();
            let words: std::collections::HashSet<_> =
                code.materialize(1000).unwrap().into_iter().collect();
            for pi in all_permutations(k) {
                assert_eq!(contains(&pi), words.contains(&pi), "{pi}");
            }
        }
    }

    #[test]
    fn rank_examples() {
        let code = build(4).unwrap();
        assert_eq!(code.rank(&Permutation::identity(4)).unwrap(), 0);
        assert_eq!(code.rank(&p(&[2, 4, 1, 3])).unwrap(), 2);
        assert!(code.contains(&p(&[2, 4, 1, 3])).unwrap());
        assert!(!code.contains(&p(&[2, 1, 4, 3])).unwrap());
    }

    #[test]
    fn rank_unrank_follow_enumeration() {
        for k in [4, 6, 8] {
            let code = build(k).unwrap();
            for (i, w) in code.gray_code(10_000).unwrap().iter().enumerate() {
                assert_eq!(code.rank(&w).unwrap(), i as u128);
                assert_eq!(code.unrank(i as u128).unwrap(), w);
            }
        }
    }
}
