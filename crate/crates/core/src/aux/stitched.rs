//! The stitched construction for even orders `k = 2m + 2 ≥ 6`.
//!
//! Translates of a parity-preserving code of order `2m + 1` are chained through
//! the frames `π̂_r = φ^r(id)`, `φ = t_{↑k}² ∘ t_{↑2m−1}⁻¹`, with one odd bridge
//! between consecutive blocks. The block through id is replaced by the short
//! `t_{↑2m−1}` cycle `P₀′`, and the whole code is left-translated so it starts at
//! id with a `t_{↑k}` transition.

use std::collections::HashSet;

use super::{AuxCode, AuxFamily, Rule};
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// The frame permutations `π̂_r` and bridges `β_r` for one `m ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiFrame {
    pub m: usize,
    /// `π̂_r` for `r = 0..2m`.
    pub pi_hat: Vec<Permutation>,
    /// `β_r = t_{↑2m+2}⁻¹(π̂_r)` for `r = 1..=2m`, stored at index `r − 1`.
    pub bridges: Vec<Permutation>,
}

impl PhiFrame {
    /// Computes the frame and checks its invariants.
    pub fn new(m: usize) -> Result<PhiFrame> {
        if m < 2 {
            return Err(Error::InvalidParams(format!(
                "stitching needs m ≥ 2, got {m}"
            )));
        }
        let k = 2 * m + 2;
        let mut pi_hat = Vec::with_capacity(2 * m);
        let mut cur = Permutation::identity(k);
        for _ in 0..2 * m {
            pi_hat.push(cur.clone());
            cur = phi(m, &cur);
        }
        let bridges = (1..=2 * m)
            .map(|r| {
                let mut b = pi_hat[r % (2 * m)].clone();
                b.pull_from_top(k);
                b
            })
            .collect();
        let frame = PhiFrame { m, pi_hat, bridges };
        frame.check(&cur)?;
        Ok(frame)
    }

    pub fn order(&self) -> usize {
        2 * self.m + 2
    }

    /// `π̂_r` for any `r ≥ 0`.
    pub fn pi_hat(&self, r: usize) -> &Permutation {
        &self.pi_hat[r % (2 * self.m)]
    }

    /// `π̂_r(2m + 2)`.
    pub fn last_of(&self, r: usize) -> usize {
        let m2 = 2 * self.m;
        if r.is_multiple_of(m2) {
            m2 + 2
        } else {
            m2 + 1 - r % m2
        }
    }

    fn check(&self, wrapped: &Permutation) -> Result<()> {
        let k = self.order();
        let fail = |what: &str| Err(Error::InvalidParams(format!("frame invariant: {what}")));
        if !wrapped.is_identity() {
            return fail("φ^{2m}(id) ≠ id");
        }
        for (r, p) in self.pi_hat.iter().enumerate() {
            if p.image(k) != self.last_of(r) || !p.is_even() {
                return fail("π̂_r last element or sign");
            }
        }
        for b in &self.bridges {
            if b.is_even() || ![1, k - 1].contains(&b.image(k)) {
                return fail("bridge sign or last element");
            }
        }
        Ok(())
    }
}

/// `φ(π) = t_{↑2m+2}(t_{↑2m+2}(t_{↑2m−1}⁻¹ π))`.
fn phi(m: usize, pi: &Permutation) -> Permutation {
    let k = 2 * m + 2;
    let mut x = pi.clone();
    x.pull_from_top(2 * m - 1);
    x.push_to_top(k);
    x.push_to_top(k);
    x
}

/// Structural membership for a stitched code.
#[derive(Clone, Debug)]
pub(super) struct StitchedRule {
    m: usize,
    /// The code is `π̃⁻¹ P`; queries are mapped back by `π̃`.
    pi_tilde: Permutation,
    bridges: HashSet<Permutation>,
    p0: HashSet<Permutation>,
    pi_hat_inv: Vec<Permutation>,
    /// The rotated odd-order code, translated to start at id, in `S_{2m+1}`.
    block: HashSet<Permutation>,
}

impl StitchedRule {
    pub(super) fn contains(&self, sigma: &Permutation) -> bool {
        let k = 2 * self.m + 2;
        let Ok(tau) = self.pi_tilde.compose(sigma) else {
            return false;
        };
        if !tau.is_even() {
            return self.bridges.contains(&tau);
        }
        let last = tau.image(k);
        if last == k {
            return self.p0.contains(&tau);
        }
        if !(2..=2 * self.m).contains(&last) {
            return false;
        }
        let r = 2 * self.m + 1 - last;
        let local = self.pi_hat_inv[r]
            .compose(&tau)
            .and_then(|x| x.truncate(k - 1));
        local.is_ok_and(|x| self.block.contains(&x))
    }
}

/// Stitches translates of the parity-preserving code `odd` (order `k − 1`,
/// using `t_{↑k−3}`) into an auxiliary code of order `k`.
pub fn aux_stitched(k: usize, odd: &AuxCode) -> Result<AuxCode> {
    if k < 6 || !k.is_multiple_of(2) {
        return Err(Error::InvalidOrder(format!(
            "stitched construction needs an even order ≥ 6, got {k}"
        )));
    }
    let m = (k - 2) / 2;
    if odd.order() != k - 1 || !odd.is_parity_preserving() {
        return Err(Error::InvalidParams(format!(
            "stitching order {k} needs a parity-preserving code of order {}",
            k - 1
        )));
    }
    let frame = PhiFrame::new(m)?;
    let g = 2 * m - 1;
    let odd_t: Vec<u8> = odd.gray_code(u128::MAX)?.transitions().to_vec();
    let pos = odd_t.iter().position(|&j| j as usize == g).ok_or_else(|| {
        Error::InvalidParams(format!("the order-{} code never uses t_↑{g}", k - 1))
    })?;
    let mut rotated = odd_t.clone();
    rotated.rotate_left(pos + 1);
    let mb = rotated.len();

    let mut block = HashSet::with_capacity(mb);
    let mut cur = Permutation::identity(k - 1);
    for &j in &rotated {
        block.insert(cur.clone());
        cur.push_to_top(j as usize);
    }

    let kk = k as u8;
    let mut transitions = vec![g as u8; g - 1];
    transitions.extend([kk, kk]);
    for _ in 1..2 * m {
        transitions.extend_from_slice(&rotated[..mb - 1]);
        transitions.extend([kk, kk]);
    }

    // P₀′ is the first 2m − 1 codewords; its last one is π̃.
    let mut p0 = HashSet::new();
    let mut cur = Permutation::identity(k);
    for &j in &transitions[..g - 1] {
        p0.insert(cur.clone());
        cur.push_to_top(j as usize);
    }
    p0.insert(cur.clone());
    let pi_tilde = cur;
    if pi_tilde.image(k) != k {
        return Err(Error::InvalidParams("π̃ must fix the last index".into()));
    }

    transitions.rotate_left(g - 1);
    let code = AuxCode::from_transitions(k, AuxFamily::Stitched, transitions)?;
    let expected = (2 * m - 1) + (2 * m - 1) * mb + 2 * m;
    if code.size() != expected as u128 {
        return Err(Error::InvalidParams(format!(
            "stitched size {} differs from {expected}",
            code.size()
        )));
    }
    let rule = StitchedRule {
        m,
        pi_tilde,
        bridges: frame.bridges.iter().cloned().collect(),
        p0,
        pi_hat_inv: frame.pi_hat.iter().map(Permutation::inverse).collect(),
        block,
    };
    Ok(code.with_rule(Rule::Stitched(Box::new(rule))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aux::{search_parity_preserving, verify_aux, SearchConstraints};
    use crate::perm::all_permutations;
    use std::sync::OnceLock;

    fn p(v: &[usize]) -> Permutation {
        Permutation::from_images(v).unwrap()
    }

    fn five() -> &'static AuxCode {
        static CODE: OnceLock<AuxCode> = OnceLock::new();
        CODE.get_or_init(|| {
            let c = SearchConstraints {
                must_use: vec![3],
                ..Default::default()
            };
            search_parity_preserving(5, 57, &c).unwrap()
        })
    }

    #[test]
    fn frame_for_m2() {
        let f = PhiFrame::new(2).unwrap();
        assert!(f.pi_hat[0].is_identity());
        assert_eq!(f.pi_hat[1], p(&[5, 6, 2, 3, 1, 4]));
        assert_eq!(phi(2, &phi(2, &f.pi_hat[2])), Permutation::identity(6));
        assert_eq!(f.bridges.len(), 4);
        assert!(PhiFrame::new(1).is_err());
    }

    #[test]
    fn frame_invariants_larger_m() {
        for m in 2..=5 {
            let f = PhiFrame::new(m).unwrap();
            for r in 0..2 * m {
                assert_eq!(f.pi_hat(r).image(2 * m + 2), f.last_of(r));
            }
        }
    }

    #[test]
    fn stitched_six() {
        let code = aux_stitched(6, five()).unwrap();
        assert_eq!(code.size(), 178);
        assert_eq!(code.family(), AuxFamily::Stitched);
        assert!(verify_aux(&code, 1000).unwrap().passed());
        let words = code.materialize(1000).unwrap();
        assert_eq!(words.iter().filter(|w| !w.is_even()).count(), 4);
    }

    #[test]
    fn stitched_rule_is_exact() {
        let code = aux_stitched(6, five()).unwrap();
        for pi in all_permutations(6) {
            assert_eq!(
                code.contains(&pi).unwrap(),
                code.contains_by_table(&pi).unwrap(),
                "{pi}"
            );
        }
    }

    #[test]
    fn blocks_are_disjoint_with_constant_last() {
        let code = aux_stitched(6, five()).unwrap();
        let words = code.materialize(1000).unwrap();
        let pi_tilde = p(&[2, 3, 1, 4, 5, 6]);
        let frame = PhiFrame::new(2).unwrap();
        // undo the final translation and rotation
        let mut orig: Vec<Permutation> =
            words.iter().map(|w| pi_tilde.compose(w).unwrap()).collect();
        orig.rotate_right(2);
        assert!(orig[0].is_identity());
        let mut offset = 3;
        for r in 1..4 {
            assert!(!orig[offset].is_even());
            offset += 1;
            assert_eq!(orig[offset], frame.pi_hat[r]);
            for w in &orig[offset..offset + 57] {
                assert!(w.is_even());
                assert_eq!(w.image(6), frame.last_of(r));
            }
            offset += 57;
        }
        assert!(!orig[offset].is_even());
        assert_eq!(offset + 1, 178);
        // P₀′ avoids the partners of the bridges
        for b in &frame.bridges {
            let partner = b.swap_values(b.image(6), 6);
            assert!(!orig[..3].contains(&partner));
        }
    }

    #[test]
    fn rejects_wrong_inputs() {
        assert!(aux_stitched(4, five()).is_err());
        assert!(aux_stitched(8, five()).is_err());
        let flip = crate::aux::aux_flip(4).unwrap();
        assert!(aux_stitched(6, &flip).is_err());
    }
}
