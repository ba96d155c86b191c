//! Bounded-magnitude decoding of received permutations.
//!
//! Windows are decoded left to right. Each window plus the carried index of
//! the displaced element is quantized to its class; the one duplicated value
//! is resolved by asking the level's auxiliary code which of the two candidate
//! local permutations it contains. The innermost window is quantized only.

use std::fmt;

use crate::error::{Error, Result};
use crate::lmrm::LmrmCode;
use crate::perm::Permutation;

/// The nearest integer to `a` congruent to `j` modulo `d`; ties go to the
/// smaller candidate.
pub fn quantize(a: i64, j: usize, d: usize) -> i64 {
    let d = d as i64;
    let r = (a - j as i64).rem_euclid(d);
    if 2 * r <= d {
        a - r
    } else {
        a - r + d
    }
}

/// One resolved window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowStep {
    /// Level (1-based).
    pub level: usize,
    /// Carried index entering the level.
    pub carry: usize,
    /// Quantized values at the carry followed by the window positions.
    pub quantized: Vec<i64>,
    /// The local permutation accepted by the auxiliary code.
    pub local: Permutation,
    /// Carried index leaving the level.
    pub next_carry: usize,
}

/// Decoder output with the per-window trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub word: Permutation,
    pub steps: Vec<WindowStep>,
}

impl fmt::Display for WindowStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q: Vec<String> = self.quantized.iter().map(i64::to_string).collect();
        write!(
            f,
            "level {}: carry {} -> [{}; {}] local [{}] next carry {}",
            self.level,
            self.carry,
            q[0],
            q[1..].join(","),
            self.local,
            self.next_carry
        )
    }
}

fn failure(msg: impl Into<String>) -> Error {
    Error::DecodeFailure(msg.into())
}

/// Decodes `tau`; exact whenever some codeword lies within ℓ∞ distance
/// `⌊(d − 1)/2⌋`. Beyond that radius the output is best effort.
pub fn decode(code: &LmrmCode, tau: &Permutation) -> Result<Permutation> {
    decode_traced(code, tau).map(|d| d.word)
}

/// [`decode`] followed by a membership check of the result.
pub fn decode_verified(code: &LmrmCode, tau: &Permutation) -> Result<Permutation> {
    let word = decode(code, tau)?;
    if !code.contains(&word)? {
        return Err(failure(format!("decoded word [{word}] is not a codeword")));
    }
    Ok(word)
}

/// [`decode`] with the per-window trace.
pub fn decode_traced(code: &LmrmCode, tau: &Permutation) -> Result<Decoded> {
    let n = code.params().n;
    let d = code.params().d;
    if tau.len() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: tau.len(),
        });
    }
    let blocks = code.blocks();
    let levels = code.levels();
    let mut out = vec![0i64; n + 1];
    let mut carry = 1usize;
    let mut steps = Vec::with_capacity(levels - 1);

    for (j, block) in blocks[..levels - 1].iter().enumerate() {
        let k = block.len();
        let width = k + 1;
        // local position 1 is the carry, 2..=width the window
        let positions: Vec<usize> = std::iter::once(carry)
            .chain((2..=width).map(|q| block.start + q - 1))
            .collect();
        let quantized: Vec<i64> = positions
            .iter()
            .map(|&i| quantize(tau.image(i) as i64, block.residue, d))
            .collect();
        let label = |v: i64| -> Option<u8> {
            block
                .values
                .iter()
                .position(|&x| x as i64 == v)
                .map(|q| q as u8 + 1)
        };
        let mut local = vec![0u8; width];
        let mut first_at = vec![None::<usize>; k + 1];
        let mut foreign = Vec::new();
        let mut dup = None;
        for (q, &v) in quantized.iter().enumerate() {
            match label(v) {
                None => foreign.push(q),
                Some(l) => {
                    local[q] = l;
                    if let Some(s) = first_at[l as usize] {
                        if dup.is_some() {
                            return Err(failure(format!("level {}: several duplicates", j + 1)));
                        }
                        dup = Some((s, q));
                    } else {
                        first_at[l as usize] = Some(q);
                    }
                }
            }
        }
        let aux = code.aux(j + 1);
        let chosen = match (dup, foreign.as_slice()) {
            // the displaced element quantized to a class value: try both
            (Some((s, t)), []) => {
                let a = local[s];
                local[t] = width as u8;
                let at_t = aux.contains(&Permutation::from_images(&local)?)?;
                local[t] = a;
                local[s] = width as u8;
                let at_s = aux.contains(&Permutation::from_images(&local)?)?;
                match (at_t, at_s) {
                    (true, false) => {
                        local[s] = a;
                        local[t] = width as u8;
                        t
                    }
                    (false, true) => s,
                    _ => {
                        return Err(failure(format!(
                            "level {}: {} duplicate resolutions are valid",
                            j + 1,
                            if at_t { "both" } else { "no" }
                        )))
                    }
                }
            }
            // it quantized outside the class, so its position is known
            (None, [q]) => {
                local[*q] = width as u8;
                if !aux.contains(&Permutation::from_images(&local)?)? {
                    return Err(failure(format!(
                        "level {}: window is not in the aux code",
                        j + 1
                    )));
                }
                *q
            }
            _ => {
                return Err(failure(format!(
                    "level {}: expected exactly one displaced element",
                    j + 1
                )))
            }
        };
        for (q, &i) in positions.iter().enumerate() {
            if q != chosen {
                out[i] = quantized[q];
            }
        }
        let next_carry = positions[chosen];
        steps.push(WindowStep {
            level: j + 1,
            carry,
            quantized,
            local: Permutation::from_images(&local)?,
            next_carry,
        });
        carry = next_carry;
    }

    // innermost block and fixed tail: quantization alone
    let base = &blocks[levels - 1];
    out[carry] = quantize(tau.image(carry) as i64, base.residue, d);
    let sigma0 = code.sigma0();
    for (i, slot) in out.iter_mut().enumerate().skip(base.start + 1) {
        let residue = if i < base.start + base.len() {
            base.residue
        } else {
            (sigma0.image(i) - 1) % d + 1
        };
        *slot = quantize(tau.image(i) as i64, residue, d);
    }
    let word = Permutation::from_images(&out[1..])
        .map_err(|_| failure("quantized values do not form a permutation"))?;
    Ok(Decoded { word, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aux::AuxCatalog;
    use crate::lmrm::{construct, CodeParams};
    use crate::perm::dist_linf;

    fn p(v: &[usize]) -> Permutation {
        Permutation::from_images(v).unwrap()
    }

    fn build(n: usize, d: usize) -> LmrmCode {
        construct(CodeParams::new(n, d).unwrap(), &AuxCatalog::new()).unwrap()
    }

    #[test]
    fn quantize_examples() {
        assert_eq!(quantize(3, 1, 3), 4);
        assert_eq!(quantize(4, 2, 4), 2);
        for d in 2..7 {
            for j in 1..=d {
                for b in (j as i64..40).step_by(d) {
                    assert_eq!(quantize(b, j, d), b);
                }
            }
        }
        assert_eq!(quantize(0, 3, 3), 0);
        assert_eq!(quantize(-1, 1, 3), -2);
    }

    #[test]
    fn first_worked_example() {
        let code = build(6, 3);
        let sigma = p(&[1, 2, 4, 6, 5, 3]);
        let tau = p(&[1, 3, 4, 5, 6, 2]);
        let out = decode_traced(&code, &tau).unwrap();
        assert_eq!(out.word, sigma);
        assert_eq!(out.steps[0].quantized, vec![1, 4, 4]);
        assert_eq!(out.steps[0].local, p(&[2, 3, 1]));
        assert_eq!(out.steps[0].next_carry, 2);
        assert_eq!(out.steps[1].quantized, vec![2, 5, 5]);
        assert_eq!(out.steps[1].next_carry, 4);
    }

    #[test]
    fn second_worked_example() {
        let code = build(15, 5);
        let sigma = p(&[11, 1, 8, 6, 7, 2, 12, 13, 3, 5, 9, 14, 4, 10, 15]);
        let tau = p(&[12, 3, 9, 7, 5, 2, 11, 15, 1, 6, 8, 13, 4, 10, 14]);
        assert_eq!(dist_linf(&sigma, &tau).unwrap(), 2);
        assert!(code.contains(&sigma).unwrap());
        let out = decode_traced(&code, &tau).unwrap();
        assert_eq!(out.word, sigma);
        let carries: Vec<usize> = out.steps.iter().map(|s| s.next_carry).collect();
        assert_eq!(carries, vec![3, 3, 10, 10]);
        assert_eq!(out.steps[0].quantized, vec![11, 1, 11, 6]);
        assert_eq!(out.steps[0].local, p(&[2, 3, 4, 1]));
        assert_eq!(out.steps[2].local, p(&[1, 2, 3, 4]));
    }

    #[test]
    fn parents_of_second_example() {
        let code = build(15, 5);
        let sigma = p(&[11, 1, 8, 6, 7, 2, 12, 13, 3, 5, 9, 14, 4, 10, 15]);
        let s = code.rank(&sigma).unwrap();
        let parents = [
            (5, p(&[6, 11, 1, 7, 12, 2, 8, 13, 3, 9, 14, 4, 5, 10, 15])),
            (4, p(&[6, 11, 1, 7, 12, 2, 8, 13, 3, 5, 9, 14, 4, 10, 15])),
            (3, p(&[6, 11, 1, 7, 12, 2, 8, 13, 3, 5, 9, 14, 4, 10, 15])),
            (2, p(&[6, 11, 1, 8, 7, 2, 12, 13, 3, 5, 9, 14, 4, 10, 15])),
        ];
        for (m, expected) in parents {
            let mut idx = s;
            for level in 1..m {
                idx = code.parent_index(level, idx);
            }
            assert_eq!(
                code.tier_codeword(m, idx).unwrap(),
                expected,
                "C_{m} parent"
            );
        }
    }

    #[test]
    fn noiseless_words_decode_to_themselves() {
        for (n, d) in [(6, 3), (8, 4), (7, 3), (5, 3), (9, 2)] {
            let code = build(n, d);
            for w in code.iter() {
                assert_eq!(decode(&code, &w).unwrap(), w);
            }
        }
    }

    #[test]
    fn exhaustive_radius_one_for_six_three() {
        let code = build(6, 3);
        let all = crate::perm::all_permutations(6);
        for w in code.iter() {
            for tau in all.iter().filter(|t| dist_linf(t, &w).unwrap() <= 1) {
                assert_eq!(decode(&code, tau).unwrap(), w, "{w} <- {tau}");
            }
        }
    }

    #[test]
    fn general_length_within_radius() {
        let all = crate::perm::all_permutations(7);
        for d in [3, 4, 5] {
            let code = build(7, d);
            let t = code.params().radius();
            for w in code.iter() {
                for tau in all.iter().filter(|x| dist_linf(x, &w).unwrap() <= t) {
                    assert_eq!(decode(&code, tau).unwrap(), w, "d={d} {w} <- {tau}");
                }
            }
        }
    }

    #[test]
    fn far_words_fail_or_miss() {
        let code = build(6, 3);
        let tau = p(&[6, 5, 4, 3, 2, 1]);
        if let Ok(w) = decode_verified(&code, &tau) {
            assert!(code.contains(&w).unwrap());
        }
        assert!(decode(&code, &Permutation::identity(5)).is_err());
    }
}
