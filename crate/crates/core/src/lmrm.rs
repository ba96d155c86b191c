//! Error-correcting push-to-the-top Gray codes under the ℓ∞ metric.
//!
//! `[n]` is split into the congruence classes `R_i` modulo `d`; the starting
//! permutation `σ₀` lists the classes block by block. The innermost block is
//! permuted by a complete code, and every outer block `m` is interleaved via an
//! auxiliary code of order `|R_m| + 1` acting on the block plus the element to
//! its right. Codewords are produced lazily from their index; ranking inverts
//! the mixed-radix structure level by level.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::aux::{AuxCatalog, AuxCode};
use crate::complete::{self, factorial};
use crate::error::{Error, Result};
use crate::gray::{check_sequence, GrayCode};
use crate::perm::{dist_linf, Permutation, MAX_ORDER};

/// Default cap on materialized codewords.
pub const DEFAULT_LIMIT: u128 = 1_000_000;

/// Parameters of a code: length `n`, minimum distance `d`, and the aux family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CodeParams {
    pub n: usize,
    pub d: usize,
    /// Prefer auxiliary codes with structural ranking (flip for even orders).
    pub rankable: bool,
    /// Move an odd-sized class to the innermost block when possible.
    pub odd_last: bool,
}

impl CodeParams {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if d < 2 || d > n || n > MAX_ORDER {
            return Err(Error::InvalidParams(format!(
                "need 2 ≤ d ≤ n ≤ {MAX_ORDER}, got n={n}, d={d}"
            )));
        }
        Ok(CodeParams {
            n,
            d,
            rankable: false,
            odd_last: false,
        })
    }

    pub fn rankable(mut self, on: bool) -> Self {
        self.rankable = on;
        self
    }

    pub fn odd_last(mut self, on: bool) -> Self {
        self.odd_last = on;
        self
    }

    /// Guaranteed ℓ∞ correction radius `⌊(d − 1)/2⌋`.
    pub fn radius(&self) -> usize {
        (self.d - 1) / 2
    }

    /// Number of levels carrying permutations (the innermost one included).
    pub fn levels(&self) -> usize {
        if self.n >= 2 * self.d {
            self.d
        } else {
            self.n - self.d + 1
        }
    }
}

/// One block of `σ₀`: a congruence class placed at consecutive positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    /// The class residue `i` (values `≡ i mod d`, `1 ≤ i ≤ d`).
    pub residue: usize,
    /// First position (1-based).
    pub start: usize,
    /// Values in `σ₀` order; the local label of `values[q]` is `q + 1`.
    pub values: Vec<u8>,
}

impl Block {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Class `R_i` in `σ₀` order: `i + d, i + 2d, …, i`.
fn class_values(n: usize, d: usize, i: usize) -> Vec<u8> {
    let mut v: Vec<u8> = (i + d..=n).step_by(d).map(|x| x as u8).collect();
    v.push(i as u8);
    v
}

/// The blocks of `σ₀` in position order.
pub fn class_layout(params: &CodeParams) -> Vec<Block> {
    let (n, d) = (params.n, params.d);
    let mut residues: Vec<usize> = (1..=d).collect();
    if params.odd_last && n >= 2 * d {
        let size = |i: usize| (n - i) / d + 1;
        if size(d) % 2 == 0 {
            if let Some(pos) = residues.iter().rposition(|&i| size(i) % 2 == 1) {
                let r = residues.remove(pos);
                residues.push(r);
            }
        }
    }
    let mut start = 1;
    residues
        .into_iter()
        .map(|i| {
            let values = class_values(n, d, i);
            let b = Block {
                residue: i,
                start,
                values,
            };
            start += b.len();
            b
        })
        .collect()
}

/// The starting codeword `σ₀`.
pub fn sigma0(params: &CodeParams) -> Permutation {
    let image: Vec<u8> = class_layout(params)
        .into_iter()
        .flat_map(|b| b.values)
        .collect();
    Permutation::from_vec_unchecked(image)
}

#[derive(Clone, Debug)]
struct Level {
    aux: Arc<AuxCode>,
    m: u128,
}

/// A constructed code with lazy enumeration, ranking and unranking.
#[derive(Clone, Debug)]
pub struct LmrmCode {
    params: CodeParams,
    blocks: Vec<Block>,
    sigma0: Permutation,
    levels: Vec<Level>,
    /// Size of the innermost code (`|R_B|!`, or 1 for a singleton).
    base_size: u128,
    /// `tier_sizes[m − 1] = |C_m|`.
    tier_sizes: Vec<u128>,
    /// `(block index, local label)` of every value, indexed by value.
    labels: Vec<(u8, u8)>,
}

/// Builds the code for `params` with auxiliary codes from `catalog`.
pub fn construct(params: CodeParams, catalog: &AuxCatalog) -> Result<LmrmCode> {
    let blocks = class_layout(&params);
    let b = params.levels();
    let mut levels = Vec::with_capacity(b - 1);
    for block in &blocks[..b - 1] {
        let aux = catalog.get(block.len() + 1, params.rankable)?;
        let m = aux.size();
        levels.push(Level { aux, m });
    }
    let base_size = factorial(blocks[b - 1].len())?;
    let mut tier_sizes = vec![0u128; b];
    tier_sizes[b - 1] = base_size;
    for m in (0..b - 1).rev() {
        tier_sizes[m] = tier_sizes[m + 1].checked_mul(levels[m].m).ok_or_else(|| {
            Error::Overflow(format!("code size for n={}, d={}", params.n, params.d))
        })?;
    }
    let mut labels = vec![(0u8, 0u8); params.n + 1];
    for (bi, block) in blocks.iter().enumerate() {
        for (q, &v) in block.values.iter().enumerate() {
            labels[v as usize] = (bi as u8, q as u8 + 1);
        }
    }
    Ok(LmrmCode {
        params,
        sigma0: sigma0(&params),
        blocks,
        levels,
        base_size,
        tier_sizes,
        labels,
    })
}

/// Exact code size, from the auxiliary code sizes of `catalog`.
pub fn size_formula(params: &CodeParams, catalog: &AuxCatalog) -> Result<u128> {
    let blocks = class_layout(params);
    let b = params.levels();
    let mut size = factorial(blocks[b - 1].len())?;
    for block in &blocks[..b - 1] {
        size = size
            .checked_mul(catalog.get(block.len() + 1, params.rankable)?.size())
            .ok_or_else(|| Error::Overflow("code size".into()))?;
    }
    Ok(size)
}

/// The stitched-code density `ρ_k = M̃_k / (k!/2)` for even `k ≥ 6`.
fn rho(k: usize) -> f64 {
    let half = ln_factorial(k) - std::f64::consts::LN_2;
    let m = if k == 6 {
        178f64.ln()
    } else {
        // (k − 3)((k − 1)!/2 + 2) + 1
        let inner = (ln_factorial(k - 1) - std::f64::consts::LN_2).exp() + 2.0;
        ((k - 3) as f64 * inner + 1.0).ln()
    };
    (m - half).exp()
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

/// The closed-form size cases of the non-rankable construction, evaluated in
/// floating point with exact stitched densities. Used to cross-check
/// [`size_formula`].
pub fn size_closed_form(n: usize, d: usize) -> Result<f64> {
    if d < 2 || d > n {
        return Err(Error::InvalidParams(format!(
            "need 2 ≤ d ≤ n, got n={n}, d={d}"
        )));
    }
    let r = (n % d) as i32;
    let f = n / d;
    let c = n.div_ceil(d);
    let d_i = d as i32;
    let pow2 = 2f64.powi(d_i - 1);
    let fact = |k: usize| ln_factorial(k).exp();
    Ok(match f {
        1 => 3f64.powi(r),
        2 => (8.0f64 / 3.0).powi(r) * 3f64.powi(d_i - 1) * 2.0,
        3 => (57.0f64 / 8.0).powi(r) * 8f64.powi(d_i) * 0.75,
        4 => (178.0f64 / 57.0).powi(r) * 57f64.powi(d_i - 1) * 24.0,
        5 => (1260.0f64 / 89.0).powi(r) * 178f64.powi(d_i) * (120.0 / 178.0),
        _ if f.is_multiple_of(2) => {
            let rho_c = if r > 0 { rho(c + 1) } else { 1.0 };
            ((c + 1) as f64).powi(r) * fact(f + 1).powi(d_i) * rho_c.powi(r)
                / (pow2 * (f + 1) as f64)
        }
        _ => {
            ((c + 1) as f64).powi(r) * fact(f + 1).powi(d_i) * rho(f + 1).powi(d_i - 1 - r)
                / (pow2 * (f + 1) as f64)
        }
    })
}

impl LmrmCode {
    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn sigma0(&self) -> &Permutation {
        &self.sigma0
    }

    pub fn size(&self) -> u128 {
        self.tier_sizes[0]
    }

    /// Number of levels, the innermost included.
    pub fn levels(&self) -> usize {
        self.tier_sizes.len()
    }

    /// `|C_m|` for `1 ≤ m ≤ levels()`.
    pub fn tier_size(&self, m: usize) -> u128 {
        self.tier_sizes[m - 1]
    }

    /// The auxiliary code of level `m < levels()`.
    pub fn aux(&self, m: usize) -> &AuxCode {
        &self.levels[m - 1].aux
    }

    /// Block lengths of the per-level expansions: `M̃` for each outer level
    /// and the innermost code size last.
    pub fn tier_markers(&self) -> Vec<u128> {
        self.levels
            .iter()
            .map(|l| l.m)
            .chain([self.base_size])
            .collect()
    }

    /// Push index of the transition leaving codeword `s`.
    pub fn transition_at(&self, mut s: u128) -> usize {
        for (lvl, block) in self.levels.iter().zip(&self.blocks) {
            let a = s % lvl.m;
            if a != 0 {
                return block.start - 1 + lvl.aux.transition_at(a);
            }
            s /= lvl.m;
        }
        let base = &self.blocks[self.levels.len()];
        if base.len() >= 2 {
            base.start - 1 + complete::transition_at(base.len(), s)
        } else {
            base.start
        }
    }

    /// Lazy iterator over the codewords in order.
    pub fn iter(&self) -> LmrmIter<'_> {
        LmrmIter {
            code: self,
            cur: self.sigma0.clone(),
            step: 0,
        }
    }

    /// The generating sequence, guarded by `limit` codewords.
    pub fn gray_code(&self, limit: u128) -> Result<GrayCode> {
        self.check_limit(limit)?;
        let transitions = if self.size() == 1 {
            Vec::new()
        } else {
            (0..self.size())
                .map(|s| self.transition_at(s) as u8)
                .collect()
        };
        GrayCode::new(self.sigma0.clone(), transitions)
    }

    /// All codewords in order, guarded by `limit`.
    pub fn materialize(&self, limit: u128) -> Result<Vec<Permutation>> {
        self.check_limit(limit)?;
        Ok(self.iter().collect())
    }

    fn check_limit(&self, limit: u128) -> Result<()> {
        if self.size() > limit {
            return Err(Error::TooLarge {
                size: self.size(),
                limit,
            });
        }
        Ok(())
    }

    fn check_dim(&self, sigma: &Permutation) -> Result<()> {
        if sigma.len() != self.params.n {
            return Err(Error::DimensionMismatch {
                left: self.params.n,
                right: sigma.len(),
            });
        }
        Ok(())
    }

    /// Local permutation of the block window `start+1 ..= start+len` (plus the
    /// inferred first entry); values outside block `bi` get label `len + 1`
    /// when `foreign` is set.
    fn window(
        &self,
        sigma: &Permutation,
        bi: usize,
        width: usize,
        foreign: bool,
    ) -> Result<Vec<u8>> {
        let block = &self.blocks[bi];
        let not_in_code = || Error::NotInCode(sigma.to_string());
        let mut local = vec![0u8; width];
        let mut seen = vec![false; width + 1];
        for q in 2..=width {
            let v = sigma.image(block.start + q - 1);
            let (b, l) = self.labels[v];
            let label = if b as usize == bi {
                l as usize
            } else if foreign {
                width
            } else {
                return Err(not_in_code());
            };
            if seen[label] {
                return Err(not_in_code());
            }
            seen[label] = true;
            local[q - 1] = label as u8;
        }
        local[0] = (1..=width).find(|&l| !seen[l]).ok_or_else(not_in_code)? as u8;
        Ok(local)
    }

    /// Candidate index from the block structure; exact for codewords.
    fn rank_unchecked(&self, sigma: &Permutation) -> Result<u128> {
        self.check_dim(sigma)?;
        let b = self.levels.len();
        let base = &self.blocks[b];
        let tail = base.start + base.len();
        if sigma.as_slice()[tail - 1..] != self.sigma0.as_slice()[tail - 1..] {
            return Err(Error::NotInCode(sigma.to_string()));
        }
        let mut s = if base.len() >= 2 {
            let local = self.window(sigma, b, base.len(), false)?;
            complete::rank(&local)?
        } else {
            0
        };
        for m in (0..b).rev() {
            let width = self.blocks[m].len() + 1;
            let local = Permutation::from_vec_unchecked(self.window(sigma, m, width, true)?);
            let mm = self.levels[m].m;
            let a = self.levels[m].aux.rank(&local)?;
            let tier = self.tier_sizes[m];
            s = (s * mm + tier - (mm - a) % mm) % tier;
        }
        Ok(s)
    }

    /// 0-based index of `sigma` in enumeration order.
    pub fn rank(&self, sigma: &Permutation) -> Result<u128> {
        let s = self.rank_unchecked(sigma)?;
        if &self.unrank(s)? != sigma {
            return Err(Error::NotInCode(sigma.to_string()));
        }
        Ok(s)
    }

    /// The codeword with index `s`.
    pub fn unrank(&self, s: u128) -> Result<Permutation> {
        if s >= self.size() {
            return Err(Error::RankOutOfRange {
                rank: s,
                size: self.size(),
            });
        }
        let b = self.levels.len();
        let mut digits = Vec::with_capacity(b);
        let mut s = s;
        for (m, lvl) in self.levels.iter().enumerate() {
            digits.push(s % lvl.m);
            s = s.div_ceil(lvl.m) % self.tier_sizes[m + 1];
        }
        let mut out = self.sigma0.as_slice().to_vec();
        let base = &self.blocks[b];
        if base.len() >= 2 {
            let local = complete::unrank(base.len(), s)?;
            for (q, &l) in local.iter().enumerate() {
                out[base.start - 1 + q] = base.values[l as usize - 1];
            }
        }
        let mut x = out[base.start - 1];
        for m in (0..b).rev() {
            let block = &self.blocks[m];
            let width = block.len() + 1;
            let w = self.levels[m].aux.unrank(digits[m])?;
            for q in 1..=width {
                let l = w.image(q);
                out[block.start + q - 2] = if l == width { x } else { block.values[l - 1] };
            }
            x = out[block.start - 1];
        }
        Ok(Permutation::from_vec_unchecked(out))
    }

    /// Exact membership.
    pub fn contains(&self, sigma: &Permutation) -> Result<bool> {
        self.check_dim(sigma)?;
        Ok(self.rank(sigma).is_ok())
    }

    /// Codeword `p` of the intermediate code `C_m`, which appears in the final
    /// code at index `p · |C_1| / |C_m|`.
    pub fn tier_codeword(&self, m: usize, p: u128) -> Result<Permutation> {
        if m == 0 || m > self.levels() {
            return Err(Error::IndexOutOfBounds {
                n: self.levels(),
                detail: format!("tier {m}"),
            });
        }
        if p >= self.tier_size(m) {
            return Err(Error::RankOutOfRange {
                rank: p,
                size: self.tier_size(m),
            });
        }
        self.unrank(p * (self.size() / self.tier_size(m)))
    }

    /// Index in `C_{m+1}` of the parent of codeword `s` of `C_m`.
    pub fn parent_index(&self, m: usize, s: u128) -> u128 {
        let mm = self.levels[m - 1].m;
        s.div_ceil(mm) % self.tier_sizes[m]
    }
}

/// Streaming enumeration of an [`LmrmCode`].
#[derive(Clone, Debug)]
pub struct LmrmIter<'a> {
    code: &'a LmrmCode,
    cur: Permutation,
    step: u128,
}

impl Iterator for LmrmIter<'_> {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.step >= self.code.size() {
            return None;
        }
        let out = self.cur.clone();
        if self.code.size() > 1 {
            self.cur.push_to_top(self.code.transition_at(self.step));
        }
        self.step += 1;
        Some(out)
    }
}

/// Outcome of [`verify_lmrm`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LmrmReport {
    pub n: usize,
    pub d: usize,
    pub size: usize,
    pub gray_failure: Option<String>,
    /// Smallest pairwise ℓ∞ distance, when checked.
    pub min_distance: Option<usize>,
    /// First pair `(i, j)`, `i < j`, closer than `d`.
    pub violation: Option<(usize, usize)>,
}

impl LmrmReport {
    pub fn passed(&self) -> bool {
        self.gray_failure.is_none() && self.violation.is_none()
    }
}

impl fmt::Display for LmrmReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "code n={} d={} M={}: {}",
            self.n,
            self.d,
            self.size,
            if self.passed() { "pass" } else { "FAIL" }
        )?;
        if let Some(g) = &self.gray_failure {
            write!(f, "; {g}")?;
        }
        if let Some(m) = self.min_distance {
            write!(f, "; min distance {m}")?;
        }
        if let Some((i, j)) = self.violation {
            write!(f, "; codewords {i} and {j} are closer than {}", self.d)?;
        }
        Ok(())
    }
}

/// Checks the Gray/cyclic/distinct properties of `words` and, with
/// `check_distance`, that all pairs are at ℓ∞ distance at least `d`.
pub fn verify_words(words: &[Permutation], d: usize, check_distance: bool) -> LmrmReport {
    let n = words.first().map_or(0, Permutation::len);
    let gray_failure = if words.iter().any(|w| w.len() != n) {
        Some("codewords of different lengths".to_string())
    } else {
        check_sequence(words).err()
    };
    let (min_distance, violation) = if check_distance && gray_failure.is_none() {
        min_distance(words, d)
    } else {
        (None, None)
    };
    LmrmReport {
        n,
        d,
        size: words.len(),
        gray_failure,
        min_distance,
        violation,
    }
}

/// Brute-force pairwise minimum distance and the first pair below `d`.
fn min_distance(words: &[Permutation], d: usize) -> (Option<usize>, Option<(usize, usize)>) {
    let per_row: Vec<(usize, Option<usize>)> = (0..words.len())
        .into_par_iter()
        .map(|i| {
            let mut best = usize::MAX;
            let mut first = None;
            for j in i + 1..words.len() {
                let dist = dist_linf(&words[i], &words[j]).unwrap_or(0);
                best = best.min(dist);
                if dist < d && first.is_none() {
                    first = Some(j);
                }
            }
            (best, first)
        })
        .collect();
    let min = per_row
        .iter()
        .map(|r| r.0)
        .min()
        .filter(|&m| m != usize::MAX);
    let violation = per_row
        .iter()
        .enumerate()
        .find_map(|(i, r)| r.1.map(|j| (i, j)));
    (min, violation)
}

/// Materializes `code` and verifies it.
pub fn verify_lmrm(code: &LmrmCode, check_distance: bool, limit: u128) -> Result<LmrmReport> {
    let words = code.materialize(limit)?;
    Ok(verify_words(&words, code.params().d, check_distance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn p(v: &[usize]) -> Permutation {
        Permutation::from_images(v).unwrap()
    }

    fn build(n: usize, d: usize) -> LmrmCode {
        construct(CodeParams::new(n, d).unwrap(), &AuxCatalog::new()).unwrap()
    }

    fn golden_6_3() -> Vec<Permutation> {
        [
            [4, 1, 5, 2, 6, 3],
            [3, 4, 1, 5, 2, 6],
            [1, 3, 4, 5, 2, 6],
            [4, 1, 3, 5, 2, 6],
            [2, 4, 1, 3, 5, 6],
            [1, 2, 4, 3, 5, 6],
            [4, 1, 2, 3, 5, 6],
            [5, 4, 1, 2, 3, 6],
            [1, 5, 4, 2, 3, 6],
            [4, 1, 5, 2, 3, 6],
            [6, 4, 1, 5, 2, 3],
            [1, 6, 4, 5, 2, 3],
            [4, 1, 6, 5, 2, 3],
            [2, 4, 1, 6, 5, 3],
            [1, 2, 4, 6, 5, 3],
            [4, 1, 2, 6, 5, 3],
            [5, 4, 1, 2, 6, 3],
            [1, 5, 4, 2, 6, 3],
        ]
        .iter()
        .map(|v| p(v))
        .collect()
    }

    #[test]
    fn sigma0_examples() {
        assert_eq!(
            sigma0(&CodeParams::new(6, 3).unwrap()),
            p(&[4, 1, 5, 2, 6, 3])
        );
        assert!(sigma0(&CodeParams::new(4, 4).unwrap()).is_identity());
        let s = sigma0(&CodeParams::new(15, 5).unwrap());
        assert_eq!(s.image(1), 6);
        assert_eq!(s.image(4), 7);
        assert_eq!(&s.as_slice()[..6], &[6, 11, 1, 7, 12, 2]);
    }

    #[test]
    fn sigma0_matches_closed_form_when_d_divides_n() {
        for (n, d) in [(6, 3), (8, 4), (12, 4), (12, 3), (15, 5), (10, 2)] {
            let k = n / d;
            let s = sigma0(&CodeParams::new(n, d).unwrap());
            for j in 1..=n {
                assert_eq!(s.image(j), d * (j % k) + j.div_ceil(k));
            }
        }
    }

    #[test]
    fn classes_partition() {
        for n in 2..=14 {
            for d in 2..=n {
                let blocks = class_layout(&CodeParams::new(n, d).unwrap());
                let mut all: Vec<u8> = blocks.iter().flat_map(|b| b.values.clone()).collect();
                all.sort();
                assert_eq!(all, (1..=n as u8).collect::<Vec<_>>());
                for b in &blocks {
                    let expected = if b.residue <= n % d {
                        n.div_ceil(d)
                    } else {
                        n / d
                    };
                    assert_eq!(b.len(), expected);
                    assert!(b
                        .values
                        .iter()
                        .all(|&v| (v as usize - b.residue).is_multiple_of(d)));
                }
            }
        }
    }

    #[test]
    fn golden_six_three() {
        let code = build(6, 3);
        assert_eq!(code.size(), 18);
        assert_eq!(code.materialize(100).unwrap(), golden_6_3());
        let report = verify_lmrm(&code, true, 100).unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(report.min_distance, Some(3));
    }

    #[test]
    fn innermost_tier() {
        let code = build(6, 3);
        assert_eq!(code.tier_size(3), 2);
        assert_eq!(code.tier_codeword(3, 0).unwrap(), p(&[4, 1, 5, 2, 6, 3]));
        assert_eq!(code.tier_codeword(3, 1).unwrap(), p(&[4, 1, 5, 2, 3, 6]));
        assert_eq!(code.tier_markers(), vec![3, 3, 2]);
    }

    #[test]
    fn tiers_are_nested() {
        for (n, d) in [(6, 3), (8, 4)] {
            let code = build(n, d);
            let mut prev: Option<HashSet<Permutation>> = None;
            for m in (1..=code.levels()).rev() {
                let tier: HashSet<_> = (0..code.tier_size(m))
                    .map(|q| code.tier_codeword(m, q).unwrap())
                    .collect();
                if let Some(inner) = &prev {
                    assert!(inner.is_subset(&tier));
                }
                prev = Some(tier);
            }
        }
    }

    #[test]
    fn parents_agree_on_suffix() {
        let code = build(6, 3);
        for m in 1..code.levels() {
            let shift = code.size() / code.tier_size(m);
            for s in 0..code.tier_size(m) {
                let w = code.unrank(s * shift).unwrap();
                let parent = code.tier_codeword(m + 1, code.parent_index(m, s)).unwrap();
                let from = code.blocks()[m].start;
                assert_eq!(
                    w.as_slice()[from..],
                    parent.as_slice()[from..],
                    "m={m} s={s}"
                );
            }
        }
    }

    #[test]
    fn rank_examples() {
        let code = build(6, 3);
        assert_eq!(code.rank(&p(&[1, 2, 4, 6, 5, 3])).unwrap(), 14);
        assert_eq!(code.unrank(4).unwrap(), p(&[2, 4, 1, 3, 5, 6]));
        assert_eq!(code.unrank(3).unwrap(), p(&[4, 1, 3, 5, 2, 6]));
        assert!(matches!(
            code.rank(&p(&[1, 2, 3, 4, 5, 6])),
            Err(Error::NotInCode(_))
        ));
        assert!(matches!(code.unrank(18), Err(Error::RankOutOfRange { .. })));
    }

    #[test]
    fn rank_follows_enumeration() {
        for (n, d) in [
            (6, 3),
            (8, 4),
            (5, 3),
            (7, 2),
            (9, 4),
            (10, 3),
            (4, 2),
            (5, 5),
            (7, 4),
        ] {
            for rankable in [false, true] {
                let params = CodeParams::new(n, d).unwrap().rankable(rankable);
                let code = construct(params, &AuxCatalog::new()).unwrap();
                for (i, w) in code.iter().enumerate() {
                    assert_eq!(code.rank(&w).unwrap(), i as u128, "({n},{d}) {w}");
                    assert_eq!(code.unrank(i as u128).unwrap(), w);
                }
            }
        }
    }

    #[test]
    fn small_length_sizes() {
        assert_eq!(build(5, 3).size(), 9);
        assert_eq!(build(5, 5).size(), 1);
        assert_eq!(
            build(5, 5).materialize(10).unwrap(),
            vec![Permutation::identity(5)]
        );
        assert_eq!(build(12, 4).size(), 3072);
    }

    #[test]
    fn codes_meet_distance() {
        for (n, d) in [(8, 4), (5, 3), (7, 3), (7, 2), (9, 3), (8, 5)] {
            let report = verify_lmrm(&build(n, d), true, 100_000).unwrap();
            assert!(report.passed(), "{report}");
            assert!(report.min_distance.unwrap() >= d);
        }
    }

    #[test]
    fn perturbed_code_fails() {
        let mut words = build(6, 3).materialize(100).unwrap();
        words[5] = words[5].swap_positions(1, 2);
        assert!(!verify_words(&words, 3, true).passed());
        let mut words = build(6, 3).materialize(100).unwrap();
        words[7] = words[2].clone();
        assert!(!verify_words(&words, 3, true).passed());
    }

    #[test]
    fn odd_last_moves_odd_class_inward() {
        let params = CodeParams::new(11, 2).unwrap().odd_last(true);
        let blocks = class_layout(&params);
        assert_eq!(blocks.last().unwrap().len(), 5);
        let params = CodeParams::new(9, 2).unwrap().odd_last(true);
        let blocks = class_layout(&params);
        assert_eq!(blocks.last().unwrap().len(), 5);
        assert_eq!(blocks.last().unwrap().residue, 1);
        let code = construct(params, &AuxCatalog::new()).unwrap();
        assert!(verify_lmrm(&code, true, 100_000).unwrap().passed());
    }

    #[test]
    fn closed_form_matches_exact_sizes() {
        let cat = AuxCatalog::new();
        for n in 3..=12 {
            for d in 2..n {
                let Ok(exact) = size_formula(&CodeParams::new(n, d).unwrap(), &cat) else {
                    continue;
                };
                let approx = size_closed_form(n, d).unwrap();
                assert!(
                    ((exact as f64) - approx).abs() <= 1e-9 * approx,
                    "({n},{d})"
                );
            }
        }
    }

    #[test]
    fn rejects_bad_params() {
        assert!(CodeParams::new(5, 1).is_err());
        assert!(CodeParams::new(3, 4).is_err());
    }
}
