//! Kendall-τ snakes in `S_{2m+2}`: push-to-the-top Gray codes in which no two
//! codewords differ by one adjacent transposition.
//!
//! A parity-preserving cycle on `A_{2m+1}` minus one `t_{↑2m−1}`-orbit, using
//! only `t_{↑2m−1}` and `t_{↑2m+1}`, is translated into the frames `π̂_r` and the
//! `2m` translates are joined by pairs of `t_{↑2m+2}` moves.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;

use crate::aux::{search_budget, search_cycle, PhiFrame, SearchConstraints, SearchOutcome};
use crate::error::{Error, Result};
use crate::gray::{check_sequence, GrayCode};
use crate::perm::{all_permutations, Permutation};

/// A parity-preserving cycle on `A_{2m+1}` avoiding exactly one
/// `t_{↑2m−1}`-orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HsnakeBlock {
    pub m: usize,
    pub start: Permutation,
    pub transitions: Vec<u8>,
    /// A representative `σ̂` of the avoided orbit `{t_{↑2m−1}^q σ̂}`.
    pub excluded_rep: Permutation,
}

fn orbit(sigma: &Permutation, j: usize) -> Vec<Permutation> {
    let mut out = vec![sigma.clone()];
    let mut cur = sigma.clone();
    for _ in 1..j {
        cur.push_to_top(j);
        out.push(cur.clone());
    }
    out
}

/// `(2m+1)!/2 − (2m−1)`.
pub fn block_size(m: usize) -> usize {
    (1..=2 * m + 1).product::<usize>() / 2 - (2 * m - 1)
}

/// `2m · ((2m+1)!/2 − (2m−1)) + 2m`.
pub fn snake_size(m: usize) -> usize {
    2 * m * block_size(m) + 2 * m
}

impl HsnakeBlock {
    /// Validates a block given by its start and transitions.
    pub fn new(m: usize, start: Permutation, transitions: Vec<u8>) -> Result<Self> {
        let k = 2 * m + 1;
        let invalid = |msg: String| Err(Error::InvalidParams(msg));
        if m < 2 || start.len() != k || !start.is_even() {
            return invalid(format!(
                "block for m={m} must start at an even permutation of order {k}"
            ));
        }
        if transitions
            .iter()
            .any(|&j| j as usize != k && j as usize != k - 2)
        {
            return invalid(format!("block may only use t_↑{} and t_↑{k}", k - 2));
        }
        if transitions.len() != block_size(m) {
            return invalid(format!(
                "block has {} codewords, expected {}",
                transitions.len(),
                block_size(m)
            ));
        }
        let code = GrayCode::new(start.clone(), transitions.clone())?;
        let report = code.check();
        if !report.passed() {
            return invalid(format!("block is not a cyclic Gray code: {report:?}"));
        }
        let words: std::collections::HashSet<Permutation> = code.iter().collect();
        let mut missing = all_permutations(k)
            .into_iter()
            .filter(|p| p.is_even() && !words.contains(p));
        let rep = missing.next().expect("the block leaves out one orbit");
        let mut expected = orbit(&rep, k - 2);
        let mut rest: Vec<Permutation> = std::iter::once(rep.clone()).chain(missing).collect();
        expected.sort();
        rest.sort();
        if expected != rest {
            return invalid("the omitted set is not a single t_↑(2m−1) orbit".into());
        }
        Ok(HsnakeBlock {
            m,
            start,
            transitions,
            excluded_rep: rep,
        })
    }

    pub fn order(&self) -> usize {
        2 * self.m + 1
    }

    pub fn gray_code(&self) -> GrayCode {
        GrayCode::new(self.start.clone(), self.transitions.clone())
            .expect("validated on construction")
    }
}

/// Searches `A_5` for the `m = 2` block, trying the avoided orbits in
/// lexicographic order of their smallest element. Larger `m` needs a supplied
/// block ([`HsnakeBlock::new`]).
pub fn search_hsnake_block(m: usize) -> Result<HsnakeBlock> {
    if m != 2 {
        return Err(Error::Unsupported(format!(
            "the block for m={m} is not searched; supply one"
        )));
    }
    let k = 2 * m + 1;
    let evens: Vec<Permutation> = all_permutations(k)
        .into_iter()
        .filter(|p| p.is_even())
        .collect();
    let mut seen = std::collections::HashSet::new();
    for rep in &evens {
        if seen.contains(rep) {
            continue;
        }
        let excluded = orbit(rep, k - 2);
        seen.extend(excluded.iter().cloned());
        let start = evens
            .iter()
            .find(|p| !excluded.contains(p))
            .expect("more than one orbit");
        let c = SearchConstraints {
            excluded,
            generators: Some(vec![k - 2, k]),
            must_use: vec![k],
            ..Default::default()
        };
        match search_cycle(start, block_size(m), &c, search_budget())? {
            SearchOutcome::Found(t) => return HsnakeBlock::new(m, start.clone(), t),
            SearchOutcome::Infeasible { .. } | SearchOutcome::BudgetExhausted { .. } => continue,
        }
    }
    Err(Error::SearchFailure(format!("no block found for m={m}")))
}

fn extend_frame(block: &HsnakeBlock) -> Result<(PhiFrame, Vec<u8>)> {
    let m = block.m;
    let k = 2 * m + 2;
    let g = (2 * m - 1) as u8;
    let frame = PhiFrame::new(m)?;
    // σ̃_r⁻¹ π̂_r = t_{↑2m+1}(id) for every r, so one rotation serves all frames
    let mut shift = Permutation::identity(k);
    shift.push_to_top(2 * m + 1);
    let target = block.excluded_rep.compose(&shift.truncate(k - 1)?)?;
    let words = block.gray_code().materialize();
    let p = words
        .iter()
        .position(|w| *w == target)
        .ok_or_else(|| Error::InvalidParams("the frame start is not in the block".into()))?;
    let mut t = block.transitions.clone();
    t.rotate_left(p);
    if *t.last().expect("non-empty") != g {
        return Err(Error::InvalidParams(format!(
            "the translated block must close with t_↑{g}"
        )));
    }
    Ok((frame, t))
}

/// The translated block `P̂_r`, starting at `π̂_r`.
pub fn build_phat(block: &HsnakeBlock, r: usize) -> Result<Vec<Permutation>> {
    let m = block.m;
    let k = 2 * m + 2;
    let (frame, t) = extend_frame(block)?;
    let pi = frame.pi_hat(r).clone();
    let words = GrayCode::new(pi.clone(), t.clone())?.materialize();
    let mut sigma_tilde = pi.clone();
    sigma_tilde.pull_from_top(2 * m + 1);
    let mut last_expected = pi.clone();
    last_expected.pull_from_top(2 * m - 1);
    let fail = |what: &str| Err(Error::InvalidParams(format!("P̂_{r}: {what}")));
    if words.last() != Some(&last_expected) {
        return fail("does not end at t_↑(2m−1)⁻¹ π̂_r");
    }
    if words
        .iter()
        .any(|w| w.image(k) != frame.last_of(r) || !w.is_even())
    {
        return fail("last element or parity varies");
    }
    if words.contains(&sigma_tilde) {
        return fail("contains σ̃_r");
    }
    Ok(words)
}

/// A Kendall-τ snake of order `2m + 2`.
#[derive(Clone, Debug)]
pub struct SnakeCode {
    m: usize,
    code: GrayCode,
}

impl SnakeCode {
    pub fn order(&self) -> usize {
        2 * self.m + 2
    }

    pub fn size(&self) -> usize {
        self.code.len()
    }

    pub fn gray_code(&self) -> &GrayCode {
        &self.code
    }

    pub fn materialize(&self) -> Vec<Permutation> {
        self.code.materialize()
    }
}

/// Stitches the translates of `block` into a snake.
pub fn build_snake_from_block(block: &HsnakeBlock) -> Result<SnakeCode> {
    let m = block.m;
    let k = (2 * m + 2) as u8;
    let (_, t) = extend_frame(block)?;
    let mut transitions = Vec::with_capacity(snake_size(m));
    for _ in 0..2 * m {
        transitions.extend_from_slice(&t[..t.len() - 1]);
        transitions.extend([k, k]);
    }
    let code = GrayCode::new(Permutation::identity(k as usize), transitions)?;
    if code.len() != snake_size(m) {
        return Err(Error::InvalidParams("snake size mismatch".into()));
    }
    Ok(SnakeCode { m, code })
}

/// Searches the block and stitches the snake (`m = 2` only).
pub fn build_snake(m: usize) -> Result<SnakeCode> {
    build_snake_from_block(&search_hsnake_block(m)?)
}

/// Outcome of [`verify_snake`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnakeReport {
    pub size: usize,
    pub gray_failure: Option<String>,
    /// `(a, b, i)`: codeword `b` equals codeword `a` with positions `i, i+1`
    /// swapped; the lexicographically first such pair.
    pub collision: Option<(usize, usize, usize)>,
}

impl SnakeReport {
    pub fn passed(&self) -> bool {
        self.gray_failure.is_none() && self.collision.is_none()
    }
}

impl fmt::Display for SnakeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.gray_failure, self.collision) {
            (None, None) => write!(f, "PASS: {} codewords, spread 2", self.size),
            (Some(e), _) => write!(f, "FAIL: {e}"),
            (None, Some((a, b, i))) => write!(
                f,
                "FAIL: codewords {a} and {b} differ by swapping positions {i},{}",
                i + 1
            ),
        }
    }
}

fn adjacent_swap(a: &Permutation, b: &Permutation) -> Option<usize> {
    let (x, y) = (a.as_slice(), b.as_slice());
    let i = x.iter().zip(y).position(|(p, q)| p != q)?;
    let ok = i + 1 < x.len() && x[i] == y[i + 1] && x[i + 1] == y[i] && x[i + 2..] == y[i + 2..];
    ok.then_some(i + 1)
}

/// Spread-2 check by comparing all pairs.
pub fn verify_snake_naive(words: &[Permutation]) -> SnakeReport {
    let collision = (0..words.len()).find_map(|a| {
        (a + 1..words.len()).find_map(|b| adjacent_swap(&words[a], &words[b]).map(|i| (a, b, i)))
    });
    report(words, collision)
}

/// Spread-2 check by probing the adjacent-transposition neighbours of every
/// codeword in a hash index.
pub fn verify_snake(words: &[Permutation]) -> SnakeReport {
    let index: HashMap<&Permutation, usize> =
        words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let collision = (0..words.len()).into_par_iter().find_map_first(|a| {
        let n = words[a].len();
        (1..n)
            .filter_map(|i| {
                let probe = words[a].swap_positions(i, i + 1);
                index.get(&probe).filter(|&&b| b > a).map(|&b| (a, b, i))
            })
            .min()
    });
    report(words, collision)
}

fn report(words: &[Permutation], collision: Option<(usize, usize, usize)>) -> SnakeReport {
    SnakeReport {
        size: words.len(),
        gray_failure: check_sequence(words).err(),
        collision,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::OnceLock;

    fn block() -> &'static HsnakeBlock {
        static B: OnceLock<HsnakeBlock> = OnceLock::new();
        B.get_or_init(|| search_hsnake_block(2).unwrap())
    }

    #[test]
    fn block_shape() {
        let b = block();
        assert_eq!(b.transitions.len(), 57);
        assert!(b.transitions.iter().all(|&j| j == 3 || j == 5));
        assert!(b.gray_code().iter().all(|w| w.is_even()));
    }

    #[test]
    fn translated_blocks() {
        let b = block();
        let p0 = build_phat(b, 0).unwrap();
        assert!(p0[0].is_identity());
        assert!(p0.iter().all(|w| w.image(6) == 6));
        let p1 = build_phat(b, 1).unwrap();
        assert!(p1.iter().all(|w| w.image(6) == 4));
        let mut st = PhiFrame::new(2).unwrap().pi_hat(1).clone();
        st.pull_from_top(5);
        assert!(st.is_even());
        assert!(!p1.contains(&st));
    }

    #[test]
    fn snake_of_order_six() {
        let s = build_snake_from_block(block()).unwrap();
        assert_eq!(s.size(), 232);
        assert_eq!(snake_size(2), 232);
        let words = s.materialize();
        let odd: Vec<&Permutation> = words.iter().filter(|w| !w.is_even()).collect();
        assert_eq!(odd.len(), 4);
        let frame = PhiFrame::new(2).unwrap();
        for b in &frame.bridges {
            assert!(odd.contains(&b));
        }
        let fast = verify_snake(&words);
        assert!(fast.passed(), "{fast}");
        assert_eq!(fast, verify_snake_naive(&words));
    }

    #[test]
    fn planted_transposition() {
        let mut words = vec![Permutation::identity(4)];
        words.push(Permutation::from_images(&[2, 1, 3, 4]).unwrap());
        let r = verify_snake(&words);
        assert_eq!(r.collision, Some((0, 1, 1)));
        assert_eq!(r, verify_snake_naive(&words));
    }

    #[test]
    fn parity_preserving_codes_are_snakes() {
        let words = block().gray_code().materialize();
        assert!(verify_snake(&words).passed());
    }

    #[test]
    fn rejects_bad_blocks() {
        assert!(search_hsnake_block(3).is_err());
        let b = block();
        let mut t = b.transitions.clone();
        t.pop();
        assert!(HsnakeBlock::new(2, b.start.clone(), t).is_err());
    }
}
