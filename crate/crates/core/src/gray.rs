//! Push-to-the-top Gray codes given by a start permutation and a cyclic
//! transition sequence.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A cyclic push-to-the-top Gray code.
///
/// `transitions[s]` is the index `j` of the transition `t_{↑j}` leading from
/// codeword `s` to codeword `s + 1` (cyclically). A code with a single codeword
/// carries no transitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayCode {
    start: Permutation,
    transitions: Vec<u8>,
}

/// Outcome of [`GrayCode::check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayReport {
    pub size: usize,
    /// First index `(i, j)` with equal codewords, if any.
    pub duplicate: Option<(usize, usize)>,
    /// Whether applying the whole sequence returns to the start.
    pub cyclic: bool,
}

impl GrayReport {
    pub fn passed(&self) -> bool {
        self.duplicate.is_none() && self.cyclic
    }
}

impl GrayCode {
    pub fn new(start: Permutation, transitions: Vec<u8>) -> Result<Self> {
        let n = start.len();
        if let Some(&bad) = transitions.iter().find(|&&j| j < 2 || j as usize > n) {
            return Err(Error::IndexOutOfBounds {
                n,
                detail: format!("push-to-the-top index {bad}"),
            });
        }
        Ok(GrayCode { start, transitions })
    }

    pub fn order(&self) -> usize {
        self.start.len()
    }

    pub fn start(&self) -> &Permutation {
        &self.start
    }

    pub fn transitions(&self) -> &[u8] {
        &self.transitions
    }

    /// Number of codewords.
    pub fn len(&self) -> usize {
        self.transitions.len().max(1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Iterates over the codewords in order, starting at `start`.
    pub fn iter(&self) -> impl Iterator<Item = Permutation> + '_ {
        let mut cur = self.start.clone();
        let total = self.len();
        (0..total).map(move |s| {
            let out = cur.clone();
            if s + 1 < total {
                cur.push_to_top(self.transitions[s] as usize);
            }
            out
        })
    }

    pub fn materialize(&self) -> Vec<Permutation> {
        self.iter().collect()
    }

    /// Checks distinctness and cyclic closure.
    pub fn check(&self) -> GrayReport {
        let mut seen = std::collections::HashMap::with_capacity(self.len());
        let mut duplicate = None;
        let mut cur = self.start.clone();
        for s in 0..self.len() {
            if let Some(prev) = seen.insert(cur.clone(), s) {
                duplicate.get_or_insert((prev, s));
            }
            if let Some(&j) = self.transitions.get(s) {
                cur.push_to_top(j as usize);
            }
        }
        GrayReport {
            size: self.len(),
            duplicate,
            cyclic: cur == self.start,
        }
    }

    /// Rotates the code so that it starts at codeword `offset`.
    pub fn rotate(&self, offset: usize) -> GrayCode {
        if self.transitions.is_empty() {
            return self.clone();
        }
        let offset = offset % self.transitions.len();
        let mut start = self.start.clone();
        for &j in &self.transitions[..offset] {
            start.push_to_top(j as usize);
        }
        let mut transitions = self.transitions.clone();
        transitions.rotate_left(offset);
        GrayCode { start, transitions }
    }

    /// Left-translates every codeword by `pi`; transitions are unchanged.
    pub fn translate(&self, pi: &Permutation) -> Result<GrayCode> {
        Ok(GrayCode {
            start: pi.compose(&self.start)?,
            transitions: self.transitions.clone(),
        })
    }
}

/// The `j` with `t_{↑j}(from) = to`, if one exists with `2 ≤ j`.
pub fn push_to_top_index(from: &Permutation, to: &Permutation) -> Option<usize> {
    if from.len() != to.len() || from.len() < 2 {
        return None;
    }
    let (a, b) = (from.as_slice(), to.as_slice());
    let j = a.iter().position(|&v| v == b[0])? + 1;
    if j < 2 || a[..j - 1] != b[1..j] || a[j..] != b[j..] {
        return None;
    }
    Some(j)
}

/// Checks that `words` is a cyclic push-to-the-top Gray code with distinct
/// codewords. Returns the first offending index on failure.
pub fn check_sequence(words: &[Permutation]) -> std::result::Result<(), String> {
    let mut seen = HashSet::with_capacity(words.len());
    for (i, w) in words.iter().enumerate() {
        if !seen.insert(w) {
            return Err(format!("codeword {i} ({w}) repeated"));
        }
    }
    if words.len() < 2 {
        return Ok(());
    }
    for i in 0..words.len() {
        let next = &words[(i + 1) % words.len()];
        if push_to_top_index(&words[i], next).is_none() {
            return Err(format!(
                "no push-to-the-top transition from codeword {i} ({}) to {}",
                words[i], next
            ));
        }
    }
    Ok(())
}

/// Recovers the transition sequence of a cyclic code from its codewords.
pub fn transitions_of(words: &[Permutation]) -> Result<Vec<u8>> {
    if words.len() < 2 {
        return Ok(Vec::new());
    }
    (0..words.len())
        .map(|i| {
            let next = &words[(i + 1) % words.len()];
            push_to_top_index(&words[i], next)
                .map(|j| j as u8)
                .ok_or_else(|| {
                    Error::InvalidParams(format!("codewords {i} and {} are not adjacent", i + 1))
                })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Permutation {
        Permutation::from_images(v).unwrap()
    }

    #[test]
    fn iterate_small_code() {
        let code = GrayCode::new(Permutation::identity(3), vec![3, 3, 3]).unwrap();
        let words = code.materialize();
        assert_eq!(words, vec![p(&[1, 2, 3]), p(&[3, 1, 2]), p(&[2, 3, 1])]);
        assert!(code.check().passed());
        assert!(check_sequence(&words).is_ok());
        assert_eq!(transitions_of(&words).unwrap(), vec![3, 3, 3]);
    }

    #[test]
    fn detects_non_cyclic() {
        let code = GrayCode::new(Permutation::identity(3), vec![3, 3]).unwrap();
        assert!(!code.check().cyclic);
    }

    #[test]
    fn rotation_preserves_set() {
        let code = GrayCode::new(Permutation::identity(3), vec![2, 3, 3, 2, 3, 3]).unwrap();
        let rot = code.rotate(2);
        assert_eq!(rot.start(), &code.materialize()[2]);
        assert!(rot.check().passed());
    }

    #[test]
    fn push_index_recovery() {
        assert_eq!(
            push_to_top_index(&p(&[1, 2, 3, 4]), &p(&[3, 1, 2, 4])),
            Some(3)
        );
        assert_eq!(
            push_to_top_index(&p(&[1, 2, 3, 4]), &p(&[1, 2, 4, 3])),
            None
        );
        assert_eq!(push_to_top_index(&p(&[1, 2]), &p(&[1, 2])), None);
    }

    #[test]
    fn rejects_bad_index() {
        assert!(GrayCode::new(Permutation::identity(3), vec![4]).is_err());
        assert!(GrayCode::new(Permutation::identity(3), vec![1]).is_err());
    }
}
