//! Auxiliary codes `G^aux↑(k, M)`: cyclic push-to-the-top Gray codes over `S_k`
//! that never contain both `σ` and `(q, k)∘σ` for `q < k`.
//!
//! Every code starts at the identity and its first transition is `t_{↑k}`.

mod catalog;
mod flip;
mod search;
mod stitched;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

pub use catalog::{AuxCatalog, ORDER_FIVE_SIZE};
pub use search::{
    search_budget, search_cycle, search_parity_preserving, SearchConstraints, SearchOutcome,
    DEFAULT_SEARCH_BUDGET, SEARCH_BUDGET_ENV,
};
pub use stitched::{aux_stitched, PhiFrame};

use crate::error::{Error, Result};
use crate::gray::{check_sequence, GrayCode};
use crate::perm::{Parity, Permutation};

/// How an auxiliary code was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AuxFamily {
    Flip,
    Stitched,
    SearchedParityPreserving,
    Trivial3,
}

impl fmt::Display for AuxFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AuxFamily::Flip => "flip",
            AuxFamily::Stitched => "stitched",
            AuxFamily::SearchedParityPreserving => "searched",
            AuxFamily::Trivial3 => "trivial3",
        })
    }
}

impl FromStr for AuxFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "flip" => Ok(AuxFamily::Flip),
            "stitched" => Ok(AuxFamily::Stitched),
            "searched" => Ok(AuxFamily::SearchedParityPreserving),
            "trivial3" => Ok(AuxFamily::Trivial3),
            other => Err(Error::Parse(format!("unknown aux family {other:?}"))),
        }
    }
}

/// An auxiliary code with exact membership, ranking and unranking.
///
/// Flip codes are handled by closed formulas and never materialized; all other
/// families keep their codewords and an index table.
#[derive(Clone, Debug)]
pub struct AuxCode {
    order: usize,
    family: AuxFamily,
    size: u128,
    body: Body,
}

#[derive(Clone, Debug)]
enum Body {
    Flip,
    Table(Table),
}

#[derive(Clone, Debug)]
struct Table {
    transitions: Vec<u8>,
    words: Vec<Permutation>,
    index: HashMap<Permutation, u32>,
    rule: Rule,
}

#[derive(Clone, Debug)]
enum Rule {
    /// All codewords share this sign; a sign check rejects half of `S_k` early.
    Parity(Parity),
    Stitched(Box<stitched::StitchedRule>),
    Lookup,
}

impl AuxCode {
    /// Materializes a code from its transition sequence, starting at id.
    ///
    /// Fails if the sequence does not start with `t_{↑k}`, repeats a codeword,
    /// or does not close into a cycle.
    pub fn from_transitions(k: usize, family: AuxFamily, transitions: Vec<u8>) -> Result<Self> {
        if k < 3 {
            return Err(Error::InvalidOrder(format!(
                "aux order must be ≥ 3, got {k}"
            )));
        }
        if transitions.first().map(|&j| j as usize) != Some(k) {
            return Err(Error::InvalidParams(format!(
                "aux code of order {k} must start with t_↑{k}"
            )));
        }
        let code = GrayCode::new(Permutation::identity(k), transitions)?;
        let report = code.check();
        if let Some((i, j)) = report.duplicate {
            return Err(Error::InvalidParams(format!(
                "codewords {i} and {j} coincide"
            )));
        }
        if !report.cyclic {
            return Err(Error::InvalidParams(
                "transition sequence is not cyclic".into(),
            ));
        }
        let words = code.materialize();
        let index: HashMap<_, _> = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i as u32))
            .collect();
        let parity = words[0].parity();
        let rule = if words.iter().all(|w| w.parity() == parity) {
            Rule::Parity(parity)
        } else {
            Rule::Lookup
        };
        Ok(AuxCode {
            order: k,
            family,
            size: words.len() as u128,
            body: Body::Table(Table {
                transitions: code.transitions().to_vec(),
                words,
                index,
                rule,
            }),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn family(&self) -> AuxFamily {
        self.family
    }

    pub fn size(&self) -> u128 {
        self.size
    }

    /// Whether all codewords share one sign.
    pub fn is_parity_preserving(&self) -> bool {
        matches!(
            &self.body,
            Body::Table(Table {
                rule: Rule::Parity(_),
                ..
            })
        )
    }

    /// The push index of the transition leaving codeword `s`.
    pub fn transition_at(&self, s: u128) -> usize {
        match &self.body {
            Body::Flip => flip::transition_at(self.order, self.size, s),
            Body::Table(t) => t.transitions[s as usize] as usize,
        }
    }

    /// The generating sequence as a [`GrayCode`], guarded by `limit` codewords.
    pub fn gray_code(&self, limit: u128) -> Result<GrayCode> {
        if self.size > limit {
            return Err(Error::TooLarge {
                size: self.size,
                limit,
            });
        }
        let transitions = match &self.body {
            Body::Flip => (0..self.size)
                .map(|s| self.transition_at(s) as u8)
                .collect(),
            Body::Table(t) => t.transitions.clone(),
        };
        GrayCode::new(Permutation::identity(self.order), transitions)
    }

    fn check_dim(&self, pi: &Permutation) -> Result<()> {
        if pi.len() != self.order {
            return Err(Error::DimensionMismatch {
                left: self.order,
                right: pi.len(),
            });
        }
        Ok(())
    }

    /// Exact membership test.
    pub fn contains(&self, pi: &Permutation) -> Result<bool> {
        self.check_dim(pi)?;
        Ok(match &self.body {
            Body::Flip => flip::contains(pi),
            Body::Table(t) => match &t.rule {
                Rule::Parity(p) => pi.parity() == *p && t.index.contains_key(pi),
                Rule::Stitched(rule) => rule.contains(pi),
                Rule::Lookup => t.index.contains_key(pi),
            },
        })
    }

    /// Membership by direct table lookup, bypassing any structural rule.
    /// Flip codes fall back to their formula.
    pub fn contains_by_table(&self, pi: &Permutation) -> Result<bool> {
        self.check_dim(pi)?;
        Ok(match &self.body {
            Body::Flip => flip::contains(pi),
            Body::Table(t) => t.index.contains_key(pi),
        })
    }

    /// 0-based position of `pi` in enumeration order.
    pub fn rank(&self, pi: &Permutation) -> Result<u128> {
        self.check_dim(pi)?;
        match &self.body {
            Body::Flip => flip::rank(pi, self.size),
            Body::Table(t) => t
                .index
                .get(pi)
                .map(|&i| i as u128)
                .ok_or_else(|| Error::NotInCode(pi.to_string())),
        }
    }

    /// The codeword at position `m`.
    pub fn unrank(&self, m: u128) -> Result<Permutation> {
        if m >= self.size {
            return Err(Error::RankOutOfRange {
                rank: m,
                size: self.size,
            });
        }
        match &self.body {
            Body::Flip => flip::unrank(self.order, self.size, m),
            Body::Table(t) => Ok(t.words[m as usize].clone()),
        }
    }

    /// Codewords in order, guarded by `limit`.
    pub fn materialize(&self, limit: u128) -> Result<Vec<Permutation>> {
        match &self.body {
            Body::Table(t) if self.size <= limit => Ok(t.words.clone()),
            _ => Ok(self.gray_code(limit)?.materialize()),
        }
    }

    fn with_rule(mut self, rule: Rule) -> Self {
        if let Body::Table(t) = &mut self.body {
            t.rule = rule;
        }
        self
    }
}

/// Structured outcome of [`verify_aux`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxReport {
    pub order: usize,
    pub size: usize,
    /// Gray/cyclic/distinctness failure, if any.
    pub gray_failure: Option<String>,
    pub starts_at_id: bool,
    pub first_transition_ok: bool,
    /// A codeword `σ` and `q` with `(q, k)∘σ` also in the code.
    pub aux_witness: Option<(Permutation, usize)>,
    /// `M ≤ k!/2`.
    pub within_half: bool,
}

impl AuxReport {
    pub fn passed(&self) -> bool {
        self.gray_failure.is_none()
            && self.starts_at_id
            && self.first_transition_ok
            && self.aux_witness.is_none()
            && self.within_half
    }
}

impl fmt::Display for AuxReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "aux code k={} M={}: pass", self.order, self.size);
        }
        write!(f, "aux code k={} M={}: FAIL", self.order, self.size)?;
        if let Some(g) = &self.gray_failure {
            write!(f, "; {g}")?;
        }
        if !self.starts_at_id {
            write!(f, "; does not start at id")?;
        }
        if !self.first_transition_ok {
            write!(f, "; first transition is not t_↑{}", self.order)?;
        }
        if let Some((w, q)) = &self.aux_witness {
            write!(f, "; ({q},{})∘[{w}] is also a codeword", self.order)?;
        }
        if !self.within_half {
            write!(f, "; size exceeds k!/2")?;
        }
        Ok(())
    }
}

/// Checks a codeword sequence against the auxiliary-code definition.
pub fn verify_aux_sequence(k: usize, words: &[Permutation]) -> AuxReport {
    let gray_failure = if words.iter().any(|w| w.len() != k) {
        Some("codeword of wrong length".to_string())
    } else {
        check_sequence(words).err()
    };
    let starts_at_id = words.first().is_some_and(|w| w.is_identity());
    let first_transition_ok =
        words.len() >= 2 && crate::gray::push_to_top_index(&words[0], &words[1]) == Some(k);
    let set: HashSet<&Permutation> = words.iter().collect();
    let mut aux_witness = None;
    'outer: for w in words.iter().filter(|w| w.len() == k) {
        for q in 1..k {
            if set.contains(&w.swap_values(q, k)) {
                aux_witness = Some((w.clone(), q));
                break 'outer;
            }
        }
    }
    let half = crate::complete::factorial(k)
        .map(|f| f / 2)
        .unwrap_or(u128::MAX);
    AuxReport {
        order: k,
        size: words.len(),
        gray_failure,
        starts_at_id,
        first_transition_ok,
        aux_witness,
        within_half: words.len() as u128 <= half,
    }
}

/// Materializes `code` (up to `limit` codewords) and verifies it.
pub fn verify_aux(code: &AuxCode, limit: u128) -> Result<AuxReport> {
    let words = code.materialize(limit)?;
    Ok(verify_aux_sequence(code.order(), &words))
}

/// The flip construction for even `k ≥ 4`; size `k!/(k−1)`.
pub fn aux_flip(k: usize) -> Result<AuxCode> {
    flip::build(k)
}
