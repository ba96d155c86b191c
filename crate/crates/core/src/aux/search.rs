//! Deterministic backtracking search for cyclic push-to-the-top codes inside
//! one parity class of `S_k`.
//!
//! The search walks the Cayley digraph generated by `t_{↑j}` for the allowed
//! (odd) `j`, trying generators in ascending order. A node whose in-edges are
//! all committed elsewhere, or whose out-edges all lead to visited nodes, can no
//! longer join the cycle; the branch is cut once more nodes are lost than the
//! slack between the available nodes and the target length.

use std::env;

use super::{AuxCode, AuxFamily};
use crate::error::{Error, Result};
use crate::perm::{all_permutations, Permutation};

/// Environment variable bounding node expansions per search.
pub const SEARCH_BUDGET_ENV: &str = "RANKMOD_SEARCH_BUDGET";
pub const DEFAULT_SEARCH_BUDGET: u64 = 200_000_000;

/// Largest order the search indexes; `k!` nodes are allocated.
const MAX_SEARCH_ORDER: usize = 9;

/// The budget from [`SEARCH_BUDGET_ENV`], or the default.
pub fn search_budget() -> u64 {
    env::var(SEARCH_BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_SEARCH_BUDGET)
}

/// Optional requirements on the searched cycle.
#[derive(Clone, Debug, Default)]
pub struct SearchConstraints {
    /// Each listed `j` must label at least one transition.
    pub must_use: Vec<usize>,
    /// Nodes that may not be visited.
    pub excluded: Vec<Permutation>,
    /// Transition closing the cycle back to the start.
    pub end_transition: Option<usize>,
    /// Transition leaving the start.
    pub first_transition: Option<usize>,
    /// Allowed push indices; defaults to all odd `j` in `3..=k`.
    pub generators: Option<Vec<usize>>,
}

/// Result of [`search_cycle`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    /// Transition sequence of a cycle through the start.
    Found(Vec<u8>),
    /// The whole tree was exhausted: no such cycle exists.
    Infeasible {
        expansions: u64,
    },
    BudgetExhausted {
        expansions: u64,
    },
}

struct Graph {
    gens: Vec<usize>,
    /// succ[v * g + i]: node reached by generator i.
    succ: Vec<u32>,
    pred: Vec<Vec<u32>>,
    words: Vec<Permutation>,
}

fn lex_rank(a: &[u8]) -> usize {
    let n = a.len();
    let mut r = 0;
    for i in 0..n {
        let smaller = a[i + 1..].iter().filter(|&&x| x < a[i]).count();
        r = r * (n - i) + smaller;
    }
    r
}

impl Graph {
    fn build(start: &Permutation, gens: Vec<usize>) -> Graph {
        let k = start.len();
        let parity = start.parity();
        let words: Vec<Permutation> = all_permutations(k)
            .into_iter()
            .filter(|p| p.parity() == parity)
            .collect();
        let mut id_of = vec![u32::MAX; (1..=k).product()];
        for (i, w) in words.iter().enumerate() {
            id_of[lex_rank(w.as_slice())] = i as u32;
        }
        let g = gens.len();
        let mut succ = vec![0u32; words.len() * g];
        let mut pred = vec![Vec::with_capacity(g); words.len()];
        for (v, w) in words.iter().enumerate() {
            for (i, &j) in gens.iter().enumerate() {
                let mut x = w.clone();
                x.push_to_top(j);
                let t = id_of[lex_rank(x.as_slice())];
                succ[v * g + i] = t;
                pred[t as usize].push(v as u32);
            }
        }
        Graph {
            gens,
            succ,
            pred,
            words,
        }
    }

    fn id(&self, p: &Permutation) -> Option<u32> {
        self.words.iter().position(|w| w == p).map(|i| i as u32)
    }
}

struct State<'a> {
    g: &'a Graph,
    visited: Vec<bool>,
    excluded: Vec<bool>,
    /// In-neighbours committed to another successor (or excluded).
    blocked_in: Vec<u8>,
    /// Out-neighbours already visited, not counting the start.
    blocked_out: Vec<u8>,
    dead: usize,
    start: u32,
}

impl State<'_> {
    fn is_dead(&self, x: usize) -> bool {
        !self.visited[x]
            && !self.excluded[x]
            && (self.blocked_in[x] as usize == self.g.pred[x].len()
                || self.blocked_out[x] as usize == self.g.gens.len())
    }

    fn bump_in(&mut self, x: usize, delta: i8) {
        let before = self.is_dead(x);
        self.blocked_in[x] = (self.blocked_in[x] as i8 + delta) as u8;
        self.adjust(before, x);
    }

    fn bump_out(&mut self, x: usize, delta: i8) {
        let before = self.is_dead(x);
        self.blocked_out[x] = (self.blocked_out[x] as i8 + delta) as u8;
        self.adjust(before, x);
    }

    fn adjust(&mut self, before: bool, x: usize) {
        match (before, self.is_dead(x)) {
            (false, true) => self.dead += 1,
            (true, false) => self.dead -= 1,
            _ => {}
        }
    }

    /// Commits `u → w` via generator index `gi`.
    fn step(&mut self, u: usize, gi: usize, w: usize) {
        let gl = self.g.gens.len();
        for other in 0..gl {
            if other != gi {
                let x = self.g.succ[u * gl + other] as usize;
                self.bump_in(x, 1);
            }
        }
        let before = self.is_dead(w);
        self.visited[w] = true;
        self.adjust(before, w);
        for y in self.g.pred[w].clone() {
            self.bump_out(y as usize, 1);
        }
    }

    fn unstep(&mut self, u: usize, gi: usize, w: usize) {
        let gl = self.g.gens.len();
        for y in self.g.pred[w].clone() {
            self.bump_out(y as usize, -1);
        }
        let before = self.is_dead(w);
        self.visited[w] = false;
        self.adjust(before, w);
        for other in 0..gl {
            if other != gi {
                let x = self.g.succ[u * gl + other] as usize;
                self.bump_in(x, -1);
            }
        }
    }

    fn start_unreachable(&self) -> bool {
        let s = self.start as usize;
        self.blocked_in[s] as usize == self.g.pred[s].len()
    }
}

/// Searches for a cycle of exactly `target` codewords through `start`, inside
/// `start`'s parity class, honouring `constraints` and a node-expansion budget.
pub fn search_cycle(
    start: &Permutation,
    target: usize,
    constraints: &SearchConstraints,
    budget: u64,
) -> Result<SearchOutcome> {
    let k = start.len();
    if !(3..=MAX_SEARCH_ORDER).contains(&k) {
        return Err(Error::InvalidOrder(format!(
            "search supports orders 3..={MAX_SEARCH_ORDER}, got {k}"
        )));
    }
    let gens = constraints
        .generators
        .clone()
        .unwrap_or_else(|| (3..=k).step_by(2).collect());
    if gens.is_empty() || gens.iter().any(|&j| j < 2 || j > k || j % 2 == 0) {
        return Err(Error::InvalidParams(format!(
            "generators must be odd push indices in 3..={k}: {gens:?}"
        )));
    }
    for j in constraints
        .must_use
        .iter()
        .chain(constraints.end_transition.iter())
        .chain(constraints.first_transition.iter())
    {
        if !gens.contains(j) {
            return Err(Error::InvalidParams(format!(
                "t_↑{j} is not an allowed generator"
            )));
        }
    }
    let graph = Graph::build(start, gens);
    let nodes = graph.words.len();
    let s = graph.id(start).expect("start lies in its own parity class") as usize;
    let gl = graph.gens.len();

    let mut excluded = vec![false; nodes];
    for e in &constraints.excluded {
        if e.len() != k {
            return Err(Error::DimensionMismatch {
                left: k,
                right: e.len(),
            });
        }
        if e == start {
            return Err(Error::InvalidParams("the start node is excluded".into()));
        }
        if let Some(i) = graph.id(e) {
            excluded[i as usize] = true;
        }
    }
    let available = nodes - excluded.iter().filter(|&&x| x).count();
    if target < 1 || target > available {
        return Ok(SearchOutcome::Infeasible { expansions: 0 });
    }
    if target == 1 {
        // a single codeword carries no transitions
        return Ok(SearchOutcome::Found(Vec::new()));
    }
    let slack = available - target;

    let mut st = State {
        g: &graph,
        visited: vec![false; nodes],
        excluded: excluded.clone(),
        blocked_in: vec![0; nodes],
        blocked_out: vec![0; nodes],
        dead: 0,
        start: s as u32,
    };
    st.visited[s] = true;
    for x in 0..nodes {
        for gi in 0..gl {
            let t = graph.succ[x * gl + gi] as usize;
            if excluded[x] {
                st.blocked_in[t] += 1;
            }
            if excluded[t] || (st.visited[t] && t != s) {
                st.blocked_out[x] += 1;
            }
        }
    }
    st.dead = (0..nodes).filter(|&x| st.is_dead(x)).count();
    if st.dead > slack || st.start_unreachable() {
        return Ok(SearchOutcome::Infeasible { expansions: 0 });
    }

    let gen_index = |j: usize| graph.gens.iter().position(|&g| g == j).unwrap();
    let must: Vec<usize> = constraints.must_use.iter().map(|&j| gen_index(j)).collect();
    let end_gi = constraints.end_transition.map(gen_index);
    let first_gi = constraints.first_transition.map(gen_index);

    let mut path: Vec<usize> = vec![s];
    let mut chosen: Vec<usize> = Vec::new();
    let mut next_try: Vec<usize> = vec![0];
    let mut uses = vec![0usize; gl];
    let mut expansions: u64 = 0;

    loop {
        let depth = path.len();
        let u = *path.last().unwrap();
        if depth == target {
            // try to close the cycle
            let closing = (0..gl).find(|&gi| {
                graph.succ[u * gl + gi] as usize == s
                    && end_gi.is_none_or(|e| e == gi)
                    && must.iter().all(|&m| uses[m] + usize::from(m == gi) > 0)
            });
            if let Some(gi) = closing {
                let mut transitions: Vec<u8> =
                    chosen.iter().map(|&c| graph.gens[c] as u8).collect();
                transitions.push(graph.gens[gi] as u8);
                return Ok(SearchOutcome::Found(transitions));
            }
            next_try[depth - 1] = gl;
        }

        let mut advanced = false;
        while next_try[depth - 1] < gl {
            let gi = next_try[depth - 1];
            next_try[depth - 1] += 1;
            if depth == 1 && first_gi.is_some_and(|f| f != gi) {
                continue;
            }
            let w = graph.succ[u * gl + gi] as usize;
            // a dead node cannot lie on the cycle
            if st.visited[w] || st.excluded[w] || st.is_dead(w) {
                continue;
            }
            expansions += 1;
            if expansions > budget {
                return Ok(SearchOutcome::BudgetExhausted { expansions });
            }
            st.step(u, gi, w);
            if st.dead > slack || st.start_unreachable() {
                st.unstep(u, gi, w);
                continue;
            }
            uses[gi] += 1;
            path.push(w);
            chosen.push(gi);
            next_try.push(0);
            advanced = true;
            break;
        }
        if advanced {
            continue;
        }
        // backtrack
        next_try.pop();
        let w = path.pop().unwrap();
        let Some(gi) = chosen.pop() else {
            return Ok(SearchOutcome::Infeasible { expansions });
        };
        let u = *path.last().unwrap();
        uses[gi] -= 1;
        st.unstep(u, gi, w);
    }
}

/// Searches for a parity-preserving cyclic code of order `k` and size `target`
/// starting at id with first transition `t_{↑k}`.
///
/// The first-transition requirement loses no generality for existence: any
/// cycle longer than `k` uses `t_{↑k}` somewhere, and the Cayley digraph is
/// vertex-transitive.
pub fn search_parity_preserving(
    k: usize,
    target: usize,
    constraints: &SearchConstraints,
) -> Result<AuxCode> {
    if k.is_multiple_of(2) {
        return Err(Error::InvalidOrder(format!(
            "parity-preserving search needs an odd order, got {k}"
        )));
    }
    let mut c = constraints.clone();
    c.first_transition = Some(k);
    let budget = search_budget();
    match search_cycle(&Permutation::identity(k), target, &c, budget)? {
        SearchOutcome::Found(t) => {
            let family = if k == 3 {
                AuxFamily::Trivial3
            } else {
                AuxFamily::SearchedParityPreserving
            };
            AuxCode::from_transitions(k, family, t)
        }
        SearchOutcome::Infeasible { expansions } => Err(Error::SearchFailure(format!(
            "no parity-preserving cycle of size {target} in order {k} \
             (exhausted after {expansions} expansions)"
        ))),
        SearchOutcome::BudgetExhausted { expansions } => Err(Error::SearchFailure(format!(
            "budget of {expansions} expansions exhausted searching for size {target} in order {k}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_three_cycle() {
        let code = search_parity_preserving(3, 3, &SearchConstraints::default()).unwrap();
        assert_eq!(code.gray_code(10).unwrap().transitions(), &[3, 3, 3]);
        assert_eq!(code.family(), AuxFamily::Trivial3);
    }

    #[test]
    fn three_cannot_exceed_three() {
        let err = search_parity_preserving(3, 4, &SearchConstraints::default());
        assert!(matches!(err, Err(Error::SearchFailure(_))));
    }

    #[test]
    fn lex_rank_orders_permutations() {
        let all = all_permutations(4);
        for (i, p) in all.iter().enumerate() {
            assert_eq!(lex_rank(p.as_slice()), i);
        }
    }

    #[test]
    fn even_order_rejected() {
        assert!(search_parity_preserving(4, 3, &SearchConstraints::default()).is_err());
    }

    #[test]
    fn budget_exhaustion_is_distinguished() {
        let outcome = search_cycle(
            &Permutation::identity(5),
            57,
            &SearchConstraints::default(),
            3,
        )
        .unwrap();
        assert!(matches!(outcome, SearchOutcome::BudgetExhausted { .. }));
    }
}
