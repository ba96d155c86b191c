//! Monte-Carlo bounded-noise channel: random codewords, ℓ∞-bounded
//! perturbations, decoding, and success counting.
//!
//! Each trial draws from its own ChaCha stream (`seed`, stream = trial index),
//! so reports do not depend on the number of worker threads.

use std::fmt;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::aux::AuxCatalog;
use crate::decode::decode;
use crate::error::{Error, Result};
use crate::lmrm::{construct, CodeParams};
use crate::perm::{dist_linf, Permutation};

/// Perturbs `sigma` by random swaps that keep every entry within `t_prime` of
/// its original value. The result is not uniform over the ℓ∞ ball.
pub fn sample_bounded_error<R: Rng + ?Sized>(
    sigma: &Permutation,
    t_prime: usize,
    rng: &mut R,
) -> Permutation {
    let n = sigma.len();
    if t_prime == 0 || n < 2 {
        return sigma.clone();
    }
    let orig = sigma.as_slice();
    let mut cur = orig.to_vec();
    let mut pos = vec![0usize; n + 1];
    for (i, &v) in cur.iter().enumerate() {
        pos[v as usize] = i;
    }
    let t = t_prime as i64;
    let within = |value: u8, at: usize| (value as i64 - orig[at] as i64).abs() <= t;
    for _ in 0..4 * n {
        let i = rng.gen_range(0..n);
        let mut delta = rng.gen_range(1..=t);
        if rng.gen::<bool>() {
            delta = -delta;
        }
        let v = cur[i] as i64 + delta;
        if v < 1 || v > n as i64 {
            continue;
        }
        let j = pos[v as usize];
        if within(cur[j], i) && within(cur[i], j) {
            pos.swap(cur[i] as usize, cur[j] as usize);
            cur.swap(i, j);
        }
    }
    Permutation::from_images(&cur).expect("swaps preserve bijectivity")
}

/// Simulation parameters.
#[derive(Clone, Debug)]
pub struct SimConfig {
    pub params: CodeParams,
    pub trials: u64,
    pub t_prime: usize,
    pub seed: u64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

/// Aggregated outcome of a simulation.
#[derive(Clone, Debug, PartialEq)]
pub struct SimReport {
    pub n: usize,
    pub d: usize,
    pub t_prime: usize,
    pub trials: u64,
    pub successes: u64,
    /// Trials where the decoder returned a wrong codeword.
    pub miscorrections: u64,
    /// Trials where the decoder gave up.
    pub decode_failures: u64,
    pub wallclock: Duration,
}

impl SimReport {
    pub fn success_rate(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }
}

impl fmt::Display for SimReport {
    /// Wall-clock time is left out so that reports are reproducible.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} d={} t'={} trials={} successes={} miscorrections={} failures={} success_rate={:.6}",
            self.n,
            self.d,
            self.t_prime,
            self.trials,
            self.successes,
            self.miscorrections,
            self.decode_failures,
            self.success_rate()
        )
    }
}

#[derive(Clone, Copy, Default)]
struct Tally {
    ok: u64,
    wrong: u64,
    failed: u64,
}

impl Tally {
    fn merge(self, o: Tally) -> Tally {
        Tally {
            ok: self.ok + o.ok,
            wrong: self.wrong + o.wrong,
            failed: self.failed + o.failed,
        }
    }
}

/// Runs `cfg.trials` encode–perturb–decode rounds.
pub fn simulate(cfg: &SimConfig, catalog: &AuxCatalog) -> Result<SimReport> {
    if cfg.trials == 0 {
        return Err(Error::InvalidParams(
            "at least one trial is required".into(),
        ));
    }
    if cfg.t_prime >= cfg.params.n {
        return Err(Error::InvalidParams(format!(
            "noise magnitude {} must be below n={}",
            cfg.t_prime, cfg.params.n
        )));
    }
    let code = construct(cfg.params, catalog)?;
    let size = code.size();
    let started = Instant::now();
    let trial = |i: u64| -> Result<Tally> {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(i);
        let sigma = code.unrank(rng.gen_range(0..size))?;
        let tau = sample_bounded_error(&sigma, cfg.t_prime, &mut rng);
        assert!(dist_linf(&sigma, &tau)? <= cfg.t_prime, "noise exceeded t′");
        Ok(match decode(&code, &tau) {
            Ok(w) if w == sigma => Tally {
                ok: 1,
                ..Tally::default()
            },
            Ok(_) => Tally {
                wrong: 1,
                ..Tally::default()
            },
            Err(Error::DecodeFailure(_)) => Tally {
                failed: 1,
                ..Tally::default()
            },
            Err(e) => return Err(e),
        })
    };
    let run = || {
        (0..cfg.trials)
            .into_par_iter()
            .map(trial)
            .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))
    };
    let tally = match cfg.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };
    Ok(SimReport {
        n: cfg.params.n,
        d: cfg.params.d,
        t_prime: cfg.t_prime,
        trials: cfg.trials,
        successes: tally.ok,
        miscorrections: tally.wrong,
        decode_failures: tally.failed,
        wallclock: started.elapsed(),
    })
}
