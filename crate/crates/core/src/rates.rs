//! Asymptotic rate curves `R(δ)` for codes of normalized distance `δ = d/n`.
//!
//! All curves drop their `o(1)` terms. `F = ⌊1/δ⌋` and `C = ⌈1/δ⌉` are computed
//! with a small tolerance so that grid points such as `δ = 0.2` land on the
//! intended integer.

use std::f64::consts::{E, PI};
use std::fmt::Write as _;

use crate::complete::factorial;
use crate::error::{Error, Result};

const EPS: f64 = 1e-9;

fn check(delta: f64) -> Result<()> {
    if delta > 0.0 && delta <= 1.0 + EPS {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!(
            "δ must lie in (0, 1], got {delta}"
        )))
    }
}

fn floor_inv(delta: f64) -> f64 {
    (1.0 / delta + EPS).floor()
}

fn ceil_inv(delta: f64) -> f64 {
    (1.0 / delta - EPS).ceil()
}

fn log2_factorial(n: f64) -> f64 {
    (2..=n as u64).map(|i| (i as f64).log2()).sum()
}

/// Upper bound on the rate of any code.
pub fn r_upper(delta: f64) -> Result<f64> {
    check(delta)?;
    let df = delta * floor_inv(delta);
    let tail = 1.0 + delta - df;
    let log_tail = if tail > 0.0 { tail * tail.log2() } else { 0.0 };
    Ok(2.0 - 2.0 * df - (df - delta) * delta.log2() - log_tail)
}

/// Rate of the earlier direct-product construction.
pub fn r_tam(delta: f64) -> Result<f64> {
    check(delta)?;
    let f = floor_inv(delta);
    let c = ceil_inv(delta);
    Ok((1.0 - delta * f) * log2_factorial(c) + (delta + delta * f - 1.0) * log2_factorial(f))
}

/// The branch of the Gilbert–Varshamov-like bound valid for `δ ≤ 1/2`.
pub fn f_gv_low(delta: f64) -> f64 {
    (1.0 / delta).log2() + 2.0 * delta * (E.log2() - 1.0) - 1.0
}

/// The branch valid for `δ ≥ 1/2`.
pub fn f_gv_high(delta: f64) -> f64 {
    -2.0 * delta * (1.0 / delta).log2() + 2.0 * (1.0 - delta) * E.log2()
}

/// Gilbert–Varshamov-like existence bound.
pub fn f_gv(delta: f64) -> Result<f64> {
    check(delta)?;
    Ok(if delta <= 0.5 {
        f_gv_low(delta)
    } else {
        f_gv_high(delta)
    })
}

/// Lower estimate of the rate of the constructed Gray codes.
pub fn r_eq2(delta: f64) -> Result<f64> {
    check(delta)?;
    let f = floor_inv(delta);
    let c = ceil_inv(delta);
    let d = delta;
    Ok(match f as u64 {
        1 => (1.0 - d) * 3f64.log2(),
        2 => (1.0 - 2.0 * d) * (3.0 - 3f64.log2()) + d * 3f64.log2(),
        3 => (1.0 - 3.0 * d) * (57f64.log2() - 4.0) + 1.0,
        4 => (1.0 - 4.0 * d) * 178f64.log2() + (5.0 * d - 1.0) * 57f64.log2(),
        5 => (1.0 - 5.0 * d) * 315f64.log2() + (6.0 * d - 1.0) * 89f64.log2() + 2.0 - 9.0 * d,
        fi => {
            let base = (1.0 - d * f) * (c + 1.0).log2() + d * log2_factorial(f + 1.0);
            if fi % 2 == 0 {
                base + (1.0 - d * f) * ((c - 2.0) / (c + 1.0)).log2() - d
            } else {
                base + (d + d * f - 1.0) * ((f - 2.0) / (f + 1.0)).log2() - d
            }
        }
    })
}

/// Lower estimate of the rate of the rankable variant.
pub fn r_rankable(delta: f64) -> Result<f64> {
    check(delta)?;
    let f = floor_inv(delta);
    let c = ceil_inv(delta);
    let d = delta;
    let stirling = |x: f64| x.log2() + E.log2() / (2.0 * x) + PI.log2() - 1.0;
    Ok(if f as u64 == 1 {
        // the rankable and plain codes coincide
        (1.0 - d) * 3f64.log2()
    } else if (f as u64).is_multiple_of(2) {
        let w = d + d * f - 1.0;
        (1.0 - d * f) * (log2_factorial(c) + (1.0 + 1.0 / c).log2()) + w * log2_factorial(f + 1.0)
            - 0.5 * w * stirling(f)
    } else {
        let w = 1.0 - d * f;
        w * log2_factorial(c + 1.0)
            + (d + d * f - 1.0) * (log2_factorial(f) + (1.0 + 1.0 / f).log2())
            - 0.5 * w * stirling(c)
    })
}

/// One row of the rate table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateRow {
    pub delta: f64,
    pub upper: f64,
    pub tam: f64,
    pub gv: f64,
    pub eq2: f64,
    pub rankable: f64,
}

pub fn rate_row(delta: f64) -> Result<RateRow> {
    Ok(RateRow {
        delta,
        upper: r_upper(delta)?,
        tam: r_tam(delta)?,
        gv: f_gv(delta)?,
        eq2: r_eq2(delta)?,
        rankable: r_rankable(delta)?,
    })
}

/// Rows for `from, from + step, …` up to and including `to`.
pub fn rate_table(from: f64, to: f64, step: f64) -> Result<Vec<RateRow>> {
    if step <= 0.0 || from > to + EPS {
        return Err(Error::InvalidParams(format!(
            "bad grid: from {from} to {to} step {step}"
        )));
    }
    let count = ((to - from) / step + EPS).floor() as usize + 1;
    // computed by index to avoid accumulating rounding error
    (0..count)
        .map(|i| rate_row(((from + i as f64 * step) * 1e9).round() / 1e9))
        .collect()
}

pub fn to_csv(rows: &[RateRow]) -> String {
    let mut out = String::from("delta,upper,tam,gv,eq2,rankable\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{:.12},{:.12},{:.12},{:.12},{:.12}",
            r.delta, r.upper, r.tam, r.gv, r.eq2, r.rankable
        );
    }
    out
}

/// Size of the rankable auxiliary code of order `k + 1` for classes of size `k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankableSize {
    pub order: usize,
    /// Size of the code actually used, when one is available without a
    /// certificate.
    pub exact: Option<u128>,
    /// Value of the closed form used in the rate estimates.
    pub formula: f64,
}

/// Size of the rankable auxiliary code of order `k + 1`.
pub fn rankable_size(k: usize) -> Result<RankableSize> {
    if k < 2 {
        return Err(Error::InvalidParams(format!(
            "class size must be ≥ 2, got {k}"
        )));
    }
    let order = k + 1;
    let full = factorial(order)?;
    if order.is_multiple_of(2) {
        let m = full / k as u128;
        return Ok(RankableSize {
            order,
            exact: Some(m),
            formula: m as f64,
        });
    }
    let half = factorial(k / 2)? as f64;
    let formula = factorial(k)? as f64 / (half * half * 2f64.powi(k as i32)) * full as f64;
    let exact = match order {
        3 => Some(3),
        5 => Some(crate::aux::ORDER_FIVE_SIZE as u128),
        _ => None,
    };
    Ok(RankableSize {
        order,
        exact,
        formula,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gv_branches_meet() {
        let expected = E.log2() - 1.0;
        assert!((f_gv_low(0.5) - expected).abs() < 1e-12);
        assert!((f_gv_high(0.5) - expected).abs() < 1e-12);
    }

    #[test]
    fn endpoints_vanish() {
        assert_eq!(r_upper(1.0).unwrap(), 0.0);
        assert_eq!(r_eq2(1.0).unwrap(), 0.0);
        assert_eq!(r_tam(1.0).unwrap(), 0.0);
    }

    #[test]
    fn improves_on_earlier_construction() {
        for row in rate_table(0.05, 1.0, 0.01).unwrap() {
            assert!(row.eq2 >= row.tam - 1e-9, "{row:?}");
        }
    }

    #[test]
    fn tam_at_unit_fractions() {
        // δ = 1/k gives log2(k!)/k
        for k in 1..10u32 {
            let expected = log2_factorial(k as f64) / k as f64;
            assert!((r_tam(1.0 / k as f64).unwrap() - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn grid_and_csv() {
        let rows = rate_table(0.02, 1.0, 0.01).unwrap();
        assert_eq!(rows.len(), 99);
        assert_eq!(rows[0].delta, 0.02);
        assert_eq!(rows[98].delta, 1.0);
        let csv = to_csv(&rows[..2]);
        assert!(csv.starts_with("delta,upper,tam,gv,eq2,rankable\n0.02,"));
        assert_eq!(csv.lines().count(), 3);
        assert!(rate_row(0.0).is_err());
        assert!(rate_row(1.5).is_err());
        assert!(rate_table(0.5, 0.1, 0.1).is_err());
    }

    #[test]
    fn rankable_sizes() {
        assert_eq!(rankable_size(3).unwrap().exact, Some(8));
        assert_eq!(rankable_size(2).unwrap().exact, Some(3));
        assert_eq!(rankable_size(5).unwrap().exact, Some(144));
        let five = rankable_size(4).unwrap();
        assert_eq!(five.exact, Some(57));
        assert!((five.formula - 45.0).abs() < 1e-9);
        assert_eq!(rankable_size(6).unwrap().exact, None);
        assert!(rankable_size(1).is_err());
    }

    #[test]
    fn curves_below_upper_bound() {
        for row in rate_table(0.05, 1.0, 0.05).unwrap() {
            assert!(row.eq2 <= row.upper + 1e-9, "{row:?}");
            assert!(row.rankable <= row.eq2 + 1e-9, "{row:?}");
        }
    }
}
