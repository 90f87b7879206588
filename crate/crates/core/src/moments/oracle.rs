//! Brute-force moments that never touch a closed form.
//!
//! Two independent paths: the double path sums the log-domain weight rows
//! against exact per-cell polynomial averages; the exact path redoes the
//! whole computation in rational arithmetic from the direct products.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use std::str::FromStr;

use crate::num::summation::NeumaierSum;
use crate::num::weights::check_unit_point;
use crate::num::{bernstein_weights, lupas_weights, polya_weight_row, stancu_weights};
use crate::operators::{Operator, OperatorParams};
use crate::{Error, Result};

/// Largest n accepted by the exact path.
pub const EXACT_ORACLE_MAX_N: u32 = 60;
/// Largest n accepted by the double path.
pub const LOG_ORACLE_MAX_N: u32 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentKind {
    /// `T(e_j; x)`
    Raw,
    /// `T((e_1 − x)^j; x)`
    Central,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OraclePath {
    #[default]
    Log,
    Exact,
}

impl OraclePath {
    pub fn as_str(self) -> &'static str {
        match self {
            OraclePath::Log => "log",
            OraclePath::Exact => "extended",
        }
    }
}

impl FromStr for OraclePath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "log" => Ok(OraclePath::Log),
            "extended" | "exact" => Ok(OraclePath::Exact),
            _ => Err(Error::InvalidArgument(format!("oracle must be `log` or `extended`, got `{s}`"))),
        }
    }
}

/// Mean of `t^j` over `[a, b]`, i.e. `(b^{j+1} − a^{j+1}) / ((j+1)(b − a))`,
/// written without the cancelling difference.
fn cell_mean_power(a: f64, b: f64, j: u32) -> f64 {
    let mut acc = NeumaierSum::new();
    for i in 0..=j {
        acc.add(a.powi(i as i32) * b.powi((j - i) as i32));
    }
    acc.value() / f64::from(j + 1)
}

/// Mean of `t^j` over `[a, b]` at a degenerate-free cell in exact arithmetic.
fn cell_mean_power_exact(a: &BigRational, b: &BigRational, j: u32) -> BigRational {
    let mut acc = BigRational::zero();
    for i in 0..=j {
        acc += pow(a, i) * pow(b, j - i);
    }
    acc / BigRational::from_integer(BigInt::from(j + 1))
}

fn pow(v: &BigRational, e: u32) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * v)
}

/// How an operator places its mass: nodes `m/n`, or cells
/// `[(m+α)/s, (m+α+1)/s]`.
#[derive(Debug, Clone, Copy)]
enum Support {
    Nodes,
    Cells { alpha: f64, scale: f64 },
}

fn support(op: &Operator) -> Support {
    match *op {
        Operator::Bernstein { .. } | Operator::Stancu { .. } | Operator::Lupas { .. } | Operator::LupasK { .. } => {
            Support::Nodes
        }
        Operator::BernsteinKantorovich { n } | Operator::DStar { n } => {
            Support::Cells { alpha: 0.0, scale: f64::from(n) + 1.0 }
        }
        Operator::KantorovichStancuK(p) => Support::Cells { alpha: p.alpha, scale: p.scale() },
    }
}

fn weights_f64(op: &Operator, x: f64) -> Result<Vec<f64>> {
    match *op {
        Operator::Bernstein { n } | Operator::BernsteinKantorovich { n } => bernstein_weights(n, x),
        Operator::Stancu { n, alpha } => stancu_weights(n, alpha, x),
        Operator::Lupas { n } | Operator::DStar { n } => lupas_weights(n, x),
        Operator::LupasK { n, k } => Ok(polya_weight_row(n, k, x)?.weights),
        Operator::KantorovichStancuK(p) => Ok(polya_weight_row(p.n, p.k, x)?.weights),
    }
}

/// Moment of `op` at `x` by direct summation in double precision.
pub fn moment_oracle_log(op: &Operator, x: f64, order: u32, kind: MomentKind) -> Result<f64> {
    check_unit_point(x)?;
    let n = op.n();
    if n > LOG_ORACLE_MAX_N {
        return Err(Error::OracleRange { n, max: LOG_ORACLE_MAX_N });
    }
    let w = weights_f64(op, x)?;
    let shift = match kind {
        MomentKind::Raw => 0.0,
        MomentKind::Central => x,
    };
    let nf = f64::from(n);
    let mut acc = NeumaierSum::new();
    for (m, &wm) in w.iter().enumerate() {
        if wm == 0.0 {
            continue;
        }
        let mf = m as f64;
        let val = match support(op) {
            Support::Nodes => (mf / nf - shift).powi(order as i32),
            Support::Cells { alpha, scale } => {
                let a = (mf + alpha) / scale - shift;
                let b = (mf + alpha + 1.0) / scale - shift;
                cell_mean_power(a, b, order)
            }
        };
        acc.add(wm * val);
    }
    Ok(acc.value())
}

fn rational(v: f64) -> Result<BigRational> {
    BigRational::from_float(v).ok_or_else(|| Error::NonFinite(format!("{v} has no rational value")))
}

fn int(v: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn poch_exact(lambda: &BigRational, m: u32, step: &BigRational) -> BigRational {
    let mut acc = BigRational::one();
    let mut factor = lambda.clone();
    for _ in 0..m {
        acc *= &factor;
        factor += step;
    }
    acc
}

fn binomial_exact(n: u32, m: u32) -> BigRational {
    let mut acc = BigInt::one();
    for i in 0..m {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    BigRational::from_integer(acc)
}

/// `C(n,m)(a)_{m,s}(b)_{n−m,s}/(total)_{n,s}` by direct products.
pub fn polya_weights_exact(
    n: u32,
    a: &BigRational,
    b: &BigRational,
    total: &BigRational,
    step: &BigRational,
) -> Vec<BigRational> {
    let denom = poch_exact(total, n, step);
    (0..=n).map(|m| binomial_exact(n, m) * poch_exact(a, m, step) * poch_exact(b, n - m, step) / &denom).collect()
}

/// Exact weight row of `op` at `x`, with all inputs read as exact dyadic
/// rationals.
pub fn weights_exact(op: &Operator, x: f64) -> Result<Vec<BigRational>> {
    check_unit_point(x)?;
    let n = op.n();
    if n > EXACT_ORACLE_MAX_N {
        return Err(Error::OracleRange { n, max: EXACT_ORACLE_MAX_N });
    }
    let xr = rational(x)?;
    let one = BigRational::one();
    let nr = int(n);
    Ok(match *op {
        Operator::Stancu { alpha, .. } => polya_weights_exact(n, &xr, &(&one - &xr), &one, &rational(alpha)?),
        _ => {
            let step = match *op {
                Operator::Bernstein { .. } | Operator::BernsteinKantorovich { .. } => BigRational::zero(),
                Operator::Lupas { .. } | Operator::DStar { .. } => one.clone(),
                Operator::LupasK { k, .. } => rational(k)?,
                Operator::KantorovichStancuK(p) => rational(p.k)?,
                Operator::Stancu { .. } => unreachable!(),
            };
            let a = &nr * &xr;
            let b = &nr - &a;
            polya_weights_exact(n, &a, &b, &nr, &step)
        }
    })
}

/// Moment of `op` at `x` in exact rational arithmetic, rounded once at the end.
pub fn moment_oracle_exact(op: &Operator, x: f64, order: u32, kind: MomentKind) -> Result<f64> {
    let w = weights_exact(op, x)?;
    let xr = rational(x)?;
    let shift = match kind {
        MomentKind::Raw => BigRational::zero(),
        MomentKind::Central => xr,
    };
    let n = int(op.n());
    let (alpha, scale) = match support(op) {
        Support::Nodes => (None, None),
        Support::Cells { .. } => match *op {
            Operator::KantorovichStancuK(p) => {
                (Some(rational(p.alpha)?), Some(&n + rational(p.beta)? + BigRational::one()))
            }
            _ => (Some(BigRational::zero()), Some(&n + BigRational::one())),
        },
    };
    let mut acc = BigRational::zero();
    for (m, wm) in w.iter().enumerate() {
        if wm.is_zero() {
            continue;
        }
        let mr = int(m as u32);
        let val = match (&alpha, &scale) {
            (Some(al), Some(s)) => {
                let a = (&mr + al) / s - &shift;
                let b = (&mr + al + BigRational::one()) / s - &shift;
                cell_mean_power_exact(&a, &b, order)
            }
            _ => pow(&(&mr / &n - &shift), order),
        };
        acc += wm * val;
    }
    acc.to_f64().ok_or_else(|| Error::NonFinite("exact moment does not fit in f64".into()))
}

/// Brute-force moment via the chosen path.
pub fn moment_oracle(op: &Operator, x: f64, order: u32, kind: MomentKind, path: OraclePath) -> Result<f64> {
    match path {
        OraclePath::Log => moment_oracle_log(op, x, order, kind),
        OraclePath::Exact => moment_oracle_exact(op, x, order, kind),
    }
}

/// `K_n^{(α,β,k)}((e_1 − x)^4; x)` by brute force.
pub fn fourth_central_kant_oracle(p: &OperatorParams, x: f64) -> Result<f64> {
    moment_oracle_log(&Operator::KantorovichStancuK(*p), x, 4, MomentKind::Central)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_mean_matches_antiderivative() {
        let (a, b): (f64, f64) = (0.2, 0.45);
        for j in 0..6 {
            let exact = (b.powi(j as i32 + 1) - a.powi(j as i32 + 1)) / ((j as f64 + 1.0) * (b - a));
            assert!((cell_mean_power(a, b, j) - exact).abs() < 1e-15);
        }
    }

    #[test]
    fn constants_are_reproduced() {
        let p = OperatorParams::new(10, 0.3, 1.0, 2.0).unwrap();
        let ops = [
            Operator::Bernstein { n: 10 },
            Operator::Stancu { n: 10, alpha: 0.2 },
            Operator::Lupas { n: 10 },
            Operator::LupasK { n: 10, k: 0.3 },
            Operator::BernsteinKantorovich { n: 10 },
            Operator::KantorovichStancuK(p),
            Operator::DStar { n: 10 },
        ];
        for op in &ops {
            for &x in &[0.0, 0.37, 1.0] {
                for path in [OraclePath::Log, OraclePath::Exact] {
                    let v = moment_oracle(op, x, 0, MomentKind::Raw, path).unwrap();
                    assert!((v - 1.0).abs() < 1e-12, "{op:?} {x} {path:?}");
                }
            }
        }
    }

    #[test]
    fn kantorovich_first_moment_example() {
        let p = OperatorParams::new(10, 0.7, 1.0, 2.0).unwrap();
        let op = Operator::KantorovichStancuK(p);
        for path in [OraclePath::Log, OraclePath::Exact] {
            let v = moment_oracle(&op, 0.5, 1, MomentKind::Raw, path).unwrap();
            assert!((v - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn paths_agree() {
        let p = OperatorParams::new(17, 0.45, 0.5, 1.25).unwrap();
        let op = Operator::KantorovichStancuK(p);
        for j in 0..=4 {
            for kind in [MomentKind::Raw, MomentKind::Central] {
                let a = moment_oracle_log(&op, 0.3, j, kind).unwrap();
                let b = moment_oracle_exact(&op, 0.3, j, kind).unwrap();
                assert!((a - b).abs() < 1e-14, "j={j} {kind:?}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn exact_path_rejects_large_n() {
        let op = Operator::LupasK { n: 61, k: 1.0 };
        assert!(matches!(
            moment_oracle_exact(&op, 0.5, 2, MomentKind::Raw),
            Err(Error::OracleRange { n: 61, max: 60 })
        ));
    }

    #[test]
    fn fourth_central_is_nonnegative() {
        for n in [1, 3, 10, 40] {
            for &k in &[0.0, 1.0, 2.5] {
                let p = OperatorParams::new(n, k, 0.5, 1.0).unwrap();
                for &x in &[0.0, 0.5, 0.9, 1.0] {
                    assert!(fourth_central_kant_oracle(&p, x).unwrap() >= 0.0);
                }
            }
        }
    }
}
