//! Closed-form moments of `P_{n,k}` and `K_n^{(α,β,k)}`.
//!
//! Formulas are transcribed term by term in the grouping they are usually
//! displayed in, so that a slip in one term shows up against the oracle
//! instead of being absorbed by a simplification.

use crate::num::weights::{check_n, check_nonneg, check_unit_point};
use crate::operators::OperatorParams;
use crate::{Error, Result};

fn lupas_args(n: u32, k: f64, x: f64) -> Result<f64> {
    check_n(n)?;
    check_nonneg("k", k)?;
    check_unit_point(x)?;
    Ok(f64::from(n))
}

/// `P_{n,k}(e_j; x)` for `j ≤ 4`.
pub fn moment_lupas_closed(n: u32, k: f64, x: f64, j: u32) -> Result<f64> {
    let nf = lupas_args(n, k, x)?;
    let xx = x * (1.0 - x);
    Ok(match j {
        0 => 1.0,
        1 => x,
        2 => x * x + (k + 1.0) * xx / (nf + k),
        3 => {
            let d = (nf + k) * (nf + 2.0 * k);
            x.powi(3) + (3.0 * nf + 2.0 * k - 2.0) * (k + 1.0) * x * xx / d + (2.0 * k + 1.0) * (k + 1.0) * xx / d
        }
        4 => {
            let d = (nf + k) * (nf + 2.0 * k) * (nf + 3.0 * k);
            x.powi(4)
                + (k + 1.0) * ((11.0 * nf - 6.0) * (k - 1.0) + 6.0 * (nf * nf + k * k)) * x * x * xx / d
                + (k + 1.0) * (7.0 * nf + 11.0 * nf * k + 6.0 * (k * k - k - 1.0)) * x * xx / d
                + (k + 1.0) * (nf - k + 6.0 * nf * k * (k + 1.0)) * xx / (nf * d)
        }
        _ => return Err(Error::UnsupportedOrder(format!("raw moment e{j} (max 4)"))),
    })
}

/// `P_{n,k}((e_1 − x)^r; x)` for `r ≤ 4`.
pub fn central_moment_lupas_closed(n: u32, k: f64, x: f64, order: u32) -> Result<f64> {
    let nf = lupas_args(n, k, x)?;
    let xx = x * (1.0 - x);
    Ok(match order {
        0 => 1.0,
        1 => 0.0,
        2 => {
            // coefficient first: keeps the k-monotonicity exact in floating point
            let c = (k + 1.0) / (nf + k);
            c * xx
        }
        3 => (k + 1.0) * (2.0 * k + 1.0) * xx * (1.0 - 2.0 * x) / ((nf + k) * (nf + 2.0 * k)),
        4 => {
            let d = nf * (nf + k) * (nf + 2.0 * k) * (nf + 3.0 * k);
            (k + 1.0) * 3.0 * nf * (-2.0 + nf + k * (-6.0 - 6.0 * k + nf)) * xx * xx / d
                + (k + 1.0) * (nf + k * (-1.0 + 6.0 * (k + 1.0) * nf)) * xx / d
        }
        _ => return Err(Error::UnsupportedOrder(format!("central moment of order {order} (max 4)"))),
    })
}

/// `K_n^{(α,β,k)}(e_j; x)` for `j ≤ 4`.
pub fn moment_kant_closed(p: &OperatorParams, x: f64, j: u32) -> Result<f64> {
    check_unit_point(x)?;
    let (n, k, a) = (f64::from(p.n), p.k, p.alpha);
    let s = p.scale();
    Ok(match j {
        0 => 1.0,
        1 => n * x / s + (2.0 * a + 1.0) / (2.0 * s),
        2 => {
            let d = s * s * (n + k);
            n * n * (n - 1.0) * x * x / d
                + ((2.0 * a + 2.0 + k) * n + (2.0 * a + 1.0) * k) * n * x / d
                + (3.0 * a * a + 3.0 * a + 1.0) / (3.0 * s * s)
        }
        3 => {
            let d = s.powi(3) * (n + k) * (n + 2.0 * k);
            let c3 = (n - 1.0) * (n - 2.0) * n.powi(3) / d;
            let c2 = 3.0 * n * n * (n - 1.0) * ((3.0 + 2.0 * a + 2.0 * k) * n + 2.0 * (1.0 + 2.0 * a) * k) / (2.0 * d);
            let c1 = (4.0 * (1.0 + 3.0 * a * (1.0 + a)) * k * k * n
                + 6.0 * k * (2.0 + k + a * (5.0 + 3.0 * a + 2.0 * k)) * n * n
                + (7.0 + 6.0 * a * a + 6.0 * a * (2.0 + k) + k * (9.0 + 4.0 * k)) * n.powi(3))
                / (2.0 * d);
            let c0 = (4.0 * a.powi(3) + 6.0 * a * a + 4.0 * a + 1.0) / (4.0 * s.powi(3));
            ((c3 * x + c2) * x + c1) * x + c0
        }
        4 => {
            let d = s.powi(4) * (n + k) * (n + 2.0 * k) * (n + 3.0 * k);
            let c4 = (n - 1.0) * (n - 2.0) * (n - 3.0) * n.powi(4) / d;
            let c3 =
                2.0 * n.powi(3) * (n - 1.0) * (n - 2.0) * ((4.0 + 2.0 * a + 3.0 * k) * n + 3.0 * (1.0 + 2.0 * a) * k)
                    / d;
            let c2 = (-12.0 * (1.0 + 3.0 * a * (1.0 + a)) * k * k * n * n
                + k * (-27.0 - 5.0 * k + 6.0 * a * (-11.0 + a * (-5.0 + 6.0 * k))) * n.powi(3)
                + 3.0
                    * (-5.0 - 2.0 * a * (3.0 + a) + k + 2.0 * a * (9.0 + 5.0 * a) * k + 2.0 * (1.0 + 6.0 * a) * k * k)
                    * n.powi(4)
                + (15.0 + 6.0 * a * a + 6.0 * a * (3.0 + 2.0 * k) + k * (24.0 + 11.0 * k)) * n.powi(5))
                / d;
            let c1 = (6.0 * (1.0 + 2.0 * a * (2.0 + a * (3.0 + 2.0 * a))) * k.powi(3) * n
                + k * k
                    * (23.0 + 12.0 * k + 2.0 * a * (40.0 + 51.0 * a + 22.0 * a * a + 18.0 * (1.0 + a) * k))
                    * n
                    * n
                + 3.0
                    * k
                    * (7.0
                        + 22.0 * a
                        + 22.0 * a * a
                        + 8.0 * a.powi(3)
                        + 9.0 * k
                        + 22.0 * a * k
                        + 10.0 * a * a * k
                        + 4.0 * k * k
                        + 8.0 * a * k * k)
                    * n.powi(3)
                + (6.0
                    + 2.0 * a * (7.0 + 2.0 * a * (3.0 + a))
                    + 15.0 * k
                    + 6.0 * a * (3.0 + a) * k
                    + 8.0 * (2.0 + a) * k * k
                    + 6.0 * k.powi(3))
                    * n.powi(4))
                / d;
            let c0 = (5.0 * a.powi(4) + 10.0 * a.powi(3) + 10.0 * a * a + 5.0 * a + 1.0) / (5.0 * s.powi(4));
            (((c4 * x + c3) * x + c2) * x + c1) * x + c0
        }
        _ => return Err(Error::UnsupportedOrder(format!("raw moment e{j} (max 4)"))),
    })
}

/// `K_n^{(α,β,k)}((e_1 − x)^r; x)` for `r ∈ {0, 1, 2}`.
pub fn central_moment_kant_closed(p: &OperatorParams, x: f64, order: u32) -> Result<f64> {
    check_unit_point(x)?;
    let (n, k, a, b) = (f64::from(p.n), p.k, p.alpha, p.beta);
    let s = p.scale();
    Ok(match order {
        0 => 1.0,
        1 => (2.0 * a + 1.0) / (2.0 * s) - (b + 1.0) * x / s,
        2 => {
            let d = s * s * (n + k);
            ((b + 1.0).powi(2) * (n + k) - (k + 1.0) * n * n) * x * x / d
                + ((k + 1.0) * n * n - (1.0 + 2.0 * a) * (b + 1.0) * (n + k)) * x / d
                + (3.0 * a * a + 3.0 * a + 1.0) / (3.0 * s * s)
        }
        _ => {
            return Err(Error::UnsupportedOrder(format!(
                "no closed form for Kantorovich central moment of order {order}"
            )))
        }
    })
}

/// Uniform bound ξ on the second central moment of `K_n^{(α,β,k)}`.
pub fn xi_bound(p: &OperatorParams) -> f64 {
    let (k, a, b) = (p.k, p.alpha, p.beta);
    ((k + 1.0) / 4.0 + b + 2.0 * a + ((a + 1.0).powi(3) - a.powi(3)) / 3.0) / p.scale()
}

/// Right-hand side of the Voronovskaja limit for `K_n^{(α,β,k)}` given
/// `f′(x)` and `f″(x)`.
pub fn voronovskaja_rhs_1d(p: &OperatorParams, x: f64, f1: f64, f2: f64) -> f64 {
    0.5 * ((2.0 * p.alpha + 1.0 - 2.0 * (p.beta + 1.0) * x) * f1 + (p.k + 1.0) * x * (1.0 - x) * f2)
}

/// Limits of `n·ν₁`, `n·ν₂` and `n²·ν₄` as n → ∞.
pub fn central_moment_limits(p: &OperatorParams, x: f64) -> [f64; 3] {
    let xx = x * (1.0 - x);
    [p.alpha + 0.5 - (p.beta + 1.0) * x, (p.k + 1.0) * xx, 3.0 * (p.k + 1.0).powi(2) * xx * xx]
}
