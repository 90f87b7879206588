//! Bivariate test-function moments: closed forms and a double-sum oracle.

use serde::Serialize;

use super::BivariateParams;
use crate::moments::{moment_oracle_log, MomentKind};
use crate::num::polya_weight_row;
use crate::num::summation::NeumaierSum;
use crate::num::weights::check_unit_point;
use crate::operators::{uniform_grid, Operator, OperatorParams};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Moment2d {
    E00,
    E10,
    E01,
    E20,
    E02,
}

impl Moment2d {
    pub const ALL: [Moment2d; 5] = [Moment2d::E00, Moment2d::E10, Moment2d::E01, Moment2d::E20, Moment2d::E02];

    /// Exponents `(i, j)` of `x^i y^j`.
    pub fn exponents(self) -> (u32, u32) {
        match self {
            Moment2d::E00 => (0, 0),
            Moment2d::E10 => (1, 0),
            Moment2d::E01 => (0, 1),
            Moment2d::E20 => (2, 0),
            Moment2d::E02 => (0, 2),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CentralMoment2d {
    /// `(e₁₀ − x)`
    X1,
    /// `(e₀₁ − y)`
    Y1,
    /// `(e₁₀ − x)²`
    X2,
    /// `(e₀₁ − y)²`
    Y2,
}

impl CentralMoment2d {
    pub const ALL: [CentralMoment2d; 4] =
        [CentralMoment2d::X1, CentralMoment2d::Y1, CentralMoment2d::X2, CentralMoment2d::Y2];
}

fn first(p: &OperatorParams, x: f64) -> f64 {
    let s = p.scale();
    (2.0 * p.alpha + 1.0) / (2.0 * s) + f64::from(p.n) * x / s
}

fn second(p: &OperatorParams, x: f64) -> f64 {
    let (n, k, a) = (f64::from(p.n), p.k, p.alpha);
    let s = p.scale();
    n * n / (s * s) * (x * x + x * (1.0 - x) * ((k + 1.0) / (n + k)))
        + (2.0 * a + 1.0) * n * x / (s * s)
        + ((a + 1.0).powi(3) - a.powi(3)) / (3.0 * s * s)
}

fn central_first(p: &OperatorParams, x: f64) -> f64 {
    let s = p.scale();
    (2.0 * p.alpha + 1.0) / (2.0 * s) - (p.beta + 1.0) * x / s
}

fn central_second(p: &OperatorParams, x: f64) -> f64 {
    let (n, k, a, b) = (f64::from(p.n), p.k, p.alpha, p.beta);
    let s = p.scale();
    (x * (1.0 - x) * (n * n * (k + 1.0) / (n + k) - (b + 1.0).powi(2))
        + (b + 1.0) * (b - 2.0 * a) * x
        + ((a + 1.0).powi(3) - a.powi(3)) / 3.0)
        / (s * s)
}

/// Closed form of `K(e_ij; x, y)` for the five test functions.
pub fn moment_2d_closed(bp: &BivariateParams, x: f64, y: f64, which: Moment2d) -> Result<f64> {
    check_unit_point(x)?;
    check_unit_point(y)?;
    Ok(match which {
        Moment2d::E00 => 1.0,
        Moment2d::E10 => first(&bp.px, x),
        Moment2d::E01 => first(&bp.py, y),
        Moment2d::E20 => second(&bp.px, x),
        Moment2d::E02 => second(&bp.py, y),
    })
}

/// Closed form of the axis central moments of orders 1 and 2.
pub fn central_moment_2d_closed(bp: &BivariateParams, x: f64, y: f64, which: CentralMoment2d) -> Result<f64> {
    check_unit_point(x)?;
    check_unit_point(y)?;
    Ok(match which {
        CentralMoment2d::X1 => central_first(&bp.px, x),
        CentralMoment2d::Y1 => central_first(&bp.py, y),
        CentralMoment2d::X2 => central_second(&bp.px, x),
        CentralMoment2d::Y2 => central_second(&bp.py, y),
    })
}

/// Cell means of `(t − shift)^j` for every cell of one axis.
fn axis_cell_means(p: &OperatorParams, shift: f64, j: u32) -> Vec<f64> {
    (0..=p.n)
        .map(|m| {
            let (a, b) = p.cell(m);
            let (u, v) = (a - shift, b - shift);
            let mut acc = NeumaierSum::new();
            for i in 0..=j {
                acc.add(u.powi(i as i32) * v.powi((j - i) as i32));
            }
            acc.value() / f64::from(j + 1)
        })
        .collect()
}

/// `K((t − cx)^i (s − cy)^j; x, y)` by the full double sum, where the
/// centers are 0 or the evaluation point.
pub fn moment_2d_oracle(bp: &BivariateParams, x: f64, y: f64, i: u32, j: u32, central: bool) -> Result<f64> {
    let w1 = polya_weight_row(bp.px.n, bp.px.k, x)?.weights;
    let w2 = polya_weight_row(bp.py.n, bp.py.k, y)?.weights;
    let (cx, cy) = if central { (x, y) } else { (0.0, 0.0) };
    let mx = axis_cell_means(&bp.px, cx, i);
    let my = axis_cell_means(&bp.py, cy, j);
    let mut acc = NeumaierSum::new();
    for (a, ma) in w1.iter().zip(&mx) {
        for (b, mb) in w2.iter().zip(&my) {
            acc.add(a * b * ma * mb);
        }
    }
    Ok(acc.value())
}

/// `K((t − x)(s − y); x, y)`.
pub fn cross_moment_oracle(bp: &BivariateParams, x: f64, y: f64) -> Result<f64> {
    moment_2d_oracle(bp, x, y, 1, 1, true)
}

/// `λ = max_x K((e₁ − x)²; x)` over a uniform grid, via the oracle.
pub fn axis_second_central_sup(p: &OperatorParams, grid_points: usize) -> Result<f64> {
    let op = Operator::KantorovichStancuK(*p);
    let mut best: f64 = 0.0;
    for x in uniform_grid(grid_points) {
        best = best.max(moment_oracle_log(&op, x, 2, MomentKind::Central)?);
    }
    Ok(best)
}
