//! Tensor-product evaluation.
//!
//! Cell integrals use the tensor product of the axis Gauss–Legendre rules.
//! A point evaluation only visits cells whose weights are above
//! [`WEIGHT_CUTOFF`]; surfaces precompute the full matrix of cell means once
//! and reuse it for every node.

use rayon::prelude::*;
use serde::Serialize;

use super::{BivariateFunctionSpec, BivariateParams};
use crate::num::summation::NeumaierSum;
use crate::num::weights::check_unit_point;
use crate::num::{lupas_weights, polya_weight_row, QuadratureRule};
use crate::operators::{uniform_grid, OperatorParams};
use crate::report::{fmt_f64, CsvRecord};
use crate::Result;

/// Weights below this contribute nothing representable next to the O(1)
/// total mass.
pub const WEIGHT_CUTOFF: f64 = 1e-40;

/// One axis of a tensor operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Axis {
    /// Polya k-row on cells `[(m+α)/(n+β+1), (m+α+1)/(n+β+1)]`.
    Kantorovich(OperatorParams),
    /// Classical Lupaş row on cells `[m/(n+1), (m+1)/(n+1)]`.
    DStar(u32),
}

impl Axis {
    pub fn n(&self) -> u32 {
        match *self {
            Axis::Kantorovich(p) => p.n,
            Axis::DStar(n) => n,
        }
    }

    pub fn weights(&self, x: f64) -> Result<Vec<f64>> {
        match *self {
            Axis::Kantorovich(p) => Ok(polya_weight_row(p.n, p.k, x)?.weights),
            Axis::DStar(n) => lupas_weights(n, x),
        }
    }

    pub fn cell(&self, m: u32) -> (f64, f64) {
        match *self {
            Axis::Kantorovich(p) => p.cell(m),
            Axis::DStar(n) => {
                let s = f64::from(n) + 1.0;
                (f64::from(m) / s, (f64::from(m) + 1.0) / s)
            }
        }
    }

    /// Quadrature nodes of cell m with weights normalized to sum to 1, so
    /// that `Σ w f(t)` is the cell mean.
    fn cell_rule(&self, m: u32, quad: &QuadratureRule) -> Vec<(f64, f64)> {
        let (a, b) = self.cell(m);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        quad.nodes.iter().zip(&quad.weights).map(|(t, w)| (mid + half * t, 0.5 * w)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BivariateOperator {
    pub ax: Axis,
    pub ay: Axis,
}

impl BivariateOperator {
    pub fn kantorovich(bp: &BivariateParams) -> Self {
        Self { ax: Axis::Kantorovich(bp.px), ay: Axis::Kantorovich(bp.py) }
    }

    /// The bivariate Kantorovich–Lupaş operator `D*_{n₁,n₂}`.
    pub fn d_star(n1: u32, n2: u32) -> Self {
        Self { ax: Axis::DStar(n1), ay: Axis::DStar(n2) }
    }
}

/// Smallest index range holding every weight ≥ [`WEIGHT_CUTOFF`].
fn active_range(w: &[f64]) -> std::ops::RangeInclusive<usize> {
    let lo = w.iter().position(|&v| v >= WEIGHT_CUTOFF).unwrap_or(0);
    let hi = w.iter().rposition(|&v| v >= WEIGHT_CUTOFF).unwrap_or(w.len() - 1);
    lo..=hi
}

fn cell_mean(f: &BivariateFunctionSpec, rx: &[(f64, f64)], ry: &[(f64, f64)]) -> f64 {
    let mut acc = NeumaierSum::new();
    for &(t, wt) in rx {
        for &(s, ws) in ry {
            acc.add(wt * ws * f.eval(t, s));
        }
    }
    acc.value()
}

/// `K(f; x, y)` at a single point.
pub fn eval_2d_with(
    f: &BivariateFunctionSpec,
    op: &BivariateOperator,
    x: f64,
    y: f64,
    quad: &QuadratureRule,
) -> Result<f64> {
    check_unit_point(x)?;
    check_unit_point(y)?;
    let (w1, w2) = (op.ax.weights(x)?, op.ay.weights(y)?);
    let r2 = active_range(&w2);
    let ry: Vec<(usize, Vec<(f64, f64)>)> = r2.map(|m| (m, op.ay.cell_rule(m as u32, quad))).collect();
    let rows: Vec<f64> = active_range(&w1)
        .into_par_iter()
        .map(|m1| {
            let rx = op.ax.cell_rule(m1 as u32, quad);
            let mut acc = NeumaierSum::new();
            for (m2, rule) in &ry {
                acc.add(w2[*m2] * cell_mean(f, &rx, rule));
            }
            w1[m1] * acc.value()
        })
        .collect();
    Ok(rows.into_iter().collect::<NeumaierSum>().value())
}

/// `K_{n₁,n₂}^{(α,β,k)}(f; x, y)`.
pub fn eval_2d(f: &BivariateFunctionSpec, bp: &BivariateParams, x: f64, y: f64, quad: &QuadratureRule) -> Result<f64> {
    eval_2d_with(f, &BivariateOperator::kantorovich(bp), x, y, quad)
}

/// Matrix of cell means `A[m₁][m₂]`, so that `K(f; x, y) = w₁ᵀ A w₂`.
#[derive(Debug, Clone)]
pub struct CellMeans {
    pub op: BivariateOperator,
    rows: Vec<Vec<f64>>,
}

impl CellMeans {
    pub fn new(f: &BivariateFunctionSpec, op: &BivariateOperator, quad: &QuadratureRule) -> Self {
        let ry: Vec<Vec<(f64, f64)>> = (0..=op.ay.n()).map(|m| op.ay.cell_rule(m, quad)).collect();
        let rows = (0..=op.ax.n())
            .into_par_iter()
            .map(|m1| {
                let rx = op.ax.cell_rule(m1, quad);
                ry.iter().map(|rule| cell_mean(f, &rx, rule)).collect()
            })
            .collect();
        Self { op: *op, rows }
    }

    /// `w₁ᵀ A w₂` from precomputed weight rows.
    pub fn apply(&self, w1: &[f64], w2: &[f64]) -> f64 {
        let mut acc = NeumaierSum::new();
        for (row, &a) in self.rows.iter().zip(w1) {
            if a == 0.0 {
                continue;
            }
            let mut inner = NeumaierSum::new();
            for (&c, &b) in row.iter().zip(w2) {
                inner.add(c * b);
            }
            acc.add(a * inner.value());
        }
        acc.value()
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        Ok(self.apply(&self.op.ax.weights(x)?, &self.op.ay.weights(y)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfacePoint {
    pub x: f64,
    pub y: f64,
    pub f: f64,
    pub k_f: f64,
}

impl CsvRecord for SurfacePoint {
    fn header() -> Vec<&'static str> {
        vec!["x", "y", "f", "K_f"]
    }

    fn record(&self) -> Vec<String> {
        vec![fmt_f64(self.x), fmt_f64(self.y), fmt_f64(self.f), fmt_f64(self.k_f)]
    }
}

/// `K f` on the tensor grid `xs × ys`, x-major.
pub fn surface(
    f: &BivariateFunctionSpec,
    op: &BivariateOperator,
    xs: &[f64],
    ys: &[f64],
    quad: &QuadratureRule,
) -> Result<Vec<SurfacePoint>> {
    let cells = CellMeans::new(f, op, quad);
    let wx = xs.iter().map(|&x| op.ax.weights(x)).collect::<Result<Vec<_>>>()?;
    let wy = ys.iter().map(|&y| op.ay.weights(y)).collect::<Result<Vec<_>>>()?;
    let rows: Vec<Vec<SurfacePoint>> = xs
        .par_iter()
        .zip(&wx)
        .map(|(&x, w1)| {
            ys.iter()
                .zip(&wy)
                .map(|(&y, w2)| SurfacePoint { x, y, f: f.eval(x, y), k_f: cells.apply(w1, w2) })
                .collect()
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

/// Sup of `|K f − f|` over the `points × points` uniform grid.
pub fn sup_error_2d(
    f: &BivariateFunctionSpec,
    op: &BivariateOperator,
    points: usize,
    quad: &QuadratureRule,
) -> Result<f64> {
    let g = uniform_grid(points);
    Ok(surface(f, op, &g, &g, quad)?.iter().map(|p| (p.k_f - p.f).abs()).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::super::lookup2d;
    use super::*;
    use crate::catalog::lookup;
    use crate::operators::eval_kantorovich_stancu_k;

    #[allow(clippy::too_many_arguments)]
    fn bp(n1: u32, k1: f64, a1: f64, b1: f64, n2: u32, k2: f64, a2: f64, b2: f64) -> BivariateParams {
        BivariateParams::new(OperatorParams::new(n1, k1, a1, b1).unwrap(), OperatorParams::new(n2, k2, a2, b2).unwrap())
    }

    #[test]
    fn constants_are_reproduced() {
        let q = QuadratureRule::default_rule();
        let p = bp(7, 0.4, 0.5, 1.0, 12, 2.0, 0.0, 0.0);
        let e00 = lookup2d("e00").unwrap();
        for &(x, y) in &[(0.0, 0.0), (0.3, 0.9), (1.0, 0.5)] {
            assert!((eval_2d(&e00, &p, x, y, &q).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn separable_products_factor() {
        let q = QuadratureRule::default_rule();
        let p = bp(9, 0.3, 1.0, 2.0, 6, 1.5, 0.5, 0.5);
        let (g, h) = (lookup("f3").unwrap(), lookup("f5").unwrap());
        let f = lookup2d("f3*f5").unwrap();
        let (x, y) = (0.37, 0.81);
        let lhs = eval_2d(&f, &p, x, y, &q).unwrap();
        let rhs =
            eval_kantorovich_stancu_k(&g, &p.px, x, &q).unwrap() * eval_kantorovich_stancu_k(&h, &p.py, y, &q).unwrap();
        assert!((lhs - rhs).abs() < 1e-13, "{lhs} vs {rhs}");
    }

    #[test]
    fn cell_matrix_matches_point_evaluation() {
        let q = QuadratureRule::default_rule();
        let p = bp(8, 0.2, 0.0, 1.0, 11, 1.0, 0.5, 0.5);
        let f = lookup2d("f8").unwrap();
        let op = BivariateOperator::kantorovich(&p);
        let cells = CellMeans::new(&f, &op, &q);
        for &(x, y) in &[(0.1, 0.2), (0.5, 0.5), (1.0, 0.0)] {
            let a = cells.eval(x, y).unwrap();
            let b = eval_2d(&f, &p, x, y, &q).unwrap();
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn d_star_matches_k_one_unshifted() {
        let q = QuadratureRule::default_rule();
        let p = bp(10, 1.0, 0.0, 0.0, 10, 1.0, 0.0, 0.0);
        let f = lookup2d("f7").unwrap();
        for &(x, y) in &[(0.2, 0.7), (0.5, 0.5), (0.95, 0.05)] {
            let a = eval_2d(&f, &p, x, y, &q).unwrap();
            let b = eval_2d_with(&f, &BivariateOperator::d_star(10, 10), x, y, &q).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn surface_layout_is_x_major() {
        let q = QuadratureRule::default_rule();
        let f = lookup2d("e10").unwrap();
        let op = BivariateOperator::d_star(4, 4);
        let pts = surface(&f, &op, &[0.0, 1.0], &[0.0, 0.5, 1.0], &q).unwrap();
        assert_eq!(pts.len(), 6);
        assert_eq!((pts[1].x, pts[1].y), (0.0, 0.5));
        assert_eq!((pts[3].x, pts[3].y), (1.0, 0.0));
    }
}
