//! Univariate operators: the Lupaş k-operator `P_{n,k}`, its
//! Kantorovich–Stancu modification `K_n^{(α,β,k)}`, and the classical
//! operators they reduce to.

use rayon::prelude::*;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

use crate::catalog::FunctionSpec;
use crate::num::summation::NeumaierSum;
use crate::num::weights::{check_n, check_nonneg, check_unit_point};
use crate::num::{bernstein_weights, lupas_weights, polya_weight_row, stancu_weights, QuadratureRule};
use crate::report::{fmt_f64, CsvRecord};
use crate::{Error, Result};

/// Parameters `(n, k, α, β)` of one operator instance, with `0 ≤ α ≤ β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatorParams {
    pub n: u32,
    pub k: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl OperatorParams {
    pub fn new(n: u32, k: f64, alpha: f64, beta: f64) -> Result<Self> {
        check_n(n)?;
        check_nonneg("k", k)?;
        check_nonneg("alpha", alpha)?;
        check_nonneg("beta", beta)?;
        if alpha > beta {
            return Err(Error::InvalidParams(format!("alpha <= beta violated: alpha = {alpha}, beta = {beta}")));
        }
        Ok(Self { n, k, alpha, beta })
    }

    /// `(n, k, 0, 0)`.
    pub fn unshifted(n: u32, k: f64) -> Result<Self> {
        Self::new(n, k, 0.0, 0.0)
    }

    /// `n + β + 1`, the Kantorovich scale.
    pub fn scale(&self) -> f64 {
        f64::from(self.n) + self.beta + 1.0
    }

    /// Same shape with a different `n`.
    pub fn with_n(&self, n: u32) -> Result<Self> {
        Self::new(n, self.k, self.alpha, self.beta)
    }

    /// Endpoints of the m-th Kantorovich subinterval.
    pub fn cell(&self, m: u32) -> (f64, f64) {
        let s = self.scale();
        let a = f64::from(m) + self.alpha;
        (a / s, (a + 1.0) / s)
    }
}

/// The operator families that can be addressed by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorTag {
    Bernstein,
    Stancu,
    Lupas,
    LupasK,
    BernsteinKantorovich,
    KantorovichStancuK,
    DStar,
}

impl OperatorTag {
    pub const ALL: [OperatorTag; 7] = [
        OperatorTag::Bernstein,
        OperatorTag::Stancu,
        OperatorTag::Lupas,
        OperatorTag::LupasK,
        OperatorTag::BernsteinKantorovich,
        OperatorTag::KantorovichStancuK,
        OperatorTag::DStar,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            OperatorTag::Bernstein => "bernstein",
            OperatorTag::Stancu => "stancu",
            OperatorTag::Lupas => "lupas",
            OperatorTag::LupasK => "lupas_k",
            OperatorTag::BernsteinKantorovich => "bernstein_kantorovich",
            OperatorTag::KantorovichStancuK => "kantorovich_stancu_k",
            OperatorTag::DStar => "d_star",
        }
    }

    pub fn is_kantorovich(self) -> bool {
        matches!(self, OperatorTag::BernsteinKantorovich | OperatorTag::KantorovichStancuK | OperatorTag::DStar)
    }
}

impl fmt::Display for OperatorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OperatorTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        OperatorTag::ALL.into_iter().find(|t| t.as_str() == s).ok_or_else(|| Error::UnknownOperator(s.to_string()))
    }
}

/// A fully parameterized operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Operator {
    Bernstein {
        n: u32,
    },
    /// Stancu operator with Polya parameter `alpha`.
    Stancu {
        n: u32,
        alpha: f64,
    },
    Lupas {
        n: u32,
    },
    LupasK {
        n: u32,
        k: f64,
    },
    BernsteinKantorovich {
        n: u32,
    },
    KantorovichStancuK(OperatorParams),
    DStar {
        n: u32,
    },
}

impl Operator {
    /// Builds an operator from a tag and the generic parameter bundle. For
    /// `stancu`, `params.alpha` is the Polya parameter; other tags ignore
    /// the fields they do not use.
    pub fn from_tag(tag: OperatorTag, params: OperatorParams) -> Operator {
        let n = params.n;
        match tag {
            OperatorTag::Bernstein => Operator::Bernstein { n },
            OperatorTag::Stancu => Operator::Stancu { n, alpha: params.alpha },
            OperatorTag::Lupas => Operator::Lupas { n },
            OperatorTag::LupasK => Operator::LupasK { n, k: params.k },
            OperatorTag::BernsteinKantorovich => Operator::BernsteinKantorovich { n },
            OperatorTag::KantorovichStancuK => Operator::KantorovichStancuK(params),
            OperatorTag::DStar => Operator::DStar { n },
        }
    }

    pub fn tag(&self) -> OperatorTag {
        match self {
            Operator::Bernstein { .. } => OperatorTag::Bernstein,
            Operator::Stancu { .. } => OperatorTag::Stancu,
            Operator::Lupas { .. } => OperatorTag::Lupas,
            Operator::LupasK { .. } => OperatorTag::LupasK,
            Operator::BernsteinKantorovich { .. } => OperatorTag::BernsteinKantorovich,
            Operator::KantorovichStancuK(_) => OperatorTag::KantorovichStancuK,
            Operator::DStar { .. } => OperatorTag::DStar,
        }
    }

    pub fn n(&self) -> u32 {
        match *self {
            Operator::Bernstein { n }
            | Operator::Stancu { n, .. }
            | Operator::Lupas { n }
            | Operator::LupasK { n, .. }
            | Operator::BernsteinKantorovich { n }
            | Operator::DStar { n } => n,
            Operator::KantorovichStancuK(p) => p.n,
        }
    }

    /// Equivalent `(n, k, α, β)` of the k-symbol family this operator belongs to.
    pub fn equivalent_params(&self) -> OperatorParams {
        let (n, k, alpha, beta) = match *self {
            Operator::Bernstein { n } | Operator::BernsteinKantorovich { n } => (n, 0.0, 0.0, 0.0),
            Operator::Stancu { n, alpha } => (n, alpha * f64::from(n), 0.0, 0.0),
            Operator::Lupas { n } | Operator::DStar { n } => (n, 1.0, 0.0, 0.0),
            Operator::LupasK { n, k } => (n, k, 0.0, 0.0),
            Operator::KantorovichStancuK(p) => return p,
        };
        OperatorParams { n, k, alpha, beta }
    }

    pub fn eval(&self, f: &FunctionSpec, x: f64, quad: &QuadratureRule) -> Result<f64> {
        match *self {
            Operator::Bernstein { n } => eval_bernstein(f, n, x),
            Operator::Stancu { n, alpha } => eval_stancu(f, n, alpha, x),
            Operator::Lupas { n } => eval_lupas(f, n, x),
            Operator::LupasK { n, k } => eval_lupas_k(f, n, k, x),
            Operator::BernsteinKantorovich { n } => eval_bernstein_kantorovich(f, n, x, quad),
            Operator::KantorovichStancuK(p) => eval_kantorovich_stancu_k(f, &p, x, quad),
            Operator::DStar { n } => eval_d_star(f, n, x, quad),
        }
    }
}

/// Σ_m w_m f(m/n), compensated.
fn nodal_sum(f: &FunctionSpec, weights: &[f64]) -> f64 {
    let n = (weights.len() - 1) as f64;
    let mut acc = NeumaierSum::new();
    for (m, &w) in weights.iter().enumerate() {
        if w != 0.0 {
            acc.add(w * f.eval(m as f64 / n));
        }
    }
    acc.value()
}

/// Σ_m w_m · scale · ∫_{cell m} f, compensated; cells are
/// `[(m+α)/scale, (m+α+1)/scale]`.
fn cell_sum(f: &FunctionSpec, weights: &[f64], alpha: f64, scale: f64, quad: &QuadratureRule) -> f64 {
    let mut acc = NeumaierSum::new();
    for (m, &w) in weights.iter().enumerate() {
        if w != 0.0 {
            let a = (m as f64 + alpha) / scale;
            let b = (m as f64 + alpha + 1.0) / scale;
            acc.add(w * scale * quad.integrate(a, b, f.as_fn()));
        }
    }
    acc.value()
}

/// `P_{n,k}(f; x)`.
pub fn eval_lupas_k(f: &FunctionSpec, n: u32, k: f64, x: f64) -> Result<f64> {
    let row = polya_weight_row(n, k, x)?;
    Ok(nodal_sum(f, &row.weights))
}

/// Stancu operator `P_n^{⟨α⟩}(f; x)` from the product-form weights.
pub fn eval_stancu(f: &FunctionSpec, n: u32, alpha: f64, x: f64) -> Result<f64> {
    Ok(nodal_sum(f, &stancu_weights(n, alpha, x)?))
}

/// Bernstein operator `B_n(f; x)`.
pub fn eval_bernstein(f: &FunctionSpec, n: u32, x: f64) -> Result<f64> {
    Ok(nodal_sum(f, &bernstein_weights(n, x)?))
}

/// Lupaş operator `P_n^{⟨1/n⟩}(f; x)` with the `2·n!/(2n)!` normalizer.
pub fn eval_lupas(f: &FunctionSpec, n: u32, x: f64) -> Result<f64> {
    Ok(nodal_sum(f, &lupas_weights(n, x)?))
}

/// `K_n^{(α,β,k)}(f; x)`; each subinterval integral uses `quad`.
pub fn eval_kantorovich_stancu_k(f: &FunctionSpec, p: &OperatorParams, x: f64, quad: &QuadratureRule) -> Result<f64> {
    let row = polya_weight_row(p.n, p.k, x)?;
    Ok(cell_sum(f, &row.weights, p.alpha, p.scale(), quad))
}

/// Classical Bernstein–Kantorovich operator `K_n(f; x)`.
pub fn eval_bernstein_kantorovich(f: &FunctionSpec, n: u32, x: f64, quad: &QuadratureRule) -> Result<f64> {
    let w = bernstein_weights(n, x)?;
    Ok(cell_sum(f, &w, 0.0, f64::from(n) + 1.0, quad))
}

/// Kantorovich–Lupaş operator `D_n^*(f; x)` built on the classical Lupaş row.
pub fn eval_d_star(f: &FunctionSpec, n: u32, x: f64, quad: &QuadratureRule) -> Result<f64> {
    let w = lupas_weights(n, x)?;
    Ok(cell_sum(f, &w, 0.0, f64::from(n) + 1.0, quad))
}

/// One pointwise evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalResult {
    pub x: f64,
    pub value: f64,
    pub operator_tag: OperatorTag,
}

impl CsvRecord for EvalResult {
    fn header() -> Vec<&'static str> {
        vec!["x", "value", "operator"]
    }

    fn record(&self) -> Vec<String> {
        vec![fmt_f64(self.x), fmt_f64(self.value), self.operator_tag.to_string()]
    }
}

/// Applies `op` at every grid point; output order follows the grid.
pub fn eval_on_grid(f: &FunctionSpec, op: &Operator, grid: &[f64], quad: &QuadratureRule) -> Result<Vec<EvalResult>> {
    for &x in grid {
        check_unit_point(x)?;
    }
    let tag = op.tag();
    grid.par_iter()
        .map(|&x| {
            let value = op.eval(f, x, quad)?;
            if !value.is_finite() {
                return Err(Error::NonFinite(format!("{tag} value at x = {x}")));
            }
            Ok(EvalResult { x, value, operator_tag: tag })
        })
        .collect()
}

/// `points` equally spaced nodes `i/(points−1)` covering [0, 1].
pub fn uniform_grid(points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.5],
        _ => {
            let last = (points - 1) as f64;
            (0..points).map(|i| i as f64 / last).collect()
        }
    }
}

/// Sup over `grid` of `|op(f; x) − f(x)|`.
pub fn sup_error(f: &FunctionSpec, op: &Operator, grid: &[f64], quad: &QuadratureRule) -> Result<f64> {
    let vals = eval_on_grid(f, op, grid, quad)?;
    Ok(vals.iter().map(|r| (r.value - f.eval(r.x)).abs()).fold(0.0, f64::max))
}
