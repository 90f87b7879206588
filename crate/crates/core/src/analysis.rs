//! Moduli of continuity, error bounds, convergence tables and the empirical
//! Voronovskaja probe for the univariate operators.

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::FunctionSpec;
use crate::moments::{moment_oracle_log, voronovskaja_rhs_1d, MomentKind};
use crate::num::weights::{check_n, check_nonneg, check_unit_point};
use crate::num::QuadratureRule;
use crate::operators::{eval_kantorovich_stancu_k, sup_error, uniform_grid, Operator, OperatorParams, OperatorTag};
use crate::report::{fmt_f64, CsvRecord};
use crate::{Error, Result};

/// Points of the fixed sup-error grid.
pub const SUP_GRID_POINTS: usize = 1001;
/// Multiplier applied to grid-estimated moduli before they are used as
/// upper bounds.
pub const GRID_SAFETY_FACTOR: f64 = 1.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModulusEstimate {
    pub delta: f64,
    pub value: f64,
    pub grid_points: usize,
    /// The function carries a closed-form modulus.
    pub exact: bool,
}

/// Largest index offset `d` with `d / (points − 1) ≤ delta`.
fn max_offset(delta: f64, points: usize) -> usize {
    let h = (points - 1) as f64;
    // absorb the rounding of delta·h for deltas that sit on grid multiples
    let d = (delta * h * (1.0 + 1e-12)).floor();
    (d.max(0.0) as usize).min(points - 1)
}

/// Max of `|v[i] − v[j]|` over index pairs `0 < j − i ≤ offset`.
fn pair_max(values: &[f64], offset: usize) -> f64 {
    (0..values.len())
        .into_par_iter()
        .map(|i| {
            let hi = (i + offset).min(values.len() - 1);
            values[i + 1..=hi].iter().map(|&v| (v - values[i]).abs()).fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

/// Grid estimate of `ω(f, δ) = sup_{|x−t| ≤ δ} |f(x) − f(t)|`.
pub fn modulus_estimate(f: &FunctionSpec, delta: f64, grid_points: usize) -> Result<ModulusEstimate> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!("delta = {delta} must be positive")));
    }
    if grid_points < 2 {
        return Err(Error::InvalidArgument("modulus grid needs at least 2 points".into()));
    }
    let values: Vec<f64> = uniform_grid(grid_points).iter().map(|&x| f.eval(x)).collect();
    Ok(ModulusEstimate {
        delta,
        value: pair_max(&values, max_offset(delta, grid_points)),
        grid_points,
        exact: f.has_exact_modulus(),
    })
}

/// Where the modulus inside a bound comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModulusSource {
    /// The closed form; fails when the function has none.
    Exact,
    /// Raw grid estimate (a lower bound of the true modulus).
    Grid(usize),
    /// Closed form when available, else the grid estimate times
    /// [`GRID_SAFETY_FACTOR`].
    Auto(usize),
}

impl Default for ModulusSource {
    fn default() -> Self {
        ModulusSource::Auto(SUP_GRID_POINTS)
    }
}

/// `ω(f, δ)` from `source`. `δ = 0` gives 0.
pub fn omega(f: &FunctionSpec, delta: f64, source: ModulusSource) -> Result<f64> {
    if delta == 0.0 {
        return Ok(0.0);
    }
    match source {
        ModulusSource::Exact => {
            f.exact_modulus(delta).ok_or_else(|| Error::InvalidArgument(format!("`{}` has no exact modulus", f.name)))
        }
        ModulusSource::Grid(points) => Ok(modulus_estimate(f, delta, points)?.value),
        ModulusSource::Auto(points) => match f.exact_modulus(delta) {
            Some(v) => Ok(v),
            None => Ok(GRID_SAFETY_FACTOR * modulus_estimate(f, delta, points)?.value),
        },
    }
}

/// `(3/2)·ω(f, √((k+1)/(n+k)))`, the uniform bound for `P_{n,k}`.
pub fn bound_surmod(f: &FunctionSpec, n: u32, k: f64, source: ModulusSource) -> Result<f64> {
    check_n(n)?;
    check_nonneg("k", k)?;
    let delta = ((k + 1.0) / (f64::from(n) + k)).sqrt();
    Ok(1.5 * omega(f, delta, source)?)
}

/// `ν₁ = K(e₁ − x; x)` and `ν₂ = K((e₁ − x)²; x)` from the oracle.
pub fn kant_central_pair(p: &OperatorParams, x: f64) -> Result<(f64, f64)> {
    let op = Operator::KantorovichStancuK(*p);
    let nu1 = moment_oracle_log(&op, x, 1, MomentKind::Central)?;
    let nu2 = moment_oracle_log(&op, x, 2, MomentKind::Central)?;
    Ok((nu1, nu2))
}

/// `2·ω(f, √ν₂)`, the pointwise bound for `K_n^{(α,β,k)}` at x.
pub fn bound_modkant(f: &FunctionSpec, p: &OperatorParams, x: f64, source: ModulusSource) -> Result<f64> {
    let (_, nu2) = kant_central_pair(p, x)?;
    Ok(2.0 * omega(f, nu2.max(0.0).sqrt(), source)?)
}

/// `|ν₁|·|f′(x)| + 2√ν₂·ω(f′, √ν₂)` for `f ∈ C¹`.
pub fn bound_c1(f: &FunctionSpec, p: &OperatorParams, x: f64, source: ModulusSource) -> Result<f64> {
    let df = f.derivative()?;
    let (nu1, nu2) = kant_central_pair(p, x)?;
    let root = nu2.max(0.0).sqrt();
    Ok(nu1.abs() * df.eval(x).abs() + 2.0 * root * omega(&df, root, source)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VoronovskajaReport {
    pub function: String,
    pub x: f64,
    /// Parameters shared by every n in the sequence (their own n is the first entry).
    pub params: OperatorParams,
    pub n_sequence: Vec<u32>,
    pub scaled_error: Vec<f64>,
    pub limit: f64,
    pub gaps: Vec<f64>,
}

impl VoronovskajaReport {
    /// Gaps strictly decrease along the sequence.
    pub fn gaps_strictly_decreasing(&self) -> bool {
        self.gaps.windows(2).all(|g| g[1] < g[0])
    }

    pub fn final_gap(&self) -> f64 {
        self.gaps.last().copied().unwrap_or(f64::NAN)
    }
}

/// Row view of one n of a [`VoronovskajaReport`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VoronovskajaRow<'a> {
    pub function: &'a str,
    pub x: f64,
    pub params: OperatorParams,
    pub n: u32,
    pub scaled_error: f64,
    pub limit: f64,
    pub gap: f64,
}

impl VoronovskajaReport {
    pub fn rows(&self) -> Vec<VoronovskajaRow<'_>> {
        self.n_sequence
            .iter()
            .enumerate()
            .map(|(i, &n)| VoronovskajaRow {
                function: &self.function,
                x: self.x,
                params: self.params,
                n,
                scaled_error: self.scaled_error[i],
                limit: self.limit,
                gap: self.gaps[i],
            })
            .collect()
    }
}

impl CsvRecord for VoronovskajaRow<'_> {
    fn header() -> Vec<&'static str> {
        vec!["function", "x", "n", "k", "alpha", "beta", "scaled_error", "limit", "gap"]
    }

    fn record(&self) -> Vec<String> {
        vec![
            self.function.to_string(),
            fmt_f64(self.x),
            self.n.to_string(),
            fmt_f64(self.params.k),
            fmt_f64(self.params.alpha),
            fmt_f64(self.params.beta),
            fmt_f64(self.scaled_error),
            fmt_f64(self.limit),
            fmt_f64(self.gap),
        ]
    }
}

/// `n = base·2^i` for `i < count`.
pub fn doubling_sequence(base: u32, count: usize) -> Vec<u32> {
    (0..count).map(|i| base << i).collect()
}

/// Scaled errors `n(K_n f(x) − f(x))` along `ns` against the Voronovskaja
/// limit. `p` supplies `k, α, β`; its `n` is replaced by each entry of `ns`.
pub fn voronovskaja_probe(
    f: &FunctionSpec,
    p: &OperatorParams,
    ns: &[u32],
    x: f64,
    quad: &QuadratureRule,
) -> Result<VoronovskajaReport> {
    check_unit_point(x)?;
    let (d1, d2) = match (f.d1(), f.d2()) {
        (Some(d1), Some(d2)) => (d1, d2),
        _ => return Err(Error::MissingDerivative(f.name.clone())),
    };
    let limit = voronovskaja_rhs_1d(p, x, d1(x), d2(x));
    let fx = f.eval(x);
    let scaled_error = ns
        .par_iter()
        .map(|&n| {
            let pn = p.with_n(n)?;
            Ok(f64::from(n) * (eval_kantorovich_stancu_k(f, &pn, x, quad)? - fx))
        })
        .collect::<Result<Vec<f64>>>()?;
    let gaps = scaled_error.iter().map(|s| (s - limit).abs()).collect();
    Ok(VoronovskajaReport {
        function: f.name.clone(),
        x,
        params: *p,
        n_sequence: ns.to_vec(),
        scaled_error,
        limit,
        gaps,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub function: String,
    pub operator_tag: OperatorTag,
    pub sweep: Vec<OperatorParams>,
    pub sup_error: Vec<f64>,
    pub bound: Vec<f64>,
}

impl ConvergenceReport {
    pub fn strictly_decreasing(&self) -> bool {
        self.sup_error.windows(2).all(|w| w[1] < w[0])
    }

    pub fn nondecreasing(&self) -> bool {
        self.sup_error.windows(2).all(|w| w[1] >= w[0])
    }

    pub fn rows(&self) -> Vec<ConvergenceRow<'_>> {
        (0..self.sweep.len())
            .map(|i| ConvergenceRow {
                function: &self.function,
                operator_tag: self.operator_tag,
                params: self.sweep[i],
                sup_error: self.sup_error[i],
                bound: self.bound[i],
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow<'a> {
    pub function: &'a str,
    pub operator_tag: OperatorTag,
    pub params: OperatorParams,
    pub sup_error: f64,
    pub bound: f64,
}

impl CsvRecord for ConvergenceRow<'_> {
    fn header() -> Vec<&'static str> {
        vec!["function", "operator", "n", "k", "alpha", "beta", "sup_error", "bound"]
    }

    fn record(&self) -> Vec<String> {
        vec![
            self.function.to_string(),
            self.operator_tag.to_string(),
            self.params.n.to_string(),
            fmt_f64(self.params.k),
            fmt_f64(self.params.alpha),
            fmt_f64(self.params.beta),
            fmt_f64(self.sup_error),
            fmt_f64(self.bound),
        ]
    }
}

/// Uniform error bound for one operator instance.
///
/// Nodal operators use the surmod bound with their equivalent k; the
/// Kantorovich family uses `2ω(f, √(max_x ν₂))`, which dominates the
/// pointwise modkant bound everywhere on the grid.
pub fn uniform_bound(f: &FunctionSpec, op: &Operator, grid: &[f64], source: ModulusSource) -> Result<f64> {
    let eq = op.equivalent_params();
    if !op.tag().is_kantorovich() {
        return bound_surmod(f, eq.n, eq.k, source);
    }
    let max_nu2 = grid
        .par_iter()
        .map(|&x| moment_oracle_log(op, x, 2, MomentKind::Central))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(2.0 * omega(f, max_nu2.sqrt(), source)?)
}

/// Sup errors on the 1001-point grid and uniform bounds for each entry of
/// `sweep`. For `stancu`, `alpha` of each entry is the Polya parameter.
pub fn convergence_table(
    f: &FunctionSpec,
    tag: OperatorTag,
    sweep: &[OperatorParams],
    quad: &QuadratureRule,
    source: ModulusSource,
) -> Result<ConvergenceReport> {
    if sweep.is_empty() {
        return Err(Error::InvalidArgument("convergence sweep is empty".into()));
    }
    let grid = uniform_grid(SUP_GRID_POINTS);
    let mut sup = Vec::with_capacity(sweep.len());
    let mut bound = Vec::with_capacity(sweep.len());
    for p in sweep {
        let op = Operator::from_tag(tag, *p);
        sup.push(sup_error(f, &op, &grid, quad)?);
        bound.push(uniform_bound(f, &op, &grid, source)?);
    }
    Ok(ConvergenceReport { function: f.name.clone(), operator_tag: tag, sweep: sweep.to_vec(), sup_error: sup, bound })
}
