//! Complete and partial moduli, the bivariate error bounds, and the
//! bivariate Voronovskaja probe.

use rayon::prelude::*;
use serde::Serialize;

use super::eval::eval_2d;
use super::moments::axis_second_central_sup;
use super::{BivariateFunctionSpec, BivariateParams};
use crate::analysis::{ModulusSource, GRID_SAFETY_FACTOR};
use crate::moments::xi_bound;
use crate::num::weights::check_unit_point;
use crate::num::QuadratureRule;
use crate::operators::uniform_grid;
use crate::report::{fmt_f64, CsvRecord};
use crate::{Error, Result};

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!("delta = {delta} must be positive")));
    }
    Ok(())
}

fn check_grid(points: usize) -> Result<()> {
    if points < 2 {
        return Err(Error::InvalidArgument("modulus grid needs at least 2 points".into()));
    }
    Ok(())
}

fn sample(f: &BivariateFunctionSpec, points: usize) -> Vec<Vec<f64>> {
    let g = uniform_grid(points);
    g.iter().map(|&x| g.iter().map(|&y| f.eval(x, y)).collect()).collect()
}

/// Grid estimate of `ω̃(f, δ)`: the max of `|f(t,s) − f(x,y)|` over grid
/// pairs at Euclidean distance ≤ δ.
pub fn complete_modulus_estimate(f: &BivariateFunctionSpec, delta: f64, grid_points: usize) -> Result<f64> {
    check_delta(delta)?;
    check_grid(grid_points)?;
    let v = sample(f, grid_points);
    let h = 1.0 / (grid_points - 1) as f64;
    let r2 = (delta / h).powi(2) * (1.0 + 1e-12);
    let reach = (r2.sqrt().floor() as usize).min(grid_points - 1);
    // half-plane of offsets: di > 0, or di = 0 and dj > 0
    let mut offsets = Vec::new();
    for di in 0..=reach as i64 {
        for dj in -(reach as i64)..=reach as i64 {
            if (di == 0 && dj <= 0) || ((di * di + dj * dj) as f64) > r2 {
                continue;
            }
            offsets.push((di as usize, dj));
        }
    }
    let g = grid_points as i64;
    Ok((0..grid_points)
        .into_par_iter()
        .map(|i| {
            let mut best: f64 = 0.0;
            for &(di, dj) in &offsets {
                let i2 = i + di;
                if i2 >= grid_points {
                    continue;
                }
                for j in 0..grid_points {
                    let j2 = j as i64 + dj;
                    if j2 < 0 || j2 >= g {
                        continue;
                    }
                    best = best.max((v[i2][j2 as usize] - v[i][j]).abs());
                }
            }
            best
        })
        .reduce(|| 0.0, f64::max))
}

fn line_modulus(values: impl Iterator<Item = f64>, offset: usize) -> f64 {
    let vals: Vec<f64> = values.collect();
    let mut best: f64 = 0.0;
    for i in 0..vals.len() {
        for j in i + 1..=(i + offset).min(vals.len() - 1) {
            best = best.max((vals[j] - vals[i]).abs());
        }
    }
    best
}

fn offset_for(delta: f64, points: usize) -> usize {
    let d = (delta * (points - 1) as f64 * (1.0 + 1e-12)).floor();
    (d as usize).min(points - 1)
}

/// `ω⁽¹⁾(f, δ)`: oscillation in x with y held fixed.
pub fn partial_modulus_x(f: &BivariateFunctionSpec, delta: f64, grid_points: usize) -> Result<f64> {
    check_delta(delta)?;
    check_grid(grid_points)?;
    let v = sample(f, grid_points);
    let off = offset_for(delta, grid_points);
    Ok((0..grid_points).into_par_iter().map(|j| line_modulus(v.iter().map(|row| row[j]), off)).reduce(|| 0.0, f64::max))
}

/// `ω⁽²⁾(f, δ)`: oscillation in y with x held fixed.
pub fn partial_modulus_y(f: &BivariateFunctionSpec, delta: f64, grid_points: usize) -> Result<f64> {
    check_delta(delta)?;
    check_grid(grid_points)?;
    let v = sample(f, grid_points);
    let off = offset_for(delta, grid_points);
    Ok(v.par_iter().map(|row| line_modulus(row.iter().copied(), off)).reduce(|| 0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartialModuli {
    pub omega1: f64,
    pub omega2: f64,
}

/// Both partial moduli at the same δ.
pub fn partial_moduli_estimate(f: &BivariateFunctionSpec, delta: f64, grid_points: usize) -> Result<PartialModuli> {
    Ok(PartialModuli {
        omega1: partial_modulus_x(f, delta, grid_points)?,
        omega2: partial_modulus_y(f, delta, grid_points)?,
    })
}

fn complete_omega(f: &BivariateFunctionSpec, delta: f64, source: ModulusSource) -> Result<f64> {
    if delta == 0.0 {
        return Ok(0.0);
    }
    let missing = || Error::InvalidArgument(format!("`{}` has no exact complete modulus", f.name));
    match source {
        ModulusSource::Exact => f.exact_complete_modulus(delta).ok_or_else(missing),
        ModulusSource::Grid(g) => complete_modulus_estimate(f, delta, g),
        ModulusSource::Auto(g) => match f.exact_complete_modulus(delta) {
            Some(v) => Ok(v),
            None => Ok(GRID_SAFETY_FACTOR * complete_modulus_estimate(f, delta, g)?),
        },
    }
}

fn partial_omegas(f: &BivariateFunctionSpec, d1: f64, d2: f64, source: ModulusSource) -> Result<(f64, f64)> {
    let missing = || Error::InvalidArgument(format!("`{}` has no exact partial moduli", f.name));
    let grid = |g: usize| -> Result<(f64, f64)> {
        Ok((
            if d1 == 0.0 { 0.0 } else { partial_modulus_x(f, d1, g)? },
            if d2 == 0.0 { 0.0 } else { partial_modulus_y(f, d2, g)? },
        ))
    };
    match source {
        ModulusSource::Exact => f.exact_partial_moduli(d1, d2).ok_or_else(missing),
        ModulusSource::Grid(g) => grid(g),
        ModulusSource::Auto(g) => match f.exact_partial_moduli(d1, d2) {
            Some(v) => Ok(v),
            None => {
                let (a, b) = grid(g)?;
                Ok((GRID_SAFETY_FACTOR * a, GRID_SAFETY_FACTOR * b))
            }
        },
    }
}

/// `2·ω̃(f, √(ξ₁ + ξ₂))`; uniform in `(x, y)`.
pub fn bound_complete(f: &BivariateFunctionSpec, bp: &BivariateParams, source: ModulusSource) -> Result<f64> {
    let delta = (xi_bound(&bp.px) + xi_bound(&bp.py)).sqrt();
    Ok(2.0 * complete_omega(f, delta, source)?)
}

/// `2(ω⁽¹⁾(f, √ξ₁) + ω⁽²⁾(f, √ξ₂))`; uniform in `(x, y)`.
pub fn bound_partial(f: &BivariateFunctionSpec, bp: &BivariateParams, source: ModulusSource) -> Result<f64> {
    let (w1, w2) = partial_omegas(f, xi_bound(&bp.px).sqrt(), xi_bound(&bp.py).sqrt(), source)?;
    Ok(2.0 * (w1 + w2))
}

/// Hölder-type class `|f(t,s) − f(x,y)| ≤ M|t−x|^γ₁|s−y|^γ₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LipschitzSpec {
    pub m: f64,
    pub gamma1: f64,
    pub gamma2: f64,
}

impl LipschitzSpec {
    pub fn new(m: f64, gamma1: f64, gamma2: f64) -> Result<Self> {
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::InvalidArgument(format!("M = {m} must be positive")));
        }
        for (name, g) in [("gamma1", gamma1), ("gamma2", gamma2)] {
            if !(g > 0.0 && g <= 1.0) {
                return Err(Error::InvalidArgument(format!("{name} = {g} must lie in (0, 1]")));
            }
        }
        Ok(Self { m, gamma1, gamma2 })
    }

    /// Checks the defining inequality on every pair of a `points × points`
    /// grid. Pairs sharing a coordinate make the right side vanish, so only
    /// functions constant along both axes pass.
    pub fn certify(&self, f: &BivariateFunctionSpec, points: usize) -> Result<bool> {
        check_grid(points)?;
        let g = uniform_grid(points);
        let v = sample(f, points);
        let ok = (0..points).into_par_iter().all(|i| {
            (0..points).all(|j| {
                (0..points).all(|a| {
                    (0..points).all(|b| {
                        let rhs =
                            self.m * (g[a] - g[i]).abs().powf(self.gamma1) * (g[b] - g[j]).abs().powf(self.gamma2);
                        (v[a][b] - v[i][j]).abs() <= rhs * (1.0 + 1e-12) + 1e-15
                    })
                })
            })
        });
        Ok(ok)
    }

    /// `M·λ₁^{γ₁/2}·λ₂^{γ₂/2}`, with `λ_i` the grid sup of the axis-i second
    /// central moment.
    pub fn bound(&self, bp: &BivariateParams, grid_points: usize) -> Result<f64> {
        let l1 = axis_second_central_sup(&bp.px, grid_points)?;
        let l2 = axis_second_central_sup(&bp.py, grid_points)?;
        Ok(self.bound_from(l1, l2))
    }

    pub fn bound_from(&self, lambda1: f64, lambda2: f64) -> f64 {
        self.m * lambda1.powf(self.gamma1 / 2.0) * lambda2.powf(self.gamma2 / 2.0)
    }
}

/// `M·λ₁^{γ₁/2}·λ₂^{γ₂/2}` for `spec`; see [`LipschitzSpec::bound`].
pub fn bound_lipschitz(spec: &LipschitzSpec, bp: &BivariateParams, grid_points: usize) -> Result<f64> {
    spec.bound(bp, grid_points)
}

/// `‖f_x‖·√λ₁ + ‖f_y‖·√λ₂` with sup norms taken on the grid.
pub fn bound_grad(f: &BivariateFunctionSpec, bp: &BivariateParams, grid_points: usize) -> Result<f64> {
    let (fx, fy) = match (f.fx(), f.fy()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::MissingDerivative(f.name.clone())),
    };
    check_grid(grid_points)?;
    let g = uniform_grid(grid_points);
    let mut nx: f64 = 0.0;
    let mut ny: f64 = 0.0;
    for &x in &g {
        for &y in &g {
            nx = nx.max(fx(x, y).abs());
            ny = ny.max(fy(x, y).abs());
        }
    }
    let l1 = axis_second_central_sup(&bp.px, grid_points)?;
    let l2 = axis_second_central_sup(&bp.py, grid_points)?;
    Ok(nx * l1.sqrt() + ny * l2.sqrt())
}

/// Limit of `n(K_{n,n} f − f)` at `(x, y)` given the partials there.
pub fn voronovskaja_rhs_2d(bp: &BivariateParams, x: f64, y: f64, fx: f64, fy: f64, fxx: f64, fyy: f64) -> f64 {
    let (p, q) = (&bp.px, &bp.py);
    (p.alpha + 0.5 - (p.beta + 1.0) * x) * fx
        + (q.alpha + 0.5 - (q.beta + 1.0) * y) * fy
        + 0.5 * (p.k + 1.0) * x * (1.0 - x) * fxx
        + 0.5 * (q.k + 1.0) * y * (1.0 - y) * fyy
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VoronovskajaReport2d {
    pub function: String,
    pub x: f64,
    pub y: f64,
    pub params: BivariateParams,
    pub n_sequence: Vec<u32>,
    pub scaled_error: Vec<f64>,
    pub limit: f64,
    pub gaps: Vec<f64>,
}

impl VoronovskajaReport2d {
    pub fn gaps_strictly_decreasing(&self) -> bool {
        self.gaps.windows(2).all(|g| g[1] < g[0])
    }

    pub fn final_gap(&self) -> f64 {
        self.gaps.last().copied().unwrap_or(f64::NAN)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Voronovskaja2dRow {
    pub x: f64,
    pub y: f64,
    pub n: u32,
    pub scaled_error: f64,
    pub limit: f64,
    pub gap: f64,
}

impl VoronovskajaReport2d {
    pub fn rows(&self) -> Vec<Voronovskaja2dRow> {
        (0..self.n_sequence.len())
            .map(|i| Voronovskaja2dRow {
                x: self.x,
                y: self.y,
                n: self.n_sequence[i],
                scaled_error: self.scaled_error[i],
                limit: self.limit,
                gap: self.gaps[i],
            })
            .collect()
    }
}

impl CsvRecord for Voronovskaja2dRow {
    fn header() -> Vec<&'static str> {
        vec!["x", "y", "n", "scaled_error", "limit", "gap"]
    }

    fn record(&self) -> Vec<String> {
        vec![
            fmt_f64(self.x),
            fmt_f64(self.y),
            self.n.to_string(),
            fmt_f64(self.scaled_error),
            fmt_f64(self.limit),
            fmt_f64(self.gap),
        ]
    }
}

/// `n(K_{n,n} f(x,y) − f(x,y))` along `ns` against the bivariate limit.
pub fn voronovskaja_probe_2d(
    f: &BivariateFunctionSpec,
    bp: &BivariateParams,
    ns: &[u32],
    x: f64,
    y: f64,
    quad: &QuadratureRule,
) -> Result<VoronovskajaReport2d> {
    check_unit_point(x)?;
    check_unit_point(y)?;
    if !f.has_second_partials() {
        return Err(Error::MissingDerivative(f.name.clone()));
    }
    let limit = voronovskaja_rhs_2d(
        bp,
        x,
        y,
        f.fx().unwrap()(x, y),
        f.fy().unwrap()(x, y),
        f.fxx().unwrap()(x, y),
        f.fyy().unwrap()(x, y),
    );
    let fv = f.eval(x, y);
    let scaled_error = ns
        .iter()
        .map(|&n| Ok(f64::from(n) * (eval_2d(f, &bp.with_n(n)?, x, y, quad)? - fv)))
        .collect::<Result<Vec<f64>>>()?;
    let gaps = scaled_error.iter().map(|s| (s - limit).abs()).collect();
    Ok(VoronovskajaReport2d {
        function: f.name.clone(),
        x,
        y,
        params: *bp,
        n_sequence: ns.to_vec(),
        scaled_error,
        limit,
        gaps,
    })
}

#[cfg(test)]
mod tests {
    use super::super::lookup2d;
    use super::*;
    use crate::operators::OperatorParams;

    fn sym(n: u32, k: f64) -> BivariateParams {
        BivariateParams::symmetric(OperatorParams::new(n, k, 0.0, 0.0).unwrap())
    }

    #[test]
    fn complete_modulus_examples() {
        let e10 = lookup2d("e10").unwrap();
        assert!((complete_modulus_estimate(&e10, 0.2, 101).unwrap() - 0.2).abs() < 1e-14);
        let c = BivariateFunctionSpec::new("c", |_, _| 3.0);
        assert_eq!(complete_modulus_estimate(&c, 0.2, 51).unwrap(), 0.0);
        let s = lookup2d("x_plus_y").unwrap();
        let est = complete_modulus_estimate(&s, 0.2, 201).unwrap();
        let exact = 0.2 * 2f64.sqrt();
        assert!(est <= exact + 1e-12 && exact - est < 2.0 / 200.0, "{est}");
    }

    #[test]
    fn partial_moduli_examples() {
        let e10 = lookup2d("e10").unwrap();
        let pm = partial_moduli_estimate(&e10, 0.3, 101).unwrap();
        assert!((pm.omega1 - 0.3).abs() < 1e-14);
        assert_eq!(pm.omega2, 0.0);
        let g = lookup2d("abs_prod").unwrap();
        let pm = partial_moduli_estimate(&g, 0.1, 101).unwrap();
        assert!(pm.omega1 <= 0.1 * 0.5 + 1e-15 && pm.omega2 <= 0.1 * 0.5 + 1e-15);
    }

    #[test]
    fn xi_delta_example() {
        let bp = sym(9, 1.0);
        let d = (xi_bound(&bp.px) + xi_bound(&bp.py)).sqrt();
        assert!((d - (2.0f64 / 12.0).sqrt()).abs() < 1e-15);
        let b = bound_complete(&lookup2d("e10").unwrap(), &bp, ModulusSource::Exact).unwrap();
        assert!((b - 2.0 * d).abs() < 1e-15);
        let bx = bound_partial(&lookup2d("e10").unwrap(), &bp, ModulusSource::Exact).unwrap();
        assert!((bx - 2.0 * xi_bound(&bp.px).sqrt()).abs() < 1e-15);
        let c = BivariateFunctionSpec::new("c", |_, _| 1.0);
        assert_eq!(bound_partial(&c, &bp, ModulusSource::Grid(51)).unwrap(), 0.0);
    }

    #[test]
    fn lipschitz_formula() {
        let s = LipschitzSpec::new(1.0, 1.0, 1.0).unwrap();
        assert!((s.bound_from(0.04, 0.09) - 0.2 * 0.3).abs() < 1e-16);
        let d = LipschitzSpec::new(2.0, 1.0, 1.0).unwrap();
        let bp = sym(20, 0.5);
        assert!((d.bound(&bp, 101).unwrap() - 2.0 * s.bound(&bp, 101).unwrap()).abs() < 1e-16);
        assert!(LipschitzSpec::new(1.0, 1.5, 1.0).is_err());
        assert!(LipschitzSpec::new(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn lipschitz_certification_admits_only_constants() {
        let s = LipschitzSpec::new(1.0, 1.0, 1.0).unwrap();
        let c = BivariateFunctionSpec::new("c", |_, _| 2.0);
        assert!(s.certify(&c, 11).unwrap());
        assert!(!s.certify(&lookup2d("abs_prod").unwrap(), 11).unwrap());
        assert!(!s.certify(&lookup2d("x_plus_y").unwrap(), 11).unwrap());
    }

    #[test]
    fn gradient_bound_examples() {
        let bp = sym(20, 0.5);
        let l = axis_second_central_sup(&bp.px, 101).unwrap();
        let b = bound_grad(&lookup2d("x_plus_y").unwrap(), &bp, 101).unwrap();
        assert!((b - 2.0 * l.sqrt()).abs() < 1e-15);
        let c =
            BivariateFunctionSpec::new("c", |_, _| 1.0).with_partials(|_, _| 0.0, |_, _| 0.0, |_, _| 0.0, |_, _| 0.0);
        assert_eq!(bound_grad(&c, &bp, 101).unwrap(), 0.0);
    }

    #[test]
    fn voronovskaja_limit_examples() {
        let bp = sym(10, 1.0);
        assert!((voronovskaja_rhs_2d(&bp, 0.5, 0.5, 1.0, 1.0, 2.0, 2.0) - 1.0).abs() < 1e-16);
        // linear f = 2x − 3y + 1
        let v = voronovskaja_rhs_2d(&bp, 0.2, 0.7, 2.0, -3.0, 0.0, 0.0);
        assert!((v - ((0.5 - 0.2) * 2.0 + (0.5 - 0.7) * -3.0)).abs() < 1e-15);
    }
}
