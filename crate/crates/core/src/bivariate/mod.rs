//! The bivariate tensor operator `K_{n₁,n₂}^{(α,β,k)}` on `J² = [0,1]²`.

pub mod bounds;
pub mod eval;
pub mod moments;

pub use bounds::{
    bound_complete, bound_grad, bound_lipschitz, bound_partial, complete_modulus_estimate, partial_moduli_estimate,
    voronovskaja_probe_2d, voronovskaja_rhs_2d, LipschitzSpec, PartialModuli, VoronovskajaReport2d,
};
pub use eval::{eval_2d, sup_error_2d, surface, Axis, BivariateOperator, CellMeans, SurfacePoint};
pub use moments::{
    axis_second_central_sup, central_moment_2d_closed, cross_moment_oracle, moment_2d_closed, moment_2d_oracle,
    CentralMoment2d, Moment2d,
};

use serde::Serialize;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::catalog::{self, FunctionSpec};
use crate::operators::OperatorParams;
use crate::{Error, Result};

/// Per-axis parameters `(n_i, k_i, α_i, β_i)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BivariateParams {
    pub px: OperatorParams,
    pub py: OperatorParams,
    /// Whether the coupled ordering `α₁ ≤ α₂ ≤ β₁ ≤ β₂` was enforced.
    pub strict: bool,
}

impl BivariateParams {
    /// Each axis must satisfy `0 ≤ α_i ≤ β_i`, which `OperatorParams` already
    /// guarantees.
    pub fn new(px: OperatorParams, py: OperatorParams) -> Self {
        Self { px, py, strict: false }
    }

    /// Also enforces the cross-axis ordering `α₁ ≤ α₂ ≤ β₁ ≤ β₂`.
    pub fn strict(px: OperatorParams, py: OperatorParams) -> Result<Self> {
        let chain = [px.alpha, py.alpha, px.beta, py.beta];
        if chain.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidParams(format!(
                "alpha1 <= alpha2 <= beta1 <= beta2 violated: {} <= {} <= {} <= {}",
                chain[0], chain[1], chain[2], chain[3]
            )));
        }
        Ok(Self { px, py, strict: true })
    }

    /// Same parameters on both axes.
    pub fn symmetric(p: OperatorParams) -> Self {
        Self::new(p, p)
    }

    /// Both axes moved to `n`.
    pub fn with_n(&self, n: u32) -> Result<Self> {
        Ok(Self { px: self.px.with_n(n)?, py: self.py.with_n(n)?, strict: self.strict })
    }
}

pub type ScalarFn2 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
type ModulusFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone, Default)]
struct Partials {
    fx: Option<ScalarFn2>,
    fy: Option<ScalarFn2>,
    fxx: Option<ScalarFn2>,
    fyy: Option<ScalarFn2>,
}

/// A named function on `J²`, with optional partials and known moduli.
#[derive(Clone)]
pub struct BivariateFunctionSpec {
    pub name: String,
    eval: ScalarFn2,
    partials: Partials,
    complete_modulus: Option<ModulusFn>,
    partial_moduli: Option<(ModulusFn, ModulusFn)>,
}

impl fmt::Debug for BivariateFunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BivariateFunctionSpec")
            .field("name", &self.name)
            .field("has_partials", &self.has_second_partials())
            .finish()
    }
}

impl BivariateFunctionSpec {
    pub fn new<F>(name: impl Into<String>, eval: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            eval: Arc::new(eval),
            partials: Partials::default(),
            complete_modulus: None,
            partial_moduli: None,
        }
    }

    /// Sets `f_x, f_y, f_xx, f_yy`.
    pub fn with_partials<A, B, C, D>(mut self, fx: A, fy: B, fxx: C, fyy: D) -> Self
    where
        A: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        B: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        C: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        self.partials = Partials {
            fx: Some(Arc::new(fx)),
            fy: Some(Arc::new(fy)),
            fxx: Some(Arc::new(fxx)),
            fyy: Some(Arc::new(fyy)),
        };
        self
    }

    pub fn with_complete_modulus<M>(mut self, m: M) -> Self
    where
        M: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.complete_modulus = Some(Arc::new(m));
        self
    }

    pub fn with_partial_moduli<M1, M2>(mut self, m1: M1, m2: M2) -> Self
    where
        M1: Fn(f64) -> f64 + Send + Sync + 'static,
        M2: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.partial_moduli = Some((Arc::new(m1), Arc::new(m2)));
        self
    }

    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        (self.eval)(x, y)
    }

    pub fn fx(&self) -> Option<&ScalarFn2> {
        self.partials.fx.as_ref()
    }

    pub fn fy(&self) -> Option<&ScalarFn2> {
        self.partials.fy.as_ref()
    }

    pub fn fxx(&self) -> Option<&ScalarFn2> {
        self.partials.fxx.as_ref()
    }

    pub fn fyy(&self) -> Option<&ScalarFn2> {
        self.partials.fyy.as_ref()
    }

    pub fn has_second_partials(&self) -> bool {
        let p = &self.partials;
        p.fx.is_some() && p.fy.is_some() && p.fxx.is_some() && p.fyy.is_some()
    }

    /// Exact complete modulus `ω̃(f, δ)` when known.
    pub fn exact_complete_modulus(&self, delta: f64) -> Option<f64> {
        self.complete_modulus.as_ref().map(|m| m(delta))
    }

    /// Exact partial moduli `(ω⁽¹⁾(f, δ₁), ω⁽²⁾(f, δ₂))` when known.
    pub fn exact_partial_moduli(&self, d1: f64, d2: f64) -> Option<(f64, f64)> {
        self.partial_moduli.as_ref().map(|(a, b)| (a(d1), b(d2)))
    }

    /// `(t, s) ↦ g(t)·h(s)`, with partials when both factors carry
    /// derivatives.
    pub fn product(g: &FunctionSpec, h: &FunctionSpec) -> Self {
        let (ge, he) = (g.clone(), h.clone());
        let spec = Self::new(format!("{}*{}", g.name, h.name), move |x, y| ge.eval(x) * he.eval(y));
        match (g.d1(), g.d2(), h.d1(), h.d2()) {
            (Some(g1), Some(g2), Some(h1), Some(h2)) => {
                let (g1, g2, h1, h2) = (g1.clone(), g2.clone(), h1.clone(), h2.clone());
                let (ga, gb, ha, hb) = (g.clone(), g.clone(), h.clone(), h.clone());
                spec.with_partials(
                    move |x, y| g1(x) * ha.eval(y),
                    move |x, y| ga.eval(x) * h1(y),
                    move |x, y| g2(x) * hb.eval(y),
                    move |x, y| gb.eval(x) * h2(y),
                )
            }
            _ => spec,
        }
    }
}

fn clamp1(d: f64) -> f64 {
    d.min(1.0)
}

fn f7() -> BivariateFunctionSpec {
    let w = 2.5 * PI;
    BivariateFunctionSpec::new("f7", move |x, y| 2.0 * x * x * y * (w * x).cos()).with_partials(
        move |x, y| {
            let (s, c) = (w * x).sin_cos();
            4.0 * x * y * c - 2.0 * w * x * x * y * s
        },
        move |x, _| 2.0 * x * x * (w * x).cos(),
        move |x, y| {
            let (s, c) = (w * x).sin_cos();
            4.0 * y * c - 8.0 * w * x * y * s - 2.0 * w * w * x * x * y * c
        },
        |_, _| 0.0,
    )
}

fn f8() -> BivariateFunctionSpec {
    let w = 3.0 * PI;
    BivariateFunctionSpec::new("f8", move |x, y| 2.0 * x * (w * (x + y)).cos()).with_partials(
        move |x, y| {
            let (s, c) = (w * (x + y)).sin_cos();
            2.0 * c - 2.0 * w * x * s
        },
        move |x, y| -2.0 * w * x * (w * (x + y)).sin(),
        move |x, y| {
            let (s, c) = (w * (x + y)).sin_cos();
            -4.0 * w * s - 2.0 * w * w * x * c
        },
        move |x, y| -2.0 * w * w * x * (w * (x + y)).cos(),
    )
}

fn f9() -> BivariateFunctionSpec {
    let w = 2.0 * PI;
    // 7x^5(x − 1/4) = 7x^6 − 7x^5/4
    let p = |x: f64| 7.0 * x.powi(6) - 1.75 * x.powi(5);
    let dp = |x: f64| 42.0 * x.powi(5) - 8.75 * x.powi(4);
    let ddp = |x: f64| 210.0 * x.powi(4) - 35.0 * x.powi(3);
    BivariateFunctionSpec::new("f9", move |x, y| p(x) * (w * y).sin()).with_partials(
        move |x, y| dp(x) * (w * y).sin(),
        move |x, y| w * p(x) * (w * y).cos(),
        move |x, y| ddp(x) * (w * y).sin(),
        move |x, y| -w * w * p(x) * (w * y).sin(),
    )
}

fn monomial2(i: i32, j: i32) -> BivariateFunctionSpec {
    let (fi, fj) = (f64::from(i), f64::from(j));
    let pw = |t: f64, e: i32| if e < 0 { 0.0 } else { t.powi(e) };
    BivariateFunctionSpec::new(format!("e{i}{j}"), move |x, y| pw(x, i) * pw(y, j)).with_partials(
        move |x, y| fi * pw(x, i - 1) * pw(y, j),
        move |x, y| fj * pw(x, i) * pw(y, j - 1),
        move |x, y| fi * (fi - 1.0) * pw(x, i - 2) * pw(y, j),
        move |x, y| fj * (fj - 1.0) * pw(x, i) * pw(y, j - 2),
    )
}

/// Modulus of `t ↦ t^j` on [0, 1].
fn power_modulus(j: i32) -> impl Fn(f64) -> f64 + Send + Sync + Copy {
    move |d: f64| if j == 0 { 0.0 } else { 1.0 - (1.0 - clamp1(d)).powi(j) }
}

/// Every fixed bivariate catalog name. Products `g*h` of univariate
/// catalog entries are accepted by [`lookup2d`] as well.
pub const CATALOG2D_NAMES: [&str; 12] =
    ["f7", "f8", "f9", "e00", "e10", "e01", "e20", "e02", "x2_plus_y2", "x_plus_y", "abs_x_half", "abs_prod"];

pub fn lookup2d(name: &str) -> Result<BivariateFunctionSpec> {
    Ok(match name {
        "f7" => f7(),
        "f8" => f8(),
        "f9" => f9(),
        "e00" => monomial2(0, 0).with_complete_modulus(|_| 0.0).with_partial_moduli(|_| 0.0, |_| 0.0),
        "e10" | "e20" => {
            let m = power_modulus(if name == "e10" { 1 } else { 2 });
            monomial2(if name == "e10" { 1 } else { 2 }, 0).with_complete_modulus(m).with_partial_moduli(m, |_| 0.0)
        }
        "e01" | "e02" => {
            let m = power_modulus(if name == "e01" { 1 } else { 2 });
            monomial2(0, if name == "e01" { 1 } else { 2 }).with_complete_modulus(m).with_partial_moduli(|_| 0.0, m)
        }
        "x2_plus_y2" => BivariateFunctionSpec::new("x2_plus_y2", |x, y| x * x + y * y).with_partials(
            |x, _| 2.0 * x,
            |_, y| 2.0 * y,
            |_, _| 2.0,
            |_, _| 2.0,
        ),
        "x_plus_y" => BivariateFunctionSpec::new("x_plus_y", |x, y| x + y)
            .with_partials(|_, _| 1.0, |_, _| 1.0, |_, _| 0.0, |_, _| 0.0)
            // best direction is the diagonal while it fits in the square
            .with_complete_modulus(|d| if d <= 2f64.sqrt() { d * 2f64.sqrt() } else { 2.0 })
            .with_partial_moduli(clamp1, clamp1),
        "abs_x_half" => BivariateFunctionSpec::new("abs_x_half", |x, _| (x - 0.5).abs())
            .with_complete_modulus(|d| d.min(0.5))
            .with_partial_moduli(|d| d.min(0.5), |_| 0.0),
        "abs_prod" => BivariateFunctionSpec::new("abs_prod", |x, y| (x - 0.5).abs() * (y - 0.5).abs()),
        _ => match name.split_once('*') {
            Some((g, h)) => BivariateFunctionSpec::product(&catalog::lookup(g)?, &catalog::lookup(h)?),
            None => return Err(Error::UnknownFunction(name.to_string())),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diff(f: &dyn Fn(f64) -> f64, t: f64) -> f64 {
        let h = 1e-5;
        (f(t + h) - f(t - h)) / (2.0 * h)
    }

    #[test]
    fn partials_match_finite_differences() {
        let mut names: Vec<String> = CATALOG2D_NAMES.iter().map(|s| s.to_string()).collect();
        names.push("f3*f5".into());
        for name in names {
            let f = lookup2d(&name).unwrap();
            if !f.has_second_partials() {
                continue;
            }
            let (fx, fy, fxx, fyy) = (f.fx().unwrap(), f.fy().unwrap(), f.fxx().unwrap(), f.fyy().unwrap());
            for i in 1..8 {
                for j in 1..8 {
                    let (x, y) = (i as f64 / 8.0, j as f64 / 8.0);
                    let tol = |v: f64| 1e-5 * (1.0 + v.abs());
                    let dx = diff(&|t| f.eval(t, y), x);
                    let dy = diff(&|t| f.eval(x, t), y);
                    let dxx = diff(&|t| fx(t, y), x);
                    let dyy = diff(&|t| fy(x, t), y);
                    assert!((dx - fx(x, y)).abs() < tol(dx), "{name} fx");
                    assert!((dy - fy(x, y)).abs() < tol(dy), "{name} fy");
                    assert!((dxx - fxx(x, y)).abs() < tol(dxx), "{name} fxx");
                    assert!((dyy - fyy(x, y)).abs() < tol(dyy), "{name} fyy");
                }
            }
        }
    }

    #[test]
    fn catalog_values() {
        assert!((lookup2d("f7").unwrap().eval(1.0, 1.0) - 2.0 * (2.5 * PI).cos()).abs() < 1e-15);
        assert!((lookup2d("f8").unwrap().eval(0.5, 0.0) - (1.5 * PI).cos()).abs() < 1e-15);
        assert_eq!(lookup2d("f9").unwrap().eval(0.25, 0.3), 0.0);
        assert_eq!(lookup2d("e1*e2").unwrap().eval(0.5, 0.5), 0.125);
        assert!(lookup2d("nope").is_err());
        assert!(lookup2d("e1*nope").is_err());
    }

    #[test]
    fn strict_mode_checks_cross_axis_order() {
        let a = OperatorParams::new(5, 1.0, 0.5, 1.0).unwrap();
        let b = OperatorParams::new(5, 1.0, 0.2, 2.0).unwrap();
        assert!(BivariateParams::strict(a, b).is_err());
        let c = OperatorParams::new(5, 1.0, 0.7, 2.0).unwrap();
        assert!(BivariateParams::strict(a, c).unwrap().strict);
        assert!(!BivariateParams::new(a, b).strict);
    }
}
