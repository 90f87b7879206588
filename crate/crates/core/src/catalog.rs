//! Named scalar test functions on [0, 1].
//!
//! Each entry may carry its first and second derivatives (used by the
//! Voronovskaja probe and the C¹ bound) and an exact modulus of continuity
//! when one is known in closed form.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct FunctionSpec {
    pub name: String,
    eval: ScalarFn,
    d1: Option<ScalarFn>,
    d2: Option<ScalarFn>,
    exact_modulus: Option<ScalarFn>,
}

impl fmt::Debug for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionSpec")
            .field("name", &self.name)
            .field("has_d1", &self.d1.is_some())
            .field("has_d2", &self.d2.is_some())
            .field("exact_modulus", &self.exact_modulus.is_some())
            .finish()
    }
}

impl FunctionSpec {
    pub fn new<F>(name: impl Into<String>, eval: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self { name: name.into(), eval: Arc::new(eval), d1: None, d2: None, exact_modulus: None }
    }

    pub fn with_derivatives<D1, D2>(mut self, d1: D1, d2: D2) -> Self
    where
        D1: Fn(f64) -> f64 + Send + Sync + 'static,
        D2: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.d1 = Some(Arc::new(d1));
        self.d2 = Some(Arc::new(d2));
        self
    }

    pub fn with_exact_modulus<M>(mut self, modulus: M) -> Self
    where
        M: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.exact_modulus = Some(Arc::new(modulus));
        self
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn as_fn(&self) -> &(dyn Fn(f64) -> f64 + Send + Sync) {
        &*self.eval
    }

    pub fn d1(&self) -> Option<&ScalarFn> {
        self.d1.as_ref()
    }

    pub fn d2(&self) -> Option<&ScalarFn> {
        self.d2.as_ref()
    }

    pub fn has_derivatives(&self) -> bool {
        self.d1.is_some() && self.d2.is_some()
    }

    /// Exact ω(f, δ) when known.
    pub fn exact_modulus(&self, delta: f64) -> Option<f64> {
        self.exact_modulus.as_ref().map(|m| m(delta))
    }

    pub fn has_exact_modulus(&self) -> bool {
        self.exact_modulus.is_some()
    }

    /// f′ as a function in its own right (its derivative is f″ when known).
    pub fn derivative(&self) -> Result<FunctionSpec> {
        let d1 = self.d1.clone().ok_or_else(|| Error::MissingDerivative(self.name.clone()))?;
        Ok(FunctionSpec {
            name: format!("{}'", self.name),
            eval: d1,
            d1: self.d2.clone(),
            d2: None,
            exact_modulus: None,
        })
    }

    /// `a·f + b·g`, without derivatives or modulus.
    pub fn linear_combination(a: f64, f: &FunctionSpec, b: f64, g: &FunctionSpec) -> FunctionSpec {
        let (fe, ge) = (f.eval.clone(), g.eval.clone());
        FunctionSpec::new(format!("{a}*{}+{b}*{}", f.name, g.name), move |x| a * fe(x) + b * ge(x))
    }
}

/// Monomial `t^j` with derivatives.
pub fn monomial(j: u32) -> FunctionSpec {
    let jf = f64::from(j);
    let spec = FunctionSpec::new(format!("e{j}"), move |x: f64| x.powi(j as i32)).with_derivatives(
        move |x: f64| if j == 0 { 0.0 } else { jf * x.powi(j as i32 - 1) },
        move |x: f64| {
            if j < 2 {
                0.0
            } else {
                jf * (jf - 1.0) * x.powi(j as i32 - 2)
            }
        },
    );
    match j {
        0 => spec.with_exact_modulus(|_| 0.0),
        1 => spec.with_exact_modulus(|d: f64| d.min(1.0)),
        // t^j is increasing and convex on [0,1]: the sup sits at the right end
        _ => spec.with_exact_modulus(move |d: f64| 1.0 - (1.0 - d.min(1.0)).powi(j as i32)),
    }
}

fn f1() -> FunctionSpec {
    FunctionSpec::new("f1", |x: f64| 20.0 * x.powi(6) + 3.0 * x.powi(3) - 5.0 * x * x + 2.0 * x).with_derivatives(
        |x: f64| 120.0 * x.powi(5) + 9.0 * x * x - 10.0 * x + 2.0,
        |x: f64| 600.0 * x.powi(4) + 18.0 * x - 10.0,
    )
}

fn f2() -> FunctionSpec {
    FunctionSpec::new("f2", |x: f64| (6.0 * PI * x).sin() + 5.0 * (PI * x / 3.0).sin()).with_derivatives(
        |x: f64| 6.0 * PI * (6.0 * PI * x).cos() + 5.0 * PI / 3.0 * (PI * x / 3.0).cos(),
        |x: f64| -36.0 * PI * PI * (6.0 * PI * x).sin() - 5.0 * PI * PI / 9.0 * (PI * x / 3.0).sin(),
    )
}

fn f3() -> FunctionSpec {
    FunctionSpec::new("f3", |x: f64| (2.0 * PI * x).sin() + 2.0 * (PI * x / 2.0).sin()).with_derivatives(
        |x: f64| 2.0 * PI * (2.0 * PI * x).cos() + PI * (PI * x / 2.0).cos(),
        |x: f64| -4.0 * PI * PI * (2.0 * PI * x).sin() - PI * PI / 2.0 * (PI * x / 2.0).sin(),
    )
}

fn f4() -> FunctionSpec {
    FunctionSpec::new("f4", |x: f64| x.powi(3) * (4.0 * PI * x).sin()).with_derivatives(
        |x: f64| 3.0 * x * x * (4.0 * PI * x).sin() + 4.0 * PI * x.powi(3) * (4.0 * PI * x).cos(),
        |x: f64| {
            let (s, c) = (4.0 * PI * x).sin_cos();
            6.0 * x * s + 24.0 * PI * x * x * c - 16.0 * PI * PI * x.powi(3) * s
        },
    )
}

fn f5() -> FunctionSpec {
    FunctionSpec::new("f5", |x: f64| 2.0 * x * x * (2.0 * PI * x).sin()).with_derivatives(
        |x: f64| 4.0 * x * (2.0 * PI * x).sin() + 4.0 * PI * x * x * (2.0 * PI * x).cos(),
        |x: f64| {
            let (s, c) = (2.0 * PI * x).sin_cos();
            4.0 * s + 16.0 * PI * x * c - 8.0 * PI * PI * x * x * s
        },
    )
}

fn f6() -> FunctionSpec {
    // x^5 (x − 1/4) = x^6 − x^5/4
    FunctionSpec::new("f6", |x: f64| x.powi(5) * (x - 0.25) * (PI * x).sin()).with_derivatives(
        |x: f64| {
            let p = x.powi(6) - 0.25 * x.powi(5);
            let dp = 6.0 * x.powi(5) - 1.25 * x.powi(4);
            dp * (PI * x).sin() + PI * p * (PI * x).cos()
        },
        |x: f64| {
            let p = x.powi(6) - 0.25 * x.powi(5);
            let dp = 6.0 * x.powi(5) - 1.25 * x.powi(4);
            let ddp = 30.0 * x.powi(4) - 5.0 * x.powi(3);
            let (s, c) = (PI * x).sin_cos();
            ddp * s + 2.0 * PI * dp * c - PI * PI * p * s
        },
    )
}

fn abs_half() -> FunctionSpec {
    FunctionSpec::new("abs_half", |x: f64| (x - 0.5).abs()).with_exact_modulus(|d: f64| d.min(0.5))
}

/// Every catalog name, in a stable order.
pub const CATALOG_NAMES: [&str; 12] = ["f1", "f2", "f3", "f4", "f5", "f6", "e0", "e1", "e2", "e3", "e4", "abs_half"];

/// Looks up a catalog entry by name.
pub fn lookup(name: &str) -> Result<FunctionSpec> {
    Ok(match name {
        "f1" => f1(),
        "f2" => f2(),
        "f3" => f3(),
        "f4" => f4(),
        "f5" => f5(),
        "f6" => f6(),
        "e0" => monomial(0),
        "e1" => monomial(1),
        "e2" => monomial(2),
        "e3" => monomial(3),
        "e4" => monomial(4),
        "abs_half" => abs_half(),
        _ => return Err(Error::UnknownFunction(name.to_string())),
    })
}

pub fn all() -> Vec<FunctionSpec> {
    CATALOG_NAMES.iter().map(|n| lookup(n).expect("catalog names resolve")).collect()
}
