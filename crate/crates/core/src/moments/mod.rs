//! Moments of the univariate operators: closed forms, brute-force oracles
//! and the report that compares the two.

pub mod closed;
pub mod oracle;

pub use closed::{
    central_moment_kant_closed, central_moment_limits, central_moment_lupas_closed, moment_kant_closed,
    moment_lupas_closed, voronovskaja_rhs_1d, xi_bound,
};
pub use oracle::{
    fourth_central_kant_oracle, moment_oracle, moment_oracle_exact, moment_oracle_log, MomentKind, OraclePath,
    EXACT_ORACLE_MAX_N,
};

use serde::Serialize;
use std::fmt;
use std::str::FromStr;

use crate::operators::{Operator, OperatorParams};
use crate::report::{fmt_f64, CsvRecord};
use crate::{Error, Result};

/// Absolute tolerance for comparing a closed form of the given order with
/// its oracle.
pub fn tolerance(order: u32) -> f64 {
    if order <= 2 {
        1e-10
    } else {
        1e-8
    }
}

/// `diff` is within [`tolerance`]; false for NaN.
pub fn within_tolerance(diff: f64, order: u32) -> bool {
    diff <= tolerance(order)
}

/// Which closed-form family a report row checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentFamily {
    Lupas,
    LupasCentral,
    Kant,
    KantCentral,
}

impl MomentFamily {
    pub const ALL: [MomentFamily; 4] =
        [MomentFamily::Lupas, MomentFamily::LupasCentral, MomentFamily::Kant, MomentFamily::KantCentral];

    pub fn as_str(self) -> &'static str {
        match self {
            MomentFamily::Lupas => "lupas",
            MomentFamily::LupasCentral => "lupas_central",
            MomentFamily::Kant => "kant",
            MomentFamily::KantCentral => "kant_central",
        }
    }

    /// Orders with a closed form in this family.
    pub fn orders(self) -> std::ops::RangeInclusive<u32> {
        match self {
            MomentFamily::Lupas | MomentFamily::Kant => 0..=4,
            MomentFamily::LupasCentral => 2..=4,
            MomentFamily::KantCentral => 1..=2,
        }
    }

    fn kind(self) -> MomentKind {
        match self {
            MomentFamily::Lupas | MomentFamily::Kant => MomentKind::Raw,
            MomentFamily::LupasCentral | MomentFamily::KantCentral => MomentKind::Central,
        }
    }

    fn operator(self, p: &OperatorParams) -> Operator {
        match self {
            MomentFamily::Lupas | MomentFamily::LupasCentral => Operator::LupasK { n: p.n, k: p.k },
            MomentFamily::Kant | MomentFamily::KantCentral => Operator::KantorovichStancuK(*p),
        }
    }

    pub fn closed(self, p: &OperatorParams, x: f64, order: u32) -> Result<f64> {
        match self {
            MomentFamily::Lupas => moment_lupas_closed(p.n, p.k, x, order),
            MomentFamily::LupasCentral => central_moment_lupas_closed(p.n, p.k, x, order),
            MomentFamily::Kant => moment_kant_closed(p, x, order),
            MomentFamily::KantCentral => central_moment_kant_closed(p, x, order),
        }
    }
}

impl fmt::Display for MomentFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MomentFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MomentFamily::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown moment kind `{s}`")))
    }
}

/// Closed form against oracle for one `(params, x, order, family)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentReport {
    pub params: OperatorParams,
    pub x: f64,
    pub order: u32,
    pub family: MomentFamily,
    pub closed_form: f64,
    pub oracle: f64,
    pub abs_diff: f64,
    pub flagged: bool,
}

impl MomentReport {
    pub fn compute(p: &OperatorParams, x: f64, order: u32, family: MomentFamily, path: OraclePath) -> Result<Self> {
        let closed_form = family.closed(p, x, order)?;
        let oracle = moment_oracle(&family.operator(p), x, order, family.kind(), path)?;
        let abs_diff = (closed_form - oracle).abs();
        Ok(Self {
            params: *p,
            x,
            order,
            family,
            closed_form,
            oracle,
            abs_diff,
            flagged: !within_tolerance(abs_diff, order),
        })
    }

    /// Every closed-form check available at one `(params, x)`.
    pub fn all_for(p: &OperatorParams, x: f64, path: OraclePath) -> Result<Vec<Self>> {
        let mut out = Vec::with_capacity(CHECKS_PER_POINT);
        for family in MomentFamily::ALL {
            for order in family.orders() {
                out.push(Self::compute(p, x, order, family, path)?);
            }
        }
        Ok(out)
    }
}

/// Number of rows [`MomentReport::all_for`] produces.
pub const CHECKS_PER_POINT: usize = 15;

impl CsvRecord for MomentReport {
    fn header() -> Vec<&'static str> {
        vec!["n", "k", "alpha", "beta", "x", "order", "kind", "closed", "oracle", "diff", "flag"]
    }

    fn record(&self) -> Vec<String> {
        vec![
            self.params.n.to_string(),
            fmt_f64(self.params.k),
            fmt_f64(self.params.alpha),
            fmt_f64(self.params.beta),
            fmt_f64(self.x),
            self.order.to_string(),
            self.family.as_str().to_string(),
            fmt_f64(self.closed_form),
            fmt_f64(self.oracle),
            fmt_f64(self.abs_diff),
            self.flagged.to_string(),
        ]
    }
}
