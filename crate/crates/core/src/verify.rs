//! The moment-check grid behind `polya-approx verify`.

use rayon::prelude::*;
use serde::Serialize;

use crate::bivariate::{
    central_moment_2d_closed, moment_2d_closed, moment_2d_oracle, BivariateParams, CentralMoment2d, Moment2d,
};
use crate::moments::{within_tolerance, MomentReport, OraclePath, CHECKS_PER_POINT, EXACT_ORACLE_MAX_N};
use crate::operators::OperatorParams;
use crate::report::{fmt_f64, CsvRecord};
use crate::{Error, Result};

pub const GRID_N: [u32; 5] = [1, 2, 5, 10, 50];
pub const GRID_K: [f64; 5] = [0.0, 0.1, 0.5, 1.0, 3.0];
pub const GRID_ALPHA_BETA: [(f64, f64); 3] = [(0.0, 0.0), (1.0, 2.0), (0.5, 0.5)];
pub const GRID_X: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

/// Bivariate checks per tuple: four raw and four axis central moments.
pub const CHECKS_2D_PER_POINT: usize = 8;
pub const ROWS_PER_POINT: usize = CHECKS_PER_POINT + CHECKS_2D_PER_POINT;

/// Every `(params, x)` of the acceptance grid with `n ≤ max_n`, in grid order.
pub fn acceptance_grid(max_n: u32) -> Vec<(OperatorParams, f64)> {
    let mut out = Vec::new();
    for n in GRID_N.into_iter().filter(|&n| n <= max_n) {
        for k in GRID_K {
            for (a, b) in GRID_ALPHA_BETA {
                let p = OperatorParams::new(n, k, a, b).expect("grid parameters are valid");
                out.extend(GRID_X.iter().map(|&x| (p, x)));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub max_n: u32,
    pub oracle: OraclePath,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { max_n: *GRID_N.last().unwrap(), oracle: OraclePath::Log }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.oracle == OraclePath::Exact && self.max_n > EXACT_ORACLE_MAX_N {
            return Err(Error::OracleRange { n: self.max_n, max: EXACT_ORACLE_MAX_N });
        }
        if self.max_n < GRID_N[0] {
            return Err(Error::InvalidArgument(format!("max-n {} excludes the whole grid", self.max_n)));
        }
        Ok(())
    }
}

/// One closed-form-versus-oracle check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRow {
    pub params: OperatorParams,
    pub x: f64,
    pub order: u32,
    pub kind: String,
    pub closed_form: f64,
    pub oracle: f64,
    pub abs_diff: f64,
    pub flagged: bool,
}

impl CheckRow {
    fn new(params: OperatorParams, x: f64, order: u32, kind: String, closed_form: f64, oracle: f64) -> Self {
        let abs_diff = (closed_form - oracle).abs();
        Self { params, x, order, kind, closed_form, oracle, abs_diff, flagged: !within_tolerance(abs_diff, order) }
    }
}

impl From<MomentReport> for CheckRow {
    fn from(r: MomentReport) -> Self {
        Self {
            params: r.params,
            x: r.x,
            order: r.order,
            kind: r.family.as_str().to_string(),
            closed_form: r.closed_form,
            oracle: r.oracle,
            abs_diff: r.abs_diff,
            flagged: r.flagged,
        }
    }
}

impl CsvRecord for CheckRow {
    fn header() -> Vec<&'static str> {
        MomentReport::header()
    }

    fn record(&self) -> Vec<String> {
        let p = &self.params;
        vec![
            p.n.to_string(),
            fmt_f64(p.k),
            fmt_f64(p.alpha),
            fmt_f64(p.beta),
            fmt_f64(self.x),
            self.order.to_string(),
            self.kind.clone(),
            fmt_f64(self.closed_form),
            fmt_f64(self.oracle),
            fmt_f64(self.abs_diff),
            self.flagged.to_string(),
        ]
    }
}

/// Bivariate checks with both axes set to `p`, evaluated at `(x, 1 − x)`.
fn bivariate_rows(p: &OperatorParams, x: f64) -> Result<Vec<CheckRow>> {
    let bp = BivariateParams::new(*p, *p);
    let y = 1.0 - x;
    let mut rows = Vec::with_capacity(CHECKS_2D_PER_POINT);
    for m in &Moment2d::ALL[1..] {
        let (i, j) = m.exponents();
        let closed = moment_2d_closed(&bp, x, y, *m)?;
        let oracle = moment_2d_oracle(&bp, x, y, i, j, false)?;
        rows.push(CheckRow::new(*p, x, i + j, format!("biv_e{i}{j}"), closed, oracle));
    }
    for (c, i, j, label) in [
        (CentralMoment2d::X1, 1, 0, "biv_cx1"),
        (CentralMoment2d::Y1, 0, 1, "biv_cy1"),
        (CentralMoment2d::X2, 2, 0, "biv_cx2"),
        (CentralMoment2d::Y2, 0, 2, "biv_cy2"),
    ] {
        let closed = central_moment_2d_closed(&bp, x, y, c)?;
        let oracle = moment_2d_oracle(&bp, x, y, i, j, true)?;
        rows.push(CheckRow::new(*p, x, i + j, label.to_string(), closed, oracle));
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub rows: Vec<CheckRow>,
}

impl VerifyReport {
    /// Flagged rows of order ≤ 2; any of these fails the run.
    pub fn failures(&self) -> Vec<&CheckRow> {
        self.rows.iter().filter(|r| r.flagged && r.order <= 2).collect()
    }

    /// Flagged rows of order 3–4, reported without failing.
    pub fn flagged_high_order(&self) -> Vec<&CheckRow> {
        self.rows.iter().filter(|r| r.flagged && r.order > 2).collect()
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }
}

pub fn run_verify(config: &VerifyConfig) -> Result<VerifyReport> {
    config.validate()?;
    let chunks: Vec<Vec<CheckRow>> = acceptance_grid(config.max_n)
        .par_iter()
        .map(|(p, x)| {
            let mut rows: Vec<CheckRow> =
                MomentReport::all_for(p, *x, config.oracle)?.into_iter().map(CheckRow::from).collect();
            rows.extend(bivariate_rows(p, *x)?);
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    Ok(VerifyReport { config: *config, rows: chunks.into_iter().flatten().collect() })
}
