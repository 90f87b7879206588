//! Frozen configurations of the worked examples: figure data (CSV columns
//! needed to re-plot each figure) and the sup-error tables behind them.

use serde::Serialize;

use crate::analysis::{convergence_table, ConvergenceReport, ModulusSource, SUP_GRID_POINTS};
use crate::bivariate::{lookup2d, sup_error_2d, surface, BivariateOperator, BivariateParams};
use crate::catalog::lookup;
use crate::num::QuadratureRule;
use crate::operators::{eval_on_grid, uniform_grid, Operator, OperatorParams, OperatorTag};
use crate::report::{fmt_f64, CsvRecord, Table};
use crate::{Error, Result};

/// Default side length of the 2D surface grids.
pub const SURFACE_GRID_POINTS: usize = 41;
/// Side length of the grid on which 2D sup errors are measured.
pub const SUP_GRID_2D_POINTS: usize = 101;

pub const FIGURE_IDS: [u8; 9] = [1, 2, 3, 4, 5, 6, 7, 8, 9];

fn p(n: u32, k: f64, alpha: f64, beta: f64) -> OperatorParams {
    OperatorParams::new(n, k, alpha, beta).expect("frozen configuration is valid")
}

fn fmt_num(v: f64) -> String {
    format!("{v}")
}

/// Column label of one operator instance.
pub fn operator_label(op: &Operator) -> String {
    match *op {
        Operator::Bernstein { n } => format!("bernstein_n{n}"),
        Operator::Stancu { n, alpha } => format!("stancu_n{n}_a{}", fmt_num(alpha)),
        Operator::Lupas { n } => format!("lupas_n{n}"),
        Operator::LupasK { n, k } => format!("lupas_k_n{n}_k{}", fmt_num(k)),
        Operator::BernsteinKantorovich { n } => format!("bernstein_kantorovich_n{n}"),
        Operator::KantorovichStancuK(q) => {
            format!("kantorovich_stancu_k_n{}_k{}_a{}_b{}", q.n, fmt_num(q.k), fmt_num(q.alpha), fmt_num(q.beta))
        }
        Operator::DStar { n } => format!("d_star_n{n}"),
    }
}

/// Function name and operators of a univariate figure.
pub fn figure_1d_config(id: u8) -> Option<(&'static str, Vec<Operator>)> {
    let k = |n, k| Operator::KantorovichStancuK(p(n, k, 0.0, 0.0));
    Some(match id {
        1 => ("f1", vec![Operator::LupasK { n: 10, k: 0.1 }, Operator::Lupas { n: 10 }, Operator::Bernstein { n: 10 }]),
        2 => ("f2", [10, 50, 100].map(|n| Operator::LupasK { n, k: 0.5 }).to_vec()),
        3 => ("f3", [0.1, 0.3, 0.6, 1.0, 3.0].map(|k| Operator::LupasK { n: 10, k }).to_vec()),
        4 => ("f4", vec![k(50, 0.2), Operator::DStar { n: 50 }, Operator::BernsteinKantorovich { n: 50 }]),
        5 => ("f5", [30, 90, 150].map(|n| k(n, 0.3)).to_vec()),
        6 => ("f6", [0.3, 0.6, 0.9, 1.2, 1.5].map(|k| Operator::KantorovichStancuK(p(20, k, 1.0, 1.0))).to_vec()),
        _ => return None,
    })
}

/// Function name and `(label, operator)` pairs of a bivariate figure.
pub fn figure_2d_config(id: u8) -> Option<(&'static str, Vec<(String, BivariateOperator)>)> {
    let kop = |n: u32, k: f64| {
        let q = p(n, k, 0.0, 0.0);
        (format!("K_n{n}_k{}", fmt_num(k)), BivariateOperator::kantorovich(&BivariateParams::symmetric(q)))
    };
    Some(match id {
        7 => ("f7", vec![kop(10, 0.2), ("d_star_n10".to_string(), BivariateOperator::d_star(10, 10))]),
        8 => ("f8", [10, 20, 40].map(|n| kop(n, 0.4)).to_vec()),
        9 => ("f9", [0.3, 0.9, 1.2].map(|k| kop(10, k)).to_vec()),
        _ => return None,
    })
}

/// Figure data: `x, f, op…` for figures 1–6 and `x, y, f, op…` for 7–9.
pub fn figure(id: u8, grid_points: Option<usize>, quad: &QuadratureRule) -> Result<Table> {
    if let Some((fname, ops)) = figure_1d_config(id) {
        let f = lookup(fname)?;
        let grid = uniform_grid(grid_points.unwrap_or(SUP_GRID_POINTS));
        let mut columns = vec!["x".to_string(), fname.to_string()];
        let mut values = Vec::with_capacity(ops.len());
        for op in &ops {
            columns.push(operator_label(op));
            values.push(eval_on_grid(&f, op, &grid, quad)?);
        }
        let mut table = Table::new(columns);
        for (i, &x) in grid.iter().enumerate() {
            let mut row = vec![x, f.eval(x)];
            row.extend(values.iter().map(|v| v[i].value));
            table.push(row);
        }
        return Ok(table);
    }
    if let Some((fname, ops)) = figure_2d_config(id) {
        let f = lookup2d(fname)?;
        let grid = uniform_grid(grid_points.unwrap_or(SURFACE_GRID_POINTS));
        let mut columns = vec!["x".to_string(), "y".to_string(), fname.to_string()];
        let mut surfaces = Vec::with_capacity(ops.len());
        for (label, op) in &ops {
            columns.push(label.clone());
            surfaces.push(surface(&f, op, &grid, &grid, quad)?);
        }
        let mut table = Table::new(columns);
        for (i, pt) in surfaces[0].iter().enumerate() {
            let mut row = vec![pt.x, pt.y, pt.f];
            row.extend(surfaces.iter().map(|s| s[i].k_f));
            table.push(row);
        }
        return Ok(table);
    }
    Err(Error::InvalidArgument(format!("unknown figure id {id} (expected 1..=9)")))
}

/// Univariate sup-error tables of examples 2.1–2.6: one report per operator
/// family appearing in the example.
pub fn example_tables(example: &str, quad: &QuadratureRule) -> Result<Vec<ConvergenceReport>> {
    let id = match example {
        "2.1" => 1,
        "2.2" => 2,
        "2.3" => 3,
        "2.4" => 4,
        "2.5" => 5,
        "2.6" => 6,
        _ => return Err(Error::InvalidArgument(format!("unknown univariate example `{example}` (expected 2.1..2.6)"))),
    };
    let (fname, ops) = figure_1d_config(id).expect("ids 1..=6 are univariate");
    let f = lookup(fname)?;
    // consecutive operators of the same family share one report
    let mut groups: Vec<(OperatorTag, Vec<OperatorParams>)> = Vec::new();
    for op in ops {
        let tag = op.tag();
        let params = match op {
            Operator::Stancu { n, alpha } => p(n, 0.0, alpha, alpha),
            other => other.equivalent_params(),
        };
        match groups.last_mut() {
            Some((t, v)) if *t == tag => v.push(params),
            _ => groups.push((tag, vec![params])),
        }
    }
    groups.into_iter().map(|(tag, sweep)| convergence_table(&f, tag, &sweep, quad, ModulusSource::default())).collect()
}

/// One row of a bivariate sup-error table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BivariateSupRow {
    pub function: String,
    pub operator: String,
    pub n: u32,
    pub k: f64,
    pub sup_error: f64,
}

impl CsvRecord for BivariateSupRow {
    fn header() -> Vec<&'static str> {
        vec!["function", "operator", "n", "k", "sup_error"]
    }

    fn record(&self) -> Vec<String> {
        vec![self.function.clone(), self.operator.clone(), self.n.to_string(), fmt_f64(self.k), fmt_f64(self.sup_error)]
    }
}

/// Bivariate sup errors of examples 3.10–3.12 on the 101×101 grid.
/// Example 3.10 adds the `k = 1` row used to compare against `D*`.
pub fn example_tables_2d(example: &str, quad: &QuadratureRule) -> Result<Vec<BivariateSupRow>> {
    let (fname, mut configs): (&str, Vec<(u32, f64)>) = match example {
        "3.10" => ("f7", vec![(10, 0.2), (10, 1.0)]),
        "3.11" => ("f8", vec![(10, 0.4), (20, 0.4), (40, 0.4)]),
        "3.12" => ("f9", vec![(10, 0.3), (10, 0.9), (10, 1.2)]),
        _ => {
            return Err(Error::InvalidArgument(format!("unknown bivariate example `{example}` (expected 3.10..3.12)")))
        }
    };
    let f = lookup2d(fname)?;
    let mut rows = Vec::new();
    for (n, k) in configs.drain(..) {
        let op = BivariateOperator::kantorovich(&BivariateParams::symmetric(p(n, k, 0.0, 0.0)));
        rows.push(BivariateSupRow {
            function: fname.to_string(),
            operator: "kantorovich_stancu_k_2d".to_string(),
            n,
            k,
            sup_error: sup_error_2d(&f, &op, SUP_GRID_2D_POINTS, quad)?,
        });
    }
    if example == "3.10" {
        rows.push(BivariateSupRow {
            function: fname.to_string(),
            operator: "d_star_2d".to_string(),
            n: 10,
            k: 1.0,
            sup_error: sup_error_2d(&f, &BivariateOperator::d_star(10, 10), SUP_GRID_2D_POINTS, quad)?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_1_columns() {
        let q = QuadratureRule::default_rule();
        let t = figure(1, Some(11), &q).unwrap();
        assert_eq!(t.columns, vec!["x", "f1", "lupas_k_n10_k0.1", "lupas_n10", "bernstein_n10"]);
        assert_eq!(t.rows.len(), 11);
        // interpolation at the endpoints
        let last = t.rows.last().unwrap();
        assert_eq!(last[1], last[2]);
    }

    #[test]
    fn figure_4_and_7_columns() {
        let q = QuadratureRule::default_rule();
        let t = figure(4, Some(5), &q).unwrap();
        assert_eq!(t.columns[2..], ["kantorovich_stancu_k_n50_k0.2_a0_b0", "d_star_n50", "bernstein_kantorovich_n50"]);
        let s = figure(7, Some(3), &q).unwrap();
        assert_eq!(s.columns, vec!["x", "y", "f7", "K_n10_k0.2", "d_star_n10"]);
        assert_eq!(s.rows.len(), 9);
    }

    #[test]
    fn unknown_ids_are_rejected() {
        let q = QuadratureRule::default_rule();
        assert!(figure(0, None, &q).is_err());
        assert!(figure(10, None, &q).is_err());
        assert!(example_tables("2.7", &q).is_err());
        assert!(example_tables_2d("3.9", &q).is_err());
    }

    #[test]
    fn example_2_1_groups_operators() {
        let q = QuadratureRule::default_rule();
        let reps = example_tables("2.1", &q).unwrap();
        let tags: Vec<_> = reps.iter().map(|r| r.operator_tag).collect();
        assert_eq!(tags, vec![OperatorTag::LupasK, OperatorTag::Lupas, OperatorTag::Bernstein]);
        let reps = example_tables("2.2", &q).unwrap();
        assert_eq!(reps.len(), 1);
        assert_eq!(reps[0].sweep.len(), 3);
    }
}
