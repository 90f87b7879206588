use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use polya_approx::analysis::{convergence_table, doubling_sequence, voronovskaja_probe, ModulusSource};
use polya_approx::bivariate::{
    lookup2d, surface, voronovskaja_probe_2d, BivariateOperator, BivariateParams, SurfacePoint,
};
use polya_approx::catalog::lookup;
use polya_approx::figures::{example_tables, example_tables_2d, figure, figure_2d_config};
use polya_approx::moments::{MomentFamily, MomentReport, OraclePath};
use polya_approx::num::gauss_legendre;
use polya_approx::operators::{eval_on_grid, uniform_grid, Operator};
use polya_approx::report::{write_csv, write_json, CsvRecord};
use polya_approx::verify::{run_verify, VerifyConfig};
use polya_approx::{EvalResult, OperatorParams, OperatorTag, QuadratureRule};
use serde::Serialize;

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "polya-approx",
    version,
    about = "Lupaş k-operators, their Kantorovich variant and bivariate extension"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Evaluate a univariate operator at --x or on a uniform grid
    Eval,
    /// Closed-form moments against the brute-force oracle at --x
    Moments,
    /// Run the full moment-check grid; exit 1 on any order <= 2 mismatch
    Verify,
    /// Sup-error table for --example or a custom --ns/--ks sweep
    Table,
    /// Voronovskaja probe under n-doubling (bivariate when --y is given)
    Voronovskaja,
    /// Data for figures 1-9
    Figure,
    /// Evaluate the bivariate operator at (--x, --y) or on a grid
    Eval2d,
    /// Surface data for figures 7-9
    Figure2d,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(clap::Args)]
struct Opts {
    /// Operator tag
    #[arg(long, global = true)]
    op: Option<String>,
    #[arg(long, global = true)]
    n: Option<u32>,
    #[arg(long, global = true, default_value_t = 0.0)]
    k: f64,
    #[arg(long, global = true, default_value_t = 0.0)]
    alpha: f64,
    #[arg(long, global = true, default_value_t = 0.0)]
    beta: f64,
    /// Second-axis parameters; default to the first axis
    #[arg(long, global = true)]
    n2: Option<u32>,
    #[arg(long, global = true)]
    k2: Option<f64>,
    #[arg(long, global = true)]
    alpha2: Option<f64>,
    #[arg(long, global = true)]
    beta2: Option<f64>,
    /// Catalog function name
    #[arg(long = "fn", global = true)]
    function: Option<String>,
    #[arg(long, global = true)]
    x: Option<f64>,
    #[arg(long, global = true)]
    y: Option<f64>,
    /// Number of uniform grid points per axis
    #[arg(long, global = true)]
    grid: Option<usize>,
    #[arg(long, global = true, default_value_t = 16)]
    quad_order: usize,
    #[arg(long, global = true)]
    figure: Option<u8>,
    /// Table preset such as 2.2 or 3.10
    #[arg(long, global = true)]
    example: Option<String>,
    /// Moment order (moments)
    #[arg(long, global = true)]
    order: Option<u32>,
    /// Moment family: lupas, lupas_central, kant, kant_central
    #[arg(long, global = true)]
    kind: Option<String>,
    /// Sweep values of n (table)
    #[arg(long, global = true, value_delimiter = ',')]
    ns: Vec<u32>,
    /// Sweep values of k (table)
    #[arg(long, global = true, value_delimiter = ',')]
    ks: Vec<f64>,
    /// Number of doublings (voronovskaja)
    #[arg(long, global = true, default_value_t = 5)]
    steps: usize,
    #[arg(long, global = true)]
    max_n: Option<u32>,
    /// Oracle path: log or extended
    #[arg(long, global = true, default_value = "log")]
    oracle: String,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads, 0 = one per core
    #[arg(long, global = true, env = "POLYA_APPROX_THREADS", default_value_t = 0)]
    threads: usize,
}

type CliResult<T> = Result<T, String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

impl Opts {
    fn params(&self, default_n: u32) -> CliResult<OperatorParams> {
        OperatorParams::new(self.n.unwrap_or(default_n), self.k, self.alpha, self.beta).map_err(err)
    }

    fn bivariate(&self, default_n: u32) -> CliResult<BivariateParams> {
        let px = self.params(default_n)?;
        let py = OperatorParams::new(
            self.n2.unwrap_or(px.n),
            self.k2.unwrap_or(px.k),
            self.alpha2.unwrap_or(px.alpha),
            self.beta2.unwrap_or(px.beta),
        )
        .map_err(err)?;
        Ok(BivariateParams::new(px, py))
    }

    fn function_name(&self) -> CliResult<&str> {
        self.function.as_deref().ok_or_else(|| "--fn is required".to_string())
    }

    fn quad(&self) -> CliResult<QuadratureRule> {
        gauss_legendre(self.quad_order).map_err(err)
    }

    fn tag(&self, default: OperatorTag) -> CliResult<OperatorTag> {
        self.op.as_deref().map_or(Ok(default), |s| s.parse().map_err(err))
    }

    fn points(&self, default: usize) -> CliResult<Vec<f64>> {
        match self.x {
            Some(x) => Ok(vec![x]),
            None => {
                let g = self.grid.unwrap_or(default);
                if g == 0 {
                    return Err("--grid must be at least 1".into());
                }
                Ok(uniform_grid(g))
            }
        }
    }
}

struct Output {
    inner: Box<dyn Write>,
    format: Format,
}

impl Output {
    fn open(opts: &Opts) -> CliResult<Self> {
        let inner: Box<dyn Write> = match &opts.out {
            Some(path) => Box::new(BufWriter::new(
                File::create(path).map_err(|e| format!("cannot create {}: {e}", path.display()))?,
            )),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        Ok(Self { inner, format: opts.format })
    }

    /// CSV rows, or the JSON document `doc`.
    fn emit<R: CsvRecord, D: Serialize + ?Sized>(&mut self, rows: &[R], doc: &D) -> CliResult<()> {
        match self.format {
            Format::Csv => write_csv(&mut self.inner, rows).map_err(err)?,
            Format::Json => write_json(&mut self.inner, doc).map_err(err)?,
        }
        self.inner.flush().map_err(err)
    }

    fn emit_table(&mut self, table: &polya_approx::report::Table) -> CliResult<()> {
        match self.format {
            Format::Csv => table.write_csv(&mut self.inner).map_err(err)?,
            Format::Json => write_json(&mut self.inner, table).map_err(err)?,
        }
        self.inner.flush().map_err(err)
    }
}

fn cmd_eval(o: &Opts) -> CliResult<ExitCode> {
    let f = lookup(o.function_name()?).map_err(err)?;
    let op = Operator::from_tag(o.tag(OperatorTag::LupasK)?, o.params(10)?);
    let rows: Vec<EvalResult> = eval_on_grid(&f, &op, &o.points(101)?, &o.quad()?).map_err(err)?;
    Output::open(o)?.emit(&rows, &rows)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_moments(o: &Opts) -> CliResult<ExitCode> {
    let p = o.params(10)?;
    let x = o.x.ok_or("--x is required")?;
    let path: OraclePath = o.oracle.parse().map_err(err)?;
    let family: Option<MomentFamily> = o.kind.as_deref().map(str::parse).transpose().map_err(err)?;
    let rows: Vec<MomentReport> = match (family, o.order) {
        (Some(fam), Some(order)) => vec![MomentReport::compute(&p, x, order, fam, path).map_err(err)?],
        _ => MomentReport::all_for(&p, x, path)
            .map_err(err)?
            .into_iter()
            .filter(|r| family.is_none_or(|f| r.family == f) && o.order.is_none_or(|j| r.order == j))
            .collect(),
    };
    Output::open(o)?.emit(&rows, &rows)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(o: &Opts) -> CliResult<ExitCode> {
    let mut config = VerifyConfig { oracle: o.oracle.parse().map_err(err)?, ..VerifyConfig::default() };
    if let Some(m) = o.max_n {
        config.max_n = m;
    }
    let report = run_verify(&config).map_err(err)?;
    Output::open(o)?.emit(&report.rows, &report)?;
    let failures = report.failures();
    let flagged = report.flagged_high_order();
    eprintln!(
        "verify: {} rows ({} oracle), {} order<=2 failures, {} flagged order 3-4 rows",
        report.rows.len(),
        config.oracle.as_str(),
        failures.len(),
        flagged.len()
    );
    for r in failures.iter().chain(&flagged) {
        eprintln!("  flagged: {}", r.record().join(","));
    }
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(EXIT_CHECK_FAILED) })
}

fn cmd_table(o: &Opts) -> CliResult<ExitCode> {
    let quad = o.quad()?;
    if let Some(ex) = &o.example {
        if ex.starts_with("3.") {
            let rows = example_tables_2d(ex, &quad).map_err(err)?;
            Output::open(o)?.emit(&rows, &rows)?;
        } else {
            let reports = example_tables(ex, &quad).map_err(err)?;
            let rows: Vec<_> = reports.iter().flat_map(|r| r.rows()).collect();
            Output::open(o)?.emit(&rows, &reports)?;
        }
        return Ok(ExitCode::SUCCESS);
    }
    let f = lookup(o.function_name()?).map_err(err)?;
    let tag = o.tag(OperatorTag::LupasK)?;
    let ns = if o.ns.is_empty() { vec![o.n.unwrap_or(10)] } else { o.ns.clone() };
    let ks = if o.ks.is_empty() { vec![o.k] } else { o.ks.clone() };
    let mut sweep = Vec::with_capacity(ns.len() * ks.len());
    for &n in &ns {
        for &k in &ks {
            sweep.push(OperatorParams::new(n, k, o.alpha, o.beta).map_err(err)?);
        }
    }
    let report = convergence_table(&f, tag, &sweep, &quad, ModulusSource::default()).map_err(err)?;
    Output::open(o)?.emit(&report.rows(), &report)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_voronovskaja(o: &Opts) -> CliResult<ExitCode> {
    let quad = o.quad()?;
    let x = o.x.ok_or("--x is required")?;
    let base = o.n.unwrap_or(100);
    let ns = doubling_sequence(base, o.steps);
    if ns.last().is_some_and(|&n| n < base) || o.steps == 0 || o.steps > 20 {
        return Err("--steps must be between 1 and 20 and keep n within range".into());
    }
    if let Some(y) = o.y {
        let f = lookup2d(o.function_name()?).map_err(err)?;
        let report = voronovskaja_probe_2d(&f, &o.bivariate(base)?, &ns, x, y, &quad).map_err(err)?;
        Output::open(o)?.emit(&report.rows(), &report)?;
    } else {
        let f = lookup(o.function_name()?).map_err(err)?;
        let report = voronovskaja_probe(&f, &o.params(base)?, &ns, x, &quad).map_err(err)?;
        Output::open(o)?.emit(&report.rows(), &report)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_figure(o: &Opts, only_2d: bool) -> CliResult<ExitCode> {
    let id = o.figure.ok_or("--figure is required")?;
    if only_2d && figure_2d_config(id).is_none() {
        return Err(format!("figure2d expects a bivariate figure id (7..=9), got {id}"));
    }
    let table = figure(id, o.grid, &o.quad()?).map_err(err)?;
    Output::open(o)?.emit_table(&table)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_eval2d(o: &Opts) -> CliResult<ExitCode> {
    let f = lookup2d(o.function_name()?).map_err(err)?;
    let bp = o.bivariate(10)?;
    let op = match o.op.as_deref() {
        None | Some("kantorovich_stancu_k") => BivariateOperator::kantorovich(&bp),
        Some("d_star") => BivariateOperator::d_star(bp.px.n, bp.py.n),
        Some(other) => return Err(format!("bivariate operator must be kantorovich_stancu_k or d_star, got `{other}`")),
    };
    let side = o.grid.unwrap_or(41);
    let xs = match o.x {
        Some(x) => vec![x],
        None => uniform_grid(side),
    };
    let ys = match o.y {
        Some(y) => vec![y],
        None => uniform_grid(side),
    };
    if xs.is_empty() || ys.is_empty() {
        return Err("--grid must be at least 1".into());
    }
    let rows: Vec<SurfacePoint> = surface(&f, &op, &xs, &ys, &o.quad()?).map_err(err)?;
    Output::open(o)?.emit(&rows, &rows)?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: &Cli) -> CliResult<ExitCode> {
    rayon::ThreadPoolBuilder::new().num_threads(cli.opts.threads).build_global().map_err(err)?;
    let o = &cli.opts;
    match cli.command {
        Command::Eval => cmd_eval(o),
        Command::Moments => cmd_moments(o),
        Command::Verify => cmd_verify(o),
        Command::Table => cmd_table(o),
        Command::Voronovskaja => cmd_voronovskaja(o),
        Command::Figure => cmd_figure(o, false),
        Command::Eval2d => cmd_eval2d(o),
        Command::Figure2d => cmd_figure(o, true),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
