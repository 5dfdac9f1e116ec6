//! The `frackin` command line: `eval`, `solve` and `verify` subcommands
//! writing CSV or JSON tables.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 usage or domain
//! error, 3 numerical non-convergence.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::Error;
use crate::fracalc::{verify_laplace_pair, LaplacePair, LaplacePairId};
use crate::kinetics::{q_exponential, reduce, residual, solve, KineticFamily, KineticProblem};
use crate::mlkit::identities::{run_identity_suites, DEFAULT_DRAWS, DEFAULT_SEED};
use crate::mlkit::{
    eval_f_function, eval_ml, eval_ml2, eval_prabhakar, eval_r_function, eval_wright, EvalConfig, EvalResult, MLParams,
    WrightParams, DEFAULT_TOL, DEFAULT_Z_MAX,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "frackin", version, about = "Mittag-Leffler functions and fractional kinetics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a special function on a grid.
    Eval(EvalArgs),
    /// Evaluate the closed-form solution of a kinetic equation on a grid.
    Solve(SolveArgs),
    /// Run a verification check and write a pass/fail report.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; written atomically. Defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

/// Evaluation points `start:stop:count`; count 1 means the single point
/// `start`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

impl FromStr for Grid {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, count] = parts[..] else {
            return Err(format!("grid '{s}' must have the form start:stop:count"));
        };
        let num = |v: &str| -> Result<f64, String> {
            v.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| format!("'{v}' is not a finite number"))
        };
        let (start, stop) = (num(start)?, num(stop)?);
        let count: usize = count
            .trim()
            .parse()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| format!("grid count '{count}' must be a positive integer"))?;
        if count == 1 {
            return Ok(Grid(vec![start]));
        }
        let step = (stop - start) / (count - 1) as f64;
        Ok(Grid((0..count).map(|i| if i + 1 == count { stop } else { start + step * i as f64 }).collect()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalFunction {
    Ml,
    Ml2,
    Prabhakar,
    Wright,
    Ffun,
    Rfun,
    Qexp,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(value_enum)]
    pub function: EvalFunction,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    /// Wright numerator pairs `a:A,a:A,...`.
    #[arg(long, allow_hyphen_values = true)]
    pub upper: Option<String>,
    /// Wright denominator pairs `b:B,b:B,...`.
    #[arg(long, allow_hyphen_values = true)]
    pub lower: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    /// Delay of the R-function.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long)]
    pub kt: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Grid,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_Z_MAX)]
    pub z_max: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ProblemArgs {
    #[arg(long)]
    pub n0: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// standard, theorem1, theorem2 or ffun.
    #[arg(value_parser = parse_family)]
    pub family: KineticFamily,
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Grid,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_Z_MAX)]
    pub z_max: f64,
    /// Also write the reduced term list to `<out stem>.reduced.json`.
    #[arg(long, requires = "out")]
    pub reduced: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyTarget {
    Residual,
    Laplace,
    Identities,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub target: VerifyTarget,
    /// Kinetic family for `residual`.
    #[arg(long, value_parser = parse_family)]
    pub family: Option<KineticFamily>,
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Transform pair for `laplace`: eq16, eq18, eq21, eq24 or eq25.
    #[arg(long, value_parser = parse_pair)]
    pub pair: Option<LaplacePairId>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Residual grid; defaults to 8 points over (b + 0.1, b + 2).
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<Grid>,
    #[arg(long, default_value_t = 1024)]
    pub quad_n: usize,
    /// Pass threshold. Defaults: residual 1e-4, laplace 1e-6, identities
    /// the tolerance of each suite.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Compared draws per identity suite.
    #[arg(long, default_value_t = DEFAULT_DRAWS)]
    pub draws: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_family(s: &str) -> Result<KineticFamily, String> {
    s.parse::<KineticFamily>().map_err(|e| e.to_string())
}

fn parse_pair(s: &str) -> Result<LaplacePairId, String> {
    s.parse::<LaplacePairId>().map_err(|e| e.to_string())
}

/// Failure of a command, with its exit code.
#[derive(Debug)]
pub enum CliError {
    Numeric(Error),
    Usage(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numeric(e) => e.exit_code(),
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Numeric(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Io(e) => write!(f, "I/O error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Numeric(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn need(v: Option<f64>, flag: &str, what: &str) -> CliResult<f64> {
    v.ok_or_else(|| CliError::Usage(format!("{what} needs --{flag}")))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Real(x) => format!("{x:.16e}"),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Real(x) if x.is_finite() => json!(x),
            Cell::Real(x) => json!(format!("{x:e}")),
            Cell::Int(n) => json!(n),
            Cell::Text(s) => json!(s),
        }
    }
}

/// A table of results in grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub seed: Option<u64>,
    pub tol: f64,
}

impl OutputTable {
    pub fn new(columns: &[&str], tol: f64) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new(), seed: None, tol }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
        let doc = json!({
            "columns": self.columns,
            "rows": rows,
            "meta": { "seed": self.seed, "tol": self.tol },
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("table serializes");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

/// Writes `content` to `path` through a temporary file in the same
/// directory, so readers never see a partial file.
pub fn write_atomic(path: &Path, content: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(content.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn emit(table: &OutputTable, output: &OutputArgs) -> CliResult<()> {
    let text = table.render(output.format);
    match &output.out {
        Some(path) => write_atomic(path, &text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Runs a parsed command and returns its exit code.
pub fn run(cli: Cli) -> CliResult<i32> {
    match cli.command {
        Command::Eval(args) => cmd_eval(&args),
        Command::Solve(args) => cmd_solve(&args),
        Command::Verify(args) => cmd_verify(&args),
    }
}

/// Parses `args` (including the program name), runs the command, prints
/// any error and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn parse_pairs(s: &str) -> CliResult<Vec<(f64, f64)>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|p| {
            let (a, b) = p.split_once(':').ok_or_else(|| CliError::Usage(format!("pair '{p}' must be a:A")))?;
            let num = |v: &str| v.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("bad number '{v}'")));
            Ok((num(a)?, num(b)?))
        })
        .collect()
}

fn cmd_eval(args: &EvalArgs) -> CliResult<i32> {
    let cfg = EvalConfig::from_env(args.tol).with_z_max(args.z_max);
    let name = format!("{:?}", args.function).to_lowercase();
    let what = name.as_str();
    let wright = match args.function {
        EvalFunction::Wright => Some(WrightParams::new(
            parse_pairs(args.upper.as_deref().unwrap_or(""))?,
            parse_pairs(args.lower.as_deref().unwrap_or(""))?,
        )),
        _ => None,
    };
    let mut table = OutputTable::new(&["t", "value", "error_estimate", "terms"], args.tol);
    for &t in &args.grid.0 {
        let r: EvalResult = match args.function {
            EvalFunction::Ml => eval_ml(need(args.alpha, "alpha", what)?, t, &cfg)?,
            EvalFunction::Ml2 => eval_ml2(need(args.alpha, "alpha", what)?, need(args.beta, "beta", what)?, t, &cfg)?,
            EvalFunction::Prabhakar => {
                let p = MLParams::new(
                    need(args.alpha, "alpha", what)?,
                    need(args.beta, "beta", what)?,
                    need(args.gamma, "gamma", what)?,
                )?;
                eval_prabhakar(p, t, &cfg)?
            }
            EvalFunction::Wright => eval_wright(wright.as_ref().expect("parsed above"), t, &cfg)?,
            EvalFunction::Ffun => eval_f_function(need(args.q, "q", what)?, need(args.a, "a", what)?, t, &cfg)?,
            EvalFunction::Rfun => eval_r_function(
                need(args.nu, "nu", what)?,
                need(args.mu, "mu", what)?,
                need(args.a, "a", what)?,
                need(args.c, "c", what)?,
                t,
                &cfg,
            )?,
            EvalFunction::Qexp => EvalResult {
                value: q_exponential(t, need(args.q, "q", what)?, need(args.kt, "kt", what)?)?,
                error_estimate: 0.0,
                terms_used: 0,
            },
        };
        table.push(vec![
            Cell::Real(t),
            Cell::Real(r.value),
            Cell::Real(r.error_estimate),
            Cell::Int(r.terms_used as u64),
        ]);
    }
    emit(&table, &args.output)?;
    Ok(EXIT_OK)
}

fn build_problem(family: KineticFamily, p: &ProblemArgs) -> CliResult<KineticProblem> {
    let what = family.cli_name();
    let n0 = need(p.n0, "n0", what)?;
    let c = need(p.c, "c", what)?;
    let nu = need(p.nu, "nu", what)?;
    let prob = match family {
        KineticFamily::Standard => KineticProblem::standard(n0, c, nu),
        KineticFamily::Prabhakar => {
            KineticProblem::prabhakar(n0, c, nu, need(p.mu, "mu", what)?, need(p.gamma, "gamma", what)?)
        }
        KineticFamily::RDriven => KineticProblem::r_driven(n0, c, nu, need(p.mu, "mu", what)?, p.b.unwrap_or(0.0)),
        KineticFamily::FDriven => KineticProblem::f_driven(n0, c, nu),
    };
    prob.validate()?;
    Ok(prob)
}

fn cmd_solve(args: &SolveArgs) -> CliResult<i32> {
    let prob = build_problem(args.family, &args.problem)?;
    let sol = solve(&prob)?;
    let cfg = EvalConfig::from_env(args.tol).with_z_max(args.z_max);
    let mut table = OutputTable::new(&["t", "N"], args.tol);
    for &t in &args.grid.0 {
        table.push(vec![Cell::Real(t), Cell::Real(sol.eval(t, &cfg)?)]);
    }
    let sidecar = if args.reduced {
        let red = reduce(&sol)?;
        let out = args.output.out.as_ref().expect("clap enforces --out");
        let mut text = serde_json::to_string_pretty(&red).expect("solution serializes");
        text.push('\n');
        Some((out.with_extension("reduced.json"), text))
    } else {
        None
    };
    emit(&table, &args.output)?;
    if let Some((path, text)) = sidecar {
        write_atomic(&path, &text)?;
    }
    Ok(EXIT_OK)
}

fn pass_cell(ok: bool) -> Cell {
    Cell::Text(if ok { "true" } else { "false" }.into())
}

fn cmd_verify(args: &VerifyArgs) -> CliResult<i32> {
    let (table, all_pass) = match args.target {
        VerifyTarget::Residual => verify_residual(args)?,
        VerifyTarget::Laplace => verify_laplace(args)?,
        VerifyTarget::Identities => verify_identities(args)?,
    };
    emit(&table, &args.output)?;
    Ok(if all_pass { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn verify_residual(args: &VerifyArgs) -> CliResult<(OutputTable, bool)> {
    let family = args.family.ok_or_else(|| CliError::Usage("verify residual needs --family".into()))?;
    let prob = build_problem(family, &args.problem)?;
    let sol = solve(&prob)?;
    let grid = match &args.grid {
        Some(g) => g.0.clone(),
        None => (0..8).map(|i| prob.b + 0.1 + 1.9 * i as f64 / 7.0).collect(),
    };
    // Series error far below the quadrature error.
    let cfg = EvalConfig::from_env(1e-10).with_z_max(100.0);
    let err = residual(&prob, &sol, &grid, args.quad_n, &cfg)?;
    let tol = args.tol.unwrap_or(1e-4);
    let mut table = OutputTable::new(&["check", "max_error", "pass"], tol);
    let ok = err <= tol;
    table.push(vec![Cell::Text(format!("residual_{}", family.cli_name())), Cell::Real(err), pass_cell(ok)]);
    Ok((table, ok))
}

fn verify_laplace(args: &VerifyArgs) -> CliResult<(OutputTable, bool)> {
    let id = args.pair.ok_or_else(|| CliError::Usage("verify laplace needs --pair".into()))?;
    let what = id.as_str();
    let a = need(args.a, "a", what)?;
    let pair = match id {
        LaplacePairId::Eq16 => LaplacePair::Eq16 {
            alpha: need(args.alpha, "alpha", what)?,
            beta: need(args.beta, "beta", what)?,
            gamma: need(args.problem.gamma, "gamma", what)?,
            a,
        },
        LaplacePairId::Eq18 => {
            LaplacePair::Eq18 { alpha: need(args.alpha, "alpha", what)?, beta: need(args.beta, "beta", what)?, a }
        }
        LaplacePairId::Eq21 => LaplacePair::Eq21 { q: need(args.q, "q", what)?, a },
        LaplacePairId::Eq24 => LaplacePair::Eq24 {
            nu: need(args.problem.nu, "nu", what)?,
            mu: need(args.problem.mu, "mu", what)?,
            a,
            c: need(args.problem.c, "c", what)?,
        },
        LaplacePairId::Eq25 => {
            LaplacePair::Eq25 { nu: need(args.problem.nu, "nu", what)?, mu: need(args.problem.mu, "mu", what)?, a }
        }
    };
    let p = need(args.p, "p", what)?;
    let err = verify_laplace_pair(&pair, p)?;
    let tol = args.tol.unwrap_or(1e-6);
    let mut table = OutputTable::new(&["check", "max_error", "pass"], tol);
    let ok = err <= tol;
    table.push(vec![Cell::Text(format!("laplace_{what}")), Cell::Real(err), pass_cell(ok)]);
    Ok((table, ok))
}

fn verify_identities(args: &VerifyArgs) -> CliResult<(OutputTable, bool)> {
    if args.draws == 0 {
        return Err(CliError::Usage("--draws must be positive".into()));
    }
    let reports = run_identity_suites(args.seed, args.draws)?;
    let mut table = OutputTable::new(&["check", "max_error", "pass"], args.tol.unwrap_or(f64::NAN));
    table.seed = Some(args.seed);
    let mut all = true;
    for r in &reports {
        let ok = match args.tol {
            Some(tol) => r.draws > 0 && r.max_error <= tol,
            None => r.passed(),
        };
        all &= ok;
        eprintln!(
            "{}: {} draws, {} skipped, max error {:e} (tol {:e})",
            r.name, r.draws, r.skipped, r.max_error, r.tol
        );
        table.push(vec![Cell::Text(r.name.clone()), Cell::Real(r.max_error), pass_cell(ok)]);
    }
    Ok((table, all))
}
