//! Command-line front end.
//!
//! Exit codes: 0 success, 1 property violation, 2 usage error, 3 domain or
//! numerical error, 4 I/O error.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{explore_open_problem, scan_detailed, Property, PropertyReport, ScanRow, ScanSpec, SignKind};
use crate::error::Error;
use crate::gfunc::{self, GPair};
use crate::means::{self, BranchThresholds, Family, MeanArgs, ShiftArgs};
use crate::verify::{run_suite, CaseRow, Suite, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_IO: i32 = 4;

pub const SEED_ENV: &str = "STOLARSKY_SEED";

#[derive(Debug, Parser)]
#[command(name = "stolarsky", version, about = "Extended mean values and the function (b^t - a^t)/t")]
struct Cli {
    /// Output format for eval, g and verify.
    #[arg(long, value_enum, global = true, default_value_t = Format::Plain)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate E(r,s;x,y).
    Eval(EvalArgs),
    /// Evaluate g, ln g, h or a higher log-derivative of g for a pair a < b.
    G(GArgs),
    /// Scan a function on a grid and write the samples as CSV.
    Scan(ScanArgs),
    /// Run seeded property suites.
    Verify(VerifyArgs),
    /// Scan ln G or ln H in the shift for convexity and write the samples as CSV.
    Explore(ExploreArgs),
}

#[derive(Debug, Args)]
struct MeanFlags {
    #[arg(long, allow_hyphen_values = true)]
    r: f64,
    #[arg(long, allow_hyphen_values = true)]
    s: f64,
    #[arg(long, allow_hyphen_values = true)]
    x: f64,
    #[arg(long, allow_hyphen_values = true)]
    y: f64,
}

impl MeanFlags {
    fn args(&self) -> crate::Result<MeanArgs> {
        MeanArgs::new(self.r, self.s, self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Direct,
    Quadrature,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    mean: MeanFlags,
    #[arg(long, value_enum, default_value_t = Method::Direct)]
    method: Method,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GQuantity {
    G,
    LnG,
    H,
    D2,
    D3,
    Gap,
}

#[derive(Debug, Args)]
struct GArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: f64,
    #[arg(long, allow_hyphen_values = true)]
    b: f64,
    #[arg(long, allow_hyphen_values = true)]
    t: f64,
    #[arg(long, value_enum, default_value_t = GQuantity::G)]
    quantity: GQuantity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    /// g(t) for the pair --a, --b.
    G,
    /// h(t) = [ln g]'(t).
    H,
    /// [ln g]''(t).
    D2,
    /// [ln g]'''(t).
    D3,
    /// cosh t - (sinh t / t)^3.
    Gap,
    /// F(w) = E(r+w, s+w; x, y).
    F,
    /// G(w) = E(r, s; x+w, y+w).
    GShift,
    /// H(w) = E(r+w, s+w; x+w, y+w).
    HShift,
    /// F(w)F(-w).
    Product,
    /// (w + s - r) F(w)^(s-r).
    Remark,
}

#[derive(Debug, Args)]
struct GridFlags {
    #[arg(long, allow_hyphen_values = true)]
    lo: f64,
    #[arg(long, allow_hyphen_values = true)]
    hi: f64,
    #[arg(long, default_value_t = 401)]
    points: usize,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long, value_enum)]
    target: Target,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    r: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    s: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    x: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    y: Option<f64>,
    #[command(flatten)]
    grid: GridFlags,
    /// Finite-difference order applied before the sign test.
    #[arg(long, default_value_t = 0)]
    order: u32,
    /// Take the logarithm of the values first.
    #[arg(long)]
    log: bool,
    /// Property to check, e.g. positive, monotone_up, log_convex. Violations exit 1.
    #[arg(long)]
    property: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    All,
    Theorem2,
    Theorem3,
    Theorem4,
    Theorem5,
    Theorem6,
    Remark,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    suite: SuiteArg,
    #[arg(long, env = SEED_ENV, default_value_t = 42)]
    seed: u64,
    /// Random parameter draws per suite.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Points per scan grid.
    #[arg(long, default_value_t = 401)]
    points: usize,
    /// Majorization pairs per draw and quadrant.
    #[arg(long, default_value_t = 100)]
    pairs: usize,
    /// Per-draw CSV rows go here; with --format csv and no --out they go to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, hide = true)]
    tol_rs: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    #[value(name = "G", alias = "g")]
    G,
    #[value(name = "H", alias = "h")]
    H,
}

#[derive(Debug, Args)]
struct ExploreArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[command(flatten)]
    mean: MeanFlags,
    #[command(flatten)]
    grid: GridFlags,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Numeric(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Numeric(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type Outcome = std::result::Result<i32, Failure>;

pub fn main() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
                return EXIT_USAGE;
            }
            let _ = write!(out, "{text}");
            return EXIT_OK;
        }
    };
    let result = match &cli.command {
        Command::Eval(a) => cmd_eval(a, cli.format, out),
        Command::G(a) => cmd_g(a, cli.format, out),
        Command::Scan(a) => cmd_scan(a, out, err),
        Command::Verify(a) => cmd_verify(a, cli.format, out, err),
        Command::Explore(a) => cmd_explore(a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Numeric(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DOMAIN
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_IO
        }
    }
}

fn csv_writer(w: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

/// Runs `body` against `path` if given, otherwise against `fallback`.
fn with_sink<F>(path: Option<&Path>, fallback: &mut dyn Write, body: F) -> std::result::Result<(), Failure>
where
    F: FnOnce(&mut dyn Write) -> std::result::Result<(), Failure>,
{
    match path {
        Some(p) => {
            let mut file = File::create(p).map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display())))?;
            body(&mut file)?;
            file.flush()?;
            Ok(())
        }
        None => body(fallback),
    }
}

fn cmd_eval(a: &EvalArgs, format: Format, out: &mut dyn Write) -> Outcome {
    let m = a.mean.args()?;
    let tol = BranchThresholds::default();
    let (value, tag) = match a.method {
        Method::Direct => means::eval_e_tagged(&m, &tol)?,
        Method::Quadrature => {
            let tag = means::classify_branch(&m, &tol);
            let value = if m.x == m.y { m.x } else { means::ln_e_quadrature(&m, 1e-12)?.exp() };
            (value, tag)
        }
    };
    match format {
        Format::Plain => writeln!(out, "{value} {tag}")?,
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["r", "s", "x", "y", "value", "branch"])?;
            w.write_record([
                format!("{:e}", m.r),
                format!("{:e}", m.s),
                format!("{:e}", m.x),
                format!("{:e}", m.y),
                format!("{value:e}"),
                tag.to_string(),
            ])?;
            w.flush()?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_g(a: &GArgs, format: Format, out: &mut dyn Write) -> Outcome {
    let p = GPair::new(a.a, a.b)?;
    let (value, method) = match a.quantity {
        GQuantity::G => {
            let r = gfunc::eval_g_detailed(&p, a.t)?;
            let method = match r.method {
                gfunc::Method::ClosedForm => "closed_form",
                gfunc::Method::SeriesNearZero => "series_near_zero",
            };
            (r.value, Some(method))
        }
        GQuantity::LnG => (gfunc::ln_g(&p, a.t)?, None),
        GQuantity::H => (gfunc::eval_h(&p, a.t)?, None),
        GQuantity::D2 => (gfunc::log_g_d2(&p, a.t)?, None),
        GQuantity::D3 => (gfunc::log_g_d3(&p, a.t)?, None),
        GQuantity::Gap => (gfunc::lazarevic_gap(a.t)?, None),
    };
    match format {
        Format::Plain => match method {
            Some(m) => writeln!(out, "{value} {m}")?,
            None => writeln!(out, "{value}")?,
        },
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["a", "b", "t", "value"])?;
            w.write_record([a.a, a.b, a.t, value].map(|v| format!("{v:e}")))?;
            w.flush()?;
        }
    }
    Ok(EXIT_OK)
}

fn grid_spec(g: &GridFlags, property: Property) -> std::result::Result<ScanSpec, Failure> {
    if g.lo.partial_cmp(&g.hi) != Some(std::cmp::Ordering::Less) {
        return Err(Failure::Usage(format!("--lo must be below --hi, got {} and {}", g.lo, g.hi)));
    }
    if g.points < 3 {
        return Err(Failure::Usage(format!("--points must be at least 3, got {}", g.points)));
    }
    Ok(ScanSpec::new(g.lo, g.hi, g.points, property)?)
}

fn require(value: Option<f64>, flag: &str, target: Target) -> std::result::Result<f64, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("target {target:?} needs --{flag}")))
}

fn write_rows(w: &mut dyn Write, rows: &[ScanRow]) -> std::result::Result<(), Failure> {
    let mut w = csv_writer(w);
    w.write_record(["t", "value", "quantity", "sign"])?;
    for row in rows {
        w.write_record([
            format!("{:e}", row.t),
            format!("{:e}", row.value),
            format!("{:e}", row.quantity),
            row.sign().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_scan(a: &ScanArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let property = match &a.property {
        Some(name) => Some(Property::parse(name).ok_or_else(|| Failure::Usage(format!("unknown property {name:?}")))?),
        None => None,
    };
    let mut spec = grid_spec(&a.grid, property.unwrap_or(Property::Sign(SignKind::Positive)))?.order(a.order);
    if a.log {
        spec = spec.log();
    }
    let t = a.target;
    let (report, rows) = match t {
        Target::G | Target::H | Target::D2 | Target::D3 => {
            let p = GPair::new(require(a.a, "a", t)?, require(a.b, "b", t)?)?;
            let f = move |u: f64| match t {
                Target::G => gfunc::eval_g(&p, u),
                Target::H => gfunc::eval_h(&p, u),
                Target::D2 => gfunc::log_g_d2(&p, u),
                _ => gfunc::log_g_d3(&p, u),
            };
            scan_detailed(f, &spec)?
        }
        Target::Gap => scan_detailed(gfunc::lazarevic_gap, &spec)?,
        _ => {
            let base = MeanArgs::new(
                require(a.r, "r", t)?,
                require(a.s, "s", t)?,
                require(a.x, "x", t)?,
                require(a.y, "y", t)?,
            )?;
            let f = move |w: f64| match t {
                Target::F => means::eval_family(Family::F, &ShiftArgs::new(base, w)),
                Target::GShift => means::eval_family(Family::G, &ShiftArgs::new(base, w)),
                Target::HShift => means::eval_family(Family::H, &ShiftArgs::new(base, w)),
                Target::Product => means::product_f(&base, w),
                _ => means::remark_fn(&base, w),
            };
            scan_detailed(f, &spec)?
        }
    };
    with_sink(a.out.as_deref(), out, |w| write_rows(w, &rows))?;
    match property {
        Some(_) => {
            writeln!(err, "{report}")?;
            Ok(if report.passed { EXIT_OK } else { EXIT_VIOLATION })
        }
        None => Ok(EXIT_OK),
    }
}

fn write_cases(w: &mut dyn Write, rows: &[CaseRow]) -> std::result::Result<(), Failure> {
    let mut w = csv_writer(w);
    w.write_record(["suite", "property", "case", "params", "location", "margin", "pass"])?;
    for row in rows {
        let location: Vec<String> = row.location.iter().map(|v| format!("{v:e}")).collect();
        w.write_record([
            row.suite.name().to_string(),
            row.property.clone(),
            row.case.to_string(),
            row.params.clone(),
            location.join(" "),
            format!("{:e}", row.margin),
            row.passed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_verify(a: &VerifyArgs, format: Format, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    if a.samples == 0 || a.pairs == 0 {
        return Err(Failure::Usage("--samples and --pairs must be positive".into()));
    }
    if a.points < 5 {
        return Err(Failure::Usage(format!("--points must be at least 5, got {}", a.points)));
    }
    let mut thresholds = BranchThresholds::default();
    if let Some(tol) = a.tol_rs {
        thresholds.tol_rs = tol;
    }
    let cfg =
        VerifyConfig { seed: a.seed, samples: a.samples, grid_points: a.points, pairs_per_draw: a.pairs, thresholds };
    let suites: Vec<Suite> = match a.suite {
        SuiteArg::All => Suite::ALL.to_vec(),
        SuiteArg::Theorem2 => vec![Suite::Theorem2],
        SuiteArg::Theorem3 => vec![Suite::Theorem3],
        SuiteArg::Theorem4 => vec![Suite::Theorem4],
        SuiteArg::Theorem5 => vec![Suite::Theorem5],
        SuiteArg::Theorem6 => vec![Suite::Theorem6],
        SuiteArg::Remark => vec![Suite::Remark],
    };
    let mut reports: Vec<(Suite, PropertyReport)> = Vec::new();
    let mut rows = Vec::new();
    for suite in suites {
        let outcome = run_suite(suite, &cfg)?;
        reports.extend(outcome.reports.into_iter().map(|r| (suite, r)));
        rows.extend(outcome.rows);
    }
    let all_passed = reports.iter().all(|(_, r)| r.passed);

    let report_sink: &mut dyn Write = if format == Format::Csv && a.out.is_none() { err } else { out };
    for (suite, report) in &reports {
        writeln!(report_sink, "{suite}: {report}")?;
    }
    match (format, &a.out) {
        (_, Some(path)) => with_sink(Some(path), out, |w| write_cases(w, &rows))?,
        (Format::Csv, None) => write_cases(out, &rows)?,
        (Format::Plain, None) => {}
    }
    Ok(if all_passed { EXIT_OK } else { EXIT_VIOLATION })
}

fn cmd_explore(a: &ExploreArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let base = a.mean.args()?;
    let family = match a.family {
        FamilyArg::G => Family::G,
        FamilyArg::H => Family::H,
    };
    let spec = grid_spec(&a.grid, Property::LogConvex)?;
    let found = explore_open_problem(family, &base, &spec)?;
    with_sink(a.out.as_deref(), out, |w| write_rows(w, &found.rows))?;
    writeln!(
        err,
        "{family:?} at {base}: {} positive, {} negative second differences of the log, {} sign changes",
        found.positive, found.negative, found.sign_changes
    )?;
    Ok(EXIT_OK)
}
