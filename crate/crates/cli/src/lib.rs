//! The `edgebounds` command line: argument parsing, dispatch to the core
//! library and JSON/CSV/text rendering.
//!
//! [`run`] is the whole program; the binary only forwards `argv` and the
//! standard streams to it.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use edgebounds::audit::{self, AuditRecord, Side};
use edgebounds::bounds::{self, BoundReport};
use edgebounds::dirichlet::{self, SeriesBlocks};
use edgebounds::lfunc::{dirichlet_instance, LFunctionInstance};
use edgebounds::primes::{self, PrimeTable};
use edgebounds::{Error, Verdict};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

const SCHEMA: &str = "edgebounds-report/1";

/// Version tag embedded under `"schema"` in every JSON document.
pub fn report_schema_version() -> &'static str {
    SCHEMA
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "edgebounds", version, about = "Explicit bounds for L(1, f) and audits of the inequalities behind them")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the document here instead of stdout (for `dirichlet survey`: the
    /// file stem of the `.csv` and `.json` outputs).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Grid resolution for the audit scans.
    #[arg(long, global = true, default_value_t = 512)]
    grid_steps: usize,
    /// Margin tolerance for the inequality audits.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,
    /// Largest integer covered by the prime sieve.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    sieve_limit: u64,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// K(d), J1(d), J2(d).
    Constants {
        #[arg(long)]
        d: u32,
    },
    /// Upper and lower bounds at a given conductor.
    Bound(BoundArgs),
    /// Smoothed prime sums against their main terms.
    Primesums {
        /// Cutoffs (repeatable).
        #[arg(long = "x", num_args = 1.., default_values_t = [1e2, 1e3, 1e4, 1e6])]
        xs: Vec<f64>,
    },
    /// Run one audit, or all of them.
    Audit(AuditArgs),
    /// Dirichlet characters.
    #[command(subcommand)]
    Dirichlet(DirichletCommand),
    /// Explicit-formula intervals for |Re B(f)| and log|L(1, f)|.
    Window(WindowArgs),
}

#[derive(Args, Debug)]
struct BoundArgs {
    #[arg(long, requires = "log_conductor", conflicts_with = "instance")]
    d: Option<u32>,
    /// Natural logarithm of the analytic conductor.
    #[arg(long, requires = "d", allow_negative_numbers = true)]
    log_conductor: Option<f64>,
    /// Instance JSON, inline or as a file path.
    #[arg(long, required_unless_present = "d")]
    instance: Option<String>,
    /// Height `t` for the t-aspect conductor (with `--instance`).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    t: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum AuditId {
    Trig,
    P2,
    Hmax,
    Logratio,
    Techlem1,
    Techlem2,
    Chandee,
    Bconst,
    Lemma24,
    Lemma26,
    Aterms,
    Window,
    All,
}

#[derive(Args, Debug)]
struct AuditArgs {
    #[arg(long, value_enum)]
    id: AuditId,
    /// Cutoffs for `p2`, `lemma24`, `lemma26`, `aterms` and `window`.
    #[arg(long = "x", num_args = 1..)]
    xs: Vec<f64>,
    /// Largest modulus for `window`.
    #[arg(long, alias = "qmax", default_value_t = 50)]
    q_max: u64,
}

#[derive(Subcommand, Debug)]
enum DirichletCommand {
    /// L(1, χ) by two independent routes.
    L1 {
        #[arg(long)]
        q: u64,
        /// Character index; all primitive non-principal characters if omitted.
        #[arg(long)]
        index: Option<u64>,
    },
    /// Bound survey over all primitive characters with 3 ≤ q ≤ q_max.
    Survey {
        #[arg(long, alias = "qmax")]
        q_max: u64,
    },
}

#[derive(Args, Debug)]
struct WindowArgs {
    #[arg(long, requires = "index", conflicts_with = "instance")]
    q: Option<u64>,
    #[arg(long, requires = "q")]
    index: Option<u64>,
    /// Instance JSON, inline or as a file path.
    #[arg(long, required_unless_present = "q")]
    instance: Option<String>,
    #[arg(long, default_value_t = 1e5)]
    x: f64,
}

/// A rendered command result.
struct Output {
    json: Value,
    csv: Option<String>,
    text: String,
    failed: bool,
}

impl Output {
    fn new(json: Value, text: String) -> Self {
        Self { json, csv: None, text, failed: false }
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Runs the program on `args` (including the program name) and returns the
/// exit code: 0 when every verdict is PASS or REPORT, 1 when any is FAIL,
/// 2 on usage errors or invalid input.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.common.threads {
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(CliError::Usage(format!("cannot start thread pool: {e}"))),
        },
        None => dispatch(&cli),
    };
    match result.and_then(|out| emit(&cli, out, stdout)) {
        Ok(failed) => {
            if failed {
                EXIT_FAIL
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "edgebounds: {e}");
            EXIT_USAGE
        }
    }
}

fn emit(cli: &Cli, out: Output, stdout: &mut dyn Write) -> CliResult<bool> {
    let body = match cli.common.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&out.json).map_err(Error::from)?;
            s.push('\n');
            s
        }
        Format::Csv => out
            .csv
            .ok_or_else(|| CliError::Usage("this command has no CSV form".into()))?,
        Format::Text => out.text,
    };
    let survey = matches!(cli.command, Command::Dirichlet(DirichletCommand::Survey { .. }));
    match (&cli.common.out, survey) {
        (Some(path), false) => std::fs::write(path, body)
            .map_err(|source| Error::Io { path: path.clone(), source })?,
        _ => stdout
            .write_all(body.as_bytes())
            .map_err(|source| Error::Io { path: PathBuf::from("<stdout>"), source })?,
    }
    Ok(out.failed)
}

fn envelope(command: &str, key: &str, payload: impl Serialize) -> CliResult<Value> {
    let payload = serde_json::to_value(payload).map_err(Error::from)?;
    Ok(json!({ "schema": SCHEMA, "command": command, key: payload }))
}

fn dispatch(cli: &Cli) -> CliResult<Output> {
    let c = &cli.common;
    if !(c.tol >= 0.0) {
        return Err(CliError::Usage(format!("--tol must be nonnegative, got {}", c.tol)));
    }
    if c.grid_steps < 2 {
        return Err(CliError::Usage("--grid-steps must be at least 2".into()));
    }
    match &cli.command {
        Command::Constants { d } => constants(*d),
        Command::Bound(args) => bound(args),
        Command::Primesums { xs } => primesums(c, xs),
        Command::Audit(args) => audit_cmd(c, args),
        Command::Dirichlet(DirichletCommand::L1 { q, index }) => l1(*q, *index),
        Command::Dirichlet(DirichletCommand::Survey { q_max }) => survey(c, *q_max),
        Command::Window(args) => window(c, args),
    }
}

fn constants(d: u32) -> CliResult<Output> {
    let k = bounds::constants(d)?;
    let text = format!("d = {}\nK(d)  = {}\nJ1(d) = {}\nJ2(d) = {}\n", k.d, k.k, k.j1, k.j2);
    let mut out = Output::new(envelope("constants", "constants", k)?, text);
    out.csv = Some(format!("d,K,J1,J2\n{},{},{},{}\n", k.d, k.k, k.j1, k.j2));
    Ok(out)
}

fn load_instance(arg: &str) -> CliResult<LFunctionInstance> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|source| Error::Io { path: PathBuf::from(arg), source })?
    };
    Ok(LFunctionInstance::from_json(&text)?)
}

fn bound_text(r: &BoundReport) -> String {
    format!(
        "d = {}, log C = {}, log log C = {}, x = {}\nvalid (log C >= 23d): {}\n|L(1,f)|   <= {}\n1/|L(1,f)| <= {}\nLittlewood reference: {} / {}\n",
        r.d, r.log_c, r.loglog_c, r.x, r.valid, r.upper, r.lower_reciprocal, r.littlewood.upper, r.littlewood.lower
    )
}

fn bound(args: &BoundArgs) -> CliResult<Output> {
    let report = match (&args.instance, args.d, args.log_conductor) {
        (Some(arg), _, _) => bounds::t_aspect_bounds(&load_instance(arg)?, args.t)?,
        (None, Some(d), Some(l)) => bounds::bound_report(d, l)?,
        _ => return Err(CliError::Usage("bound needs --d with --log-conductor, or --instance".into())),
    };
    let mut json = envelope("bound", "report", report)?;
    json["littlewood_note"] = json!("(1 + o(1)) factors omitted");
    let mut out = Output::new(json, bound_text(&report));
    out.csv = Some(format!(
        "d,logC,L,x,valid,upper,lower_reciprocal\n{},{},{},{},{},{},{}\n",
        report.d, report.log_c, report.loglog_c, report.x, report.valid, report.upper, report.lower_reciprocal
    ));
    Ok(out)
}

/// Sieve covering every cutoff in `xs` (and no further than needed).
fn sieve_for(c: &Common, xs: &[f64]) -> CliResult<PrimeTable> {
    let top = xs.iter().copied().fold(2.0f64, f64::max);
    if !top.is_finite() {
        return Err(CliError::Usage("cutoffs must be finite".into()));
    }
    if top.floor() > c.sieve_limit as f64 {
        return Err(Error::BeyondTable { x: top, limit: c.sieve_limit }.into());
    }
    Ok(PrimeTable::build((top.floor() as u64).max(2))?)
}

fn primesums(c: &Common, xs: &[f64]) -> CliResult<Output> {
    let tbl = sieve_for(c, xs)?;
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut csv = String::from("x,sum,variant,lhs,main,window,residual,within_window\n");
    for &x in xs {
        let linear = primes::smoothed_sum_linear(&tbl, x)?;
        let log = if x >= std::f64::consts::E { Some(primes::smoothed_sum_log(&tbl, x)?) } else { None };
        let mertens = primes::mertens_sum(&tbl, x)?;
        let _ = writeln!(text, "x = {x}: sum Lambda(n)/n = {mertens}");
        let mut push = |name: &str, v: &primes::SumVariants| {
            for (variant, r) in [("as_printed", &v.as_printed), ("corrected", &v.corrected)] {
                let _ = writeln!(
                    text,
                    "  {name:<6} {variant:<10} lhs = {:<22} main = {:<22} residual = {:<24} window = {} {}",
                    r.lhs, r.main, r.residual, r.window,
                    if r.within_window() { "inside" } else { "OUTSIDE" }
                );
                let _ = writeln!(csv, "{x},{name},{variant},{},{},{},{},{}", r.lhs, r.main, r.window, r.residual, r.within_window());
            }
        };
        push("linear", &linear);
        if let Some(l) = &log {
            push("log", l);
        }
        rows.push(json!({ "x": x, "mertens": mertens, "linear": linear, "log": log }));
    }
    let mut out = Output::new(envelope("primesums", "results", rows)?, text);
    out.csv = Some(csv);
    Ok(out)
}

fn default_aterms(c: &Common, xs: &[f64]) -> CliResult<Vec<AuditRecord>> {
    let k = |re: f64, im: f64| Complex64::new(re, im);
    let configs: Vec<(u32, u32, Vec<Complex64>)> = vec![
        (1, 1, vec![]),
        (1, 0, vec![k(1.0, 0.0)]),
        (2, 0, vec![k(0.5, 0.0), k(1.5, 0.0)]),
        (2, 1, vec![k(1.0, 0.0)]),
        (2, 0, vec![k(5.5, 0.0), k(6.5, 0.0)]),
        (3, 1, vec![k(0.5, 3.0), k(0.5, -3.0)]),
        (4, 2, vec![k(1.0, 0.0), k(2.0, 0.0)]),
    ];
    let mut out = Vec::new();
    for &x in xs {
        for side in [Side::Upper, Side::Lower] {
            for (d, l, ks) in &configs {
                out.push(audit::a_terms_audit(side, *d, *l, ks, x, c.tol)?);
            }
        }
    }
    Ok(out)
}

fn run_audit(c: &Common, id: AuditId, xs: &[f64], q_max: u64) -> CliResult<Vec<AuditRecord>> {
    let or = |defaults: &[f64]| if xs.is_empty() { defaults.to_vec() } else { xs.to_vec() };
    let g = c.grid_steps;
    Ok(match id {
        AuditId::Trig => vec![audit::verify_trig_inequality(20, 200, g, c.tol)?],
        AuditId::P2 => or(&[100.5, 132.25, 1009.3])
            .into_iter()
            .map(|x| audit::verify_p2_positivity(x, 200, g, c.tol))
            .collect::<Result<_, _>>()?,
        AuditId::Hmax => vec![audit::extremum_h(1e4, 1e4, g)?],
        AuditId::Logratio => vec![audit::extremum_logratio(1e4, 1e4, g)?],
        AuditId::Techlem1 => {
            let grid: Vec<Complex64> = audit::TECHLEM1_DEFAULT_GRID.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
            audit::identity_residual_techlem1(&grid)?
        }
        AuditId::Techlem2 => vec![audit::verify_techlem2(20, 25, 20, c.tol)?],
        AuditId::Chandee => vec![audit::verify_chandee(200, 200, c.tol)?],
        AuditId::Bconst => vec![audit::bconst_record()],
        AuditId::Lemma24 => {
            let xs = or(&[1e2, 1e3, 1e4, 1e6]);
            audit::lemma24_records(&sieve_for(c, &xs)?, &xs)?
        }
        AuditId::Lemma26 => {
            let xs = or(&[1e4, 1e6]);
            audit::lemma26_records(&sieve_for(c, &xs)?, &xs)?
        }
        AuditId::Aterms => default_aterms(c, &or(&[132.25, 1e4]))?,
        AuditId::Window => {
            let xs = or(&[1e5]);
            let tbl = sieve_for(c, &xs)?;
            let mut out = Vec::new();
            for x in xs {
                out.extend(audit::window_records(&tbl, q_max, x)?);
            }
            out
        }
        AuditId::All => {
            let mut out = Vec::new();
            for id in [
                AuditId::Trig,
                AuditId::P2,
                AuditId::Hmax,
                AuditId::Logratio,
                AuditId::Techlem1,
                AuditId::Techlem2,
                AuditId::Chandee,
                AuditId::Bconst,
                AuditId::Lemma24,
                AuditId::Lemma26,
                AuditId::Aterms,
                AuditId::Window,
            ] {
                out.extend(run_audit(c, id, &[], q_max)?);
            }
            out
        }
    })
}

fn params_string(r: &AuditRecord) -> String {
    r.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "PASS",
        Verdict::Fail => "FAIL",
        Verdict::Report => "REPORT",
    }
}

fn audit_cmd(c: &Common, args: &AuditArgs) -> CliResult<Output> {
    let records = run_audit(c, args.id, &args.xs, args.q_max)?;
    let failed = audit::any_fail(&records);
    let mut text = String::new();
    let mut csv = String::from("id,verdict,lhs,rhs,window,residual,params\n");
    for r in &records {
        let _ = writeln!(
            text,
            "{:<8} {:<20} lhs = {:<24} rhs = {:<24} residual = {:<24} window = {}  [{}]",
            verdict_name(r.verdict), r.id, r.lhs, r.rhs, r.residual, r.window, params_string(r)
        );
        let _ = writeln!(csv, "{},{},{},{},{},{},{}", r.id, verdict_name(r.verdict), r.lhs, r.rhs, r.window, r.residual, params_string(r));
    }
    let mut json = envelope("audit", "records", &records)?;
    json["any_fail"] = json!(failed);
    let mut out = Output::new(json, text);
    out.csv = Some(csv);
    out.failed = failed;
    Ok(out)
}

#[derive(Serialize)]
struct L1Row {
    q: u64,
    index: u64,
    conductor: u64,
    parity: u8,
    re: f64,
    im: f64,
    abs: f64,
    abs_error: f64,
    series_re: f64,
    series_im: f64,
    route_difference: f64,
}

fn l1(q: u64, index: Option<u64>) -> CliResult<Output> {
    let chars = match index {
        Some(i) => vec![dirichlet::character(q, i)?],
        None => dirichlet::enumerate_characters(q, true)?
            .into_iter()
            .filter(|c| !c.is_principal())
            .collect(),
    };
    let blocks = SeriesBlocks::new(q);
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut csv = String::from("q,index,conductor,parity,re,im,abs,abs_error,series_re,series_im,route_difference\n");
    for chi in &chars {
        let v = dirichlet::l1_value(chi)?;
        let s = dirichlet::l1_value_series(chi, &blocks)?;
        let row = L1Row {
            q,
            index: chi.index(),
            conductor: chi.conductor(),
            parity: chi.parity(),
            re: v.value.re + 0.0,
            im: v.value.im + 0.0,
            abs: v.value.norm(),
            abs_error: v.abs_error,
            series_re: s.value.re + 0.0,
            series_im: s.value.im + 0.0,
            route_difference: (v.value - s.value).norm(),
        };
        let _ = writeln!(text, "L(1, chi_{q}[{}]) = {} {} {}i  (|L| = {}, series route differs by {:e})", row.index, row.re, if row.im.is_sign_negative() { '-' } else { '+' }, row.im.abs(), row.abs, row.route_difference);
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{},{},{}",
            row.q, row.index, row.conductor, row.parity, row.re, row.im, row.abs, row.abs_error, row.series_re, row.series_im, row.route_difference
        );
        rows.push(row);
    }
    let mut out = Output::new(envelope("dirichlet l1", "values", rows)?, text);
    out.csv = Some(csv);
    Ok(out)
}

fn survey(c: &Common, q_max: u64) -> CliResult<Output> {
    let records = dirichlet::survey(q_max, c.out.as_deref())?;
    let mut text = String::new();
    for r in &records {
        let _ = writeln!(
            text,
            "q = {:>4} index = {:>4} parity = {} |L(1,chi)| = {:<20} bound = {:<20} ratio = {}",
            r.q,
            r.char_index,
            r.parity,
            r.abs_l1,
            r.bound_upper.map_or("undefined".to_string(), |b| b.to_string()),
            r.ratio.map_or("undefined".to_string(), |b| b.to_string()),
        );
    }
    let mut json = envelope("dirichlet survey", "records", &records)?;
    if let Some(stem) = &c.out {
        json["files"] = json!([path_str(&stem.with_extension("csv")), path_str(&stem.with_extension("json"))]);
    }
    let mut out = Output::new(json, text);
    out.csv = Some(dirichlet::survey_csv(&records)?);
    Ok(out)
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn window(c: &Common, args: &WindowArgs) -> CliResult<Output> {
    let inst = match (&args.instance, args.q, args.index) {
        (Some(arg), _, _) => load_instance(arg)?,
        (None, Some(q), Some(i)) => dirichlet_instance(&dirichlet::character(q, i)?)?,
        _ => return Err(CliError::Usage("window needs --q with --index, or --instance".into())),
    };
    let tbl = sieve_for(c, &[args.x])?;
    let reb = audit::reb_window(&inst, &tbl, args.x)?;
    let log_l1 = audit::explicit_formula_window(&inst, &tbl, args.x)?;
    let text = format!(
        "{inst}, x = {}\n|Re B(f)|   in {reb}\nlog|L(1,f)| in {log_l1}\n|L(1,f)|    in [{}, {}]\n",
        args.x,
        log_l1.lo().exp(),
        log_l1.hi().exp()
    );
    let json = json!({
        "schema": SCHEMA,
        "command": "window",
        "label": inst.label(),
        "x": args.x,
        "reB": reb,
        "log_abs_L1": log_l1,
    });
    let mut out = Output::new(json, text);
    out.csv = Some(format!(
        "label,x,reB_lo,reB_hi,log_abs_L1_lo,log_abs_L1_hi\n{},{},{},{},{},{}\n",
        inst.label(), args.x, reb.lo(), reb.hi(), log_l1.lo(), log_l1.hi()
    ));
    Ok(out)
}
