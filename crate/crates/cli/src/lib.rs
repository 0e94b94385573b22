//! Command-line front end: argument parsing, dispatch to `ford_core`, and
//! output formatting. [`run`] does everything except touching the process
//! streams, so the binary and the tests share one code path.

pub mod render;
pub mod verify;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use ford_core::approx::{error_report, reports_to_csv, ErrorSummary};
use ford_core::arith::{build_sieves, Rational, SieveTables, DEFAULT_SIEVE_LIMIT};
use ford_core::counting::{cardinality_brute, cardinality_exact, cardinality_mobius, jump_rows, jump_rows_to_csv};
use ford_core::geometry::{AffineMode, Fraction};
use ford_core::sequences::{
    extract_affine, extract_origin, farey, farey_horizontal, fractions_to_csv, fractions_to_json, fractions_to_text,
};
use num_bigint::BigInt;
use serde_json::json;

use crate::render::RenderKind;
use crate::verify::{outcomes_to_json, outcomes_to_text, run_suite, Fault, Formulas};

pub const SIEVE_LIMIT_VAR: &str = "FORD_SIEVE_LIMIT";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "ford",
    version,
    about = "Sequences of fractions cut out of the Ford circles by lines"
)]
pub struct Cli {
    /// Output format; svg applies to `render` only.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,

    /// Write the output here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
    Svg,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Fractions whose circles touch y = x/m, or y = x/m + b with --b.
    Extract(ExtractArgs),
    /// Farey sequence of order n, or the one cut out by y = k.
    Farey(FareyArgs),
    /// Number of fractions touched by y = x/m.
    Card(CardArgs),
    /// Cardinality increments over a range of m.
    Jumps(JumpsArgs),
    /// Exact cardinality against the three closed-form approximations.
    Report(ReportArgs),
    /// Draw circles, the line y = x/m, or the lattice points as SVG.
    Render(RenderArgs),
    /// Check the closed forms against brute force up to --max-m.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct ExtractArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub m: u64,
    /// Intercept of an affine line, as p or p/q.
    #[arg(long, value_parser = parse_rational)]
    pub b: Option<Rational>,
    /// Touch condition for affine lines.
    #[arg(long, value_enum, requires = "b")]
    pub mode: Option<ModeArg>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Centre-to-line distance against the radius.
    Exact,
    /// The linearised condition pq + m q² b <= m.
    Paper,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("order").required(true).args(["n", "k"])))]
pub struct FareyArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: Option<u64>,
    /// Height of a horizontal line, as p or p/q.
    #[arg(long, value_parser = parse_rational)]
    pub k: Option<Rational>,
}

#[derive(Args, Debug)]
pub struct CardArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub m: u64,
    #[arg(long, value_enum, default_value_t = Method::Exact)]
    pub method: Method,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Sum of 2^(ω(j) - 1).
    Exact,
    /// Half the sum of squarefree divisor counts.
    Mobius,
    /// Length of the generated sequence.
    Brute,
}

#[derive(Args, Debug)]
pub struct JumpsArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub from: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub to: u64,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    #[arg(long)]
    pub from: u64,
    #[arg(long)]
    pub to: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub step: u64,
}

#[derive(Args, Debug)]
pub struct RenderArgs {
    #[arg(long, value_enum)]
    pub kind: RenderKind,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub m: u64,
    /// Largest denominator drawn; defaults to m.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub qmax: Option<u64>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 2000, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_m: u64,
    #[arg(long, value_enum, hide = true)]
    pub inject_fault: Option<Fault>,
}

/// Parses `p` or `p/q` with decimal digits only: no sign, no decimal point,
/// nonzero denominator.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let digits = |part: &str| !part.is_empty() && part.bytes().all(|b| b.is_ascii_digit());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    if !digits(num) || !digits(den) {
        return Err(format!("`{s}` is not of the form p or p/q with unsigned integers"));
    }
    let num: BigInt = num.parse().map_err(|e| format!("{e}"))?;
    let den: BigInt = den.parse().map_err(|e| format!("{e}"))?;
    if den == BigInt::from(0) {
        return Err(format!("`{s}` has a zero denominator"));
    }
    Ok(Rational::new(num, den))
}

/// Process-level settings that do not come from the argument list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Settings {
    pub sieve_limit: u64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            sieve_limit: DEFAULT_SIEVE_LIMIT,
        }
    }
}

impl Settings {
    pub fn from_env() -> Result<Self, String> {
        match std::env::var(SIEVE_LIMIT_VAR) {
            Ok(v) => v
                .trim()
                .parse::<u64>()
                .ok()
                .filter(|&n| n >= 1)
                .map(|sieve_limit| Settings { sieve_limit })
                .ok_or_else(|| format!("{SIEVE_LIMIT_VAR} must be a positive integer, got `{v}`")),
            Err(_) => Ok(Settings::default()),
        }
    }
}

/// Exit status plus the bytes destined for each standard stream.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub stdout: Vec<u8>,
    pub stderr: Vec<u8>,
}

impl CommandResult {
    fn failure(exit_code: i32, message: impl AsRef<str>) -> Self {
        let mut stderr = message.as_ref().as_bytes().to_vec();
        if !stderr.ends_with(b"\n") {
            stderr.push(b'\n');
        }
        CommandResult {
            exit_code,
            stdout: Vec::new(),
            stderr,
        }
    }
}

enum CliError {
    Usage(String),
    Domain(String),
}

impl From<ford_core::Error> for CliError {
    fn from(e: ford_core::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

/// Formatted output: `payload` goes to `--out` or stdout, `note` to stderr.
struct Output {
    payload: String,
    note: Option<String>,
}

impl From<String> for Output {
    fn from(payload: String) -> Self {
        Output { payload, note: None }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// reading [`SIEVE_LIMIT_VAR`] from the environment.
pub fn run<I, T>(args: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Settings::from_env() {
        Ok(settings) => run_with(args, &settings),
        Err(message) => CommandResult::failure(EXIT_USAGE, format!("error: {message}")),
    }
}

pub fn run_with<I, T>(args: I, settings: &Settings) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                CommandResult::failure(EXIT_USAGE, rendered)
            } else {
                CommandResult {
                    exit_code: EXIT_OK,
                    stdout: rendered.into_bytes(),
                    stderr: Vec::new(),
                }
            };
        }
    };

    let output = match dispatch(&cli, settings) {
        Ok(output) => output,
        Err(CliError::Usage(message)) => return CommandResult::failure(EXIT_USAGE, format!("error: {message}")),
        Err(CliError::Domain(message)) => return CommandResult::failure(EXIT_DOMAIN, format!("error: {message}")),
    };

    let mut result = CommandResult {
        exit_code: EXIT_OK,
        stdout: Vec::new(),
        stderr: output.note.map(String::into_bytes).unwrap_or_default(),
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, output.payload.as_bytes()) {
                return CommandResult::failure(EXIT_DOMAIN, format!("error: cannot write {}: {e}", path.display()));
            }
        }
        None => result.stdout = output.payload.into_bytes(),
    }
    result
}

fn load_sieve(settings: &Settings) -> Result<SieveTables, CliError> {
    Ok(build_sieves(settings.sieve_limit)?)
}

fn dispatch(cli: &Cli, settings: &Settings) -> Result<Output, CliError> {
    let format = cli.format;
    let is_render = matches!(cli.command, Command::Render(_));
    if format == OutputFormat::Svg && !is_render {
        return Err(CliError::Usage("--format svg is only available for render".into()));
    }
    match &cli.command {
        Command::Extract(args) => cmd_extract(args, format),
        Command::Farey(args) => cmd_farey(args, format),
        Command::Card(args) => cmd_card(args, format, settings),
        Command::Jumps(args) => cmd_jumps(args, format, settings),
        Command::Report(args) => cmd_report(args, format, settings),
        Command::Render(args) => cmd_render(args, format),
        Command::Verify(args) => cmd_verify(args, format, settings),
    }
}

fn format_fractions(fractions: &[Fraction], format: OutputFormat) -> Output {
    match format {
        OutputFormat::Json => format!("{}\n", fractions_to_json(fractions)),
        OutputFormat::Csv => fractions_to_csv(fractions),
        _ => format!("{}\n", fractions_to_text(fractions)),
    }
    .into()
}

fn cmd_extract(args: &ExtractArgs, format: OutputFormat) -> Result<Output, CliError> {
    let result = match &args.b {
        None => extract_origin(args.m)?,
        Some(b) => {
            let mode = match args.mode.unwrap_or(ModeArg::Exact) {
                ModeArg::Exact => AffineMode::Exact,
                ModeArg::Paper => AffineMode::Simplified,
            };
            extract_affine(args.m, b, mode)?
        }
    };
    Ok(format_fractions(&result.fractions, format))
}

fn cmd_farey(args: &FareyArgs, format: OutputFormat) -> Result<Output, CliError> {
    let result = match (args.n, &args.k) {
        (Some(n), None) => farey(n)?,
        (None, Some(k)) => farey_horizontal(k)?,
        _ => return Err(CliError::Usage("pass exactly one of --n and --k".into())),
    };
    Ok(format_fractions(&result.fractions, format))
}

fn cmd_card(args: &CardArgs, format: OutputFormat, settings: &Settings) -> Result<Output, CliError> {
    let (method, value) = match args.method {
        Method::Exact => ("exact", cardinality_exact(&load_sieve(settings)?, args.m)?),
        Method::Mobius => ("mobius", cardinality_mobius(&load_sieve(settings)?, args.m)?),
        Method::Brute => ("brute", cardinality_brute(args.m)?),
    };
    let m = args.m;
    Ok(match format {
        OutputFormat::Json => format!("{}\n", json!({"m": m, "method": method, "cardinality": value})),
        OutputFormat::Csv => format!("m,method,cardinality\n{m},{method},{value}\n"),
        _ => format!("{value}\n"),
    }
    .into())
}

fn cmd_jumps(args: &JumpsArgs, format: OutputFormat, settings: &Settings) -> Result<Output, CliError> {
    if args.from > args.to {
        return Err(CliError::Usage(format!(
            "--from {} is greater than --to {}",
            args.from, args.to
        )));
    }
    let rows = jump_rows(&load_sieve(settings)?, args.from, args.to)?;
    Ok(match format {
        OutputFormat::Json => format!("{}\n", serde_json::to_string(&rows).expect("rows serialize")),
        _ => jump_rows_to_csv(&rows),
    }
    .into())
}

fn summary_line(summary: &ErrorSummary) -> String {
    let [e1, e2, e3] = &summary.mean_abs_error;
    let [k1, k2, k3] = &summary.max_ratio;
    format!(
        "best approximation by mean absolute error: {} (mean |err|: a1 {}, a2 {}, a3 {}; max |err|/sqrt(m): a1 {}, a2 {}, a3 {})\n",
        summary.best,
        e1.to_decimal(6),
        e2.to_decimal(6),
        e3.to_decimal(6),
        k1.to_decimal(6),
        k2.to_decimal(6),
        k3.to_decimal(6)
    )
}

fn cmd_report(args: &ReportArgs, format: OutputFormat, settings: &Settings) -> Result<Output, CliError> {
    if args.from < 2 || args.from > args.to {
        return Err(CliError::Usage(format!(
            "report needs 2 <= --from <= --to, got --from {} --to {}",
            args.from, args.to
        )));
    }
    let summary = error_report(&load_sieve(settings)?, args.from, args.to, args.step)?;
    let csv = reports_to_csv(&summary.reports);
    let line = summary_line(&summary);
    Ok(match format {
        OutputFormat::Csv => Output {
            payload: csv,
            note: Some(line),
        },
        OutputFormat::Json => {
            let reals = |xs: &[ford_core::arith::Real; 3]| xs.iter().map(|x| x.to_f64()).collect::<Vec<_>>();
            let reports: Vec<_> = summary
                .reports
                .iter()
                .map(|r| {
                    json!({
                        "m": r.m,
                        "exact": r.exact,
                        "a": reals(&r.approx),
                        "err": reals(&r.err),
                        "ratio": reals(&r.ratio),
                    })
                })
                .collect();
            let value = json!({
                "reports": reports,
                "summary": {
                    "best": summary.best.to_string(),
                    "mean_abs_error": reals(&summary.mean_abs_error),
                    "max_ratio": reals(&summary.max_ratio),
                },
            });
            format!("{value}\n").into()
        }
        _ => format!("{csv}{line}").into(),
    })
}

fn cmd_render(args: &RenderArgs, format: OutputFormat) -> Result<Output, CliError> {
    if !matches!(format, OutputFormat::Text | OutputFormat::Svg) {
        return Err(CliError::Usage("render only produces svg".into()));
    }
    let svg = match args.kind {
        RenderKind::Circles => render::render_circles(args.qmax.unwrap_or(args.m)),
        RenderKind::Line => render::render_line(args.m, args.qmax)?,
        RenderKind::Lattice => render::render_lattice(args.m)?,
    };
    Ok(svg.into())
}

fn cmd_verify(args: &VerifyArgs, format: OutputFormat, settings: &Settings) -> Result<Output, CliError> {
    let sieve = load_sieve(settings)?;
    let mut formulas = Formulas::default();
    if let Some(fault) = args.inject_fault {
        formulas = fault.apply(formulas);
    }
    match run_suite(&sieve, args.max_m, &formulas) {
        Ok(outcomes) => Ok(match format {
            OutputFormat::Json => format!("{}\n", outcomes_to_json(args.max_m, &outcomes)),
            _ => outcomes_to_text(args.max_m, &outcomes),
        }
        .into()),
        Err(failure) => Err(CliError::Domain(format!(
            "verify failed in check `{}`: {}",
            failure.check, failure.detail
        ))),
    }
}
