//! Batch front end for the verification toolkit.
//!
//! Three subcommands: `verify` (build a family, run every residual suite,
//! emit a JSON report), `sample` (tabulate profiles and residuals over a
//! `xi` grid as CSV), and `oracle` (randomized closed-formula versus
//! generic-pipeline trials). Configuration comes from flags layered over an
//! optional flat TOML file; every numeric stream is seeded, so identical
//! configurations produce byte-identical output.
//!
//! Exit codes: 0 pass, 1 residual failure or evaluation error, 2 usage
//! error.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num::{BigInt, BigRational, ToPrimitive, Zero};

use warpcheck::report::format_float;
use warpcheck::{
    Branch, Family, ResidualReport, RunError, RunSpec, SampleRow, Signature,
};

#[derive(Parser)]
#[command(
    name = "warpcheck",
    version,
    about = "Residual verification for warped products over conformally flat pseudo-Euclidean bases"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Build a solution family, evaluate the reduced equations, the full
    /// second-order system, and the flat-fiber curvature; write a JSON
    /// report whose pass/fail drives the exit status.
    Verify(CommonArgs),
    /// Tabulate the family profiles and residuals over an evenly spaced xi
    /// grid as RFC 4180 CSV.
    Sample(CommonArgs),
    /// Seeded randomized equivalence trials: closed conformal Ricci against
    /// the generic pipeline and warped Ricci blocks against the full
    /// flat-fiber product metric.
    Oracle(CommonArgs),
}

#[derive(Args, Clone, Default)]
pub struct CommonArgs {
    /// Flat TOML config file; explicit flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Base dimension (>= 3).
    #[arg(long)]
    pub n: Option<usize>,
    /// Fiber dimension (>= 1).
    #[arg(long)]
    pub m: Option<usize>,
    /// Base signature as a sign string, e.g. "+++-".
    #[arg(long, allow_hyphen_values = true)]
    pub eps: Option<String>,
    /// Fiber signature as a sign string, e.g. "-+".
    #[arg(long = "fiber-eps", allow_hyphen_values = true)]
    pub fiber_eps: Option<String>,
    /// Family: thm13 | thm14 | thm15 | exp-example | custom.
    #[arg(long)]
    pub family: Option<String>,
    /// Branch of the power-law family: minus | plus.
    #[arg(long)]
    pub branch: Option<String>,
    /// Scale constant of the families (k > 0).
    #[arg(long)]
    pub k: Option<f64>,
    /// Slope of the linear factor (k1 > 0).
    #[arg(long)]
    pub k1: Option<f64>,
    /// Offset of the linear factor.
    #[arg(long, allow_negative_numbers = true)]
    pub k2: Option<f64>,
    /// Exponential rate of the warping profile (null families), nonzero.
    #[arg(long = "A", allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// First mode coefficient of the exponential example.
    #[arg(long, allow_negative_numbers = true)]
    pub c1: Option<f64>,
    /// Second mode coefficient of the exponential example.
    #[arg(long, allow_negative_numbers = true)]
    pub c2: Option<f64>,
    /// Einstein constant of the warped metric.
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    /// Einstein constant of the fiber.
    #[arg(long = "lambdaF", allow_negative_numbers = true)]
    pub lambda_f: Option<f64>,
    /// Direction as comma-separated rationals ("1,1,0" or "1/2,-1/3,0");
    /// rational arithmetic decides nullity exactly.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Custom family: comma-separated polynomial coefficients of phi in xi,
    /// constant term first.
    #[arg(long = "phi-poly", allow_hyphen_values = true)]
    pub phi_poly: Option<String>,
    /// Custom family: polynomial coefficients of f.
    #[arg(long = "f-poly", allow_hyphen_values = true)]
    pub f_poly: Option<String>,
    /// Residual tolerance of the pass/fail decision.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Central-difference step for derivative fallbacks.
    #[arg(long = "fd-step")]
    pub fd_step: Option<f64>,
    /// Fixed integrator step for the integrated null family.
    #[arg(long = "ode-step")]
    pub ode_step: Option<f64>,
    /// Sample points (verify/sample) or trials (oracle).
    #[arg(long)]
    pub samples: Option<usize>,
    /// Seed of the ChaCha8 sampling stream.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Grid for `sample` as "min,max,step".
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Initial abscissa of the integrated null family.
    #[arg(long, allow_negative_numbers = true)]
    pub xi0: Option<f64>,
    /// Initial value of the integrated conformal factor.
    #[arg(long, allow_negative_numbers = true)]
    pub phi0: Option<f64>,
    /// Initial slope of the integrated conformal factor.
    #[arg(long, allow_negative_numbers = true)]
    pub dphi0: Option<f64>,
    /// Integration span "lo,hi" for the integrated null family.
    #[arg(long, allow_hyphen_values = true)]
    pub span: Option<String>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format: json (verify/oracle) or csv (sample).
    #[arg(long)]
    pub format: Option<String>,
}

/// The same keys as the flags, in a flat TOML file.
#[derive(serde::Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub eps: Option<String>,
    pub fiber_eps: Option<String>,
    pub family: Option<String>,
    pub branch: Option<String>,
    pub k: Option<f64>,
    pub k1: Option<f64>,
    pub k2: Option<f64>,
    #[serde(rename = "A")]
    pub a: Option<f64>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub lambda: Option<f64>,
    #[serde(rename = "lambdaF")]
    pub lambda_f: Option<f64>,
    pub alpha: Option<String>,
    pub phi_poly: Option<String>,
    pub f_poly: Option<String>,
    pub tol: Option<f64>,
    pub fd_step: Option<f64>,
    pub ode_step: Option<f64>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub grid: Option<String>,
    pub xi0: Option<f64>,
    pub phi0: Option<f64>,
    pub dphi0: Option<f64>,
    pub span: Option<String>,
    pub out: Option<String>,
    pub format: Option<String>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failure(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => write!(f, "{m}"),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Verify,
    Sample,
    Oracle,
}

impl CommandKind {
    fn name(&self) -> &'static str {
        match self {
            CommandKind::Verify => "verify",
            CommandKind::Sample => "sample",
            CommandKind::Oracle => "oracle",
        }
    }
}

/// Layers the config file (if any) under the flags.
pub fn merge_with_config(args: &CommonArgs) -> Result<CommonArgs, CliError> {
    let Some(path) = &args.config else {
        return Ok(args.clone());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    let file: FileConfig = toml::from_str(&text)
        .map_err(|e| usage(format!("invalid config {}: {e}", path.display())))?;
    let mut merged = args.clone();
    macro_rules! fill {
        ($($field:ident),*) => {
            $(if merged.$field.is_none() { merged.$field = file.$field.clone(); })*
        };
    }
    fill!(
        n, m, eps, fiber_eps, family, branch, k, k1, k2, a, c1, c2, lambda, lambda_f, alpha,
        phi_poly, f_poly, tol, fd_step, ode_step, samples, seed, grid, xi0, phi0, dphi0, span,
        format
    );
    if merged.out.is_none() {
        merged.out = file.out.map(PathBuf::from);
    }
    Ok(merged)
}

fn parse_f64_list(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| usage(format!("invalid {what} entry {tok:?}")))
        })
        .collect()
}

/// Parses one rational token: integer, `p/q`, or a finite decimal.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| format!("bad numerator {p:?}"))?;
        let q: BigInt = q.trim().parse().map_err(|_| format!("bad denominator {q:?}"))?;
        if q.is_zero() {
            return Err("zero denominator".to_string());
        }
        Ok(BigRational::new(p, q))
    } else if let Some((int, frac)) = s.split_once('.') {
        let negative = int.starts_with('-');
        let int_digits = if int.is_empty() || int == "-" || int == "+" {
            "0"
        } else {
            int
        };
        let whole: BigInt = int_digits
            .parse()
            .map_err(|_| format!("bad number {s:?}"))?;
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("bad number {s:?}"));
        }
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let fr: BigInt = frac.parse().map_err(|_| format!("bad number {s:?}"))?;
        let total = whole * &scale + if negative { -fr } else { fr };
        Ok(BigRational::new(total, scale))
    } else {
        let p: BigInt = s.parse().map_err(|_| format!("bad number {s:?}"))?;
        Ok(BigRational::from(p))
    }
}

/// Direction parsed from rationals, with nullity decided exactly.
pub struct ParsedDirection {
    pub alpha: Vec<f64>,
    pub exact_null: bool,
}

pub fn parse_direction(s: &str, eps: &Signature) -> Result<ParsedDirection, CliError> {
    let rationals: Vec<BigRational> = s
        .split(',')
        .map(|tok| parse_rational(tok).map_err(|e| usage(format!("invalid alpha: {e}"))))
        .collect::<Result<_, _>>()?;
    if rationals.len() != eps.dim() {
        return Err(usage(format!(
            "alpha has {} entries, expected {}",
            rationals.len(),
            eps.dim()
        )));
    }
    let mut causal = BigRational::zero();
    for (i, r) in rationals.iter().enumerate() {
        let sq = r * r;
        if eps.eps(i) > 0.0 {
            causal += sq;
        } else {
            causal -= sq;
        }
    }
    let alpha = rationals
        .iter()
        .map(|r| r.to_f64().ok_or_else(|| usage("alpha entry overflows f64")))
        .collect::<Result<Vec<f64>, _>>()?;
    Ok(ParsedDirection {
        alpha,
        exact_null: causal.is_zero(),
    })
}

/// Builds the run specification from merged arguments, with per-command
/// defaults layered under the family-aware defaults.
pub fn build_spec(merged: &CommonArgs, kind: CommandKind) -> Result<RunSpec, CliError> {
    let family = match kind {
        // the oracle suite is family-independent
        CommandKind::Oracle => Family::Custom,
        _ => match merged.family.as_deref() {
            None => Family::Thm13,
            Some(name) => Family::parse(name).ok_or_else(|| {
                usage(format!(
                    "unknown family {name:?}; expected thm13 | thm14 | thm15 | exp-example | custom"
                ))
            })?,
        },
    };
    let n = merged.n.unwrap_or(4);
    if n < 3 {
        return Err(usage("n must be >= 3"));
    }
    let mut spec = RunSpec::for_family(family, n);

    if kind == CommandKind::Oracle {
        spec.m = 2;
        spec.samples = 50;
    }
    if let Some(m) = merged.m {
        if m < 1 {
            return Err(usage("m must be >= 1"));
        }
        spec.m = m;
    }
    spec.fiber_eps = match &merged.fiber_eps {
        Some(s) => Signature::parse_fiber(s).map_err(|e| usage(e.to_string()))?,
        None => Signature::fiber(&vec![1i8; spec.m]).expect("m >= 1"),
    };
    if let Some(eps) = &merged.eps {
        spec.eps = Signature::parse(eps).map_err(|e| usage(e.to_string()))?;
        if spec.eps.dim() != n {
            return Err(usage(format!(
                "signature {eps:?} has length {}, expected n = {n}",
                spec.eps.dim()
            )));
        }
    }
    if let Some(alpha) = &merged.alpha {
        let parsed = parse_direction(alpha, &spec.eps)?;
        spec.alpha = parsed.alpha;
        spec.alpha_exact_null = parsed.exact_null;
    } else if merged.eps.is_some() {
        // an explicit signature invalidates the family-default direction;
        // recompute exact nullity of the default alpha under the new signs
        let causal: f64 = spec
            .alpha
            .iter()
            .enumerate()
            .map(|(i, a)| spec.eps.eps(i) * a * a)
            .sum();
        spec.alpha_exact_null = causal == 0.0;
    }
    if let Some(branch) = &merged.branch {
        spec.branch = match branch.as_str() {
            "minus" => Branch::Minus,
            "plus" => Branch::Plus,
            other => return Err(usage(format!("unknown branch {other:?}"))),
        };
    }
    if let Some(v) = merged.k {
        spec.k = v;
    }
    if let Some(v) = merged.k1 {
        spec.k1 = v;
    }
    if let Some(v) = merged.k2 {
        spec.k2 = v;
    }
    if let Some(v) = merged.a {
        spec.a = v;
    }
    if let Some(v) = merged.c1 {
        spec.c1 = v;
    }
    if let Some(v) = merged.c2 {
        spec.c2 = v;
    }
    if let Some(v) = merged.lambda {
        spec.lambda = v;
    }
    if let Some(v) = merged.lambda_f {
        spec.lambda_f = v;
    }
    if let Some(s) = &merged.phi_poly {
        spec.phi_poly = parse_f64_list(s, "phi-poly")?;
    }
    if let Some(s) = &merged.f_poly {
        spec.f_poly = parse_f64_list(s, "f-poly")?;
    }
    if let Some(v) = merged.tol {
        spec.tol = v;
    }
    if let Some(v) = merged.fd_step {
        spec.fd_step = v;
    }
    if let Some(v) = merged.ode_step {
        spec.ode_step = v;
    }
    if let Some(v) = merged.samples {
        spec.samples = v;
    }
    if let Some(v) = merged.seed {
        spec.seed = v;
    }
    if let Some(v) = merged.xi0 {
        spec.xi0 = v;
    }
    if let Some(v) = merged.phi0 {
        spec.phi0 = v;
    }
    if let Some(v) = merged.dphi0 {
        spec.dphi0 = v;
    }
    if let Some(s) = &merged.span {
        let vals = parse_f64_list(s, "span")?;
        if vals.len() != 2 || vals[1] < vals[0] {
            return Err(usage("span must be \"lo,hi\" with lo <= hi"));
        }
        spec.span = (vals[0], vals[1]);
    }
    if let Some(s) = &merged.grid {
        let vals = parse_f64_list(s, "grid")?;
        if vals.len() != 3 {
            return Err(usage("grid must be \"min,max,step\""));
        }
        spec.grid = Some((vals[0], vals[1], vals[2]));
    }
    Ok(spec)
}

fn check_format(merged: &CommonArgs, kind: CommandKind) -> Result<(), CliError> {
    let expected = match kind {
        CommandKind::Sample => "csv",
        _ => "json",
    };
    match merged.format.as_deref() {
        None => Ok(()),
        Some(f) if f == expected => Ok(()),
        Some(other) => Err(usage(format!(
            "{} emits {expected}, not {other:?}",
            kind.name()
        ))),
    }
}

/// Fixed CSV header of the sampling command.
pub const CSV_HEADER: [&str; 11] = [
    "xi", "phi", "dphi", "d2phi", "f", "df", "d2f", "res1", "res2", "res3", "warning",
];

pub fn write_sample_csv<W: std::io::Write>(rows: &[SampleRow], writer: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        match &row.values {
            Some(v) => w.write_record([
                format_float(row.xi),
                format_float(v.phi[0]),
                format_float(v.phi[1]),
                format_float(v.phi[2]),
                format_float(v.f[0]),
                format_float(v.f[1]),
                format_float(v.f[2]),
                format_float(v.res[0]),
                format_float(v.res[1]),
                format_float(v.res[2]),
                row.warning.clone(),
            ])?,
            None => {
                let mut record = vec![format_float(row.xi)];
                record.extend(std::iter::repeat_n(String::new(), 9));
                record.push(row.warning.clone());
                w.write_record(record)?
            }
        }
    }
    w.flush()
}

/// Re-parses a sampled CSV file into rows; the 17-significant-digit float
/// format makes this lossless.
pub fn read_sample_csv<R: std::io::Read>(reader: R) -> Result<Vec<SampleRow>, String> {
    let mut r = csv::Reader::from_reader(reader);
    let headers = r.headers().map_err(|e| e.to_string())?.clone();
    if headers.iter().ne(CSV_HEADER) {
        return Err(format!("unexpected CSV header {headers:?}"));
    }
    let mut rows = Vec::new();
    for record in r.records() {
        let record = record.map_err(|e| e.to_string())?;
        let field = |i: usize| record.get(i).unwrap_or("");
        let xi: f64 = field(0).parse().map_err(|e| format!("bad xi: {e}"))?;
        let warning = field(10).to_string();
        if field(1).is_empty() {
            rows.push(SampleRow {
                xi,
                values: None,
                warning,
            });
            continue;
        }
        let num = |i: usize| -> Result<f64, String> {
            field(i).parse().map_err(|e| format!("bad field {i}: {e}"))
        };
        rows.push(SampleRow {
            xi,
            values: Some(warpcheck::run::SampleValues {
                phi: [num(1)?, num(2)?, num(3)?],
                f: [num(4)?, num(5)?, num(6)?],
                res: [num(7)?, num(8)?, num(9)?],
            }),
            warning,
        });
    }
    Ok(rows)
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| CliError::Failure(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .map_err(|e| CliError::Failure(format!("cannot write to stdout: {e}")))
        }
    }
}

fn emit_warnings(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn emit_report(report: &ResidualReport, out: &Option<PathBuf>) -> Result<(), CliError> {
    let mut json = report.to_json();
    json.push('\n');
    write_output(out, &json)
}

fn run_command(kind: CommandKind, args: &CommonArgs) -> Result<u8, CliError> {
    let merged = merge_with_config(args)?;
    check_format(&merged, kind)?;
    let spec = build_spec(&merged, kind)?;

    let report_run = |result: Result<(ResidualReport, Vec<String>), RunError>| match result {
        Ok((report, warnings)) => {
            emit_warnings(&warnings);
            emit_report(&report, &merged.out)?;
            Ok(if report.pass { 0 } else { 1 })
        }
        Err(RunError::Usage(msg)) => Err(usage(msg)),
        Err(RunError::Geom(e)) => {
            eprintln!("error: {e}");
            let mut report = spec.empty_report(kind.name());
            report.pass = false;
            emit_report(&report, &merged.out)?;
            Ok(1)
        }
    };

    match kind {
        CommandKind::Verify => report_run(warpcheck::verify_report(&spec)),
        CommandKind::Oracle => report_run(warpcheck::oracle_report(&spec)),
        CommandKind::Sample => match warpcheck::sample_rows(&spec) {
            Ok((rows, warnings)) => {
                emit_warnings(&warnings);
                let mut buf = Vec::new();
                write_sample_csv(&rows, &mut buf)
                    .map_err(|e| CliError::Failure(format!("cannot encode CSV: {e}")))?;
                let text = String::from_utf8(buf).expect("CSV output is UTF-8");
                write_output(&merged.out, &text)?;
                Ok(0)
            }
            Err(RunError::Usage(msg)) => Err(usage(msg)),
            Err(RunError::Geom(e)) => {
                eprintln!("error: {e}");
                Ok(1)
            }
        },
    }
}

/// Top-level dispatch; returns the process exit code.
pub fn execute(cli: Cli) -> u8 {
    let (kind, args) = match &cli.command {
        Command::Verify(a) => (CommandKind::Verify, a),
        Command::Sample(a) => (CommandKind::Sample, a),
        Command::Oracle(a) => (CommandKind::Oracle, a),
    };
    match run_command(kind, args) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}
