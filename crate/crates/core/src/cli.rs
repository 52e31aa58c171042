//! Command-line front end.
//!
//! ```text
//! polyfisher table charlier --a 1:5:3 --n 0:2
//! polyfisher verify --config checks.toml
//! polyfisher summand krawtchouk --p 0.5 --N 5 --n 1
//! ```
//!
//! Exit status: 0 on success, 1 when a row did not converge or a check
//! failed, 2 on bad arguments or configuration.

use std::cmp::Ordering;
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{density_rho_n, FamilySpec};
use crate::fisher::{fisher_closed, fisher_report, fisher_summand};
use crate::quadrature::QuadratureConfig;
use crate::summation::TruncationPolicy;
use crate::verify::{run_suite, write_jsonl, VerifyConfig};

#[derive(Debug, Parser)]
#[command(name = "polyfisher", version, about = "Fisher information of Meixner, Krawtchouk, Charlier and Meixner-Pollaczek densities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form and numeric Fisher information over a parameter sweep.
    Table(TableArgs),
    /// Run the oracle suite and print one JSON object per check.
    Verify(VerifyArgs),
    /// Dump the Fisher summand and the density rho_n point by point.
    Summand(SummandArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Meixner,
    Krawtchouk,
    Charlier,
    #[value(alias = "meixner_pollaczek", alias = "mp")]
    MeixnerPollaczek,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Family parameters. Each accepts `value` or `start:stop:count`.
#[derive(Debug, Args)]
struct ParamArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Meixner c_M
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    p: Option<String>,
    #[arg(long = "N", allow_hyphen_values = true)]
    n_trials: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<String>,
}

#[derive(Debug, Args)]
struct FamilyArgs {
    #[arg(value_enum)]
    family_pos: Option<Family>,
    #[arg(long = "family", value_enum)]
    family_flag: Option<Family>,
}

impl FamilyArgs {
    fn resolve(&self) -> Result<Family> {
        match (self.family_pos, self.family_flag) {
            (Some(a), Some(b)) if a != b => Err(config("family given twice with different values")),
            (Some(f), _) | (None, Some(f)) => Ok(f),
            (None, None) => Err(config("no family given")),
        }
    }
}

#[derive(Debug, Args)]
struct TableArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[command(flatten)]
    params: ParamArgs,
    /// Degree range `min:max` (inclusive) or a single degree.
    #[arg(long = "n", default_value = "0:10")]
    degrees: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    max_terms: Option<usize>,
    #[arg(long)]
    tol_discrete: Option<f64>,
    #[arg(long)]
    tol_quad: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// TOML file of `key = value` overrides.
    #[arg(long, env = "POLYFISHER_CONFIG")]
    config: Option<PathBuf>,
    #[arg(long)]
    max_terms: Option<usize>,
    #[arg(long)]
    tol_discrete: Option<f64>,
    #[arg(long)]
    tol_quad: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SummandArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long = "n")]
    degree: u32,
    /// Integer range `start:stop` for discrete families (default `0:N` for
    /// Krawtchouk), `start:stop:count` for Meixner-Pollaczek.
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn config(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| config(format!("not a finite number: {s:?}")))
}

/// `value` or `start:stop:count` with inclusive endpoints.
pub fn parse_range(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(vec![parse_f64(v)?]),
        [start, stop, count] => {
            let (start, stop) = (parse_f64(start)?, parse_f64(stop)?);
            let count: usize = count
                .trim()
                .parse()
                .map_err(|_| config(format!("bad count in range {s:?}")))?;
            match count {
                0 => Err(config(format!("empty range {s:?}"))),
                1 if start != stop => Err(config(format!("range {s:?} has count 1 but distinct endpoints"))),
                1 => Ok(vec![start]),
                _ => Ok((0..count)
                    .map(|i| {
                        if i == count - 1 {
                            stop
                        } else {
                            start + (stop - start) * i as f64 / (count - 1) as f64
                        }
                    })
                    .collect()),
            }
        }
        _ => Err(config(format!("expected value or start:stop:count, got {s:?}"))),
    }
}

/// `k` or `min:max` over the integers, inclusive; empty ranges are errors.
pub fn parse_int_range(s: &str) -> Result<(i64, i64)> {
    let int = |t: &str| {
        t.trim()
            .parse::<i64>()
            .map_err(|_| config(format!("not an integer: {t:?}")))
    };
    let (lo, hi) = match s.split(':').collect::<Vec<_>>().as_slice() {
        [v] => (int(v)?, int(v)?),
        [a, b] => (int(a)?, int(b)?),
        _ => return Err(config(format!("expected k or min:max, got {s:?}"))),
    };
    if lo > hi {
        return Err(config(format!("empty range {s:?}")));
    }
    Ok((lo, hi))
}

fn as_u32(v: f64, what: &str) -> Result<u32> {
    if v.fract() != 0.0 || v < 0.0 || v > f64::from(u32::MAX) {
        return Err(config(format!("{what} must be a nonnegative integer, got {v}")));
    }
    Ok(v as u32)
}

impl ParamArgs {
    fn required<'a>(&'a self, value: &'a Option<String>, flag: &str, family: Family) -> Result<&'a str> {
        value
            .as_deref()
            .ok_or_else(|| config(format!("{family:?} needs --{flag}")))
    }

    /// Cartesian product of the parameter ranges, sorted lexicographically.
    fn specs(&self, family: Family) -> Result<Vec<FamilySpec>> {
        let sorted = |s: &str| -> Result<Vec<f64>> {
            let mut v = parse_range(s)?;
            v.sort_by(f64::total_cmp);
            v.dedup();
            Ok(v)
        };
        let mut out = Vec::new();
        match family {
            Family::Charlier => {
                for a in sorted(self.required(&self.a, "a", family)?)? {
                    out.push(FamilySpec::charlier(a)?);
                }
            }
            Family::Meixner => {
                let betas = sorted(self.required(&self.beta, "beta", family)?)?;
                let cs = sorted(self.required(&self.c, "c", family)?)?;
                for &beta in &betas {
                    for &c in &cs {
                        out.push(FamilySpec::meixner(beta, c)?);
                    }
                }
            }
            Family::Krawtchouk => {
                let ps = sorted(self.required(&self.p, "p", family)?)?;
                let ns = sorted(self.required(&self.n_trials, "N", family)?)?;
                for &p in &ps {
                    for &n in &ns {
                        out.push(FamilySpec::krawtchouk(p, as_u32(n, "N")?)?);
                    }
                }
            }
            Family::MeixnerPollaczek => {
                let lambdas = sorted(self.required(&self.lambda, "lambda", family)?)?;
                let phis = sorted(self.required(&self.phi, "phi", family)?)?;
                for &lambda in &lambdas {
                    for &phi in &phis {
                        out.push(FamilySpec::meixner_pollaczek(lambda, phi)?);
                    }
                }
            }
        }
        Ok(out)
    }

    fn single(&self, family: Family) -> Result<FamilySpec> {
        match self.specs(family)?.as_slice() {
            [spec] => Ok(*spec),
            _ => Err(config("summand takes a single value per parameter")),
        }
    }
}

/// Everything `table` needs, independent of argument parsing.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub specs: Vec<FamilySpec>,
    pub n_min: u32,
    pub n_max: u32,
    pub format: Format,
    pub policy: TruncationPolicy,
    pub quad: QuadratureConfig,
    pub tol_discrete: f64,
    pub tol_exact: f64,
    pub tol_quad: f64,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        self.policy.validate()?;
        self.quad.validate()?;
        if self.n_min > self.n_max {
            return Err(config(format!("empty degree range {}:{}", self.n_min, self.n_max)));
        }
        for spec in &self.specs {
            spec.validate()?;
            spec.check_degree(self.n_max)?;
        }
        Ok(())
    }

    fn tol(&self, spec: &FamilySpec) -> f64 {
        match spec {
            FamilySpec::Krawtchouk { .. } => self.tol_exact,
            FamilySpec::MeixnerPollaczek { .. } => self.tol_quad,
            _ => self.tol_discrete,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub family: &'static str,
    pub params: String,
    pub n: u32,
    pub closed: f64,
    pub numeric: f64,
    pub rel_err: f64,
    /// The numeric value met its stopping rule and agrees with the closed
    /// form to the family's tolerance.
    pub converged: bool,
}

fn format_params(spec: &FamilySpec) -> String {
    spec.params()
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}

fn compare_specs(a: &FamilySpec, b: &FamilySpec) -> Ordering {
    a.name().cmp(b.name()).then_with(|| {
        let (pa, pb) = (a.params(), b.params());
        pa.iter()
            .zip(&pb)
            .map(|((_, x), (_, y))| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}

/// One row per (parameters, n), sorted by family, parameters, then n.
///
/// Krawtchouk at `n = N` has a closed form but no numeric value (the summand
/// needs `P_{N+1}`); such rows carry `numeric = NaN` and `converged = false`.
pub fn sweep_rows(cfg: &SweepConfig) -> Result<Vec<TableRow>> {
    cfg.validate()?;
    let mut specs = cfg.specs.clone();
    specs.sort_by(compare_specs);
    let mut rows = Vec::new();
    for spec in &specs {
        for n in cfg.n_min..=cfg.n_max {
            let row = match fisher_report(spec, n, &cfg.policy, &cfg.quad) {
                Ok(r) => TableRow {
                    family: spec.name(),
                    params: format_params(spec),
                    n,
                    closed: r.closed,
                    numeric: r.numeric,
                    rel_err: r.rel_err,
                    converged: r.converged && r.rel_err <= cfg.tol(spec),
                },
                Err(Error::Domain(_)) if spec.max_degree() == Some(n) => TableRow {
                    family: spec.name(),
                    params: format_params(spec),
                    n,
                    closed: fisher_closed(spec, n)?,
                    numeric: f64::NAN,
                    rel_err: f64::NAN,
                    converged: false,
                },
                Err(e) => return Err(e),
            };
            rows.push(row);
        }
    }
    Ok(rows)
}

pub fn write_table<W: Write>(mut w: W, rows: &[TableRow], format: Format) -> io::Result<()> {
    match format {
        Format::Csv => {
            writeln!(w, "family,params,n,closed,numeric,rel_err,converged")?;
            for r in rows {
                writeln!(
                    w,
                    "{},{},{},{:.16e},{:.16e},{:.16e},{}",
                    r.family, r.params, r.n, r.closed, r.numeric, r.rel_err, r.converged
                )?;
            }
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, rows)?;
            writeln!(w)?;
        }
    }
    Ok(())
}

/// `(x, summand, rho_n)` rows for `summand`.
pub fn summand_rows(spec: &FamilySpec, n: u32, xs: &[f64]) -> Result<Vec<(f64, f64, f64)>> {
    xs.iter()
        .map(|&x| Ok((x, fisher_summand(spec, n, x)?, density_rho_n(spec, n, x)?.rho_n)))
        .collect()
}

fn summand_grid(spec: &FamilySpec, range: Option<&str>) -> Result<Vec<f64>> {
    if spec.is_discrete() {
        let (lo, hi) = match (range, spec) {
            (Some(r), _) => parse_int_range(r)?,
            (None, FamilySpec::Krawtchouk { n_trials, .. }) => (0, i64::from(*n_trials)),
            (None, _) => return Err(config("--x start:stop is required for this family")),
        };
        if lo < 0 {
            return Err(config(format!("x range starts below 0: {lo}")));
        }
        let xs: Vec<f64> = (lo..=hi).map(|x| x as f64).collect();
        if let Some(&last) = xs.last() {
            spec.check_support(last)?;
        }
        Ok(xs)
    } else {
        let r = range.ok_or_else(|| config("--x start:stop:count is required for meixner-pollaczek"))?;
        let xs = parse_range(r)?;
        if xs.len() > 1 && xs[0] > xs[xs.len() - 1] {
            return Err(config(format!("decreasing x range {r:?}")));
        }
        Ok(xs)
    }
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| config(format!("cannot create {}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn io_err(e: io::Error) -> Error {
    config(format!("write failed: {e}"))
}

fn cmd_table(args: &TableArgs) -> Result<i32> {
    let family = args.family.resolve()?;
    let (lo, hi) = parse_int_range(&args.degrees)?;
    if lo < 0 || hi > i64::from(u32::MAX) {
        return Err(config(format!("degree range out of bounds: {}", args.degrees)));
    }
    let mut policy = TruncationPolicy::default();
    if let Some(k) = args.max_terms {
        policy.max_terms = k;
    }
    let defaults = VerifyConfig::default();
    let cfg = SweepConfig {
        specs: args.params.specs(family)?,
        n_min: lo as u32,
        n_max: hi as u32,
        format: args.format,
        policy,
        quad: QuadratureConfig::default(),
        tol_discrete: args.tol_discrete.unwrap_or(defaults.tol_discrete),
        tol_exact: defaults.tol_exact,
        tol_quad: args.tol_quad.unwrap_or(defaults.tol_quad),
    };
    let rows = sweep_rows(&cfg)?;
    let mut out = open_out(&args.out)?;
    write_table(&mut out, &rows, cfg.format).map_err(io_err)?;
    out.flush().map_err(io_err)?;
    Ok(if rows.iter().all(|r| r.converged) { 0 } else { 1 })
}

fn cmd_verify(args: &VerifyArgs, err: &mut dyn Write) -> Result<i32> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| config(format!("cannot read {}: {e}", path.display())))?;
            VerifyConfig::from_toml_str(&text)?
        }
        None => VerifyConfig::default(),
    };
    if let Some(k) = args.max_terms {
        cfg.max_terms = k;
    }
    if let Some(t) = args.tol_discrete {
        cfg.tol_discrete = t;
    }
    if let Some(t) = args.tol_quad {
        cfg.tol_quad = t;
    }
    cfg.policy().validate()?;
    let results = run_suite(&cfg);
    let mut out = open_out(&args.out)?;
    write_jsonl(&mut out, &results).map_err(io_err)?;
    out.flush().map_err(io_err)?;
    let failed = results.iter().filter(|r| !r.passed).count();
    let _ = writeln!(err, "{} checks, {failed} failed", results.len());
    Ok(if failed == 0 { 0 } else { 1 })
}

fn cmd_summand(args: &SummandArgs) -> Result<i32> {
    let family = args.family.resolve()?;
    let spec = args.params.single(family)?;
    let xs = summand_grid(&spec, args.x.as_deref())?;
    let rows = summand_rows(&spec, args.degree, &xs)?;
    let mut out = open_out(&args.out)?;
    let discrete = spec.is_discrete();
    let mut write = || -> io::Result<()> {
        writeln!(out, "x,summand,rho_n")?;
        for (x, s, rho) in &rows {
            if discrete {
                writeln!(out, "{},{:.16e},{:.16e}", *x as i64, s, rho)?;
            } else {
                writeln!(out, "{},{:.16e},{:.16e}", x, s, rho)?;
            }
        }
        out.flush()
    };
    write().map_err(io_err)?;
    Ok(0)
}

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit status.
pub fn run<I, T>(args: I, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            if code == 0 {
                let _ = write!(io::stdout(), "{}", e.render());
            } else {
                let _ = write!(err, "{}", e.render());
            }
            return code;
        }
    };
    let result = match &cli.command {
        Command::Table(a) => cmd_table(a),
        Command::Verify(a) => cmd_verify(a, err),
        Command::Summand(a) => cmd_summand(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "polyfisher: {e}");
            2
        }
    }
}
