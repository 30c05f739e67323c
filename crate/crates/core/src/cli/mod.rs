//! Command-line front end: `stellar`, `rate` and `verify` subcommands.
//!
//! Output is assembled in memory and only written once every requested
//! record has been computed, so a failed run never leaves a partial file.

mod output;
mod sweep;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Error;
use crate::rates::{self, RateKind, RateParams};
use crate::stellar::{self, Profile, StellarModel, CGS};
use crate::verify::{self, VerifyOptions};
use crate::DualResult;

pub use output::Format;
use output::{Document, RateRecord, StellarRecord, VerifyRecord};
use sweep::Sweep;

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Exit {
    Success = 0,
    /// Bad input, violated invariant or failed verification check.
    Invalid = 1,
    /// A computation failed and no oracle fallback was possible.
    Convergence = 2,
}

#[derive(Debug, Parser)]
#[command(name = "stellar-gfun", version, about = "Closed-form stellar models and reaction-rate integrals")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
struct GlobalArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Tolerance: overrides every verify tolerance; for `stellar` and `rate`,
    /// the largest accepted closed-form/oracle discrepancy.
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate a stellar model on a uniform radial grid.
    #[command(allow_negative_numbers = true)]
    Stellar(StellarArgs),
    /// Evaluate a reaction-rate integral, optionally over a parameter sweep.
    #[command(allow_negative_numbers = true)]
    Rate(RateArgs),
    /// Run the self-verification suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ModelKind {
    Linear,
    PowerLaw,
    TwoParameter,
}

#[derive(Debug, Clone, Args, Serialize)]
struct StellarArgs {
    #[arg(long, value_enum, default_value_t = ModelKind::Linear)]
    model: ModelKind,
    /// Profile exponent δ (power-law and two-parameter).
    #[arg(long)]
    delta: Option<f64>,
    /// Profile exponent γ (two-parameter).
    #[arg(long)]
    gamma: Option<f64>,
    /// Central density [g cm^-3].
    #[arg(long, default_value_t = 150.0)]
    rho_c: f64,
    /// Stellar radius [cm].
    #[arg(long, default_value_t = 6.957e10)]
    radius: f64,
    /// Mean molecular weight.
    #[arg(long, default_value_t = 0.62)]
    mu: f64,
    /// Density exponent of the energy generation rate.
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Temperature exponent of the energy generation rate.
    #[arg(long, default_value_t = 4.0)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    eps0: f64,
    /// Reference density of the energy law (defaults to ρ_c).
    #[arg(long)]
    rho0: Option<f64>,
    /// Reference temperature of the energy law (defaults to T_c).
    #[arg(long)]
    t0: Option<f64>,
    /// Number of grid intervals (at least 2); the table has grid + 1 rows.
    #[arg(long, default_value_t = 10)]
    grid: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum KindArg {
    Collision,
    Ar,
    Nonresonant,
    Truncated,
    Screened,
    Resonant,
}

impl From<KindArg> for RateKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Collision => RateKind::Collision,
            KindArg::Ar => RateKind::Ar,
            KindArg::Nonresonant => RateKind::Nonresonant,
            KindArg::Truncated => RateKind::Truncated,
            KindArg::Screened => RateKind::Screened,
            KindArg::Resonant => RateKind::Resonant,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
struct RateArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Boltzmann scale of A_r.
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    /// Exponential scale of the non-resonant, screened and resonant rates.
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    /// Screening strength; --q is accepted as an alias.
    #[arg(long, visible_alias = "q", default_value_t = 1.0)]
    z: f64,
    #[arg(long, default_value_t = 1)]
    n: u32,
    #[arg(long, default_value_t = 1)]
    m: u32,
    /// Power index of A_r.
    #[arg(long, default_value_t = 0.0)]
    r: f64,
    /// Power of the collision integral; sets r = −nu.
    #[arg(long)]
    nu: Option<f64>,
    /// Integer power of y (or t) in the rate integrands.
    #[arg(long, default_value_t = 0)]
    v: u32,
    /// Screening shift.
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    /// Upper limit of the truncated rate.
    #[arg(long, default_value_t = 1.0)]
    d: f64,
    /// Resonance centre.
    #[arg(long, default_value_t = 0.0)]
    b: f64,
    /// Resonance width.
    #[arg(long, default_value_t = 1.0)]
    g: f64,
    /// Highest order of the resonant expansion.
    #[arg(long, default_value_t = 40)]
    max_k: usize,
    /// Sweep one parameter: name=start:stop:count, or name=logstart:stop:count.
    #[arg(long)]
    sweep: Option<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
struct VerifyArgs {
    /// Run only these checks (repeatable).
    #[arg(long)]
    only: Vec<String>,
    /// List check ids and exit.
    #[arg(long)]
    list: bool,
}

/// A failure that ends the run with a message and exit status.
#[derive(Debug)]
struct Failure {
    exit: Exit,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Self { exit: Exit::Invalid, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self { exit: exit_for(&e), message: e.to_string() }
    }
}

fn exit_for(e: &Error) -> Exit {
    match e {
        Error::InvalidParameter(_) | Error::Domain(_) | Error::Pole(_) | Error::Degenerate(_) => Exit::Invalid,
        Error::Convergence { .. } | Error::Overflow(_) | Error::NanIntegrand { .. } => Exit::Convergence,
    }
}

/// Parse `args` (including the program name), run, and return the exit status.
pub fn run<I, T>(args: I) -> Exit
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { Exit::Invalid } else { Exit::Success };
        }
    };
    match execute(&cli) {
        Ok(exit) => exit,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.exit
        }
    }
}

fn execute(cli: &Cli) -> Result<Exit, Failure> {
    let g = &cli.global;
    if let Some(tol) = g.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Failure::invalid(format!("--tol must be a positive finite number, got {tol}")));
        }
    }
    let (text, exit) = match &cli.command {
        Command::Stellar(a) => run_stellar(g, a)?,
        Command::Rate(a) => run_rate(g, a)?,
        Command::Verify(a) => run_verify(g, a)?,
    };
    emit(g.out.as_deref(), &text)?;
    Ok(exit)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    let io_err = |e: std::io::Error| Failure::invalid(format!("cannot write output: {e}"));
    match out {
        None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(io_err),
        Some(path) => {
            // write next to the target and rename, so readers never see half a file
            let mut tmp = path.as_os_str().to_owned();
            tmp.push(".partial");
            let tmp = PathBuf::from(tmp);
            std::fs::write(&tmp, text).map_err(io_err)?;
            std::fs::rename(&tmp, path).map_err(|e| {
                let _ = std::fs::remove_file(&tmp);
                io_err(e)
            })
        }
    }
}

fn stellar_model(a: &StellarArgs) -> Result<StellarModel, Failure> {
    let need = |v: Option<f64>, flag: &str| {
        v.ok_or_else(|| Failure::invalid(format!("--model {:?} requires --{flag}", a.model)))
    };
    let unused = |v: Option<f64>, flag: &str| match v {
        Some(_) => Err(Failure::invalid(format!("--{flag} does not apply to this model"))),
        None => Ok(()),
    };
    let profile = match a.model {
        ModelKind::Linear => {
            unused(a.delta, "delta")?;
            unused(a.gamma, "gamma")?;
            Profile::Linear
        }
        ModelKind::PowerLaw => {
            unused(a.gamma, "gamma")?;
            Profile::PowerLaw { delta: need(a.delta, "delta")? }
        }
        ModelKind::TwoParameter => Profile::TwoParameter { delta: need(a.delta, "delta")?, gamma: need(a.gamma, "gamma")? },
    };
    let model = StellarModel::new(profile)
        .with_structure(a.rho_c, a.radius, a.mu)
        .with_energy(a.alpha, a.beta, a.eps0)
        .with_reference(a.rho0, a.t0);
    model.validate()?;
    Ok(model)
}

fn run_stellar(g: &GlobalArgs, a: &StellarArgs) -> Result<(String, Exit), Failure> {
    if a.grid < 2 {
        return Err(Failure::invalid("--grid must be at least 2"));
    }
    let model = stellar_model(a)?;
    let points = stellar::tabulate_profile(&model, &CGS, a.grid)?;
    let lum = stellar::luminosity(&model, &CGS)?;
    let mut records: Vec<StellarRecord> = points.iter().map(StellarRecord::point).collect();
    records.push(StellarRecord::luminosity(&lum));
    let exit = tolerance_exit(g.tol, std::iter::once(&lum));
    let doc = Document::new("stellar", serde_json::json!({ "global": g, "stellar": a }), records);
    Ok((doc.render(g.format)?, exit))
}

fn tolerance_exit<'a>(tol: Option<f64>, results: impl Iterator<Item = &'a DualResult>) -> Exit {
    let Some(tol) = tol else { return Exit::Success };
    let mut exit = Exit::Success;
    for r in results {
        if let Some(agree) = r.agreement {
            if agree > tol {
                eprintln!("closed form and oracle differ by {agree:.3e} > --tol {tol:.3e}");
                exit = Exit::Invalid;
            }
        }
    }
    exit
}

fn base_params(a: &RateArgs) -> Result<RateParams, Failure> {
    let mut r = a.r;
    if let Some(nu) = a.nu {
        if a.kind != KindArg::Collision {
            return Err(Failure::invalid("--nu only applies to --kind collision"));
        }
        r = -nu;
    }
    let mut p = RateParams { p: a.p, a: a.a, z: a.z, n: a.n, m: a.m, r, v: a.v, t: a.t, d: a.d, b: a.b, g: a.g };
    if a.kind == KindArg::Collision {
        // the collision integral fixes p = 1, n = 1, m = 2
        p.p = 1.0;
        p.n = 1;
        p.m = 2;
    }
    for (name, v) in [("p", p.p), ("a", p.a), ("z", p.z), ("r", p.r), ("t", p.t), ("d", p.d), ("b", p.b), ("g", p.g)] {
        if !v.is_finite() {
            return Err(Failure::invalid(format!("--{name} must be finite, got {v}")));
        }
    }
    Ok(p)
}

fn run_rate(g: &GlobalArgs, a: &RateArgs) -> Result<(String, Exit), Failure> {
    let kind = RateKind::from(a.kind);
    let base = base_params(a)?;
    let grid: Vec<RateParams> = match &a.sweep {
        None => vec![base],
        Some(spec) => {
            let sweep: Sweep = spec.parse().map_err(Failure::invalid)?;
            if a.kind == KindArg::Collision && matches!(sweep.param.as_str(), "p" | "n" | "m") {
                return Err(Failure::invalid(format!("{} is fixed for --kind collision", sweep.param)));
            }
            sweep.apply(&base, a.kind == KindArg::Collision).map_err(Failure::invalid)?
        }
    };
    // every point is validated before anything is computed
    for p in &grid {
        p.validate(kind)?;
    }
    let results: Vec<_> = grid.par_iter().map(|p| rates::evaluate(kind, p, a.max_k)).collect();
    if a.sweep.is_none() {
        if let Err(e) = &results[0] {
            return Err(e.clone().into());
        }
    }
    // sweeps keep going past failed points; the exit status reports the worst one
    let mut exit = tolerance_exit(g.tol, results.iter().filter_map(|r| r.as_ref().ok()));
    for e in results.iter().filter_map(|r| r.as_ref().err()) {
        exit = exit.max(exit_for(e));
    }
    let records: Vec<RateRecord> =
        grid.iter().zip(&results).map(|(p, r)| RateRecord::new(kind, p, a.max_k, r.as_ref())).collect();
    let doc = Document::new("rate", serde_json::json!({ "global": g, "rate": a }), records);
    Ok((doc.render(g.format)?, exit))
}

fn run_verify(g: &GlobalArgs, a: &VerifyArgs) -> Result<(String, Exit), Failure> {
    let known = verify::check_ids();
    if a.list {
        let mut s = known.join("\n");
        s.push('\n');
        return Ok((s, Exit::Success));
    }
    for id in &a.only {
        if !known.contains(&id.as_str()) {
            return Err(Failure::invalid(format!("unknown check id {id:?}; see `verify --list`")));
        }
    }
    let started = std::time::Instant::now();
    let reports = verify::run(&VerifyOptions { tolerance: g.tol }, &a.only);
    let failed = reports.iter().filter(|r| !r.passed).count();
    eprintln!(
        "{} checks, {} failed, {:.2} s",
        reports.len(),
        failed,
        started.elapsed().as_secs_f64()
    );
    let records: Vec<VerifyRecord> = reports.iter().map(VerifyRecord::from).collect();
    let doc = Document::new("verify", serde_json::json!({ "global": g, "verify": a }), records);
    let exit = if failed == 0 { Exit::Success } else { Exit::Invalid };
    Ok((doc.render(g.format)?, exit))
}
