//! The `conika` command line.
//!
//! Exit codes: `0` success, `1` domain error (unreadable or malformed input,
//! failed certification preconditions), `2` usage error.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::catalog::{builtin_design, BUILTIN_PREFIX};
use crate::certify::{certify, DesignCertificate, DEFAULT_TOL};
use crate::designs::{basis_povm, depolarize, mub_full_set, sic_from_fiducial, sic_povm, Povm};
use crate::entanglement::{
    concurrence_oracle, design_concurrence_with_tol, local_unitary_orbit_norms, pnorm_from_schmidt,
    probability_vector, schmidt_coefficients, spread, BipartiteState,
};
use crate::error::Error;
use crate::matrix::StateVector;
use crate::random::rng_for;
use crate::witness::{werner_scan, witness_report, SeesawConfig, WernerRow, WitnessReport};

/// Environment variable overriding the default tolerance.
pub const TOL_ENV: &str = "CONIKA_TOL";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

/// Parsed command line.
#[derive(Debug, Parser)]
#[command(name = "conika", version, about = "Conical 2-designs, design-based concurrence and entanglement witnesses")]
pub struct CliConfig {
    /// Numerical tolerance (default 1e-9, or $CONIKA_TOL)
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Seed for every random draw
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build or certify designs
    #[command(subcommand)]
    Design(DesignCommand),
    /// Concurrence of a pure state from design probabilities, next to the reduced-state value
    Concurrence(StateArgs),
    /// Probability norm over random local-unitary orbits of a state
    Invariance(InvarianceArgs),
    /// Witness bounds for a design
    #[command(subcommand)]
    Witness(WitnessCommand),
    /// Werner-state detection scans
    #[command(subcommand)]
    Werner(WernerCommand),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DesignKind {
    Sic,
    Mub,
    Basis,
    SicDepol,
    MubDepol,
    Fiducial,
}

#[derive(Debug, Subcommand)]
pub enum DesignCommand {
    /// Construct a POVM and write it as JSON
    Build {
        #[arg(long, value_enum)]
        kind: DesignKind,
        /// Dimension (ignored for --kind fiducial)
        #[arg(long)]
        d: Option<usize>,
        /// Depolarizing parameter for *-depol kinds
        #[arg(long)]
        t: Option<f64>,
        /// Fiducial state vector JSON for --kind fiducial
        #[arg(long)]
        fiducial: Option<PathBuf>,
        /// Output file; standard output when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify a POVM file (or builtin:<name>) as a conical 2-design
    Certify {
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        d: Option<usize>,
    },
}

#[derive(Debug, Args)]
pub struct DesignArgs {
    /// POVM file or builtin:<name>
    #[arg(long)]
    pub design: String,
    /// Dimension for builtin designs
    #[arg(long)]
    pub d: Option<usize>,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    #[command(flatten)]
    pub design: DesignArgs,
    /// State file or builtin:phi-plus | builtin:product | builtin:random
    #[arg(long)]
    pub state: String,
}

#[derive(Debug, Args)]
pub struct InvarianceArgs {
    #[command(flatten)]
    pub inner: StateArgs,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
}

#[derive(Debug, Subcommand)]
pub enum WitnessCommand {
    /// Analytic bounds and see-saw estimates
    Report {
        #[command(flatten)]
        design: DesignArgs,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(long, default_value_t = 200)]
        iters: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum WernerCommand {
    /// Linear and quadratic criteria on a grid of Werner states
    Scan {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value = "builtin:sic")]
        design: String,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Parse `argv` (including the program name) and execute.
pub fn run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let cfg = match CliConfig::try_parse_from(argv) {
        Ok(cfg) => cfg,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    0
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    2
                }
            };
        }
    };
    match execute(&cfg, out) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn resolve_tol(cfg: &CliConfig) -> CliResult<f64> {
    let tol = match cfg.tol {
        Some(t) => t,
        None => match std::env::var(TOL_ENV) {
            Ok(raw) => raw
                .trim()
                .parse()
                .map_err(|_| Failure::Usage(format!("{TOL_ENV}='{raw}' is not a number")))?,
            Err(_) => DEFAULT_TOL,
        },
    };
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Failure::Usage(format!("tolerance must be positive, got {tol}")));
    }
    Ok(tol)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Domain(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Domain(format!("malformed JSON in {}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Failure::Domain(format!("cannot write {}: {e}", path.display())))
}

fn load_design(source: &str, d: Option<usize>) -> CliResult<Povm> {
    if source.starts_with(BUILTIN_PREFIX) {
        let d = d.ok_or_else(|| Failure::Usage(format!("--d is required with {source}")))?;
        return Ok(builtin_design(source, d)?);
    }
    let p: Povm = read_json(Path::new(source))?;
    if let Some(d) = d {
        if d != p.dim() {
            return Err(Failure::Domain(format!("{source} has dimension {}, but --d {d} was given", p.dim())));
        }
    }
    Ok(p)
}

fn load_state(source: &str, d: usize, seed: u64) -> CliResult<BipartiteState> {
    let state = match source.strip_prefix(BUILTIN_PREFIX) {
        Some("phi-plus") => BipartiteState::max_entangled(d),
        Some("product") => {
            let e0 = StateVector::basis(d, 0);
            BipartiteState::product(&e0, &e0)?
        }
        Some("random") => BipartiteState::random(d, &mut rng_for(seed, 0)),
        Some(other) => {
            return Err(Failure::Usage(format!(
                "unknown builtin state '{other}' (known: phi-plus, product, random)"
            )))
        }
        None => read_json(Path::new(source))?,
    };
    if state.dim() != d {
        return Err(Failure::Domain(format!("state has local dimension {}, design has {d}", state.dim())));
    }
    Ok(state)
}

fn emit<T: Serialize>(out: &mut dyn Write, format: OutputFormat, value: &T, text: impl FnOnce() -> String) -> CliResult<()> {
    let rendered = match format {
        OutputFormat::Json => serde_json::to_string_pretty(value).expect("serializable"),
        OutputFormat::Text => text(),
    };
    match writeln!(out, "{}", rendered.trim_end()) {
        // reader went away (`| head`); not our failure
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => other.map_err(|e| Failure::Domain(format!("cannot write output: {e}"))),
    }
}

fn certificate_text(label: &str, c: &DesignCertificate) -> String {
    let (kp, km) = c.unhalved_k_pm();
    let mut s = String::new();
    let _ = writeln!(s, "design:                  {label}");
    let _ = writeln!(s, "k_s:                     {}", c.k_s);
    let _ = writeln!(s, "k_a:                     {}", c.k_a);
    let _ = writeln!(s, "k_plus  = (k_s+k_a)/2:   {}", c.k_plus);
    let _ = writeln!(s, "k_minus = (k_s-k_a)/2:   {}", c.k_minus);
    let _ = writeln!(s, "k_s + k_a (unhalved):    {kp}");
    let _ = writeln!(s, "k_s - k_a (unhalved):    {km}");
    let _ = writeln!(s, "design residual:         {:e}", c.design_residual);
    let _ = writeln!(s, "POVM residual:           {:e}", c.povm_residual);
    let _ = writeln!(s, "conical 2-design:        {}", c.is_conical_design);
    let _ = writeln!(s, "projective 2-design:     {}", c.is_projective_design);
    s
}

#[derive(Serialize)]
struct BuildSummary<'a> {
    written: &'a str,
    label: &'a str,
    dim: usize,
    elements: usize,
}

#[derive(Serialize)]
struct ConcurrenceOutput {
    design: String,
    k_s: f64,
    k_a: f64,
    pnorm: f64,
    pnorm_from_schmidt: f64,
    concurrence_formula: f64,
    concurrence_oracle: f64,
    difference: f64,
}

#[derive(Serialize)]
struct InvarianceOutput {
    design: String,
    is_conical_design: bool,
    trials: usize,
    seed: u64,
    min: f64,
    max: f64,
    spread: f64,
    norms: Vec<f64>,
}

fn build_design(kind: DesignKind, d: Option<usize>, t: Option<f64>, fiducial: Option<&Path>) -> CliResult<Povm> {
    let need_d = || d.ok_or_else(|| Failure::Usage("--d is required for this design kind".into()));
    let need_t = || t.ok_or_else(|| Failure::Usage("--t is required for depolarized kinds".into()));
    Ok(match kind {
        DesignKind::Sic => sic_povm(need_d()?)?,
        DesignKind::Mub => mub_full_set(need_d()?)?,
        DesignKind::Basis => basis_povm(need_d()?)?,
        DesignKind::SicDepol => depolarize(&sic_povm(need_d()?)?, need_t()?)?,
        DesignKind::MubDepol => depolarize(&mub_full_set(need_d()?)?, need_t()?)?,
        DesignKind::Fiducial => {
            let path = fiducial.ok_or_else(|| Failure::Usage("--fiducial is required for --kind fiducial".into()))?;
            let v: StateVector = read_json(path)?;
            sic_from_fiducial(&v)?
        }
    })
}

fn execute(cfg: &CliConfig, out: &mut dyn Write) -> CliResult<()> {
    let tol = resolve_tol(cfg)?;
    match &cfg.command {
        Command::Design(DesignCommand::Build { kind, d, t, fiducial, out: path }) => {
            let povm = build_design(*kind, *d, *t, fiducial.as_deref())?;
            match path {
                Some(path) => {
                    write_json(path, &povm)?;
                    let shown = path.display().to_string();
                    let summary = BuildSummary { written: &shown, label: povm.label(), dim: povm.dim(), elements: povm.len() };
                    emit(out, cfg.format, &summary, || {
                        format!("wrote {} ({} elements, d = {}) to {shown}", povm.label(), povm.len(), povm.dim())
                    })
                }
                None => emit(out, OutputFormat::Json, &povm, String::new),
            }
        }
        Command::Design(DesignCommand::Certify { input, d }) => {
            let povm = load_design(input, *d)?;
            let cert = certify(&povm, tol);
            emit(out, cfg.format, &cert, || certificate_text(povm.label(), &cert))
        }
        Command::Concurrence(args) => {
            let povm = load_design(&args.design.design, args.design.d)?;
            let state = load_state(&args.state, povm.dim(), cfg.seed)?;
            let cert = certify(&povm, tol);
            let table = probability_vector(&povm, &state)?;
            let formula = design_concurrence_with_tol(&cert, table.norm, tol)?;
            let oracle = concurrence_oracle(&state);
            let report = ConcurrenceOutput {
                design: povm.label().to_string(),
                k_s: cert.k_s,
                k_a: cert.k_a,
                pnorm: table.norm,
                pnorm_from_schmidt: pnorm_from_schmidt(cert.k_s, cert.k_a, &schmidt_coefficients(&state)),
                concurrence_formula: formula,
                concurrence_oracle: oracle,
                difference: (formula - oracle).abs(),
            };
            emit(out, cfg.format, &report, || {
                format!(
                    "design:               {}\n|p|:                  {}\n|p| from Schmidt:     {}\nC (design formula):   {}\nC (reduced state):    {}\ndifference:           {:e}",
                    report.design, report.pnorm, report.pnorm_from_schmidt, formula, oracle, report.difference
                )
            })
        }
        Command::Invariance(args) => {
            if args.trials == 0 {
                return Err(Failure::Usage("--trials must be at least 1".into()));
            }
            let povm = load_design(&args.inner.design.design, args.inner.design.d)?;
            let state = load_state(&args.inner.state, povm.dim(), cfg.seed)?;
            let norms = local_unitary_orbit_norms(&povm, &state, args.trials, cfg.seed)?;
            let report = InvarianceOutput {
                design: povm.label().to_string(),
                is_conical_design: certify(&povm, tol).is_conical_design,
                trials: args.trials,
                seed: cfg.seed,
                min: norms.iter().copied().fold(f64::INFINITY, f64::min),
                max: norms.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                spread: spread(&norms),
                norms,
            };
            emit(out, cfg.format, &report, || {
                format!(
                    "design:            {}\nconical 2-design:  {}\ntrials:            {}\n|p| range:         [{}, {}]\nspread:            {:e}",
                    report.design, report.is_conical_design, report.trials, report.min, report.max, report.spread
                )
            })
        }
        Command::Witness(WitnessCommand::Report { design, restarts, iters }) => {
            let povm = load_design(&design.design, design.d)?;
            let cert = certify(&povm, tol);
            let cfg_seesaw = SeesawConfig { restarts: *restarts, iters: *iters, seed: cfg.seed };
            let report = witness_report(&cert, povm.dim(), cfg_seesaw)?;
            emit(out, cfg.format, &report, || report_text(povm.label(), &report))
        }
        Command::Werner(WernerCommand::Scan { d, design, step }) => {
            let povm = load_design(design, Some(*d))?;
            let cert = certify(&povm, tol);
            let rows = werner_scan(*d, &cert, *step)?;
            emit(out, cfg.format, &rows, || scan_text(&rows))
        }
    }
}

fn report_text(label: &str, r: &WitnessReport) -> String {
    format!(
        "design: {label}\n\
         operator   e-          s-          s+          e+\n\
         N          {:<11.8} {:<11.8} {:<11.8} {:<11.8}\n\
         N^PT       {:<11.8} {:<11.8} {:<11.8} {:<11.8}\n\
         see-saw    N: [{:.8}, {:.8}]  N^PT: [{:.8}, {:.8}]",
        r.e_minus_n,
        r.s_minus_n,
        r.s_plus_n,
        r.e_plus_n,
        r.e_minus_npt,
        r.s_minus_npt,
        r.s_plus_npt,
        r.e_plus_npt,
        r.numeric_s_minus_n,
        r.numeric_s_plus_n,
        r.numeric_s_minus_npt,
        r.numeric_s_plus_npt,
    )
}

fn scan_text(rows: &[WernerRow]) -> String {
    let mut s = String::from("p      Tr(rho N)     below  quadratic-lhs  quadratic-bound  detected\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{:<6.2} {:<13.10} {:<6} {:<14.10} {:<16.10} {}",
            r.p, r.tr_rho_n, r.below, r.quadratic_lhs, r.quadratic_bound, r.detected
        );
    }
    s
}
