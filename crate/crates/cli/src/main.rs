//! `dkz-stokes`: Stokes data of the dKZ equations and the checks built on it.
//!
//! Exit codes: 0 all thresholds met, 1 some threshold missed, 2 invalid input
//! or unwritable report, 3 numerical failure.

mod commands;
mod config;
mod report;

use clap::{Parser, Subcommand};
use config::RunConfig;
use dkz_core::Error;
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "dkz-stokes", version, about = "Stokes matrices of the dynamical KZ equations and their braid-group checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON run configuration; flags below override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Report path (atomic write); stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Skip the purely-imaginary check on u/kappa.
    #[arg(long, global = true)]
    permissive: bool,
    /// Seed for the sampled negative control.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Relative tolerance of the integrator (>= 1e-14).
    #[arg(long, global = true)]
    tol_rel: Option<f64>,
    #[arg(long, global = true)]
    m: Option<usize>,
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Diagonal of u as JSON, e.g. '[[0,1],[0,-1]]'.
    #[arg(long, global = true, value_parser = parse_complex_list, allow_hyphen_values = true)]
    u: Option<ComplexList>,
    /// kappa as JSON '[re,im]'.
    #[arg(long, global = true, value_parser = parse_complex, allow_hyphen_values = true)]
    kappa: Option<[f64; 2]>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// S_±, formal monodromy and the Stokes multipliers R, R_-.
    ComputeStokes,
    /// Yang-Baxter residuals of R and R_-, plus a perturbed negative control.
    CheckYbe,
    /// Braid relations of b_i -> T_i R^{i,i+1} on n strands.
    CheckBraid,
    /// Holonomy of the swap paths against T_i R at growing separation.
    CheckHolonomy,
    /// Stokes data of the pulled-back system across a chamber grid.
    CheckIsomonodromy,
    /// R against the U_q(sl_2) R-matrix and its convention variants.
    CompareQgroup,
    /// Exactly solvable cases.
    Selftest,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::ComputeStokes => "compute-stokes",
            Command::CheckYbe => "check-ybe",
            Command::CheckBraid => "check-braid",
            Command::CheckHolonomy => "check-holonomy",
            Command::CheckIsomonodromy => "check-isomonodromy",
            Command::CompareQgroup => "compare-qgroup",
            Command::Selftest => "selftest",
        }
    }
}

fn parse_complex(s: &str) -> Result<[f64; 2], String> {
    serde_json::from_str(s).map_err(|e| format!("expected [re, im]: {e}"))
}

#[derive(Debug, Clone)]
struct ComplexList(Vec<[f64; 2]>);

fn parse_complex_list(s: &str) -> Result<ComplexList, String> {
    serde_json::from_str(s).map(ComplexList).map_err(|e| format!("expected [[re, im], ...]: {e}"))
}

fn build_config(cli: &Cli) -> dkz_core::Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(c) = &cfg.command {
        if c != cli.command.name() {
            return Err(Error::InvalidParameter(format!("config is for `{c}`, invoked `{}`", cli.command.name())));
        }
    }
    cfg.m = cli.m.or(cfg.m);
    cfg.n = cli.n.or(cfg.n);
    cfg.u = cli.u.clone().map(|l| l.0).or(cfg.u);
    cfg.kappa = cli.kappa.or(cfg.kappa);
    cfg.seed = cli.seed.or(cfg.seed);
    cfg.permissive |= cli.permissive;
    cfg.output = cli.out.clone().or(cfg.output);
    cfg.tolerances.rel_tol = cli.tol_rel.or(cfg.tolerances.rel_tol);
    cfg.resolve(cli.command.name())
}

fn run(command: Command, cfg: &RunConfig) -> dkz_core::Result<commands::Outcome> {
    match command {
        Command::ComputeStokes => commands::compute_stokes(cfg),
        Command::CheckYbe => commands::check_ybe(cfg),
        Command::CheckBraid => commands::check_braid(cfg),
        Command::CheckHolonomy => commands::check_holonomy(cfg),
        Command::CheckIsomonodromy => commands::check_isomonodromy(cfg),
        Command::CompareQgroup => commands::compare_qgroup(cfg),
        Command::Selftest => commands::selftest(cfg),
    }
}

fn emit(out: Option<&PathBuf>, report: serde_json::Value) -> bool {
    let text = report::render(report);
    match out {
        Some(p) => match report::write_atomic(p, &text) {
            Ok(()) => true,
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", p.display());
                false
            }
        },
        None => {
            print!("{text}");
            true
        }
    }
}

fn error_code(e: &Error) -> u8 {
    if e.is_numerical() {
        3
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let cfg = match build_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            let report = json!({"command": name, "error": {"message": e.to_string(), "numerical": e.is_numerical()}, "pass": false});
            emit(cli.out.as_ref(), report);
            return ExitCode::from(error_code(&e));
        }
    };
    let inputs = serde_json::to_value(&cfg).expect("config serializes");
    match run(cli.command, &cfg) {
        Ok(o) => {
            eprintln!("{name}:");
            for l in &o.summary {
                eprintln!("  {l}");
            }
            eprintln!("{}", if o.pass { "PASS" } else { "FAIL" });
            let report = json!({
                "command": name,
                "inputs": inputs,
                "outputs": o.outputs,
                "residuals": o.residuals,
                "thresholds": o.thresholds,
                "pass": o.pass,
            });
            if !emit(cfg.output.as_ref(), report) {
                return ExitCode::from(2);
            }
            ExitCode::from(if o.pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            let report = json!({
                "command": name,
                "inputs": inputs,
                "error": {"message": e.to_string(), "numerical": e.is_numerical()},
                "pass": false,
            });
            emit(cfg.output.as_ref(), report);
            ExitCode::from(error_code(&e))
        }
    }
}
