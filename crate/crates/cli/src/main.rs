//! gaugekit: spectra and polariton branches of the Dicke and Hopfield
//! models in the Coulomb and dipole gauges, with a built-in verification
//! suite.

mod config;
mod output;
mod run;
mod verify;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use config::{
    load_config, DickeFiniteConfig, DickeThermoConfig, DipoleKernelConfig, DipoleSolveConfig,
    HopfieldConfig, OutputFormat,
};

#[derive(Parser)]
#[command(
    name = "gaugekit",
    version,
    about = "Dicke and Hopfield light-matter spectra in the Coulomb and dipole gauges"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bound states and dipole elements of the 1D effective dipole
    DipoleSolve(DipoleSolveArgs),
    /// Truncated nonlocal potential kernel W_n(x, x') on the grid
    DipoleKernel(DipoleKernelArgs),
    /// Finite-N Dicke spectra in all three gauge forms
    DickeFinite(DickeFiniteArgs),
    /// Polariton branch sweep of the dilute-limit Dicke model
    DickeThermo(DickeThermoArgs),
    /// Hopfield polariton dispersion over a photon-frequency grid
    Hopfield(HopfieldArgs),
    /// Run every module invariant suite; exit 0 only if all pass
    Verify,
}

#[derive(Args)]
struct CommonArgs {
    /// JSON config file; explicit flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (stdout when omitted); written atomically
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Output format: csv or json
    #[arg(long)]
    format: Option<OutputFormat>,
}

#[derive(Args)]
struct DipoleSolveArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Quadratic well coefficient of V = E_k[-(beta/2)x^2 + (gamma/4)x^4]
    #[arg(long)]
    beta: Option<f64>,
    /// Quartic well coefficient
    #[arg(long)]
    gamma: Option<f64>,
    /// Kinetic energy coefficient E_k
    #[arg(long)]
    ek: Option<f64>,
    /// Use the harmonic validation potential V = E_k x^2/2
    #[arg(long)]
    harmonic: bool,
    #[arg(long)]
    xmin: Option<f64>,
    #[arg(long)]
    xmax: Option<f64>,
    #[arg(long)]
    npoints: Option<usize>,
    /// Number of bound states to solve
    #[arg(long)]
    states: Option<usize>,
}

#[derive(Args)]
struct DipoleKernelArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    ek: Option<f64>,
    #[arg(long)]
    xmin: Option<f64>,
    #[arg(long)]
    xmax: Option<f64>,
    #[arg(long)]
    npoints: Option<usize>,
    /// Retained levels n in the truncated kernel
    #[arg(long)]
    levels: Option<usize>,
}

#[derive(Args)]
struct DickeFiniteArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of dipoles N
    #[arg(long)]
    n: Option<u32>,
    /// Single-dipole coupling strength
    #[arg(long, allow_hyphen_values = true)]
    eta: Option<f64>,
    #[arg(long)]
    wc: Option<f64>,
    #[arg(long)]
    wx: Option<f64>,
    /// Diamagnetic ratio D / (N wx eta^2) for the standard model
    #[arg(long)]
    alpha: Option<f64>,
    /// Explicit diamagnetic coefficient (overrides alpha)
    #[arg(long)]
    diamagnetic: Option<f64>,
    /// Fock cutoff; omitted = grow automatically until levels converge
    #[arg(long)]
    nmax: Option<usize>,
    /// Number of levels to report
    #[arg(long)]
    levels: Option<usize>,
    /// Cap on the composite dimension
    #[arg(long)]
    dim_cap: Option<usize>,
}

#[derive(Args)]
struct DickeThermoArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    wc: Option<f64>,
    #[arg(long)]
    wx: Option<f64>,
    /// Ratio of the standard model's diamagnetic coefficient to wx lambda^2
    #[arg(long)]
    alpha: Option<f64>,
    /// Coupling grid start:end:step
    #[arg(long)]
    lambda: Option<String>,
    /// Append the printed closed-form branches as extra columns
    #[arg(long)]
    printed_forms: bool,
}

#[derive(Args)]
struct HopfieldArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Matter resonance frequency
    #[arg(long)]
    w0: Option<f64>,
    /// Polarizability
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    wk_min: Option<f64>,
    #[arg(long)]
    wk_max: Option<f64>,
    /// Number of log-spaced photon frequencies
    #[arg(long)]
    points: Option<usize>,
    /// Explicit photon frequencies (comma separated); overrides the grid
    #[arg(long, value_delimiter = ',')]
    wk: Option<Vec<f64>>,
}

fn init_thread_pool() {
    if let Ok(s) = std::env::var("GAUGEKIT_THREADS") {
        match s.parse::<usize>() {
            Ok(n) if n >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => eprintln!("warning: ignoring invalid GAUGEKIT_THREADS value `{s}`"),
        }
    }
}

fn main() -> ExitCode {
    init_thread_pool();
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode> {
    match command {
        Command::DipoleSolve(args) => {
            let flags = DipoleSolveConfig {
                command: None,
                beta: args.beta,
                gamma: args.gamma,
                ek: args.ek,
                harmonic: args.harmonic.then_some(true),
                xmin: args.xmin,
                xmax: args.xmax,
                npoints: args.npoints,
                states: args.states,
                output: args.common.output.clone(),
                format: args.common.format,
            };
            let file = match &args.common.config {
                Some(p) => load_config::<DipoleSolveConfig>(p, "dipole-solve")?,
                None => Default::default(),
            };
            let run_cfg = DipoleSolveConfig::merge(file, flags).resolve()?;
            let table = run::run_dipole_solve(&run_cfg)?;
            output::write_output(run_cfg.output.as_deref(), &table)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::DipoleKernel(args) => {
            let flags = DipoleKernelConfig {
                command: None,
                beta: args.beta,
                gamma: args.gamma,
                ek: args.ek,
                xmin: args.xmin,
                xmax: args.xmax,
                npoints: args.npoints,
                levels: args.levels,
                output: args.common.output.clone(),
                format: args.common.format,
            };
            let file = match &args.common.config {
                Some(p) => load_config::<DipoleKernelConfig>(p, "dipole-kernel")?,
                None => Default::default(),
            };
            let run_cfg = DipoleKernelConfig::merge(file, flags).resolve()?;
            let table = run::run_dipole_kernel(&run_cfg)?;
            output::write_output(run_cfg.output.as_deref(), &table)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::DickeFinite(args) => {
            let flags = DickeFiniteConfig {
                command: None,
                n: args.n,
                eta: args.eta,
                wc: args.wc,
                wx: args.wx,
                alpha: args.alpha,
                diamagnetic: args.diamagnetic,
                nmax: args.nmax,
                levels: args.levels,
                dim_cap: args.dim_cap,
                output: args.common.output.clone(),
                format: args.common.format,
            };
            let file = match &args.common.config {
                Some(p) => load_config::<DickeFiniteConfig>(p, "dicke-finite")?,
                None => Default::default(),
            };
            let run_cfg = DickeFiniteConfig::merge(file, flags).resolve()?;
            let table = run::run_dicke_finite(&run_cfg)?;
            output::write_output(run_cfg.output.as_deref(), &table)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::DickeThermo(args) => {
            let flags = DickeThermoConfig {
                command: None,
                wc: args.wc,
                wx: args.wx,
                alpha: args.alpha,
                lambda: args.lambda,
                printed_forms: args.printed_forms.then_some(true),
                output: args.common.output.clone(),
                format: args.common.format,
            };
            let file = match &args.common.config {
                Some(p) => load_config::<DickeThermoConfig>(p, "dicke-thermo")?,
                None => Default::default(),
            };
            let run_cfg = DickeThermoConfig::merge(file, flags).resolve()?;
            let table = run::run_dicke_thermo(&run_cfg)?;
            output::write_output(run_cfg.output.as_deref(), &table)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Hopfield(args) => {
            let flags = HopfieldConfig {
                command: None,
                w0: args.w0,
                beta: args.beta,
                wk_min: args.wk_min,
                wk_max: args.wk_max,
                points: args.points,
                wk: args.wk,
                output: args.common.output.clone(),
                format: args.common.format,
            };
            let file = match &args.common.config {
                Some(p) => load_config::<HopfieldConfig>(p, "hopfield")?,
                None => Default::default(),
            };
            let run_cfg = HopfieldConfig::merge(file, flags).resolve()?;
            let table = run::run_hopfield(&run_cfg)?;
            output::write_output(run_cfg.output.as_deref(), &table)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify => {
            let ok = verify::run_all();
            println!(
                "verification {}",
                if ok { "passed" } else { "FAILED" }
            );
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}
