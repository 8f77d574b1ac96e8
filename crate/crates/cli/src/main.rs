//! `thermoprobe`: forward solves, conductivity estimates, elasticity curves,
//! estimation tables and discretization checks for a two-material bar.
//!
//! Exit codes: 0 success, 2 argument or configuration error, 3 inadmissible
//! measurement, 4 validation failure.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{MaterialRef, NoiseModeArg, RunConfigFile};

#[derive(Debug, Parser)]
#[command(
    name = "thermoprobe",
    version,
    about = "Estimate the hidden conductivity of a two-material bar"
)]
struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// CSV of extra materials (`symbol,name,kappa`) merged over the built-ins.
    #[arg(
        long,
        global = true,
        value_name = "FILE",
        env = "THERMOPROBE_MATERIALS"
    )]
    materials: Option<PathBuf>,

    /// Significant digits for printed numbers.
    #[arg(long, global = true, default_value_t = thermoprobe::export::DEFAULT_PRECISION,
          value_parser = parse_precision)]
    precision: usize,

    #[command(flatten)]
    rod: RodArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct RodArgs {
    /// Bar length L.
    #[arg(long, global = true)]
    length: Option<f64>,
    /// Interface position l.
    #[arg(long, global = true)]
    interface: Option<f64>,
    /// Source temperature F at x = 0.
    #[arg(long, global = true)]
    source: Option<f64>,
    /// Ambient temperature T_a.
    #[arg(long, global = true)]
    ambient: Option<f64>,
    /// Convection coefficient h.
    #[arg(long, global = true)]
    convection: Option<f64>,
    /// Hidden material A: symbol or conductivity.
    #[arg(
        long = "material-a",
        short = 'a',
        global = true,
        value_name = "SYMBOL|KAPPA"
    )]
    material_a: Option<MaterialRef>,
    /// Accessible material B: symbol or conductivity.
    #[arg(
        long = "material-b",
        short = 'b',
        global = true,
        value_name = "SYMBOL|KAPPA"
    )]
    material_b: Option<MaterialRef>,
    /// Lower bound on the admissible conductivity.
    #[arg(long = "kappa-min", global = true)]
    kappa_min: Option<f64>,
    /// Upper bound on the admissible conductivity.
    #[arg(long = "kappa-max", global = true)]
    kappa_max: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact temperature profile, end temperature, end flux and interface angle.
    Forward {
        /// Uniform sample count (the interface is always added).
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Estimate κ_A from a measured end flux and report the error bounds.
    Estimate {
        /// Measured flux q̂.
        #[arg(long, allow_negative_numbers = true)]
        flux: f64,
        /// Noise level ε of the measurement.
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
    },
    /// Sample the elasticity E(q) over a flux range.
    Elasticity {
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        /// Number of samples.
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run an estimation campaign: a reference example or a custom spec.
    Table {
        /// Reference example 1 (Fe-Ag), 2 (Al-Pb) or 3 (Ag-Cu).
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        example: Option<u8>,
        /// Explicit measured fluxes, comma separated.
        #[arg(
            long = "flux-values",
            value_delimiter = ',',
            allow_negative_numbers = true
        )]
        flux_values: Option<Vec<f64>>,
        #[arg(long = "noise-mode", value_enum)]
        noise_mode: Option<NoiseModeArg>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compare the closed-form solution with a finite-volume solve.
    Validate {
        /// Number of grid cells.
        #[arg(long, default_value_t = 100)]
        cells: usize,
        /// Largest accepted relative deviation.
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
    },
    /// List the active material database.
    Materials,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// CSV destination; standard output when absent.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Also write a JSON mirror of the dataset.
    #[arg(long, value_name = "FILE")]
    json: Option<PathBuf>,
}

impl RodArgs {
    fn into_layer(self) -> RunConfigFile {
        RunConfigFile {
            length: self.length,
            interface: self.interface,
            source: self.source,
            ambient: self.ambient,
            convection: self.convection,
            material_a: self.material_a,
            material_b: self.material_b,
            kappa_min: self.kappa_min,
            kappa_max: self.kappa_max,
            ..RunConfigFile::default()
        }
    }
}

fn parse_precision(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(p) if (1..=17).contains(&p) => Ok(p),
        _ => Err(format!("expected an integer in 1..=17, got `{s}`")),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(status) => ExitCode::from(status as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(commands::Status::UsageError as u8)
        }
    }
}
