//! Command-line front end: `simulate`, `criterion`, `lemmas` and `sweep`.
//!
//! Exit codes: 0 when the command completed (a numerical breakdown during a
//! simulation is a result, not a failure), 1 when the inequality suite found
//! a violation, 2 for usage and configuration errors.

mod commands;
mod config;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::{
    cmd_criterion, cmd_lemmas, cmd_simulate, cmd_sweep, run_lemmas, run_simulation, run_sweep, sweep_cells,
    sweep_table, trigger_name, CriterionOutput, GridSummary, ParameterSummary, PathSummary, RunSummary, Setup,
    SimulationOutput, SupNormSummary, SweepCell, SweepRow, Timing, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION,
};
pub use config::{
    CharacteristicsConfig, Equation, FieldSpec, GridConfig, OutputConfig, Overrides, RunConfig, SweepConfig,
};
pub use output::{fmt, fmt_opt, write_json, CsvTable};

#[derive(Debug, Parser)]
#[command(name = "dgh", version, about = "Wave-breaking laboratory for the DGH equation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// TOML run configuration; defaults are used for anything it leaves out
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Output directory
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// Seed for randomized suites
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Worker threads (0 = all cores)
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<f64>,

    #[arg(long, global = true, allow_hyphen_values = true)]
    pub gamma: Option<f64>,

    #[arg(long, global = true, allow_hyphen_values = true)]
    pub c0: Option<f64>,

    /// Half-length of the periodic box [-L, L)
    #[arg(long = "L", global = true)]
    pub half_length: Option<f64>,

    /// Number of grid points
    #[arg(long = "N", global = true)]
    pub n_points: Option<usize>,

    #[arg(long, global = true)]
    pub tmax: Option<f64>,

    #[arg(long, global = true)]
    pub cfl: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Integrate one initial datum, advect characteristics, write CSV and JSON
    Simulate,
    /// Check the local-in-space blowup criterion on the initial datum
    Criterion,
    /// Run the inequality property suite (exit 1 on a violation)
    Lemmas,
    /// Run a grid of simulations over amplitude, gamma and c0
    Sweep,
}

impl Cli {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            out: self.out.clone(),
            seed: self.seed,
            workers: self.workers,
            alpha: self.alpha,
            gamma: self.gamma,
            c0: self.c0,
            half_length: self.half_length,
            n_points: self.n_points,
            t_max: self.tmax,
            cfl: self.cfl,
        }
    }

    /// Loads the config, applies the flags and runs the command.
    pub fn execute(&self) -> crate::Result<i32> {
        let (mut cfg, base_dir) = RunConfig::load(self.config.as_deref())?;
        cfg.apply(&self.overrides());
        cfg.validate()?;
        match self.command {
            Command::Simulate => cmd_simulate(&cfg, &base_dir),
            Command::Criterion => cmd_criterion(&cfg, &base_dir),
            Command::Lemmas => cmd_lemmas(&cfg),
            Command::Sweep => cmd_sweep(&cfg, &base_dir),
        }
    }
}

/// Parses `args` and runs; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match cli.execute() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
