//! Command-line runner for the examples and the property suite.

mod config;
mod experiments;

pub use config::{Command, Overrides, RunConfig};
pub use experiments::{
    cubic_point, example1, example2, example3, measure, verify, CubicPoint, Example1Report, Example2Report,
    Example3Report, MeasureReport, MeasureTables, VerifyReport, CONSERVATION_POINTS, ORDER_DT, SUITE_MAX_DIM,
    SUITE_SIZE,
};

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::suite::{failures, Gate};

#[derive(Debug, Parser)]
#[command(name = "nhqm", version, about = "Non-hermitian quantum mechanics experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Cubic PT-symmetric oscillator against its second-order hermitian partner.
    Example1(Flags),
    /// Imaginary gauge field: isospectrality, BCH truncation, pseudo-hermiticity.
    Example2(Flags),
    /// Driven oscillator with a moving metric; writes the trajectory CSV.
    Example3(Flags),
    /// Recording map and repeatability tables for a 2x2 system.
    Measure(Flags),
    /// Runs the randomized property suite.
    Verify(Flags),
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// key = value file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Fock space dimension.
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long = "t-end")]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long)]
    pub hbar: Option<f64>,
    /// Output file (CSV for example3 and measure, text otherwise).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Residual tolerance for hermiticity-type gates.
    #[arg(long)]
    pub tol: Option<f64>,
    /// measure: use a hermitian 2x2 input.
    #[arg(long)]
    pub hermitian: bool,
    /// measure: read the system matrix from a file.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Run batches on the calling thread.
    #[arg(long)]
    pub sequential: bool,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
}

impl Flags {
    fn overrides(&self) -> Overrides {
        Overrides {
            dim: self.dim,
            hbar: self.hbar,
            mass: self.mass,
            omega: self.omega,
            epsilon: self.epsilon,
            eta: self.eta,
            tau: self.tau,
            dt: self.dt,
            t_end: self.t_end,
            tol: self.tol,
            seed: self.seed,
            out: self.out.clone(),
            hermitian: self.hermitian.then_some(true),
            matrix: self.matrix.clone(),
        }
    }

    /// Flags over the config file over the defaults.
    pub fn resolve(&self, command: Command) -> Result<RunConfig> {
        let file = match &self.config {
            Some(p) => Overrides::from_file(p)?,
            None => Overrides::default(),
        };
        RunConfig::resolve(command, self.overrides().over(file))
    }

    fn execution(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }
}

/// Text and gates produced by one subcommand.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub stdout: String,
    pub gates: Vec<Gate>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        failures(&self.gates).is_empty()
    }

    /// Machine-readable failure list.
    pub fn failure_json(&self) -> String {
        #[derive(Serialize)]
        struct Failures<'a> {
            failed: Vec<&'a Gate>,
        }
        serde_json::to_string_pretty(&Failures {
            failed: failures(&self.gates),
        })
        .unwrap_or_default()
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v).map_err(|e| Error::Io(e.to_string()))
}

fn write_out(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text)?;
    Ok(())
}

/// Runs one subcommand. Files named by `--out` are written here.
pub fn run(sub: &Sub) -> Result<Outcome> {
    let (command, flags) = match sub {
        Sub::Example1(f) => (Command::Example1, f),
        Sub::Example2(f) => (Command::Example2, f),
        Sub::Example3(f) => (Command::Example3, f),
        Sub::Measure(f) => (Command::Measure, f),
        Sub::Verify(f) => (Command::Verify, f),
    };
    let cfg = flags.resolve(command)?;
    let exec = flags.execution();
    let (text, json, gates, file) = match command {
        Command::Example1 => {
            let r = example1(&cfg, exec)?;
            (r.render(), to_json(&r)?, r.gates.clone(), None)
        }
        Command::Example2 => {
            let r = example2(&cfg, exec)?;
            (r.render(), to_json(&r)?, r.gates.clone(), None)
        }
        Command::Example3 => {
            let r = example3(&cfg, exec)?;
            let csv = r.csv()?;
            match &cfg.out {
                Some(_) => (r.render(), to_json(&r)?, r.gates.clone(), Some(csv)),
                None => (csv, to_json(&r)?, r.gates.clone(), None),
            }
        }
        Command::Measure => {
            let r = measure(&cfg)?;
            (r.render(), to_json(&r)?, r.gates.clone(), Some(r.csv()))
        }
        Command::Verify => {
            let r = verify(&cfg, exec)?;
            (r.render(), to_json(&r)?, r.gates.clone(), None)
        }
    };
    if let Some(path) = &cfg.out {
        write_out(path, file.as_deref().unwrap_or(&text))?;
    }
    Ok(Outcome {
        stdout: if flags.json { json } else { text },
        gates,
    })
}
