use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use crnkit_core::signs::DEFAULT_CAPACITY;

#[derive(Debug, Clone, Parser)]
#[command(name = "crnkit", version, about = "Exact and numerical analysis of reaction networks")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Emit the JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Largest ambient dimension for sign-vector enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_CAPACITY)]
    pub cap: usize,
    /// Seed for randomized analyses.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Print species, complexes, reactions and the matrices A, B, S, E.
    Parse { path: PathBuf },
    /// Decide whether a flux sign pattern is feasible or carries a loop.
    Feasibility {
        path: PathBuf,
        /// One sign per reaction in file order, e.g. `+,-,0`.
        #[arg(long, allow_hyphen_values = true)]
        nu: String,
    },
    /// Sign-based injectivity conditions and structural flags.
    Injectivity { path: PathBuf },
    /// Integrate the mass-action system and write a CSV trajectory.
    Simulate {
        path: PathBuf,
        #[command(flatten)]
        dynamics: DynamicsArgs,
        #[arg(long)]
        t_end: f64,
        /// Inflow composition; runs the flow reactor with unit flow rate.
        #[arg(long)]
        feed: Option<String>,
        /// Relative error tolerance per step.
        #[arg(long, default_value_t = 1e-8)]
        rtol: f64,
        /// Absolute error tolerance per step.
        #[arg(long, default_value_t = 1e-10)]
        atol: f64,
    },
    /// Search each stoichiometric class for multiple equilibria.
    Multistart {
        path: PathBuf,
        #[command(flatten)]
        dynamics: DynamicsArgs,
        /// Starts per class; the first is x0 itself.
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// Random rate draws; without it the rates of the file are used.
        #[arg(long)]
        kappa_draws: Option<usize>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct DynamicsArgs {
    /// Initial concentrations, comma separated.
    #[arg(long)]
    pub x0: String,
    /// Rate constants in directed order (forward directions of reversible
    /// reactions, their backward directions, then irreversible reactions).
    #[arg(long)]
    pub kappa: Option<String>,
}
