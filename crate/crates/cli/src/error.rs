use std::path::PathBuf;

use crnkit_core::dynamics::DynamicsError;
use crnkit_core::feasibility::FeasibilityError;
use crnkit_core::network::{NetworkError, ParseError};
use crnkit_core::signs::{ParseSignError, SignError};
use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const INTERNAL: u8 = 1;
    pub const INPUT: u8 = 2;
    pub const LOOP: u8 = 3;
    pub const SIG_FAILS: u8 = 4;
    pub const CAPACITY: u8 = 5;
    pub const STEP_UNDERFLOW: u8 = 6;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {err}")]
    Parse { path: PathBuf, err: ParseError },
    #[error("invalid network: {0}")]
    Network(#[from] NetworkError),
    #[error("invalid {what}: {msg}")]
    Argument { what: &'static str, msg: String },
    #[error("invalid sign pattern: {0}")]
    Signs(#[from] ParseSignError),
    #[error("{0}")]
    Feasibility(FeasibilityError),
    #[error("{0}")]
    Sign(#[from] SignError),
    #[error("{0}")]
    Dynamics(#[from] DynamicsError),
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
}

impl From<FeasibilityError> for CliError {
    fn from(e: FeasibilityError) -> Self {
        CliError::Feasibility(e)
    }
}

impl CliError {
    pub fn argument(what: &'static str, msg: impl Into<String>) -> Self {
        CliError::Argument { what, msg: msg.into() }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. }
            | CliError::Parse { .. }
            | CliError::Network(_)
            | CliError::Argument { .. }
            | CliError::Signs(_)
            | CliError::Write { .. } => exit::INPUT,
            CliError::Feasibility(FeasibilityError::InternalInconsistency { .. }) => exit::INTERNAL,
            CliError::Feasibility(_) => exit::INPUT,
            CliError::Sign(SignError::Capacity { .. }) => exit::CAPACITY,
            CliError::Sign(_) => exit::INTERNAL,
            CliError::Dynamics(DynamicsError::StepUnderflow { .. }) => exit::STEP_UNDERFLOW,
            CliError::Dynamics(DynamicsError::TooManySteps { .. }) => exit::INTERNAL,
            CliError::Dynamics(_) => exit::INPUT,
        }
    }
}
