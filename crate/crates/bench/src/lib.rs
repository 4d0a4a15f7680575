//! Experiment harness for the broadcast schedulers: seeded random sweeps with
//! CSV output, and single-topology runs.

pub mod config;
pub mod single;
pub mod sweep;

use thiserror::Error;

pub use config::{Algorithm, AreaRule, ExperimentConfig, ModelFlags};
pub use single::run_single;
pub use sweep::{run_sweep, trial_seed, CellSummary, Row, SweepResult};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Topology(#[from] mcbcast::TopologyError),
    #[error(transparent)]
    Schedule(#[from] mcbcast::ScheduleError),
    #[error("{algo} schedule failed verification (n={n} k={k} seed={seed}): {detail}")]
    Verification {
        algo: String,
        n: usize,
        k: u32,
        seed: u64,
        detail: String,
    },
    #[error("no connected topology for n={n} k={k} trial={trial} after {retries} retries")]
    Disconnected {
        n: usize,
        k: u32,
        trial: usize,
        retries: usize,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl BenchError {
    /// Process exit code: 2 for verification failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Verification { .. } => 2,
            _ => 1,
        }
    }
}
