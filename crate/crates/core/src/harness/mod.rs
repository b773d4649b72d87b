//! Experiment orchestration: scenario configs, dataset resolution, cached
//! model training, method dispatch and CSV output.

mod cache;
mod config;
mod csv;
mod run;

use std::path::PathBuf;

use thiserror::Error;

pub use cache::CachedTrainer;
pub use config::{parse_methods, DataSource, DomainSpec, ScenarioConfig, Transform};
pub use csv::{append_csv, csv_row, read_csv, without_timing, write_csv, CSV_HEADER};
pub use run::{
    data_dir, depth_sweep, environment_fingerprint, load_domain, median, method_comparison, run_scenario,
    MethodFailure, RunRecord, Runner, SeedData, DATA_DIR_ENV,
};

use crate::dataio::DataError;
use crate::evalkit::EvalError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(#[from] DataError),
    #[error("data file not found: {0}")]
    MissingData(PathBuf),
    #[error("csv error: {0}")]
    Csv(String),
    #[error(transparent)]
    Method(#[from] EvalError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl HarnessError {
    /// Process exit code: 1 method failure, 2 config error, 3 data error.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Data(_) | HarnessError::MissingData(_) => 3,
            HarnessError::Method(EvalError::Data(_)) => 3,
            HarnessError::Csv(_) | HarnessError::Method(_) | HarnessError::Io(_) => 1,
        }
    }
}
