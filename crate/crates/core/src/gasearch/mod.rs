//! Search for the mapping matrix that maximizes transfer accuracy.
//!
//! The objective of a mapping is the 1-NN (L1) accuracy obtained by
//! classifying the re-wired target codes against the source codes. The
//! genetic search keeps an elite, breeds the rest by rank-weighted parent
//! selection, uniform crossover and per-gene resampling, and stops after a
//! fixed number of generations without improvement.

mod context;
mod evolve;
mod exhaustive;

use thiserror::Error;

pub use context::{fitness, FitnessContext, FitnessMode};
pub use evolve::{evolve, evolve_seeded, write_trace_csv, GaConfig, GenerationStats, SearchResult};
pub use exhaustive::{exhaustive_search, exhaustive_search_with, MAX_EXHAUSTIVE_SPACE};

#[derive(Debug, Error)]
pub enum GaError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("search space of {size} genomes exceeds the exhaustive limit")]
    SpaceTooLarge { size: f64 },
    #[error("invalid GA config: {0}")]
    InvalidConfig(String),
    #[error("empty {0}")]
    Empty(&'static str),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, GaError>;
