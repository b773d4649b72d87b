//! Exact 1-NN classification, accuracy, and the comparison methods:
//! no adaptation, joint training, separate networks with a searched
//! mapping, concatenated representations, and subspace alignment.

pub mod knn;
mod methods;
pub mod subspace;
mod trainer;

use thiserror::Error;

pub use knn::{accuracy, knn_classify, knn_train, BitKnn, KnnModel, PackedCodes};
pub use methods::{
    adapt_blocks, adapt_representations, concat_adapt, conceptual_adapt, joint_baseline, no_adapt_baseline,
    separate_representations, subspace_alignment_baseline, AdaptOutcome, Method, TargetSplits,
};
pub use subspace::{default_subspace_dim, pca, symmetric_eigen, Pca, SubspaceAlignment, DEFAULT_SUBSPACE_DIM};
pub use trainer::{FreshTrainer, SdaeTrainer, StackPlan};

use crate::autoencoder::AutoencoderError;
use crate::dataio::DataError;
use crate::gasearch::GaError;
use crate::mapping::MappingError;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("empty training set")]
    EmptyTrainingSet,
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("only {positive} positive eigenvalues, {d} requested")]
    RankDeficient { d: usize, positive: usize },
    #[error(transparent)]
    Autoencoder(#[from] AutoencoderError),
    #[error(transparent)]
    Mapping(#[from] MappingError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Search(#[from] GaError),
}

pub type Result<T> = std::result::Result<T, EvalError>;

/// One result row.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub method: String,
    pub scenario: String,
    pub depth: usize,
    pub accuracy: f64,
    pub adjustment_degree: Option<f64>,
    pub seed: u64,
    pub config_hash: String,
    pub wall_seconds: f64,
}

impl EvalReport {
    pub fn new(method: Method, depth: usize, accuracy: f64) -> Self {
        Self {
            method: method.name().to_string(),
            scenario: String::new(),
            depth,
            accuracy,
            adjustment_degree: None,
            seed: 0,
            config_hash: String::new(),
            wall_seconds: 0.0,
        }
    }

    pub fn in_scenario(mut self, scenario: &str, seed: u64, config_hash: &str) -> Self {
        self.scenario = scenario.to_string();
        self.seed = seed;
        self.config_hash = config_hash.to_string();
        self
    }
}
