//! Stacked de-noising auto-encoders.
//!
//! Each layer is a sigmoid auto-encoder with untied encoder/decoder weights,
//! trained by full-batch gradient descent on the mean (over samples) squared
//! reconstruction error of the clean input from a masked copy. Layers are
//! trained greedily: layer `k` sees the clean hidden activations of layer
//! `k − 1`.

mod grid;
mod layer;
mod serialize;
mod train;

use ndarray::{Array2, ArrayView2};
use thiserror::Error;

pub use grid::{grid_search_candidates, grid_search_layer, GridOutcome, GridSpec};
pub use layer::{sigmoid, DaeGradients, DaeLayer};
pub use serialize::{FORMAT_TAG, FORMAT_VERSION};
pub use train::{
    corrupt, layer_plan, lr_schedule, train_dae, train_dae_from, train_sdae, DaeConfig, HiddenRule, TrainedLayer,
};

#[derive(Debug, Error)]
pub enum AutoencoderError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("dimension mismatch: expected {expected} columns, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("empty training data")]
    EmptyData,
    #[error("non-finite loss at iteration {iteration} (learning rate too large?)")]
    NonFiniteLoss { iteration: usize },
    #[error("layer {index}: {source}")]
    Layer {
        index: usize,
        #[source]
        source: Box<AutoencoderError>,
    },
    #[error("model format: {0}")]
    Format(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, AutoencoderError>;

/// An ordered stack of trained layers.
#[derive(Debug, Clone, PartialEq)]
pub struct SdaeModel {
    layers: Vec<DaeLayer>,
}

impl SdaeModel {
    /// Fails if consecutive layers do not chain (hidden of `i` = visible of `i+1`).
    pub fn new(layers: Vec<DaeLayer>) -> Result<Self> {
        if layers.is_empty() {
            return Err(AutoencoderError::InvalidConfig("model needs at least one layer".into()));
        }
        for (i, pair) in layers.windows(2).enumerate() {
            if pair[0].hidden() != pair[1].visible() {
                return Err(AutoencoderError::Layer {
                    index: i + 1,
                    source: Box::new(AutoencoderError::DimensionMismatch {
                        expected: pair[0].hidden(),
                        found: pair[1].visible(),
                    }),
                });
            }
        }
        Ok(Self { layers })
    }

    pub fn layers(&self) -> &[DaeLayer] {
        &self.layers
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Input width followed by every hidden width.
    pub fn layer_sizes(&self) -> Vec<usize> {
        std::iter::once(self.layers[0].visible())
            .chain(self.layers.iter().map(DaeLayer::hidden))
            .collect()
    }

    pub fn input_size(&self) -> usize {
        self.layers[0].visible()
    }

    pub fn output_size(&self) -> usize {
        self.layers[self.layers.len() - 1].hidden()
    }

    /// The first `depth` layers as a model of their own.
    pub fn truncated(&self, depth: usize) -> Result<Self> {
        if depth == 0 || depth > self.layers.len() {
            return Err(AutoencoderError::InvalidConfig(format!(
                "cannot truncate depth-{} model to {depth}",
                self.layers.len()
            )));
        }
        Ok(Self {
            layers: self.layers[..depth].to_vec(),
        })
    }
}

/// Top-layer activations: forward pass through every encoder.
pub fn encode(model: &SdaeModel, data: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
    if data.ncols() != model.input_size() {
        return Err(AutoencoderError::DimensionMismatch {
            expected: model.input_size(),
            found: data.ncols(),
        });
    }
    let mut current = model.layers[0].encode(data);
    for layer in &model.layers[1..] {
        current = layer.encode(current.view());
    }
    Ok(current)
}

/// Step function at 0.5, boundary inclusive.
pub fn binarize(activations: &Array2<f64>) -> Array2<u8> {
    activations.mapv(|a| u8::from(a >= 0.5))
}

/// Mean over samples of the squared Euclidean reconstruction error, no corruption.
pub fn reconstruction_error(layer: &DaeLayer, data: ArrayView2<'_, f64>) -> Result<f64> {
    if data.ncols() != layer.visible() {
        return Err(AutoencoderError::DimensionMismatch {
            expected: layer.visible(),
            found: data.ncols(),
        });
    }
    if data.nrows() == 0 {
        return Err(AutoencoderError::EmptyData);
    }
    Ok(layer.loss(data, data))
}

/// Continuous and binarized top-layer codes with their labels.
#[derive(Debug, Clone, PartialEq)]
pub struct RepresentationMatrix {
    continuous: Array2<f64>,
    binary: Array2<u8>,
    labels: Vec<u8>,
}

impl RepresentationMatrix {
    pub fn new(continuous: Array2<f64>, labels: Vec<u8>) -> Self {
        assert_eq!(continuous.nrows(), labels.len(), "one label per row");
        let binary = binarize(&continuous);
        Self {
            continuous,
            binary,
            labels,
        }
    }

    pub fn from_model(model: &SdaeModel, data: ArrayView2<'_, f64>, labels: Vec<u8>) -> Result<Self> {
        Ok(Self::new(encode(model, data)?, labels))
    }

    pub fn continuous(&self) -> &Array2<f64> {
        &self.continuous
    }

    pub fn binary(&self) -> &Array2<u8> {
        &self.binary
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn width(&self) -> usize {
        self.continuous.ncols()
    }

    /// Column-wise concatenation `[self | other]` of two codes for the same samples.
    pub fn concat(&self, other: &RepresentationMatrix) -> RepresentationMatrix {
        assert_eq!(
            self.labels, other.labels,
            "concatenated codes must describe the same samples"
        );
        let continuous = ndarray::concatenate(ndarray::Axis(1), &[self.continuous.view(), other.continuous.view()])
            .expect("row counts match");
        Self::new(continuous, self.labels.clone())
    }
}
