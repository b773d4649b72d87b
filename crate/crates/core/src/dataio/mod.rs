//! Digit-image ingestion and preparation.
//!
//! All domains are reduced to the same shape: 16×16 grayscale images with
//! intensities in `[0, 1]` and a digit label in `0..=9`.

mod braille;
mod idx;
mod image;
mod manifest;
mod split;
mod usps;

use std::path::PathBuf;

use ndarray::Array2;
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use braille::{braille_dots, synth_braille, BRAILLE_DISC_RADIUS};
pub use idx::{load_idx, parse_idx, write_idx};
pub use image::{resize_16, rotate_dataset, rotate_pixels, Rotation};
pub use manifest::Manifest;
pub use split::{subsample_balanced, subsample_balanced_indices, SplitSpec};
pub use usps::{load_usps_text, parse_usps_text};

/// Side length of every prepared image.
pub const SIDE: usize = 16;
/// Pixels per prepared image.
pub const PIXELS: usize = SIDE * SIDE;
pub const N_CLASSES: usize = 10;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("magic mismatch: expected {expected}, found {found}")]
    MagicMismatch { expected: u32, found: u32 },
    #[error("count mismatch: {images} images vs {labels} labels")]
    CountMismatch { images: usize, labels: usize },
    #[error("truncated file: needed {needed} bytes, have {available}")]
    TruncatedFile { needed: usize, available: usize },
    #[error("malformed line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("value {value} on line {line} outside [-1, 1]")]
    RangeError { line: usize, value: f64 },
    #[error("label {0} outside 0..=9")]
    InvalidLabel(i64),
    #[error("unsupported rotation angle {0} (only 90, 180, 270)")]
    UnsupportedAngle(i32),
    #[error("class {class} has {available} samples, {required} required")]
    InsufficientClassCount {
        class: u8,
        available: usize,
        required: usize,
    },
    #[error("invalid sample: {0}")]
    InvalidSample(String),
    #[error("manifest: {0}")]
    Manifest(String),
}

pub type Result<T> = std::result::Result<T, DataError>;

/// One 16×16 image, row-major, with its digit label.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageSample {
    pixels: Vec<f64>,
    label: u8,
}

impl ImageSample {
    pub fn new(pixels: Vec<f64>, label: u8) -> Result<Self> {
        if pixels.len() != PIXELS {
            return Err(DataError::InvalidSample(format!(
                "expected {PIXELS} pixels, got {}",
                pixels.len()
            )));
        }
        if let Some(p) = pixels.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(DataError::InvalidSample(format!("intensity {p} outside [0, 1]")));
        }
        if usize::from(label) >= N_CLASSES {
            return Err(DataError::InvalidLabel(i64::from(label)));
        }
        Ok(Self { pixels, label })
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn label(&self) -> u8 {
        self.label
    }
}

/// An immutable, labelled collection of images from one domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    samples: Vec<ImageSample>,
    domain_tag: String,
    manifest: Manifest,
}

impl Dataset {
    pub fn new(samples: Vec<ImageSample>, domain_tag: impl Into<String>, manifest: Manifest) -> Self {
        Self {
            samples,
            domain_tag: domain_tag.into(),
            manifest,
        }
    }

    pub fn samples(&self) -> &[ImageSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn domain_tag(&self) -> &str {
        &self.domain_tag
    }

    pub fn manifest(&self) -> &Manifest {
        &self.manifest
    }

    pub fn labels(&self) -> Vec<u8> {
        self.samples.iter().map(ImageSample::label).collect()
    }

    /// N×256 pixel matrix, one row per sample.
    pub fn to_matrix(&self) -> Array2<f64> {
        let mut m = Array2::zeros((self.samples.len(), PIXELS));
        for (mut row, s) in m.rows_mut().into_iter().zip(&self.samples) {
            row.iter_mut().zip(s.pixels()).for_each(|(d, &p)| *d = p);
        }
        m
    }

    /// Subset by index, in the order given.
    pub fn select(&self, indices: &[usize], tag_suffix: &str) -> Dataset {
        let samples = indices.iter().map(|&i| self.samples[i].clone()).collect();
        let mut manifest = self.manifest.clone();
        manifest.push("select", format!("{tag_suffix}:{}", indices.len()));
        Dataset::new(samples, format!("{}{tag_suffix}", self.domain_tag), manifest)
    }

    /// Concatenates two datasets (used for joint training).
    pub fn union(&self, other: &Dataset) -> Dataset {
        let mut samples = self.samples.clone();
        samples.extend(other.samples.iter().cloned());
        let mut manifest = self.manifest.clone();
        manifest.push("union", other.domain_tag.clone());
        Dataset::new(samples, format!("{}+{}", self.domain_tag, other.domain_tag), manifest)
    }

    /// Stable content hash of pixels and labels (hex).
    pub fn fingerprint(&self) -> String {
        matrix_fingerprint(&self.to_matrix(), &self.labels())
    }
}

/// SHA-256 over the exact bit patterns of a matrix and optional labels.
pub fn matrix_fingerprint(m: &Array2<f64>, labels: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update((m.nrows() as u64).to_le_bytes());
    h.update((m.ncols() as u64).to_le_bytes());
    for v in m.iter() {
        h.update(v.to_bits().to_le_bytes());
    }
    h.update(labels);
    hex::encode(&h.finalize()[..16])
}
