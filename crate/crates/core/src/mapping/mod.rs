//! Constrained binary mapping matrices.
//!
//! A mapping matrix `M` is `p × q` (rows = target units, columns = source
//! units), binary, with at most one active entry per column. Applied as
//! `T_new = T × M`, column `j` of the adjusted target copies target unit
//! `i` when `M(i, j) = 1` and is zero when column `j` is empty.
//!
//! The genome of `M` is a length-`q` integer vector with `V(j) = i + 1`
//! when `M(i, j) = 1` and `V(j) = 0` for an empty column.

mod genome;
mod locality;

use ndarray::Array2;
use thiserror::Error;

pub use genome::{read_genome_file, read_genomes, write_genomes, Genome};
pub use locality::{alignment_report, is_aligned, locality_profile, pairs_by_label, AlignmentReport, LocalityProfile};

/// Row-major `{0, 1}` matrix (one row per sample for representations).
pub type BinaryMatrix = Array2<u8>;

/// First constraint violated by a candidate mapping matrix.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("entry ({row}, {col}) = {value} is not binary")]
    NonBinary { row: usize, col: usize, value: u8 },
    #[error("column {col} has active entries in rows {first_row} and {second_row}")]
    ColumnOverfull {
        col: usize,
        first_row: usize,
        second_row: usize,
    },
}

#[derive(Debug, Error)]
pub enum MappingError {
    #[error("invalid mapping matrix: {0}")]
    Invalid(#[from] Violation),
    #[error("gene {index} = {value} outside 0..={max}")]
    OutOfRange { index: usize, value: u32, max: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("adjustment degree needs a square matrix, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, MappingError>;

/// Checks binariness and the at-most-one-per-column constraint.
pub fn validate(entries: &BinaryMatrix) -> std::result::Result<(), Violation> {
    for col in 0..entries.ncols() {
        let mut seen: Option<usize> = None;
        for row in 0..entries.nrows() {
            match entries[[row, col]] {
                0 => {}
                1 => {
                    if let Some(first_row) = seen {
                        return Err(Violation::ColumnOverfull {
                            col,
                            first_row,
                            second_row: row,
                        });
                    }
                    seen = Some(row);
                }
                value => return Err(Violation::NonBinary { row, col, value }),
            }
        }
    }
    Ok(())
}

/// A validated `p × q` mapping matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingMatrix {
    entries: BinaryMatrix,
}

impl MappingMatrix {
    pub fn new(entries: BinaryMatrix) -> Result<Self> {
        validate(&entries)?;
        Ok(Self { entries })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            entries: Array2::from_shape_fn((n, n), |(i, j)| u8::from(i == j)),
        }
    }

    pub fn zeros(p: usize, q: usize) -> Self {
        Self {
            entries: Array2::zeros((p, q)),
        }
    }

    pub fn from_genome(genome: &Genome) -> Self {
        let mut entries = Array2::zeros((genome.p(), genome.q()));
        for (j, &g) in genome.genes().iter().enumerate() {
            if g > 0 {
                entries[[g as usize - 1, j]] = 1;
            }
        }
        Self { entries }
    }

    pub fn to_genome(&self) -> Genome {
        let genes = (0..self.cols())
            .map(|j| {
                (0..self.rows())
                    .find(|&i| self.entries[[i, j]] == 1)
                    .map_or(0, |i| i as u32 + 1)
            })
            .collect();
        Genome::new(genes, self.rows()).expect("valid matrix yields in-range genome")
    }

    /// Target width `p`.
    pub fn rows(&self) -> usize {
        self.entries.nrows()
    }

    /// Source width `q`.
    pub fn cols(&self) -> usize {
        self.entries.ncols()
    }

    pub fn entries(&self) -> &BinaryMatrix {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.entries[[row, col]]
    }
}

/// `T × M` for a binary `N × p` target matrix; the result is binary `N × q`.
pub fn apply(m: &MappingMatrix, t: &BinaryMatrix) -> Result<BinaryMatrix> {
    if t.ncols() != m.rows() {
        return Err(MappingError::DimensionMismatch {
            expected: m.rows(),
            found: t.ncols(),
        });
    }
    Ok(m.to_genome().gather(t))
}

/// Plain matrix product of two mapping matrices (`p×q` times `q×r`).
pub fn compose(a: &MappingMatrix, b: &MappingMatrix) -> Result<BinaryMatrix> {
    if a.cols() != b.rows() {
        return Err(MappingError::DimensionMismatch {
            expected: a.cols(),
            found: b.rows(),
        });
    }
    Ok(a.entries.dot(&b.entries))
}

/// Percentage of columns `j` whose entry `M(j, j)` is not 1.
pub fn adjustment_degree(m: &MappingMatrix) -> Result<f64> {
    if m.rows() != m.cols() {
        return Err(MappingError::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.cols();
    if n == 0 {
        return Ok(0.0);
    }
    let changed = (0..n).filter(|&j| m.get(j, j) != 1).count();
    Ok(100.0 * changed as f64 / n as f64)
}

/// Block-diagonal `[[J, 0], [0, S]]`.
pub fn block_concat(joint: &MappingMatrix, separate: &MappingMatrix) -> MappingMatrix {
    let (n, nq) = (joint.rows(), joint.cols());
    let (p, q) = (separate.rows(), separate.cols());
    let mut entries = Array2::zeros((n + p, nq + q));
    entries.slice_mut(ndarray::s![..n, ..nq]).assign(&joint.entries);
    entries.slice_mut(ndarray::s![n.., nq..]).assign(&separate.entries);
    MappingMatrix { entries }
}
