//! Exact nearest-neighbour classification under the L1 distance.
//!
//! Distance ties always resolve to the lowest training index. For binary
//! codes, [`BitKnn`] packs rows into `u64` words so the L1 distance becomes
//! a popcount of the XOR; it returns exactly what [`KnnModel`] would.

use ndarray::{Array2, ArrayView1, ArrayView2};

use super::{EvalError, Result};
use crate::mapping::{BinaryMatrix, Genome};
use crate::par::{self, Exec};

#[derive(Debug, Clone)]
pub struct KnnModel {
    x: Array2<f64>,
    labels: Vec<u8>,
    k: usize,
}

pub fn knn_train(x: Array2<f64>, labels: Vec<u8>, k: usize) -> Result<KnnModel> {
    if x.nrows() == 0 {
        return Err(EvalError::EmptyTrainingSet);
    }
    if x.nrows() != labels.len() {
        return Err(EvalError::LengthMismatch(x.nrows(), labels.len()));
    }
    if k == 0 {
        return Err(EvalError::InvalidConfig("k must be >= 1".into()));
    }
    Ok(KnnModel { x, labels, k })
}

pub fn knn_classify(model: &KnnModel, queries: ArrayView2<'_, f64>) -> Result<Vec<u8>> {
    model.classify_with(queries, Exec::default())
}

fn l1(a: ArrayView1<'_, f64>, b: ArrayView1<'_, f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).sum()
}

/// Majority label among `neighbours` (sorted nearest first); a tied vote
/// goes to the label whose first occurrence is nearest.
fn vote(neighbours: &[(usize, u8)]) -> u8 {
    let mut counts = [0usize; 256];
    for &(_, l) in neighbours {
        counts[usize::from(l)] += 1;
    }
    let best = neighbours
        .iter()
        .map(|&(_, l)| counts[usize::from(l)])
        .max()
        .unwrap_or(0);
    neighbours
        .iter()
        .find(|&&(_, l)| counts[usize::from(l)] == best)
        .map(|&(_, l)| l)
        .expect("k >= 1")
}

impl KnnModel {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn width(&self) -> usize {
        self.x.ncols()
    }

    /// Indices of the `k` nearest training rows, nearest first.
    pub fn neighbours(&self, query: ArrayView1<'_, f64>) -> Vec<usize> {
        if self.k == 1 {
            let mut best = (f64::INFINITY, 0usize);
            for (i, row) in self.x.rows().into_iter().enumerate() {
                let d = l1(row, query);
                if d < best.0 {
                    best = (d, i);
                }
            }
            return vec![best.1];
        }
        let mut d: Vec<(f64, usize)> = self
            .x
            .rows()
            .into_iter()
            .enumerate()
            .map(|(i, r)| (l1(r, query), i))
            .collect();
        d.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        d.truncate(self.k);
        d.into_iter().map(|(_, i)| i).collect()
    }

    pub fn classify_with(&self, queries: ArrayView2<'_, f64>, exec: Exec) -> Result<Vec<u8>> {
        if queries.ncols() != self.x.ncols() {
            return Err(EvalError::DimensionMismatch {
                expected: self.x.ncols(),
                found: queries.ncols(),
            });
        }
        Ok(par::map_indexed(exec, queries.nrows(), |i| {
            let nn: Vec<(usize, u8)> = self
                .neighbours(queries.row(i))
                .into_iter()
                .map(|j| (j, self.labels[j]))
                .collect();
            vote(&nn)
        }))
    }
}

/// Fraction of positions where the labels agree.
pub fn accuracy(predicted: &[u8], truth: &[u8]) -> Result<f64> {
    if predicted.len() != truth.len() {
        return Err(EvalError::LengthMismatch(predicted.len(), truth.len()));
    }
    if truth.is_empty() {
        return Ok(0.0);
    }
    let hits = predicted.iter().zip(truth).filter(|(a, b)| a == b).count();
    Ok(hits as f64 / truth.len() as f64)
}

/// Binary rows packed little-endian into `u64` words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackedCodes {
    words: Vec<u64>,
    words_per_row: usize,
    rows: usize,
    width: usize,
}

impl PackedCodes {
    pub fn words_for(width: usize) -> usize {
        width.div_ceil(64).max(1)
    }

    pub fn pack(m: &BinaryMatrix) -> Self {
        let wpr = Self::words_for(m.ncols());
        let mut words = vec![0u64; wpr * m.nrows()];
        for (i, row) in m.rows().into_iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    words[i * wpr + j / 64] |= 1u64 << (j % 64);
                }
            }
        }
        Self {
            words,
            words_per_row: wpr,
            rows: m.nrows(),
            width: m.ncols(),
        }
    }

    /// Packs the rows of `target × M(genome)` without materializing the product.
    pub fn pack_mapped(target: &BinaryMatrix, genome: &Genome) -> Self {
        assert_eq!(target.ncols(), genome.p(), "target width must equal genome p");
        let q = genome.q();
        let wpr = Self::words_for(q);
        let mut words = vec![0u64; wpr * target.nrows()];
        for (i, row) in target.rows().into_iter().enumerate() {
            let out = &mut words[i * wpr..(i + 1) * wpr];
            for (j, &g) in genome.genes().iter().enumerate() {
                if g > 0 && row[g as usize - 1] != 0 {
                    out[j / 64] |= 1u64 << (j % 64);
                }
            }
        }
        Self {
            words,
            words_per_row: wpr,
            rows: target.nrows(),
            width: q,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.words[i * self.words_per_row..(i + 1) * self.words_per_row]
    }
}

/// 1-NN over packed binary codes (L1 = Hamming).
#[derive(Debug, Clone)]
pub struct BitKnn {
    codes: PackedCodes,
    labels: Vec<u8>,
}

impl BitKnn {
    pub fn new(train: &BinaryMatrix, labels: Vec<u8>) -> Result<Self> {
        if train.nrows() == 0 {
            return Err(EvalError::EmptyTrainingSet);
        }
        if train.nrows() != labels.len() {
            return Err(EvalError::LengthMismatch(train.nrows(), labels.len()));
        }
        Ok(Self {
            codes: PackedCodes::pack(train),
            labels,
        })
    }

    pub fn width(&self) -> usize {
        self.codes.width
    }

    pub fn nearest(&self, query: &[u64]) -> usize {
        let mut best = (u32::MAX, 0usize);
        for i in 0..self.codes.rows {
            let d: u32 = self
                .codes
                .row(i)
                .iter()
                .zip(query)
                .map(|(a, b)| (a ^ b).count_ones())
                .sum();
            if d < best.0 {
                best = (d, i);
                if d == 0 {
                    break;
                }
            }
        }
        best.1
    }

    pub fn classify_packed(&self, queries: &PackedCodes, exec: Exec) -> Result<Vec<u8>> {
        if queries.width != self.codes.width {
            return Err(EvalError::DimensionMismatch {
                expected: self.codes.width,
                found: queries.width,
            });
        }
        Ok(par::map_indexed(exec, queries.rows, |i| {
            self.labels[self.nearest(queries.row(i))]
        }))
    }

    /// Number of queries whose predicted label matches `truth`.
    pub fn count_correct(&self, queries: &PackedCodes, truth: &[u8]) -> usize {
        (0..queries.rows)
            .filter(|&i| self.labels[self.nearest(queries.row(i))] == truth[i])
            .count()
    }
}
