#![allow(clippy::needless_range_loop)]

//! Independent reference implementations shared by the integration and
//! acceptance tests. Written with plain loops over `Vec`s so they share no
//! code paths with the library.
#![allow(dead_code)]

use cda_core::autoencoder::RepresentationMatrix;
use cda_core::gasearch::FitnessContext;
use cda_core::mapping::BinaryMatrix;
use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Cyclic Jacobi rotations on a symmetric matrix. Returns eigenvalues in
/// descending order and the matching eigenvectors as columns.
pub fn jacobi_eigen(a: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j] * m[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[k][p], v[k][q]);
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| m[y][y].partial_cmp(&m[x][x]).unwrap());
    let values = order.iter().map(|&k| m[k][k]).collect();
    let vectors = (0..n).map(|i| order.iter().map(|&k| v[i][k]).collect()).collect();
    (values, vectors)
}

/// Label of the L1-nearest training row, lowest index on ties.
pub fn naive_nn_label(train: &[Vec<f64>], labels: &[u8], query: &[f64]) -> u8 {
    let mut best = (f64::INFINITY, 0usize);
    for (i, row) in train.iter().enumerate() {
        let d: f64 = row.iter().zip(query).map(|(a, b)| (a - b).abs()).sum();
        if d < best.0 {
            best = (d, i);
        }
    }
    labels[best.1]
}

pub fn rows_of<T: Copy + Into<f64>>(m: &Array2<T>) -> Vec<Vec<f64>> {
    m.rows()
        .into_iter()
        .map(|r| r.iter().map(|&v| v.into()).collect())
        .collect()
}

/// Plain triple-loop product of 0/1 matrices.
pub fn naive_matmul(a: &BinaryMatrix, b: &BinaryMatrix) -> Vec<Vec<u32>> {
    let (n, k, m) = (a.nrows(), a.ncols(), b.ncols());
    let mut out = vec![vec![0u32; m]; n];
    for i in 0..n {
        for j in 0..m {
            for t in 0..k {
                out[i][j] += a[[i, t]] as u32 * b[[t, j]] as u32;
            }
        }
    }
    out
}

/// Random binary matrix with at most one 1 per column.
pub fn random_mapping<R: Rng>(rows: usize, cols: usize, r: &mut R) -> BinaryMatrix {
    let mut m = BinaryMatrix::zeros((rows, cols));
    for j in 0..cols {
        let g = r.random_range(0..=rows);
        if g > 0 {
            m[[g - 1, j]] = 1;
        }
    }
    m
}

/// Planted instance: `n_classes` distinct non-zero codes of width `width`,
/// `per_class` copies each; the target is the source with its columns
/// permuted. Search and report splits take alternating copies of each
/// class, so they are disjoint and balanced.
pub struct Planted {
    pub source: BinaryMatrix,
    pub source_labels: Vec<u8>,
    pub target: BinaryMatrix,
    /// target column k holds source column `perm[k]`
    pub perm: Vec<usize>,
    pub n_classes: usize,
}

pub fn planted(n_classes: usize, per_class: usize, width: usize, seed: u64) -> Planted {
    let mut r = rng(seed);
    let mut codes: Vec<Vec<u8>> = Vec::new();
    while codes.len() < n_classes {
        let c: Vec<u8> = (0..width).map(|_| r.random_range(0..2u8)).collect();
        if c.contains(&1) && !codes.contains(&c) {
            codes.push(c);
        }
    }
    let n = n_classes * per_class;
    let mut source = BinaryMatrix::zeros((n, width));
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let class = i % n_classes;
        for j in 0..width {
            source[[i, j]] = codes[class][j];
        }
        labels.push(class as u8);
    }
    let mut perm: Vec<usize> = (0..width).collect();
    perm.shuffle(&mut r);
    let target = Array2::from_shape_fn((n, width), |(i, k)| source[[i, perm[k]]]);
    Planted {
        source,
        source_labels: labels,
        target,
        perm,
        n_classes,
    }
}

impl Planted {
    /// Genome that undoes the permutation: source column j reads the
    /// target column holding it.
    pub fn inverse_genes(&self) -> Vec<u32> {
        (0..self.perm.len())
            .map(|j| self.perm.iter().position(|&x| x == j).unwrap() as u32 + 1)
            .collect()
    }

    pub fn context(&self) -> FitnessContext {
        let n = self.source.nrows();
        let even: Vec<usize> = (0..n).filter(|i| (i / self.n_classes).is_multiple_of(2)).collect();
        let odd: Vec<usize> = (0..n).filter(|i| (i / self.n_classes) % 2 == 1).collect();
        let pick = |idx: &[usize]| {
            let m = Array2::from_shape_fn((idx.len(), self.target.ncols()), |(i, j)| self.target[[idx[i], j]]);
            let l: Vec<u8> = idx.iter().map(|&i| self.source_labels[i]).collect();
            (m, l)
        };
        let (s, sl) = pick(&even);
        let (rp, rl) = pick(&odd);
        FitnessContext::new(self.source.clone(), self.source_labels.clone(), s, sl, rp, rl).unwrap()
    }

    pub fn representations(&self) -> (RepresentationMatrix, RepresentationMatrix) {
        let f = |m: &BinaryMatrix| m.mapv(|v| if v == 1 { 0.9 } else { 0.1 });
        (
            RepresentationMatrix::new(f(&self.source), self.source_labels.clone()),
            RepresentationMatrix::new(f(&self.target), self.source_labels.clone()),
        )
    }
}

/// Random binary fitness context with independent source and target rows.
pub fn random_context(n: usize, p: usize, q: usize, classes: u8, seed: u64) -> FitnessContext {
    let mut r = rng(seed);
    let s = Array2::from_shape_fn((n, q), |_| r.random_range(0..2u8));
    let sl: Vec<u8> = (0..n).map(|_| r.random_range(0..classes)).collect();
    let t = Array2::from_shape_fn((n, p), |_| r.random_range(0..2u8));
    let tl: Vec<u8> = (0..n).map(|_| r.random_range(0..classes)).collect();
    FitnessContext::transductive(s, sl, t, tl).unwrap()
}
