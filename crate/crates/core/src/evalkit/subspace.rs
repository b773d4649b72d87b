//! PCA-based subspace alignment.

use nalgebra::{DMatrix, SymmetricEigen};
use ndarray::{Array1, Array2, ArrayView2, Axis};

use super::{EvalError, Result};

pub const DEFAULT_SUBSPACE_DIM: usize = 30;

/// Eigenvalues are counted as positive above this fraction of the largest.
const RELATIVE_EIGEN_TOL: f64 = 1e-10;

/// Eigenvalues in descending order with unit eigenvectors as columns. Each
/// eigenvector is signed so that its largest-magnitude component is
/// positive (first such component on ties).
pub fn symmetric_eigen(cov: &Array2<f64>) -> (Vec<f64>, Array2<f64>) {
    let n = cov.nrows();
    assert_eq!(n, cov.ncols(), "covariance must be square");
    let m = DMatrix::from_fn(n, n, |i, j| 0.5 * (cov[[i, j]] + cov[[j, i]]));
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = Array2::zeros((n, n));
    for (col, &k) in order.iter().enumerate() {
        let v = eig.eigenvectors.column(k);
        let mut pivot = 0;
        for i in 1..n {
            if v[i].abs() > v[pivot].abs() {
                pivot = i;
            }
        }
        let sign = if v[pivot] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            vectors[[i, col]] = sign * v[i];
        }
    }
    (values, vectors)
}

/// Per-domain principal subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct Pca {
    pub mean: Array1<f64>,
    /// D×d, orthonormal columns.
    pub basis: Array2<f64>,
    /// All eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
}

impl Pca {
    pub fn center(&self, x: ArrayView2<'_, f64>) -> Array2<f64> {
        &x - &self.mean.view().insert_axis(Axis(0))
    }

    pub fn project(&self, x: ArrayView2<'_, f64>) -> Array2<f64> {
        self.center(x).dot(&self.basis)
    }
}

fn covariance(x: ArrayView2<'_, f64>) -> (Array1<f64>, Array2<f64>) {
    let n = x.nrows();
    let mean = x.mean_axis(Axis(0)).expect("non-empty");
    let c = &x - &mean.view().insert_axis(Axis(0));
    let denom = if n > 1 { (n - 1) as f64 } else { 1.0 };
    (mean, c.t().dot(&c) / denom)
}

fn positive_count(values: &[f64]) -> usize {
    let top = values.first().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return 0;
    }
    values.iter().filter(|&&v| v > top * RELATIVE_EIGEN_TOL).count()
}

/// Top-`d` principal directions of `x` after centering on its own mean.
pub fn pca(x: ArrayView2<'_, f64>, d: usize) -> Result<Pca> {
    if x.nrows() == 0 {
        return Err(EvalError::EmptyTrainingSet);
    }
    if d == 0 {
        return Err(EvalError::InvalidConfig("subspace dimension must be positive".into()));
    }
    let (mean, cov) = covariance(x);
    let (eigenvalues, vectors) = symmetric_eigen(&cov);
    let positive = positive_count(&eigenvalues);
    if positive < d {
        return Err(EvalError::RankDeficient { d, positive });
    }
    let basis = vectors.slice(ndarray::s![.., ..d]).to_owned();
    Ok(Pca {
        mean,
        basis,
        eigenvalues,
    })
}

/// Largest dimension not above the default that both domains support.
pub fn default_subspace_dim(source: ArrayView2<'_, f64>, target: ArrayView2<'_, f64>) -> usize {
    let rank = |x: ArrayView2<'_, f64>| {
        if x.nrows() == 0 {
            0
        } else {
            positive_count(&symmetric_eigen(&covariance(x).1).0)
        }
    };
    DEFAULT_SUBSPACE_DIM.min(rank(source)).min(rank(target)).max(1)
}

#[derive(Debug, Clone)]
pub struct SubspaceAlignment {
    pub source: Pca,
    pub target: Pca,
    /// d×d alignment transform from the source basis to the target basis.
    pub alignment: Array2<f64>,
}

impl SubspaceAlignment {
    pub fn fit(source: ArrayView2<'_, f64>, target: ArrayView2<'_, f64>, d: usize) -> Result<Self> {
        if source.ncols() != target.ncols() {
            return Err(EvalError::DimensionMismatch {
                expected: source.ncols(),
                found: target.ncols(),
            });
        }
        let source = pca(source, d)?;
        let target = pca(target, d)?;
        let alignment = source.basis.t().dot(&target.basis);
        Ok(Self {
            source,
            target,
            alignment,
        })
    }

    pub fn project_source(&self, x: ArrayView2<'_, f64>) -> Array2<f64> {
        self.source.project(x).dot(&self.alignment)
    }

    pub fn project_target(&self, x: ArrayView2<'_, f64>) -> Array2<f64> {
        self.target.project(x)
    }
}
