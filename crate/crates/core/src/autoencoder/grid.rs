use ndarray::{Array2, ArrayView2, Axis};
use rand::seq::SliceRandom;

use super::{reconstruction_error, train_dae, DaeConfig, HiddenRule, Result};
use crate::par::{self, Exec};
use crate::seeds::rng;

/// Candidate sets for a layer-wise grid search.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub hidden: Vec<HiddenRule>,
    pub learning_rates: Vec<f64>,
    pub corruptions: Vec<f64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            hidden: HiddenRule::ALL.to_vec(),
            learning_rates: vec![1e-3, 1e-2, 1e-1, 1.0],
            corruptions: vec![0.0, 0.3, 0.5],
        }
    }
}

impl GridSpec {
    /// Expands the grid into concrete configs for input width `visible`.
    pub fn candidates(&self, visible: usize, base: &DaeConfig) -> Vec<DaeConfig> {
        let mut out = Vec::new();
        for rule in &self.hidden {
            for &epsilon0 in &self.learning_rates {
                for &corruption in &self.corruptions {
                    out.push(DaeConfig {
                        hidden_size: rule.apply(visible),
                        epsilon0,
                        corruption,
                        ..*base
                    });
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct GridOutcome {
    pub best: DaeConfig,
    /// Validation reconstruction error per candidate, in candidate order
    /// (`inf` when training failed).
    pub scores: Vec<(DaeConfig, f64)>,
}

/// Seeded 80/20 row split. With a single row, both halves hold it.
fn split_rows(data: ArrayView2<'_, f64>, seed: u64) -> (Array2<f64>, Array2<f64>) {
    let n = data.nrows();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut rng(seed));
    let n_train = ((n as f64 * 0.8).round() as usize).clamp(1, n);
    let (tr, va) = idx.split_at(n_train);
    let va = if va.is_empty() { tr } else { va };
    (data.select(Axis(0), tr), data.select(Axis(0), va))
}

/// Trains every candidate on the 80% split and keeps the one with lowest
/// validation reconstruction error. Ties go to the smaller hidden size,
/// then smaller learning rate, then smaller corruption, then earlier position.
pub fn grid_search_candidates(
    data: ArrayView2<'_, f64>,
    candidates: &[DaeConfig],
    split_seed: u64,
) -> Result<GridOutcome> {
    assert!(!candidates.is_empty(), "grid search needs at least one candidate");
    let (train, valid) = split_rows(data, split_seed);
    let losses = par::map_slice(Exec::default(), candidates, |cfg| {
        train_dae(train.view(), cfg)
            .and_then(|layer| reconstruction_error(&layer, valid.view()))
            .unwrap_or(f64::INFINITY)
    });
    let best = (0..candidates.len())
        .min_by(|&a, &b| {
            let (ca, cb) = (&candidates[a], &candidates[b]);
            losses[a]
                .total_cmp(&losses[b])
                .then(ca.hidden_size.cmp(&cb.hidden_size))
                .then(ca.epsilon0.total_cmp(&cb.epsilon0))
                .then(ca.corruption.total_cmp(&cb.corruption))
                .then(a.cmp(&b))
        })
        .expect("non-empty");
    Ok(GridOutcome {
        best: candidates[best],
        scores: candidates.iter().copied().zip(losses).collect(),
    })
}

pub fn grid_search_layer(data: ArrayView2<'_, f64>, grid: &GridSpec, base: &DaeConfig) -> Result<GridOutcome> {
    let candidates = grid.candidates(data.ncols(), base);
    grid_search_candidates(data, &candidates, base.seed)
}
