use rand::seq::SliceRandom;

use super::{DataError, Dataset, Result, N_CLASSES};
use crate::seeds::rng;

/// Balanced train/eval split request: counts are per class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitSpec {
    pub n_train_per_class: usize,
    pub n_eval_per_class: usize,
    pub seed: u64,
}

impl SplitSpec {
    pub fn new(n_train_per_class: usize, n_eval_per_class: usize, seed: u64) -> Self {
        Self {
            n_train_per_class,
            n_eval_per_class,
            seed,
        }
    }
}

/// Index selection behind [`subsample_balanced`]: per class, shuffle that
/// class's indices with the seed and take the first `n_train` for train and
/// the next `n_eval` for eval. Each split is returned in ascending order.
pub fn subsample_balanced_indices(labels: &[u8], spec: SplitSpec) -> Result<(Vec<usize>, Vec<usize>)> {
    if spec.n_train_per_class == 0 || spec.n_eval_per_class == 0 {
        return Err(DataError::InvalidSample("split counts must be at least 1".into()));
    }
    let need = spec.n_train_per_class + spec.n_eval_per_class;
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); N_CLASSES];
    for (i, &l) in labels.iter().enumerate() {
        by_class[usize::from(l)].push(i);
    }
    let mut rng = rng(spec.seed);
    let (mut train, mut eval) = (Vec::new(), Vec::new());
    for (class, mut idx) in by_class.into_iter().enumerate() {
        if idx.len() < need {
            return Err(DataError::InsufficientClassCount {
                class: class as u8,
                available: idx.len(),
                required: need,
            });
        }
        idx.shuffle(&mut rng);
        train.extend_from_slice(&idx[..spec.n_train_per_class]);
        eval.extend_from_slice(&idx[spec.n_train_per_class..need]);
    }
    train.sort_unstable();
    eval.sort_unstable();
    Ok((train, eval))
}

pub fn subsample_balanced(ds: &Dataset, spec: SplitSpec) -> Result<(Dataset, Dataset)> {
    let (train, eval) = subsample_balanced_indices(&ds.labels(), spec)?;
    let mut tr = ds.select(&train, ":train");
    let mut ev = ds.select(&eval, ":eval");
    for d in [&mut tr, &mut ev] {
        let mut m = d.manifest().clone();
        m.push("split_seed", spec.seed.to_string());
        m.push(
            "split_per_class",
            format!("{}/{}", spec.n_train_per_class, spec.n_eval_per_class),
        );
        *d = Dataset::new(d.samples().to_vec(), d.domain_tag(), m);
    }
    Ok((tr, ev))
}
