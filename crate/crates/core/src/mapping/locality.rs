use super::{BinaryMatrix, MappingError, Result};

/// Row-level locality statistics of a binary code.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalityProfile {
    pub rows: usize,
    /// Rows with exactly one active unit.
    pub exactly_one: usize,
    /// Rows with at least one active unit.
    pub at_least_one: usize,
}

impl LocalityProfile {
    pub fn local_fraction(&self) -> f64 {
        frac(self.exactly_one, self.rows)
    }

    pub fn strictly_local_fraction(&self) -> f64 {
        frac(self.at_least_one, self.rows)
    }
}

fn frac(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

pub fn locality_profile(r: &BinaryMatrix) -> LocalityProfile {
    let mut p = LocalityProfile {
        rows: r.nrows(),
        exactly_one: 0,
        at_least_one: 0,
    };
    for row in r.rows() {
        let active = row.iter().filter(|&&v| v == 1).count();
        p.exactly_one += usize::from(active == 1);
        p.at_least_one += usize::from(active >= 1);
    }
    p
}

/// Two codes are aligned when they activate exactly the same units.
pub fn is_aligned(r_s: &[u8], r_t: &[u8]) -> Result<bool> {
    if r_s.len() != r_t.len() {
        return Err(MappingError::LengthMismatch(r_s.len(), r_t.len()));
    }
    Ok(r_s.iter().zip(r_t).all(|(&a, &b)| (a == 1) == (b == 1)))
}

/// All `(source_row, target_row)` pairs sharing a label: labels stand in
/// for correspondent concepts.
pub fn pairs_by_label(source_labels: &[u8], target_labels: &[u8]) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for (i, ls) in source_labels.iter().enumerate() {
        for (j, lt) in target_labels.iter().enumerate() {
            if ls == lt {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentReport {
    pub pair_aligned: Vec<bool>,
    pub source_locality: LocalityProfile,
    pub target_locality: LocalityProfile,
}

impl AlignmentReport {
    pub fn aligned_fraction(&self) -> f64 {
        frac(
            self.pair_aligned.iter().filter(|&&a| a).count(),
            self.pair_aligned.len(),
        )
    }
}

pub fn alignment_report(
    source: &BinaryMatrix,
    target: &BinaryMatrix,
    pairs: &[(usize, usize)],
) -> Result<AlignmentReport> {
    if source.ncols() != target.ncols() {
        return Err(MappingError::LengthMismatch(source.ncols(), target.ncols()));
    }
    let pair_aligned = pairs
        .iter()
        .map(|&(s, t)| {
            let a = source.row(s).to_vec();
            let b = target.row(t).to_vec();
            is_aligned(&a, &b)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AlignmentReport {
        pair_aligned,
        source_locality: locality_profile(source),
        target_locality: locality_profile(target),
    })
}
