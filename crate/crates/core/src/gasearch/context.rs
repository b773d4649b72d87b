use ndarray::Array2;

use super::{GaError, Result};
use crate::autoencoder::RepresentationMatrix;
use crate::evalkit::knn::{accuracy, knn_train, BitKnn, KnnModel, PackedCodes};
use crate::mapping::{BinaryMatrix, Genome, MappingMatrix};
use crate::par::Exec;

/// Which code the fitness is computed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FitnessMode {
    #[default]
    Binary,
    /// Continuous activations, for ablation.
    Continuous,
}

#[derive(Debug, Clone)]
struct Split {
    binary: BinaryMatrix,
    continuous: Option<Array2<f64>>,
    labels: Vec<u8>,
}

/// Source codes plus two target splits: one scored during search, one
/// used only for the final report.
#[derive(Debug, Clone)]
pub struct FitnessContext {
    source_knn: BitKnn,
    source_float: Option<KnnModel>,
    search: Split,
    report: Split,
    q: usize,
    mode: FitnessMode,
}

fn check_rows(m_rows: usize, labels: usize, what: &str) -> Result<()> {
    if m_rows != labels {
        return Err(GaError::DimensionMismatch(format!(
            "{what}: {m_rows} rows vs {labels} labels"
        )));
    }
    if m_rows == 0 {
        return Err(GaError::DimensionMismatch(format!("{what}: no rows")));
    }
    Ok(())
}

impl FitnessContext {
    /// Binary-only context.
    pub fn new(
        source: BinaryMatrix,
        source_labels: Vec<u8>,
        search: BinaryMatrix,
        search_labels: Vec<u8>,
        report: BinaryMatrix,
        report_labels: Vec<u8>,
    ) -> Result<Self> {
        check_rows(source.nrows(), source_labels.len(), "source")?;
        check_rows(search.nrows(), search_labels.len(), "target search")?;
        check_rows(report.nrows(), report_labels.len(), "target report")?;
        if search.ncols() != report.ncols() {
            return Err(GaError::DimensionMismatch(format!(
                "target splits have widths {} and {}",
                search.ncols(),
                report.ncols()
            )));
        }
        let q = source.ncols();
        let source_knn = BitKnn::new(&source, source_labels).map_err(|e| GaError::DimensionMismatch(e.to_string()))?;
        Ok(Self {
            source_knn,
            source_float: None,
            search: Split {
                binary: search,
                continuous: None,
                labels: search_labels,
            },
            report: Split {
                binary: report,
                continuous: None,
                labels: report_labels,
            },
            q,
            mode: FitnessMode::Binary,
        })
    }

    /// Search and report on the same target rows (labels used for both).
    pub fn transductive(
        source: BinaryMatrix,
        source_labels: Vec<u8>,
        target: BinaryMatrix,
        target_labels: Vec<u8>,
    ) -> Result<Self> {
        Self::new(
            source,
            source_labels,
            target.clone(),
            target_labels.clone(),
            target,
            target_labels,
        )
    }

    pub fn from_representations(
        source: &RepresentationMatrix,
        search: &RepresentationMatrix,
        report: &RepresentationMatrix,
        mode: FitnessMode,
    ) -> Result<Self> {
        let mut ctx = Self::new(
            source.binary().clone(),
            source.labels().to_vec(),
            search.binary().clone(),
            search.labels().to_vec(),
            report.binary().clone(),
            report.labels().to_vec(),
        )?;
        if mode == FitnessMode::Continuous {
            ctx.source_float = Some(
                knn_train(source.continuous().clone(), source.labels().to_vec(), 1)
                    .map_err(|e| GaError::DimensionMismatch(e.to_string()))?,
            );
            ctx.search.continuous = Some(search.continuous().clone());
            ctx.report.continuous = Some(report.continuous().clone());
        }
        ctx.mode = mode;
        Ok(ctx)
    }

    pub fn mode(&self) -> FitnessMode {
        self.mode
    }

    /// Target code width.
    pub fn p(&self) -> usize {
        self.search.binary.ncols()
    }

    /// Source code width.
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn search_labels(&self) -> &[u8] {
        &self.search.labels
    }

    pub fn report_labels(&self) -> &[u8] {
        &self.report.labels
    }

    fn check(&self, genome: &Genome) -> Result<()> {
        if genome.p() != self.p() || genome.q() != self.q {
            return Err(GaError::DimensionMismatch(format!(
                "mapping is {}x{}, context needs {}x{}",
                genome.p(),
                genome.q(),
                self.p(),
                self.q
            )));
        }
        Ok(())
    }

    fn score_split(&self, split: &Split, genome: &Genome) -> f64 {
        match (self.mode, &split.continuous, &self.source_float) {
            (FitnessMode::Continuous, Some(cont), Some(knn)) => {
                let mapped = genome.gather(cont);
                let pred = knn
                    .classify_with(mapped.view(), Exec::Sequential)
                    .expect("width checked");
                accuracy(&pred, &split.labels).expect("lengths match")
            }
            _ => {
                let packed = PackedCodes::pack_mapped(&split.binary, genome);
                self.source_knn.count_correct(&packed, &split.labels) as f64 / split.labels.len() as f64
            }
        }
    }

    /// Accuracy of the mapping on the search split. Panics on a shape
    /// mismatch; use [`fitness`] for a checked call.
    pub fn score(&self, genome: &Genome) -> f64 {
        self.check(genome).expect("genome shape matches context");
        self.score_split(&self.search, genome)
    }

    /// Accuracy of the mapping on the report split.
    pub fn report_accuracy(&self, genome: &Genome) -> Result<f64> {
        self.check(genome)?;
        Ok(self.score_split(&self.report, genome))
    }
}

/// Fraction of adjusted target-search samples whose nearest source code carries their label.
pub fn fitness(m: &MappingMatrix, ctx: &FitnessContext) -> Result<f64> {
    let genome = m.to_genome();
    ctx.check(&genome)?;
    Ok(ctx.score_split(&ctx.search, &genome))
}
