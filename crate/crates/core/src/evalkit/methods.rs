use std::time::Instant;

use super::knn::{accuracy, knn_train};
use super::subspace::SubspaceAlignment;
use super::{EvalError, EvalReport, Result, SdaeTrainer};
use crate::autoencoder::{RepresentationMatrix, SdaeModel};
use crate::dataio::Dataset;
use crate::gasearch::{evolve_seeded, FitnessContext, FitnessMode, GaConfig, SearchResult};
use crate::mapping::{adjustment_degree, Genome, MappingMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    NoAdapt,
    Joint,
    Separate,
    Concat,
    Subspace,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::NoAdapt,
        Method::Joint,
        Method::Separate,
        Method::Concat,
        Method::Subspace,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::NoAdapt => "no_adapt",
            Method::Joint => "joint",
            Method::Separate => "separate",
            Method::Concat => "concat",
            Method::Subspace => "subspace",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.name() == s.trim())
    }
}

/// Target data split into the part scored during search and the part
/// accuracy is reported on.
#[derive(Debug, Clone)]
pub struct TargetSplits {
    pub search: Dataset,
    pub report: Dataset,
}

impl TargetSplits {
    pub fn new(search: Dataset, report: Dataset) -> Self {
        Self { search, report }
    }

    /// Uses every target sample both for search and for reporting.
    pub fn transductive(target: Dataset) -> Self {
        Self {
            search: target.clone(),
            report: target,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AdaptOutcome {
    pub report: EvalReport,
    pub search: SearchResult,
}

fn check_width(source: &Dataset, target: &TargetSplits) -> Result<usize> {
    let width = |d: &Dataset| d.samples().first().map_or(0, |s| s.pixels().len());
    if source.is_empty() {
        return Err(EvalError::EmptyTrainingSet);
    }
    let w = width(source);
    for t in [&target.search, &target.report] {
        if !t.is_empty() && width(t) != w {
            return Err(EvalError::DimensionMismatch {
                expected: w,
                found: width(t),
            });
        }
    }
    if target.report.is_empty() {
        return Err(EvalError::InvalidConfig("empty target report split".into()));
    }
    Ok(w)
}

fn reps(model: &SdaeModel, data: &Dataset) -> Result<RepresentationMatrix> {
    Ok(RepresentationMatrix::from_model(
        model,
        data.to_matrix().view(),
        data.labels(),
    )?)
}

/// 1-NN on raw pixels, trained on the source and scored on the target report split.
pub fn no_adapt_baseline(source: &Dataset, target: &TargetSplits) -> Result<EvalReport> {
    let start = Instant::now();
    check_width(source, target)?;
    let model = knn_train(source.to_matrix(), source.labels(), 1)?;
    let pred = model.classify_with(target.report.to_matrix().view(), crate::par::Exec::default())?;
    let mut report = EvalReport::new(Method::NoAdapt, 0, accuracy(&pred, &target.report.labels())?);
    report.wall_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

/// One network trained on source and target search samples together; the
/// binary codes are compared without any mapping.
pub fn joint_baseline(
    source: &Dataset,
    target: &TargetSplits,
    depth: usize,
    trainer: &dyn SdaeTrainer,
) -> Result<EvalReport> {
    let start = Instant::now();
    check_width(source, target)?;
    let model = trainer.train(&source.union(&target.search), depth)?;
    let s = reps(&model, source)?;
    let t = reps(&model, &target.report)?;
    let ctx = FitnessContext::transductive(
        s.binary().clone(),
        s.labels().to_vec(),
        t.binary().clone(),
        t.labels().to_vec(),
    )?;
    let acc = ctx.score(&Genome::identity(t.width(), s.width()));
    let mut report = EvalReport::new(Method::Joint, depth, acc);
    report.wall_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

fn degree_if_square(genome: &Genome) -> Option<f64> {
    (genome.p() == genome.q())
        .then(|| adjustment_degree(&MappingMatrix::from_genome(genome)).ok())
        .flatten()
}

/// Searches a mapping directly on precomputed representations.
pub fn adapt_representations(
    source: &RepresentationMatrix,
    search: &RepresentationMatrix,
    report: &RepresentationMatrix,
    ga: &GaConfig,
    mode: FitnessMode,
) -> Result<SearchResult> {
    let ctx = FitnessContext::from_representations(source, search, report, mode)?;
    let (p, q) = (ctx.p(), ctx.q());
    Ok(evolve_seeded(
        &ctx,
        ga,
        &[Genome::identity(p, q)],
        |r| Genome::random(p, q, r),
        |_, _, _| Ok(()),
    )?)
}

/// Top-layer codes from one network per domain: source, target search
/// split and target report split.
pub fn separate_representations(
    source: &Dataset,
    target: &TargetSplits,
    depth: usize,
    trainer: &dyn SdaeTrainer,
) -> Result<(RepresentationMatrix, RepresentationMatrix, RepresentationMatrix)> {
    check_width(source, target)?;
    let source_model = trainer.train(source, depth)?;
    let target_model = trainer.train(&target.search, depth)?;
    Ok((
        reps(&source_model, source)?,
        reps(&target_model, &target.search)?,
        reps(&target_model, &target.report)?,
    ))
}

/// Separate networks per domain, then a searched mapping from target
/// units to source units.
pub fn conceptual_adapt(
    source: &Dataset,
    target: &TargetSplits,
    depth: usize,
    ga: &GaConfig,
    trainer: &dyn SdaeTrainer,
    mode: FitnessMode,
) -> Result<AdaptOutcome> {
    let start = Instant::now();
    let (s, t_search, t_report) = separate_representations(source, target, depth, trainer)?;
    let search = adapt_representations(&s, &t_search, &t_report, ga, mode)?;
    let mut report = EvalReport::new(Method::Separate, depth, search.report_accuracy);
    report.adjustment_degree = degree_if_square(&search.best_genome);
    report.wall_seconds = start.elapsed().as_secs_f64();
    Ok(AdaptOutcome { report, search })
}

/// Joint and separate codes side by side, searched with a population
/// seeded by block-diagonal genomes: identity on the joint half and a
/// random mapping on the separate half.
pub fn concat_adapt(
    source: &Dataset,
    target: &TargetSplits,
    depth: usize,
    ga: &GaConfig,
    trainer: &dyn SdaeTrainer,
    mode: FitnessMode,
) -> Result<AdaptOutcome> {
    let start = Instant::now();
    check_width(source, target)?;
    let joint = trainer.train(&source.union(&target.search), depth)?;
    let source_model = trainer.train(source, depth)?;
    let target_model = trainer.train(&target.search, depth)?;
    let s = reps(&joint, source)?.concat(&reps(&source_model, source)?);
    let t_search = reps(&joint, &target.search)?.concat(&reps(&target_model, &target.search)?);
    let t_report = reps(&joint, &target.report)?.concat(&reps(&target_model, &target.report)?);
    let n = joint.output_size();
    let search = adapt_blocks(&s, &t_search, &t_report, n, ga, mode)?;
    let mut report = EvalReport::new(Method::Concat, depth, search.report_accuracy);
    report.adjustment_degree = degree_if_square(&search.best_genome);
    report.wall_seconds = start.elapsed().as_secs_f64();
    Ok(AdaptOutcome { report, search })
}

/// Search on concatenated codes whose first `n` columns are shared.
pub fn adapt_blocks(
    source: &RepresentationMatrix,
    search: &RepresentationMatrix,
    report: &RepresentationMatrix,
    n: usize,
    ga: &GaConfig,
    mode: FitnessMode,
) -> Result<SearchResult> {
    let ctx = FitnessContext::from_representations(source, search, report, mode)?;
    let (p, q) = (ctx.p() - n, ctx.q() - n);
    let joint = Genome::identity(n, n);
    let seeds = [joint.block_concat(&Genome::new(vec![0; q], p)?)];
    Ok(evolve_seeded(
        &ctx,
        ga,
        &seeds,
        |r| joint.block_concat(&Genome::random(p, q, r)),
        |_, _, _| Ok(()),
    )?)
}

/// PCA subspaces per domain, source basis aligned onto the target basis,
/// then 1-NN in the aligned space.
pub fn subspace_alignment_baseline(source: &Dataset, target: &TargetSplits, d: usize) -> Result<EvalReport> {
    let start = Instant::now();
    check_width(source, target)?;
    let xs = source.to_matrix();
    let sa = SubspaceAlignment::fit(xs.view(), target.search.to_matrix().view(), d)?;
    let model = knn_train(sa.project_source(xs.view()), source.labels(), 1)?;
    let queries = sa.project_target(target.report.to_matrix().view());
    let pred = model.classify_with(queries.view(), crate::par::Exec::default())?;
    let mut report = EvalReport::new(Method::Subspace, 0, accuracy(&pred, &target.report.labels())?);
    report.wall_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}
