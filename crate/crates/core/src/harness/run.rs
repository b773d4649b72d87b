use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use super::cache::CachedTrainer;
use super::config::{DataSource, DomainSpec, ScenarioConfig, Transform};
use super::csv::append_csv;
use super::HarnessError;
use crate::dataio::{load_idx, load_usps_text, rotate_dataset, subsample_balanced, synth_braille, Dataset, SplitSpec};
use crate::evalkit::{
    concat_adapt, conceptual_adapt, default_subspace_dim, joint_baseline, no_adapt_baseline,
    subspace_alignment_baseline, EvalReport, Method, TargetSplits,
};

/// Environment variable overriding the configured data directory.
pub const DATA_DIR_ENV: &str = "CDA_DATA_DIR";

#[derive(Debug, Clone, PartialEq)]
pub struct MethodFailure {
    pub method: Method,
    pub seed: u64,
    pub depth: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct RunRecord {
    pub reports: Vec<EvalReport>,
    pub failures: Vec<MethodFailure>,
    pub environment: String,
    pub elapsed_seconds: f64,
    pub cache_hits: usize,
    pub cache_misses: usize,
}

impl RunRecord {
    pub fn is_success(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn select(&self, method: Method, depth: Option<usize>) -> Vec<&EvalReport> {
        self.reports
            .iter()
            .filter(|r| r.method == method.name() && depth.is_none_or(|d| r.depth == d))
            .collect()
    }
}

pub fn environment_fingerprint() -> String {
    format!(
        "cda-core {} {}-{} parallel={}",
        env!("CARGO_PKG_VERSION"),
        std::env::consts::OS,
        std::env::consts::ARCH,
        cfg!(feature = "parallel")
    )
}

/// Median of the values; mean of the two middle ones for even counts.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    })
}

pub fn data_dir(cfg: &ScenarioConfig) -> PathBuf {
    std::env::var_os(DATA_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| cfg.data_dir.clone())
}

fn load_source(src: &DataSource, dir: &Path) -> Result<Dataset, HarnessError> {
    let missing = |p: &Path| HarnessError::MissingData(p.to_path_buf());
    match src {
        DataSource::Mnist { test } => {
            let stem = if *test { "t10k" } else { "train" };
            let images = dir.join("mnist").join(format!("{stem}-images.idx3-ubyte"));
            let labels = dir.join("mnist").join(format!("{stem}-labels.idx1-ubyte"));
            for p in [&images, &labels] {
                if !p.exists() {
                    return Err(missing(p));
                }
            }
            Ok(load_idx(&images, &labels)?)
        }
        DataSource::Usps { test } => {
            let path = dir.join("usps").join(if *test { "zip.test" } else { "zip.train" });
            if !path.exists() {
                return Err(missing(&path));
            }
            Ok(load_usps_text(&path)?)
        }
        DataSource::Braille { n_per_class, noise } => Ok(synth_braille(*n_per_class, *noise, 0)),
        DataSource::Idx { images, labels } => Ok(load_idx(&dir.join(images), &dir.join(labels))?),
        DataSource::UspsText { path } => Ok(load_usps_text(&dir.join(path))?),
    }
}

/// Loads a domain and applies its transform chain.
pub fn load_domain(spec: &DomainSpec, dir: &Path) -> Result<Dataset, HarnessError> {
    let mut ds = load_source(&spec.source, dir)?;
    for t in &spec.transforms {
        ds = match t {
            Transform::Rotate(deg) => rotate_dataset(&ds, *deg)?,
        };
    }
    Ok(ds)
}

/// Per-seed data: source train split and the two target splits.
#[derive(Debug, Clone)]
pub struct SeedData {
    pub source: Dataset,
    pub target: TargetSplits,
}

/// Loaded domain pools plus trainers that persist across runs.
#[derive(Debug)]
pub struct Runner {
    cfg: ScenarioConfig,
    source_pool: Dataset,
    target_pool: Dataset,
    trainers: HashMap<String, CachedTrainer>,
}

impl Runner {
    pub fn new(cfg: ScenarioConfig) -> Result<Self, HarnessError> {
        cfg.validate()?;
        let dir = data_dir(&cfg);
        let source_pool = load_domain(&cfg.source, &dir)?;
        let target_pool = if cfg.target == cfg.source {
            source_pool.clone()
        } else {
            load_domain(&cfg.target, &dir)?
        };
        Ok(Self::with_pools(cfg, source_pool, target_pool))
    }

    /// Uses already-loaded domain pools.
    pub fn with_pools(cfg: ScenarioConfig, source_pool: Dataset, target_pool: Dataset) -> Self {
        Self {
            cfg,
            source_pool,
            target_pool,
            trainers: HashMap::new(),
        }
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.cfg
    }

    /// Replaces the config while keeping loaded data and trained models.
    pub fn set_config(&mut self, cfg: ScenarioConfig) {
        self.cfg = cfg;
    }

    /// Balanced splits for one seed. Identical domain specs share a split
    /// so that the target really is the source.
    pub fn seed_data(&self, seed: u64) -> Result<SeedData, HarnessError> {
        let c = &self.cfg;
        let source_seed = crate::derive_seed(seed, "split-source");
        let target_seed = if c.target == c.source {
            source_seed
        } else {
            crate::derive_seed(seed, "split-target")
        };
        let (source, _) = subsample_balanced(
            &self.source_pool,
            SplitSpec::new(c.train_per_class, c.eval_per_class, source_seed),
        )?;
        let (search, report) = subsample_balanced(
            &self.target_pool,
            SplitSpec::new(c.train_per_class, c.eval_per_class, target_seed),
        )?;
        let target = if c.transductive {
            TargetSplits::transductive(search)
        } else {
            TargetSplits::new(search, report)
        };
        Ok(SeedData { source, target })
    }

    fn trainer(&mut self, seed: u64) -> &CachedTrainer {
        let plan = self.cfg.stack_plan(seed);
        let key = plan.layer_key(0);
        let dir = self.cfg.cache_dir.clone();
        self.trainers
            .entry(key)
            .or_insert_with(|| CachedTrainer::new(plan, dir))
    }

    fn run_method(
        &mut self,
        method: Method,
        seed: u64,
        depth: usize,
        data: &SeedData,
    ) -> Result<EvalReport, HarnessError> {
        let cfg = self.cfg.clone();
        let ga = cfg.ga_for(seed);
        let trainer = self.trainer(seed);
        let report = match method {
            Method::NoAdapt => no_adapt_baseline(&data.source, &data.target)?,
            Method::Joint => joint_baseline(&data.source, &data.target, depth, trainer)?,
            Method::Separate => conceptual_adapt(&data.source, &data.target, depth, &ga, trainer, cfg.fitness)?.report,
            Method::Concat => concat_adapt(&data.source, &data.target, depth, &ga, trainer, cfg.fitness)?.report,
            Method::Subspace => {
                let d = cfg.subspace_dim.unwrap_or_else(|| {
                    default_subspace_dim(data.source.to_matrix().view(), data.target.search.to_matrix().view())
                });
                subspace_alignment_baseline(&data.source, &data.target, d)?
            }
        };
        Ok(report.in_scenario(&cfg.name, seed, &cfg.config_hash()))
    }

    fn run_grid(&mut self, methods: &[Method], depths: &[usize]) -> Result<RunRecord, HarnessError> {
        let start = Instant::now();
        let mut record = RunRecord {
            environment: environment_fingerprint(),
            ..RunRecord::default()
        };
        let (h0, m0) = self.cache_counts();
        for seed in self.cfg.seeds.clone() {
            let data = self.seed_data(seed)?;
            for &depth in depths {
                for &method in methods {
                    match self.run_method(method, seed, depth, &data) {
                        Ok(report) => {
                            if let Some(out) = &self.cfg.output {
                                append_csv(out, std::slice::from_ref(&report))?;
                            }
                            record.reports.push(report);
                        }
                        Err(e) => record.failures.push(MethodFailure {
                            method,
                            seed,
                            depth,
                            message: e.to_string(),
                        }),
                    }
                }
            }
        }
        let (h1, m1) = self.cache_counts();
        record.cache_hits = h1 - h0;
        record.cache_misses = m1 - m0;
        record.elapsed_seconds = start.elapsed().as_secs_f64();
        Ok(record)
    }

    fn cache_counts(&self) -> (usize, usize) {
        self.trainers
            .values()
            .fold((0, 0), |(h, m), t| (h + t.hits(), m + t.misses()))
    }

    /// Every configured method for every seed at the configured depth.
    pub fn run_scenario(&mut self) -> Result<RunRecord, HarnessError> {
        let methods = self.cfg.methods.clone();
        let depth = self.cfg.depth;
        self.run_grid(&methods, &[depth])
    }

    /// Joint and separate training at each depth.
    pub fn depth_sweep(&mut self, depths: &[usize]) -> Result<RunRecord, HarnessError> {
        if depths.is_empty() || depths.contains(&0) {
            return Err(HarnessError::Config("depths must be non-empty and at least 1".into()));
        }
        self.run_grid(&[Method::Joint, Method::Separate], depths)
    }

    /// Full method comparison; requires joint, separate and concat.
    pub fn method_comparison(&mut self) -> Result<RunRecord, HarnessError> {
        for m in [Method::Joint, Method::Separate, Method::Concat] {
            if !self.cfg.methods.contains(&m) {
                return Err(HarnessError::Config(format!(
                    "comparison requires method '{}'",
                    m.name()
                )));
            }
        }
        self.run_scenario()
    }
}

pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunRecord, HarnessError> {
    Runner::new(cfg.clone())?.run_scenario()
}

pub fn depth_sweep(cfg: &ScenarioConfig, depths: &[usize]) -> Result<RunRecord, HarnessError> {
    Runner::new(cfg.clone())?.depth_sweep(depths)
}

pub fn method_comparison(cfg: &ScenarioConfig) -> Result<RunRecord, HarnessError> {
    Runner::new(cfg.clone())?.method_comparison()
}
