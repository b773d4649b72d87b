//! Scenario configuration: plain `key = value` lines grouped under
//! `[section]` headers, `#` comments.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::HarnessError;
use crate::autoencoder::{DaeConfig, GridSpec, HiddenRule};
use crate::evalkit::{Method, StackPlan};
use crate::gasearch::{FitnessMode, GaConfig};

type Result<T> = std::result::Result<T, HarnessError>;

/// Where a domain's images come from, before transforms.
#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    /// `mnist` or `mnist-test`, IDX files under `<data_dir>/mnist`.
    Mnist { test: bool },
    /// `usps` or `usps-test`, text files under `<data_dir>/usps`.
    Usps { test: bool },
    /// `braille:N:NOISE`, N synthetic images per class.
    Braille { n_per_class: usize, noise: f64 },
    /// `idx:IMAGES:LABELS`
    Idx { images: PathBuf, labels: PathBuf },
    /// `usps-text:PATH`
    UspsText { path: PathBuf },
}

impl DataSource {
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let bad = || HarnessError::Config(format!("unknown dataset '{s}'"));
        Ok(match parts.as_slice() {
            ["mnist"] => DataSource::Mnist { test: false },
            ["mnist-test"] => DataSource::Mnist { test: true },
            ["usps"] => DataSource::Usps { test: false },
            ["usps-test"] => DataSource::Usps { test: true },
            ["braille", n, noise] => DataSource::Braille {
                n_per_class: n.parse().map_err(|_| bad())?,
                noise: noise.parse().map_err(|_| bad())?,
            },
            ["idx", images, labels] => DataSource::Idx {
                images: images.into(),
                labels: labels.into(),
            },
            ["usps-text", path] => DataSource::UspsText { path: path.into() },
            _ => return Err(bad()),
        })
    }

    pub fn spec(&self) -> String {
        match self {
            DataSource::Mnist { test } => if *test { "mnist-test" } else { "mnist" }.into(),
            DataSource::Usps { test } => if *test { "usps-test" } else { "usps" }.into(),
            DataSource::Braille { n_per_class, noise } => format!("braille:{n_per_class}:{noise}"),
            DataSource::Idx { images, labels } => format!("idx:{}:{}", images.display(), labels.display()),
            DataSource::UspsText { path } => format!("usps-text:{}", path.display()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transform {
    Rotate(i32),
}

impl Transform {
    pub fn parse_chain(s: &str) -> Result<Vec<Transform>> {
        let s = s.trim();
        if s.is_empty() || s == "none" {
            return Ok(Vec::new());
        }
        s.split(',')
            .map(|t| {
                let t = t.trim();
                match t.split_once(':') {
                    Some(("rotate", deg)) => deg
                        .parse()
                        .map(Transform::Rotate)
                        .map_err(|_| HarnessError::Config(format!("bad rotation '{t}'"))),
                    _ => Err(HarnessError::Config(format!("unknown transform '{t}'"))),
                }
            })
            .collect()
    }

    pub fn spec(chain: &[Transform]) -> String {
        if chain.is_empty() {
            return "none".into();
        }
        chain
            .iter()
            .map(|t| match t {
                Transform::Rotate(d) => format!("rotate:{d}"),
            })
            .collect::<Vec<_>>()
            .join(",")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainSpec {
    pub source: DataSource,
    pub transforms: Vec<Transform>,
}

/// Everything needed to run one experiment family.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub source: DomainSpec,
    pub target: DomainSpec,
    pub train_per_class: usize,
    pub eval_per_class: usize,
    /// Score and report on the same target rows.
    pub transductive: bool,
    pub depth: usize,
    pub depths: Vec<usize>,
    pub hidden: HiddenRule,
    pub dae: DaeConfig,
    pub grid: bool,
    pub ga: GaConfig,
    pub fitness: FitnessMode,
    pub subspace_dim: Option<usize>,
    pub methods: Vec<Method>,
    pub seeds: Vec<u64>,
    pub output: Option<PathBuf>,
    pub data_dir: PathBuf,
    pub cache_dir: Option<PathBuf>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            name: "scenario".into(),
            source: DomainSpec {
                source: DataSource::Mnist { test: false },
                transforms: Vec::new(),
            },
            target: DomainSpec {
                source: DataSource::Usps { test: false },
                transforms: Vec::new(),
            },
            train_per_class: 50,
            eval_per_class: 20,
            transductive: false,
            depth: 5,
            depths: vec![1, 2, 3, 4, 5],
            hidden: HiddenRule::TwoThirds,
            dae: DaeConfig::default(),
            grid: false,
            ga: GaConfig::default(),
            fitness: FitnessMode::Binary,
            subspace_dim: None,
            methods: Method::ALL.to_vec(),
            seeds: vec![0, 1, 2, 3, 4],
            output: None,
            data_dir: PathBuf::from("data"),
            cache_dir: None,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| HarnessError::Config(format!("{key}: cannot parse '{v}'")))
}

fn parse_list<T: std::str::FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    v.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_num(key, s.trim()))
        .collect()
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(HarnessError::Config(format!("{key}: expected true/false, got '{v}'"))),
    }
}

pub fn parse_methods(v: &str) -> Result<Vec<Method>> {
    let mut out = Vec::new();
    for name in v.split(',').filter(|s| !s.trim().is_empty()) {
        let m = Method::parse(name).ok_or_else(|| HarnessError::Config(format!("unknown method '{}'", name.trim())))?;
        if !out.contains(&m) {
            out.push(m);
        }
    }
    Ok(out)
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut section = String::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = name.trim().to_string();
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| HarnessError::Config(format!("line {}: expected key = value", i + 1)))?;
            let key = if section.is_empty() {
                k.trim().to_string()
            } else {
                format!("{section}.{}", k.trim())
            };
            cfg.set(&key, v.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Sets one dotted key, e.g. `ga.population`.
    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "name" => self.name = v.to_string(),
            "source.dataset" => self.source.source = DataSource::parse(v)?,
            "source.transform" => self.source.transforms = Transform::parse_chain(v)?,
            "target.dataset" => self.target.source = DataSource::parse(v)?,
            "target.transform" => self.target.transforms = Transform::parse_chain(v)?,
            "split.train_per_class" => self.train_per_class = parse_num(key, v)?,
            "split.eval_per_class" => self.eval_per_class = parse_num(key, v)?,
            "split.transductive" => self.transductive = parse_bool(key, v)?,
            "autoencoder.depth" => self.depth = parse_num(key, v)?,
            "autoencoder.depths" => self.depths = parse_list(key, v)?,
            "autoencoder.hidden" => {
                self.hidden =
                    HiddenRule::parse(v).ok_or_else(|| HarnessError::Config(format!("{key}: unknown rule '{v}'")))?
            }
            "autoencoder.epsilon0" => self.dae.epsilon0 = parse_num(key, v)?,
            "autoencoder.tau" => self.dae.tau = parse_num(key, v)?,
            "autoencoder.corruption" => self.dae.corruption = parse_num(key, v)?,
            "autoencoder.max_iters" => self.dae.max_iters = parse_num(key, v)?,
            "autoencoder.patience" => self.dae.patience = parse_num(key, v)?,
            "autoencoder.grid" => self.grid = parse_bool(key, v)?,
            "ga.population" => self.ga.population_size = parse_num(key, v)?,
            "ga.elite_fraction" => self.ga.elite_fraction = parse_num(key, v)?,
            "ga.patience" => self.ga.patience = parse_num(key, v)?,
            "ga.mutation_rate" => self.ga.mutation_rate = if v == "auto" { None } else { Some(parse_num(key, v)?) },
            "ga.max_generations" => self.ga.max_generations = parse_num(key, v)?,
            "ga.fitness" => {
                self.fitness = match v {
                    "binary" => FitnessMode::Binary,
                    "continuous" => FitnessMode::Continuous,
                    _ => return Err(HarnessError::Config(format!("{key}: expected binary or continuous"))),
                }
            }
            "subspace.dim" => self.subspace_dim = if v == "auto" { None } else { Some(parse_num(key, v)?) },
            "run.methods" => self.methods = parse_methods(v)?,
            "run.seeds" => self.seeds = parse_list(key, v)?,
            "run.output" => self.output = if v.is_empty() { None } else { Some(v.into()) },
            "run.data_dir" => self.data_dir = v.into(),
            "run.cache_dir" => self.cache_dir = if v.is_empty() { None } else { Some(v.into()) },
            _ => return Err(HarnessError::Config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(HarnessError::Config("at least one method required".into()));
        }
        if self.depth == 0 || self.depths.contains(&0) {
            return Err(HarnessError::Config("depth must be at least 1".into()));
        }
        if self.seeds.is_empty() {
            return Err(HarnessError::Config("at least one seed required".into()));
        }
        if self.train_per_class == 0 || self.eval_per_class == 0 {
            return Err(HarnessError::Config("split counts must be positive".into()));
        }
        self.ga.validate().map_err(|e| HarnessError::Config(e.to_string()))?;
        DaeConfig {
            hidden_size: 1,
            ..self.dae
        }
        .validate()
        .map_err(|e| HarnessError::Config(e.to_string()))?;
        Ok(())
    }

    /// Canonical text form; parsing it yields an equal config.
    /// Run-location keys (output, data and cache directories) are left out
    /// so they do not change the hash.
    pub fn canonical(&self) -> String {
        let mut s = String::new();
        let opt = |o: Option<f64>| o.map_or("auto".to_string(), |v| format!("{v:?}"));
        let list = |v: &[usize]| v.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",");
        writeln!(s, "name = {}", self.name).unwrap();
        writeln!(
            s,
            "[source]\ndataset = {}\ntransform = {}",
            self.source.source.spec(),
            Transform::spec(&self.source.transforms)
        )
        .unwrap();
        writeln!(
            s,
            "[target]\ndataset = {}\ntransform = {}",
            self.target.source.spec(),
            Transform::spec(&self.target.transforms)
        )
        .unwrap();
        writeln!(
            s,
            "[split]\ntrain_per_class = {}\neval_per_class = {}\ntransductive = {}",
            self.train_per_class, self.eval_per_class, self.transductive
        )
        .unwrap();
        writeln!(
            s,
            "[autoencoder]\ndepth = {}\ndepths = {}\nhidden = {}\nepsilon0 = {:?}\ntau = {}\ncorruption = {:?}\nmax_iters = {}\npatience = {}\ngrid = {}",
            self.depth,
            list(&self.depths),
            self.hidden.name(),
            self.dae.epsilon0,
            self.dae.tau,
            self.dae.corruption,
            self.dae.max_iters,
            self.dae.patience,
            self.grid
        )
        .unwrap();
        writeln!(
            s,
            "[ga]\npopulation = {}\nelite_fraction = {:?}\npatience = {}\nmutation_rate = {}\nmax_generations = {}\nfitness = {}",
            self.ga.population_size,
            self.ga.elite_fraction,
            self.ga.patience,
            opt(self.ga.mutation_rate),
            self.ga.max_generations,
            match self.fitness {
                FitnessMode::Binary => "binary",
                FitnessMode::Continuous => "continuous",
            }
        )
        .unwrap();
        writeln!(
            s,
            "[subspace]\ndim = {}",
            self.subspace_dim.map_or("auto".into(), |d| d.to_string())
        )
        .unwrap();
        writeln!(
            s,
            "[run]\nmethods = {}\nseeds = {}",
            self.methods.iter().map(|m| m.name()).collect::<Vec<_>>().join(","),
            self.seeds.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
        )
        .unwrap();
        s
    }

    /// First 16 hex digits of the SHA-256 of the canonical form.
    pub fn config_hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        hex::encode(&digest[..8])
    }

    /// Autoencoder plan for one run seed.
    pub fn stack_plan(&self, seed: u64) -> StackPlan {
        StackPlan {
            rule: self.hidden,
            base: self.dae,
            grid: self.grid.then(GridSpec::default),
            seed: crate::derive_seed(seed, "sdae"),
        }
    }

    /// GA config for one run seed.
    pub fn ga_for(&self, seed: u64) -> GaConfig {
        GaConfig {
            seed: crate::derive_seed(seed, "ga"),
            ..self.ga.clone()
        }
    }
}
