mod common;

use cda_core::autoencoder::RepresentationMatrix;
use cda_core::evalkit::{adapt_representations, Method};
use cda_core::gasearch::{FitnessMode, GaConfig};
use cda_core::harness::{median, read_csv, without_timing, HarnessError, Runner, ScenarioConfig};
use ndarray::Array2;

fn quick(methods: &str, extra: &str) -> ScenarioConfig {
    ScenarioConfig::parse(&format!(
        "name = quick
[source]
dataset = braille:12:0.1
[target]
dataset = braille:12:0.1
transform = rotate:90
[split]
train_per_class = 6
eval_per_class = 4
[autoencoder]
depth = 2
max_iters = 25
[ga]
population = 20
patience = 8
[run]
methods = {methods}
seeds = 0,1
{extra}"
    ))
    .unwrap()
}

#[test]
fn identical_domains_no_adapt_single_row_is_perfect() {
    let mut cfg = quick("no_adapt", "");
    cfg.target = cfg.source.clone();
    cfg.transductive = true;
    cfg.seeds = vec![3];
    let rec = Runner::new(cfg).unwrap().run_scenario().unwrap();
    assert_eq!(rec.reports.len(), 1);
    assert_eq!(rec.reports[0].accuracy, 1.0);
}

#[test]
fn one_row_per_method_and_seed_with_matching_hash() {
    let cfg = quick("no_adapt,joint,separate,concat,subspace", "");
    let rec = Runner::new(cfg.clone()).unwrap().run_scenario().unwrap();
    assert!(rec.is_success(), "{:?}", rec.failures);
    assert_eq!(rec.reports.len(), 10);
    assert!(rec
        .reports
        .iter()
        .all(|r| r.config_hash == cfg.config_hash() && r.scenario == "quick"));
    for m in Method::ALL {
        assert_eq!(rec.select(m, None).len(), 2);
    }
}

#[test]
fn rerun_hits_cache_and_reproduces_accuracies() {
    let cfg = quick("joint,separate", "");
    let mut runner = Runner::new(cfg).unwrap();
    let first = runner.run_scenario().unwrap();
    let second = runner.run_scenario().unwrap();
    assert!(first.cache_misses > 0);
    assert_eq!(second.cache_misses, 0);
    assert!(second.cache_hits > 0);
    let acc = |r: &cda_core::harness::RunRecord| r.reports.iter().map(|x| x.accuracy).collect::<Vec<_>>();
    assert_eq!(acc(&first), acc(&second));
}

#[test]
fn disk_cache_path_matches_fresh_training() {
    let dir = tempfile::tempdir().unwrap();
    let fresh = Runner::new(quick("separate", "")).unwrap().run_scenario().unwrap();
    let mut cfg = quick("separate", "");
    cfg.cache_dir = Some(dir.path().to_path_buf());
    Runner::new(cfg.clone()).unwrap().run_scenario().unwrap();
    let cached = Runner::new(cfg).unwrap().run_scenario().unwrap();
    assert_eq!(cached.cache_misses, 0);
    let acc = |r: &cda_core::harness::RunRecord| {
        r.reports
            .iter()
            .map(|x| (x.accuracy, x.adjustment_degree))
            .collect::<Vec<_>>()
    };
    assert_eq!(acc(&fresh), acc(&cached));
}

#[test]
fn csv_bodies_are_identical_apart_from_timing() {
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for run in 0..2 {
        let mut cfg = quick("no_adapt,separate,subspace", "");
        let out = dir.path().join(format!("r{run}.csv"));
        cfg.output = Some(out.clone());
        let rec = Runner::new(cfg).unwrap().run_scenario().unwrap();
        let text = std::fs::read_to_string(&out).unwrap();
        assert_eq!(read_csv(text.as_bytes()).unwrap(), rec.reports);
        texts.push(text);
    }
    assert_eq!(without_timing(&texts[0]), without_timing(&texts[1]));
}

#[test]
fn depth_sweep_emits_one_pair_per_depth_and_seed() {
    let mut runner = Runner::new(quick("separate", "")).unwrap();
    let rec = runner.depth_sweep(&[1, 2]).unwrap();
    for depth in [1, 2] {
        let sep = rec.select(Method::Separate, Some(depth));
        assert_eq!(sep.len(), 2);
        assert!(sep.iter().all(|r| r.adjustment_degree.is_some()));
        assert_eq!(rec.select(Method::Joint, Some(depth)).len(), 2);
    }
    assert!(runner.depth_sweep(&[]).is_err());
}

#[test]
fn single_depth_sweep_equals_scenario_at_that_depth() {
    let mut cfg = quick("joint,separate", "");
    cfg.depth = 1;
    let scenario = Runner::new(cfg.clone()).unwrap().run_scenario().unwrap();
    let sweep = Runner::new(cfg).unwrap().depth_sweep(&[1]).unwrap();
    let key = |r: &cda_core::harness::RunRecord| {
        let mut v: Vec<_> = r
            .reports
            .iter()
            .map(|x| (x.method.clone(), x.seed, x.accuracy.to_bits()))
            .collect();
        v.sort();
        v
    };
    assert_eq!(key(&scenario), key(&sweep));
}

#[test]
fn comparison_requires_core_methods() {
    let err = Runner::new(quick("joint,separate", ""))
        .unwrap()
        .method_comparison()
        .unwrap_err();
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn identical_domains_methods_agree_within_noise() {
    let mut cfg = quick("no_adapt,joint,separate,concat,subspace", "");
    cfg.target = cfg.source.clone();
    cfg.transductive = true;
    cfg.dae.max_iters = 150;
    let rec = Runner::new(cfg).unwrap().method_comparison().unwrap();
    let medians: Vec<f64> = Method::ALL
        .iter()
        .map(|&m| median(&rec.select(m, None).iter().map(|r| r.accuracy).collect::<Vec<_>>()).unwrap())
        .collect();
    let (lo, hi) = medians
        .iter()
        .fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
    assert!(hi - lo <= 0.1, "{medians:?}");
}

#[test]
fn permuted_synthetic_domains_favour_separate_over_joint() {
    let rec = Runner::new(quick("joint,separate,concat", ""))
        .unwrap()
        .method_comparison()
        .unwrap();
    let med = |m| median(&rec.select(m, None).iter().map(|r| r.accuracy).collect::<Vec<_>>()).unwrap();
    assert!(med(Method::Separate) >= med(Method::Joint));
}

#[test]
fn missing_data_is_a_data_error() {
    let mut cfg = quick("no_adapt", "");
    cfg.source.source = cda_core::harness::DataSource::Mnist { test: false };
    cfg.data_dir = "/nonexistent".into();
    std::env::remove_var(cda_core::harness::DATA_DIR_ENV);
    let err = Runner::new(cfg).unwrap_err();
    assert!(matches!(err, HarnessError::MissingData(_)));
    assert_eq!(err.exit_code(), 3);
}

/// One-hot codes over `width` units; the target moves the first `k`
/// units one step around a cycle. The source also holds an all-zero row
/// with a label no target row carries, so dropping a unit is never
/// rewarded and the planted mapping is the only perfect one.
fn planted_rotation(width: usize, k: usize) -> (RepresentationMatrix, RepresentationMatrix) {
    let per_class = 4;
    let n = width * per_class;
    let labels: Vec<u8> = (0..n).map(|i| (i % width) as u8).collect();
    let target_unit = |c: usize| if c < k { (c + 1) % k } else { c };
    let s = Array2::from_shape_fn(
        (n + 1, width),
        |(i, j)| if i > 0 && j == (i - 1) % width { 0.9 } else { 0.1 },
    );
    let mut source_labels = vec![width as u8];
    source_labels.extend(&labels);
    let t = Array2::from_shape_fn((n, width), |(i, j)| if j == target_unit(i % width) { 0.9 } else { 0.1 });
    (
        RepresentationMatrix::new(s, source_labels),
        RepresentationMatrix::new(t, labels),
    )
}

#[test]
fn planted_adjustment_degree_grows_with_permutation_size() {
    let mut degrees = Vec::new();
    for k in [0, 2, 4, 6, 8, 10] {
        let (s, t) = planted_rotation(10, k);
        let res = adapt_representations(
            &s,
            &t,
            &t,
            &GaConfig {
                seed: 1,
                ..GaConfig::default()
            },
            FitnessMode::Binary,
        )
        .unwrap();
        assert_eq!(res.best_fitness, 1.0);
        let d = res.generations.last().unwrap().adjustment_degree_of_best.unwrap();
        assert_eq!(d, 10.0 * k as f64);
        degrees.push(d);
    }
    assert!(degrees.windows(2).all(|w| w[0] <= w[1]));
}
