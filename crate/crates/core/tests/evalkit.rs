mod common;

use cda_core::autoencoder::{HiddenRule, RepresentationMatrix};
use cda_core::dataio::{rotate_dataset, synth_braille, Dataset, ImageSample, Manifest};
use cda_core::evalkit::{
    accuracy, adapt_representations, joint_baseline, knn_classify, knn_train, no_adapt_baseline, pca, symmetric_eigen,
    FreshTrainer, Method, SdaeTrainer, StackPlan, SubspaceAlignment, TargetSplits,
};
use cda_core::gasearch::{FitnessContext, FitnessMode, GaConfig};
use cda_core::mapping::Genome;
use ndarray::{array, Array2};
use rand::seq::SliceRandom;
use rand::Rng;

#[test]
fn knn_examples() {
    let m = knn_train(array![[0.0, 0.0], [1.0, 1.0]], vec![0, 1], 1).unwrap();
    assert_eq!(knn_classify(&m, array![[0.0, 0.2]].view()).unwrap(), vec![0]);
    assert_eq!(knn_classify(&m, array![[0.5, 0.5]].view()).unwrap(), vec![0]);
    assert!(knn_train(Array2::zeros((0, 2)), vec![], 1).is_err());
    assert!(knn_classify(&m, array![[0.0, 0.0, 0.0]].view()).is_err());
}

#[test]
fn accuracy_examples() {
    assert_eq!(accuracy(&[1, 2, 3], &[1, 2, 3]).unwrap(), 1.0);
    assert_eq!(accuracy(&[1, 2], &[3, 4]).unwrap(), 0.0);
    assert_eq!(accuracy(&[1, 2, 3, 4], &[1, 2, 3, 0]).unwrap(), 0.75);
    assert!(accuracy(&[1], &[1, 2]).is_err());
}

#[test]
fn knn_agrees_with_naive_reference_and_is_permutation_invariant() {
    let mut r = common::rng(3);
    let x = Array2::from_shape_simple_fn((60, 7), || r.random::<f64>());
    let labels: Vec<u8> = (0..60).map(|_| r.random_range(0..5u8)).collect();
    let q = Array2::from_shape_simple_fn((40, 7), || r.random::<f64>());
    let model = knn_train(x.clone(), labels.clone(), 1).unwrap();
    let pred = knn_classify(&model, q.view()).unwrap();
    let rows = common::rows_of(&x);
    for (i, query) in common::rows_of(&q).iter().enumerate() {
        assert_eq!(pred[i], common::naive_nn_label(&rows, &labels, query));
    }
    // continuous random data has no distance ties
    let mut order: Vec<usize> = (0..60).collect();
    order.shuffle(&mut r);
    let xp = Array2::from_shape_fn((60, 7), |(i, j)| x[[order[i], j]]);
    let lp: Vec<u8> = order.iter().map(|&i| labels[i]).collect();
    let permuted = knn_train(xp, lp, 1).unwrap();
    assert_eq!(knn_classify(&permuted, q.view()).unwrap(), pred);
}

#[test]
fn eigensolver_matches_jacobi_oracle() {
    for seed in 0..5 {
        let mut r = common::rng(seed);
        let a = Array2::from_shape_simple_fn((20, 10), || r.random::<f64>());
        let centered = &a - &a.mean_axis(ndarray::Axis(0)).unwrap();
        let cov = centered.t().dot(&centered) / 19.0;
        let (vals, vecs) = symmetric_eigen(&cov);
        let (ovals, ovecs) = common::jacobi_eigen(&common::rows_of(&cov));
        for k in 0..10 {
            assert!((vals[k] - ovals[k]).abs() < 1e-8);
            // compare up to sign
            let dot: f64 = (0..10).map(|i| vecs[[i, k]] * ovecs[i][k]).sum();
            assert!((dot.abs() - 1.0).abs() < 1e-6);
        }
    }
}

#[test]
fn pca_bases_are_orthonormal() {
    let mut r = common::rng(8);
    let x = Array2::from_shape_simple_fn((50, 12), || r.random::<f64>());
    let p = pca(x.view(), 6).unwrap();
    let gram = p.basis.t().dot(&p.basis);
    let eye = Array2::<f64>::eye(6);
    assert!((&gram - &eye).iter().all(|v| v.abs() < 1e-10));
    let y = Array2::from_shape_simple_fn((50, 12), || r.random::<f64>());
    let sa = SubspaceAlignment::fit(x.view(), y.view(), 6).unwrap();
    assert_eq!(sa.alignment.dim(), (6, 6));
}

fn tiny_dataset(rows: &[[f64; 2]], labels: &[u8]) -> Dataset {
    let samples = rows
        .iter()
        .zip(labels)
        .map(|(r, &l)| {
            let mut px = vec![0.0; 256];
            px[0] = r[0];
            px[1] = r[1];
            ImageSample::new(px, l).unwrap()
        })
        .collect();
    Dataset::new(samples, "tiny", Manifest::default())
}

#[test]
fn no_adapt_reports_method_and_perfect_self_accuracy() {
    let ds = tiny_dataset(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], &[0, 1, 2]);
    let r = no_adapt_baseline(&ds, &TargetSplits::transductive(ds.clone())).unwrap();
    assert_eq!(r.method, Method::NoAdapt.name());
    assert_eq!(r.accuracy, 1.0);
}

#[test]
fn rotation_hurts_raw_pixel_transfer() {
    let ds = synth_braille(6, 0.05, 9);
    let same = no_adapt_baseline(&ds, &TargetSplits::transductive(ds.clone())).unwrap();
    let rot = no_adapt_baseline(&ds, &TargetSplits::transductive(rotate_dataset(&ds, 90).unwrap())).unwrap();
    assert!(rot.accuracy < same.accuracy);
}

fn quick_trainer(seed: u64) -> FreshTrainer {
    let mut plan = StackPlan::new(HiddenRule::TwoThirds, seed);
    plan.base.max_iters = 40;
    FreshTrainer::new(plan)
}

#[test]
fn joint_equals_identity_mapping_on_joint_network() {
    let source = synth_braille(4, 0.1, 1);
    let target = TargetSplits::transductive(rotate_dataset(&synth_braille(4, 0.1, 2), 180).unwrap());
    let trainer = quick_trainer(5);
    let report = joint_baseline(&source, &target, 2, &trainer).unwrap();
    assert_eq!(report.depth, 2);

    let model = trainer.train(&source.union(&target.search), 2).unwrap();
    let s = RepresentationMatrix::from_model(&model, source.to_matrix().view(), source.labels()).unwrap();
    let t = RepresentationMatrix::from_model(&model, target.report.to_matrix().view(), target.report.labels()).unwrap();
    let ctx = FitnessContext::transductive(
        s.binary().clone(),
        s.labels().to_vec(),
        t.binary().clone(),
        t.labels().to_vec(),
    )
    .unwrap();
    assert_eq!(ctx.score(&Genome::identity(t.width(), s.width())), report.accuracy);
}

#[test]
fn identical_domains_joint_matches_self_accuracy() {
    let ds = synth_braille(4, 0.1, 3);
    let trainer = quick_trainer(2);
    let report = joint_baseline(&ds, &TargetSplits::transductive(ds.clone()), 1, &trainer).unwrap();
    let model = trainer.train(&ds.union(&ds), 1).unwrap();
    let r = RepresentationMatrix::from_model(&model, ds.to_matrix().view(), ds.labels()).unwrap();
    let ctx = FitnessContext::transductive(
        r.binary().clone(),
        r.labels().to_vec(),
        r.binary().clone(),
        r.labels().to_vec(),
    )
    .unwrap();
    assert_eq!(report.accuracy, ctx.score(&Genome::identity(r.width(), r.width())));
}

#[test]
fn planted_representations_reach_perfect_report_accuracy() {
    let inst = common::planted(10, 20, 8, 7);
    let (s, t) = inst.representations();
    let n = t.labels().len();
    let pick = |idx: Vec<usize>| {
        let c = Array2::from_shape_fn((idx.len(), t.width()), |(i, j)| t.continuous()[[idx[i], j]]);
        RepresentationMatrix::new(c, idx.iter().map(|&i| t.labels()[i]).collect())
    };
    let search = pick((0..n).filter(|i| (i / 10) % 2 == 0).collect());
    let report = pick((0..n).filter(|i| (i / 10) % 2 == 1).collect());
    let res = adapt_representations(
        &s,
        &search,
        &report,
        &GaConfig {
            seed: 7,
            ..GaConfig::default()
        },
        FitnessMode::Binary,
    )
    .unwrap();
    assert_eq!(res.report_accuracy, 1.0);
}

#[test]
fn report_split_is_disjoint_from_search_split() {
    use cda_core::dataio::{subsample_balanced_indices, SplitSpec};
    let ds = synth_braille(12, 0.1, 4);
    let (search, report) = subsample_balanced_indices(&ds.labels(), SplitSpec::new(5, 4, 3)).unwrap();
    assert!(search.iter().all(|i| !report.contains(i)));
    assert_eq!(search.len(), 50);
    assert_eq!(report.len(), 40);
}
