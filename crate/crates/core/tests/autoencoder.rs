#![allow(clippy::needless_range_loop)]

mod common;

use cda_core::autoencoder::{
    binarize, encode, layer_plan, reconstruction_error, train_dae_from, train_sdae, DaeConfig, DaeLayer, HiddenRule,
    RepresentationMatrix, SdaeModel,
};
use common::rng;
use ndarray::Array2;
use rand::Rng;

fn sig(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn random_layer(v: usize, h: usize, seed: u64) -> DaeLayer {
    DaeLayer::init_uniform(v, h, &mut rng(seed))
}

fn random_data(n: usize, d: usize, seed: u64) -> Array2<f64> {
    let mut r = rng(seed);
    Array2::from_shape_simple_fn((n, d), || r.random::<f64>())
}

/// Scalar forward pass of one layer for one sample.
fn scalar_encode(layer: &DaeLayer, x: &[f64]) -> Vec<f64> {
    (0..layer.hidden())
        .map(|i| sig((0..x.len()).map(|j| layer.w_enc[[i, j]] * x[j]).sum::<f64>() + layer.b_enc[i]))
        .collect()
}

fn scalar_decode(layer: &DaeLayer, h: &[f64]) -> Vec<f64> {
    (0..layer.visible())
        .map(|j| sig((0..h.len()).map(|i| layer.w_dec[[j, i]] * h[i]).sum::<f64>() + layer.b_dec[j]))
        .collect()
}

fn scalar_loss(layer: &DaeLayer, data: &[Vec<f64>]) -> f64 {
    data.iter()
        .map(|x| {
            let z = scalar_decode(layer, &scalar_encode(layer, x));
            z.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()
        })
        .sum::<f64>()
        / data.len() as f64
}

/// Plain-loop full-batch gradient descent without corruption.
fn scalar_train(mut layer: DaeLayer, data: &[Vec<f64>], cfg: &DaeConfig) -> (DaeLayer, Vec<f64>) {
    let (v, h, n) = (layer.visible(), layer.hidden(), data.len() as f64);
    let mut trace = Vec::new();
    let (mut best, mut stale) = (f64::INFINITY, 0);
    for t in 1..=cfg.max_iters {
        let mut gwe = vec![vec![0.0; v]; h];
        let mut gbe = vec![0.0; h];
        let mut gwd = vec![vec![0.0; h]; v];
        let mut gbd = vec![0.0; v];
        let mut loss = 0.0;
        for x in data {
            let hid = scalar_encode(&layer, x);
            let z = scalar_decode(&layer, &hid);
            let dout: Vec<f64> = (0..v)
                .map(|j| {
                    loss += (z[j] - x[j]).powi(2);
                    2.0 / n * (z[j] - x[j]) * z[j] * (1.0 - z[j])
                })
                .collect();
            for j in 0..v {
                gbd[j] += dout[j];
                for i in 0..h {
                    gwd[j][i] += dout[j] * hid[i];
                }
            }
            for i in 0..h {
                let back: f64 = (0..v).map(|j| dout[j] * layer.w_dec[[j, i]]).sum::<f64>() * hid[i] * (1.0 - hid[i]);
                gbe[i] += back;
                for j in 0..v {
                    gwe[i][j] += back * x[j];
                }
            }
        }
        loss /= n;
        trace.push(loss);
        if loss < best {
            best = loss;
            stale = 0;
        } else {
            stale += 1;
            if stale >= cfg.patience {
                break;
            }
        }
        let lr = cfg.epsilon0 * cfg.tau as f64 / (t.max(cfg.tau)) as f64;
        for i in 0..h {
            layer.b_enc[i] -= lr * gbe[i];
            for j in 0..v {
                layer.w_enc[[i, j]] -= lr * gwe[i][j];
            }
        }
        for j in 0..v {
            layer.b_dec[j] -= lr * gbd[j];
            for i in 0..h {
                layer.w_dec[[j, i]] -= lr * gwd[j][i];
            }
        }
    }
    (layer, trace)
}

#[test]
fn trainer_matches_scalar_reference_without_corruption() {
    for seed in 0..3 {
        let data = random_data(12, 6, seed);
        let rows = common::rows_of(&data);
        let init = random_layer(6, 4, seed + 100);
        let cfg = DaeConfig {
            hidden_size: 4,
            corruption: 0.0,
            max_iters: 60,
            tau: 10,
            epsilon0: 0.5,
            ..DaeConfig::default()
        };
        let trained = train_dae_from(init.clone(), data.view(), &cfg).unwrap();
        let (reference, trace) = scalar_train(init, &rows, &cfg);
        assert_eq!(trained.loss_trace.len(), trace.len());
        for (a, b) in trained.loss_trace.iter().zip(&trace) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
        let final_ref = scalar_loss(&reference, &rows);
        let final_lib = reconstruction_error(&trained.layer, data.view()).unwrap();
        assert!((final_ref - final_lib).abs() < 1e-9);
    }
}

#[test]
fn forward_pass_matches_scalar_loops() {
    let data = random_data(5, 7, 1);
    let cfgs = layer_plan(
        7,
        2,
        HiddenRule::TwoThirds,
        &DaeConfig {
            max_iters: 5,
            ..DaeConfig::default()
        },
        3,
    );
    let model = train_sdae(data.view(), &cfgs).unwrap();
    let out = encode(&model, data.view()).unwrap();
    for (i, x) in common::rows_of(&data).iter().enumerate() {
        let mut h = x.clone();
        for layer in model.layers() {
            h = scalar_encode(layer, &h);
        }
        for (k, v) in h.iter().enumerate() {
            assert!((out[[i, k]] - v).abs() < 1e-12);
        }
    }
}

#[test]
fn reconstruction_error_matches_scalar_loss() {
    let data = random_data(9, 5, 2);
    let layer = random_layer(5, 3, 3);
    let lib = reconstruction_error(&layer, data.view()).unwrap();
    assert!((lib - scalar_loss(&layer, &common::rows_of(&data))).abs() < 1e-12);
}

#[test]
fn loss_decreases_on_structured_data() {
    let mut r = rng(4);
    let data = Array2::from_shape_fn((40, 8), |(i, j)| {
        if (i + j) % 3 == 0 {
            0.9
        } else {
            0.1 + 0.01 * r.random::<f64>()
        }
    });
    let init = random_layer(8, 5, 5);
    let before = reconstruction_error(&init, data.view()).unwrap();
    let cfg = DaeConfig {
        hidden_size: 5,
        corruption: 0.3,
        max_iters: 300,
        ..DaeConfig::default()
    };
    let trained = train_dae_from(init, data.view(), &cfg).unwrap();
    assert!(reconstruction_error(&trained.layer, data.view()).unwrap() < before);
}

#[test]
fn two_thirds_plan_from_256_inputs() {
    let cfgs = layer_plan(256, 5, HiddenRule::TwoThirds, &DaeConfig::default(), 0);
    let sizes: Vec<usize> = cfgs.iter().map(|c| c.hidden_size).collect();
    assert_eq!(sizes, vec![170, 113, 75, 50, 33]);
}

#[test]
fn binarize_threshold_and_representation_concat() {
    let a = ndarray::array![[0.49, 0.5, 0.51], [0.0, 1.0, 0.2]];
    assert_eq!(binarize(&a), ndarray::array![[0u8, 1, 1], [0, 1, 0]]);
    let r = RepresentationMatrix::new(a.clone(), vec![1, 2]);
    let c = r.concat(&r);
    assert_eq!(c.width(), 6);
    assert_eq!(c.binary().row(1).to_vec(), vec![0, 1, 0, 0, 1, 0]);
}

#[test]
fn serialized_model_reproduces_encodings() {
    let data = random_data(6, 6, 7);
    let cfgs = layer_plan(
        6,
        2,
        HiddenRule::Half,
        &DaeConfig {
            max_iters: 10,
            ..DaeConfig::default()
        },
        1,
    );
    let model = train_sdae(data.view(), &cfgs).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.sdae");
    model.save(&path).unwrap();
    let back = SdaeModel::load(&path).unwrap();
    assert_eq!(
        encode(&model, data.view()).unwrap(),
        encode(&back, data.view()).unwrap()
    );
}
