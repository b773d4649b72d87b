use ndarray::{Array2, ArrayView2};
use rand::Rng;

use super::{AutoencoderError, DaeLayer, Result, SdaeModel};
use crate::seeds::{derive_seed, rng};

/// `ε₀·τ / max(t, τ)`: constant for the first `τ` iterations, then `∝ 1/t`.
pub fn lr_schedule(t: usize, epsilon0: f64, tau: usize) -> f64 {
    debug_assert!(t >= 1 && tau >= 1);
    epsilon0 * tau as f64 / t.max(tau) as f64
}

/// Per-layer training hyper-parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DaeConfig {
    pub hidden_size: usize,
    pub epsilon0: f64,
    pub tau: usize,
    /// Probability of zeroing each input component, fresh mask per iteration.
    pub corruption: f64,
    pub max_iters: usize,
    pub patience: usize,
    pub seed: u64,
}

impl DaeConfig {
    pub fn new(hidden_size: usize) -> Self {
        Self {
            hidden_size,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.hidden_size == 0 {
            return Err(AutoencoderError::InvalidConfig("hidden_size must be >= 1".into()));
        }
        if !(self.epsilon0 > 0.0 && self.epsilon0.is_finite()) {
            return Err(AutoencoderError::InvalidConfig(format!(
                "epsilon0 {} must be > 0",
                self.epsilon0
            )));
        }
        if self.tau == 0 {
            return Err(AutoencoderError::InvalidConfig("tau must be >= 1".into()));
        }
        if !(0.0..1.0).contains(&self.corruption) {
            return Err(AutoencoderError::InvalidConfig(format!(
                "corruption {} outside [0, 1)",
                self.corruption
            )));
        }
        Ok(())
    }
}

impl Default for DaeConfig {
    fn default() -> Self {
        Self {
            hidden_size: 1,
            epsilon0: 1.0,
            tau: 20,
            corruption: 0.3,
            max_iters: 500,
            patience: 20,
            seed: 0,
        }
    }
}

/// Hidden-size rules relative to the previous layer width `L` (floored, at least 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HiddenRule {
    Full,
    TwoThirds,
    Half,
    Fifth,
}

impl HiddenRule {
    pub const ALL: [HiddenRule; 4] = [
        HiddenRule::Full,
        HiddenRule::TwoThirds,
        HiddenRule::Half,
        HiddenRule::Fifth,
    ];

    pub fn apply(self, previous: usize) -> usize {
        let h = match self {
            HiddenRule::Full => previous,
            HiddenRule::TwoThirds => 2 * previous / 3,
            HiddenRule::Half => previous / 2,
            HiddenRule::Fifth => previous / 5,
        };
        h.max(1)
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "L" | "full" => Some(HiddenRule::Full),
            "2L/3" | "two_thirds" => Some(HiddenRule::TwoThirds),
            "L/2" | "half" => Some(HiddenRule::Half),
            "L/5" | "fifth" => Some(HiddenRule::Fifth),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            HiddenRule::Full => "L",
            HiddenRule::TwoThirds => "2L/3",
            HiddenRule::Half => "L/2",
            HiddenRule::Fifth => "L/5",
        }
    }
}

/// Layer configs for a `depth`-layer stack sized by `rule` from `input`.
/// Layer `k` gets seed `derive_seed(seed, "layer{k}")`, so a shallower
/// plan is always a prefix of a deeper one.
pub fn layer_plan(input: usize, depth: usize, rule: HiddenRule, base: &DaeConfig, seed: u64) -> Vec<DaeConfig> {
    let mut width = input;
    (0..depth)
        .map(|k| {
            width = rule.apply(width);
            DaeConfig {
                hidden_size: width,
                seed: derive_seed(seed, &format!("layer{k}")),
                ..*base
            }
        })
        .collect()
}

/// Masking noise: each component zeroed independently with probability `level`.
pub fn corrupt<R: Rng + ?Sized>(x: ArrayView2<'_, f64>, level: f64, rng: &mut R) -> Array2<f64> {
    x.mapv(|v| if rng.random::<f64>() < level { 0.0 } else { v })
}

/// A trained layer plus its per-iteration (pre-update) training loss.
#[derive(Debug, Clone)]
pub struct TrainedLayer {
    pub layer: DaeLayer,
    pub loss_trace: Vec<f64>,
}

fn check_data(data: ArrayView2<'_, f64>) -> Result<()> {
    if data.nrows() == 0 || data.ncols() == 0 {
        return Err(AutoencoderError::EmptyData);
    }
    Ok(())
}

/// Trains from a uniform initialization drawn from `config.seed`.
pub fn train_dae(data: ArrayView2<'_, f64>, config: &DaeConfig) -> Result<DaeLayer> {
    check_data(data)?;
    config.validate()?;
    let mut r = rng(config.seed);
    let init = DaeLayer::init_uniform(data.ncols(), config.hidden_size, &mut r);
    Ok(train_impl(init, data, config, &mut r, false)?.layer)
}

/// Trains starting from the given parameters. Corruption masks are drawn
/// from `config.seed`.
pub fn train_dae_from(init: DaeLayer, data: ArrayView2<'_, f64>, config: &DaeConfig) -> Result<TrainedLayer> {
    check_data(data)?;
    config.validate()?;
    if init.visible() != data.ncols() {
        return Err(AutoencoderError::DimensionMismatch {
            expected: init.visible(),
            found: data.ncols(),
        });
    }
    let mut r = rng(derive_seed(config.seed, "mask"));
    train_impl(init, data, config, &mut r, false)
}

pub(crate) fn train_impl<R: Rng>(
    mut layer: DaeLayer,
    data: ArrayView2<'_, f64>,
    config: &DaeConfig,
    rng: &mut R,
    always_mask: bool,
) -> Result<TrainedLayer> {
    let mut trace = Vec::with_capacity(config.max_iters);
    let mut best = f64::INFINITY;
    let mut stale = 0usize;
    for t in 1..=config.max_iters {
        let masked;
        let input = if config.corruption > 0.0 || always_mask {
            masked = corrupt(data, config.corruption, rng);
            masked.view()
        } else {
            data
        };
        let grads = layer.gradients(input, data);
        if !grads.loss.is_finite() {
            return Err(AutoencoderError::NonFiniteLoss { iteration: t });
        }
        trace.push(grads.loss);
        if grads.loss < best {
            best = grads.loss;
            stale = 0;
        } else {
            stale += 1;
            if stale >= config.patience {
                break;
            }
        }
        layer.step(&grads, lr_schedule(t, config.epsilon0, config.tau));
        if !layer.is_finite() {
            return Err(AutoencoderError::NonFiniteLoss { iteration: t });
        }
    }
    Ok(TrainedLayer {
        layer,
        loss_trace: trace,
    })
}

/// Greedy layer-wise training; each layer sees the clean activations of the one below.
pub fn train_sdae(data: ArrayView2<'_, f64>, layer_configs: &[DaeConfig]) -> Result<SdaeModel> {
    if layer_configs.is_empty() {
        return Err(AutoencoderError::InvalidConfig(
            "at least one layer config required".into(),
        ));
    }
    let mut layers = Vec::with_capacity(layer_configs.len());
    let mut current: Option<Array2<f64>> = None;
    for (index, cfg) in layer_configs.iter().enumerate() {
        let input = current.as_ref().map_or(data, |c| c.view());
        let layer = train_dae(input, cfg).map_err(|e| AutoencoderError::Layer {
            index,
            source: Box::new(e),
        })?;
        current = Some(layer.encode(input));
        layers.push(layer);
    }
    SdaeModel::new(layers)
}
