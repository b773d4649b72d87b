use ndarray::ArrayView2;

use super::Result;
use crate::autoencoder::{
    grid_search_layer, layer_plan, train_dae, DaeConfig, DaeLayer, GridSpec, HiddenRule, SdaeModel,
};
use crate::dataio::Dataset;

/// How each layer of a stack is configured.
#[derive(Debug, Clone, PartialEq)]
pub struct StackPlan {
    pub rule: HiddenRule,
    pub base: DaeConfig,
    /// When set, each layer's hidden size, learning rate and corruption
    /// come from a grid search instead of `rule` and `base`.
    pub grid: Option<GridSpec>,
    pub seed: u64,
}

impl StackPlan {
    pub fn new(rule: HiddenRule, seed: u64) -> Self {
        Self {
            rule,
            base: DaeConfig::default(),
            grid: None,
            seed,
        }
    }

    /// Config for layer `k` given the width of its input.
    pub fn layer_config(&self, k: usize, visible: usize, input: ArrayView2<'_, f64>) -> Result<DaeConfig> {
        let planned = layer_plan(visible, k + 1, HiddenRule::Full, &self.base, self.seed)
            .pop()
            .expect("k+1 layers");
        match &self.grid {
            Some(grid) => Ok(grid_search_layer(input, grid, &planned)?.best),
            None => Ok(DaeConfig {
                hidden_size: self.rule.apply(visible),
                ..planned
            }),
        }
    }

    /// Stable text identifying everything that influences layer `k`.
    pub fn layer_key(&self, k: usize) -> String {
        let b = &self.base;
        let grid = match &self.grid {
            Some(g) => format!(
                "grid[{}|{:?}|{:?}]",
                g.hidden.iter().map(|h| h.name()).collect::<Vec<_>>().join(","),
                g.learning_rates,
                g.corruptions
            ),
            None => format!("rule={}", self.rule.name()),
        };
        format!(
            "layer={k};{grid};eps0={:?};tau={};corr={:?};iters={};pat={};seed={}",
            b.epsilon0, b.tau, b.corruption, b.max_iters, b.patience, self.seed
        )
    }

    pub fn train_layer(&self, k: usize, input: ArrayView2<'_, f64>) -> Result<DaeLayer> {
        let cfg = self.layer_config(k, input.ncols(), input)?;
        Ok(train_dae(input, &cfg)?)
    }
}

/// Produces a stacked autoencoder for a dataset.
pub trait SdaeTrainer: Sync {
    fn train(&self, data: &Dataset, depth: usize) -> Result<SdaeModel>;
}

/// Trains every layer from scratch.
#[derive(Debug, Clone)]
pub struct FreshTrainer {
    pub plan: StackPlan,
}

impl FreshTrainer {
    pub fn new(plan: StackPlan) -> Self {
        Self { plan }
    }
}

impl SdaeTrainer for FreshTrainer {
    fn train(&self, data: &Dataset, depth: usize) -> Result<SdaeModel> {
        if depth == 0 {
            return Err(super::EvalError::InvalidConfig("depth must be at least 1".into()));
        }
        let mut current = data.to_matrix();
        let mut layers = Vec::with_capacity(depth);
        for k in 0..depth {
            let layer = self.plan.train_layer(k, current.view())?;
            current = layer.encode(current.view());
            layers.push(layer);
        }
        Ok(SdaeModel::new(layers)?)
    }
}
