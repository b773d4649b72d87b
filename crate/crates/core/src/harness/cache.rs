//! Layer-level model cache. Each layer is keyed by the hash of its input
//! data and every setting that influenced it and the layers below, so a
//! deep stack reuses the layers of any shallower stack trained earlier.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use sha2::{Digest, Sha256};

use crate::autoencoder::{DaeLayer, SdaeModel};
use crate::dataio::{matrix_fingerprint, Dataset};
use crate::evalkit::{EvalError, SdaeTrainer, StackPlan};

#[derive(Debug)]
pub struct CachedTrainer {
    plan: StackPlan,
    dir: Option<PathBuf>,
    memory: Mutex<HashMap<String, DaeLayer>>,
    hits: AtomicUsize,
    misses: AtomicUsize,
}

impl CachedTrainer {
    pub fn new(plan: StackPlan, dir: Option<PathBuf>) -> Self {
        Self {
            plan,
            dir,
            memory: Mutex::new(HashMap::new()),
            hits: AtomicUsize::new(0),
            misses: AtomicUsize::new(0),
        }
    }

    pub fn plan(&self) -> &StackPlan {
        &self.plan
    }

    /// Layers served from memory or disk.
    pub fn hits(&self) -> usize {
        self.hits.load(Ordering::Relaxed)
    }

    /// Layers trained.
    pub fn misses(&self) -> usize {
        self.misses.load(Ordering::Relaxed)
    }

    fn path_for(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{key}.sdae")))
    }

    fn lookup(&self, key: &str) -> Option<DaeLayer> {
        if let Some(layer) = self.memory.lock().expect("cache lock").get(key) {
            return Some(layer.clone());
        }
        let path = self.path_for(key)?;
        let model = SdaeModel::load(&path).ok()?;
        let layer = model.layers().first()?.clone();
        self.memory
            .lock()
            .expect("cache lock")
            .insert(key.to_string(), layer.clone());
        Some(layer)
    }

    fn store(&self, key: &str, layer: &DaeLayer) -> Result<(), EvalError> {
        self.memory
            .lock()
            .expect("cache lock")
            .insert(key.to_string(), layer.clone());
        if let Some(path) = self.path_for(key) {
            if let Some(parent) = path.parent() {
                std::fs::create_dir_all(parent).map_err(crate::autoencoder::AutoencoderError::Io)?;
            }
            SdaeModel::new(vec![layer.clone()])?.save(&path)?;
        }
        Ok(())
    }
}

fn chain_key(previous: &str, layer_key: &str) -> String {
    let mut h = Sha256::new();
    h.update(previous.as_bytes());
    h.update(b"\n");
    h.update(layer_key.as_bytes());
    hex::encode(&h.finalize()[..16])
}

impl SdaeTrainer for CachedTrainer {
    fn train(&self, data: &Dataset, depth: usize) -> Result<SdaeModel, EvalError> {
        if depth == 0 {
            return Err(EvalError::InvalidConfig("depth must be at least 1".into()));
        }
        let mut current = data.to_matrix();
        let mut key = matrix_fingerprint(&current, &[]);
        let mut layers = Vec::with_capacity(depth);
        for k in 0..depth {
            key = chain_key(&key, &self.plan.layer_key(k));
            let layer = match self.lookup(&key) {
                Some(layer) if layer.visible() == current.ncols() => {
                    self.hits.fetch_add(1, Ordering::Relaxed);
                    layer
                }
                _ => {
                    self.misses.fetch_add(1, Ordering::Relaxed);
                    let layer = self.plan.train_layer(k, current.view())?;
                    self.store(&key, &layer)?;
                    layer
                }
            };
            current = layer.encode(current.view());
            layers.push(layer);
        }
        Ok(SdaeModel::new(layers)?)
    }
}
