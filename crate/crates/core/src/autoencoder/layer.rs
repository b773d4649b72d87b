use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand::Rng;

use super::{AutoencoderError, Result};

#[inline]
pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// One de-noising auto-encoder: encoder `hidden × visible`, decoder
/// `visible × hidden`, each with its own bias.
#[derive(Debug, Clone, PartialEq)]
pub struct DaeLayer {
    pub w_enc: Array2<f64>,
    pub b_enc: Array1<f64>,
    pub w_dec: Array2<f64>,
    pub b_dec: Array1<f64>,
}

/// Partial derivatives of the mean squared reconstruction loss.
#[derive(Debug, Clone)]
pub struct DaeGradients {
    pub loss: f64,
    pub w_enc: Array2<f64>,
    pub b_enc: Array1<f64>,
    pub w_dec: Array2<f64>,
    pub b_dec: Array1<f64>,
}

impl DaeLayer {
    pub fn zeros(visible: usize, hidden: usize) -> Self {
        Self {
            w_enc: Array2::zeros((hidden, visible)),
            b_enc: Array1::zeros(hidden),
            w_dec: Array2::zeros((visible, hidden)),
            b_dec: Array1::zeros(visible),
        }
    }

    /// Weights uniform in `±1/√fan_in`, biases zero.
    pub fn init_uniform<R: Rng + ?Sized>(visible: usize, hidden: usize, rng: &mut R) -> Self {
        let enc = 1.0 / (visible as f64).sqrt();
        let dec = 1.0 / (hidden as f64).sqrt();
        Self {
            w_enc: Array2::from_shape_simple_fn((hidden, visible), || rng.random_range(-enc..=enc)),
            b_enc: Array1::zeros(hidden),
            w_dec: Array2::from_shape_simple_fn((visible, hidden), || rng.random_range(-dec..=dec)),
            b_dec: Array1::zeros(visible),
        }
    }

    /// Checks mutual shape consistency and finiteness.
    pub fn validate(&self) -> Result<()> {
        let (h, v) = self.w_enc.dim();
        let ok = self.b_enc.len() == h && self.w_dec.dim() == (v, h) && self.b_dec.len() == v;
        if !ok {
            return Err(AutoencoderError::Format(format!(
                "inconsistent layer shapes: w_enc {:?}, b_enc {}, w_dec {:?}, b_dec {}",
                self.w_enc.dim(),
                self.b_enc.len(),
                self.w_dec.dim(),
                self.b_dec.len()
            )));
        }
        let finite = self
            .w_enc
            .iter()
            .chain(&self.b_enc)
            .chain(&self.w_dec)
            .chain(&self.b_dec)
            .all(|v| v.is_finite());
        if !finite {
            return Err(AutoencoderError::Format("non-finite parameter".into()));
        }
        Ok(())
    }

    pub fn visible(&self) -> usize {
        self.w_enc.ncols()
    }

    pub fn hidden(&self) -> usize {
        self.w_enc.nrows()
    }

    /// `σ(X·W_encᵀ + b_enc)`, one row per sample.
    pub fn encode(&self, x: ArrayView2<'_, f64>) -> Array2<f64> {
        let mut h = x.dot(&self.w_enc.t());
        h += &self.b_enc;
        h.mapv_inplace(sigmoid);
        h
    }

    /// `σ(H·W_decᵀ + b_dec)`.
    pub fn decode(&self, h: ArrayView2<'_, f64>) -> Array2<f64> {
        let mut z = h.dot(&self.w_dec.t());
        z += &self.b_dec;
        z.mapv_inplace(sigmoid);
        z
    }

    /// Mean over rows of `‖clean − decode(encode(input))‖²`.
    pub fn loss(&self, input: ArrayView2<'_, f64>, clean: ArrayView2<'_, f64>) -> f64 {
        let z = self.decode(self.encode(input).view());
        let n = clean.nrows() as f64;
        (&z - &clean).mapv(|d| d * d).sum() / n
    }

    /// Loss and analytic gradients for `input` (possibly corrupted) against `clean`.
    pub fn gradients(&self, input: ArrayView2<'_, f64>, clean: ArrayView2<'_, f64>) -> DaeGradients {
        let n = clean.nrows() as f64;
        let h = self.encode(input);
        let z = self.decode(h.view());
        let diff = &z - &clean;
        let loss = diff.mapv(|d| d * d).sum() / n;

        // dL/d(pre-activation) at the output
        let delta_out = ndarray::Zip::from(&diff)
            .and(&z)
            .map_collect(|&d, &zv| 2.0 / n * d * zv * (1.0 - zv));
        let w_dec = delta_out.t().dot(&h);
        let b_dec = delta_out.sum_axis(Axis(0));

        let mut delta_hidden = delta_out.dot(&self.w_dec);
        ndarray::Zip::from(&mut delta_hidden)
            .and(&h)
            .for_each(|dh, &hv| *dh *= hv * (1.0 - hv));
        let w_enc = delta_hidden.t().dot(&input);
        let b_enc = delta_hidden.sum_axis(Axis(0));

        DaeGradients {
            loss,
            w_enc,
            b_enc,
            w_dec,
            b_dec,
        }
    }

    pub(crate) fn step(&mut self, grads: &DaeGradients, lr: f64) {
        self.w_enc.scaled_add(-lr, &grads.w_enc);
        self.b_enc.scaled_add(-lr, &grads.b_enc);
        self.w_dec.scaled_add(-lr, &grads.w_dec);
        self.b_dec.scaled_add(-lr, &grads.b_dec);
    }

    pub(crate) fn is_finite(&self) -> bool {
        self.w_enc
            .iter()
            .chain(&self.b_enc)
            .chain(&self.w_dec)
            .chain(&self.b_dec)
            .all(|v| v.is_finite())
    }
}
