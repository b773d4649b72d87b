//! Flat binary model format.
//!
//! ```text
//! tag        8 bytes  "CDASDAE\0"
//! version    u32 LE
//! layers     u32 LE   (L)
//! sizes      (L+1) × u64 LE, input width first
//! per layer  w_enc (h×v), b_enc (h), w_dec (v×h), b_dec (v), row-major f64 LE
//! ```

use std::path::Path;

use ndarray::{Array1, Array2};

use super::{AutoencoderError, DaeLayer, Result, SdaeModel};

pub const FORMAT_TAG: &[u8; 8] = b"CDASDAE\0";
pub const FORMAT_VERSION: u32 = 1;

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| AutoencoderError::Format(format!("truncated at byte {} (need {n} more)", self.pos)))?;
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn floats(&mut self, n: usize) -> Result<Vec<f64>> {
        let raw = self.take(
            n.checked_mul(8)
                .ok_or_else(|| AutoencoderError::Format("size overflow".into()))?,
        )?;
        Ok(raw
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect())
    }
}

impl SdaeModel {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(FORMAT_TAG);
        out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        out.extend_from_slice(&(self.layers().len() as u32).to_le_bytes());
        for s in self.layer_sizes() {
            out.extend_from_slice(&(s as u64).to_le_bytes());
        }
        for l in self.layers() {
            for v in l.w_enc.iter().chain(&l.b_enc).chain(&l.w_dec).chain(&l.b_dec) {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(8)? != FORMAT_TAG {
            return Err(AutoencoderError::Format("bad format tag".into()));
        }
        let version = r.u32()?;
        if version != FORMAT_VERSION {
            return Err(AutoencoderError::Format(format!("unsupported version {version}")));
        }
        let n_layers = r.u32()? as usize;
        if n_layers == 0 {
            return Err(AutoencoderError::Format("zero layers".into()));
        }
        let sizes = (0..=n_layers)
            .map(|_| r.u64().map(|s| s as usize))
            .collect::<Result<Vec<_>>>()?;
        let mut layers = Vec::with_capacity(n_layers);
        for w in sizes.windows(2) {
            let (v, h) = (w[0], w[1]);
            let shape_err = |e: ndarray::ShapeError| AutoencoderError::Format(e.to_string());
            let layer = DaeLayer {
                w_enc: Array2::from_shape_vec((h, v), r.floats(h * v)?).map_err(shape_err)?,
                b_enc: Array1::from(r.floats(h)?),
                w_dec: Array2::from_shape_vec((v, h), r.floats(v * h)?).map_err(shape_err)?,
                b_dec: Array1::from(r.floats(v)?),
            };
            layers.push(layer);
        }
        if r.pos != bytes.len() {
            return Err(AutoencoderError::Format(format!(
                "{} trailing bytes",
                bytes.len() - r.pos
            )));
        }
        SdaeModel::new(layers)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_bytes(&std::fs::read(path)?)
    }
}
