use super::{DataError, Dataset, ImageSample, Result, SIDE};

/// Source coordinate for output index `i` under half-pixel-centre
/// alignment, clamped to the valid range.
fn source_coord(i: usize, in_len: usize, out_len: usize) -> f64 {
    let scale = in_len as f64 / out_len as f64;
    ((i as f64 + 0.5) * scale - 0.5).clamp(0.0, (in_len - 1) as f64)
}

/// Bilinear resampling of a row-major `rows × cols` grid to 16×16.
///
/// Pixel centres are aligned (`src = (dst + 0.5)·scale − 0.5`), so a 16×16
/// input is returned unchanged and a 1×1 input is broadcast.
pub fn resize_16(grid: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    assert!(rows >= 1 && cols >= 1, "resize_16 needs a non-empty grid");
    assert_eq!(grid.len(), rows * cols, "grid length does not match dims");
    let mut out = Vec::with_capacity(SIDE * SIDE);
    for r in 0..SIDE {
        let y = source_coord(r, rows, SIDE);
        let y0 = y.floor() as usize;
        let y1 = (y0 + 1).min(rows - 1);
        let fy = y - y0 as f64;
        for c in 0..SIDE {
            let x = source_coord(c, cols, SIDE);
            let x0 = x.floor() as usize;
            let x1 = (x0 + 1).min(cols - 1);
            let fx = x - x0 as f64;
            let top = grid[y0 * cols + x0] * (1.0 - fx) + grid[y0 * cols + x1] * fx;
            let bottom = grid[y1 * cols + x0] * (1.0 - fx) + grid[y1 * cols + x1] * fx;
            out.push((top * (1.0 - fy) + bottom * fy).clamp(0.0, 1.0));
        }
    }
    out
}

/// Clockwise right-angle rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rotation {
    Cw90,
    Cw180,
    Cw270,
}

impl Rotation {
    pub fn from_degrees(angle: i32) -> Result<Self> {
        match angle {
            90 => Ok(Rotation::Cw90),
            180 => Ok(Rotation::Cw180),
            270 => Ok(Rotation::Cw270),
            other => Err(DataError::UnsupportedAngle(other)),
        }
    }

    pub fn degrees(self) -> i32 {
        match self {
            Rotation::Cw90 => 90,
            Rotation::Cw180 => 180,
            Rotation::Cw270 => 270,
        }
    }
}

/// Exact pixel permutation of a 16×16 image.
pub fn rotate_pixels(pixels: &[f64], rotation: Rotation) -> Vec<f64> {
    let last = SIDE - 1;
    let mut out = vec![0.0; SIDE * SIDE];
    for r in 0..SIDE {
        for c in 0..SIDE {
            let (nr, nc) = match rotation {
                Rotation::Cw90 => (c, last - r),
                Rotation::Cw180 => (last - r, last - c),
                Rotation::Cw270 => (last - c, r),
            };
            out[nr * SIDE + nc] = pixels[r * SIDE + c];
        }
    }
    out
}

pub fn rotate_dataset(ds: &Dataset, angle_degrees: i32) -> Result<Dataset> {
    let rotation = Rotation::from_degrees(angle_degrees)?;
    let samples = ds
        .samples()
        .iter()
        .map(|s| ImageSample::new(rotate_pixels(s.pixels(), rotation), s.label()))
        .collect::<Result<Vec<_>>>()?;
    let mut manifest = ds.manifest().clone();
    manifest.push("transform", format!("rotate:{angle_degrees}"));
    Ok(Dataset::new(
        samples,
        format!("{}-rot{angle_degrees}", ds.domain_tag()),
        manifest,
    ))
}
