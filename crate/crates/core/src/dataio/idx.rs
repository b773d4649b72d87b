//! IDX container (MNIST layout): big-endian magic, big-endian dimensions,
//! then raw unsigned bytes.

use std::path::Path;

use super::image::resize_16;
use super::{DataError, Dataset, ImageSample, Manifest, Result, SIDE};

const IMAGE_MAGIC: u32 = 2051;
const LABEL_MAGIC: u32 = 2049;

fn read_u32(bytes: &[u8], offset: usize) -> Result<u32> {
    bytes
        .get(offset..offset + 4)
        .map(|b| u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
        .ok_or(DataError::TruncatedFile {
            needed: offset + 4,
            available: bytes.len(),
        })
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|source| DataError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Parses in-memory IDX image and label buffers. Images that are not 16×16
/// are bilinearly resized.
pub fn parse_idx(images: &[u8], labels: &[u8]) -> Result<Vec<ImageSample>> {
    let magic = read_u32(images, 0)?;
    if magic != IMAGE_MAGIC {
        return Err(DataError::MagicMismatch {
            expected: IMAGE_MAGIC,
            found: magic,
        });
    }
    let magic = read_u32(labels, 0)?;
    if magic != LABEL_MAGIC {
        return Err(DataError::MagicMismatch {
            expected: LABEL_MAGIC,
            found: magic,
        });
    }
    let n_images = read_u32(images, 4)? as usize;
    let rows = read_u32(images, 8)? as usize;
    let cols = read_u32(images, 12)? as usize;
    let n_labels = read_u32(labels, 4)? as usize;
    if n_images != n_labels {
        return Err(DataError::CountMismatch {
            images: n_images,
            labels: n_labels,
        });
    }
    if rows == 0 || cols == 0 {
        return Err(DataError::InvalidSample(format!("image dims {rows}x{cols}")));
    }
    let per_image = rows * cols;
    let needed = 16 + n_images * per_image;
    if images.len() < needed {
        return Err(DataError::TruncatedFile {
            needed,
            available: images.len(),
        });
    }
    if labels.len() < 8 + n_labels {
        return Err(DataError::TruncatedFile {
            needed: 8 + n_labels,
            available: labels.len(),
        });
    }

    let mut samples = Vec::with_capacity(n_images);
    for i in 0..n_images {
        let raw = &images[16 + i * per_image..16 + (i + 1) * per_image];
        let grid: Vec<f64> = raw.iter().map(|&b| f64::from(b) / 255.0).collect();
        let pixels = if rows == SIDE && cols == SIDE {
            grid
        } else {
            resize_16(&grid, rows, cols)
        };
        let label = labels[8 + i];
        samples.push(ImageSample::new(pixels, label)?);
    }
    Ok(samples)
}

pub fn load_idx(image_path: &Path, label_path: &Path) -> Result<Dataset> {
    let images = read_file(image_path)?;
    let labels = read_file(label_path)?;
    let samples = parse_idx(&images, &labels)?;
    let mut manifest = Manifest::with("images", image_path.display().to_string());
    manifest.push("labels", label_path.display().to_string());
    let tag = image_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "idx".into());
    Ok(Dataset::new(samples, tag, manifest))
}

/// Writes a dataset as a 16×16 IDX image/label pair. Intensities are
/// quantized back to bytes.
pub fn write_idx(ds: &Dataset, image_path: &Path, label_path: &Path) -> Result<()> {
    let n = ds.len() as u32;
    let mut img = Vec::with_capacity(16 + ds.len() * SIDE * SIDE);
    img.extend_from_slice(&IMAGE_MAGIC.to_be_bytes());
    img.extend_from_slice(&n.to_be_bytes());
    img.extend_from_slice(&(SIDE as u32).to_be_bytes());
    img.extend_from_slice(&(SIDE as u32).to_be_bytes());
    let mut lab = Vec::with_capacity(8 + ds.len());
    lab.extend_from_slice(&LABEL_MAGIC.to_be_bytes());
    lab.extend_from_slice(&n.to_be_bytes());
    for s in ds.samples() {
        img.extend(s.pixels().iter().map(|p| (p * 255.0).round() as u8));
        lab.push(s.label());
    }
    for (path, bytes) in [(image_path, img), (label_path, lab)] {
        std::fs::write(path, bytes).map_err(|source| DataError::Io {
            path: path.to_path_buf(),
            source,
        })?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn image_file(n: u32, rows: u32, cols: u32, fill: impl Fn(usize) -> u8) -> Vec<u8> {
        let mut b = vec![0, 0, 8, 3];
        b.extend_from_slice(&n.to_be_bytes());
        b.extend_from_slice(&rows.to_be_bytes());
        b.extend_from_slice(&cols.to_be_bytes());
        b.extend((0..(n * rows * cols) as usize).map(fill));
        b
    }

    fn label_file(labels: &[u8]) -> Vec<u8> {
        let mut b = vec![0, 0, 8, 1];
        b.extend_from_slice(&(labels.len() as u32).to_be_bytes());
        b.extend_from_slice(labels);
        b
    }

    #[test]
    fn mnist_shaped_file_is_resized() {
        let images = image_file(10, 28, 28, |i| (i % 256) as u8);
        let labels = label_file(&[7, 1, 2, 3, 4, 5, 6, 7, 8, 9]);
        let samples = parse_idx(&images, &labels).unwrap();
        assert_eq!(samples.len(), 10);
        assert!(samples.iter().all(|s| s.pixels().len() == 256));
        assert_eq!(samples[0].label(), 7);
        assert!(samples.iter().flat_map(|s| s.pixels()).all(|p| (0.0..=1.0).contains(p)));
    }

    #[test]
    fn native_16_is_scaled_only() {
        let images = image_file(1, 16, 16, |i| if i == 0 { 255 } else { 51 });
        let samples = parse_idx(&images, &label_file(&[3])).unwrap();
        assert_eq!(samples[0].pixels()[0], 1.0);
        assert_eq!(samples[0].pixels()[1], 0.2);
    }

    #[test]
    fn count_mismatch() {
        let images = image_file(10, 28, 28, |_| 0);
        let labels = label_file(&[0; 9]);
        assert!(matches!(
            parse_idx(&images, &labels),
            Err(DataError::CountMismatch { images: 10, labels: 9 })
        ));
    }

    #[test]
    fn wrong_magic() {
        let labels = label_file(&[0]);
        assert!(matches!(
            parse_idx(&labels, &labels),
            Err(DataError::MagicMismatch {
                expected: 2051,
                found: 2049
            })
        ));
    }

    #[test]
    fn truncated() {
        let mut images = image_file(2, 16, 16, |_| 0);
        images.truncate(100);
        assert!(matches!(
            parse_idx(&images, &label_file(&[0, 1])),
            Err(DataError::TruncatedFile { .. })
        ));
        assert!(matches!(
            parse_idx(&[0, 0, 8], &label_file(&[0])),
            Err(DataError::TruncatedFile { .. })
        ));
    }

    #[test]
    fn bad_label_byte() {
        let images = image_file(1, 16, 16, |_| 0);
        assert!(matches!(
            parse_idx(&images, &label_file(&[12])),
            Err(DataError::InvalidLabel(12))
        ));
    }

    #[test]
    fn write_then_load() {
        let dir = tempfile::tempdir().unwrap();
        let images = image_file(3, 16, 16, |i| (i * 7 % 256) as u8);
        let samples = parse_idx(&images, &label_file(&[1, 2, 3])).unwrap();
        let ds = Dataset::new(samples, "t", Manifest::default());
        let (ip, lp) = (dir.path().join("i.idx"), dir.path().join("l.idx"));
        write_idx(&ds, &ip, &lp).unwrap();
        let back = load_idx(&ip, &lp).unwrap();
        assert_eq!(back.samples(), ds.samples());
    }
}
