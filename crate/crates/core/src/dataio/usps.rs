//! USPS text layout: one sample per line, a (real-valued) label followed by
//! 256 intensities in `[-1, 1]`.

use std::path::Path;

use super::{DataError, Dataset, ImageSample, Manifest, Result, PIXELS};

/// Values this far outside `[-1, 1]` are clamped rather than rejected.
const RANGE_TOLERANCE: f64 = 1e-6;

pub fn parse_usps_text(text: &str) -> Result<Vec<ImageSample>> {
    let mut samples = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let values = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>().map_err(|_| DataError::MalformedLine {
                    line: line_no,
                    reason: format!("not a number: {tok:?}"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if values.len() != PIXELS + 1 {
            return Err(DataError::MalformedLine {
                line: line_no,
                reason: format!("expected {} fields, found {}", PIXELS + 1, values.len()),
            });
        }
        let raw_label = values[0];
        if raw_label.fract() != 0.0 || !(0.0..=9.0).contains(&raw_label) {
            return Err(DataError::InvalidLabel(raw_label as i64));
        }
        let pixels = values[1..]
            .iter()
            .map(|&v| {
                if !(-1.0 - RANGE_TOLERANCE..=1.0 + RANGE_TOLERANCE).contains(&v) {
                    return Err(DataError::RangeError {
                        line: line_no,
                        value: v,
                    });
                }
                Ok(((v.clamp(-1.0, 1.0) + 1.0) / 2.0).clamp(0.0, 1.0))
            })
            .collect::<Result<Vec<f64>>>()?;
        samples.push(ImageSample::new(pixels, raw_label as u8)?);
    }
    Ok(samples)
}

pub fn load_usps_text(path: &Path) -> Result<Dataset> {
    let text = std::fs::read_to_string(path).map_err(|source| DataError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let samples = parse_usps_text(&text)?;
    Ok(Dataset::new(
        samples,
        "usps",
        Manifest::with("usps_text", path.display().to_string()),
    ))
}
