//! Synthetic braille digits: a 2×2 grid of discs on a 16×16 canvas.
//!
//! Digits use the upper two rows of the braille cell (dots 1, 2, 4, 5):
//! dot 1 is the top-left quadrant, dot 4 top-right, dot 2 bottom-left and
//! dot 5 bottom-right. Each present dot is a filled disc of radius
//! [`BRAILLE_DISC_RADIUS`] centred in its 8×8 quadrant.

use rand_distr::{Distribution, Normal};

use super::{Dataset, ImageSample, Manifest, N_CLASSES, SIDE};
use crate::seeds::rng;

pub const BRAILLE_DISC_RADIUS: f64 = 3.0;

/// Quadrant occupancy `[top-left, top-right, bottom-left, bottom-right]`
/// for a digit. Digits 1–9 are letters a–i, 0 is j.
pub fn braille_dots(digit: u8) -> [bool; 4] {
    // (dot1, dot4, dot2, dot5)
    match digit {
        1 => [true, false, false, false],
        2 => [true, false, true, false],
        3 => [true, true, false, false],
        4 => [true, true, false, true],
        5 => [true, false, false, true],
        6 => [true, true, true, false],
        7 => [true, true, true, true],
        8 => [true, false, true, true],
        9 => [false, true, true, false],
        0 => [false, true, true, true],
        _ => panic!("digit {digit} out of range"),
    }
}

fn render(digit: u8) -> Vec<f64> {
    let dots = braille_dots(digit);
    let half = SIDE / 2;
    let centre = (half as f64 - 1.0) / 2.0;
    let mut pixels = vec![0.0; SIDE * SIDE];
    for (q, &on) in dots.iter().enumerate() {
        if !on {
            continue;
        }
        let (qr, qc) = (q / 2 * half, q % 2 * half);
        for r in 0..half {
            for c in 0..half {
                let (dr, dc) = (r as f64 - centre, c as f64 - centre);
                if dr * dr + dc * dc <= BRAILLE_DISC_RADIUS * BRAILLE_DISC_RADIUS {
                    pixels[(qr + r) * SIDE + qc + c] = 1.0;
                }
            }
        }
    }
    pixels
}

/// `n_per_class` images per digit with additive Gaussian pixel noise,
/// clamped to `[0, 1]`. Samples are ordered by class.
pub fn synth_braille(n_per_class: usize, noise_std: f64, seed: u64) -> Dataset {
    assert!(n_per_class >= 1, "n_per_class must be at least 1");
    assert!(noise_std >= 0.0, "noise_std must be non-negative");
    let mut rng = rng(seed);
    let noise = Normal::new(0.0, noise_std).expect("finite std");
    let mut samples = Vec::with_capacity(n_per_class * N_CLASSES);
    for digit in 0..N_CLASSES as u8 {
        let clean = render(digit);
        for _ in 0..n_per_class {
            let pixels = if noise_std == 0.0 {
                clean.clone()
            } else {
                clean
                    .iter()
                    .map(|&p| (p + noise.sample(&mut rng)).clamp(0.0, 1.0))
                    .collect()
            };
            samples.push(ImageSample::new(pixels, digit).expect("rendered sample is valid"));
        }
    }
    let mut manifest = Manifest::with("synth", "braille");
    manifest.push("n_per_class", n_per_class.to_string());
    manifest.push("noise_std", noise_std.to_string());
    manifest.push("seed", seed.to_string());
    Dataset::new(samples, "braille", manifest)
}
