//! Deterministic synthetic test images.
//!
//! The PGM files checked in under `fixtures/` are byte-for-byte the output
//! of these functions (see the README for the exact parameters); a test in
//! this module keeps them honest. All randomness comes from the same LCG
//! step as the watermark signature generator, so the images are identical
//! on every platform.

use crate::pixelio::Image;

const MULTIPLIER: u64 = 6364136223846793005;
const INCREMENT: u64 = 1442695040888963407;

fn lcg_step(state: &mut u64) -> u64 {
    *state = state.wrapping_mul(MULTIPLIER).wrapping_add(INCREMENT);
    *state
}

/// Uniform sample in `[lo, hi]` from the top 32 bits of the LCG state.
fn uniform(state: &mut u64, lo: u8, hi: u8) -> u8 {
    let span = u64::from(hi) - u64::from(lo) + 1;
    let top = lcg_step(state) >> 32;
    lo + ((top * span) >> 32) as u8
}

/// Checkerboard of 8x8 tiles alternating between 32 and 224.
pub fn checkerboard(width: u32, height: u32) -> Image {
    let pixels = (0..height)
        .flat_map(|y| {
            (0..width).map(move |x| if ((x / 8) + (y / 8)).is_multiple_of(2) { 32 } else { 224 })
        })
        .collect();
    Image::new(width, height, pixels).expect("nonzero dimensions")
}

/// Diagonal ramp covering the full 0..=255 range.
pub fn gradient(width: u32, height: u32) -> Image {
    let span = (width - 1 + height - 1).max(1);
    let pixels = (0..height)
        .flat_map(|y| (0..width).map(move |x| (((x + y) * 255) / span) as u8))
        .collect();
    Image::new(width, height, pixels).expect("nonzero dimensions")
}

/// Seeded uniform noise in [16, 239]. The band keeps a margin to both
/// pixel rails so low-strength embedding never clips.
pub fn noise(width: u32, height: u32, seed: u64) -> Image {
    let mut state = seed;
    let pixels = (0..width as usize * height as usize)
        .map(|_| uniform(&mut state, 16, 239))
        .collect();
    Image::new(width, height, pixels).expect("nonzero dimensions")
}

/// Gaussian blobs used by [`photo`]: center x/y (as a fraction of the
/// side), radius (fraction), and amplitude in gray levels.
const PHOTO_BLOBS: [(f64, f64, f64, f64); 6] = [
    (0.30, 0.35, 0.18, 34.0),
    (0.72, 0.28, 0.10, -26.0),
    (0.62, 0.70, 0.22, 24.0),
    (0.25, 0.75, 0.08, -20.0),
    (0.85, 0.85, 0.12, 18.0),
    (0.50, 0.50, 0.35, 12.0),
];

/// Photographic stand-in: smooth bright blobs on a gentle ramp with a
/// +-4 gray-level noise floor, seeded with 2024. Pixels stay within
/// [152, 248], so Haar approximation coefficients clear the benchmark's
/// largest threshold level (300) on their own, with or without DC
/// preservation.
pub fn photo(size: u32) -> Image {
    let mut state = 2024u64;
    let side = f64::from(size - 1).max(1.0);
    let mut pixels = Vec::with_capacity(size as usize * size as usize);
    for y in 0..size {
        for x in 0..size {
            let fx = f64::from(x) / side;
            let fy = f64::from(y) / side;
            let mut v = 192.0 + 14.0 * (fx - 0.5) + 6.0 * (fy - 0.5);
            for (cx, cy, radius, amp) in PHOTO_BLOBS {
                let d2 = (fx - cx).powi(2) + (fy - cy).powi(2);
                v += amp * (-d2 / (2.0 * radius * radius)).exp();
            }
            let noise = f64::from(uniform(&mut state, 0, 8)) - 4.0;
            pixels.push((v + noise).round().clamp(152.0, 248.0) as u8);
        }
    }
    Image::new(size, size, pixels).expect("nonzero dimensions")
}
