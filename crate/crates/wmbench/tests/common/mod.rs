//! Shared helpers for the integration suites: independent transform
//! oracles written straight from the textbook definitions (no calls into
//! the library's transform code), plus a small CSV reader.
#![allow(dead_code)] // each test target uses a different subset

use num_complex::Complex64;
use std::f64::consts::PI;

/// Direct-summation orthonormal 2D DCT-II:
/// `X[u,v] = s(u) s(v) sum_m sum_n x[m,n] cos(pi (2m+1) u / 2H) cos(pi (2n+1) v / 2W)`.
pub fn naive_dct2(values: &[f64], width: usize, height: usize) -> Vec<f64> {
    let s = |k: usize, n: usize| -> f64 {
        if k == 0 {
            (1.0 / n as f64).sqrt()
        } else {
            (2.0 / n as f64).sqrt()
        }
    };
    let mut out = vec![0.0; values.len()];
    for u in 0..height {
        for v in 0..width {
            let mut acc = 0.0;
            for m in 0..height {
                for n in 0..width {
                    acc += values[m * width + n]
                        * (PI * (2 * m + 1) as f64 * u as f64 / (2 * height) as f64).cos()
                        * (PI * (2 * n + 1) as f64 * v as f64 / (2 * width) as f64).cos();
                }
            }
            out[u * width + v] = s(u, height) * s(v, width) * acc;
        }
    }
    out
}

/// Direct-summation unnormalized 2D DFT:
/// `X[u,v] = sum_m sum_n x[m,n] exp(-2 pi i (um/H + vn/W))`.
pub fn naive_dft2(values: &[f64], width: usize, height: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); values.len()];
    for u in 0..height {
        for v in 0..width {
            let mut acc = Complex64::new(0.0, 0.0);
            for m in 0..height {
                for n in 0..width {
                    let phase = -2.0 * PI
                        * (u as f64 * m as f64 / height as f64
                            + v as f64 * n as f64 / width as f64);
                    acc += values[m * width + n] * Complex64::from_polar(1.0, phase);
                }
            }
            out[u * width + v] = acc;
        }
    }
    out
}

/// Textbook multi-level orthonormal 2D Haar analysis using explicit
/// quadrant buffers: per level, rows then columns of the current
/// approximation block are split into (a+b)/sqrt(2) and (a-b)/sqrt(2)
/// halves via freshly allocated matrices.
pub fn naive_haar2(values: &[f64], width: usize, height: usize, levels: u32) -> Vec<f64> {
    let mut out = values.to_vec();
    let (mut w, mut h) = (width, height);
    for _ in 0..levels {
        // Rows of the active block.
        let mut after_rows = vec![0.0; w * h];
        for y in 0..h {
            for i in 0..w / 2 {
                let a = out[y * width + 2 * i];
                let b = out[y * width + 2 * i + 1];
                after_rows[y * w + i] = (a + b) / 2.0_f64.sqrt();
                after_rows[y * w + w / 2 + i] = (a - b) / 2.0_f64.sqrt();
            }
        }
        // Columns of the active block.
        let mut after_cols = vec![0.0; w * h];
        for x in 0..w {
            for i in 0..h / 2 {
                let a = after_rows[(2 * i) * w + x];
                let b = after_rows[(2 * i + 1) * w + x];
                after_cols[i * w + x] = (a + b) / 2.0_f64.sqrt();
                after_cols[(h / 2 + i) * w + x] = (a - b) / 2.0_f64.sqrt();
            }
        }
        for y in 0..h {
            for x in 0..w {
                out[y * width + x] = after_cols[y * w + x];
            }
        }
        w /= 2;
        h /= 2;
    }
    out
}

/// Minimal CSV splitter for the emitter's output (no quoting in this
/// format). Returns the header fields and the data rows.
pub fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines
        .next()
        .expect("csv has a header")
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .map(|line| line.split(',').map(str::to_string).collect())
        .collect();
    (header, rows)
}

/// Workspace-level fixture path.
pub fn fixture_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn load_fixture(name: &str) -> wmbench::Image {
    let bytes = std::fs::read(fixture_path(name))
        .unwrap_or_else(|e| panic!("fixture {name}: {e}"));
    wmbench::pixelio::load_pgm(&bytes).unwrap()
}
