//! Grid execution: embed, attack every (threshold, transform) cell, score.

use rayon::prelude::*;
use std::fs;

use super::config::{BenchConfig, MetricReference, TransformChoice};
use crate::metrics::QualityReport;
use crate::pixelio::{load_pgm, Image};
use crate::thresholdcodec::{compress_attack, ThresholdPolicy};
use crate::watermark::{detect, embed, WatermarkKey};
use crate::Result;

/// Detection outcome for one watermark in one grid cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WatermarkScore {
    pub correlation: f64,
    pub detected: bool,
}

/// One row of the benchmark table: one (threshold, transform) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub threshold: f64,
    pub transform: TransformChoice,
    pub snr_db: f64,
    pub psnr_db: f64,
    pub wpsnr_db: f64,
    pub sparsity: f64,
    /// One entry per configured watermark, in embedding order.
    pub detections: Vec<WatermarkScore>,
}

/// Load the configured image and run the full grid. Rows are ordered by
/// (threshold ascending, transform in config order) and are a pure
/// function of the input bytes and the config.
pub fn run_matrix(config: &BenchConfig) -> Result<Vec<BenchRow>> {
    config.validate()?;
    let bytes = fs::read(&config.input_path)?;
    run_matrix_on(&load_pgm(&bytes)?, config)
}

/// Same as [`run_matrix`] but on an already-loaded host image.
pub fn run_matrix_on(host: &Image, config: &BenchConfig) -> Result<Vec<BenchRow>> {
    config.validate()?;
    // Fail fast on incompatible dimensions instead of per cell.
    for choice in &config.transforms {
        choice
            .to_spec(config.dwt_levels)
            .validate_dims(host.width(), host.height())?;
    }
    let keys: Vec<WatermarkKey> = config
        .watermarks
        .iter()
        .map(|setting| setting.resolve(host))
        .collect::<Result<_>>()?;

    let mut marked = host.clone();
    for key in &keys {
        marked = embed(&marked, key)?;
    }

    let cells: Vec<(f64, TransformChoice)> = config
        .thresholds
        .iter()
        .flat_map(|&t| config.transforms.iter().map(move |&tc| (t, tc)))
        .collect();

    // Cells are independent; collect() keeps the deterministic order.
    cells
        .into_par_iter()
        .map(|(threshold, transform)| {
            let report = compress_attack(
                &marked,
                transform.to_spec(config.dwt_levels),
                ThresholdPolicy::new(threshold)?,
            )?;
            let reference = match config.metric_reference {
                MetricReference::Original => host,
                MetricReference::Watermarked => &marked,
            };
            let quality = QualityReport::compute(reference, &report.output)?;
            let detections = keys
                .iter()
                .map(|key| {
                    detect(host, &report.output, key, config.tau).map(|d| WatermarkScore {
                        correlation: d.correlation,
                        detected: d.detected,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(BenchRow {
                threshold,
                transform,
                snr_db: quality.snr_db,
                psnr_db: quality.psnr_db,
                wpsnr_db: quality.wpsnr_db,
                sparsity: report.sparsity,
                detections,
            })
        })
        .collect()
}
