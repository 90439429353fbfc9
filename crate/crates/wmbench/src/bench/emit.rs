//! Table emission: CSV (machine-readable, normative header) and Markdown
//! (grouped like the published result tables).

use std::io::Write;

use super::config::OutputFormat;
use super::runner::BenchRow;
use crate::error::Error;
use crate::metrics::{format_db2, format_db4};
use crate::Result;

/// Threshold levels are printed with the shortest exact representation
/// (`50`, not `50.0`), which is what `f64`'s `Display` produces.
fn format_threshold(t: f64) -> String {
    format!("{t}")
}

fn format_sparsity(s: f64) -> String {
    format!("{s:.4}")
}

fn format_rho(r: f64) -> String {
    format!("{r:.4}")
}

/// Write the rows in the requested format. Refuses to write an empty
/// table.
pub fn emit<W: Write>(rows: &[BenchRow], format: OutputFormat, out: &mut W) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::EmptyTable);
    }
    let wm_count = rows[0].detections.len();
    if rows.iter().any(|r| r.detections.len() != wm_count) {
        return Err(Error::Config(
            "rows carry inconsistent watermark counts".into(),
        ));
    }
    match format {
        OutputFormat::Csv => emit_csv(rows, wm_count, out),
        OutputFormat::Markdown => emit_markdown(rows, wm_count, out),
    }
}

fn emit_csv<W: Write>(rows: &[BenchRow], wm_count: usize, out: &mut W) -> Result<()> {
    let mut header = String::from("threshold,transform,snr_db,psnr_db,wpsnr_db,sparsity");
    for i in 1..=wm_count {
        header.push_str(&format!(",wm{i}_rho,wm{i}_detected"));
    }
    writeln!(out, "{header}")?;
    for row in rows {
        let mut line = format!(
            "{},{},{},{},{},{}",
            format_threshold(row.threshold),
            row.transform.label(),
            format_db4(row.snr_db),
            format_db2(row.psnr_db),
            format_db4(row.wpsnr_db),
            format_sparsity(row.sparsity),
        );
        for score in &row.detections {
            line.push_str(&format!(
                ",{},{}",
                format_rho(score.correlation),
                score.detected
            ));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// Markdown mirrors the published layout: rows grouped by threshold level,
/// with the level shown only on the first row of each group.
fn emit_markdown<W: Write>(rows: &[BenchRow], wm_count: usize, out: &mut W) -> Result<()> {
    let mut header = String::from("| Threshold Level | Transform | SNR | PSNR | WPSNR | Sparsity |");
    let mut rule = String::from("|---|---|---|---|---|---|");
    for i in 1..=wm_count {
        header.push_str(&format!(" WM{i} rho | WM{i} detected |"));
        rule.push_str("---|---|");
    }
    writeln!(out, "{header}")?;
    writeln!(out, "{rule}")?;
    let mut previous: Option<f64> = None;
    for row in rows {
        let level = if previous == Some(row.threshold) {
            String::new()
        } else {
            format_threshold(row.threshold)
        };
        previous = Some(row.threshold);
        let mut line = format!(
            "| {} | {} | {} | {} | {} | {} |",
            level,
            row.transform.label(),
            format_db4(row.snr_db),
            format_db2(row.psnr_db),
            format_db4(row.wpsnr_db),
            format_sparsity(row.sparsity),
        );
        for score in &row.detections {
            line.push_str(&format!(
                " {} | {} |",
                format_rho(score.correlation),
                score.detected
            ));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}
