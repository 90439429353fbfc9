//! Command-line benchmark runner. Configuration comes from an optional
//! flat `key = value` file plus flag overrides; flags win.
//!
//! Exit codes: 0 success, 1 configuration error, 2 I/O or input-parsing
//! error, 3 dimension/transform incompatibility.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use wmbench::bench::{
    emit, render_robustness, run_matrix, run_robustness_study, ConfigOverlay, MetricReference,
    OutputFormat,
};
use wmbench::bench::config::{parse_threshold_list, parse_transform_list};
use wmbench::watermark::Domain;
use wmbench::Error;

#[derive(Parser, Debug)]
#[command(
    name = "wmbench",
    version,
    about = "Embed seeded watermarks in a grayscale PGM image, attack it with \
             transform-domain threshold compression, and tabulate SNR/PSNR/wPSNR \
             and watermark detection across the threshold grid."
)]
struct Cli {
    /// Flat `key = value` config file; flags override its values.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Host image (binary PGM, maxval 255).
    #[arg(long, value_name = "FILE")]
    image: Option<PathBuf>,

    /// Comma-separated ascending threshold levels, e.g. 50,100,150.
    #[arg(long, value_name = "LIST")]
    thresholds: Option<String>,

    /// Comma-separated transforms to attack with: dwt2, dct2, fft2.
    #[arg(long, value_name = "LIST")]
    transform: Option<String>,

    /// Haar decomposition depth for DWT2.
    #[arg(long, value_name = "N")]
    dwt_levels: Option<u32>,

    /// Watermark seed; providing it enables the first watermark.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,

    /// Seed of the second (cascaded) watermark; defaults to seed + 1.
    #[arg(long, value_name = "N")]
    seed2: Option<u64>,

    /// Embedding strength (gray levels for spatial, relative for
    /// dct-midband).
    #[arg(long, value_name = "X")]
    alpha: Option<f64>,

    /// Strength of the second watermark; defaults to --alpha.
    #[arg(long, value_name = "X")]
    alpha2: Option<f64>,

    /// Embedding domain: spatial or dct-midband.
    #[arg(long, value_name = "NAME")]
    domain: Option<String>,

    /// Domain of the second watermark; defaults to --domain.
    #[arg(long, value_name = "NAME")]
    domain2: Option<String>,

    /// Number of modified samples; defaults to the full host capacity.
    #[arg(long, value_name = "N")]
    length: Option<usize>,

    /// Sample count of the second watermark; defaults to --length.
    #[arg(long, value_name = "N")]
    length2: Option<usize>,

    /// Cascade a second watermark after the first.
    #[arg(long)]
    double: bool,

    /// Detection threshold on the normalized correlation.
    #[arg(long, value_name = "X")]
    tau: Option<f64>,

    /// Compare attacked output against `original` or `watermarked`.
    #[arg(long, value_name = "NAME")]
    metric_reference: Option<String>,

    /// Output format: csv or markdown.
    #[arg(long, value_name = "NAME")]
    format: Option<String>,

    /// Output file, or `-` for standard output (the default).
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Run the watermark survival study instead of the metric table.
    #[arg(long)]
    robustness: bool,
}

impl Cli {
    fn to_overlay(&self) -> Result<ConfigOverlay, Error> {
        Ok(ConfigOverlay {
            image: self.image.clone(),
            thresholds: self
                .thresholds
                .as_deref()
                .map(parse_threshold_list)
                .transpose()?,
            transforms: self
                .transform
                .as_deref()
                .map(parse_transform_list)
                .transpose()?,
            dwt_levels: self.dwt_levels,
            seed: self.seed,
            seed2: self.seed2,
            alpha: self.alpha,
            alpha2: self.alpha2,
            domain: self.domain.as_deref().map(parse_domain_flag).transpose()?,
            domain2: self.domain2.as_deref().map(parse_domain_flag).transpose()?,
            length: self.length,
            length2: self.length2,
            double: if self.double { Some(true) } else { None },
            tau: self.tau,
            metric_reference: self
                .metric_reference
                .as_deref()
                .map(MetricReference::parse)
                .transpose()?,
            format: self.format.as_deref().map(OutputFormat::parse).transpose()?,
            out: self.out.clone(),
        })
    }
}

fn parse_domain_flag(s: &str) -> Result<Domain, Error> {
    match s.trim().to_ascii_lowercase().as_str() {
        "spatial" => Ok(Domain::Spatial),
        "dct-midband" | "dct_midband" => Ok(Domain::DctMidband),
        other => Err(Error::Config(format!(
            "unknown domain {other:?}, expected spatial or dct-midband"
        ))),
    }
}

fn run(cli: &Cli) -> Result<(), Error> {
    let flags = cli.to_overlay()?;
    let overlay = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            flags.merge_over(ConfigOverlay::parse(&text)?)
        }
        None => flags,
    };
    let config = overlay.into_config()?;

    let mut buffer = Vec::new();
    if cli.robustness {
        let report = run_robustness_study(&config)?;
        buffer.extend_from_slice(render_robustness(&report).as_bytes());
    } else {
        let rows = run_matrix(&config)?;
        emit(&rows, config.format, &mut buffer)?;
    }

    match &config.output_path {
        Some(path) => fs::write(path, &buffer)?,
        None => std::io::stdout().write_all(&buffer)?,
    }
    Ok(())
}

/// Exit-code classes: 1 config, 2 I/O and input parsing, 3 dimensions.
fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config(_)
        | Error::EmptyTable
        | Error::InvalidKey(_)
        | Error::InvalidThreshold(_)
        | Error::InvalidArgument(_)
        | Error::DuplicateSeed => 1,
        Error::Io(_)
        | Error::PgmBadMagic
        | Error::PgmMalformedHeader(_)
        | Error::PgmUnsupportedMaxval(_)
        | Error::PgmTruncated { .. }
        | Error::ZeroDimension => 2,
        Error::NotPowerOfTwo(..)
        | Error::NotDivisible(..)
        | Error::DimensionMismatch(..)
        | Error::TransformKindMismatch { .. }
        | Error::DwtLevelMismatch { .. }
        | Error::LengthExceedsCapacity { .. }
        | Error::ImaginaryResidue(_)
        | Error::BufferLengthMismatch { .. }
        | Error::NonFiniteValue(_) => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("wmbench: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
