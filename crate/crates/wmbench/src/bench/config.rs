//! Benchmark configuration: defaults, the flat `key = value` config file,
//! and the overlay logic that lets CLI flags override file values.

use std::path::PathBuf;

use crate::error::Error;
use crate::pixelio::Image;
use crate::transforms::TransformSpec;
use crate::watermark::{Domain, WatermarkKey, DEFAULT_TAU};
use crate::Result;

pub const DEFAULT_THRESHOLDS: [f64; 6] = [50.0, 100.0, 150.0, 200.0, 250.0, 300.0];
pub const DEFAULT_ALPHA: f64 = 2.0;

/// One of the three attack transforms, in the labeling the tables use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformChoice {
    Dwt2,
    Dct2,
    Fft2,
}

impl TransformChoice {
    /// Table order: DWT2, DCT2, FFT2.
    pub const ALL: [TransformChoice; 3] = [
        TransformChoice::Dwt2,
        TransformChoice::Dct2,
        TransformChoice::Fft2,
    ];

    pub fn label(self) -> &'static str {
        match self {
            TransformChoice::Dwt2 => "DWT2",
            TransformChoice::Dct2 => "DCT2",
            TransformChoice::Fft2 => "FFT2",
        }
    }

    pub fn to_spec(self, dwt_levels: u32) -> TransformSpec {
        match self {
            TransformChoice::Dwt2 => TransformSpec::Dwt2 { levels: dwt_levels },
            TransformChoice::Dct2 => TransformSpec::Dct2,
            TransformChoice::Fft2 => TransformSpec::Fft2,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "dwt2" => Ok(TransformChoice::Dwt2),
            "dct2" => Ok(TransformChoice::Dct2),
            "fft2" => Ok(TransformChoice::Fft2),
            other => Err(Error::Config(format!(
                "unknown transform {other:?}, expected dwt2, dct2 or fft2"
            ))),
        }
    }
}

impl std::fmt::Display for TransformChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Markdown,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "markdown" => Ok(OutputFormat::Markdown),
            other => Err(Error::Config(format!(
                "unknown output format {other:?}, expected csv or markdown"
            ))),
        }
    }
}

/// Which image the distortion metrics compare the attacked output against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MetricReference {
    /// The unwatermarked host (the default: watermark distortion counts
    /// as part of the damage).
    #[default]
    Original,
    /// The watermarked, pre-attack image (codec distortion only).
    Watermarked,
}

impl MetricReference {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "original" => Ok(MetricReference::Original),
            "watermarked" => Ok(MetricReference::Watermarked),
            other => Err(Error::Config(format!(
                "unknown metric reference {other:?}, expected original or watermarked"
            ))),
        }
    }
}

fn parse_domain(s: &str) -> Result<Domain> {
    match s.trim().to_ascii_lowercase().as_str() {
        "spatial" => Ok(Domain::Spatial),
        "dct-midband" | "dct_midband" => Ok(Domain::DctMidband),
        other => Err(Error::Config(format!(
            "unknown domain {other:?}, expected spatial or dct-midband"
        ))),
    }
}

/// A watermark as configured. `length: None` means "use the full host
/// capacity", resolved once the image dimensions are known.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WatermarkSetting {
    pub seed: u64,
    pub alpha: f64,
    pub domain: Domain,
    pub length: Option<usize>,
}

impl WatermarkSetting {
    pub fn resolve(&self, host: &Image) -> Result<WatermarkKey> {
        let probe = WatermarkKey::new(self.seed, 1, self.alpha, self.domain)?;
        let length = self.length.unwrap_or_else(|| probe.capacity(host));
        WatermarkKey::new(self.seed, length, self.alpha, self.domain)
    }
}

/// Fully resolved benchmark configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub input_path: PathBuf,
    pub thresholds: Vec<f64>,
    pub transforms: Vec<TransformChoice>,
    pub dwt_levels: u32,
    pub watermarks: Vec<WatermarkSetting>,
    pub tau: f64,
    pub metric_reference: MetricReference,
    pub format: OutputFormat,
    /// `None` writes to standard output.
    pub output_path: Option<PathBuf>,
}

impl BenchConfig {
    /// Defaults mirroring the benchmark grid: thresholds 50..300 in steps
    /// of 50, all three transforms, one DWT level, no watermark.
    pub fn new(input_path: impl Into<PathBuf>) -> Self {
        BenchConfig {
            input_path: input_path.into(),
            thresholds: DEFAULT_THRESHOLDS.to_vec(),
            transforms: TransformChoice::ALL.to_vec(),
            dwt_levels: 1,
            watermarks: Vec::new(),
            tau: DEFAULT_TAU,
            metric_reference: MetricReference::Original,
            format: OutputFormat::Csv,
            output_path: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.thresholds.is_empty() {
            return Err(Error::Config("thresholds must not be empty".into()));
        }
        for pair in self.thresholds.windows(2) {
            if pair[0] >= pair[1] || pair[0].is_nan() || pair[1].is_nan() {
                return Err(Error::Config(format!(
                    "thresholds must be strictly increasing, got {} before {}",
                    pair[0], pair[1]
                )));
            }
        }
        for &t in &self.thresholds {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::Config(format!("invalid threshold {t}")));
            }
        }
        if self.transforms.is_empty() {
            return Err(Error::Config("at least one transform is required".into()));
        }
        for (i, a) in self.transforms.iter().enumerate() {
            if self.transforms[..i].contains(a) {
                return Err(Error::Config(format!("duplicate transform {a}")));
            }
        }
        if self.dwt_levels == 0 {
            return Err(Error::Config("dwt_levels must be at least 1".into()));
        }
        if self.watermarks.len() > 2 {
            return Err(Error::Config(
                "at most two watermarks (single or cascaded) are supported".into(),
            ));
        }
        if self.watermarks.len() == 2 && self.watermarks[0].seed == self.watermarks[1].seed {
            return Err(Error::Config(
                "cascaded watermarks must use distinct seeds".into(),
            ));
        }
        for wm in &self.watermarks {
            if !(wm.alpha > 0.0 && wm.alpha.is_finite()) {
                return Err(Error::Config(format!(
                    "watermark strength must be positive, got {}",
                    wm.alpha
                )));
            }
            if wm.length == Some(0) {
                return Err(Error::Config("watermark length must be at least 1".into()));
            }
        }
        if !self.tau.is_finite() {
            return Err(Error::Config(format!("invalid tau {}", self.tau)));
        }
        Ok(())
    }
}

/// Partial configuration collected from one source (config file or CLI
/// flags). Merging overlays gives flags-over-file-over-defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigOverlay {
    pub image: Option<PathBuf>,
    pub thresholds: Option<Vec<f64>>,
    pub transforms: Option<Vec<TransformChoice>>,
    pub dwt_levels: Option<u32>,
    pub seed: Option<u64>,
    pub seed2: Option<u64>,
    pub alpha: Option<f64>,
    pub alpha2: Option<f64>,
    pub domain: Option<Domain>,
    pub domain2: Option<Domain>,
    pub length: Option<usize>,
    pub length2: Option<usize>,
    pub double: Option<bool>,
    pub tau: Option<f64>,
    pub metric_reference: Option<MetricReference>,
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
}

impl ConfigOverlay {
    /// Parse the flat `key = value` config file format. Blank lines and
    /// `#` comments are ignored; keys mirror the CLI flags.
    pub fn parse(text: &str) -> Result<Self> {
        let mut overlay = ConfigOverlay::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key = value", lineno + 1))
            })?;
            let key = key.trim().to_ascii_lowercase();
            let value = value.trim();
            let ctx = |e: std::num::ParseFloatError| {
                Error::Config(format!("line {}: {e}", lineno + 1))
            };
            match key.as_str() {
                "image" => overlay.image = Some(PathBuf::from(value)),
                "thresholds" => overlay.thresholds = Some(parse_threshold_list(value)?),
                "transform" | "transforms" => {
                    overlay.transforms = Some(parse_transform_list(value)?)
                }
                "dwt_levels" => overlay.dwt_levels = Some(parse_int(value, &key)?),
                "seed" => overlay.seed = Some(parse_int(value, &key)?),
                "seed2" => overlay.seed2 = Some(parse_int(value, &key)?),
                "alpha" => overlay.alpha = Some(value.parse().map_err(ctx)?),
                "alpha2" => overlay.alpha2 = Some(value.parse().map_err(ctx)?),
                "domain" => overlay.domain = Some(parse_domain(value)?),
                "domain2" => overlay.domain2 = Some(parse_domain(value)?),
                "length" => overlay.length = Some(parse_int(value, &key)?),
                "length2" => overlay.length2 = Some(parse_int(value, &key)?),
                "double" => overlay.double = Some(parse_bool(value)?),
                "tau" => overlay.tau = Some(value.parse().map_err(ctx)?),
                "metric_reference" => {
                    overlay.metric_reference = Some(MetricReference::parse(value)?)
                }
                "format" => overlay.format = Some(OutputFormat::parse(value)?),
                "out" => overlay.out = Some(PathBuf::from(value)),
                other => {
                    return Err(Error::Config(format!(
                        "line {}: unknown key {other:?}",
                        lineno + 1
                    )));
                }
            }
        }
        Ok(overlay)
    }

    /// Overlay `self` on top of `base`: values present in `self` win.
    pub fn merge_over(self, base: ConfigOverlay) -> ConfigOverlay {
        ConfigOverlay {
            image: self.image.or(base.image),
            thresholds: self.thresholds.or(base.thresholds),
            transforms: self.transforms.or(base.transforms),
            dwt_levels: self.dwt_levels.or(base.dwt_levels),
            seed: self.seed.or(base.seed),
            seed2: self.seed2.or(base.seed2),
            alpha: self.alpha.or(base.alpha),
            alpha2: self.alpha2.or(base.alpha2),
            domain: self.domain.or(base.domain),
            domain2: self.domain2.or(base.domain2),
            length: self.length.or(base.length),
            length2: self.length2.or(base.length2),
            double: self.double.or(base.double),
            tau: self.tau.or(base.tau),
            metric_reference: self.metric_reference.or(base.metric_reference),
            format: self.format.or(base.format),
            out: self.out.or(base.out),
        }
    }

    /// Apply defaults and assemble the final configuration.
    pub fn into_config(self) -> Result<BenchConfig> {
        let input_path = self
            .image
            .ok_or_else(|| Error::Config("no input image given (image = <path>)".into()))?;

        let mut watermarks = Vec::new();
        let wants_second =
            self.double == Some(true) || self.seed2.is_some() || self.alpha2.is_some()
                || self.domain2.is_some() || self.length2.is_some();
        match self.seed {
            Some(seed) => {
                let first = WatermarkSetting {
                    seed,
                    alpha: self.alpha.unwrap_or(DEFAULT_ALPHA),
                    domain: self.domain.unwrap_or(Domain::Spatial),
                    length: self.length,
                };
                watermarks.push(first);
                if wants_second {
                    watermarks.push(WatermarkSetting {
                        seed: self.seed2.unwrap_or_else(|| seed.wrapping_add(1)),
                        alpha: self.alpha2.unwrap_or(first.alpha),
                        domain: self.domain2.unwrap_or(first.domain),
                        length: self.length2.or(first.length),
                    });
                }
            }
            None => {
                if wants_second || self.alpha.is_some() || self.domain.is_some()
                    || self.length.is_some()
                {
                    return Err(Error::Config(
                        "watermark parameters given without a seed".into(),
                    ));
                }
            }
        }

        let mut output_path = self.out;
        if output_path.as_deref() == Some(std::path::Path::new("-")) {
            output_path = None;
        }

        let config = BenchConfig {
            input_path,
            thresholds: self.thresholds.unwrap_or(DEFAULT_THRESHOLDS.to_vec()),
            transforms: self.transforms.unwrap_or(TransformChoice::ALL.to_vec()),
            dwt_levels: self.dwt_levels.unwrap_or(1),
            watermarks,
            tau: self.tau.unwrap_or(DEFAULT_TAU),
            metric_reference: self.metric_reference.unwrap_or_default(),
            format: self.format.unwrap_or_default(),
            output_path,
        };
        config.validate()?;
        Ok(config)
    }
}

pub fn parse_threshold_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|e| Error::Config(format!("threshold {:?}: {e}", tok.trim())))
        })
        .collect()
}

pub fn parse_transform_list(s: &str) -> Result<Vec<TransformChoice>> {
    s.split(',').map(TransformChoice::parse).collect()
}

fn parse_bool(s: &str) -> Result<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(Error::Config(format!(
            "expected true or false, got {other:?}"
        ))),
    }
}

fn parse_int<T: std::str::FromStr<Err = std::num::ParseIntError>>(
    s: &str,
    key: &str,
) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|e| Error::Config(format!("{key}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_config_file() {
        let text = "\
# benchmark setup
image = fixtures/photo_256.pgm
thresholds = 50, 100,150
transform = dct2,fft2
dwt_levels = 2
seed = 42          # watermark 1
alpha = 3.5
domain = dct-midband
double = true
seed2 = 77
tau = 0.25
metric_reference = watermarked
format = markdown
out = /tmp/table.md
";
        let cfg = ConfigOverlay::parse(text).unwrap().into_config().unwrap();
        assert_eq!(cfg.thresholds, vec![50.0, 100.0, 150.0]);
        assert_eq!(
            cfg.transforms,
            vec![TransformChoice::Dct2, TransformChoice::Fft2]
        );
        assert_eq!(cfg.dwt_levels, 2);
        assert_eq!(cfg.watermarks.len(), 2);
        assert_eq!(cfg.watermarks[0].seed, 42);
        assert_eq!(cfg.watermarks[0].alpha, 3.5);
        assert_eq!(cfg.watermarks[0].domain, Domain::DctMidband);
        assert_eq!(cfg.watermarks[1].seed, 77);
        assert_eq!(cfg.watermarks[1].alpha, 3.5); // inherited
        assert_eq!(cfg.tau, 0.25);
        assert_eq!(cfg.metric_reference, MetricReference::Watermarked);
        assert_eq!(cfg.format, OutputFormat::Markdown);
        assert_eq!(cfg.output_path, Some(PathBuf::from("/tmp/table.md")));
    }

    #[test]
    fn defaults_match_the_experimental_grid() {
        let overlay = ConfigOverlay {
            image: Some(PathBuf::from("host.pgm")),
            ..Default::default()
        };
        let cfg = overlay.into_config().unwrap();
        assert_eq!(cfg.thresholds, DEFAULT_THRESHOLDS.to_vec());
        assert_eq!(cfg.transforms, TransformChoice::ALL.to_vec());
        assert_eq!(cfg.dwt_levels, 1);
        assert!(cfg.watermarks.is_empty());
        assert_eq!(cfg.tau, DEFAULT_TAU);
        assert_eq!(cfg.format, OutputFormat::Csv);
        assert!(cfg.output_path.is_none());
    }

    #[test]
    fn flags_win_over_file_values() {
        let file = ConfigOverlay::parse("image = a.pgm\nseed = 1\nalpha = 2.0").unwrap();
        let flags = ConfigOverlay {
            seed: Some(9),
            ..Default::default()
        };
        let merged = flags.merge_over(file);
        assert_eq!(merged.image, Some(PathBuf::from("a.pgm")));
        assert_eq!(merged.seed, Some(9));
        assert_eq!(merged.alpha, Some(2.0));
    }

    #[test]
    fn double_derives_second_seed() {
        let cfg = ConfigOverlay::parse("image = a.pgm\nseed = 10\ndouble = true")
            .unwrap()
            .into_config()
            .unwrap();
        assert_eq!(cfg.watermarks.len(), 2);
        assert_eq!(cfg.watermarks[1].seed, 11);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(ConfigOverlay::parse("bogus = 1").is_err());
        assert!(ConfigOverlay::parse("image").is_err());
        assert!(ConfigOverlay::parse("image = a.pgm\ndouble = maybe").is_err());

        // missing image
        assert!(ConfigOverlay::default().into_config().is_err());
        // watermark parameters without a seed
        let overlay = ConfigOverlay {
            image: Some("a.pgm".into()),
            alpha: Some(2.0),
            ..Default::default()
        };
        assert!(overlay.into_config().is_err());
        // non-increasing thresholds
        let overlay = ConfigOverlay {
            image: Some("a.pgm".into()),
            thresholds: Some(vec![50.0, 50.0]),
            ..Default::default()
        };
        assert!(overlay.into_config().is_err());
        // duplicate transforms
        let overlay = ConfigOverlay {
            image: Some("a.pgm".into()),
            transforms: Some(vec![TransformChoice::Dct2, TransformChoice::Dct2]),
            ..Default::default()
        };
        assert!(overlay.into_config().is_err());
        // equal seeds for a cascade
        let overlay = ConfigOverlay {
            image: Some("a.pgm".into()),
            seed: Some(4),
            seed2: Some(4),
            ..Default::default()
        };
        assert!(overlay.into_config().is_err());
        // zero-strength watermark
        let overlay = ConfigOverlay {
            image: Some("a.pgm".into()),
            seed: Some(4),
            alpha: Some(0.0),
            ..Default::default()
        };
        assert!(overlay.into_config().is_err());
    }

    #[test]
    fn dash_out_means_stdout() {
        let cfg = ConfigOverlay::parse("image = a.pgm\nout = -")
            .unwrap()
            .into_config()
            .unwrap();
        assert!(cfg.output_path.is_none());
    }
}
