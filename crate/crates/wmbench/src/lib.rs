//! Grayscale watermark robustness benchmarking against transform-domain
//! threshold compression.
//!
//! The pipeline: embed one or two seeded pseudo-random watermarks in an
//! 8-bit grayscale image, attack the result by hard-thresholding its
//! DCT2 / FFT2 / Haar DWT2 coefficients, then score the damage with SNR,
//! PSNR and NVF-weighted PSNR and check whether each watermark is still
//! detectable. The `bench` module drives the whole grid and emits CSV or
//! Markdown tables; the `wmbench` binary is a thin CLI over it.

pub mod bench;
pub mod error;
pub mod fixtures;
pub mod metrics;
pub mod pixelio;
pub mod thresholdcodec;
pub mod transforms;
pub mod watermark;

pub use error::Error;
pub use pixelio::{Image, RealPlane};
pub use transforms::{CoefficientPlane, TransformSpec};

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
