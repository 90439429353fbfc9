//! Crate-wide error type.

use crate::transforms::TransformKind;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    // ---- PGM parsing ----
    #[error("bad PGM magic number, expected \"P5\"")]
    PgmBadMagic,
    #[error("malformed PGM header: {0}")]
    PgmMalformedHeader(String),
    #[error("unsupported PGM maxval {0}, only 255 is accepted")]
    PgmUnsupportedMaxval(u64),
    #[error("PGM raster truncated: need {expected} bytes, found {found}")]
    PgmTruncated { expected: usize, found: usize },
    #[error("image dimensions must be at least 1x1")]
    ZeroDimension,

    // ---- buffers and planes ----
    #[error("buffer length {len} does not match dimensions {width}x{height}")]
    BufferLengthMismatch { width: u32, height: u32, len: usize },
    #[error("non-finite value at index {0}")]
    NonFiniteValue(usize),
    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(u32, u32, u32, u32),

    // ---- transforms ----
    #[error("coefficient plane is {found}, expected {expected}")]
    TransformKindMismatch {
        expected: TransformKind,
        found: TransformKind,
    },
    #[error("DWT2 level mismatch: plane has {found}, expected {expected}")]
    DwtLevelMismatch { expected: u32, found: u32 },
    #[error("FFT2 requires power-of-two dimensions, got {0}x{1}")]
    NotPowerOfTwo(u32, u32),
    #[error("dimensions {0}x{1} are not divisible by 2^{2} (DWT2 with {2} levels)")]
    NotDivisible(u32, u32, u32),
    #[error("inverse FFT2 imaginary residue {0:.3e} exceeds 1e-6; conjugate symmetry is broken")]
    ImaginaryResidue(f64),

    // ---- thresholding and watermarking ----
    #[error("threshold must be finite and non-negative, got {0}")]
    InvalidThreshold(f64),
    #[error("invalid watermark key: {0}")]
    InvalidKey(String),
    #[error("watermark length {requested} exceeds the {available} available host samples")]
    LengthExceedsCapacity { requested: usize, available: usize },
    #[error("cascaded watermarks must use distinct seeds")]
    DuplicateSeed,

    // ---- metrics ----
    #[error("invalid metric argument: {0}")]
    InvalidArgument(String),

    // ---- bench ----
    #[error("config error: {0}")]
    Config(String),
    #[error("benchmark table has no rows")]
    EmptyTable,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
