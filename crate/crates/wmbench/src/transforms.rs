//! Forward and inverse 2D transforms: orthonormal DCT-II, radix-2 FFT, and
//! multi-level orthonormal Haar DWT.
//!
//! Normalization conventions, fixed so that thresholding means the same
//! thing everywhere:
//! - DCT2: orthonormal (1D scale factors sqrt(1/N) for index 0, sqrt(2/N)
//!   otherwise). Energy preserving.
//! - DWT2: orthonormal Haar analysis, in-place pyramid layout. The level-k
//!   approximation block occupies the top-left (H/2^k) x (W/2^k) corner,
//!   detail blocks sit in the usual quadrant positions. Energy preserving.
//! - FFT2: unnormalized forward (DC equals the sum of the inputs); the
//!   inverse carries the 1/(H*W) factor. Sum |X|^2 = H*W * sum |x|^2.

use num_complex::Complex64;
use std::fmt;

use crate::error::Error;
use crate::pixelio::RealPlane;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    Dct2,
    Fft2,
    Dwt2,
}

impl fmt::Display for TransformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TransformKind::Dct2 => "DCT2",
            TransformKind::Fft2 => "FFT2",
            TransformKind::Dwt2 => "DWT2",
        })
    }
}

/// Which transform to run, with its parameters. DWT2 carries its
/// decomposition depth; for an HxW input both H and W must be divisible
/// by 2^levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformSpec {
    Dct2,
    Fft2,
    Dwt2 { levels: u32 },
}

impl TransformSpec {
    pub fn kind(&self) -> TransformKind {
        match self {
            TransformSpec::Dct2 => TransformKind::Dct2,
            TransformSpec::Fft2 => TransformKind::Fft2,
            TransformSpec::Dwt2 { .. } => TransformKind::Dwt2,
        }
    }

    /// Check that a plane of the given dimensions can be transformed.
    pub fn validate_dims(&self, width: u32, height: u32) -> Result<()> {
        match *self {
            TransformSpec::Dct2 => Ok(()),
            TransformSpec::Fft2 => {
                if width.is_power_of_two() && height.is_power_of_two() {
                    Ok(())
                } else {
                    Err(Error::NotPowerOfTwo(width, height))
                }
            }
            TransformSpec::Dwt2 { levels } => {
                if levels == 0 {
                    return Err(Error::InvalidArgument(
                        "DWT2 levels must be at least 1".into(),
                    ));
                }
                let block = 1u32.checked_shl(levels).unwrap_or(0);
                if block != 0 && width.is_multiple_of(block) && height.is_multiple_of(block) {
                    Ok(())
                } else {
                    Err(Error::NotDivisible(width, height, levels))
                }
            }
        }
    }
}

impl fmt::Display for TransformSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.kind().fmt(f)
    }
}

/// Transform-domain coefficients: real for DCT2/DWT2, complex for FFT2.
#[derive(Debug, Clone, PartialEq)]
pub enum Coefficients {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl Coefficients {
    pub fn len(&self) -> usize {
        match self {
            Coefficients::Real(v) => v.len(),
            Coefficients::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A plane of transform coefficients, same dimensions as the source plane.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientPlane {
    width: u32,
    height: u32,
    spec: TransformSpec,
    values: Coefficients,
}

impl CoefficientPlane {
    pub fn new(width: u32, height: u32, spec: TransformSpec, values: Coefficients) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::ZeroDimension);
        }
        let expected = width as usize * height as usize;
        if values.len() != expected {
            return Err(Error::BufferLengthMismatch {
                width,
                height,
                len: values.len(),
            });
        }
        let complex = matches!(values, Coefficients::Complex(_));
        if complex != matches!(spec, TransformSpec::Fft2) {
            return Err(Error::TransformKindMismatch {
                expected: spec.kind(),
                found: if complex {
                    TransformKind::Fft2
                } else {
                    TransformKind::Dct2
                },
            });
        }
        Ok(CoefficientPlane {
            width,
            height,
            spec,
            values,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn spec(&self) -> TransformSpec {
        self.spec
    }

    pub fn values(&self) -> &Coefficients {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut Coefficients {
        &mut self.values
    }

    pub fn real_values(&self) -> Option<&[f64]> {
        match &self.values {
            Coefficients::Real(v) => Some(v),
            Coefficients::Complex(_) => None,
        }
    }

    pub fn complex_values(&self) -> Option<&[Complex64]> {
        match &self.values {
            Coefficients::Complex(v) => Some(v),
            Coefficients::Real(_) => None,
        }
    }

    fn expect_kind(&self, expected: TransformKind) -> Result<()> {
        if self.spec.kind() == expected {
            Ok(())
        } else {
            Err(Error::TransformKindMismatch {
                expected,
                found: self.spec.kind(),
            })
        }
    }
}

/// Dispatch to the forward transform selected by `spec`.
pub fn forward(plane: &RealPlane, spec: TransformSpec) -> Result<CoefficientPlane> {
    spec.validate_dims(plane.width(), plane.height())?;
    match spec {
        TransformSpec::Dct2 => Ok(dct2_forward(plane)),
        TransformSpec::Fft2 => fft2_forward(plane),
        TransformSpec::Dwt2 { levels } => dwt2_forward(plane, levels),
    }
}

/// Dispatch to the inverse transform recorded in the plane's spec.
pub fn inverse(coeffs: &CoefficientPlane) -> Result<RealPlane> {
    match coeffs.spec() {
        TransformSpec::Dct2 => dct2_inverse(coeffs),
        TransformSpec::Fft2 => fft2_inverse(coeffs),
        TransformSpec::Dwt2 { levels } => dwt2_inverse(coeffs, levels),
    }
}

// ---------------------------------------------------------------------------
// DCT2
// ---------------------------------------------------------------------------

/// Orthonormal 1D DCT-II basis, flattened as `basis[k * n + i]`.
fn dct_basis(n: usize) -> Vec<f64> {
    let mut basis = vec![0.0; n * n];
    let norm0 = (1.0 / n as f64).sqrt();
    let norm = (2.0 / n as f64).sqrt();
    for k in 0..n {
        let s = if k == 0 { norm0 } else { norm };
        for i in 0..n {
            basis[k * n + i] =
                s * (std::f64::consts::PI * (2 * i + 1) as f64 * k as f64 / (2 * n) as f64).cos();
        }
    }
    basis
}

/// Separable pass over the rows of a row-major matrix: `out_row[k] =
/// sum_i basis[k*n+i] * row[i]` (transpose the basis for the inverse).
fn apply_rows(data: &mut [f64], width: usize, height: usize, basis: &[f64], transpose: bool) {
    let mut scratch = vec![0.0; width];
    for row in data.chunks_exact_mut(width) {
        for (k, out) in scratch.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (i, &x) in row.iter().enumerate() {
                let b = if transpose {
                    basis[i * width + k]
                } else {
                    basis[k * width + i]
                };
                acc += b * x;
            }
            *out = acc;
        }
        row.copy_from_slice(&scratch);
    }
    debug_assert_eq!(data.len(), width * height);
}

fn apply_cols(data: &mut [f64], width: usize, height: usize, basis: &[f64], transpose: bool) {
    let mut column = vec![0.0; height];
    let mut scratch = vec![0.0; height];
    for x in 0..width {
        for (y, c) in column.iter_mut().enumerate() {
            *c = data[y * width + x];
        }
        for (k, out) in scratch.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (i, &v) in column.iter().enumerate() {
                let b = if transpose {
                    basis[i * height + k]
                } else {
                    basis[k * height + i]
                };
                acc += b * v;
            }
            *out = acc;
        }
        for (y, &v) in scratch.iter().enumerate() {
            data[y * width + x] = v;
        }
    }
}

/// Orthonormal 2D DCT-II. Energy preserving up to floating error.
pub fn dct2_forward(plane: &RealPlane) -> CoefficientPlane {
    let (w, h) = (plane.width() as usize, plane.height() as usize);
    let mut data = plane.values().to_vec();
    let row_basis = dct_basis(w);
    apply_rows(&mut data, w, h, &row_basis, false);
    let col_basis = if h == w { row_basis } else { dct_basis(h) };
    apply_cols(&mut data, w, h, &col_basis, false);
    CoefficientPlane::new(
        plane.width(),
        plane.height(),
        TransformSpec::Dct2,
        Coefficients::Real(data),
    )
    .expect("dimensions come from a valid plane")
}

/// Exact inverse of [`dct2_forward`] up to floating error.
pub fn dct2_inverse(coeffs: &CoefficientPlane) -> Result<RealPlane> {
    coeffs.expect_kind(TransformKind::Dct2)?;
    let (w, h) = (coeffs.width() as usize, coeffs.height() as usize);
    let mut data = coeffs.real_values().expect("DCT2 planes are real").to_vec();
    let col_basis = dct_basis(h);
    apply_cols(&mut data, w, h, &col_basis, true);
    let row_basis = if h == w { col_basis } else { dct_basis(w) };
    apply_rows(&mut data, w, h, &row_basis, true);
    RealPlane::new(coeffs.width(), coeffs.height(), data)
}

// ---------------------------------------------------------------------------
// FFT2
// ---------------------------------------------------------------------------

/// Iterative radix-2 Cooley-Tukey, in place. `inverted` flips the twiddle
/// sign; no scaling is applied in either direction.
fn fft1d(data: &mut [Complex64], inverted: bool) {
    let n = data.len();
    debug_assert!(n.is_power_of_two());
    if n < 2 {
        return;
    }
    // Bit-reversal permutation.
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            data.swap(i, j);
        }
    }
    let sign = if inverted { 1.0 } else { -1.0 };
    let mut len = 2;
    while len <= n {
        let angle = sign * 2.0 * std::f64::consts::PI / len as f64;
        let wlen = Complex64::from_polar(1.0, angle);
        for chunk in data.chunks_exact_mut(len) {
            let mut w = Complex64::new(1.0, 0.0);
            for i in 0..len / 2 {
                let u = chunk[i];
                let v = chunk[i + len / 2] * w;
                chunk[i] = u + v;
                chunk[i + len / 2] = u - v;
                w *= wlen;
            }
        }
        len <<= 1;
    }
}

fn fft2_in_place(data: &mut [Complex64], width: usize, height: usize, inverted: bool) {
    for row in data.chunks_exact_mut(width) {
        fft1d(row, inverted);
    }
    let mut column = vec![Complex64::new(0.0, 0.0); height];
    for x in 0..width {
        for (y, c) in column.iter_mut().enumerate() {
            *c = data[y * width + x];
        }
        fft1d(&mut column, inverted);
        for (y, &v) in column.iter().enumerate() {
            data[y * width + x] = v;
        }
    }
}

/// Unnormalized forward 2D DFT of a real plane. Requires power-of-two
/// dimensions. The DC coefficient equals the sum of the inputs; for real
/// input the output is conjugate-symmetric.
pub fn fft2_forward(plane: &RealPlane) -> Result<CoefficientPlane> {
    TransformSpec::Fft2.validate_dims(plane.width(), plane.height())?;
    let (w, h) = (plane.width() as usize, plane.height() as usize);
    let mut data: Vec<Complex64> = plane
        .values()
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    fft2_in_place(&mut data, w, h, false);
    CoefficientPlane::new(
        plane.width(),
        plane.height(),
        TransformSpec::Fft2,
        Coefficients::Complex(data),
    )
}

/// Tolerated imaginary residue after the inverse FFT of a (nominally)
/// conjugate-symmetric spectrum. Anything larger means the spectrum was
/// damaged asymmetrically.
pub const FFT_IMAGINARY_TOLERANCE: f64 = 1e-6;

/// Normalized inverse 2D DFT, returning the real part. Errors if the
/// imaginary residue exceeds [`FFT_IMAGINARY_TOLERANCE`].
pub fn fft2_inverse(coeffs: &CoefficientPlane) -> Result<RealPlane> {
    coeffs.expect_kind(TransformKind::Fft2)?;
    let (w, h) = (coeffs.width() as usize, coeffs.height() as usize);
    let mut data = coeffs
        .complex_values()
        .expect("FFT2 planes are complex")
        .to_vec();
    fft2_in_place(&mut data, w, h, true);
    let scale = 1.0 / (w * h) as f64;
    let mut max_im = 0.0f64;
    let mut out = Vec::with_capacity(data.len());
    for c in &data {
        let c = c * scale;
        max_im = max_im.max(c.im.abs());
        out.push(c.re);
    }
    if max_im >= FFT_IMAGINARY_TOLERANCE {
        return Err(Error::ImaginaryResidue(max_im));
    }
    RealPlane::new(coeffs.width(), coeffs.height(), out)
}

// ---------------------------------------------------------------------------
// DWT2 (Haar)
// ---------------------------------------------------------------------------

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// One orthonormal Haar analysis step on a length-`n` strided lane:
/// approximations land in the first half, details in the second.
fn haar_lane_forward(data: &mut [f64], offset: usize, stride: usize, n: usize) {
    let half = n / 2;
    let mut scratch = vec![0.0; n];
    for i in 0..half {
        let a = data[offset + 2 * i * stride];
        let b = data[offset + (2 * i + 1) * stride];
        scratch[i] = (a + b) * SQRT_HALF;
        scratch[half + i] = (a - b) * SQRT_HALF;
    }
    for (i, &v) in scratch.iter().enumerate() {
        data[offset + i * stride] = v;
    }
}

fn haar_lane_inverse(data: &mut [f64], offset: usize, stride: usize, n: usize) {
    let half = n / 2;
    let mut scratch = vec![0.0; n];
    for i in 0..half {
        let approx = data[offset + i * stride];
        let detail = data[offset + (half + i) * stride];
        scratch[2 * i] = (approx + detail) * SQRT_HALF;
        scratch[2 * i + 1] = (approx - detail) * SQRT_HALF;
    }
    for (i, &v) in scratch.iter().enumerate() {
        data[offset + i * stride] = v;
    }
}

/// Orthonormal multi-level 2D Haar analysis with the usual in-place
/// pyramid layout. Requires both dimensions divisible by 2^levels.
pub fn dwt2_forward(plane: &RealPlane, levels: u32) -> Result<CoefficientPlane> {
    let spec = TransformSpec::Dwt2 { levels };
    spec.validate_dims(plane.width(), plane.height())?;
    let full_width = plane.width() as usize;
    let mut data = plane.values().to_vec();
    let (mut w, mut h) = (full_width, plane.height() as usize);
    for _ in 0..levels {
        for y in 0..h {
            haar_lane_forward(&mut data, y * full_width, 1, w);
        }
        for x in 0..w {
            haar_lane_forward(&mut data, x, full_width, h);
        }
        w /= 2;
        h /= 2;
    }
    CoefficientPlane::new(
        plane.width(),
        plane.height(),
        spec,
        Coefficients::Real(data),
    )
}

/// Exact synthesis inverse of [`dwt2_forward`].
pub fn dwt2_inverse(coeffs: &CoefficientPlane, levels: u32) -> Result<RealPlane> {
    coeffs.expect_kind(TransformKind::Dwt2)?;
    match coeffs.spec() {
        TransformSpec::Dwt2 { levels: found } if found != levels => {
            return Err(Error::DwtLevelMismatch {
                expected: levels,
                found,
            });
        }
        _ => {}
    }
    let full_width = coeffs.width() as usize;
    let mut data = coeffs.real_values().expect("DWT2 planes are real").to_vec();
    for level in (0..levels).rev() {
        let w = full_width >> level;
        let h = (coeffs.height() as usize) >> level;
        for x in 0..w {
            haar_lane_inverse(&mut data, x, full_width, h);
        }
        for y in 0..h {
            haar_lane_inverse(&mut data, y * full_width, 1, w);
        }
    }
    RealPlane::new(coeffs.width(), coeffs.height(), data)
}
