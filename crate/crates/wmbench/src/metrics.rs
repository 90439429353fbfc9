//! Image quality metrics: MSE, SNR, PSNR and NVF-weighted PSNR.
//!
//! All dB values use base-10 logs and a fixed 8-bit peak of 255. Degenerate
//! cases are reported as IEEE infinities (`f64::INFINITY` /
//! `f64::NEG_INFINITY`), which the table emitters serialize as `inf` /
//! `-inf`; no metric ever raises a floating-point exception.
//!
//! Weighted PSNR uses the Noise Visibility Function
//! `NVF(i) = 1 / (1 + theta * var(i))`, where `var(i)` is the local
//! variance in an edge-replicated window around pixel `i` and
//! `theta = theta_scale / max var`. NVF is 1 in flat regions (noise fully
//! visible) and approaches 0 in heavy texture (noise masked). wPSNR scales
//! each error term by the reference image's NVF before averaging, so
//! wPSNR >= PSNR always, with equality on constant references.

use crate::error::Error;
use crate::pixelio::{Image, RealPlane};
use crate::Result;

/// Peak signal value for 8-bit data.
pub const PEAK: f64 = 255.0;

/// Window size used by [`wpsnr`]'s NVF.
pub const NVF_WINDOW: usize = 9;

/// Theta scale used by [`wpsnr`]'s NVF.
pub const NVF_THETA_SCALE: f64 = 150.0;

fn check_dims(a: &Image, b: &Image) -> Result<()> {
    if a.same_dimensions(b) {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(
            a.width(),
            a.height(),
            b.width(),
            b.height(),
        ))
    }
}

/// Mean squared error between two images of equal dimensions.
pub fn mse(a: &Image, b: &Image) -> Result<f64> {
    check_dims(a, b)?;
    let sum: f64 = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&x, &y)| {
            let d = f64::from(x) - f64::from(y);
            d * d
        })
        .sum();
    Ok(sum / a.len() as f64)
}

/// Peak signal-to-noise ratio in dB: `10*log10(255^2 / mse)`.
/// Identical images give `+inf`.
pub fn psnr(a: &Image, b: &Image) -> Result<f64> {
    let mse = mse(a, b)?;
    Ok(if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (PEAK * PEAK / mse).log10()
    })
}

/// Signal-to-noise ratio in dB with `a` as the reference signal:
/// `10*log10(sum a^2 / sum (a-b)^2)`.
pub fn snr(a: &Image, b: &Image) -> Result<f64> {
    check_dims(a, b)?;
    let mut signal = 0.0f64;
    let mut noise = 0.0f64;
    for (&x, &y) in a.pixels().iter().zip(b.pixels()) {
        let xf = f64::from(x);
        let d = xf - f64::from(y);
        signal += xf * xf;
        noise += d * d;
    }
    Ok(if noise == 0.0 {
        f64::INFINITY
    } else if signal == 0.0 {
        f64::NEG_INFINITY
    } else {
        10.0 * (signal / noise).log10()
    })
}

/// Noise Visibility Function of an image: per-pixel weights in (0, 1].
/// `window` must be odd and >= 3; borders are edge-replicated.
pub fn nvf(img: &Image, window: usize, theta_scale: f64) -> Result<RealPlane> {
    if window < 3 || window.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "NVF window must be odd and >= 3, got {window}"
        )));
    }
    if !(theta_scale > 0.0 && theta_scale.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "NVF theta scale must be positive, got {theta_scale}"
        )));
    }
    let (w, h) = (img.width() as i64, img.height() as i64);
    let r = (window / 2) as i64;
    let count = (window * window) as f64;
    let mut variance = vec![0.0f64; img.len()];
    let mut max_var = 0.0f64;
    for y in 0..h {
        for x in 0..w {
            let mut sum = 0.0f64;
            let mut sum_sq = 0.0f64;
            for dy in -r..=r {
                let yy = (y + dy).clamp(0, h - 1);
                for dx in -r..=r {
                    let xx = (x + dx).clamp(0, w - 1);
                    let v = f64::from(img.pixels()[(yy * w + xx) as usize]);
                    sum += v;
                    sum_sq += v * v;
                }
            }
            let mean = sum / count;
            let var = (sum_sq / count - mean * mean).max(0.0);
            variance[(y * w + x) as usize] = var;
            max_var = max_var.max(var);
        }
    }
    let values = if max_var == 0.0 {
        vec![1.0; img.len()] // flat image: noise everywhere equally visible
    } else {
        let theta = theta_scale / max_var;
        variance.iter().map(|&v| 1.0 / (1.0 + theta * v)).collect()
    };
    RealPlane::new(img.width(), img.height(), values)
}

/// NVF-weighted PSNR in dB. The error at each pixel is scaled by the
/// reference image's NVF (window [`NVF_WINDOW`], scale
/// [`NVF_THETA_SCALE`]) before squaring and averaging.
pub fn wpsnr(a: &Image, b: &Image) -> Result<f64> {
    check_dims(a, b)?;
    let weights = nvf(a, NVF_WINDOW, NVF_THETA_SCALE)?;
    let sum: f64 = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .zip(weights.values())
        .map(|((&x, &y), &nv)| {
            let d = nv * (f64::from(x) - f64::from(y));
            d * d
        })
        .sum();
    let wmse = sum / a.len() as f64;
    Ok(if wmse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (PEAK * PEAK / wmse).log10()
    })
}

/// All four comparison metrics for a reference/test pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityReport {
    pub mse: f64,
    pub snr_db: f64,
    pub psnr_db: f64,
    pub wpsnr_db: f64,
}

impl QualityReport {
    pub fn compute(reference: &Image, test: &Image) -> Result<Self> {
        Ok(QualityReport {
            mse: mse(reference, test)?,
            snr_db: snr(reference, test)?,
            psnr_db: psnr(reference, test)?,
            wpsnr_db: wpsnr(reference, test)?,
        })
    }
}

/// PSNR is reported to two decimal places.
pub fn format_db2(v: f64) -> String {
    format!("{v:.2}")
}

/// SNR and wPSNR are reported to four decimal places.
pub fn format_db4(v: f64) -> String {
    format!("{v:.4}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn img(w: u32, h: u32, px: Vec<u8>) -> Image {
        Image::new(w, h, px).unwrap()
    }

    #[test]
    fn mse_hand_checked() {
        let a = img(2, 2, vec![10, 20, 30, 40]);
        assert_eq!(mse(&a, &a).unwrap(), 0.0);
        let b = img(2, 2, vec![12, 20, 30, 44]);
        assert_eq!(mse(&a, &b).unwrap(), 5.0);
        let x = img(1, 1, vec![0]);
        let y = img(1, 1, vec![255]);
        assert_eq!(mse(&x, &y).unwrap(), 65025.0);
    }

    #[test]
    fn psnr_extremes() {
        let x = img(1, 1, vec![0]);
        let y = img(1, 1, vec![255]);
        assert_eq!(psnr(&x, &y).unwrap(), 0.0);
        assert_eq!(psnr(&x, &x).unwrap(), f64::INFINITY);
    }

    #[test]
    fn snr_hand_checked() {
        let a = img(1, 1, vec![100]);
        let b = img(1, 1, vec![90]);
        assert!((snr(&a, &b).unwrap() - 20.0).abs() < 1e-12);

        let a = img(2, 2, vec![10, 20, 30, 40]);
        let b = img(2, 2, vec![12, 20, 30, 44]);
        // sum a^2 = 3000, sum d^2 = 20
        assert!((snr(&a, &b).unwrap() - 10.0 * 150.0f64.log10()).abs() < 1e-12);

        assert_eq!(snr(&a, &a).unwrap(), f64::INFINITY);
        let z = img(1, 1, vec![0]);
        let nz = img(1, 1, vec![1]);
        assert_eq!(snr(&z, &nz).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = img(2, 1, vec![0, 0]);
        let b = img(1, 2, vec![0, 0]);
        assert!(matches!(mse(&a, &b), Err(Error::DimensionMismatch(..))));
    }

    #[test]
    fn nvf_is_flat_one_on_constant_images() {
        let c = Image::constant(5, 5, 77);
        let weights = nvf(&c, 3, 150.0).unwrap();
        assert!(weights.values().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn nvf_center_of_bright_spot_is_minimal() {
        let mut px = vec![10u8; 9];
        px[4] = 250;
        let weights = nvf(&img(3, 3, px), 3, 150.0).unwrap();
        let center = weights.values()[4];
        assert!(weights.values().iter().all(|&v| center <= v));
        assert!(weights.values().iter().all(|&v| v > 0.0 && v <= 1.0));
    }

    #[test]
    fn nvf_rejects_bad_window() {
        let c = Image::constant(4, 4, 0);
        assert!(nvf(&c, 4, 150.0).is_err());
        assert!(nvf(&c, 1, 150.0).is_err());
        assert!(nvf(&c, 3, 0.0).is_err());
    }

    #[test]
    fn wpsnr_equals_psnr_on_constant_reference() {
        let a = Image::constant(8, 8, 128);
        let mut px = a.pixels().to_vec();
        px[3] = 140;
        px[40] = 100;
        let b = img(8, 8, px);
        let p = psnr(&a, &b).unwrap();
        let wp = wpsnr(&a, &b).unwrap();
        assert!((p - wp).abs() < 1e-12);
        assert_eq!(wpsnr(&a, &a).unwrap(), f64::INFINITY);
    }

    #[test]
    fn db_formatting() {
        assert_eq!(format_db2(43.333), "43.33");
        assert_eq!(format_db4(50.00314), "50.0031");
        assert_eq!(format_db2(f64::INFINITY), "inf");
        assert_eq!(format_db4(f64::NEG_INFINITY), "-inf");
    }

    fn arb_pair() -> impl Strategy<Value = (Image, Image)> {
        (
            proptest::collection::vec(any::<u8>(), 64),
            proptest::collection::vec(any::<u8>(), 64),
        )
            .prop_map(|(a, b)| (img(8, 8, a), img(8, 8, b)))
    }

    proptest! {
        #[test]
        fn mse_symmetric_and_zero_iff_identical((a, b) in arb_pair()) {
            prop_assert_eq!(mse(&a, &b).unwrap(), mse(&b, &a).unwrap());
            prop_assert_eq!(mse(&a, &b).unwrap() == 0.0, a == b);
        }

        #[test]
        fn wpsnr_never_below_psnr((a, b) in arb_pair()) {
            let p = psnr(&a, &b).unwrap();
            let wp = wpsnr(&a, &b).unwrap();
            prop_assert!(wp >= p - 1e-12);
        }
    }
}
