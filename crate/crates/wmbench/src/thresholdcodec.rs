//! Hard-threshold coefficient compression, the benchmark's attack.
//!
//! Compression is modeled as sparsification only: every coefficient whose
//! magnitude falls strictly below the threshold is zeroed, the surviving
//! coefficients are untouched, and the zero fraction ("sparsity") stands in
//! for the achievable rate. There is no quantizer or entropy coder.

use crate::error::Error;
use crate::metrics::QualityReport;
use crate::pixelio::{from_real, to_real, Image};
use crate::transforms::{self, CoefficientPlane, Coefficients, TransformSpec};
use crate::Result;

/// Threshold level plus the DC rule. With `preserve_dc` (the default) the
/// DC coefficient — for DWT2, the whole deepest approximation band, which
/// plays the DC role for every 2^levels-sized block — always survives, so
/// even a saturating threshold keeps local mean brightness instead of
/// collapsing the image to black.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdPolicy {
    threshold: f64,
    preserve_dc: bool,
}

impl ThresholdPolicy {
    /// A policy with the given threshold and DC preservation on.
    pub fn new(threshold: f64) -> Result<Self> {
        if !(threshold >= 0.0 && threshold.is_finite()) {
            return Err(Error::InvalidThreshold(threshold));
        }
        Ok(ThresholdPolicy {
            threshold,
            preserve_dc: true,
        })
    }

    pub fn preserve_dc(mut self, on: bool) -> Self {
        self.preserve_dc = on;
        self
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn preserves_dc(&self) -> bool {
        self.preserve_dc
    }
}

/// Result of one compression attack: the re-quantized output image, the
/// zero fraction of the thresholded plane, and distortion metrics against
/// the attack's input image.
#[derive(Debug, Clone)]
pub struct AttackReport {
    pub output: Image,
    pub sparsity: f64,
    pub snr_db: f64,
    pub psnr_db: f64,
    pub wpsnr_db: f64,
}

/// Magnitude scale used when comparing coefficients to the threshold.
///
/// FFT2 planes hold unnormalized coefficients (larger by sqrt(H*W) than
/// the orthonormal DCT2/DWT2 ones), so their magnitudes are brought back
/// to the orthonormal scale first. A given threshold level then removes a
/// comparable amount of signal energy no matter which transform is
/// attacked, which is what makes the per-threshold rows of the benchmark
/// comparable across transforms.
fn threshold_scale(plane: &CoefficientPlane) -> f64 {
    match plane.spec() {
        TransformSpec::Fft2 => 1.0 / (plane.width() as f64 * plane.height() as f64).sqrt(),
        _ => 1.0,
    }
}

/// Indices carrying the DC role: coefficient 0 for DCT2/FFT2, the whole
/// deepest approximation band for DWT2 (for a constant image all of its
/// energy sits there, and zeroing any of it destroys block means).
fn is_dc(plane: &CoefficientPlane, index: usize) -> bool {
    match plane.spec() {
        TransformSpec::Dwt2 { levels } => {
            let width = plane.width() as usize;
            let ll_w = width >> levels;
            let ll_h = (plane.height() as usize) >> levels;
            index % width < ll_w && index / width < ll_h
        }
        _ => index == 0,
    }
}

/// Zero every coefficient with (scaled) magnitude strictly below the
/// policy's threshold. Surviving coefficients are returned unchanged;
/// the DC positions (see [`ThresholdPolicy`]) are exempt when the policy
/// preserves DC.
pub fn hard_threshold(coeffs: &CoefficientPlane, policy: ThresholdPolicy) -> CoefficientPlane {
    let scale = threshold_scale(coeffs);
    let mut out = coeffs.clone();
    let spec_ref = coeffs;
    match out.values_mut() {
        Coefficients::Real(values) => {
            for (i, v) in values.iter_mut().enumerate() {
                if policy.preserve_dc && is_dc(spec_ref, i) {
                    continue;
                }
                if (v.abs() * scale) < policy.threshold {
                    *v = 0.0;
                }
            }
        }
        Coefficients::Complex(values) => {
            for (i, v) in values.iter_mut().enumerate() {
                if policy.preserve_dc && is_dc(spec_ref, i) {
                    continue;
                }
                if (v.norm() * scale) < policy.threshold {
                    *v = num_complex::Complex64::new(0.0, 0.0);
                }
            }
        }
    }
    out
}

/// Fraction of exactly-zero coefficients, in [0, 1].
pub fn sparsity(coeffs: &CoefficientPlane) -> f64 {
    let zeros = match coeffs.values() {
        Coefficients::Real(v) => v.iter().filter(|&&x| x == 0.0).count(),
        Coefficients::Complex(v) => v.iter().filter(|&&c| c.re == 0.0 && c.im == 0.0).count(),
    };
    zeros as f64 / coeffs.values().len() as f64
}

/// Run the full attack pipeline: forward transform, hard threshold,
/// inverse transform, re-quantize. Metrics compare the output against
/// `img`, the attack's own input.
pub fn compress_attack(
    img: &Image,
    spec: TransformSpec,
    policy: ThresholdPolicy,
) -> Result<AttackReport> {
    let coeffs = transforms::forward(&to_real(img), spec)?;
    let thresholded = hard_threshold(&coeffs, policy);
    let sparsity = sparsity(&thresholded);
    let output = from_real(&transforms::inverse(&thresholded)?)?;
    let q = QualityReport::compute(img, &output)?;
    Ok(AttackReport {
        output,
        sparsity,
        snr_db: q.snr_db,
        psnr_db: q.psnr_db,
        wpsnr_db: q.wpsnr_db,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::{dct2_forward, fft2_forward};
    use proptest::prelude::*;

    fn real_plane(values: Vec<f64>) -> CoefficientPlane {
        let n = values.len() as u32;
        CoefficientPlane::new(n, 1, TransformSpec::Dct2, Coefficients::Real(values)).unwrap()
    }

    #[test]
    fn rejects_negative_threshold() {
        assert!(matches!(
            ThresholdPolicy::new(-1.0),
            Err(Error::InvalidThreshold(_))
        ));
        assert!(ThresholdPolicy::new(f64::NAN).is_err());
    }

    #[test]
    fn threshold_zero_is_identity() {
        let plane = real_plane(vec![1.0, -5.0, 0.0, 1e-300]);
        let out = hard_threshold(&plane, ThresholdPolicy::new(0.0).unwrap());
        assert_eq!(out, plane);
    }

    #[test]
    fn boundary_is_strict_less_than() {
        let plane = real_plane(vec![1.0, -5.0, 3.0]);
        let policy = ThresholdPolicy::new(3.0).unwrap().preserve_dc(false);
        let out = hard_threshold(&plane, policy);
        assert_eq!(out.real_values().unwrap(), &[0.0, -5.0, 3.0]);
    }

    #[test]
    fn saturating_threshold_keeps_only_dc() {
        let img = crate::fixtures::noise(8, 8, 7);
        for spec in [TransformSpec::Dct2, TransformSpec::Fft2] {
            let coeffs = transforms::forward(&to_real(&img), spec).unwrap();
            let out = hard_threshold(&coeffs, ThresholdPolicy::new(1e9).unwrap());
            assert_eq!(sparsity(&out), 63.0 / 64.0);
        }
        // For DWT2 the DC role is played by the deepest approximation
        // band: 4x4 of 8x8 at one level, 1x1 at full depth.
        let coeffs = transforms::forward(&to_real(&img), TransformSpec::Dwt2 { levels: 1 }).unwrap();
        let out = hard_threshold(&coeffs, ThresholdPolicy::new(1e9).unwrap());
        assert_eq!(sparsity(&out), 48.0 / 64.0);
        let coeffs = transforms::forward(&to_real(&img), TransformSpec::Dwt2 { levels: 3 }).unwrap();
        let out = hard_threshold(&coeffs, ThresholdPolicy::new(1e9).unwrap());
        assert_eq!(sparsity(&out), 63.0 / 64.0);
    }

    #[test]
    fn sparsity_counts_exact_zeros() {
        assert_eq!(sparsity(&real_plane(vec![0.0, 0.0, 0.0, 0.0])), 1.0);
        assert_eq!(sparsity(&real_plane(vec![1.0, 2.0, -1.0, 0.5])), 0.0);
        assert_eq!(sparsity(&real_plane(vec![0.0, 1.0, 0.0, 2.0])), 0.5);
    }

    #[test]
    fn fft_threshold_uses_orthonormal_scale() {
        // An 8x8 plane of unit-variance-scale values: unnormalized FFT
        // magnitudes are ~8x larger than the DCT ones, the scaled
        // comparison must zero comparable counts at the same threshold.
        let img = crate::fixtures::noise(8, 8, 3);
        let t = 30.0;
        let policy = ThresholdPolicy::new(t).unwrap();
        let dct = hard_threshold(&dct2_forward(&to_real(&img)), policy);
        let fft = hard_threshold(&fft2_forward(&to_real(&img)).unwrap(), policy);
        let s_dct = sparsity(&dct);
        let s_fft = sparsity(&fft);
        assert!(
            (s_dct - s_fft).abs() < 0.3,
            "sparsities diverged: DCT2 {s_dct}, FFT2 {s_fft}"
        );
    }

    #[test]
    fn threshold_zero_attack_is_near_lossless() {
        let img = crate::fixtures::noise(16, 16, 11);
        for spec in [
            TransformSpec::Dct2,
            TransformSpec::Fft2,
            TransformSpec::Dwt2 { levels: 2 },
        ] {
            let report =
                compress_attack(&img, spec, ThresholdPolicy::new(0.0).unwrap()).unwrap();
            assert!(
                report.psnr_db >= 54.0,
                "{spec:?}: PSNR {} below the re-quantization bound",
                report.psnr_db
            );
        }
    }

    #[test]
    fn constant_image_is_a_fixed_point() {
        let img = Image::constant(16, 16, 200);
        for spec in [
            TransformSpec::Dct2,
            TransformSpec::Fft2,
            TransformSpec::Dwt2 { levels: 1 },
        ] {
            for t in [0.0, 50.0, 300.0, 1e9] {
                let report =
                    compress_attack(&img, spec, ThresholdPolicy::new(t).unwrap()).unwrap();
                assert_eq!(report.output, img, "{spec:?} at threshold {t}");
            }
        }
    }

    #[test]
    fn attack_propagates_dimension_errors() {
        let img = Image::constant(12, 12, 90);
        assert!(matches!(
            compress_attack(&img, TransformSpec::Fft2, ThresholdPolicy::new(1.0).unwrap()),
            Err(Error::NotPowerOfTwo(12, 12))
        ));
        assert!(matches!(
            compress_attack(
                &img,
                TransformSpec::Dwt2 { levels: 3 },
                ThresholdPolicy::new(1.0).unwrap()
            ),
            Err(Error::NotDivisible(12, 12, 3))
        ));
    }

    fn arb_coeffs() -> impl Strategy<Value = CoefficientPlane> {
        proptest::collection::vec(-400.0f64..400.0, 16).prop_map(|v| {
            CoefficientPlane::new(4, 4, TransformSpec::Dct2, Coefficients::Real(v)).unwrap()
        })
    }

    proptest! {
        #[test]
        fn sparsity_monotone_in_threshold(
            coeffs in arb_coeffs(),
            t1 in 0.0f64..500.0,
            t2 in 0.0f64..500.0,
        ) {
            let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
            let s_lo = sparsity(&hard_threshold(&coeffs, ThresholdPolicy::new(lo).unwrap()));
            let s_hi = sparsity(&hard_threshold(&coeffs, ThresholdPolicy::new(hi).unwrap()));
            prop_assert!(s_lo <= s_hi);
        }

        #[test]
        fn thresholding_is_idempotent_and_preserves_survivors(
            coeffs in arb_coeffs(),
            t in 0.0f64..500.0,
        ) {
            let policy = ThresholdPolicy::new(t).unwrap();
            let once = hard_threshold(&coeffs, policy);
            let twice = hard_threshold(&once, policy);
            prop_assert_eq!(&once, &twice);

            let input = coeffs.real_values().unwrap();
            let output = once.real_values().unwrap();
            for (i, (&before, &after)) in input.iter().zip(output).enumerate() {
                prop_assert!(after == before || (after == 0.0 && i != 0));
            }
        }

        #[test]
        fn fft_threshold_preserves_conjugate_symmetry(
            px in proptest::collection::vec(any::<u8>(), 64),
            t in 0.0f64..300.0,
        ) {
            let img = Image::new(8, 8, px).unwrap();
            let coeffs = fft2_forward(&to_real(&img)).unwrap();
            let out = hard_threshold(&coeffs, ThresholdPolicy::new(t).unwrap());
            // Magnitude thresholding keeps the spectrum symmetric, so the
            // inverse stays real and never trips the residue check.
            let back = transforms::inverse(&out);
            prop_assert!(back.is_ok());
        }
    }

}
