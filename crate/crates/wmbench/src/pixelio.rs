//! 8-bit grayscale images, their real-valued counterparts, and binary PGM
//! (P5) input/output.
//!
//! PGM is the interchange format of this crate: ASCII header `P5`, width,
//! height, maxval 255 (header tokens may be separated by any whitespace and
//! `#` comments), one whitespace byte, then the raw row-major raster.
//! [`save_pgm`] always writes the canonical form `P5\n<w> <h>\n255\n<raster>`
//! so that save/load round-trips are bit-exact.

use crate::error::Error;
use crate::Result;

/// An 8-bit grayscale raster. Pixels are stored row-major, top to bottom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

impl Image {
    pub fn new(width: u32, height: u32, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::ZeroDimension);
        }
        let expected = width as usize * height as usize;
        if pixels.len() != expected {
            return Err(Error::BufferLengthMismatch {
                width,
                height,
                len: pixels.len(),
            });
        }
        Ok(Image {
            width,
            height,
            pixels,
        })
    }

    /// Constant-valued image, mostly useful in tests and fixtures.
    pub fn constant(width: u32, height: u32, value: u8) -> Self {
        Image::new(width, height, vec![value; width as usize * height as usize])
            .expect("nonzero dimensions")
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        false // width and height are >= 1 by construction
    }

    pub fn same_dimensions(&self, other: &Image) -> bool {
        self.width == other.width && self.height == other.height
    }
}

/// A real-valued plane with the same row-major layout as [`Image`].
/// Intermediate representation between pixels and transform coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct RealPlane {
    width: u32,
    height: u32,
    values: Vec<f64>,
}

impl RealPlane {
    pub fn new(width: u32, height: u32, values: Vec<f64>) -> Result<Self> {
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
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue(i));
        }
        Ok(RealPlane {
            width,
            height,
            values,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Rounding rule used whenever real values are quantized back to pixels:
/// nearest integer, ties away from zero. `f64::round` implements exactly
/// this, the helper exists so call sites name the rule.
pub(crate) fn round_half_away(v: f64) -> f64 {
    v.round()
}

/// Parse a binary PGM (P5, maxval 255) byte stream.
pub fn load_pgm(bytes: &[u8]) -> Result<Image> {
    let mut cursor = Cursor { bytes, pos: 0 };
    if cursor.take() != Some(b'P') || cursor.take() != Some(b'5') {
        return Err(Error::PgmBadMagic);
    }
    // The magic must be its own token.
    match cursor.peek() {
        Some(c) if is_pgm_space(c) || c == b'#' => {}
        _ => return Err(Error::PgmBadMagic),
    }
    let width = cursor.next_uint("width")?;
    let height = cursor.next_uint("height")?;
    let maxval = cursor.next_uint("maxval")?;
    if maxval != 255 {
        return Err(Error::PgmUnsupportedMaxval(maxval));
    }
    // Exactly one whitespace byte separates the header from the raster.
    match cursor.take() {
        Some(c) if is_pgm_space(c) => {}
        _ => return Err(Error::PgmMalformedHeader(
            "missing whitespace before raster".into(),
        )),
    }
    if width == 0 || height == 0 {
        return Err(Error::ZeroDimension);
    }
    if width > u32::MAX as u64 || height > u32::MAX as u64 {
        return Err(Error::PgmMalformedHeader("dimensions overflow".into()));
    }
    let expected = (width as usize)
        .checked_mul(height as usize)
        .ok_or_else(|| Error::PgmMalformedHeader("dimensions overflow".into()))?;
    let remaining = &cursor.bytes[cursor.pos..];
    if remaining.len() < expected {
        return Err(Error::PgmTruncated {
            expected,
            found: remaining.len(),
        });
    }
    Image::new(width as u32, height as u32, remaining[..expected].to_vec())
}

/// Serialize an image as canonical binary PGM: `P5\n<w> <h>\n255\n` + raster.
/// Deterministic and bit-exact; `load_pgm(save_pgm(img)) == img`.
pub fn save_pgm(img: &Image) -> Vec<u8> {
    let header = format!("P5\n{} {}\n255\n", img.width(), img.height());
    let mut out = Vec::with_capacity(header.len() + img.len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(img.pixels());
    out
}

/// Widen pixels to real values, exactly.
pub fn to_real(img: &Image) -> RealPlane {
    let values = img.pixels().iter().map(|&p| f64::from(p)).collect();
    RealPlane::new(img.width(), img.height(), values).expect("pixel values are finite")
}

/// Quantize a real plane back to pixels: round half away from zero, then
/// clamp to [0, 255]. Errors on NaN or infinite input.
pub fn from_real(plane: &RealPlane) -> Result<Image> {
    // RealPlane guarantees finiteness, but accept planes built elsewhere.
    let mut pixels = Vec::with_capacity(plane.values().len());
    for (i, &v) in plane.values().iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFiniteValue(i));
        }
        pixels.push(round_half_away(v).clamp(0.0, 255.0) as u8);
    }
    Image::new(plane.width(), plane.height(), pixels)
}

fn is_pgm_space(c: u8) -> bool {
    matches!(c, b' ' | b'\t' | b'\n' | b'\r' | 0x0b | 0x0c)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn take(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    /// Skip whitespace and `#` comments (comment runs to end of line).
    fn skip_separators(&mut self) {
        while let Some(c) = self.peek() {
            if is_pgm_space(c) {
                self.pos += 1;
            } else if c == b'#' {
                while let Some(c) = self.take() {
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn next_uint(&mut self, what: &str) -> Result<u64> {
        self.skip_separators();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(Error::PgmMalformedHeader(format!(
                "expected decimal {what}"
            )));
        }
        let mut value: u64 = 0;
        for &d in &self.bytes[start..self.pos] {
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(u64::from(d - b'0')))
                .ok_or_else(|| Error::PgmMalformedHeader(format!("{what} overflows")))?;
        }
        Ok(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_minimal_stream() {
        let img = load_pgm(b"P5\n2 2\n255\n\x0a\x14\x1e\x28").unwrap();
        assert_eq!(img.width(), 2);
        assert_eq!(img.height(), 2);
        assert_eq!(img.pixels(), &[10, 20, 30, 40]);
    }

    #[test]
    fn rejects_wrong_magic() {
        assert!(matches!(load_pgm(b"P6\n1 1\n255\n\x00"), Err(Error::PgmBadMagic)));
        assert!(matches!(load_pgm(b"P5x"), Err(Error::PgmBadMagic)));
        assert!(matches!(load_pgm(b""), Err(Error::PgmBadMagic)));
    }

    #[test]
    fn rejects_wrong_maxval() {
        assert!(matches!(
            load_pgm(b"P5\n1 1\n65535\n\x00\x00"),
            Err(Error::PgmUnsupportedMaxval(65535))
        ));
    }

    #[test]
    fn rejects_truncated_raster() {
        assert!(matches!(
            load_pgm(b"P5\n2 2\n255\n\x0a\x14"),
            Err(Error::PgmTruncated {
                expected: 4,
                found: 2
            })
        ));
    }

    #[test]
    fn rejects_zero_dimension() {
        assert!(matches!(load_pgm(b"P5\n0 2\n255\n"), Err(Error::ZeroDimension)));
    }

    #[test]
    fn header_tolerates_comments_and_whitespace() {
        let img = load_pgm(b"P5 # a comment\n  2\t1 # another\n 255 \x05\x06").unwrap();
        assert_eq!((img.width(), img.height()), (2, 1));
        assert_eq!(img.pixels(), &[5, 6]);
    }

    #[test]
    fn save_is_canonical() {
        let img = Image::new(1, 1, vec![0]).unwrap();
        assert_eq!(save_pgm(&img), b"P5\n1 1\n255\n\x00");
        let img = Image::new(2, 2, vec![10, 20, 30, 40]).unwrap();
        assert_eq!(save_pgm(&img), b"P5\n2 2\n255\n\x0a\x14\x1e\x28");
    }

    #[test]
    fn from_real_rounds_and_clamps() {
        let plane = RealPlane::new(1, 4, vec![-3.2, 260.7, 127.5, 0.49]).unwrap();
        let img = from_real(&plane).unwrap();
        assert_eq!(img.pixels(), &[0, 255, 128, 0]);
    }

    #[test]
    fn from_real_rejects_nan() {
        // Bypass RealPlane validation to hit from_real's own check.
        let plane = RealPlane {
            width: 1,
            height: 1,
            values: vec![f64::NAN],
        };
        assert!(matches!(from_real(&plane), Err(Error::NonFiniteValue(0))));
    }

    #[test]
    fn to_real_preserves_extremes() {
        let img = Image::new(2, 1, vec![0, 255]).unwrap();
        assert_eq!(to_real(&img).values(), &[0.0, 255.0]);
    }

    fn arb_image() -> impl Strategy<Value = Image> {
        (1u32..20, 1u32..20)
            .prop_flat_map(|(w, h)| {
                proptest::collection::vec(any::<u8>(), (w * h) as usize)
                    .prop_map(move |px| Image::new(w, h, px).unwrap())
            })
    }

    proptest! {
        #[test]
        fn save_load_round_trip(img in arb_image()) {
            let bytes = save_pgm(&img);
            let back = load_pgm(&bytes).unwrap();
            prop_assert_eq!(&back, &img);
            // Canonical streams survive a second round bit-exactly.
            prop_assert_eq!(save_pgm(&back), bytes);
        }

        #[test]
        fn real_round_trip_is_identity(img in arb_image()) {
            let back = from_real(&to_real(&img)).unwrap();
            prop_assert_eq!(back, img);
        }

        #[test]
        fn from_real_stays_in_range(
            vals in proptest::collection::vec(-1e4f64..1e4, 16)
        ) {
            let plane = RealPlane::new(4, 4, vals.clone()).unwrap();
            let img = from_real(&plane).unwrap();
            for (&p, &v) in img.pixels().iter().zip(&vals) {
                if (-0.5..=255.49).contains(&v) {
                    prop_assert!((f64::from(p) - v).abs() <= 0.5);
                }
            }
        }
    }
}
