//! Grayscale rasters, binary PGM I/O, and quantization of real-valued maps.
//!
//! Only the binary graymap flavor of PGM ("P5", maxval 255) is supported so
//! that golden tests can compare files byte for byte. Comments after the
//! magic line are skipped when reading and never written.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

/// Number of luminance levels in an 8-bit image.
pub const LUMINANCE_LEVELS: u32 = 256;

#[derive(Debug, Error)]
pub enum ImageError {
    #[error("malformed PGM header: {0}")]
    MalformedHeader(String),
    #[error("truncated PGM payload: expected {expected} bytes, found {found}")]
    TruncatedData { expected: usize, found: usize },
    #[error("pixel buffer of length {len} does not match {width}x{height}")]
    BadDimensions {
        width: usize,
        height: usize,
        len: usize,
    },
    #[error("non-finite value in real map")]
    NonFiniteValue,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// An 8-bit grayscale raster stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GrayImage {
    /// Wraps a row-major pixel buffer. The buffer length must be
    /// `width * height` and both dimensions must be nonzero.
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self, ImageError> {
        if width == 0 || height == 0 || data.len() != width * height {
            return Err(ImageError::BadDimensions {
                width,
                height,
                len: data.len(),
            });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Image with every pixel set to `value`.
    pub fn constant(width: usize, height: usize, value: u8) -> Self {
        Self {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    /// Builds an image by evaluating `f(row, col)` in row-major order.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for row in 0..height {
            for col in 0..width {
                data.push(f(row, col));
            }
        }
        Self {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn pixels(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.data[row * self.width + col]
    }
}

/// A real-valued raster with the same layout as [`GrayImage`].
///
/// Holds convolution outputs and high-frequency maps before quantization.
/// Maps produced by this crate from finite inputs are finite; [`quantize`]
/// rejects anything else.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMap {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl RealMap {
    /// Wraps a row-major value buffer of length `width * height`.
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self, ImageError> {
        if width == 0 || height == 0 || data.len() != width * height {
            return Err(ImageError::BadDimensions {
                width,
                height,
                len: data.len(),
            });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Builds a map by evaluating `f(row, col)` in row-major order.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for row in 0..height {
            for col in 0..width {
                data.push(f(row, col));
            }
        }
        Self {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.width + col]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

impl From<&GrayImage> for RealMap {
    fn from(img: &GrayImage) -> Self {
        Self {
            width: img.width,
            height: img.height,
            data: img.data.iter().map(|&p| f64::from(p)).collect(),
        }
    }
}

/// How a signed real-valued response becomes 8-bit luminance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QuantizeMode {
    /// `round(clamp(|v|, 0, 255))`
    #[default]
    Absolute,
    /// `round(clamp(v + 128, 0, 255))`
    Offset128,
}

impl fmt::Display for QuantizeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuantizeMode::Absolute => "absolute",
            QuantizeMode::Offset128 => "offset128",
        })
    }
}

impl FromStr for QuantizeMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "absolute" => Ok(QuantizeMode::Absolute),
            "offset128" => Ok(QuantizeMode::Offset128),
            other => Err(format!(
                "unknown quantize mode {other:?}; expected \"absolute\" or \"offset128\""
            )),
        }
    }
}

/// Converts a real map to 8-bit luminance.
///
/// Rounding is half-away-from-zero (`f64::round`), applied after clamping to
/// `[0, 255]`, so the result is deterministic across platforms.
pub fn quantize(map: &RealMap, mode: QuantizeMode) -> Result<GrayImage, ImageError> {
    let mut data = Vec::with_capacity(map.data.len());
    for &v in &map.data {
        if !v.is_finite() {
            return Err(ImageError::NonFiniteValue);
        }
        let shifted = match mode {
            QuantizeMode::Absolute => v.abs(),
            QuantizeMode::Offset128 => v + 128.0,
        };
        data.push(shifted.clamp(0.0, 255.0).round() as u8);
    }
    Ok(GrayImage {
        width: map.width,
        height: map.height,
        data,
    })
}

/// Encodes an image as binary PGM: `P5\n<w> <h>\n255\n` followed by the raw
/// row-major pixel bytes.
pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend_from_slice(&img.data);
    out
}

/// Writes `img` to `path` in binary PGM format.
pub fn save_pgm(img: &GrayImage, path: impl AsRef<Path>) -> Result<(), ImageError> {
    fs::write(path, encode_pgm(img))?;
    Ok(())
}

/// Decodes a binary PGM byte stream.
pub fn parse_pgm(bytes: &[u8]) -> Result<GrayImage, ImageError> {
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        return Err(ImageError::MalformedHeader(
            "expected binary graymap magic \"P5\"".into(),
        ));
    }
    let mut pos = 2;
    let width = next_header_field(bytes, &mut pos)?;
    let height = next_header_field(bytes, &mut pos)?;
    let maxval = next_header_field(bytes, &mut pos)?;
    if width == 0 || height == 0 {
        return Err(ImageError::MalformedHeader(format!(
            "nonpositive dimensions {width}x{height}"
        )));
    }
    if maxval != 255 {
        return Err(ImageError::MalformedHeader(format!(
            "maxval {maxval} unsupported, expected 255"
        )));
    }
    // Exactly one whitespace byte separates the header from the payload.
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => {
            return Err(ImageError::MalformedHeader(
                "missing separator before payload".into(),
            ))
        }
    }
    let expected = width
        .checked_mul(height)
        .ok_or_else(|| ImageError::MalformedHeader("dimensions overflow".into()))?;
    let payload = &bytes[pos..];
    if payload.len() < expected {
        return Err(ImageError::TruncatedData {
            expected,
            found: payload.len(),
        });
    }
    GrayImage::new(width, height, payload[..expected].to_vec())
}

/// Reads a binary PGM file.
pub fn load_pgm(path: impl AsRef<Path>) -> Result<GrayImage, ImageError> {
    parse_pgm(&fs::read(path)?)
}

/// Parses the next unsigned decimal header field, skipping whitespace and
/// `#` comment lines.
fn next_header_field(bytes: &[u8], pos: &mut usize) -> Result<usize, ImageError> {
    loop {
        match bytes.get(*pos) {
            Some(b) if b.is_ascii_whitespace() => *pos += 1,
            Some(b'#') => {
                while let Some(&c) = bytes.get(*pos) {
                    *pos += 1;
                    if c == b'\n' {
                        break;
                    }
                }
            }
            _ => break,
        }
    }
    let start = *pos;
    while matches!(bytes.get(*pos), Some(b) if b.is_ascii_digit()) {
        *pos += 1;
    }
    if start == *pos {
        return Err(ImageError::MalformedHeader(
            "expected a decimal header field".into(),
        ));
    }
    std::str::from_utf8(&bytes[start..*pos])
        .expect("digits are ASCII")
        .parse()
        .map_err(|_| ImageError::MalformedHeader("header field out of range".into()))
}
