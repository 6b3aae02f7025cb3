//! Canonical in-memory raster types and value-range conventions.
//!
//! All imagery is float32 in `[0, 1]`, row-major and channel-interleaved:
//! sample `(row, col, channel)` lives at `(row * width + col) * channels + channel`.
//! 8-bit data enters through [`MultiBandImage::from_u8`] (divide by 255) and
//! leaves through [`MultiBandImage::to_u8`] (multiply by 255, round half away
//! from zero, clamp). Label maps are `u8` per pixel with the reserved
//! [`IGNORE`] sentinel 255; class ids occupy `0..K-1` with `K <= 255`.

mod container;
mod png;
mod rng;

pub use container::{read_container, write_container, Container, ContainerHeader};
pub use png::{read_png, write_png};
pub use rng::{stream_for_sample, stream_for_sample_step, SeedRng};

use crate::{Error, Result};

/// Label value marking pixels excluded from losses and metrics.
pub const IGNORE: u8 = 255;

/// Channel semantics carried alongside raster data.
///
/// The band list decides which augmentations are meaningful: hue/saturation
/// and RGB gray conversion require exactly `[R, G, B]` (in order); everything
/// else works on any layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Band {
    R,
    G,
    B,
    Nir,
    Vv,
    Vh,
    Generic,
}

impl Band {
    pub fn as_str(self) -> &'static str {
        match self {
            Band::R => "R",
            Band::G => "G",
            Band::B => "B",
            Band::Nir => "NIR",
            Band::Vv => "VV",
            Band::Vh => "VH",
            Band::Generic => "GENERIC",
        }
    }
}

impl std::str::FromStr for Band {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "R" => Ok(Band::R),
            "G" => Ok(Band::G),
            "B" => Ok(Band::B),
            "NIR" => Ok(Band::Nir),
            "VV" => Ok(Band::Vv),
            "VH" => Ok(Band::Vh),
            "GENERIC" => Ok(Band::Generic),
            other => Err(Error::InvalidData(format!("unknown band tag {other:?}"))),
        }
    }
}

/// H×W×C float raster with samples in `[0, 1]` and per-channel band tags.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiBandImage {
    height: usize,
    width: usize,
    channels: usize,
    bands: Vec<Band>,
    data: Vec<f32>,
}

impl MultiBandImage {
    /// Validating constructor. `data` is row-major channel-interleaved and
    /// every sample must be finite and in `[0, 1]`.
    pub fn new(height: usize, width: usize, bands: Vec<Band>, data: Vec<f32>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::InvalidData("image dims must be >= 1x1".into()));
        }
        if bands.is_empty() {
            return Err(Error::InvalidData("image needs at least one band".into()));
        }
        let channels = bands.len();
        if data.len() != height * width * channels {
            return Err(Error::DimMismatch(format!(
                "payload holds {} samples, header claims {}x{}x{}",
                data.len(),
                height,
                width,
                channels
            )));
        }
        for &v in &data {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidData(format!(
                    "sample {v} outside [0,1] or non-finite"
                )));
            }
        }
        Ok(Self {
            height,
            width,
            channels,
            bands,
            data,
        })
    }

    /// Constant-valued image, `value` must be in `[0, 1]`.
    pub fn constant(height: usize, width: usize, bands: Vec<Band>, value: f32) -> Result<Self> {
        let n = height * width * bands.len();
        Self::new(height, width, bands, vec![value; n])
    }

    /// Converts an 8-bit raster: each output sample equals `raw / 255`
    /// exactly in float32.
    pub fn from_u8(height: usize, width: usize, bands: Vec<Band>, raw: &[u8]) -> Result<Self> {
        if raw.len() != height * width * bands.len() {
            return Err(Error::DimMismatch(format!(
                "raw holds {} bytes, expected {}x{}x{}",
                raw.len(),
                height,
                width,
                bands.len()
            )));
        }
        let data = raw.iter().map(|&v| v as f32 / 255.0).collect();
        Self::new(height, width, bands, data)
    }

    /// Quantizes to 8 bits: `round(sample * 255)` with round half away from
    /// zero, clamped to `[0, 255]`. The rounding rule is a constant of the
    /// on-disk format.
    pub fn to_u8(&self) -> Vec<u8> {
        self.data
            .iter()
            .map(|&v| (v * 255.0).round().clamp(0.0, 255.0) as u8)
            .collect()
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn bands(&self) -> &[Band] {
        &self.bands
    }

    /// True when the band layout is exactly `[R, G, B]`.
    pub fn is_rgb(&self) -> bool {
        self.bands == [Band::R, Band::G, Band::B]
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize, channel: usize) -> f32 {
        self.data[(row * self.width + col) * self.channels + channel]
    }

    /// Rebuilds with the same shape and bands from already-validated samples.
    pub(crate) fn with_data(&self, data: Vec<f32>) -> Self {
        debug_assert_eq!(data.len(), self.data.len());
        Self {
            height: self.height,
            width: self.width,
            channels: self.channels,
            bands: self.bands.clone(),
            data,
        }
    }

    /// Rebuilds with new spatial dims (same bands). `data` must already obey
    /// the `[0,1]` invariant; callers are the warp/crop kernels which only
    /// ever interpolate between valid samples and the fill value.
    pub(crate) fn with_dims(&self, height: usize, width: usize, data: Vec<f32>) -> Self {
        debug_assert_eq!(data.len(), height * width * self.channels);
        Self {
            height,
            width,
            channels: self.channels,
            bands: self.bands.clone(),
            data,
        }
    }
}

/// Per-pixel class ids in `{0..K-1}` plus the [`IGNORE`] sentinel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    height: usize,
    width: usize,
    classes: usize,
    data: Vec<u8>,
}

impl LabelMap {
    pub fn new(height: usize, width: usize, classes: usize, data: Vec<u8>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::InvalidData("label dims must be >= 1x1".into()));
        }
        if !(2..=255).contains(&classes) {
            return Err(Error::InvalidParam(format!(
                "class count {classes} outside 2..=255"
            )));
        }
        if data.len() != height * width {
            return Err(Error::DimMismatch(format!(
                "payload holds {} labels, header claims {}x{}",
                data.len(),
                height,
                width
            )));
        }
        for &v in &data {
            if v != IGNORE && v as usize >= classes {
                return Err(Error::InvalidData(format!(
                    "label {v} >= class count {classes}"
                )));
            }
        }
        Ok(Self {
            height,
            width,
            classes,
            data,
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.data[row * self.width + col]
    }

    pub(crate) fn with_dims(&self, height: usize, width: usize, data: Vec<u8>) -> Self {
        debug_assert_eq!(data.len(), height * width);
        Self {
            height,
            width,
            classes: self.classes,
            data,
        }
    }
}

/// Per-pixel boolean validity paired with a [`LabelMap`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidityMask {
    height: usize,
    width: usize,
    data: Vec<bool>,
}

impl ValidityMask {
    pub fn new(height: usize, width: usize, data: Vec<bool>) -> Result<Self> {
        if data.len() != height * width {
            return Err(Error::DimMismatch(format!(
                "mask holds {} entries, header claims {}x{}",
                data.len(),
                height,
                width
            )));
        }
        Ok(Self {
            height,
            width,
            data,
        })
    }

    pub fn all_valid(height: usize, width: usize) -> Self {
        Self {
            height,
            width,
            data: vec![true; height * width],
        }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn data(&self) -> &[bool] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.data[row * self.width + col]
    }

    pub fn count_valid(&self) -> usize {
        self.data.iter().filter(|&&v| v).count()
    }

    pub(crate) fn with_dims(&self, height: usize, width: usize, data: Vec<bool>) -> Self {
        debug_assert_eq!(data.len(), height * width);
        Self {
            height,
            width,
            data,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_u8_zero_case() {
        let img = MultiBandImage::from_u8(2, 2, vec![Band::R, Band::G, Band::B], &[0; 12]).unwrap();
        assert!(img.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn from_u8_definitional_values() {
        let img = MultiBandImage::from_u8(1, 2, vec![Band::Generic], &[255, 128]).unwrap();
        assert_eq!(img.get(0, 0, 0), 1.0);
        assert_eq!(img.get(0, 1, 0), 128.0 / 255.0);
        assert!((img.get(0, 1, 0) - 0.50196).abs() < 1e-5);
    }

    #[test]
    fn u8_round_trip_is_identity_over_all_values() {
        // exhaustive loop over 0..=255
        let raw: Vec<u8> = (0..=255).collect();
        let img = MultiBandImage::from_u8(16, 16, vec![Band::Generic], &raw).unwrap();
        assert_eq!(img.to_u8(), raw);
    }

    #[test]
    fn to_u8_rounds_half_away_from_zero() {
        let img = MultiBandImage::new(1, 2, vec![Band::Generic], vec![1.0, 0.5]).unwrap();
        let q = img.to_u8();
        assert_eq!(q[0], 255);
        // 0.5 * 255 = 127.5 -> 128
        assert_eq!(q[1], 128);
    }

    #[test]
    fn float_round_trip_within_one_level() {
        let mut rng = SeedRng::new(7, 0);
        let data: Vec<f32> = (0..48).map(|_| rng.gen_f32()).collect();
        let img = MultiBandImage::new(4, 4, vec![Band::Vv, Band::Vh, Band::Generic], data).unwrap();
        let back =
            MultiBandImage::from_u8(4, 4, img.bands().to_vec(), &img.to_u8()).unwrap();
        for (a, b) in img.data().iter().zip(back.data()) {
            assert!((a - b).abs() <= 0.5 / 255.0 + 1e-7, "{a} vs {b}");
        }
    }

    #[test]
    fn image_rejects_out_of_range() {
        let err = MultiBandImage::new(1, 1, vec![Band::Generic], vec![1.5]);
        assert!(err.is_err());
        let err = MultiBandImage::new(1, 1, vec![Band::Generic], vec![f32::NAN]);
        assert!(err.is_err());
    }

    #[test]
    fn labels_reject_out_of_range_class() {
        assert!(LabelMap::new(1, 2, 3, vec![0, 3]).is_err());
        assert!(LabelMap::new(1, 2, 3, vec![2, IGNORE]).is_ok());
    }
}
