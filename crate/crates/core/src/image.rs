//! Planar floating-point image container plus channel-level conversions.
//!
//! Samples are stored as `f64` in planar order: channel 0 rows first, then
//! channel 1, and so on. All filtering runs in 64-bit precision; conversion
//! to integer sample types happens only at file I/O time.

use crate::error::{Error, Result};

/// A 2-D multi-channel grid of real samples, nominal range `[0, 1]`.
///
/// Layout is planar row-major: sample `(x, y, c)` lives at index
/// `(c * height + y) * width + x`. Images are immutable values once built;
/// every operation in this crate returns a new image.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    channels: usize,
    samples: Vec<f64>,
}

impl Image {
    /// Builds an image filled with a constant value.
    pub fn constant(width: usize, height: usize, channels: usize, value: f64) -> Result<Image> {
        check_dims(width, height, channels)?;
        if !value.is_finite() {
            return Err(Error::InvalidParameter("fill value must be finite".into()));
        }
        Ok(Image {
            width,
            height,
            channels,
            samples: vec![value; width * height * channels],
        })
    }

    /// Builds an all-zero image.
    pub fn zeros(width: usize, height: usize, channels: usize) -> Result<Image> {
        Image::constant(width, height, channels, 0.0)
    }

    /// Wraps a planar sample buffer, validating length and finiteness.
    pub fn from_planar(
        width: usize,
        height: usize,
        channels: usize,
        samples: Vec<f64>,
    ) -> Result<Image> {
        check_dims(width, height, channels)?;
        if samples.len() != width * height * channels {
            return Err(Error::DimensionMismatch(format!(
                "expected {} samples, got {}",
                width * height * channels,
                samples.len()
            )));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::Format("non-finite sample in image data".into()));
        }
        Ok(Image {
            width,
            height,
            channels,
            samples,
        })
    }

    /// Internal constructor for buffers that are finite by construction.
    pub(crate) fn from_planar_unchecked(
        width: usize,
        height: usize,
        channels: usize,
        samples: Vec<f64>,
    ) -> Image {
        debug_assert_eq!(samples.len(), width * height * channels);
        Image {
            width,
            height,
            channels,
            samples,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    /// Pixels per channel.
    pub fn pixel_count(&self) -> usize {
        self.width * self.height
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub(crate) fn samples_mut(&mut self) -> &mut [f64] {
        &mut self.samples
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize, c: usize) -> usize {
        debug_assert!(x < self.width && y < self.height && c < self.channels);
        (c * self.height + y) * self.width + x
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, c: usize) -> f64 {
        self.samples[self.index(x, y, c)]
    }

    #[inline]
    pub(crate) fn set(&mut self, x: usize, y: usize, c: usize, v: f64) {
        let i = self.index(x, y, c);
        self.samples[i] = v;
    }

    /// The samples of one channel, as a contiguous slice.
    pub fn channel_samples(&self, c: usize) -> &[f64] {
        let n = self.pixel_count();
        &self.samples[c * n..(c + 1) * n]
    }

    /// Extracts one channel as a single-channel image.
    pub fn channel(&self, c: usize) -> Image {
        Image::from_planar_unchecked(
            self.width,
            self.height,
            1,
            self.channel_samples(c).to_vec(),
        )
    }

    /// Stacks single-channel images of equal size into one multi-channel image.
    pub fn from_channels(parts: &[Image]) -> Result<Image> {
        if parts.is_empty() || parts.len() > 3 {
            return Err(Error::InvalidParameter(
                "channel stack must hold 1 to 3 planes".into(),
            ));
        }
        let (w, h) = (parts[0].width, parts[0].height);
        let mut samples = Vec::with_capacity(w * h * parts.len());
        for p in parts {
            if p.channels != 1 || p.width != w || p.height != h {
                return Err(Error::DimensionMismatch(
                    "channel planes must be single-channel and equally sized".into(),
                ));
            }
            samples.extend_from_slice(&p.samples);
        }
        Ok(Image::from_planar_unchecked(w, h, parts.len(), samples))
    }

    /// Applies `f` to every sample.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Image {
        Image::from_planar_unchecked(
            self.width,
            self.height,
            self.channels,
            self.samples.iter().map(|&v| f(v)).collect(),
        )
    }

    /// Combines two same-shape images sample by sample.
    pub fn zip_with(&self, other: &Image, f: impl Fn(f64, f64) -> f64) -> Result<Image> {
        if !self.same_shape(other) {
            return Err(Error::DimensionMismatch(format!(
                "{}x{}x{} vs {}x{}x{}",
                self.width, self.height, self.channels, other.width, other.height, other.channels
            )));
        }
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Image::from_planar_unchecked(
            self.width,
            self.height,
            self.channels,
            samples,
        ))
    }

    pub fn add(&self, other: &Image) -> Result<Image> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Image) -> Result<Image> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Image) -> Result<Image> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, factor: f64) -> Image {
        self.map(|v| v * factor)
    }

    pub fn same_shape(&self, other: &Image) -> bool {
        self.width == other.width && self.height == other.height && self.channels == other.channels
    }

    pub fn same_plane(&self, other: &Image) -> bool {
        self.width == other.width && self.height == other.height
    }

    /// Smallest and largest sample over all channels.
    pub fn min_max(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &v in &self.samples {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (lo, hi)
    }
}

fn check_dims(width: usize, height: usize, channels: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidParameter(
            "width and height must be at least 1".into(),
        ));
    }
    if channels == 0 || channels > 3 {
        return Err(Error::InvalidParameter(
            "channel count must be 1, 2, or 3".into(),
        ));
    }
    Ok(())
}

/// BT.601 luma weights used by the `rgb2gray` convention.
pub const GRAY_WEIGHTS: [f64; 3] = [0.299, 0.587, 0.114];

/// Collapses a 3-channel image to luma: `y = 0.299 r + 0.587 g + 0.114 b`.
pub fn to_grayscale(img: &Image) -> Result<Image> {
    if img.channels() != 3 {
        return Err(Error::InvalidParameter(format!(
            "to_grayscale needs 3 channels, got {}",
            img.channels()
        )));
    }
    let n = img.pixel_count();
    let (r, g, b) = (
        img.channel_samples(0),
        img.channel_samples(1),
        img.channel_samples(2),
    );
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push(GRAY_WEIGHTS[0] * r[i] + GRAY_WEIGHTS[1] * g[i] + GRAY_WEIGHTS[2] * b[i]);
    }
    Ok(Image::from_planar_unchecked(img.width(), img.height(), 1, out))
}

/// Repeats a single-channel image `n` times, e.g. to feed gray guidance to a
/// filter that expects the target's channel count.
pub fn replicate_channels(img: &Image, n: usize) -> Result<Image> {
    if img.channels() != 1 {
        return Err(Error::InvalidParameter(format!(
            "replicate_channels needs 1 channel, got {}",
            img.channels()
        )));
    }
    if n == 0 || n > 3 {
        return Err(Error::InvalidParameter(
            "replica count must be 1, 2, or 3".into(),
        ));
    }
    let mut samples = Vec::with_capacity(img.samples().len() * n);
    for _ in 0..n {
        samples.extend_from_slice(img.samples());
    }
    Ok(Image::from_planar_unchecked(
        img.width(),
        img.height(),
        n,
        samples,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero_dims_and_bad_channel_counts() {
        assert!(Image::zeros(0, 4, 1).is_err());
        assert!(Image::zeros(4, 0, 1).is_err());
        assert!(Image::zeros(4, 4, 0).is_err());
        assert!(Image::zeros(4, 4, 4).is_err());
    }

    #[test]
    fn from_planar_validates_length_and_finiteness() {
        assert!(Image::from_planar(2, 2, 1, vec![0.0; 3]).is_err());
        assert!(Image::from_planar(2, 2, 1, vec![0.0, 1.0, f64::NAN, 0.5]).is_err());
        assert!(Image::from_planar(2, 2, 1, vec![0.0, 1.0, 0.25, 0.5]).is_ok());
    }

    #[test]
    fn planar_indexing_round_trips() {
        let mut img = Image::zeros(3, 2, 2).unwrap();
        img.set(2, 1, 1, 0.75);
        assert_eq!(img.get(2, 1, 1), 0.75);
        assert_eq!(img.channel(1).get(2, 1, 0), 0.75);
    }

    #[test]
    fn grayscale_definition() {
        let img = Image::from_planar(1, 1, 3, vec![1.0, 0.0, 0.0]).unwrap();
        assert_eq!(to_grayscale(&img).unwrap().get(0, 0, 0), 0.299);
        let white = Image::constant(1, 1, 3, 1.0).unwrap();
        let y = to_grayscale(&white).unwrap().get(0, 0, 0);
        assert!((y - 1.0).abs() < 1e-15);
    }

    #[test]
    fn grayscale_matches_per_pixel_oracle() {
        let mut rng = crate::rng::Rng::new(11);
        let samples: Vec<f64> = (0..8 * 8 * 3).map(|_| rng.next_f64()).collect();
        let img = Image::from_planar(8, 8, 3, samples).unwrap();
        let gray = to_grayscale(&img).unwrap();
        for y in 0..8 {
            for x in 0..8 {
                let want = 0.299 * img.get(x, y, 0) + 0.587 * img.get(x, y, 1)
                    + 0.114 * img.get(x, y, 2);
                assert_eq!(gray.get(x, y, 0), want);
            }
        }
    }

    #[test]
    fn grayscale_requires_three_channels() {
        let img = Image::zeros(2, 2, 1).unwrap();
        assert!(to_grayscale(&img).is_err());
    }

    #[test]
    fn replicate_makes_identical_channels() {
        let img = Image::from_planar(2, 2, 1, vec![0.3, 0.1, 0.9, 0.4]).unwrap();
        let rep = replicate_channels(&img, 3).unwrap();
        assert_eq!(rep.channels(), 3);
        for c in 0..3 {
            assert_eq!(rep.channel_samples(c), img.samples());
        }
        assert!(replicate_channels(&rep, 3).is_err());
    }

    #[test]
    fn replicate_then_grayscale_recovers_input() {
        let mut rng = crate::rng::Rng::new(5);
        let samples: Vec<f64> = (0..16).map(|_| rng.next_f64()).collect();
        let img = Image::from_planar(4, 4, 1, samples).unwrap();
        let back = to_grayscale(&replicate_channels(&img, 3).unwrap()).unwrap();
        for (a, b) in back.samples().iter().zip(img.samples()) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
