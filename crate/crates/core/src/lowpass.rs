//! Linear smoothing filters and windowed statistics.
//!
//! Box means run on a summed-area table, so the cost per pixel is independent
//! of the radius. Windows are clipped at the image border and normalized by
//! the actual in-bounds pixel count; the same convention is used everywhere
//! (box filter, Gaussian tails, window statistics) so algebraic identities
//! between filter formulations stay exact at the borders.

use crate::error::{Error, Result};
use crate::image::Image;

/// Summed-area table over one channel, `(width + 1) x (height + 1)`,
/// accumulated in f64. `table[y][x]` holds the sum over all samples with
/// coordinates strictly below `(x, y)`; the first row and column are zero.
pub struct IntegralImage {
    width: usize,
    height: usize,
    table: Vec<f64>,
}

impl IntegralImage {
    /// Builds the table from a row-major single-channel sample slice.
    pub fn from_samples(width: usize, height: usize, samples: &[f64]) -> IntegralImage {
        debug_assert_eq!(samples.len(), width * height);
        let stride = width + 1;
        let mut table = vec![0.0; stride * (height + 1)];
        for y in 0..height {
            let mut row_sum = 0.0;
            for x in 0..width {
                row_sum += samples[y * width + x];
                table[(y + 1) * stride + x + 1] = table[y * stride + x + 1] + row_sum;
            }
        }
        IntegralImage {
            width,
            height,
            table,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Sum over the half-open rectangle `[x0, x1) x [y0, y1)` in four lookups.
    #[inline]
    pub fn rect_sum(&self, x0: usize, y0: usize, x1: usize, y1: usize) -> f64 {
        debug_assert!(x0 <= x1 && x1 <= self.width);
        debug_assert!(y0 <= y1 && y1 <= self.height);
        let stride = self.width + 1;
        self.table[y1 * stride + x1] - self.table[y0 * stride + x1] - self.table[y1 * stride + x0]
            + self.table[y0 * stride + x0]
    }
}

#[inline]
fn window_bounds(center: usize, radius: usize, size: usize) -> (usize, usize) {
    let lo = center.saturating_sub(radius);
    let hi = (center + radius + 1).min(size);
    (lo, hi)
}

fn box_mean_channel(width: usize, height: usize, samples: &[f64], radius: usize) -> Vec<f64> {
    let integral = IntegralImage::from_samples(width, height, samples);
    let mut out = vec![0.0; width * height];
    for y in 0..height {
        let (y0, y1) = window_bounds(y, radius, height);
        for x in 0..width {
            let (x0, x1) = window_bounds(x, radius, width);
            let count = ((y1 - y0) * (x1 - x0)) as f64;
            out[y * width + x] = integral.rect_sum(x0, y0, x1, y1) / count;
        }
    }
    out
}

/// Mean over the `(2r+1)^2` window centered at each pixel, clipped to the
/// image and normalized by the true in-window count.
pub fn box_mean(img: &Image, radius: usize) -> Result<Image> {
    if radius < 1 {
        return Err(Error::InvalidParameter("box radius must be >= 1".into()));
    }
    let mut samples = Vec::with_capacity(img.samples().len());
    for c in 0..img.channels() {
        samples.extend(box_mean_channel(
            img.width(),
            img.height(),
            img.channel_samples(c),
            radius,
        ));
    }
    Ok(Image::from_planar_unchecked(
        img.width(),
        img.height(),
        img.channels(),
        samples,
    ))
}

/// `count` sequential applications of [`box_mean`].
pub fn cascaded_box(img: &Image, radius: usize, count: usize) -> Result<Image> {
    if count < 1 {
        return Err(Error::InvalidParameter("cascade count must be >= 1".into()));
    }
    let mut out = box_mean(img, radius)?;
    for _ in 1..count {
        out = box_mean(&out, radius)?;
    }
    Ok(out)
}

fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let half = (3.0 * sigma).ceil() as usize;
    let mut kernel = Vec::with_capacity(2 * half + 1);
    for i in -(half as isize)..=(half as isize) {
        let t = i as f64;
        kernel.push((-t * t / (2.0 * sigma * sigma)).exp());
    }
    let sum: f64 = kernel.iter().sum();
    kernel.iter_mut().for_each(|w| *w /= sum);
    kernel
}

fn gaussian_pass(
    width: usize,
    height: usize,
    samples: &[f64],
    kernel: &[f64],
    horizontal: bool,
) -> Vec<f64> {
    let half = kernel.len() / 2;
    let mut out = vec![0.0; width * height];
    for y in 0..height {
        for x in 0..width {
            let (pos, size) = if horizontal { (x, width) } else { (y, height) };
            let mut acc = 0.0;
            let mut weight = 0.0;
            for (k, &w) in kernel.iter().enumerate() {
                let offset = k as isize - half as isize;
                let p = pos as isize + offset;
                if p < 0 || p >= size as isize {
                    continue;
                }
                let sample = if horizontal {
                    samples[y * width + p as usize]
                } else {
                    samples[p as usize * width + x]
                };
                acc += w * sample;
                weight += w;
            }
            // Renormalize over the in-bounds taps: clipped-window convention.
            out[y * width + x] = acc / weight;
        }
    }
    out
}

/// Separable Gaussian blur, kernel truncated at `ceil(3 sigma)` and
/// renormalized over the in-bounds taps at the borders.
pub fn gaussian_blur(img: &Image, sigma: f64) -> Result<Image> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "gaussian sigma must be finite and > 0, got {sigma}"
        )));
    }
    let kernel = gaussian_kernel(sigma);
    let mut samples = Vec::with_capacity(img.samples().len());
    for c in 0..img.channels() {
        let h = gaussian_pass(img.width(), img.height(), img.channel_samples(c), &kernel, true);
        samples.extend(gaussian_pass(img.width(), img.height(), &h, &kernel, false));
    }
    Ok(Image::from_planar_unchecked(
        img.width(),
        img.height(),
        img.channels(),
        samples,
    ))
}

/// Per-pixel local statistics over clipped `(2r+1)^2` windows: the moment
/// maps a guided filter's coefficient solve needs.
pub struct WindowStats {
    pub mean_i: Image,
    pub mean_g: Image,
    /// Guidance variance, floored at zero to absorb cancellation noise.
    pub var_g: Image,
    /// Target/guidance covariance, unfloored (sign is meaningful).
    pub cov_ig: Image,
}

/// Computes windowed mean/variance/covariance maps for a single-channel pair.
pub fn window_stats(target: &Image, guidance: &Image, radius: usize) -> Result<WindowStats> {
    if target.channels() != 1 || guidance.channels() != 1 {
        return Err(Error::InvalidParameter(
            "window statistics need single-channel images".into(),
        ));
    }
    if !target.same_plane(guidance) {
        return Err(Error::DimensionMismatch(
            "target and guidance differ in size".into(),
        ));
    }
    let mean_i = box_mean(target, radius)?;
    let mean_g = box_mean(guidance, radius)?;
    let mean_gg = box_mean(&guidance.mul(guidance)?, radius)?;
    let mean_ig = box_mean(&target.mul(guidance)?, radius)?;
    // var = E[G^2] - E[G]^2, floored: with f64 accumulation the floor only
    // catches ~1e-16 cancellation residue.
    let var_g = mean_gg.zip_with(&mean_g, |gg, g| (gg - g * g).max(0.0))?;
    let cov_ig = mean_ig
        .zip_with(&mean_i.mul(&mean_g)?, |ig, im_gm| ig - im_gm)?;
    Ok(WindowStats {
        mean_i,
        mean_g,
        var_g,
        cov_ig,
    })
}

/// Choice of smoothing filter used to build unsharp masks and filter bases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LowPassSpec {
    Box { radius: usize },
    CascadedBox { radius: usize, count: usize },
    Gaussian { sigma: f64 },
}

impl LowPassSpec {
    /// Two chained box means of the given radius.
    pub fn cascaded(radius: usize) -> LowPassSpec {
        LowPassSpec::CascadedBox { radius, count: 2 }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            LowPassSpec::Box { radius } | LowPassSpec::CascadedBox { radius, .. } if radius < 1 => {
                Err(Error::InvalidParameter("box radius must be >= 1".into()))
            }
            LowPassSpec::CascadedBox { count, .. } if count < 1 => {
                Err(Error::InvalidParameter("cascade count must be >= 1".into()))
            }
            LowPassSpec::Gaussian { sigma } if !(sigma > 0.0) || !sigma.is_finite() => Err(
                Error::InvalidParameter("gaussian sigma must be finite and > 0".into()),
            ),
            _ => Ok(()),
        }
    }

    pub fn apply(&self, img: &Image) -> Result<Image> {
        self.validate()?;
        match *self {
            LowPassSpec::Box { radius } => box_mean(img, radius),
            LowPassSpec::CascadedBox { radius, count } => cascaded_box(img, radius, count),
            LowPassSpec::Gaussian { sigma } => gaussian_blur(img, sigma),
        }
    }
}

impl Default for LowPassSpec {
    /// Box mean with radius 8, the workhorse setting for mask construction.
    fn default() -> LowPassSpec {
        LowPassSpec::Box { radius: 8 }
    }
}
