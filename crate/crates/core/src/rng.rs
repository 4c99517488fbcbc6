//! Seeded random numbers with a frozen, portable stream.
//!
//! Noise synthesis and the synthetic corpus must reproduce bit-for-bit from a
//! seed, across builds and platforms, so the generator is pinned here rather
//! than borrowed from a crate whose internals may change: SplitMix64 for the
//! integer stream and Box-Muller for Gaussian deviates.

use crate::error::{Error, Result};
use crate::image::Image;

/// Deterministic 64-bit generator (SplitMix64).
#[derive(Debug, Clone)]
pub struct Rng {
    state: u64,
    spare_gaussian: Option<f64>,
}

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng {
            state: seed,
            spare_gaussian: None,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` with 53 random mantissa bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, n)`.
    pub fn next_below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        (self.next_u64() % n as u64) as usize
    }

    /// Standard normal deviate via Box-Muller; pairs are cached so the
    /// uniform stream advances two draws per two deviates.
    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare_gaussian.take() {
            return z;
        }
        // Left-closed interval would allow ln(0); shift zero to the smallest
        // representable draw instead.
        let mut u1 = self.next_f64();
        if u1 == 0.0 {
            u1 = f64::MIN_POSITIVE;
        }
        let u2 = self.next_f64();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        self.spare_gaussian = Some(radius * angle.sin());
        radius * angle.cos()
    }
}

/// Adds i.i.d. `N(0, sigma^2)` noise to every sample.
///
/// The result is intentionally not clamped to `[0, 1]`: metrics evaluate the
/// raw noisy signal, and clamping happens only when saving to an integer
/// format. Deterministic for a given seed.
pub fn add_gaussian_noise(img: &Image, sigma: f64, rng: &mut Rng) -> Result<Image> {
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "noise sigma must be finite and >= 0, got {sigma}"
        )));
    }
    let samples = img
        .samples()
        .iter()
        .map(|&v| v + sigma * rng.next_gaussian())
        .collect();
    Ok(Image::from_planar_unchecked(
        img.width(),
        img.height(),
        img.channels(),
        samples,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_seed_identical_stream() {
        let mut a = Rng::new(42);
        let mut b = Rng::new(42);
        for _ in 0..1000 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn first_draws_are_frozen() {
        // Reference SplitMix64 outputs for seed 1234567; pins the stream so
        // an accidental algorithm change cannot slip through.
        let mut rng = Rng::new(1234567);
        assert_eq!(rng.next_u64(), 0x599e_d017_fb08_fc85);
        assert_eq!(rng.next_u64(), 0x2c73_f084_5854_0fa5);
        assert_eq!(rng.next_u64(), 0x883e_bce5_a3f2_7c77);
    }

    #[test]
    fn sigma_zero_is_identity() {
        let img = Image::from_planar(2, 2, 1, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let out = add_gaussian_noise(&img, 0.0, &mut Rng::new(9)).unwrap();
        assert_eq!(out.samples(), img.samples());
    }

    #[test]
    fn negative_sigma_rejected() {
        let img = Image::zeros(2, 2, 1).unwrap();
        assert!(add_gaussian_noise(&img, -0.1, &mut Rng::new(0)).is_err());
    }

    #[test]
    fn same_seed_same_noise() {
        let img = Image::constant(16, 16, 1, 0.5).unwrap();
        let a = add_gaussian_noise(&img, 0.1, &mut Rng::new(77)).unwrap();
        let b = add_gaussian_noise(&img, 0.1, &mut Rng::new(77)).unwrap();
        assert_eq!(a.samples(), b.samples());
    }

    #[test]
    fn empirical_std_matches_sigma() {
        // 3-sigma bound on the std estimate over 256x256 samples.
        let sigma = 25.0 / 255.0;
        let img = Image::constant(256, 256, 1, 0.5).unwrap();
        let noisy = add_gaussian_noise(&img, sigma, &mut Rng::new(2024)).unwrap();
        let n = noisy.samples().len() as f64;
        let mean = noisy.samples().iter().sum::<f64>() / n;
        let var = noisy
            .samples()
            .iter()
            .map(|v| (v - mean) * (v - mean))
            .sum::<f64>()
            / (n - 1.0);
        let std = var.sqrt();
        assert!(std > 0.0955 && std < 0.1005, "std = {std}");
    }
}
