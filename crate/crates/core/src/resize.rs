//! Nearest, bilinear, and bicubic resampling.
//!
//! All methods use the half-pixel-centered mapping
//! `src = (dst + 0.5) * (src_size / dst_size) - 0.5` and clamp sample
//! coordinates at the borders. Bicubic uses the Keys kernel with a = -0.5 and
//! may overshoot `[0, 1]`; overshoot is kept (the range matters for metrics),
//! only finiteness is guaranteed.

use crate::error::{Error, Result};
use crate::image::Image;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResizeMethod {
    Nearest,
    Bilinear,
    Bicubic,
}

/// Resamples `img` to `new_w` x `new_h`.
pub fn resize(img: &Image, new_w: usize, new_h: usize, method: ResizeMethod) -> Result<Image> {
    if new_w == 0 || new_h == 0 {
        return Err(Error::InvalidParameter(
            "target size must be at least 1x1".into(),
        ));
    }
    let mut out = Image::zeros(new_w, new_h, img.channels())?;
    let scale_x = img.width() as f64 / new_w as f64;
    let scale_y = img.height() as f64 / new_h as f64;
    for c in 0..img.channels() {
        for y in 0..new_h {
            for x in 0..new_w {
                let v = match method {
                    ResizeMethod::Nearest => {
                        let sx = nearest_index(x, scale_x, img.width());
                        let sy = nearest_index(y, scale_y, img.height());
                        img.get(sx, sy, c)
                    }
                    ResizeMethod::Bilinear => {
                        let fx = (x as f64 + 0.5) * scale_x - 0.5;
                        let fy = (y as f64 + 0.5) * scale_y - 0.5;
                        bilinear_sample(img, fx, fy, c)
                    }
                    ResizeMethod::Bicubic => {
                        let fx = (x as f64 + 0.5) * scale_x - 0.5;
                        let fy = (y as f64 + 0.5) * scale_y - 0.5;
                        bicubic_sample(img, fx, fy, c)
                    }
                };
                out.set(x, y, c, v);
            }
        }
    }
    Ok(out)
}

fn nearest_index(dst: usize, scale: f64, src_size: usize) -> usize {
    let idx = ((dst as f64 + 0.5) * scale).floor() as isize;
    idx.clamp(0, src_size as isize - 1) as usize
}

fn clamp_index(i: isize, size: usize) -> usize {
    i.clamp(0, size as isize - 1) as usize
}

fn bilinear_sample(img: &Image, fx: f64, fy: f64, c: usize) -> f64 {
    let x0 = fx.floor();
    let y0 = fy.floor();
    let tx = fx - x0;
    let ty = fy - y0;
    let (x0, y0) = (x0 as isize, y0 as isize);
    let v00 = img.get(clamp_index(x0, img.width()), clamp_index(y0, img.height()), c);
    let v10 = img.get(clamp_index(x0 + 1, img.width()), clamp_index(y0, img.height()), c);
    let v01 = img.get(clamp_index(x0, img.width()), clamp_index(y0 + 1, img.height()), c);
    let v11 = img.get(clamp_index(x0 + 1, img.width()), clamp_index(y0 + 1, img.height()), c);
    (1.0 - ty) * ((1.0 - tx) * v00 + tx * v10) + ty * ((1.0 - tx) * v01 + tx * v11)
}

/// Keys cubic kernel with a = -0.5.
fn keys_weight(t: f64) -> f64 {
    const A: f64 = -0.5;
    let t = t.abs();
    if t <= 1.0 {
        (A + 2.0) * t * t * t - (A + 3.0) * t * t + 1.0
    } else if t < 2.0 {
        A * t * t * t - 5.0 * A * t * t + 8.0 * A * t - 4.0 * A
    } else {
        0.0
    }
}

fn bicubic_sample(img: &Image, fx: f64, fy: f64, c: usize) -> f64 {
    let bx = fx.floor() as isize;
    let by = fy.floor() as isize;
    let mut acc = 0.0;
    for j in -1..=2 {
        let wy = keys_weight(fy - (by + j) as f64);
        if wy == 0.0 {
            continue;
        }
        let sy = clamp_index(by + j, img.height());
        let mut row = 0.0;
        for i in -1..=2 {
            let wx = keys_weight(fx - (bx + i) as f64);
            let sx = clamp_index(bx + i, img.width());
            row += wx * img.get(sx, sy, c);
        }
        acc += wy * row;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    #[test]
    fn nearest_integer_upscale_replicates_blocks() {
        let img = Image::from_planar(2, 2, 1, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let up = resize(&img, 4, 4, ResizeMethod::Nearest).unwrap();
        for y in 0..4 {
            for x in 0..4 {
                assert_eq!(up.get(x, y, 0), img.get(x / 2, y / 2, 0));
            }
        }
    }

    #[test]
    fn nearest_same_size_is_identity() {
        let mut rng = Rng::new(21);
        let samples: Vec<f64> = (0..35).map(|_| rng.next_f64()).collect();
        let img = Image::from_planar(7, 5, 1, samples).unwrap();
        let same = resize(&img, 7, 5, ResizeMethod::Nearest).unwrap();
        assert_eq!(same.samples(), img.samples());
    }

    #[test]
    fn constant_image_stays_constant_for_all_methods() {
        let img = Image::constant(5, 4, 3, 0.37).unwrap();
        for method in [
            ResizeMethod::Nearest,
            ResizeMethod::Bilinear,
            ResizeMethod::Bicubic,
        ] {
            let out = resize(&img, 9, 11, method).unwrap();
            for &v in out.samples() {
                assert!((v - 0.37).abs() < 1e-12, "{method:?}: {v}");
            }
        }
    }

    #[test]
    fn bilinear_ramp_matches_closed_form() {
        // 1-D ramp, doubled in width: linear interpolation of a linear signal
        // reproduces the analytic line except where border clamping flattens it.
        let w = 8;
        let samples: Vec<f64> = (0..w).map(|i| i as f64 / (w - 1) as f64).collect();
        let img = Image::from_planar(w, 1, 1, samples).unwrap();
        let up = resize(&img, 2 * w, 1, ResizeMethod::Bilinear).unwrap();
        let step = 1.0 / (w - 1) as f64;
        for x in 0..2 * w {
            let fx = (x as f64 + 0.5) * 0.5 - 0.5;
            let expected = (fx.clamp(0.0, (w - 1) as f64)) * step;
            assert!(
                (up.get(x, 0, 0) - expected).abs() < 1e-12,
                "x={x}: {} vs {expected}",
                up.get(x, 0, 0)
            );
        }
    }

    #[test]
    fn bicubic_may_overshoot_but_stays_finite() {
        let mut samples = vec![0.0; 16 * 16];
        for y in 0..16 {
            for x in 0..16 {
                samples[y * 16 + x] = if x >= 8 { 1.0 } else { 0.0 };
            }
        }
        let img = Image::from_planar(16, 16, 1, samples).unwrap();
        let up = resize(&img, 32, 32, ResizeMethod::Bicubic).unwrap();
        let (lo, hi) = up.min_max();
        assert!(lo < 0.0 && hi > 1.0, "Keys kernel should overshoot a step");
        assert!(up.samples().iter().all(|v| v.is_finite()));
    }

    #[test]
    fn rejects_zero_target() {
        let img = Image::zeros(4, 4, 1).unwrap();
        assert!(resize(&img, 0, 4, ResizeMethod::Nearest).is_err());
    }
}
