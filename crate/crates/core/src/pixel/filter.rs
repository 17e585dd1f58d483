use std::f64::consts::PI;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Bicubic (Keys) free parameter, matching the reference imaging library.
pub const BICUBIC_A: f64 = -0.5;

/// Interpolation kernel used by [`resize`](super::resize).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterKind {
    Nearest,
    Bilinear,
    Bicubic,
    Lanczos,
}

impl FilterKind {
    pub const ALL: [FilterKind; 4] =
        [FilterKind::Nearest, FilterKind::Bilinear, FilterKind::Bicubic, FilterKind::Lanczos];

    /// Kernel support radius at unit scale.
    pub fn support(self) -> f64 {
        match self {
            FilterKind::Nearest => 0.5,
            FilterKind::Bilinear => 1.0,
            FilterKind::Bicubic => 2.0,
            FilterKind::Lanczos => 3.0,
        }
    }

    /// Nearest is a point sampler; only the continuous kernels widen on downscale.
    pub fn supports_antialias(self) -> bool {
        !matches!(self, FilterKind::Nearest)
    }

    pub fn eval(self, x: f64) -> f64 {
        match self {
            FilterKind::Nearest => {
                if x > -0.5 && x <= 0.5 {
                    1.0
                } else {
                    0.0
                }
            }
            FilterKind::Bilinear => {
                let x = x.abs();
                if x < 1.0 {
                    1.0 - x
                } else {
                    0.0
                }
            }
            FilterKind::Bicubic => keys_cubic(x, BICUBIC_A),
            FilterKind::Lanczos => {
                if x.abs() < 3.0 {
                    sinc(x) * sinc(x / 3.0)
                } else {
                    0.0
                }
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FilterKind::Nearest => "nearest",
            FilterKind::Bilinear => "bilinear",
            FilterKind::Bicubic => "bicubic",
            FilterKind::Lanczos => "lanczos",
        }
    }
}

impl std::fmt::Display for FilterKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FilterKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "nearest" => Ok(FilterKind::Nearest),
            "bilinear" => Ok(FilterKind::Bilinear),
            "bicubic" => Ok(FilterKind::Bicubic),
            "lanczos" | "lanczos3" => Ok(FilterKind::Lanczos),
            other => Err(format!("unknown filter '{other}' (expected nearest, bilinear, bicubic or lanczos)")),
        }
    }
}

fn keys_cubic(x: f64, a: f64) -> f64 {
    let x = x.abs();
    if x < 1.0 {
        ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0
    } else if x < 2.0 {
        (((x - 5.0) * x + 8.0) * x - 4.0) * a
    } else {
        0.0
    }
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let px = PI * x;
        px.sin() / px
    }
}

/// Normalized contribution of a window of source samples to one output sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Taps {
    /// Index of the first contributing source sample.
    pub start: usize,
    pub weights: Vec<f64>,
}

/// Resampling taps for one axis.
///
/// Output sample `i` is centred at `(i + 0.5) * in_len / out_len` in source
/// coordinates. On downscale with antialiasing, the kernel is stretched by the
/// scale factor. The window is cut at the image border and the surviving
/// weights renormalized to sum to one.
pub fn axis_taps(in_len: usize, out_len: usize, filter: FilterKind, antialias: bool) -> Vec<Taps> {
    assert!(in_len > 0 && out_len > 0, "axis lengths must be positive");
    let scale = in_len as f64 / out_len as f64;
    let filter_scale = if antialias && filter.supports_antialias() { scale.max(1.0) } else { 1.0 };
    let support = filter.support() * filter_scale;
    let inv = 1.0 / filter_scale;

    (0..out_len)
        .map(|i| {
            let center = (i as f64 + 0.5) * scale;
            // Truncation toward zero then clamping mirrors the reference window bounds.
            let lo = ((center - support + 0.5) as i64).max(0) as usize;
            let hi = ((center + support + 0.5) as i64).min(in_len as i64) as usize;
            let mut weights: Vec<f64> = (lo..hi).map(|x| filter.eval((x as f64 - center + 0.5) * inv)).collect();
            let total: f64 = weights.iter().sum();
            if total != 0.0 {
                weights.iter_mut().for_each(|w| *w /= total);
            } else {
                // Degenerate window: fall back to the nearest source sample.
                weights.iter_mut().for_each(|w| *w = 0.0);
                let nearest = (center.floor() as usize).clamp(lo, hi - 1);
                weights[nearest - lo] = 1.0;
            }
            // Trim exact zeros at both ends so taps stay compact.
            let first = weights.iter().position(|&w| w != 0.0).unwrap_or(0);
            let last = weights.iter().rposition(|&w| w != 0.0).unwrap_or(0);
            Taps { start: lo + first, weights: weights[first..=last].to_vec() }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernels_are_symmetric() {
        for f in [FilterKind::Bilinear, FilterKind::Bicubic, FilterKind::Lanczos] {
            for i in 0..400 {
                let x = i as f64 * 0.0137;
                assert_eq!(f.eval(x), f.eval(-x), "{f} at {x}");
            }
        }
    }

    #[test]
    fn kernels_vanish_outside_support() {
        for f in FilterKind::ALL {
            assert_eq!(f.eval(f.support() + 1e-9), 0.0);
            assert_eq!(f.eval(-(f.support() + 1e-9)), 0.0);
        }
    }

    #[test]
    fn kernels_interpolate_at_integers() {
        for f in [FilterKind::Bilinear, FilterKind::Bicubic, FilterKind::Lanczos] {
            assert_eq!(f.eval(0.0), 1.0);
            for k in 1..4 {
                assert!(f.eval(k as f64).abs() < 1e-15, "{f} at {k}");
            }
        }
    }

    #[test]
    fn keys_cubic_midpoint() {
        // a = -0.5 at x = 0.5: (1.5 * 0.5 - 2.5) * 0.25 + 1 = 0.5625
        assert!((FilterKind::Bicubic.eval(0.5) - 0.5625).abs() < 1e-15);
        // x = 1.5: (((1.5 - 5) * 1.5 + 8) * 1.5 - 4) * a = 0.125 * -0.5
        assert!((FilterKind::Bicubic.eval(1.5) + 0.0625).abs() < 1e-15);
    }

    #[test]
    fn identity_taps_are_deltas() {
        for f in FilterKind::ALL {
            for t in axis_taps(9, 9, f, true).iter().enumerate() {
                let (i, taps) = t;
                let peak = taps.weights.iter().cloned().fold(f64::MIN, f64::max);
                let argmax = taps.weights.iter().position(|&w| w == peak).unwrap();
                assert_eq!(taps.start + argmax, i);
                assert!((peak - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn antialias_widens_downscale_support() {
        let narrow = axis_taps(100, 10, FilterKind::Bilinear, false);
        let wide = axis_taps(100, 10, FilterKind::Bilinear, true);
        assert!(wide[5].weights.len() > narrow[5].weights.len());
        // Bilinear stretched by 10 spans about 20 source samples.
        assert!(wide[5].weights.len() >= 19);
    }

    proptest::proptest! {
        #[test]
        fn taps_partition_unity(
            in_len in 1usize..64,
            out_len in 1usize..64,
            fi in 0usize..4,
            antialias in proptest::bool::ANY,
        ) {
            let f = FilterKind::ALL[fi];
            for taps in axis_taps(in_len, out_len, f, antialias) {
                let s: f64 = taps.weights.iter().sum();
                proptest::prop_assert!((s - 1.0).abs() < 1e-6);
                proptest::prop_assert!(taps.start + taps.weights.len() <= in_len);
            }
        }
    }
}
