use super::buffer::{PixelBuffer, Samples};
use super::filter::{axis_taps, FilterKind, Taps};
use super::PixelError;

/// Which axis is resampled first. Only tests need the vertical-first order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PassOrder {
    HorizontalFirst,
    VerticalFirst,
}

/// Separable resampling to `out_w` × `out_h`, keeping the storage type.
///
/// Accumulation is done in `f64` with no intermediate rounding. Between the
/// two passes values are clamped to the storage range (as an 8-bit
/// intermediate image would be); the result is rounded (for `U8`) and clamped
/// at the end. An axis whose length does not change is copied through
/// untouched.
pub fn resize(
    src: &PixelBuffer,
    out_w: usize,
    out_h: usize,
    filter: FilterKind,
    antialias: bool,
) -> Result<PixelBuffer, PixelError> {
    resize_with_order(src, out_w, out_h, filter, antialias, PassOrder::HorizontalFirst)
}

pub fn resize_with_order(
    src: &PixelBuffer,
    out_w: usize,
    out_h: usize,
    filter: FilterKind,
    antialias: bool,
    order: PassOrder,
) -> Result<PixelBuffer, PixelError> {
    if out_w == 0 || out_h == 0 {
        return Err(PixelError::ZeroDimension);
    }
    let (w, h, c) = (src.width(), src.height(), src.channels());
    if (w, h) == (out_w, out_h) {
        return Ok(src.clone());
    }

    let mut plane: Vec<f64> = match src.samples() {
        Samples::U8(v) => v.iter().map(|&x| x as f64).collect(),
        Samples::UnitFloat(v) | Samples::BackboneFloat(v) => v.iter().map(|&x| x as f64).collect(),
    };
    let (mut cur_w, mut cur_h) = (w, h);
    let steps: [bool; 2] = match order {
        PassOrder::HorizontalFirst => [true, false],
        PassOrder::VerticalFirst => [false, true],
    };
    let range = match src.samples() {
        Samples::U8(_) => Some((0.0, 255.0)),
        Samples::UnitFloat(_) => Some((-1.0, 1.0)),
        Samples::BackboneFloat(_) => None,
    };
    for (pass, horizontal) in steps.into_iter().enumerate() {
        if pass == 1 {
            if let Some((lo, hi)) = range {
                plane.iter_mut().for_each(|v| *v = v.clamp(lo, hi));
            }
        }
        if horizontal && out_w != cur_w {
            let taps = axis_taps(cur_w, out_w, filter, antialias);
            plane = horizontal_pass(&plane, cur_w, cur_h, c, out_w, &taps);
            cur_w = out_w;
        } else if !horizontal && out_h != cur_h {
            let taps = axis_taps(cur_h, out_h, filter, antialias);
            plane = vertical_pass(&plane, cur_w, c, out_h, &taps);
            cur_h = out_h;
        }
    }

    let samples = match src.samples() {
        Samples::U8(_) => Samples::U8(plane.iter().map(|&v| v.round().clamp(0.0, 255.0) as u8).collect()),
        Samples::UnitFloat(_) => Samples::UnitFloat(plane.iter().map(|&v| v.clamp(-1.0, 1.0) as f32).collect()),
        Samples::BackboneFloat(_) => Samples::BackboneFloat(plane.iter().map(|&v| v as f32).collect()),
    };
    Ok(PixelBuffer::from_samples(out_w, out_h, c, samples))
}

fn horizontal_pass(src: &[f64], w: usize, h: usize, c: usize, out_w: usize, taps: &[Taps]) -> Vec<f64> {
    let mut out = vec![0.0; out_w * h * c];
    for y in 0..h {
        let row = &src[y * w * c..(y + 1) * w * c];
        let dst = &mut out[y * out_w * c..(y + 1) * out_w * c];
        for (x, t) in taps.iter().enumerate() {
            for ch in 0..c {
                let mut acc = 0.0;
                for (k, &wt) in t.weights.iter().enumerate() {
                    acc += wt * row[(t.start + k) * c + ch];
                }
                dst[x * c + ch] = acc;
            }
        }
    }
    out
}

fn vertical_pass(src: &[f64], w: usize, c: usize, out_h: usize, taps: &[Taps]) -> Vec<f64> {
    let stride = w * c;
    let mut out = vec![0.0; stride * out_h];
    for (y, t) in taps.iter().enumerate() {
        let dst = &mut out[y * stride..(y + 1) * stride];
        for (k, &wt) in t.weights.iter().enumerate() {
            let row = &src[(t.start + k) * stride..(t.start + k + 1) * stride];
            for (d, &s) in dst.iter_mut().zip(row) {
                *d += wt * s;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn checkerboard(n: usize) -> PixelBuffer {
        let data = (0..n * n).map(|i| if (i / n + i % n) % 2 == 0 { 255 } else { 0 }).collect();
        PixelBuffer::from_u8(n, n, 1, data).unwrap()
    }

    fn pseudo_random_u8(w: usize, h: usize, c: usize, seed: u64) -> PixelBuffer {
        let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let data = (0..w * h * c)
            .map(|_| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (s >> 56) as u8
            })
            .collect();
        PixelBuffer::from_u8(w, h, c, data).unwrap()
    }

    #[test]
    fn zero_dimension_is_rejected() {
        let b = checkerboard(4);
        assert!(matches!(resize(&b, 0, 3, FilterKind::Bicubic, true), Err(PixelError::ZeroDimension)));
    }

    #[test]
    fn identity_is_bit_exact() {
        let b = pseudo_random_u8(7, 5, 3, 1);
        for f in FilterKind::ALL {
            assert_eq!(resize(&b, 7, 5, f, true).unwrap(), b);
        }
        let fl = super::super::normalize(&b).unwrap();
        assert_eq!(resize(&fl, 7, 5, FilterKind::Lanczos, true).unwrap(), fl);
    }

    #[test]
    fn checkerboard_box_average() {
        // 2x downscale of a 1-px checkerboard with bilinear+antialias averages to
        // mid grey; truncated border windows lean a little toward their corner.
        let out = resize(&checkerboard(8), 4, 4, FilterKind::Bilinear, true).unwrap();
        for (i, &v) in out.as_u8().unwrap().iter().enumerate() {
            let (x, y) = (i % 4, i / 4);
            let interior = (1..3).contains(&x) && (1..3).contains(&y);
            let band = if interior { 126..=129 } else { 120..=135 };
            assert!(band.contains(&v), "({x},{y}) = {v}");
        }
    }

    #[test]
    fn aliasing_without_antialias() {
        // Without support widening, nearest-like sampling of the checkerboard keeps full contrast.
        let out = resize(&checkerboard(8), 4, 4, FilterKind::Nearest, false).unwrap();
        let v = out.as_u8().unwrap();
        assert!(v.iter().all(|&p| p == 0 || p == 255));
    }

    #[test]
    fn nearest_picks_floor_of_center() {
        let b = PixelBuffer::from_u8(4, 1, 1, vec![10, 20, 30, 40]).unwrap();
        let out = resize(&b, 2, 1, FilterKind::Nearest, true).unwrap();
        // centres at 1.0 and 3.0
        assert_eq!(out.as_u8().unwrap(), &[20, 40]);
        let up = resize(&b, 8, 1, FilterKind::Nearest, true).unwrap();
        assert_eq!(up.as_u8().unwrap(), &[10, 10, 20, 20, 30, 30, 40, 40]);
    }

    #[test]
    fn unit_float_output_is_clamped() {
        let data: Vec<f32> = (0..16).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let b = PixelBuffer::from_unit_float(16, 1, 1, data).unwrap();
        let out = resize(&b, 37, 1, FilterKind::Lanczos, true).unwrap();
        assert!(out.as_f32().unwrap().iter().all(|v| (-1.0..=1.0).contains(v)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn constant_images_stay_constant(
            w in 1usize..20, h in 1usize..20, ow in 1usize..24, oh in 1usize..24,
            v in 0u8..=255, fi in 0usize..4, c in prop::sample::select(vec![1usize, 3]),
        ) {
            let b = PixelBuffer::from_u8(w, h, c, vec![v; w * h * c]).unwrap();
            let out = resize(&b, ow, oh, FilterKind::ALL[fi], true).unwrap();
            for &p in out.as_u8().unwrap() {
                prop_assert!((p as i32 - v as i32).abs() <= 1);
            }
            let f = super::super::normalize(&b).unwrap();
            let expect = f.as_f32().unwrap()[0];
            let outf = resize(&f, ow, oh, FilterKind::ALL[fi], true).unwrap();
            for &p in outf.as_f32().unwrap() {
                prop_assert!((p - expect).abs() <= 1e-6);
            }
        }

        #[test]
        fn flips_commute_with_resize(
            w in 1usize..16, h in 1usize..16, ow in 1usize..20, oh in 1usize..20,
            fi in 1usize..4, seed in 0u64..1000,
        ) {
            let b = pseudo_random_u8(w, h, 3, seed);
            let f = FilterKind::ALL[fi];
            let a = resize(&b.flip_horizontal(), ow, oh, f, true).unwrap();
            let bb = resize(&b, ow, oh, f, true).unwrap().flip_horizontal();
            let c = resize(&b.flip_vertical(), ow, oh, f, true).unwrap();
            let d = resize(&b, ow, oh, f, true).unwrap().flip_vertical();
            for (x, y) in a.as_u8().unwrap().iter().zip(bb.as_u8().unwrap()) {
                prop_assert!((*x as i32 - *y as i32).abs() <= 1);
            }
            for (x, y) in c.as_u8().unwrap().iter().zip(d.as_u8().unwrap()) {
                prop_assert!((*x as i32 - *y as i32).abs() <= 1);
            }
        }

        #[test]
        fn pass_order_does_not_matter(
            w in 1usize..16, h in 1usize..16, ow in 1usize..20, oh in 1usize..20,
            fi in 0usize..4, seed in 0u64..1000,
        ) {
            // Unclamped storage, so both orders compute the same separable sum.
            let u = pseudo_random_u8(w, h, 1, seed);
            let vals: Vec<f32> = u.as_u8().unwrap().iter().map(|&v| v as f32).collect();
            let b = PixelBuffer::from_backbone_float(w, h, 1, vals).unwrap();
            let f = FilterKind::ALL[fi];
            let a = resize_with_order(&b, ow, oh, f, true, PassOrder::HorizontalFirst).unwrap();
            let v = resize_with_order(&b, ow, oh, f, true, PassOrder::VerticalFirst).unwrap();
            for (x, y) in a.as_f32().unwrap().iter().zip(v.as_f32().unwrap()) {
                prop_assert!((x - y).abs() <= 1e-3);
            }
        }
    }
}
