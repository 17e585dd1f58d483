use super::buffer::{PixelBuffer, Samples, Storage};
use super::filter::FilterKind;
use super::resize::resize;
use super::PixelError;
use crate::features::BackboneSpec;

/// Resizes a quantized image to the backbone's square input resolution.
///
/// `filter` defaults to the backbone's friendly filter. Grayscale input is
/// replicated to three channels since every backbone consumes RGB. Float input
/// is refused: images must pass through 8-bit quantization before they reach
/// a backbone.
pub fn backbone_resize(
    src: &PixelBuffer,
    spec: &BackboneSpec,
    filter: Option<FilterKind>,
) -> Result<PixelBuffer, PixelError> {
    if src.storage() != Storage::U8 {
        return Err(PixelError::WrongStorage { expected: Storage::U8, found: src.storage() });
    }
    let res = spec.input_resolution;
    let resized = resize(src, res, res, filter.unwrap_or(spec.friendly_filter), true)?;
    if resized.channels() == 3 {
        return Ok(resized);
    }
    let gray = resized.as_u8().expect("U8 checked above");
    let rgb = gray.iter().flat_map(|&v| [v, v, v]).collect();
    PixelBuffer::from_u8(res, res, 3, rgb)
}

/// Friendly resize followed by the backbone's per-channel affine normalization
/// `value * scale[c] + offset[c]`.
pub fn backbone_prepare(src: &PixelBuffer, spec: &BackboneSpec) -> Result<PixelBuffer, PixelError> {
    backbone_prepare_with(src, spec, None)
}

/// As [`backbone_prepare`] with an explicit (nonstandard) resize filter.
pub fn backbone_prepare_with(
    src: &PixelBuffer,
    spec: &BackboneSpec,
    filter: Option<FilterKind>,
) -> Result<PixelBuffer, PixelError> {
    let resized = backbone_resize(src, spec, filter)?;
    let data = resized.as_u8().expect("backbone_resize yields U8");
    let out = data
        .chunks_exact(3)
        .flat_map(|px| (0..3).map(move |c| (px[c] as f64 * spec.channel_scale[c] + spec.channel_offset[c]) as f32))
        .collect();
    Ok(PixelBuffer::from_samples(resized.width(), resized.height(), 3, Samples::BackboneFloat(out)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::Registry;
    use crate::pixel::normalize;

    fn image(n: usize) -> PixelBuffer {
        PixelBuffer::from_u8(n, n, 3, (0..n * n * 3).map(|i| (i * 31 % 256) as u8).collect()).unwrap()
    }

    #[test]
    fn inception_prepares_to_299_with_bilinear() {
        let reg = Registry::builtin();
        let spec = reg.get("InceptionV3").unwrap();
        assert_eq!(spec.friendly_filter, FilterKind::Bilinear);
        let out = backbone_prepare(&image(128), spec).unwrap();
        assert_eq!((out.width(), out.height(), out.channels()), (299, 299, 3));
        assert_eq!(out.storage(), Storage::BackboneFloat);
        let expect = resize(&image(128), 299, 299, FilterKind::Bilinear, true).unwrap();
        // InceptionV3 maps [0, 255] onto [-1, 1].
        let a = out.as_f32().unwrap();
        let b = expect.as_u8().unwrap();
        for (x, &u) in a.iter().zip(b) {
            assert!((*x as f64 - (u as f64 / 127.5 - 1.0)).abs() < 1e-6);
        }
    }

    #[test]
    fn swin_prepares_to_224_with_bicubic() {
        let reg = Registry::builtin();
        let spec = reg.get("Swin-T").unwrap();
        assert_eq!(spec.friendly_filter, FilterKind::Bicubic);
        let resized = backbone_resize(&image(64), spec, None).unwrap();
        assert_eq!(resized, resize(&image(64), 224, 224, FilterKind::Bicubic, true).unwrap());
        let out = backbone_prepare(&image(64), spec).unwrap();
        assert_eq!((out.width(), out.height()), (224, 224));
    }

    #[test]
    fn float_input_is_refused() {
        let reg = Registry::builtin();
        let f = normalize(&image(8)).unwrap();
        for spec in reg.specs() {
            assert!(matches!(backbone_prepare(&f, spec), Err(PixelError::WrongStorage { .. })));
        }
    }

    #[test]
    fn grayscale_is_replicated() {
        let reg = Registry::builtin();
        let spec = reg.get("SwAV").unwrap();
        let g = PixelBuffer::from_u8(4, 4, 1, vec![200; 16]).unwrap();
        let out = backbone_resize(&g, spec, None).unwrap();
        assert_eq!(out.channels(), 3);
        assert!(out.as_u8().unwrap().iter().all(|&v| v == 200));
    }
}
