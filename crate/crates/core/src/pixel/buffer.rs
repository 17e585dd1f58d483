use serde::{Deserialize, Serialize};

use super::PixelError;

/// Value representation held by a [`PixelBuffer`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Storage {
    /// 8-bit integers in `0..=255`.
    U8,
    /// Floats in `[-1, 1]`.
    UnitFloat,
    /// Floats after a backbone's per-channel affine normalization.
    BackboneFloat,
}

impl std::fmt::Display for Storage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Storage::U8 => "U8",
            Storage::UnitFloat => "UnitFloat",
            Storage::BackboneFloat => "BackboneFloat",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Samples {
    U8(Vec<u8>),
    UnitFloat(Vec<f32>),
    BackboneFloat(Vec<f32>),
}

/// Row-major, channel-interleaved raster with 1 or 3 channels.
///
/// The storage tag is checked against the actual values on construction, so a
/// `UnitFloat` buffer never holds a value outside `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PixelBuffer {
    width: usize,
    height: usize,
    channels: usize,
    samples: Samples,
}

fn check_shape(width: usize, height: usize, channels: usize, len: usize) -> Result<(), PixelError> {
    if width == 0 || height == 0 {
        return Err(PixelError::ZeroDimension);
    }
    if channels != 1 && channels != 3 {
        return Err(PixelError::BadChannelCount(channels));
    }
    let expected = width * height * channels;
    if len != expected {
        return Err(PixelError::LengthMismatch { expected, actual: len });
    }
    Ok(())
}

impl PixelBuffer {
    pub fn from_u8(width: usize, height: usize, channels: usize, data: Vec<u8>) -> Result<Self, PixelError> {
        check_shape(width, height, channels, data.len())?;
        Ok(Self { width, height, channels, samples: Samples::U8(data) })
    }

    pub fn from_unit_float(width: usize, height: usize, channels: usize, data: Vec<f32>) -> Result<Self, PixelError> {
        check_shape(width, height, channels, data.len())?;
        if let Some(&v) = data.iter().find(|v| !(-1.0..=1.0).contains(*v)) {
            return Err(PixelError::OutOfRange { storage: Storage::UnitFloat, value: v as f64 });
        }
        Ok(Self { width, height, channels, samples: Samples::UnitFloat(data) })
    }

    pub fn from_backbone_float(
        width: usize,
        height: usize,
        channels: usize,
        data: Vec<f32>,
    ) -> Result<Self, PixelError> {
        check_shape(width, height, channels, data.len())?;
        if let Some(&v) = data.iter().find(|v| !v.is_finite()) {
            return Err(PixelError::OutOfRange { storage: Storage::BackboneFloat, value: v as f64 });
        }
        Ok(Self { width, height, channels, samples: Samples::BackboneFloat(data) })
    }

    /// Builds a buffer from already-validated parts.
    pub(crate) fn from_samples(width: usize, height: usize, channels: usize, samples: Samples) -> Self {
        Self { width, height, channels, samples }
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

    pub fn storage(&self) -> Storage {
        match self.samples {
            Samples::U8(_) => Storage::U8,
            Samples::UnitFloat(_) => Storage::UnitFloat,
            Samples::BackboneFloat(_) => Storage::BackboneFloat,
        }
    }

    pub(crate) fn samples(&self) -> &Samples {
        &self.samples
    }

    /// Raw bytes when the storage is `U8`.
    pub fn as_u8(&self) -> Option<&[u8]> {
        match &self.samples {
            Samples::U8(v) => Some(v),
            _ => None,
        }
    }

    /// Raw floats for `UnitFloat` and `BackboneFloat` storage.
    pub fn as_f32(&self) -> Option<&[f32]> {
        match &self.samples {
            Samples::UnitFloat(v) | Samples::BackboneFloat(v) => Some(v),
            Samples::U8(_) => None,
        }
    }

    /// Sample at `(x, y, c)` widened to `f64`.
    pub fn get(&self, x: usize, y: usize, c: usize) -> f64 {
        let idx = (y * self.width + x) * self.channels + c;
        match &self.samples {
            Samples::U8(v) => v[idx] as f64,
            Samples::UnitFloat(v) | Samples::BackboneFloat(v) => v[idx] as f64,
        }
    }

    pub fn flip_horizontal(&self) -> Self {
        self.remap(|x, y, w, _| (w - 1 - x, y))
    }

    pub fn flip_vertical(&self) -> Self {
        self.remap(|x, y, _, h| (x, h - 1 - y))
    }

    fn remap(&self, src_of: impl Fn(usize, usize, usize, usize) -> (usize, usize)) -> Self {
        let (w, h, c) = (self.width, self.height, self.channels);
        fn gather<T: Copy>(
            v: &[T],
            w: usize,
            h: usize,
            c: usize,
            src_of: &dyn Fn(usize, usize, usize, usize) -> (usize, usize),
        ) -> Vec<T> {
            let mut out = Vec::with_capacity(v.len());
            for y in 0..h {
                for x in 0..w {
                    let (sx, sy) = src_of(x, y, w, h);
                    let base = (sy * w + sx) * c;
                    out.extend_from_slice(&v[base..base + c]);
                }
            }
            out
        }
        let samples = match &self.samples {
            Samples::U8(v) => Samples::U8(gather(v, w, h, c, &src_of)),
            Samples::UnitFloat(v) => Samples::UnitFloat(gather(v, w, h, c, &src_of)),
            Samples::BackboneFloat(v) => Samples::BackboneFloat(gather(v, w, h, c, &src_of)),
        };
        Self { samples, ..*self }
    }
}

/// Maps every `U8` value `v` to `(v - 127.5) / 127.5`.
pub fn normalize(src: &PixelBuffer) -> Result<PixelBuffer, PixelError> {
    let Samples::U8(data) = &src.samples else {
        return Err(PixelError::WrongStorage { expected: Storage::U8, found: src.storage() });
    };
    let out = data.iter().map(|&v| ((v as f64 - 127.5) / 127.5) as f32).collect();
    Ok(PixelBuffer::from_samples(src.width, src.height, src.channels, Samples::UnitFloat(out)))
}

/// Round-down-safe 8-bit quantization: `floor(clip(127.5 * x + 128, 0, 255))`.
pub fn quantize(src: &PixelBuffer) -> Result<PixelBuffer, PixelError> {
    let Samples::UnitFloat(data) = &src.samples else {
        return Err(PixelError::WrongStorage { expected: Storage::UnitFloat, found: src.storage() });
    };
    let out = data.iter().map(|&x| quantize_value(x)).collect();
    Ok(PixelBuffer::from_samples(src.width, src.height, src.channels, Samples::U8(out)))
}

#[inline]
pub fn quantize_value(x: f32) -> u8 {
    (127.5 * x as f64 + 128.0).clamp(0.0, 255.0).floor() as u8
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_endpoints() {
        let b = PixelBuffer::from_u8(3, 1, 1, vec![0, 255, 128]).unwrap();
        let n = normalize(&b).unwrap();
        let v = n.as_f32().unwrap();
        assert_eq!(v[0], -1.0);
        assert_eq!(v[1], 1.0);
        // (128 - 127.5) / 127.5 = 1/255
        assert!((v[2] as f64 - 0.003_921_568_627_450_98).abs() < 1e-8);
        assert_eq!(n.storage(), Storage::UnitFloat);
    }

    #[test]
    fn quantize_endpoints() {
        let b = PixelBuffer::from_unit_float(3, 1, 1, vec![-1.0, 0.0, 1.0]).unwrap();
        assert_eq!(quantize(&b).unwrap().as_u8().unwrap(), &[0, 128, 255]);
    }

    #[test]
    fn quantize_normalize_round_trip_all_values() {
        let all: Vec<u8> = (0..=255).collect();
        let b = PixelBuffer::from_u8(256, 1, 1, all.clone()).unwrap();
        let back = quantize(&normalize(&b).unwrap()).unwrap();
        assert_eq!(back.as_u8().unwrap(), &all[..]);
    }

    #[test]
    fn wrong_storage_is_rejected() {
        let b = PixelBuffer::from_u8(1, 1, 1, vec![3]).unwrap();
        assert!(matches!(quantize(&b), Err(PixelError::WrongStorage { .. })));
        let f = normalize(&b).unwrap();
        assert!(matches!(normalize(&f), Err(PixelError::WrongStorage { .. })));
    }

    #[test]
    fn construction_checks() {
        assert!(matches!(PixelBuffer::from_u8(0, 1, 1, vec![]), Err(PixelError::ZeroDimension)));
        assert!(matches!(PixelBuffer::from_u8(1, 1, 2, vec![0, 0]), Err(PixelError::BadChannelCount(2))));
        assert!(matches!(
            PixelBuffer::from_u8(2, 1, 1, vec![0]),
            Err(PixelError::LengthMismatch { expected: 2, actual: 1 })
        ));
        assert!(PixelBuffer::from_unit_float(1, 1, 1, vec![1.5]).is_err());
        assert!(PixelBuffer::from_unit_float(1, 1, 1, vec![f32::NAN]).is_err());
        assert!(PixelBuffer::from_backbone_float(1, 1, 1, vec![f32::INFINITY]).is_err());
        assert!(PixelBuffer::from_backbone_float(1, 1, 1, vec![-7.5]).is_ok());
    }

    proptest::proptest! {
        #[test]
        fn quantize_is_monotone(a in -1.0f32..=1.0, b in -1.0f32..=1.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            proptest::prop_assert!(quantize_value(lo) <= quantize_value(hi));
        }
    }
}
