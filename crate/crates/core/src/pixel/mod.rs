//! Image routes: decode, high-quality resampling, normalization, 8-bit
//! quantization and per-backbone preparation.

mod buffer;
mod codec;
mod filter;
mod prepare;
mod resize;

pub use buffer::{normalize, quantize, quantize_value, PixelBuffer, Storage};
pub use codec::{decode_image, encode_png, ImageKind};
pub use filter::{axis_taps, FilterKind, Taps, BICUBIC_A};
pub use prepare::{backbone_prepare, backbone_prepare_with, backbone_resize};
pub use resize::{resize, resize_with_order, PassOrder};

#[derive(Debug, thiserror::Error)]
pub enum PixelError {
    #[error("image dimensions must be at least 1x1")]
    ZeroDimension,
    #[error("unsupported channel count {0} (expected 1 or 3)")]
    BadChannelCount(usize),
    #[error("sample buffer has {actual} values, expected {expected}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("value {value} is outside the {storage} range")]
    OutOfRange { storage: Storage, value: f64 },
    #[error("expected {expected} storage, found {found}")]
    WrongStorage { expected: Storage, found: Storage },
    #[error("malformed image: {0}")]
    MalformedImage(String),
    #[error("unsupported pixel layout: {0}")]
    UnsupportedPixelLayout(String),
    #[error("png encoding failed: {0}")]
    Encode(String),
}

/// Route one and two in a single step: resize the decoded image with a
/// high-quality filter, normalize to `[-1, 1]`, and quantize back to 8 bits.
pub fn prepare_training_image(
    src: &PixelBuffer,
    resolution: usize,
    filter: FilterKind,
) -> Result<PixelBuffer, PixelError> {
    // quantize(normalize(v)) == v for every u8, so this is bit-stable.
    let resized = resize(src, resolution, resolution, filter, true)?;
    quantize(&normalize(&resized)?)
}
