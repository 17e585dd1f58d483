use std::io::Cursor;

use image::{DynamicImage, ImageFormat};

use super::buffer::{PixelBuffer, Storage};
use super::PixelError;

/// Encoded input formats accepted by [`decode_image`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageKind {
    Png,
    Jpeg,
}

impl ImageKind {
    /// Guess from a file extension (case-insensitive).
    pub fn from_extension(ext: &str) -> Option<Self> {
        match ext.to_ascii_lowercase().as_str() {
            "png" => Some(ImageKind::Png),
            "jpg" | "jpeg" => Some(ImageKind::Jpeg),
            _ => None,
        }
    }

    fn format(self) -> ImageFormat {
        match self {
            ImageKind::Png => ImageFormat::Png,
            ImageKind::Jpeg => ImageFormat::Jpeg,
        }
    }
}

/// Decodes 8-bit grayscale or RGB images exactly as stored.
///
/// Alpha channels and deeper bit depths are rejected rather than converted.
pub fn decode_image(bytes: &[u8], kind: ImageKind) -> Result<PixelBuffer, PixelError> {
    let img = image::load_from_memory_with_format(bytes, kind.format()).map_err(|e| match e {
        image::ImageError::Unsupported(u) => PixelError::UnsupportedPixelLayout(u.to_string()),
        other => PixelError::MalformedImage(other.to_string()),
    })?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    match img {
        DynamicImage::ImageLuma8(b) => PixelBuffer::from_u8(w, h, 1, b.into_raw()),
        DynamicImage::ImageRgb8(b) => PixelBuffer::from_u8(w, h, 3, b.into_raw()),
        other => Err(PixelError::UnsupportedPixelLayout(format!("{:?}", other.color()))),
    }
}

/// Lossless 8-bit PNG encoding of a `U8` buffer.
pub fn encode_png(buf: &PixelBuffer) -> Result<Vec<u8>, PixelError> {
    let data = buf.as_u8().ok_or(PixelError::WrongStorage { expected: Storage::U8, found: buf.storage() })?;
    let (w, h) = (buf.width() as u32, buf.height() as u32);
    let img = if buf.channels() == 1 {
        DynamicImage::ImageLuma8(image::GrayImage::from_raw(w, h, data.to_vec()).expect("shape checked"))
    } else {
        DynamicImage::ImageRgb8(image::RgbImage::from_raw(w, h, data.to_vec()).expect("shape checked"))
    };
    let mut out = Vec::new();
    img.write_to(&mut Cursor::new(&mut out), ImageFormat::Png).map_err(|e| PixelError::Encode(e.to_string()))?;
    Ok(out)
}
