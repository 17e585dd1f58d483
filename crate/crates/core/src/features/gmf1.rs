//! GMF1 feature interchange format.
//!
//! ```text
//! offset  size  field
//!      0     4  magic "GMF1"
//!      4     4  version (u32) = 1
//!      8     8  N samples (u64)
//!     16     4  D feature dim (u32)
//!     20     4  K posterior classes (u32, 0 = none)
//!     24     4  flags (u32): bit0 labels present, bit1 explicit class count
//!     28     4  class count (u32) when bit1 is set, else 0
//!     32    32  reserved, zero
//!     64        N*D f32 features, row-major
//!               N u32 labels            (if bit0)
//!               N*K f32 posteriors      (if K > 0)
//! ```
//!
//! All fields are little-endian.

use std::io::{Read, Write};
use std::path::Path;

use super::set::{FeatureSet, Labels, PosteriorSet};
use super::FeatureError;

pub const MAGIC: &[u8; 4] = b"GMF1";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 64;

const FLAG_LABELS: u32 = 1;
const FLAG_CLASS_COUNT: u32 = 1 << 1;

/// Parsed GMF1 header.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Header {
    pub count: u64,
    pub dim: u32,
    pub classes: u32,
    pub flags: u32,
    pub class_count: u32,
}

impl Header {
    pub fn has_labels(&self) -> bool {
        self.flags & FLAG_LABELS != 0
    }

    /// Total file length implied by the header.
    pub fn file_len(&self) -> u64 {
        // Saturating: a corrupt header must not overflow, only fail the length check.
        let n = self.count;
        let per_row = 4 * (self.dim as u64 + self.classes as u64 + self.has_labels() as u64);
        (HEADER_LEN as u64).saturating_add(n.saturating_mul(per_row))
    }

    fn encode(&self) -> [u8; HEADER_LEN] {
        let mut h = [0u8; HEADER_LEN];
        h[0..4].copy_from_slice(MAGIC);
        h[4..8].copy_from_slice(&VERSION.to_le_bytes());
        h[8..16].copy_from_slice(&self.count.to_le_bytes());
        h[16..20].copy_from_slice(&self.dim.to_le_bytes());
        h[20..24].copy_from_slice(&self.classes.to_le_bytes());
        h[24..28].copy_from_slice(&self.flags.to_le_bytes());
        h[28..32].copy_from_slice(&self.class_count.to_le_bytes());
        h
    }

    fn decode(h: &[u8]) -> Result<Self, FeatureError> {
        if h.len() < 4 || &h[0..4] != MAGIC {
            return Err(FeatureError::BadMagic);
        }
        if h.len() < HEADER_LEN {
            return Err(FeatureError::TruncatedPayload { expected: HEADER_LEN as u64, actual: h.len() as u64 });
        }
        let u32_at = |o: usize| u32::from_le_bytes(h[o..o + 4].try_into().unwrap());
        let version = u32_at(4);
        if version != VERSION {
            return Err(FeatureError::VersionMismatch(version));
        }
        let header = Header {
            count: u64::from_le_bytes(h[8..16].try_into().unwrap()),
            dim: u32_at(16),
            classes: u32_at(20),
            flags: u32_at(24),
            class_count: u32_at(28),
        };
        if header.flags & !(FLAG_LABELS | FLAG_CLASS_COUNT) != 0 {
            return Err(FeatureError::UnsupportedFlags(header.flags));
        }
        if header.count == 0 || header.dim == 0 {
            return Err(FeatureError::Empty);
        }
        Ok(header)
    }
}

/// Serializes features (and optional posteriors) to GMF1 bytes.
pub fn encode(fs: &FeatureSet, post: Option<&PosteriorSet>) -> Result<Vec<u8>, FeatureError> {
    if let Some(p) = post {
        if p.count() != fs.count() {
            return Err(FeatureError::CountMismatch { expected: fs.count(), actual: p.count() });
        }
    }
    let mut flags = 0;
    let mut class_count = 0;
    if let Some(l) = fs.labels() {
        flags |= FLAG_LABELS;
        if l.class_count_is_explicit() {
            flags |= FLAG_CLASS_COUNT;
            class_count = l.class_count();
        }
    }
    let header = Header {
        count: fs.count() as u64,
        dim: fs.dim() as u32,
        classes: post.map_or(0, |p| p.classes() as u32),
        flags,
        class_count,
    };
    let mut out = Vec::with_capacity(header.file_len() as usize);
    out.extend_from_slice(&header.encode());
    for v in fs.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    if let Some(l) = fs.labels() {
        for id in l.ids() {
            out.extend_from_slice(&id.to_le_bytes());
        }
    }
    if let Some(p) = post {
        for &v in p.values() {
            out.extend_from_slice(&(v as f32).to_le_bytes());
        }
    }
    Ok(out)
}

/// Parses GMF1 bytes. The returned set has an empty source tag.
pub fn decode(bytes: &[u8]) -> Result<(FeatureSet, Option<PosteriorSet>), FeatureError> {
    let header = Header::decode(bytes)?;
    let expected = header.file_len();
    if (bytes.len() as u64) < expected {
        return Err(FeatureError::TruncatedPayload { expected, actual: bytes.len() as u64 });
    }
    if (bytes.len() as u64) > expected {
        return Err(FeatureError::TrailingBytes { expected, actual: bytes.len() as u64 });
    }
    let n = header.count as usize;
    let d = header.dim as usize;
    let k = header.classes as usize;

    let mut off = HEADER_LEN;
    let fs = FeatureSet::new(d, le_f32s(&bytes[off..off + n * d * 4]).collect())?;
    off += n * d * 4;

    let fs = if header.has_labels() {
        let ids = le_u32s(&bytes[off..off + n * 4]).collect();
        off += n * 4;
        let explicit = (header.flags & FLAG_CLASS_COUNT != 0).then_some(header.class_count);
        fs.with_labels(Labels::new(ids, explicit)?)?
    } else {
        fs
    };

    let post = if k > 0 {
        let vals = le_f32s(&bytes[off..off + n * k * 4]).map(f64::from).collect();
        Some(PosteriorSet::new(k, vals)?)
    } else {
        None
    };
    Ok((fs, post))
}

fn le_f32s(bytes: &[u8]) -> impl Iterator<Item = f32> + '_ {
    bytes.chunks_exact(4).map(|b| f32::from_le_bytes(b.try_into().unwrap()))
}

fn le_u32s(bytes: &[u8]) -> impl Iterator<Item = u32> + '_ {
    bytes.chunks_exact(4).map(|b| u32::from_le_bytes(b.try_into().unwrap()))
}

pub fn write_features<W: Write>(mut dest: W, fs: &FeatureSet, post: Option<&PosteriorSet>) -> Result<(), FeatureError> {
    let bytes = encode(fs, post)?;
    dest.write_all(&bytes)?;
    dest.flush()?;
    Ok(())
}

pub fn read_features<R: Read>(mut source: R) -> Result<(FeatureSet, Option<PosteriorSet>), FeatureError> {
    let mut bytes = Vec::new();
    source.read_to_end(&mut bytes)?;
    decode(&bytes)
}

/// Writes to a temporary sibling and renames it into place.
pub fn write_features_file(
    path: impl AsRef<Path>,
    fs: &FeatureSet,
    post: Option<&PosteriorSet>,
) -> Result<(), FeatureError> {
    let path = path.as_ref();
    let bytes = encode(fs, post)?;
    let tmp = path.with_extension("gmf1.tmp");
    std::fs::write(&tmp, &bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Reads a GMF1 file; the source tag is set to the file stem.
pub fn read_features_file(path: impl AsRef<Path>) -> Result<(FeatureSet, Option<PosteriorSet>), FeatureError> {
    let path = path.as_ref();
    let bytes = std::fs::read(path)?;
    let (fs, post) = decode(&bytes)?;
    let tag = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    Ok((fs.with_source_tag(tag), post))
}
