use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use genmetrics::features::BackboneSpec;
use genmetrics::pixel::{backbone_resize, decode_image, encode_png, prepare_training_image, FilterKind, ImageKind};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{data, CliError, CliResult};

pub const MANIFEST_NAME: &str = "manifest.json";

pub enum PrepMode {
    /// Training route: high-quality resize, normalize, quantize.
    Training { resolution: usize, filter: FilterKind },
    /// Backbone route: resize to the backbone's input size.
    Backbone { spec: BackboneSpec, filter: FilterKind, override_acknowledged: bool },
}

#[derive(Serialize)]
struct Manifest {
    mode: &'static str,
    backbone: Option<String>,
    resolution: usize,
    filter: FilterKind,
    antialias: bool,
    override_acknowledged: bool,
    files: Vec<FileEntry>,
    errors: Vec<FileError>,
}

#[derive(Serialize)]
struct FileEntry {
    input: String,
    output: String,
    input_sha256: String,
    output_sha256: String,
}

#[derive(Serialize)]
struct FileError {
    input: String,
    error: String,
}

fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Image files directly inside `dir`, sorted by file name.
fn list_images(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(data(format!("cannot read {}", dir.display())))?;
    let mut files = Vec::new();
    for e in entries {
        let path = e.map_err(data(format!("cannot read {}", dir.display())))?.path();
        if !path.is_file() {
            continue;
        }
        match path.extension().and_then(|x| x.to_str()).and_then(ImageKind::from_extension) {
            Some(_) => files.push(path),
            None => log::warn!("skipping {} (not a PNG or JPEG)", path.display()),
        }
    }
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(files)
}

fn process(path: &Path, out_dir: &Path, mode: &PrepMode) -> Result<FileEntry, String> {
    let kind = path.extension().and_then(|x| x.to_str()).and_then(ImageKind::from_extension).expect("filtered");
    let bytes = std::fs::read(path).map_err(|e| e.to_string())?;
    let img = decode_image(&bytes, kind).map_err(|e| e.to_string())?;
    let prepared = match mode {
        PrepMode::Training { resolution, filter } => prepare_training_image(&img, *resolution, *filter),
        PrepMode::Backbone { spec, filter, .. } => backbone_resize(&img, spec, Some(*filter)),
    }
    .map_err(|e| e.to_string())?;
    let png = encode_png(&prepared).map_err(|e| e.to_string())?;
    let stem = path.file_stem().expect("file has a name").to_string_lossy();
    let output = format!("{stem}.png");
    std::fs::write(out_dir.join(&output), &png).map_err(|e| e.to_string())?;
    Ok(FileEntry {
        input: path.file_name().expect("file has a name").to_string_lossy().into_owned(),
        output,
        input_sha256: hex_digest(&bytes),
        output_sha256: hex_digest(&png),
    })
}

/// Prepares every image in `input`, writes PNGs and a manifest into `out`.
/// Returns the number of files written.
pub fn run(input: &Path, out: &Path, mode: PrepMode) -> CliResult<usize> {
    let files = list_images(input)?;
    if files.is_empty() {
        return Err(CliError::Data(format!("no PNG or JPEG files in {}", input.display())));
    }
    std::fs::create_dir_all(out).map_err(data(format!("cannot create {}", out.display())))?;

    // Two inputs with the same stem would overwrite each other's output.
    let mut stems = BTreeSet::new();
    let mut duplicates = BTreeSet::new();
    for f in &files {
        if !stems.insert(f.file_stem().map(|s| s.to_owned())) {
            duplicates.insert(f.clone());
        }
    }

    let results: Vec<Result<FileEntry, String>> = files
        .par_iter()
        .map(|f| {
            if duplicates.contains(f) {
                Err("another input has the same file stem".to_string())
            } else {
                process(f, out, &mode)
            }
        })
        .collect();

    let mut manifest = match &mode {
        PrepMode::Training { resolution, filter } => Manifest {
            mode: "training",
            backbone: None,
            resolution: *resolution,
            filter: *filter,
            antialias: true,
            override_acknowledged: false,
            files: Vec::new(),
            errors: Vec::new(),
        },
        PrepMode::Backbone { spec, filter, override_acknowledged } => Manifest {
            mode: "backbone",
            backbone: Some(spec.name.clone()),
            resolution: spec.input_resolution,
            filter: *filter,
            antialias: true,
            override_acknowledged: *override_acknowledged,
            files: Vec::new(),
            errors: Vec::new(),
        },
    };
    for (path, r) in files.iter().zip(results) {
        match r {
            Ok(entry) => manifest.files.push(entry),
            Err(error) => {
                let input = path.file_name().expect("file has a name").to_string_lossy().into_owned();
                eprintln!("{input}: {error}");
                manifest.errors.push(FileError { input, error });
            }
        }
    }
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    std::fs::write(out.join(MANIFEST_NAME), text).map_err(data("cannot write manifest"))?;

    if manifest.errors.is_empty() {
        Ok(manifest.files.len())
    } else {
        Err(CliError::Data(format!("{} of {} files failed", manifest.errors.len(), files.len())))
    }
}
