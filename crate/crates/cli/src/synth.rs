//! Synthetic feature files for demos and tests: either Gaussian samples or
//! coarse pixel features computed from a directory of prepared PNGs.

use std::path::Path;

use genmetrics::analysis::SeededRng;
use genmetrics::features::{write_features_file, FeatureSet, Labels, PosteriorSet};
use genmetrics::pixel::{decode_image, normalize, resize, FilterKind, ImageKind};

use crate::error::{data, CliError, CliResult};

pub struct GaussianParams {
    pub count: usize,
    pub dim: usize,
    pub mean: f64,
    pub std: f64,
    pub classes: Option<u32>,
    pub seed: u64,
}

/// Standard normal from two uniform draws (Box-Muller).
fn normal(rng: &mut SeededRng) -> f64 {
    let unit = |r: &mut SeededRng| (r.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    let u = 1.0 - unit(rng);
    let v = unit(rng);
    (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
}

/// Labels cycle through the classes; posteriors put most of their mass on
/// the label and spread the rest at random.
fn labels_and_posteriors(count: usize, classes: u32, rng: &mut SeededRng) -> CliResult<(Labels, PosteriorSet)> {
    let ids: Vec<u32> = (0..count).map(|i| (i % classes as usize) as u32).collect();
    let k = classes as usize;
    let mut post = Vec::with_capacity(count * k);
    for &label in &ids {
        let mut row: Vec<f64> = (0..k).map(|_| 0.05 + (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64).collect();
        row[label as usize] += k as f64;
        let s: f64 = row.iter().sum();
        post.extend(row.iter().map(|v| v / s));
    }
    let labels = Labels::new(ids, Some(classes)).map_err(data("labels"))?;
    Ok((labels, PosteriorSet::new(k, post).map_err(data("posteriors"))?))
}

pub fn gaussian(out: &Path, p: &GaussianParams) -> CliResult<()> {
    if p.count == 0 || p.dim == 0 {
        return Err(CliError::Usage("--count and --dim must be positive".into()));
    }
    let mut rng = SeededRng::new(p.seed, 0);
    let values: Vec<f32> = (0..p.count * p.dim).map(|_| (p.mean + p.std * normal(&mut rng)) as f32).collect();
    let mut fs = FeatureSet::new(p.dim, values).map_err(data("features"))?;
    let mut post = None;
    if let Some(k) = p.classes {
        if k == 0 {
            return Err(CliError::Usage("--classes must be positive".into()));
        }
        let (labels, ps) = labels_and_posteriors(p.count, k, &mut rng)?;
        fs = fs.with_labels(labels).map_err(data("labels"))?;
        post = Some(ps);
    }
    write_features_file(out, &fs, post.as_ref()).map_err(data(format!("cannot write {}", out.display())))
}

/// Side of the pooled grid used by [`from_images`].
const GRID: usize = 4;

/// One `GRID x GRID x 3` feature row per PNG (box-like bilinear pooling of
/// the normalized image), in file-name order.
pub fn from_images(dir: &Path, out: &Path, classes: Option<u32>, seed: u64) -> CliResult<usize> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .map_err(data(format!("cannot read {}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().and_then(|x| x.to_str()).is_some_and(|x| x.eq_ignore_ascii_case("png")))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(CliError::Data(format!("no PNG files in {}", dir.display())));
    }
    let dim = GRID * GRID * 3;
    let mut values = Vec::with_capacity(files.len() * dim);
    for f in &files {
        let bytes = std::fs::read(f).map_err(data(f.display()))?;
        let img = decode_image(&bytes, ImageKind::Png).map_err(data(f.display()))?;
        let pooled = resize(&img, GRID, GRID, FilterKind::Bilinear, true).map_err(data(f.display()))?;
        let unit = normalize(&pooled).map_err(data(f.display()))?;
        let px = unit.as_f32().expect("float storage");
        for i in 0..GRID * GRID {
            for c in 0..3 {
                values.push(px[i * unit.channels() + c.min(unit.channels() - 1)]);
            }
        }
    }
    let mut fs = FeatureSet::new(dim, values).map_err(data("features"))?;
    let mut post = None;
    if let Some(k) = classes {
        let mut rng = SeededRng::new(seed, 0);
        let (labels, ps) = labels_and_posteriors(files.len(), k, &mut rng)?;
        fs = fs.with_labels(labels).map_err(data("labels"))?;
        post = Some(ps);
    }
    write_features_file(out, &fs, post.as_ref()).map_err(data(format!("cannot write {}", out.display())))?;
    Ok(files.len())
}
