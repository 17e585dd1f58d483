use std::path::PathBuf;

use genmetrics::pixel::{decode_image, resize, FilterKind, ImageKind, PixelBuffer};

fn load(name: &str) -> PixelBuffer {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/resample").join(name);
    decode_image(&std::fs::read(&path).unwrap(), ImageKind::Png).unwrap()
}

/// Largest per-sample difference between our resize and the stored raster.
fn max_error(pattern: &str, filter: FilterKind, direction: &str) -> u8 {
    let src = load(&format!("{pattern}_src.png"));
    let want = load(&format!("{pattern}_{}_{direction}.png", filter.name()));
    let got = resize(&src, want.width(), want.height(), filter, true).unwrap();
    assert_eq!(got.channels(), want.channels());
    got.as_u8().unwrap().iter().zip(want.as_u8().unwrap()).map(|(a, b)| a.abs_diff(*b)).max().unwrap()
}

#[test]
fn twelve_goldens_within_one_level() {
    let mut worst = 0;
    for pattern in ["checker", "ramp"] {
        for filter in [FilterKind::Bilinear, FilterKind::Bicubic, FilterKind::Lanczos] {
            for direction in ["down", "up"] {
                let e = max_error(pattern, filter, direction);
                assert!(e <= 1, "{pattern} {filter} {direction}: off by {e}");
                worst = worst.max(e);
            }
        }
    }
    println!("worst golden deviation: {worst}");
}
