use super::{BinaryImage, GrayImage};

/// Global threshold of a page: the midpoint of its darkest and brightest
/// intensity.
pub fn threshold_of(img: &GrayImage) -> f64 {
    let (lo, hi) = min_max(img);
    (lo as f64 + hi as f64) / 2.0
}

fn min_max(img: &GrayImage) -> (u8, u8) {
    img.pixels()
        .iter()
        .fold((u8::MAX, u8::MIN), |(lo, hi), &v| (lo.min(v), hi.max(v)))
}

/// Marks every pixel strictly darker than the min/max midpoint as ink.
///
/// The comparison is done as `2v < min + max` so the half-integer threshold
/// is exact. A uniform image has no pixel below its threshold and comes out
/// blank.
pub fn binarize(img: &GrayImage) -> BinaryImage {
    let (lo, hi) = min_max(img);
    let sum = lo as u16 + hi as u16;
    let mask = img.pixels().iter().map(|&v| 2 * (v as u16) < sum).collect();
    BinaryImage::new(img.width(), img.height(), mask).expect("dimensions copied from a valid image")
}
