//! 3x3 binary morphology and component-level noise removal.
//!
//! Pixels outside the image count as background for every kernel.

use super::{foreground_regions, BinaryImage};

/// Keeps a pixel only when its whole 3x3 neighbourhood is ink.
pub fn erode(img: &BinaryImage) -> BinaryImage {
    square_pass(img, |a, b, c| a && b && c)
}

/// Marks a pixel when any pixel of its 3x3 neighbourhood is ink.
pub fn dilate(img: &BinaryImage) -> BinaryImage {
    square_pass(img, |a, b, c| a || b || c)
}

/// One dilation followed by one erosion; bridges hairline breaks in strokes.
pub fn close(img: &BinaryImage) -> BinaryImage {
    erode(&dilate(img))
}

// The 3x3 square is separable into a 1x3 pass followed by a 3x1 pass.
fn square_pass(img: &BinaryImage, op: impl Fn(bool, bool, bool) -> bool) -> BinaryImage {
    let (w, h) = (img.width(), img.height());
    let src = img.mask();
    let mut horiz = vec![false; w * h];
    for y in 0..h {
        let row = &src[y * w..(y + 1) * w];
        let out = &mut horiz[y * w..(y + 1) * w];
        for x in 0..w {
            let left = x > 0 && row[x - 1];
            let right = x + 1 < w && row[x + 1];
            out[x] = op(left, row[x], right);
        }
    }
    let mut mask = vec![false; w * h];
    for y in 0..h {
        for x in 0..w {
            let up = y > 0 && horiz[(y - 1) * w + x];
            let down = y + 1 < h && horiz[(y + 1) * w + x];
            mask[y * w + x] = op(up, horiz[y * w + x], down);
        }
    }
    BinaryImage::new(w, h, mask).expect("same dimensions as input")
}

/// Removes salt noise and ruling lines along the page edges.
///
/// Drops every 8-connected component with fewer than `min_area` pixels, and
/// every component lying wholly inside the `border_margin`-wide frame whose
/// bounding box is more than 10 times longer than it is wide.
pub fn despeckle(img: &BinaryImage, min_area: usize, border_margin: usize) -> BinaryImage {
    let (w, h) = (img.width(), img.height());
    let in_band = |x: usize, y: usize| {
        x < border_margin || y < border_margin || x + border_margin >= w || y + border_margin >= h
    };
    let mut out = img.clone();
    for region in foreground_regions(img) {
        let remove = if region.len() < min_area {
            true
        } else if border_margin > 0 && region.iter().all(|&(x, y)| in_band(x, y)) {
            let (mut x0, mut y0, mut x1, mut y1) = (usize::MAX, usize::MAX, 0, 0);
            for &(x, y) in &region {
                x0 = x0.min(x);
                y0 = y0.min(y);
                x1 = x1.max(x);
                y1 = y1.max(y);
            }
            let (bw, bh) = (x1 - x0 + 1, y1 - y0 + 1);
            bw.max(bh) > 10 * bw.min(bh)
        } else {
            false
        };
        if remove {
            for (x, y) in region {
                out.set(x, y, false);
            }
        }
    }
    out
}
