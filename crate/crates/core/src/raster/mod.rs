//! Raster substrate: grayscale pages, ink masks, bounding boxes, and the
//! cleanup operators applied before layout analysis.

mod dat;
mod morphology;
mod pgm;
mod threshold;

pub use dat::{load_dat, save_dat};
pub use morphology::{close, despeckle, dilate, erode};
pub use pgm::{load_pgm, save_pgm};
pub use threshold::{binarize, threshold_of};

use crate::error::{Error, Result};

/// 8-bit grayscale raster, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        check_dims(width, height, pixels.len())?;
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, value: u8) {
        self.pixels[y * self.width + x] = value;
    }

    /// Renders a mask as black ink (0) on white paper (255).
    pub fn from_mask(mask: &BinaryImage) -> Self {
        let pixels = mask
            .mask()
            .iter()
            .map(|&fg| if fg { 0 } else { 255 })
            .collect();
        Self {
            width: mask.width(),
            height: mask.height(),
            pixels,
        }
    }
}

/// Ink mask; `true` marks foreground.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    mask: Vec<bool>,
}

impl BinaryImage {
    pub fn new(width: usize, height: usize, mask: Vec<bool>) -> Result<Self> {
        check_dims(width, height, mask.len())?;
        Ok(Self {
            width,
            height,
            mask,
        })
    }

    /// All-background image.
    pub fn blank(width: usize, height: usize) -> Result<Self> {
        Self::new(width, height, vec![false; width * height])
    }

    /// Parses rows of `#` (ink) and `.` (paper). Handy for tests and examples.
    pub fn from_ascii(rows: &[&str]) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.chars().count());
        let mut mask = Vec::with_capacity(width * height);
        for (y, row) in rows.iter().enumerate() {
            if row.chars().count() != width {
                return Err(Error::InvalidImage(format!(
                    "ascii row {y} has {} columns, expected {width}",
                    row.chars().count()
                )));
            }
            mask.extend(row.chars().map(|c| c == '#'));
        }
        Self::new(width, height, mask)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.mask[y * self.width + x]
    }

    /// Like [`get`](Self::get) but treats out-of-image coordinates as background.
    pub fn get_or_bg(&self, x: isize, y: isize) -> bool {
        if x < 0 || y < 0 || x as usize >= self.width || y as usize >= self.height {
            return false;
        }
        self.mask[y as usize * self.width + x as usize]
    }

    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.mask[y * self.width + x] = value;
    }

    pub fn row(&self, y: usize) -> &[bool] {
        &self.mask[y * self.width..(y + 1) * self.width]
    }

    pub fn foreground_count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn bounds(&self) -> Rect {
        Rect::new(0, 0, self.width - 1, self.height - 1)
    }

    /// Tight box around all foreground pixels, `None` for a blank image.
    pub fn ink_bounds(&self) -> Option<Rect> {
        let mut acc: Option<Rect> = None;
        for y in 0..self.height {
            for x in 0..self.width {
                if self.get(x, y) {
                    acc = Some(match acc {
                        None => Rect::point(x, y),
                        Some(r) => r.union(&Rect::point(x, y)),
                    });
                }
            }
        }
        acc
    }

    /// Copies the pixels under `rect`, which must lie inside the image.
    pub fn crop(&self, rect: &Rect) -> BinaryImage {
        debug_assert!(self.bounds().contains_rect(rect));
        let mut mask = Vec::with_capacity(rect.width() * rect.height());
        for y in rect.top..=rect.bottom {
            mask.extend_from_slice(&self.row(y)[rect.left..=rect.right]);
        }
        BinaryImage {
            width: rect.width(),
            height: rect.height(),
            mask,
        }
    }

    /// Crop to the tight ink box; `None` when blank.
    pub fn trim(&self) -> Option<BinaryImage> {
        self.ink_bounds().map(|r| self.crop(&r))
    }

    /// Places this image on a larger blank canvas at offset `(dx, dy)`.
    pub fn translated(&self, dx: usize, dy: usize, width: usize, height: usize) -> Result<Self> {
        if dx + self.width > width || dy + self.height > height {
            return Err(Error::InvalidImage(
                "translated image does not fit the canvas".into(),
            ));
        }
        let mut out = BinaryImage::blank(width, height)?;
        for y in 0..self.height {
            for x in 0..self.width {
                if self.get(x, y) {
                    out.set(x + dx, y + dy, true);
                }
            }
        }
        Ok(out)
    }
}

fn check_dims(width: usize, height: usize, len: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidImage(format!(
            "dimensions must be at least 1x1, got {width}x{height}"
        )));
    }
    if width.checked_mul(height) != Some(len) {
        return Err(Error::InvalidImage(format!(
            "{width}x{height} image needs {} pixels, got {len}",
            width * height
        )));
    }
    Ok(())
}

/// Axis-aligned box with inclusive bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rect {
    pub left: usize,
    pub top: usize,
    pub right: usize,
    pub bottom: usize,
}

impl Rect {
    pub fn new(left: usize, top: usize, right: usize, bottom: usize) -> Self {
        debug_assert!(left <= right && top <= bottom);
        Self {
            left,
            top,
            right,
            bottom,
        }
    }

    pub fn point(x: usize, y: usize) -> Self {
        Self::new(x, y, x, y)
    }

    pub fn width(&self) -> usize {
        self.right - self.left + 1
    }

    pub fn height(&self) -> usize {
        self.bottom - self.top + 1
    }

    pub fn union(&self, other: &Rect) -> Rect {
        Rect {
            left: self.left.min(other.left),
            top: self.top.min(other.top),
            right: self.right.max(other.right),
            bottom: self.bottom.max(other.bottom),
        }
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        (self.left..=self.right).contains(&x) && (self.top..=self.bottom).contains(&y)
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        other.left >= self.left
            && other.right <= self.right
            && other.top >= self.top
            && other.bottom <= self.bottom
    }

    /// Number of rows shared by the two vertical extents.
    pub fn vertical_overlap(&self, other: &Rect) -> usize {
        let top = self.top.max(other.top);
        let bottom = self.bottom.min(other.bottom);
        if top > bottom {
            0
        } else {
            bottom - top + 1
        }
    }

    pub fn center_y(&self) -> f64 {
        (self.top + self.bottom) as f64 / 2.0
    }

    pub fn translate(&self, dx: usize, dy: usize) -> Rect {
        Rect::new(
            self.left + dx,
            self.top + dy,
            self.right + dx,
            self.bottom + dy,
        )
    }
}

/// Maximal 8-connected foreground regions, each as a list of `(x, y)` in
/// raster order, regions ordered by their first pixel in raster order.
pub(crate) fn foreground_regions(img: &BinaryImage) -> Vec<Vec<(usize, usize)>> {
    let (w, h) = (img.width(), img.height());
    let mut seen = vec![false; w * h];
    let mut regions = Vec::new();
    let mut stack = Vec::new();
    for start in 0..w * h {
        if !img.mask[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        let mut region = Vec::new();
        while let Some(idx) = stack.pop() {
            let (x, y) = (idx % w, idx / w);
            region.push((x, y));
            let x0 = x.saturating_sub(1);
            let y0 = y.saturating_sub(1);
            let x1 = (x + 1).min(w - 1);
            let y1 = (y + 1).min(h - 1);
            for ny in y0..=y1 {
                for nx in x0..=x1 {
                    let n = ny * w + nx;
                    if img.mask[n] && !seen[n] {
                        seen[n] = true;
                        stack.push(n);
                    }
                }
            }
        }
        region.sort_unstable_by_key(|&(x, y)| (y, x));
        regions.push(region);
    }
    regions
}
