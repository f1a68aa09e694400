use crate::error::{Error, Result};
use crate::raster::{foreground_regions, BinaryImage, Rect};

use super::LayoutConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HeightClass {
    Small,
    Medium,
    Large,
}

/// A maximal 8-connected set of ink pixels.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectedComponent {
    pub id: usize,
    pub bbox: Rect,
    /// `(x, y)` page coordinates in raster order.
    pub pixels: Vec<(usize, usize)>,
    pub height_class: HeightClass,
}

impl ConnectedComponent {
    /// Builds a component from a non-empty pixel list.
    pub(crate) fn from_pixels(id: usize, pixels: Vec<(usize, usize)>) -> Self {
        let (x, y) = pixels[0];
        let bbox = pixels
            .iter()
            .fold(Rect::point(x, y), |r, &(x, y)| r.union(&Rect::point(x, y)));
        Self {
            id,
            bbox,
            pixels,
            height_class: HeightClass::Medium,
        }
    }

    pub fn area(&self) -> usize {
        self.pixels.len()
    }

    pub fn height(&self) -> usize {
        self.bbox.height()
    }

    pub fn centroid(&self) -> (f64, f64) {
        let n = self.pixels.len() as f64;
        let (sx, sy) = self.pixels.iter().fold((0.0, 0.0), |(sx, sy), &(x, y)| {
            (sx + x as f64, sy + y as f64)
        });
        (sx / n, sy / n)
    }
}

/// Labels ink pixels into 8-connected components.
///
/// Ids follow the raster order of each component's first (topmost, then
/// leftmost) pixel. Every component starts out as [`HeightClass::Medium`].
pub fn connected_components(img: &BinaryImage) -> Vec<ConnectedComponent> {
    foreground_regions(img)
        .into_iter()
        .enumerate()
        .map(|(id, px)| ConnectedComponent::from_pixels(id, px))
        .collect()
}

pub(crate) fn median(values: &mut [usize]) -> f64 {
    values.sort_unstable();
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2] as f64
    } else {
        (values[n / 2 - 1] + values[n / 2]) as f64 / 2.0
    }
}

/// Median bounding-box height, `None` for an empty slice.
pub fn median_height(comps: &[ConnectedComponent]) -> Option<f64> {
    if comps.is_empty() {
        return None;
    }
    let mut h: Vec<usize> = comps.iter().map(ConnectedComponent::height).collect();
    Some(median(&mut h))
}

/// Sorts components into small / medium / large against the median height.
pub fn classify_heights(
    mut comps: Vec<ConnectedComponent>,
    cfg: &LayoutConfig,
) -> Result<Vec<ConnectedComponent>> {
    let med = median_height(&comps).ok_or(Error::NoComponents)?;
    for c in &mut comps {
        let h = c.height() as f64;
        c.height_class = if h < cfg.small_ratio * med {
            HeightClass::Small
        } else if h > cfg.large_ratio * med {
            HeightClass::Large
        } else {
            HeightClass::Medium
        };
    }
    Ok(comps)
}
