use crate::raster::{foreground_regions, BinaryImage, Rect};

use super::{ConnectedComponent, HeightClass, LayoutConfig};

/// A horizontal text line.
#[derive(Debug, Clone, PartialEq)]
pub struct TextLine {
    pub id: usize,
    /// Sorted member component ids.
    pub component_ids: Vec<usize>,
    /// Union of member bounding boxes.
    pub band: Rect,
}

impl TextLine {
    fn add(&mut self, comp: &ConnectedComponent) {
        self.component_ids.push(comp.id);
        self.band = self.band.union(&comp.bbox);
    }

    fn finish(&mut self) {
        self.component_ids.sort_unstable();
    }
}

/// Chains medium-height components into lines, scanning left to right.
///
/// A component joins the line whose band it overlaps most, provided the
/// shared rows reach `cfg.min_line_overlap` of the smaller of the two
/// heights; otherwise it starts a new line. Lines are numbered top to bottom
/// by band center.
pub fn cluster_lines(comps: &[ConnectedComponent], cfg: &LayoutConfig) -> Vec<TextLine> {
    let mut medium: Vec<&ConnectedComponent> = comps
        .iter()
        .filter(|c| c.height_class == HeightClass::Medium)
        .collect();
    medium.sort_by_key(|c| (c.bbox.left, c.bbox.top, c.id));

    let mut lines: Vec<TextLine> = Vec::new();
    for comp in medium {
        let mut best: Option<(usize, usize)> = None;
        for (i, line) in lines.iter().enumerate() {
            let overlap = comp.bbox.vertical_overlap(&line.band);
            let smaller = comp.height().min(line.band.height()) as f64;
            if overlap as f64 >= cfg.min_line_overlap * smaller
                && overlap > 0
                && best.is_none_or(|(_, o)| overlap > o)
            {
                best = Some((i, overlap));
            }
        }
        match best {
            Some((i, _)) => lines[i].add(comp),
            None => lines.push(TextLine {
                id: lines.len(),
                component_ids: vec![comp.id],
                band: comp.bbox,
            }),
        }
    }

    // stable: equal centers keep seeding order
    lines.sort_by(|a, b| a.band.center_y().total_cmp(&b.band.center_y()));
    for (id, line) in lines.iter_mut().enumerate() {
        line.id = id;
        line.finish();
    }
    lines
}

/// Index of the line whose band center, taken at the component's own
/// x-centroid, is nearest to the component centroid. Ties go to the lower id.
fn nearest_line(bands: &[Rect], comp: &ConnectedComponent) -> usize {
    let (_, cy) = comp.centroid();
    let mut best = (0, f64::INFINITY);
    for (i, band) in bands.iter().enumerate() {
        // the band point shares the centroid's x, so the Euclidean distance
        // reduces to the vertical one
        let d = (cy - band.center_y()).abs();
        if d < best.1 {
            best = (i, d);
        }
    }
    best.0
}

/// Attaches each small component (dots, marks, stroke fragments) to its
/// nearest line. Distances are measured against the bands as they were
/// before any small component joined.
pub fn assign_small_components(
    mut lines: Vec<TextLine>,
    smalls: &[&ConnectedComponent],
) -> Vec<TextLine> {
    if lines.is_empty() {
        return lines;
    }
    let bands: Vec<Rect> = lines.iter().map(|l| l.band).collect();
    for comp in smalls {
        lines[nearest_line(&bands, comp)].add(comp);
    }
    lines.iter_mut().for_each(TextLine::finish);
    lines
}

/// Result of distributing large components over the lines.
#[derive(Debug, Clone)]
pub struct LargeAssignment {
    pub lines: Vec<TextLine>,
    /// New components cut out of large ones, ids continuing from `next_id`.
    pub fragments: Vec<ConnectedComponent>,
    /// Ids of large components that were cut and replaced by fragments.
    pub split: Vec<usize>,
}

/// Allocates large components to lines.
///
/// A large component overlapping two or more bands is cut horizontally at
/// the midpoints between consecutive band centers; each slice is relabelled
/// into fresh components that join the slice's line. Anything overlapping at
/// most one band joins that line (or the nearest one) whole.
pub fn split_large_components(
    mut lines: Vec<TextLine>,
    larges: &[&ConnectedComponent],
    mut next_id: usize,
) -> LargeAssignment {
    let mut fragments = Vec::new();
    let mut split = Vec::new();
    if lines.is_empty() {
        return LargeAssignment {
            lines,
            fragments,
            split,
        };
    }
    let bands: Vec<Rect> = lines.iter().map(|l| l.band).collect();
    let mut by_center: Vec<usize> = (0..bands.len()).collect();
    by_center.sort_by(|&a, &b| bands[a].center_y().total_cmp(&bands[b].center_y()));

    for comp in larges {
        let hit: Vec<usize> = by_center
            .iter()
            .copied()
            .filter(|&i| comp.bbox.vertical_overlap(&bands[i]) > 0)
            .collect();
        match hit.as_slice() {
            [] => {
                let i = nearest_line(&bands, comp);
                lines[i].add(comp);
            }
            [i] => lines[*i].add(comp),
            _ => {
                split.push(comp.id);
                let cuts: Vec<usize> = hit
                    .windows(2)
                    .map(|w| {
                        ((bands[w[0]].center_y() + bands[w[1]].center_y()) / 2.0).floor() as usize
                    })
                    .collect();
                for (slot, &line_idx) in hit.iter().enumerate() {
                    let lo = if slot == 0 { 0 } else { cuts[slot - 1] + 1 };
                    let hi = cuts.get(slot).copied().unwrap_or(usize::MAX);
                    let slice: Vec<(usize, usize)> = comp
                        .pixels
                        .iter()
                        .copied()
                        .filter(|&(_, y)| y >= lo && y <= hi)
                        .collect();
                    for piece in relabel(&slice) {
                        let mut frag = ConnectedComponent::from_pixels(next_id, piece);
                        frag.height_class = HeightClass::Large;
                        next_id += 1;
                        lines[line_idx].add(&frag);
                        fragments.push(frag);
                    }
                }
            }
        }
    }
    lines.iter_mut().for_each(TextLine::finish);
    LargeAssignment {
        lines,
        fragments,
        split,
    }
}

/// Splits an arbitrary pixel set into its 8-connected pieces.
fn relabel(pixels: &[(usize, usize)]) -> Vec<Vec<(usize, usize)>> {
    let Some(&(x, y)) = pixels.first() else {
        return Vec::new();
    };
    let bbox = pixels
        .iter()
        .fold(Rect::point(x, y), |r, &(x, y)| r.union(&Rect::point(x, y)));
    let mut local = BinaryImage::blank(bbox.width(), bbox.height()).expect("non-empty box");
    for &(x, y) in pixels {
        local.set(x - bbox.left, y - bbox.top, true);
    }
    foreground_regions(&local)
        .into_iter()
        .map(|piece| {
            piece
                .into_iter()
                .map(|(x, y)| (x + bbox.left, y + bbox.top))
                .collect()
        })
        .collect()
}
