//! Page layout: connected components, text lines and words.
//!
//! The stages run as a strict pipeline:
//!
//! 1. [`connected_components`] labels 8-connected ink.
//! 2. [`classify_heights`] buckets components by height relative to the
//!    page median.
//! 3. [`cluster_lines`] chains medium components into line bands.
//! 4. [`assign_small_components`] attaches dots and fragments to the nearest
//!    band.
//! 5. [`split_large_components`] cuts components bridging several bands.
//! 6. [`segment_words`] splits each line on wide gaps in its column profile.
//!
//! [`segment_page`] runs all of them.

mod components;
mod lines;
mod words;

use std::collections::HashMap;
use std::fmt::Write as _;

pub use components::{
    classify_heights, connected_components, median_height, ConnectedComponent, HeightClass,
};
pub use lines::{
    assign_small_components, cluster_lines, split_large_components, LargeAssignment, TextLine,
};
pub use words::{default_gap_threshold, segment_words, WordBox};

use crate::error::{Error, Result};
use crate::raster::{BinaryImage, Rect};

/// Tunables for line and word extraction.
#[derive(Debug, Clone, PartialEq)]
pub struct LayoutConfig {
    /// Components shorter than this fraction of the median height are small.
    pub small_ratio: f64,
    /// Components taller than this multiple of the median height are large.
    pub large_ratio: f64,
    /// Minimum shared rows, as a fraction of the smaller height, for a
    /// component to join a line.
    pub min_line_overlap: f64,
    /// Fixed inter-word gap in columns; `None` derives it per line.
    pub gap_threshold: Option<usize>,
}

impl Default for LayoutConfig {
    fn default() -> Self {
        Self {
            small_ratio: 0.5,
            large_ratio: 2.0,
            min_line_overlap: 0.4,
            gap_threshold: None,
        }
    }
}

/// Everything recovered from one page.
#[derive(Debug, Clone)]
pub struct PageLayout {
    width: usize,
    height: usize,
    /// Indexed by id. Large components that were cut stay here but no line
    /// references them; their fragments are appended after the originals.
    pub components: Vec<ConnectedComponent>,
    pub lines: Vec<TextLine>,
    /// Words of every line, line by line, left to right within a line.
    pub words: Vec<WordBox>,
    /// Ids of large components replaced by fragments.
    pub split_components: Vec<usize>,
    /// Components that could not be placed on any line.
    pub unassigned: Vec<usize>,
}

impl PageLayout {
    pub fn component(&self, id: usize) -> &ConnectedComponent {
        &self.components[id]
    }

    /// Words of one line.
    pub fn line_words(&self, line_id: usize) -> impl Iterator<Item = &WordBox> {
        self.words.iter().filter(move |w| w.line_id == line_id)
    }

    /// Word index within its line, following the order of [`Self::words`].
    pub fn indexed_words(&self) -> impl Iterator<Item = (usize, &WordBox)> {
        let mut counters: HashMap<usize, usize> = HashMap::new();
        self.words.iter().map(move |w| {
            let n = counters.entry(w.line_id).or_insert(0);
            let idx = *n;
            *n += 1;
            (idx, w)
        })
    }

    /// Bitmap of a word's own components, cropped to its bounding box.
    pub fn word_image(&self, word: &WordBox) -> BinaryImage {
        let b = word.bbox;
        let mut img = BinaryImage::blank(b.width(), b.height()).expect("non-empty box");
        for &id in &word.component_ids {
            for &(x, y) in &self.components[id].pixels {
                img.set(x - b.left, y - b.top, true);
            }
        }
        img
    }

    pub fn page_size(&self) -> (usize, usize) {
        (self.width, self.height)
    }
}

/// Runs the full layout pipeline on a cleaned binary page.
pub fn segment_page(img: &BinaryImage, cfg: &LayoutConfig) -> PageLayout {
    let comps = connected_components(img);
    let mut layout = PageLayout {
        width: img.width(),
        height: img.height(),
        components: Vec::new(),
        lines: Vec::new(),
        words: Vec::new(),
        split_components: Vec::new(),
        unassigned: Vec::new(),
    };
    let Ok(comps) = classify_heights(comps, cfg) else {
        return layout;
    };

    let lines = cluster_lines(&comps, cfg);
    let of_class = |class| {
        comps
            .iter()
            .filter(|c| c.height_class == class)
            .collect::<Vec<_>>()
    };
    let smalls = of_class(HeightClass::Small);
    let larges = of_class(HeightClass::Large);
    if lines.is_empty() {
        layout.unassigned = smalls.iter().chain(&larges).map(|c| c.id).collect();
        layout.unassigned.sort_unstable();
        layout.components = comps;
        return layout;
    }
    let lines = assign_small_components(lines, &smalls);
    let LargeAssignment {
        lines,
        fragments,
        split,
    } = split_large_components(lines, &larges, comps.len());

    let mut all = comps;
    all.extend(fragments);
    let by_id: HashMap<usize, &ConnectedComponent> = all.iter().map(|c| (c.id, c)).collect();
    let words = lines
        .iter()
        .flat_map(|line| segment_words(line, &by_id, cfg.gap_threshold))
        .collect();

    layout.components = all;
    layout.lines = lines;
    layout.words = words;
    layout.split_components = split;
    layout
}

/// One row of the segmentation manifest.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ManifestRecord {
    pub page: u32,
    pub line: usize,
    pub word: usize,
    pub bbox: Rect,
}

impl ManifestRecord {
    /// File name used for the word's DAT crop.
    pub fn crop_name(&self) -> String {
        format!("p{}_l{}_w{}.dat", self.page, self.line, self.word)
    }

    /// `page<TAB>line<TAB>word`, the key that prefixes per-word output.
    pub fn key(&self) -> String {
        format!("{}\t{}\t{}", self.page, self.line, self.word)
    }
}

pub fn manifest_records(page: u32, layout: &PageLayout) -> Vec<ManifestRecord> {
    layout
        .indexed_words()
        .map(|(word, w)| ManifestRecord {
            page,
            line: w.line_id,
            word,
            bbox: w.bbox,
        })
        .collect()
}

/// `page<TAB>line<TAB>word<TAB>l,t,r,b<LF>` per record.
pub fn format_manifest(records: &[ManifestRecord]) -> String {
    let mut out = String::new();
    for r in records {
        let b = r.bbox;
        let _ = writeln!(
            out,
            "{}\t{},{},{},{}",
            r.key(),
            b.left,
            b.top,
            b.right,
            b.bottom
        );
    }
    out
}

pub fn parse_manifest(text: &str) -> Result<Vec<ManifestRecord>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| {
            parse_record(l).ok_or_else(|| Error::Manifest {
                line: i + 1,
                message: format!("malformed record {l:?}"),
            })
        })
        .collect()
}

fn parse_record(line: &str) -> Option<ManifestRecord> {
    let mut f = line.split('\t');
    let page = f.next()?.parse().ok()?;
    let ln = f.next()?.parse().ok()?;
    let word = f.next()?.parse().ok()?;
    let coords: Vec<usize> = f
        .next()?
        .split(',')
        .map(|s| s.parse().ok())
        .collect::<Option<_>>()?;
    if f.next().is_some() {
        return None;
    }
    let [l, t, r, b] = coords.as_slice() else {
        return None;
    };
    if l > r || t > b {
        return None;
    }
    Some(ManifestRecord {
        page,
        line: ln,
        word,
        bbox: Rect::new(*l, *t, *r, *b),
    })
}
