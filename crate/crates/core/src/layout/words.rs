use std::collections::HashMap;

use crate::raster::Rect;

use super::components::median;
use super::{ConnectedComponent, TextLine};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordBox {
    pub line_id: usize,
    pub bbox: Rect,
    pub component_ids: Vec<usize>,
}

/// Gap width used when none is configured: half the line's median component
/// height, never below 3 columns.
pub fn default_gap_threshold(line_comps: &[&ConnectedComponent]) -> usize {
    let mut h: Vec<usize> = line_comps.iter().map(|c| c.height()).collect();
    if h.is_empty() {
        return 3;
    }
    let med = median(&mut h);
    ((0.5 * med).round() as usize).max(3)
}

/// Splits a line into words with a vertical projection profile.
///
/// Only the line's own components contribute to the column histogram, so
/// ink intruding from neighbouring lines is ignored. Runs of at least
/// `gap_threshold` empty columns separate words; shorter runs are
/// intra-word spacing. Words come back left to right.
pub fn segment_words(
    line: &TextLine,
    comps: &HashMap<usize, &ConnectedComponent>,
    gap_threshold: Option<usize>,
) -> Vec<WordBox> {
    let members: Vec<&ConnectedComponent> = line
        .component_ids
        .iter()
        .filter_map(|id| comps.get(id).copied())
        .collect();
    if members.is_empty() {
        return Vec::new();
    }
    let gap = gap_threshold
        .unwrap_or_else(|| default_gap_threshold(&members))
        .max(1);

    let left = members.iter().map(|c| c.bbox.left).min().unwrap();
    let right = members.iter().map(|c| c.bbox.right).max().unwrap();
    let mut hist = vec![0usize; right - left + 1];
    for c in &members {
        for &(x, _) in &c.pixels {
            hist[x - left] += 1;
        }
    }

    // column spans of words, in profile coordinates
    let mut spans: Vec<(usize, usize)> = Vec::new();
    let mut zeros = 0;
    for (i, &count) in hist.iter().enumerate() {
        if count == 0 {
            zeros += 1;
            continue;
        }
        match spans.last_mut() {
            Some(span) if zeros < gap => span.1 = i,
            _ => spans.push((i, i)),
        }
        zeros = 0;
    }

    let mut words: Vec<WordBox> = spans
        .iter()
        .map(|&(a, b)| WordBox {
            line_id: line.id,
            // top/bottom are filled in from the member components below
            bbox: Rect {
                left: left + a,
                top: usize::MAX,
                right: left + b,
                bottom: 0,
            },
            component_ids: Vec::new(),
        })
        .collect();
    for c in &members {
        // a component's columns are contiguous, so it falls in exactly one span
        let idx = words.partition_point(|w| w.bbox.right < c.bbox.left);
        let w = &mut words[idx];
        w.component_ids.push(c.id);
        w.bbox.top = w.bbox.top.min(c.bbox.top);
        w.bbox.bottom = w.bbox.bottom.max(c.bbox.bottom);
    }
    for w in &mut words {
        w.component_ids.sort_unstable();
    }
    words
}
