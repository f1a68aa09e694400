//! Synthetic handwriting: word bitmaps for both script classes and mixed
//! multi-line pages with ground truth.
//!
//! Matra-class words hang letter-like strokes from a continuous top stroke
//! that spans the word; a configurable share of them get a break in that
//! stroke. Roman-class words are rows of separate letters (bowls, arches,
//! ascenders, descenders, dotted stems) with no word-wide horizontal.
//!
//! All randomness comes from one [`XorShift64`], so a seed fixes every
//! pixel.

use crate::mlp::XorShift64;
use crate::raster::{close, BinaryImage, Rect};

/// Script class. The discriminant is the classifier label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScriptClass {
    /// Bangla/Devanagari-like: headline (Matra) script.
    Matra = 0,
    Roman = 1,
}

impl ScriptClass {
    pub const ALL: [ScriptClass; 2] = [ScriptClass::Matra, ScriptClass::Roman];

    pub fn label(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            ScriptClass::Matra => "matra",
            ScriptClass::Roman => "roman",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }
}

/// Generator knobs. Raising `matra_break_prob` and `cursive_prob` makes
/// the two classes harder to tell apart.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthParams {
    /// Body height of letters, inclusive range in pixels.
    pub x_height: (usize, usize),
    /// Pen width range.
    pub pen: (usize, usize),
    /// Chance that a Matra word's headline is broken once.
    pub matra_break_prob: f64,
    /// Chance that two neighbouring Roman letters are joined by a
    /// baseline ligature.
    pub cursive_prob: f64,
    /// Vertical wobble of the headline, in pixels.
    pub jitter: f64,
}

impl Default for SynthParams {
    fn default() -> Self {
        Self {
            x_height: (16, 20),
            pen: (2, 3),
            matra_break_prob: 0.15,
            cursive_prob: 0.1,
            jitter: 1.0,
        }
    }
}

impl SynthParams {
    /// `key=value` pairs recorded in corpus manifests.
    pub fn describe(&self) -> String {
        format!(
            "x_height={}-{} pen={}-{} matra_break_prob={} cursive_prob={} jitter={}",
            self.x_height.0,
            self.x_height.1,
            self.pen.0,
            self.pen.1,
            self.matra_break_prob,
            self.cursive_prob,
            self.jitter
        )
    }
}

/// A rendered word and the row its letters sit on.
#[derive(Debug, Clone)]
pub struct SynthWord {
    pub class: ScriptClass,
    pub image: BinaryImage,
    pub baseline: usize,
}

/// Stroke plotter on a fixed canvas; coordinates are floats.
struct Pen<'a> {
    img: &'a mut BinaryImage,
    width: usize,
}

impl Pen<'_> {
    fn dot(&mut self, x: f64, y: f64) {
        let r = self.width as f64 / 2.0;
        let x0 = (x - r).round().max(0.0) as usize;
        let y0 = (y - r).round().max(0.0) as usize;
        for yy in y0..y0 + self.width {
            for xx in x0..x0 + self.width {
                if xx < self.img.width() && yy < self.img.height() {
                    self.img.set(xx, yy, true);
                }
            }
        }
    }

    fn line(&mut self, (x0, y0): (f64, f64), (x1, y1): (f64, f64)) {
        let steps = ((x1 - x0).abs().max((y1 - y0).abs()) * 2.0).ceil().max(1.0) as usize;
        for i in 0..=steps {
            let t = i as f64 / steps as f64;
            self.dot(x0 + (x1 - x0) * t, y0 + (y1 - y0) * t);
        }
    }

    /// Elliptical arc, angles in degrees, counter-clockwise with y down.
    fn arc(&mut self, (cx, cy): (f64, f64), (rx, ry): (f64, f64), from: f64, to: f64) {
        let span = to - from;
        let steps = ((rx.max(ry) * span.abs().to_radians()) * 2.0)
            .ceil()
            .max(2.0) as usize;
        for i in 0..=steps {
            let a = (from + span * i as f64 / steps as f64).to_radians();
            self.dot(cx + rx * a.cos(), cy - ry * a.sin());
        }
    }
}

struct Metrics {
    xh: f64,
    pen: usize,
    asc: f64,
    desc: f64,
}

fn metrics(rng: &mut XorShift64, p: &SynthParams) -> Metrics {
    let xh = rng.range(p.x_height.0, p.x_height.1) as f64;
    Metrics {
        xh,
        pen: rng.range(p.pen.0, p.pen.1),
        asc: (xh * 0.5).round(),
        desc: (xh * 0.45).round(),
    }
}

const PAD: usize = 3;

/// Renders one word of the requested class.
pub fn render_word(rng: &mut XorShift64, class: ScriptClass, p: &SynthParams) -> SynthWord {
    let m = metrics(rng, p);
    let word = match class {
        ScriptClass::Matra => render_matra(rng, p, &m),
        ScriptClass::Roman => render_roman(rng, p, &m),
    };
    SynthWord {
        class,
        image: close(&word.0),
        baseline: word.1,
    }
}

fn render_matra(rng: &mut XorShift64, p: &SynthParams, m: &Metrics) -> (BinaryImage, usize) {
    let n = rng.range(2, 6);
    let widths: Vec<f64> = (0..n).map(|_| rng.range(11, 16) as f64).collect();
    let total: f64 = widths.iter().sum();
    let top_room = m.asc + m.pen as f64;
    let w = total as usize + 2 * PAD + 2 * m.pen + 2;
    let head_y = PAD as f64 + top_room;
    let base_y = head_y + m.xh + 3.0;
    let h = base_y as usize + PAD + m.pen + 2;
    let mut img = BinaryImage::blank(w, h).expect("positive size");
    let mut pen = Pen {
        img: &mut img,
        width: m.pen,
    };

    let x_start = PAD as f64 + m.pen as f64;
    let break_at = rng.chance(p.matra_break_prob).then(|| rng.range(1, n - 1));
    // headline, drawn per character so it can wobble and break
    let mut x = x_start;
    let mut y = head_y;
    for (i, &cw) in widths.iter().enumerate() {
        let start = if Some(i) == break_at { x + 3.0 } else { x };
        let next_y = head_y + p.jitter * (rng.next_f64() * 2.0 - 1.0);
        pen.line((start, y), (x + cw, next_y));
        y = next_y;
        x += cw;
    }

    let mut x = x_start;
    for &cw in &widths {
        let stem_x = x + cw - 3.0;
        let mid_y = head_y + m.xh * 0.5;
        match rng.below(4) {
            // stem with a bowl on its left
            0 => {
                pen.line((stem_x, head_y), (stem_x, base_y));
                let r = (cw - 4.0) / 2.0;
                pen.arc((stem_x - r, mid_y + 2.0), (r, m.xh * 0.3), 0.0, 300.0);
            }
            // stem and diagonal hanging from the headline
            1 => {
                pen.line((stem_x, head_y), (stem_x, base_y));
                pen.line((x + 2.0, head_y), (stem_x, mid_y + 3.0));
            }
            // triangle-like glyph
            2 => {
                pen.line((x + 2.0, head_y), (x + 2.0, mid_y));
                pen.line((x + 2.0, mid_y), (stem_x, base_y));
                pen.line((stem_x, head_y), (stem_x, base_y));
            }
            // open curve under the headline, no stem
            _ => {
                let r = (cw - 3.0) / 2.0;
                pen.arc(
                    (x + 1.5 + r, head_y + m.xh * 0.45),
                    (r, m.xh * 0.45),
                    90.0,
                    400.0,
                );
            }
        }
        if rng.chance(0.2) {
            // vowel sign above the headline
            pen.arc(
                (x + cw / 2.0, head_y - m.asc * 0.4),
                (cw * 0.3, m.asc * 0.5),
                0.0,
                180.0,
            );
            pen.line(
                (x + cw / 2.0 + cw * 0.3, head_y - m.asc * 0.4),
                (x + cw / 2.0 + cw * 0.3, head_y),
            );
        }
        x += cw;
    }
    (img, base_y as usize)
}

fn render_roman(rng: &mut XorShift64, p: &SynthParams, m: &Metrics) -> (BinaryImage, usize) {
    let n = rng.range(2, 7);
    let letters: Vec<(usize, f64)> = (0..n)
        .map(|_| {
            let shape = rng.below(10);
            // box width fits the glyph, so blank columns only appear between letters
            let w = match shape {
                3 | 6 => m.pen + 2,
                7 => rng.range(6, 8),
                2 | 8 => rng.range(9, 12),
                _ => rng.range(8, 11),
            };
            (shape, w as f64)
        })
        .collect();
    // three or more blank columns survive the 3x3 closing
    let gaps: Vec<f64> = (0..n).map(|_| rng.range(3, 5) as f64).collect();
    let total: f64 = letters.iter().map(|l| l.1).sum::<f64>() + gaps.iter().sum::<f64>();
    let w = total as usize + 2 * PAD + 2 * m.pen + 2;
    let top = PAD as f64 + m.pen as f64;
    let body_top = top + m.asc;
    let base_y = body_top + m.xh;
    let h = (base_y + m.desc) as usize + PAD + m.pen + 2;
    let mut img = BinaryImage::blank(w, h).expect("positive size");
    let mut pen = Pen {
        img: &mut img,
        width: m.pen,
    };
    let ink = m.pen as f64;

    let mut x = PAD as f64 + ink;
    for (i, &(shape, lw)) in letters.iter().enumerate() {
        // strokes stay inside [x, x + lw - ink]
        let l = x;
        let r = x + lw - ink;
        let cx = (l + r) / 2.0;
        let rx = (r - l) / 2.0;
        let cy = (body_top + base_y) / 2.0;
        let ry = m.xh / 2.0 - ink / 2.0;
        match shape {
            // o
            0 => pen.arc((cx, cy), (rx, ry), 0.0, 360.0),
            // c
            1 => pen.arc((cx, cy), (rx, ry), 50.0, 310.0),
            // n
            2 => {
                pen.line((l, body_top), (l, base_y));
                pen.arc((cx, cy), (rx, ry), 0.0, 180.0);
                pen.line((r, cy), (r, base_y));
            }
            // l
            3 => pen.line((cx, top), (cx, base_y)),
            // p
            4 => {
                pen.line((l, body_top), (l, base_y + m.desc));
                pen.arc((cx, cy), (rx, ry), -90.0, 90.0);
            }
            // e
            5 => {
                pen.arc((cx, cy), (rx, ry), 20.0, 330.0);
                pen.line((l, cy), (r, cy));
            }
            // i with its dot
            6 => {
                pen.line((cx, body_top + 2.0), (cx, base_y));
                pen.dot(cx, body_top - ink - 3.0);
            }
            // t
            7 => {
                pen.line((cx, top + m.asc * 0.4), (cx, base_y));
                pen.line((l, body_top + 1.0), (r, body_top + 1.0));
            }
            // h
            8 => {
                pen.line((l, top), (l, base_y));
                pen.arc((cx, cy), (rx, ry), 0.0, 180.0);
                pen.line((r, cy), (r, base_y));
            }
            // g / y style descender
            _ => {
                pen.arc((cx, cy), (rx, ry), 0.0, 360.0);
                pen.line((r, cy), (r, base_y + m.desc));
                pen.line((r, base_y + m.desc), (l, base_y + m.desc - 2.0));
            }
        }
        x += lw + gaps[i];
        if i + 1 < n && rng.chance(p.cursive_prob) {
            pen.line((r, base_y - 1.0), (x, base_y - 1.0));
        }
    }
    (img, base_y as usize)
}

/// Layout of a composed page.
#[derive(Debug, Clone, PartialEq)]
pub struct PageSpec {
    pub lines: usize,
    /// Inclusive range of words per line.
    pub words_per_line: (usize, usize),
    /// Probability that a word is Matra-class.
    pub matra_fraction: f64,
    /// Inclusive range of blank columns between words.
    pub word_gap: (usize, usize),
    /// Blank rows between the ink of consecutive lines.
    pub line_gap: usize,
    pub margin: usize,
}

impl Default for PageSpec {
    fn default() -> Self {
        Self {
            lines: 3,
            words_per_line: (4, 4),
            matra_fraction: 0.5,
            word_gap: (30, 45),
            line_gap: 24,
            margin: 40,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruthWord {
    pub line: usize,
    pub word: usize,
    pub class: ScriptClass,
    /// Ink bounding box on the page.
    pub bbox: Rect,
}

#[derive(Debug, Clone)]
pub struct SynthPage {
    pub image: BinaryImage,
    pub truth: Vec<TruthWord>,
}

impl SynthPage {
    /// `line<TAB>word<TAB>l,t,r,b<TAB>label` per word.
    pub fn truth_tsv(&self) -> String {
        self.truth
            .iter()
            .map(|t| {
                let b = t.bbox;
                format!(
                    "{}\t{}\t{},{},{},{}\t{}\n",
                    t.line,
                    t.word,
                    b.left,
                    b.top,
                    b.right,
                    b.bottom,
                    t.class.name()
                )
            })
            .collect()
    }
}

/// Composes a page of baseline-aligned lines. Lines never share a row, and
/// words on a line are separated by `spec.word_gap` blank columns.
pub fn compose_page(rng: &mut XorShift64, spec: &PageSpec, p: &SynthParams) -> SynthPage {
    struct Placed {
        word: BinaryImage,
        ink: Rect,
        baseline: usize,
        class: ScriptClass,
    }
    let mut rows: Vec<Vec<Placed>> = Vec::new();
    for _ in 0..spec.lines {
        let count = rng.range(spec.words_per_line.0, spec.words_per_line.1);
        let mut row = Vec::new();
        for _ in 0..count {
            let class = if rng.chance(spec.matra_fraction) {
                ScriptClass::Matra
            } else {
                ScriptClass::Roman
            };
            let w = render_word(rng, class, p);
            let ink = w.image.ink_bounds().expect("rendered words have ink");
            row.push(Placed {
                word: w.image,
                ink,
                baseline: w.baseline,
                class,
            });
        }
        rows.push(row);
    }

    // per line: ink extent above and below the shared baseline, and gaps
    let mut plans = Vec::new();
    let mut width = 0;
    for row in &rows {
        let above = row
            .iter()
            .map(|w| w.baseline - w.ink.top)
            .max()
            .unwrap_or(0);
        let below = row
            .iter()
            .map(|w| w.ink.bottom.saturating_sub(w.baseline))
            .max()
            .unwrap_or(0);
        let gaps: Vec<usize> = (0..row.len())
            .map(|_| rng.range(spec.word_gap.0, spec.word_gap.1))
            .collect();
        let line_w: usize = row.iter().map(|w| w.ink.width()).sum::<usize>()
            + gaps.iter().take(row.len().saturating_sub(1)).sum::<usize>();
        width = width.max(line_w);
        plans.push((above, below, gaps));
    }
    let height: usize = plans.iter().map(|(a, b, _)| a + b + 1).sum::<usize>()
        + spec.line_gap * spec.lines.saturating_sub(1);
    let mut page = BinaryImage::blank(
        width.max(1) + 2 * spec.margin,
        height.max(1) + 2 * spec.margin,
    )
    .expect("positive size");

    let mut truth = Vec::new();
    let mut y_top = spec.margin;
    for (line, (row, (above, below, gaps))) in rows.iter().zip(&plans).enumerate() {
        let baseline = y_top + above;
        let mut x = spec.margin;
        for (i, w) in row.iter().enumerate() {
            let dx = x - w.ink.left;
            let dy = baseline - w.baseline;
            for y in w.ink.top..=w.ink.bottom {
                for xx in w.ink.left..=w.ink.right {
                    if w.word.get(xx, y) {
                        page.set(xx + dx, y + dy, true);
                    }
                }
            }
            truth.push(TruthWord {
                line,
                word: i,
                class: w.class,
                bbox: w.ink.translate(dx, dy),
            });
            x += w.ink.width() + gaps[i];
        }
        y_top = baseline + below + 1 + spec.line_gap;
    }
    SynthPage { image: page, truth }
}
