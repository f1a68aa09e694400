//! Helpers shared by the integration tests, including a brute-force
//! feature oracle that shares no code with the library.

#![allow(dead_code, clippy::needless_range_loop)]

use scriptid::features::{extract_features, FeatureConfig};
use scriptid::mlp::{target_for, MlpModel, Sample, XorShift64};
use scriptid::raster::BinaryImage;
use scriptid::synth::{render_word, ScriptClass, SynthParams};

/// Row-major grid of ink flags.
pub type Grid = Vec<Vec<bool>>;

pub fn to_grid(img: &BinaryImage) -> Grid {
    (0..img.height())
        .map(|y| (0..img.width()).map(|x| img.get(x, y)).collect())
        .collect()
}

pub fn from_grid(g: &Grid) -> BinaryImage {
    let h = g.len();
    let w = g[0].len();
    BinaryImage::new(w, h, g.iter().flatten().copied().collect()).unwrap()
}

/// Bitmap of random size up to `max_w` x `max_h` with ink density drawn per
/// image, guaranteed to hold at least one ink pixel.
pub fn random_grid(rng: &mut XorShift64, max_w: usize, max_h: usize) -> Grid {
    let w = rng.range(1, max_w);
    let h = rng.range(1, max_h);
    let density = rng.uniform(0.05, 0.9);
    let mut g: Grid = (0..h)
        .map(|_| (0..w).map(|_| rng.chance(density)).collect())
        .collect();
    let (x, y) = (rng.below(w), rng.below(h));
    g[y][x] = true;
    g
}

/// The eight word features by direct pixel scans over the tight crop.
pub fn oracle_features(grid: &Grid) -> [f64; 8] {
    // tight crop
    let rows: Vec<usize> = (0..grid.len())
        .filter(|&y| grid[y].iter().any(|&b| b))
        .collect();
    let cols: Vec<usize> = (0..grid[0].len())
        .filter(|&x| grid.iter().any(|r| r[x]))
        .collect();
    assert!(!rows.is_empty(), "oracle needs ink");
    let (y0, y1) = (rows[0], *rows.last().unwrap());
    let (x0, x1) = (cols[0], *cols.last().unwrap());
    let crop: Grid = (y0..=y1).map(|y| grid[y][x0..=x1].to_vec()).collect();
    let h = crop.len();
    let w = crop[0].len();

    // longest run per row, trying every start
    let longest = |row: &[bool]| {
        let mut best = 0;
        for s in 0..row.len() {
            let mut n = 0;
            while s + n < row.len() && row[s + n] {
                n += 1;
            }
            best = best.max(n);
        }
        best
    };
    let prof: Vec<usize> = crop.iter().map(|r| longest(r)).collect();

    let mut r2 = 0;
    for y in 0..h {
        if prof[y] > prof[r2] {
            r2 = y;
        }
    }
    let (r1, r5) = (0, h - 1);
    let clamp = |v: usize| v.max(r1).min(r5);
    let r4 = clamp((r2 + r5) / 2);
    let r3 = clamp((r2 + r4) / 2);
    let r12 = clamp((r1 + r2) / 2);
    let r13 = clamp((r12 + r2) / 2);

    // band rows: p >= 0.75 * p(R2), i.e. 4p >= 3p(R2), contiguous with R2
    let strong = |y: usize| 4 * prof[y] >= 3 * prof[r2];
    let mut top = r2;
    while top > 0 && strong(top - 1) {
        top -= 1;
    }
    let mut bottom = r2;
    while bottom + 1 < h && strong(bottom + 1) {
        bottom += 1;
    }

    let mut matra = 0;
    let mut seg = 0;
    for x in 0..w {
        let empty_below = ((bottom + 1)..h).all(|y| !crop[y][x]);
        for y in top..=bottom {
            if crop[y][x] {
                matra += 1;
                if empty_below {
                    seg += 1;
                }
            }
        }
    }

    let changes = |y: usize| {
        let mut n = 0;
        for x in 1..w {
            if crop[y][x] != crop[y][x - 1] {
                n += 1;
            }
        }
        n
    };
    let band_h = bottom - top + 1;
    let f = [
        prof[r2] as f64 / w as f64,
        matra as f64 / (w * band_h) as f64,
        seg as f64 / w as f64,
        changes(r2) as f64 / w as f64,
        changes(r3) as f64 / w as f64,
        changes(r4) as f64 / w as f64,
        changes(r12) as f64 / w as f64,
        changes(r13) as f64 / w as f64,
    ];
    f.map(|v| v.clamp(0.0, 1.0))
}

pub fn features(img: &BinaryImage) -> [f64; 8] {
    extract_features(img, &FeatureConfig::default()).unwrap().0
}

/// `per_class` generated words of each class as labelled feature vectors,
/// classes alternating.
pub fn synthetic_samples(per_class: usize, seed: u64, params: &SynthParams) -> Vec<Sample> {
    let mut rng = XorShift64::new(seed);
    let mut out = Vec::with_capacity(2 * per_class);
    for _ in 0..per_class {
        for class in ScriptClass::ALL {
            let w = render_word(&mut rng, class, params);
            out.push(Sample {
                features: features(&w.image).to_vec(),
                label: class.label(),
            });
        }
    }
    out
}

pub fn xor_pairs() -> Vec<(Vec<f64>, Vec<f64>)> {
    [(0.0, 0.0, 0), (0.0, 1.0, 1), (1.0, 0.0, 1), (1.0, 1.0, 0)]
        .iter()
        .map(|&(a, b, y)| (vec![a, b], target_for(y, 1)))
        .collect()
}

/// Half the summed squared error of one sample.
pub fn loss(model: &MlpModel, x: &[f64], t: &[f64]) -> f64 {
    let o = model.forward(x).unwrap();
    0.5 * o.iter().zip(t).map(|(o, t)| (t - o) * (t - o)).sum::<f64>()
}

/// Largest relative error between analytic and central-difference
/// gradients over every parameter, with `|a - n| / max(|a|, |n|, 1e-8)`.
pub fn max_gradient_error(model: &MlpModel, x: &[f64], t: &[f64], step: f64) -> f64 {
    let analytic = model.gradients(x, t).unwrap().flatten();
    let mut probe = model.clone();
    let mut worst: f64 = 0.0;
    for (k, &a) in analytic.iter().enumerate() {
        let w = model.param(k);
        probe.set_param(k, w + step);
        let up = loss(&probe, x, t);
        probe.set_param(k, w - step);
        let down = loss(&probe, x, t);
        probe.set_param(k, w);
        let n = (up - down) / (2.0 * step);
        worst = worst.max((a - n).abs() / a.abs().max(n.abs()).max(1e-8));
    }
    worst
}

/// A random model of random shape with a random sample and target.
pub fn random_case(rng: &mut XorShift64) -> (MlpModel, Vec<f64>, Vec<f64>) {
    let n_in = rng.range(1, 8);
    let hidden = rng.range(1, 16);
    let n_out = rng.range(1, 3);
    let mut model = MlpModel::new(&[n_in, hidden, n_out], rng.next_u64()).unwrap();
    for l in &mut model.layers {
        for b in &mut l.biases {
            *b = rng.uniform(-0.5, 0.5);
        }
    }
    model.feature_norm = (0..n_in)
        .map(|_| {
            let lo = rng.uniform(-1.0, 0.5);
            (lo, lo + rng.uniform(0.1, 2.0))
        })
        .collect();
    let x = (0..n_in).map(|_| rng.uniform(-1.0, 2.0)).collect();
    let t = (0..n_out).map(|_| rng.uniform(0.1, 0.9)).collect();
    (model, x, t)
}
