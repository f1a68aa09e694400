//! Acceptance suite. Each criterion prints one `PASS` or `FAIL` line; run
//! with `cargo test --test acceptance -- --nocapture` to see them.

mod support;

use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use scriptid::features::{
    headline_analysis, horizontalness_profile, row_landmarks, transitions, LandmarkRule,
};
use scriptid::layout::{segment_page, LayoutConfig};
use scriptid::mlp::{split_dataset, train_on, MlpModel, Sample, TrainConfig, XorShift64};
use scriptid::pipeline::{run_synth, run_train, segment, PipelineConfig, SynthRequest};
use scriptid::raster::{dilate, erode, load_dat, save_dat, BinaryImage};
use scriptid::synth::{compose_page, PageSpec, SynthParams};
use support::{
    features, from_grid, max_gradient_error, oracle_features, random_case, random_grid, xor_pairs,
};

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Verdict) -> Verdict {
    let t = Instant::now();
    let v = f();
    let took = t.elapsed();
    verdict(
        v.pass && took < limit,
        format!(
            "{}; {:.2}s (limit {}s)",
            v.detail,
            took.as_secs_f64(),
            limit.as_secs()
        ),
    )
}

/// Synthetic corpus at 450/350 per class, 8-12-2, eta = alpha = 0.8,
/// 2000 epochs: held-out accuracy >= 0.95 within two minutes.
fn ac1_synthetic_accuracy() -> Verdict {
    timed(Duration::from_secs(120), || {
        let dir = tempfile::tempdir().unwrap();
        let req = SynthRequest {
            per_class: 800,
            seed: 7,
            ..Default::default()
        };
        let out = run_synth(&req, &SynthParams::default(), dir.path()).unwrap();
        let cfg = PipelineConfig {
            train: TrainConfig {
                eta: 0.8,
                alpha: 0.8,
                epochs: 2000,
                seed: 7,
                hidden: 12,
            },
            ..Default::default()
        };
        let run = run_train(&out.corpus_path, &cfg, None).unwrap();
        let r = &run.report;
        let shape = run.model().layer_sizes() == [8, 12, 2];
        verdict(
            r.accuracy >= 0.95 && shape && run.train_count == 900 && r.total() == 700,
            format!(
                "accuracy {:.4} ({}/{}), train {}",
                r.accuracy,
                r.correct(),
                r.total(),
                run.train_count
            ),
        )
    })
}

/// 200 random bitmaps up to 32x32 agree exactly with the brute-force oracle.
fn ac2_feature_oracle() -> Verdict {
    timed(Duration::from_secs(10), || {
        let mut rng = XorShift64::new(0xACC2);
        let mut mismatches = 0;
        for _ in 0..200 {
            let g = random_grid(&mut rng, 32, 32);
            if features(&from_grid(&g)) != oracle_features(&g) {
                mismatches += 1;
            }
        }
        verdict(mismatches == 0, format!("{mismatches}/200 mismatches"))
    })
}

/// Central differences with step 1e-5 within relative error 1e-4 on 50
/// random model/sample pairs.
fn ac3_gradients() -> Verdict {
    timed(Duration::from_secs(5), || {
        let mut rng = XorShift64::new(0xACC3);
        let worst = (0..50)
            .map(|_| {
                let (m, x, t) = random_case(&mut rng);
                max_gradient_error(&m, &x, &t, 1e-5)
            })
            .fold(0.0, f64::max);
        verdict(worst <= 1e-4, format!("worst relative error {worst:.2e}"))
    })
}

fn read_tree(dir: &Path, rel: &Path, out: &mut Vec<(String, Vec<u8>)>) {
    let mut entries: Vec<_> = fs::read_dir(dir.join(rel))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    entries.sort();
    for p in entries {
        let r = p.strip_prefix(dir).unwrap().to_path_buf();
        if p.is_dir() {
            read_tree(dir, &r, out);
        } else {
            out.push((r.display().to_string(), fs::read(&p).unwrap()));
        }
    }
}

/// `train` and `synth` through the command-line tool are byte-deterministic.
fn ac4_determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let run = |args: &[&str]| {
        let out = Command::new(env!("CARGO_BIN_EXE_scriptid"))
            .args(args)
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        out.stdout
    };
    let path = |p: &str| d.join(p).to_str().unwrap().to_string();
    for c in ["c1", "c2"] {
        run(&[
            "synth",
            "--per-class",
            "450",
            "--pages",
            "2",
            "--seed",
            "7",
            "--out",
            &path(c),
        ]);
    }
    let (mut a, mut b) = (Vec::new(), Vec::new());
    read_tree(&d.join("c1"), Path::new(""), &mut a);
    read_tree(&d.join("c2"), Path::new(""), &mut b);
    let corpora_equal = a == b && a.len() == 900 + 1 + 4;

    let corpus = path("c1/corpus.tsv");
    let mut reports = Vec::new();
    for m in ["m1.txt", "m2.txt"] {
        reports.push(run(&[
            "train",
            &corpus,
            "--seed",
            "7",
            "--hidden",
            "12",
            "--model",
            &path(m),
        ]));
    }
    let models_equal = fs::read(d.join("m1.txt")).unwrap() == fs::read(d.join("m2.txt")).unwrap();
    verdict(
        corpora_equal && models_equal && reports[0] == reports[1],
        format!(
            "{} corpus files identical: {corpora_equal}; model files identical: {models_equal}",
            a.len()
        ),
    )
}

/// 100 random pages of 1..=10 well-separated lines: line and word counts
/// exact on at least 98 of them.
fn ac5_layout() -> Verdict {
    let cfg = PipelineConfig::default();
    let mut rng = XorShift64::new(0xACC5);
    let mut good = 0;
    for _ in 0..100 {
        let spec = PageSpec {
            lines: rng.range(1, 10),
            words_per_line: (1, 8),
            ..Default::default()
        };
        let page = compose_page(&mut rng, &spec, &SynthParams::default());
        let layout = segment(&page.image, &cfg);
        let lines_ok = layout.lines.len() == spec.lines;
        let words_ok = (0..spec.lines).all(|l| {
            layout.line_words(l).count() == page.truth.iter().filter(|t| t.line == l).count()
        });
        if lines_ok && words_ok {
            good += 1;
        }
    }
    verdict(good >= 98, format!("{good}/100 pages exact"))
}

/// 800 samples per class split 9:7 gives 450/350 in each class.
fn ac6_split() -> Verdict {
    let samples: Vec<Sample> = (0..1600)
        .map(|i| Sample {
            features: vec![i as f64; 8],
            label: i % 2,
        })
        .collect();
    let ds = split_dataset(samples, (9, 7), 7).unwrap();
    let count = |idx: &[usize], c: usize| idx.iter().filter(|&&i| ds.samples[i].label == c).count();
    let got: Vec<(usize, usize)> = (0..2)
        .map(|c| (count(&ds.train, c), count(&ds.test, c)))
        .collect();
    verdict(
        got == [(450, 350), (450, 350)],
        format!("train/test per class {got:?}"),
    )
}

fn random_mask(rng: &mut XorShift64, max: usize) -> BinaryImage {
    from_grid(&random_grid(rng, max, max))
}

fn subset(a: &BinaryImage, b: &BinaryImage) -> bool {
    a.mask().iter().zip(b.mask()).all(|(&x, &y)| !x || y)
}

/// DAT round-trip, morphology monotonicity, transition parity,
/// matra >= segmentation points, translation equivariance of features and
/// boxes, argmax invariance, and zero-momentum equals plain descent.
fn ac7_invariants() -> Verdict {
    let mut rng = XorShift64::new(0xACC7);
    let mut failed: Vec<&str> = Vec::new();
    let mut check = |name: &'static str, ok: bool| {
        if !ok && !failed.contains(&name) {
            failed.push(name);
        }
    };

    for _ in 0..100 {
        let img = random_mask(&mut rng, 24);
        let bytes = save_dat(&img);
        check(
            "dat round-trip",
            load_dat(&bytes)
                .map(|b| save_dat(&b) == bytes && b == img)
                .unwrap_or(false),
        );

        let (e, d) = (erode(&img), dilate(&img));
        check(
            "morphology",
            subset(&e, &erode(&d)) && subset(&dilate(&e), &d),
        );
        check("morphology", subset(&e, &img) && subset(&img, &d));
        check("morphology", e.foreground_count() <= img.foreground_count());

        let row: Vec<bool> = img.row(0).to_vec();
        let t = transitions(&img, 0).unwrap();
        check(
            "transition parity",
            t.is_multiple_of(2) == (row[0] == row[row.len() - 1]),
        );

        let word = img.trim().unwrap();
        let profile = horizontalness_profile(&word).unwrap();
        let lm = row_landmarks(&profile, LandmarkRule::Midpoint).unwrap();
        let head = headline_analysis(&word, &lm, &profile, 0.75);
        check(
            "matra >= segmentation points",
            head.matra_pixel_count >= head.segmentation_point_count,
        );

        let (dx, dy) = (rng.below(12), rng.below(12));
        let moved = img
            .translated(dx, dy, img.width() + dx + 3, img.height() + dy + 3)
            .unwrap();
        check("feature translation", features(&img) == features(&moved));
    }

    let layout_cfg = LayoutConfig::default();
    for _ in 0..20 {
        let spec = PageSpec {
            lines: rng.range(1, 4),
            words_per_line: (1, 4),
            ..Default::default()
        };
        let page = compose_page(&mut rng, &spec, &SynthParams::default()).image;
        let (dx, dy) = (rng.below(40), rng.below(40));
        let moved = page
            .translated(dx, dy, page.width() + dx, page.height() + dy)
            .unwrap();
        let (a, b) = (
            segment_page(&page, &layout_cfg),
            segment_page(&moved, &layout_cfg),
        );
        check(
            "bbox translation",
            a.words.len() == b.words.len()
                && a.words
                    .iter()
                    .zip(&b.words)
                    .all(|(u, v)| u.bbox.translate(dx, dy) == v.bbox),
        );
    }

    for _ in 0..100 {
        let (model, x, _) = random_case(&mut rng);
        if model.output_size() < 2 {
            continue;
        }
        let out = model.forward(&x).unwrap();
        let scale = rng.uniform(0.1, 10.0);
        let shift = rng.uniform(-3.0, 3.0);
        let rescaled: Vec<f64> = out.iter().map(|o| (o * scale + shift).exp()).collect();
        let first_max = |v: &[f64]| {
            let mut best = 0;
            for (i, &o) in v.iter().enumerate() {
                if o > v[best] {
                    best = i;
                }
            }
            best
        };
        check(
            "argmax invariance",
            model.predict(&x).unwrap() == first_max(&rescaled),
        );
    }

    let start = MlpModel::new(&[2, 3, 1], 3).unwrap();
    let pairs = xor_pairs();
    let cfg = TrainConfig {
        alpha: 0.0,
        epochs: 50,
        seed: 5,
        ..Default::default()
    };
    let trained = train_on(&start, &pairs, &cfg).unwrap().model;
    let mut plain = start.clone();
    let mut order: Vec<usize> = (0..pairs.len()).collect();
    let mut shuffle = XorShift64::new(cfg.seed);
    for _ in 0..cfg.epochs {
        shuffle.shuffle(&mut order);
        for &i in &order {
            let g = plain.gradients(&pairs[i].0, &pairs[i].1).unwrap().flatten();
            for (k, gk) in g.iter().enumerate() {
                plain.set_param(k, plain.param(k) - cfg.eta * gk);
            }
        }
    }
    check(
        "zero momentum == plain descent",
        (0..plain.param_count()).all(|k| plain.param(k).to_bits() == trained.param(k).to_bits()),
    );

    if failed.is_empty() {
        verdict(true, "all invariant families hold")
    } else {
        verdict(false, format!("violated: {}", failed.join(", ")))
    }
}

/// 2-2-1 on XOR reaches MSE < 0.05 within 5000 epochs at seed 1.
fn ac8_xor() -> Verdict {
    let model = MlpModel::new(&[2, 2, 1], 1).unwrap();
    let cfg = TrainConfig {
        epochs: 5000,
        seed: 1,
        ..Default::default()
    };
    let out = train_on(&model, &xor_pairs(), &cfg).unwrap();
    match out.epoch_mse.iter().position(|&m| m < 0.05) {
        Some(e) => verdict(
            true,
            format!(
                "MSE < 0.05 after epoch {}, final {:.2e}",
                e + 1,
                out.final_mse()
            ),
        ),
        None => verdict(false, format!("final MSE {:.4}", out.final_mse())),
    }
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 8] = [
        ("AC1 synthetic corpus accuracy", ac1_synthetic_accuracy),
        ("AC2 feature oracle equivalence", ac2_feature_oracle),
        ("AC3 gradient correctness", ac3_gradients),
        ("AC4 determinism", ac4_determinism),
        ("AC5 layout on synthetic pages", ac5_layout),
        ("AC6 split protocol", ac6_split),
        ("AC7 invariant suites", ac7_invariants),
        ("AC8 XOR sanity", ac8_xor),
    ];
    let mut failures = Vec::new();
    for (name, run) in criteria {
        let v = run();
        println!(
            "{} {name}: {}",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
        if !v.pass {
            failures.push(name);
        }
    }
    assert!(failures.is_empty(), "failed: {failures:?}");
}
