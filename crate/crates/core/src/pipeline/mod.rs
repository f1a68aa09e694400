//! File-level orchestration: page in, manifest, features, model, report
//! and overlay out.
//!
//! Every `run_*` function returns its results as values and writes files
//! only where a path is given, so the same code serves the command-line
//! tool and library callers.

mod config;
mod corpus;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

pub use config::{parse_ratio, PipelineConfig, CONFIG_KEYS};
pub use corpus::{Corpus, CorpusEntry};

use crate::error::{Error, Result};
use crate::features::{extract_features, FeatureVector};
use crate::layout::{format_manifest, manifest_records, segment_page, ManifestRecord, PageLayout};
use crate::mlp::{
    evaluate, fit_feature_norm, init_model, split_dataset, train, EvalReport, MlpModel, Sample,
    TrainingOutcome, XorShift64,
};
use crate::raster::{
    binarize, close, despeckle, load_dat, load_pgm, save_dat, save_pgm, BinaryImage, GrayImage,
    Rect,
};
use crate::synth::{compose_page, render_word, PageSpec, ScriptClass, SynthParams};

/// Border gray level for words classified as the first (headline) class.
pub const OVERLAY_GRAY_FIRST: u8 = 96;
/// Border gray level for words classified as the second (Roman) class.
pub const OVERLAY_GRAY_SECOND: u8 = 192;

/// A page as read from disk.
#[derive(Debug, Clone)]
pub enum Page {
    Gray(GrayImage),
    Binary(BinaryImage),
}

impl Page {
    /// Sniffs the format: `P5` magic means PGM, anything else is DAT.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.starts_with(b"P5") {
            load_pgm(bytes).map(Page::Gray)
        } else {
            load_dat(bytes).map(Page::Binary)
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_bytes(&read(path)?)
    }

    /// Binary form, thresholding gray pages.
    pub fn to_binary(&self) -> BinaryImage {
        match self {
            Page::Gray(g) => binarize(g),
            Page::Binary(b) => b.clone(),
        }
    }

    /// 8-bit copy used as the overlay background.
    pub fn to_gray(&self) -> GrayImage {
        match self {
            Page::Gray(g) => g.clone(),
            Page::Binary(b) => GrayImage::from_mask(b),
        }
    }
}

pub(crate) fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::io(path, e))
}

pub(crate) fn write(path: &Path, bytes: impl AsRef<[u8]>) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Despeckle then close: the cleanup every page gets before layout.
pub fn clean_page(img: &BinaryImage, cfg: &PipelineConfig) -> BinaryImage {
    close(&despeckle(img, cfg.despeckle_min_area, cfg.border_margin))
}

/// Layout of an already binarized page, after cleanup.
pub fn segment(img: &BinaryImage, cfg: &PipelineConfig) -> PageLayout {
    segment_page(&clean_page(img, cfg), &cfg.layout)
}

#[derive(Debug, Clone)]
pub struct Segmentation {
    pub layout: PageLayout,
    pub records: Vec<ManifestRecord>,
}

impl Segmentation {
    pub fn manifest(&self) -> String {
        format_manifest(&self.records)
    }

    /// Word crops in manifest order, each holding only its own components.
    pub fn crops(&self) -> impl Iterator<Item = (&ManifestRecord, BinaryImage)> {
        self.records
            .iter()
            .zip(self.layout.indexed_words())
            .map(|(r, (_, w))| (r, self.layout.word_image(w)))
    }
}

/// Segments a page file. With `out_dir`, writes `manifest.tsv` there and
/// the word crops under `crops/`. A page without ink yields an empty
/// manifest.
pub fn run_segment(
    page_path: &Path,
    page_id: u32,
    cfg: &PipelineConfig,
    out_dir: Option<&Path>,
) -> Result<Segmentation> {
    let page = Page::load(page_path)?.to_binary();
    let layout = segment(&page, cfg);
    let seg = Segmentation {
        records: manifest_records(page_id, &layout),
        layout,
    };
    if let Some(dir) = out_dir {
        write(&dir.join("manifest.tsv"), seg.manifest())?;
        let crops = dir.join("crops");
        fs::create_dir_all(&crops).map_err(|e| Error::io(&crops, e))?;
        for (r, img) in seg.crops() {
            write(&crops.join(r.crop_name()), save_dat(&img))?;
        }
    }
    Ok(seg)
}

/// Features of every word on a page, keyed by manifest record.
pub fn page_features(
    seg: &Segmentation,
    cfg: &PipelineConfig,
) -> Result<Vec<(ManifestRecord, FeatureVector)>> {
    seg.crops()
        .map(|(r, img)| Ok((*r, extract_features(&img, &cfg.features)?)))
        .collect()
}

/// Features of a single word image file.
pub fn word_features(path: &Path, cfg: &PipelineConfig) -> Result<FeatureVector> {
    extract_features(&Page::load(path)?.to_binary(), &cfg.features)
}

/// Loads every corpus image and extracts its features, labelling by
/// position of the entry's class name in `names`.
pub fn corpus_samples(
    corpus: &Corpus,
    names: &[String; 2],
    cfg: &PipelineConfig,
) -> Result<Vec<Sample>> {
    corpus
        .entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let label = e
                .label
                .as_ref()
                .and_then(|l| names.iter().position(|n| n == l))
                .ok_or_else(|| Error::Manifest {
                    line: i + 1,
                    message: format!("label {:?} is not one of {names:?}", e.label),
                })?;
            Ok(Sample {
                features: word_features(&e.path, cfg)?.0.to_vec(),
                label,
            })
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct TrainRun {
    pub outcome: TrainingOutcome,
    pub report: EvalReport,
    pub train_count: usize,
}

impl TrainRun {
    pub fn model(&self) -> &MlpModel {
        &self.outcome.model
    }

    /// Tab-separated summary: sample counts, loss, then the report.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "train\t{}", self.train_count);
        let _ = writeln!(out, "test\t{}", self.report.total());
        let _ = writeln!(out, "initial_mse\t{}", self.outcome.initial_mse);
        let _ = writeln!(out, "final_mse\t{}", self.outcome.final_mse());
        out.push_str(&self.report.to_string());
        out
    }
}

/// Features, stratified split, training and held-out evaluation for a
/// labelled corpus. The split, weight init and epoch order all use
/// `cfg.train.seed`. With `model_path`, the model file is written there.
pub fn run_train(
    corpus_path: &Path,
    cfg: &PipelineConfig,
    model_path: Option<&Path>,
) -> Result<TrainRun> {
    let corpus = Corpus::load(corpus_path)?;
    let names = corpus.label_names()?;
    let samples = corpus_samples(&corpus, &names, cfg)?;
    train_samples(samples, names, cfg, model_path)
}

/// [`run_train`] from samples already in memory.
pub fn train_samples(
    samples: Vec<Sample>,
    names: [String; 2],
    cfg: &PipelineConfig,
    model_path: Option<&Path>,
) -> Result<TrainRun> {
    cfg.train.validate()?;
    let seed = cfg.train.seed;
    let data = split_dataset(samples, cfg.split, seed)?;
    let mut model = init_model(cfg.train.hidden, seed)?;
    model.label_names = names;
    model.feature_norm = fit_feature_norm(data.train_samples());
    let outcome = train(&model, &data, &cfg.train)?;
    let report = evaluate(&outcome.model, data.test_samples())?;
    if let Some(path) = model_path {
        write(path, outcome.model.to_text())?;
    }
    Ok(TrainRun {
        outcome,
        report,
        train_count: data.train.len(),
    })
}

pub fn load_model(path: &Path) -> Result<MlpModel> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    MlpModel::from_text(&text)
}

/// Evaluates a model on a labelled corpus. With `held_out`, only the test
/// part of the split that [`run_train`] would make under `cfg` is used.
pub fn run_eval(
    model_path: &Path,
    corpus_path: &Path,
    cfg: &PipelineConfig,
    held_out: bool,
) -> Result<EvalReport> {
    let model = load_model(model_path)?;
    let corpus = Corpus::load(corpus_path)?;
    let samples = corpus_samples(&corpus, &model.label_names, cfg)?;
    if held_out {
        let data = split_dataset(samples, cfg.split, cfg.train.seed)?;
        evaluate(&model, data.test_samples())
    } else {
        evaluate(&model, &samples)
    }
}

/// Classification of one word on a page.
#[derive(Debug, Clone, PartialEq)]
pub struct WordPrediction {
    pub line: usize,
    pub word: usize,
    pub bbox: Rect,
    pub label: usize,
    pub outputs: [f64; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct PageResult {
    pub label_names: [String; 2],
    pub words: Vec<WordPrediction>,
}

impl PageResult {
    /// `line<TAB>word<TAB>l,t,r,b<TAB>label<TAB>out0<TAB>out1` per word.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for w in &self.words {
            let b = w.bbox;
            let _ = writeln!(
                out,
                "{}\t{}\t{},{},{},{}\t{}\t{}\t{}",
                w.line,
                w.word,
                b.left,
                b.top,
                b.right,
                b.bottom,
                self.label_names[w.label],
                w.outputs[0],
                w.outputs[1]
            );
        }
        out
    }
}

/// Segments a page and classifies every word.
pub fn classify_page(
    model: &MlpModel,
    page: &BinaryImage,
    cfg: &PipelineConfig,
) -> Result<PageResult> {
    if model.output_size() != 2 {
        return Err(Error::InvalidModel(format!(
            "page classification needs 2 outputs, model has {}",
            model.output_size()
        )));
    }
    let layout = segment(page, cfg);
    let seg = Segmentation {
        records: manifest_records(0, &layout),
        layout,
    };
    let words = page_features(&seg, cfg)?
        .into_iter()
        .map(|(r, f)| {
            let out = model.forward(f.as_slice())?;
            Ok(WordPrediction {
                line: r.line,
                word: r.word,
                bbox: r.bbox,
                label: usize::from(out[1] > out[0]),
                outputs: [out[0], out[1]],
            })
        })
        .collect::<Result<_>>()?;
    Ok(PageResult {
        label_names: model.label_names.clone(),
        words,
    })
}

/// Gray copy of the page with a one-pixel frame around each word, just
/// outside its box, in the gray level of its predicted class.
pub fn render_overlay(page: &GrayImage, result: &PageResult) -> GrayImage {
    let mut img = page.clone();
    let (w, h) = (img.width(), img.height());
    for word in &result.words {
        let gray = [OVERLAY_GRAY_FIRST, OVERLAY_GRAY_SECOND][word.label];
        let b = word.bbox;
        let l = b.left.saturating_sub(1);
        let t = b.top.saturating_sub(1);
        let r = (b.right + 1).min(w - 1);
        let bt = (b.bottom + 1).min(h - 1);
        for x in l..=r {
            img.set(x, t, gray);
            img.set(x, bt, gray);
        }
        for y in t..=bt {
            img.set(l, y, gray);
            img.set(r, y, gray);
        }
    }
    img
}

/// Classifies a page file; with `overlay_path`, also writes the overlay PGM.
pub fn run_classify(
    model_path: &Path,
    page_path: &Path,
    cfg: &PipelineConfig,
    overlay_path: Option<&Path>,
) -> Result<PageResult> {
    let model = load_model(model_path)?;
    let page = Page::load(page_path)?;
    let result = classify_page(&model, &page.to_binary(), cfg)?;
    if let Some(path) = overlay_path {
        write(path, save_pgm(&render_overlay(&page.to_gray(), &result)))?;
    }
    Ok(result)
}

/// What [`run_binarize`] did.
#[derive(Debug, Clone)]
pub struct Binarized {
    /// `None` for input that was already binary.
    pub threshold: Option<f64>,
    pub image: BinaryImage,
}

/// Thresholds a page (optionally cleaning it) and writes it as DAT.
pub fn run_binarize(
    input: &Path,
    output: Option<&Path>,
    clean: bool,
    cfg: &PipelineConfig,
) -> Result<Binarized> {
    let page = Page::load(input)?;
    let threshold = match &page {
        Page::Gray(g) => Some(crate::raster::threshold_of(g)),
        Page::Binary(_) => None,
    };
    let mut image = page.to_binary();
    if clean {
        image = clean_page(&image, cfg);
    }
    if let Some(path) = output {
        write(path, save_dat(&image))?;
    }
    Ok(Binarized { threshold, image })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthRequest {
    pub per_class: usize,
    pub seed: u64,
    /// Mixed pages to compose after the word corpus.
    pub pages: usize,
    pub page_spec: PageSpec,
}

impl Default for SynthRequest {
    fn default() -> Self {
        Self {
            per_class: 450,
            seed: 0,
            pages: 0,
            page_spec: PageSpec::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SynthOutput {
    pub corpus_path: PathBuf,
    pub corpus: Corpus,
    pub page_paths: Vec<PathBuf>,
}

/// Writes a labelled word corpus to `out_dir`:
///
/// * `words/{class}_{index:05}.dat`, classes alternating, one generator
///   seeded with `req.seed` for the whole run;
/// * `corpus.tsv`, a [`Corpus`] manifest whose metadata records the seed
///   and generator parameters;
/// * with `req.pages > 0`, `pages/page_{i:03}.dat` plus
///   `pages/page_{i:03}.truth.tsv` (`line word l,t,r,b label`).
pub fn run_synth(req: &SynthRequest, params: &SynthParams, out_dir: &Path) -> Result<SynthOutput> {
    if req.per_class == 0 {
        return Err(Error::InvalidConfig("per_class must be at least 1".into()));
    }
    let mut rng = XorShift64::new(req.seed);
    let mut corpus = Corpus {
        metadata: vec![
            ("seed".into(), req.seed.to_string()),
            ("per_class".into(), req.per_class.to_string()),
        ],
        entries: Vec::new(),
    };
    for pair in params.describe().split_whitespace() {
        if let Some((k, v)) = pair.split_once('=') {
            corpus.metadata.push((k.into(), v.into()));
        }
    }
    for i in 0..req.per_class {
        for class in ScriptClass::ALL {
            let word = render_word(&mut rng, class, params);
            let rel = PathBuf::from(format!("words/{}_{i:05}.dat", class.name()));
            write(&out_dir.join(&rel), save_dat(&word.image))?;
            corpus.entries.push(CorpusEntry {
                path: rel,
                label: Some(class.name().into()),
            });
        }
    }
    let corpus_path = out_dir.join("corpus.tsv");
    write(&corpus_path, corpus.to_text())?;

    let mut page_paths = Vec::new();
    for i in 0..req.pages {
        let page = compose_page(&mut rng, &req.page_spec, params);
        let path = out_dir.join(format!("pages/page_{i:03}.dat"));
        write(&path, save_dat(&page.image))?;
        write(&path.with_extension("truth.tsv"), page.truth_tsv())?;
        page_paths.push(path);
    }
    Ok(SynthOutput {
        corpus_path,
        corpus,
        page_paths,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::GrayImage;

    fn tmp() -> tempfile::TempDir {
        tempfile::tempdir().unwrap()
    }

    #[test]
    fn blank_page_gives_empty_manifest() {
        let dir = tmp();
        let page = dir.path().join("blank.dat");
        write(&page, save_dat(&BinaryImage::blank(50, 40).unwrap())).unwrap();
        let seg = run_segment(&page, 0, &PipelineConfig::default(), Some(dir.path())).unwrap();
        assert!(seg.records.is_empty());
        assert_eq!(
            fs::read_to_string(dir.path().join("manifest.tsv")).unwrap(),
            ""
        );
    }

    #[test]
    fn synthetic_page_segments_into_its_words() {
        let dir = tmp();
        let page = compose_page(
            &mut XorShift64::new(3),
            &PageSpec::default(),
            &SynthParams::default(),
        );
        let path = dir.path().join("page.dat");
        write(&path, save_dat(&page.image)).unwrap();
        let seg = run_segment(&path, 4, &PipelineConfig::default(), Some(dir.path())).unwrap();
        assert_eq!(seg.records.len(), 12);
        let bounds = page.image.bounds();
        assert!(seg.records.iter().all(|r| bounds.contains_rect(&r.bbox)));
        assert!(dir.path().join("crops/p4_l2_w3.dat").exists());
        for (r, t) in seg.records.iter().zip(&page.truth) {
            assert_eq!((r.line, r.word), (t.line, t.word));
        }
    }

    #[test]
    fn gray_pages_are_thresholded() {
        let mut g = GrayImage::filled(60, 40, 230).unwrap();
        for y in 10..30 {
            for x in 10..50 {
                g.set(x, y, 20);
            }
        }
        let dir = tmp();
        let path = dir.path().join("g.pgm");
        write(&path, save_pgm(&g)).unwrap();
        let b = run_binarize(
            &path,
            Some(&dir.path().join("g.dat")),
            false,
            &PipelineConfig::default(),
        )
        .unwrap();
        assert_eq!(b.threshold, Some(125.0));
        assert_eq!(b.image.foreground_count(), 800);
        let back = load_dat(&fs::read(dir.path().join("g.dat")).unwrap()).unwrap();
        assert_eq!(back, b.image);
    }

    #[test]
    fn overlay_keeps_page_size_and_marks_classes() {
        let page = GrayImage::filled(30, 20, 255).unwrap();
        let result = PageResult {
            label_names: ["a".into(), "b".into()],
            words: vec![
                WordPrediction {
                    line: 0,
                    word: 0,
                    bbox: Rect::new(2, 2, 6, 6),
                    label: 0,
                    outputs: [0.9, 0.1],
                },
                WordPrediction {
                    line: 0,
                    word: 1,
                    bbox: Rect::new(20, 5, 29, 19),
                    label: 1,
                    outputs: [0.2, 0.8],
                },
            ],
        };
        let img = render_overlay(&page, &result);
        assert_eq!((img.width(), img.height()), (30, 20));
        assert_eq!(img.get(1, 1), OVERLAY_GRAY_FIRST);
        assert_eq!(img.get(29, 19), OVERLAY_GRAY_SECOND);
        assert_eq!(img.get(4, 4), 255);
    }

    #[test]
    fn empty_page_classifies_to_nothing() {
        let model = init_model(4, 0).unwrap();
        let r = classify_page(
            &model,
            &BinaryImage::blank(20, 20).unwrap(),
            &PipelineConfig::default(),
        )
        .unwrap();
        assert!(r.words.is_empty());
        assert_eq!(r.to_tsv(), "");
    }

    #[test]
    fn wrong_model_shape_is_a_contract_error() {
        let model = MlpModel::new(&[5, 3, 2], 0).unwrap();
        let page = compose_page(
            &mut XorShift64::new(1),
            &PageSpec::default(),
            &SynthParams::default(),
        );
        let e = classify_page(&model, &page.image, &PipelineConfig::default()).unwrap_err();
        assert!(matches!(
            e,
            Error::DimensionMismatch {
                expected: 5,
                found: 8
            }
        ));
        assert_eq!(e.exit_code(), 3);
    }

    #[test]
    fn synth_writes_corpus_and_pages() {
        let dir = tmp();
        let req = SynthRequest {
            per_class: 3,
            seed: 9,
            pages: 1,
            ..Default::default()
        };
        let out = run_synth(&req, &SynthParams::default(), dir.path()).unwrap();
        assert_eq!(out.corpus.entries.len(), 6);
        let loaded = Corpus::load(&out.corpus_path).unwrap();
        assert_eq!(loaded.metadata("seed"), Some("9"));
        assert!(loaded.entries.iter().all(|e| e.path.exists()));
        assert!(dir.path().join("pages/page_000.truth.tsv").exists());
        assert!(run_synth(
            &SynthRequest {
                per_class: 0,
                ..req
            },
            &SynthParams::default(),
            dir.path()
        )
        .is_err());
    }
}
