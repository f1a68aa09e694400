use std::path::Path;

use crate::error::{Error, Result};
use crate::features::FeatureConfig;
use crate::layout::LayoutConfig;
use crate::mlp::TrainConfig;
use crate::synth::SynthParams;

/// Every tunable of the end-to-end pipeline.
///
/// Values come from defaults, then an optional config file of
/// `key = value` lines, then command-line flags, each overriding the last.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    /// Components smaller than this many pixels are dropped before layout.
    pub despeckle_min_area: usize,
    /// Width of the page border band where thin rules are dropped.
    pub border_margin: usize,
    pub layout: LayoutConfig,
    pub features: FeatureConfig,
    pub train: TrainConfig,
    /// Train:test ratio.
    pub split: (usize, usize),
    pub synth: SynthParams,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            despeckle_min_area: 4,
            border_margin: 10,
            layout: LayoutConfig::default(),
            features: FeatureConfig::default(),
            train: TrainConfig::default(),
            split: (9, 7),
            synth: SynthParams::default(),
        }
    }
}

/// Keys accepted by [`PipelineConfig::set`].
pub const CONFIG_KEYS: &[&str] = &[
    "despeckle_min_area",
    "border_margin",
    "small_ratio",
    "large_ratio",
    "min_line_overlap",
    "gap_threshold",
    "landmark_rule",
    "band_coherence",
    "eta",
    "alpha",
    "epochs",
    "seed",
    "hidden",
    "split",
    "matra_break_prob",
    "cursive_prob",
    "jitter",
];

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("bad value {value:?} for {key}")))
}

/// Parses `A:B` with both parts positive.
pub fn parse_ratio(value: &str) -> Result<(usize, usize)> {
    let bad = || Error::Config(format!("bad ratio {value:?}, expected A:B"));
    let (a, b) = value.split_once(':').ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || b == 0 {
        return Err(bad());
    }
    Ok((a, b))
}

impl PipelineConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "despeckle_min_area" => self.despeckle_min_area = parse(key, value)?,
            "border_margin" => self.border_margin = parse(key, value)?,
            "small_ratio" => self.layout.small_ratio = parse(key, value)?,
            "large_ratio" => self.layout.large_ratio = parse(key, value)?,
            "min_line_overlap" => self.layout.min_line_overlap = parse(key, value)?,
            "gap_threshold" => {
                self.layout.gap_threshold = match value {
                    "auto" => None,
                    v => Some(parse(key, v)?),
                }
            }
            "landmark_rule" => self.features.landmark_rule = parse(key, value)?,
            "band_coherence" => self.features.band_coherence = parse(key, value)?,
            "eta" => self.train.eta = parse(key, value)?,
            "alpha" => self.train.alpha = parse(key, value)?,
            "epochs" => self.train.epochs = parse(key, value)?,
            "seed" => self.train.seed = parse(key, value)?,
            "hidden" => self.train.hidden = parse(key, value)?,
            "split" => self.split = parse_ratio(value)?,
            "matra_break_prob" => self.synth.matra_break_prob = parse(key, value)?,
            "cursive_prob" => self.synth.cursive_prob = parse(key, value)?,
            "jitter" => self.synth.jitter = parse(key, value)?,
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines. Blank lines and lines starting with `#`
    /// are skipped.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            self.set(key.trim(), value.trim()).map_err(|e| match e {
                Error::Config(m) => Error::Config(format!("line {}: {m}", i + 1)),
                other => other,
            })?;
        }
        Ok(())
    }

    /// Defaults overridden by the file at `path`.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::default();
        cfg.apply_text(&text)?;
        Ok(cfg)
    }

    pub fn seed(&self) -> u64 {
        self.train.seed
    }
}
