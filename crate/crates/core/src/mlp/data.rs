use std::fmt;

use crate::error::{Error, Result};

use super::model::MlpModel;
use super::rng::XorShift64;

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub features: Vec<f64>,
    /// 0 or 1.
    pub label: usize,
}

/// Labelled samples plus a disjoint train/test partition (ascending indices).
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub samples: Vec<Sample>,
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

impl Dataset {
    pub fn train_samples(&self) -> impl Iterator<Item = &Sample> {
        self.train.iter().map(|&i| &self.samples[i])
    }

    pub fn test_samples(&self) -> impl Iterator<Item = &Sample> {
        self.test.iter().map(|&i| &self.samples[i])
    }
}

/// Stratified split: within each class, `floor(train / (train + test) * n)`
/// samples (at least one) go to training and the rest to test.
///
/// Class 0 indices are shuffled first, then class 1, from one generator
/// seeded with `seed`.
pub fn split_dataset(samples: Vec<Sample>, ratio: (usize, usize), seed: u64) -> Result<Dataset> {
    let (a, b) = ratio;
    if a == 0 || b == 0 {
        return Err(Error::InvalidConfig(format!("bad split ratio {a}:{b}")));
    }
    if let Some(s) = samples.iter().find(|s| s.label > 1) {
        return Err(Error::DegenerateLabels(format!(
            "label {} is not 0 or 1",
            s.label
        )));
    }
    let mut rng = XorShift64::new(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for class in 0..2 {
        let mut idx: Vec<usize> = (0..samples.len())
            .filter(|&i| samples[i].label == class)
            .collect();
        if idx.len() < 2 {
            return Err(Error::DegenerateLabels(format!(
                "class {class} has {} samples, need at least 2",
                idx.len()
            )));
        }
        rng.shuffle(&mut idx);
        let n_train = (idx.len() * a / (a + b)).max(1);
        train.extend_from_slice(&idx[..n_train]);
        test.extend_from_slice(&idx[n_train..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok(Dataset {
        samples,
        train,
        test,
    })
}

/// Per-feature `(min, max)` over the given samples.
pub fn fit_feature_norm<'a>(samples: impl IntoIterator<Item = &'a Sample>) -> Vec<(f64, f64)> {
    let mut norm: Vec<(f64, f64)> = Vec::new();
    for s in samples {
        if norm.is_empty() {
            norm = s.features.iter().map(|&v| (v, v)).collect();
        }
        for (n, &v) in norm.iter_mut().zip(&s.features) {
            n.0 = n.0.min(v);
            n.1 = n.1.max(v);
        }
    }
    norm
}

/// Test-set accuracy with a 2x2 confusion matrix (rows: true class,
/// columns: predicted class).
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub label_names: [String; 2],
    pub accuracy: f64,
    pub confusion: [[usize; 2]; 2],
    /// Zero when the class was never predicted.
    pub precision: [f64; 2],
    /// Zero when the class never occurs.
    pub recall: [f64; 2],
}

impl EvalReport {
    pub fn total(&self) -> usize {
        self.confusion.iter().flatten().sum()
    }

    pub fn correct(&self) -> usize {
        self.confusion[0][0] + self.confusion[1][1]
    }

    pub fn from_confusion(confusion: [[usize; 2]; 2], label_names: [String; 2]) -> Self {
        let total: usize = confusion.iter().flatten().sum();
        let ratio = |n: usize, d: usize| if d == 0 { 0.0 } else { n as f64 / d as f64 };
        let precision = [0, 1].map(|c| ratio(confusion[c][c], confusion[0][c] + confusion[1][c]));
        let recall = [0, 1].map(|c| ratio(confusion[c][c], confusion[c][0] + confusion[c][1]));
        Self {
            label_names,
            accuracy: ratio(confusion[0][0] + confusion[1][1], total),
            confusion,
            precision,
            recall,
        }
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "accuracy\t{}\t{}/{}",
            self.accuracy,
            self.correct(),
            self.total()
        )?;
        for (t, row) in self.confusion.iter().enumerate() {
            writeln!(
                f,
                "confusion\t{}\t{}\t{}",
                self.label_names[t], row[0], row[1]
            )?;
        }
        for c in 0..2 {
            writeln!(
                f,
                "class\t{}\tprecision\t{}\trecall\t{}",
                self.label_names[c], self.precision[c], self.recall[c]
            )?;
        }
        Ok(())
    }
}

pub fn evaluate<'a>(
    model: &MlpModel,
    test: impl IntoIterator<Item = &'a Sample>,
) -> Result<EvalReport> {
    let mut confusion = [[0usize; 2]; 2];
    let mut any = false;
    for s in test {
        any = true;
        let predicted = model.predict(&s.features)?;
        if s.label > 1 || predicted > 1 {
            return Err(Error::DegenerateLabels(format!(
                "two-class evaluation got label {} / prediction {predicted}",
                s.label
            )));
        }
        confusion[s.label][predicted] += 1;
    }
    if !any {
        return Err(Error::EmptyTestSet);
    }
    Ok(EvalReport::from_confusion(
        confusion,
        model.label_names.clone(),
    ))
}
