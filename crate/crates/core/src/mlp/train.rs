use crate::error::{Error, Result};

use super::data::Dataset;
use super::model::{Gradients, MlpModel};
use super::rng::XorShift64;

/// Target activation for the true class; every other output aims at
/// [`TARGET_LOW`]. Keeping targets off 0/1 avoids driving the sigmoids into
/// saturation.
pub const TARGET_HIGH: f64 = 0.9;
pub const TARGET_LOW: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    /// Learning rate.
    pub eta: f64,
    /// Momentum.
    pub alpha: f64,
    /// Passes over the training set.
    pub epochs: usize,
    pub seed: u64,
    /// Hidden units used when a fresh model is built for training.
    pub hidden: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            eta: 0.8,
            alpha: 0.8,
            epochs: 2000,
            seed: 0,
            hidden: 12,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eta >= 0.0 && self.eta.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "eta must be >= 0, got {}",
                self.eta
            )));
        }
        if !(0.0..1.0).contains(&self.alpha) {
            return Err(Error::InvalidConfig(format!(
                "alpha must be in [0, 1), got {}",
                self.alpha
            )));
        }
        if self.epochs == 0 {
            return Err(Error::InvalidConfig("epochs must be at least 1".into()));
        }
        if self.hidden == 0 {
            return Err(Error::InvalidConfig("hidden must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct TrainingOutcome {
    pub model: MlpModel,
    /// Mean squared error over the training set before the first update.
    pub initial_mse: f64,
    /// Mean squared error over the training set after each epoch.
    pub epoch_mse: Vec<f64>,
}

impl TrainingOutcome {
    pub fn final_mse(&self) -> f64 {
        *self.epoch_mse.last().unwrap_or(&self.initial_mse)
    }
}

/// Target vector for a class label.
pub fn target_for(label: usize, outputs: usize) -> Vec<f64> {
    if outputs == 1 {
        return vec![if label == 1 { TARGET_HIGH } else { TARGET_LOW }];
    }
    (0..outputs)
        .map(|k| if k == label { TARGET_HIGH } else { TARGET_LOW })
        .collect()
}

/// Trains on the training half of a split dataset with one-hot targets.
pub fn train(model: &MlpModel, data: &Dataset, cfg: &TrainConfig) -> Result<TrainingOutcome> {
    let mut seen = [false; 2];
    for &i in &data.train {
        seen[data.samples[i].label] = true;
    }
    if seen != [true, true] {
        return Err(Error::DegenerateLabels(
            "training set must contain both classes".into(),
        ));
    }
    let outputs = model.output_size();
    let pairs: Vec<(Vec<f64>, Vec<f64>)> = data
        .train
        .iter()
        .map(|&i| {
            let s = &data.samples[i];
            (s.features.clone(), target_for(s.label, outputs))
        })
        .collect();
    train_on(model, &pairs, cfg)
}

/// Online backpropagation with momentum.
///
/// Each epoch visits the samples in a fresh order drawn from a generator
/// seeded once with `cfg.seed`. After every sample each parameter moves by
/// `delta = -eta * dE/dw + alpha * previous_delta`.
pub fn train_on(
    model: &MlpModel,
    pairs: &[(Vec<f64>, Vec<f64>)],
    cfg: &TrainConfig,
) -> Result<TrainingOutcome> {
    cfg.validate()?;
    if pairs.is_empty() {
        return Err(Error::DegenerateLabels("no training samples".into()));
    }
    for (x, t) in pairs {
        if x.len() != model.input_size() {
            return Err(Error::DimensionMismatch {
                expected: model.input_size(),
                found: x.len(),
            });
        }
        if t.len() != model.output_size() {
            return Err(Error::DimensionMismatch {
                expected: model.output_size(),
                found: t.len(),
            });
        }
    }

    let mut model = model.clone();
    let inputs: Vec<Vec<f64>> = pairs.iter().map(|(x, _)| model.normalize(x)).collect();
    let mut scratch = model.scratch();
    let mut grad = Gradients::zeros(&model);
    let mut velocity = Gradients::zeros(&model);
    let mut rng = XorShift64::new(cfg.seed);
    let mut order: Vec<usize> = (0..pairs.len()).collect();
    let denom = (pairs.len() * model.output_size()) as f64;

    let mse = |m: &MlpModel, scratch: &mut _, grad: &mut Gradients| {
        let sse: f64 = inputs
            .iter()
            .zip(pairs)
            .map(|(x, (_, t))| m.backprop(x, t, scratch, grad))
            .sum();
        sse / denom
    };
    let initial_mse = mse(&model, &mut scratch, &mut grad);
    let mut epoch_mse = Vec::with_capacity(cfg.epochs);

    for _ in 0..cfg.epochs {
        rng.shuffle(&mut order);
        for &i in &order {
            model.backprop(&inputs[i], &pairs[i].1, &mut scratch, &mut grad);
            for ((layer, g), v) in model
                .layers
                .iter_mut()
                .zip(&grad.layers)
                .zip(&mut velocity.layers)
            {
                let params = layer.weights.iter_mut().chain(layer.biases.iter_mut());
                let grads = g.weights.iter().chain(&g.biases);
                let vels = v.weights.iter_mut().chain(v.biases.iter_mut());
                for ((w, &g), dv) in params.zip(grads).zip(vels) {
                    *dv = -cfg.eta * g + cfg.alpha * *dv;
                    *w += *dv;
                }
            }
        }
        epoch_mse.push(mse(&model, &mut scratch, &mut grad));
    }
    Ok(TrainingOutcome {
        model,
        initial_mse,
        epoch_mse,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xor() -> Vec<(Vec<f64>, Vec<f64>)> {
        [(0.0, 0.0, 0), (0.0, 1.0, 1), (1.0, 0.0, 1), (1.0, 1.0, 0)]
            .iter()
            .map(|&(a, b, y)| (vec![a, b], target_for(y, 1)))
            .collect()
    }

    #[test]
    fn config_validation() {
        assert!(TrainConfig::default().validate().is_ok());
        for bad in [
            TrainConfig {
                eta: -0.1,
                ..Default::default()
            },
            TrainConfig {
                alpha: 1.0,
                ..Default::default()
            },
            TrainConfig {
                epochs: 0,
                ..Default::default()
            },
        ] {
            assert!(bad.validate().is_err());
        }
    }

    #[test]
    fn targets() {
        assert_eq!(target_for(0, 2), vec![0.9, 0.1]);
        assert_eq!(target_for(1, 2), vec![0.1, 0.9]);
        assert_eq!(target_for(0, 1), vec![0.1]);
    }

    #[test]
    fn zero_eta_leaves_weights_alone() {
        let model = MlpModel::new(&[2, 2, 1], 1).unwrap();
        let cfg = TrainConfig {
            eta: 0.0,
            epochs: 25,
            ..Default::default()
        };
        let out = train_on(&model, &xor(), &cfg).unwrap();
        assert_eq!(out.model, model);
    }

    #[test]
    fn training_is_deterministic() {
        let model = MlpModel::new(&[2, 3, 1], 5).unwrap();
        let cfg = TrainConfig {
            epochs: 200,
            seed: 11,
            ..Default::default()
        };
        let a = train_on(&model, &xor(), &cfg).unwrap();
        let b = train_on(&model, &xor(), &cfg).unwrap();
        assert_eq!(a.model.to_text(), b.model.to_text());
        assert_eq!(a.epoch_mse, b.epoch_mse);
    }

    #[test]
    fn loss_decreases() {
        let model = MlpModel::new(&[2, 4, 1], 2).unwrap();
        let cfg = TrainConfig {
            epochs: 500,
            seed: 2,
            ..Default::default()
        };
        let out = train_on(&model, &xor(), &cfg).unwrap();
        assert!(out.final_mse() < out.initial_mse);
    }

    #[test]
    fn mismatched_pairs_rejected() {
        let model = MlpModel::new(&[2, 2, 1], 1).unwrap();
        let pairs = vec![(vec![0.0; 3], vec![0.1])];
        assert!(train_on(&model, &pairs, &TrainConfig::default()).is_err());
    }
}
