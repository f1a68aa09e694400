use std::fmt::Write as _;

use crate::error::{Error, Result};

use super::rng::XorShift64;

pub const MODEL_MAGIC: &str = "MLPSCRIPT";
pub const MODEL_VERSION: u32 = 1;

pub fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// Fully connected layer. `weights[i * outputs + j]` connects input `i` to
/// unit `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub inputs: usize,
    pub outputs: usize,
    pub weights: Vec<f64>,
    pub biases: Vec<f64>,
}

impl Layer {
    fn zeros(inputs: usize, outputs: usize) -> Self {
        Self {
            inputs,
            outputs,
            weights: vec![0.0; inputs * outputs],
            biases: vec![0.0; outputs],
        }
    }

    pub fn weight(&self, input: usize, unit: usize) -> f64 {
        self.weights[input * self.outputs + unit]
    }

    fn param_count(&self) -> usize {
        self.weights.len() + self.biases.len()
    }

    fn activate(&self, input: &[f64], out: &mut [f64]) {
        out.copy_from_slice(&self.biases);
        for (i, &a) in input.iter().enumerate() {
            let row = &self.weights[i * self.outputs..(i + 1) * self.outputs];
            for (o, &w) in out.iter_mut().zip(row) {
                *o += a * w;
            }
        }
        for o in out.iter_mut() {
            *o = sigmoid(*o);
        }
    }
}

/// Per-parameter partial derivatives, laid out like the model's layers.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub layers: Vec<Layer>,
}

impl Gradients {
    pub fn zeros(model: &MlpModel) -> Self {
        Self {
            layers: model
                .layers
                .iter()
                .map(|l| Layer::zeros(l.inputs, l.outputs))
                .collect(),
        }
    }

    /// Parameters in file order: per layer, weights row-major then biases.
    pub fn flatten(&self) -> Vec<f64> {
        self.layers
            .iter()
            .flat_map(|l| l.weights.iter().chain(&l.biases).copied())
            .collect()
    }
}

/// Logistic-sigmoid perceptron with any number of layers (the script
/// classifier uses one hidden layer: 8-H-2).
///
/// Inputs first pass through a per-feature min/max rescaling stored with
/// the model, so raw feature vectors can be fed straight in.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    pub layers: Vec<Layer>,
    /// `(min, max)` per input.
    pub feature_norm: Vec<(f64, f64)>,
    pub label_names: [String; 2],
}

/// The 8-H-2 script classifier with default label names.
pub fn init_model(hidden: usize, seed: u64) -> Result<MlpModel> {
    MlpModel::new(&[crate::features::FEATURE_COUNT, hidden, 2], seed)
}

pub(crate) struct Scratch {
    acts: Vec<Vec<f64>>,
    deltas: Vec<Vec<f64>>,
}

impl MlpModel {
    /// Weights uniform on [-0.5, 0.5] drawn layer by layer in row-major
    /// order; zero biases; identity input scaling.
    pub fn new(sizes: &[usize], seed: u64) -> Result<Self> {
        if sizes.len() < 2 || sizes.contains(&0) {
            return Err(Error::InvalidModel(format!(
                "layer sizes must be at least two positive counts, got {sizes:?}"
            )));
        }
        let mut rng = XorShift64::new(seed);
        let layers = sizes
            .windows(2)
            .map(|w| {
                let mut layer = Layer::zeros(w[0], w[1]);
                for v in &mut layer.weights {
                    *v = rng.uniform(-0.5, 0.5);
                }
                layer
            })
            .collect();
        Ok(Self {
            layers,
            feature_norm: vec![(0.0, 1.0); sizes[0]],
            label_names: ["matra".into(), "roman".into()],
        })
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![self.layers[0].inputs];
        sizes.extend(self.layers.iter().map(|l| l.outputs));
        sizes
    }

    pub fn input_size(&self) -> usize {
        self.layers[0].inputs
    }

    pub fn output_size(&self) -> usize {
        self.layers.last().unwrap().outputs
    }

    pub fn param_count(&self) -> usize {
        self.layers.iter().map(Layer::param_count).sum()
    }

    /// Parameter `k` in file order.
    pub fn param(&self, mut k: usize) -> f64 {
        for l in &self.layers {
            if k < l.weights.len() {
                return l.weights[k];
            }
            k -= l.weights.len();
            if k < l.biases.len() {
                return l.biases[k];
            }
            k -= l.biases.len();
        }
        panic!("parameter index out of range");
    }

    pub fn set_param(&mut self, mut k: usize, v: f64) {
        for l in &mut self.layers {
            if k < l.weights.len() {
                l.weights[k] = v;
                return;
            }
            k -= l.weights.len();
            if k < l.biases.len() {
                l.biases[k] = v;
                return;
            }
            k -= l.biases.len();
        }
        panic!("parameter index out of range");
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.input_size() {
            return Err(Error::DimensionMismatch {
                expected: self.input_size(),
                found: x.len(),
            });
        }
        Ok(())
    }

    /// Applies the stored min/max scaling. A constant feature (min == max)
    /// is only shifted.
    pub fn normalize(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.feature_norm)
            .map(|(&v, &(lo, hi))| {
                if hi > lo {
                    (v - lo) / (hi - lo)
                } else {
                    v - lo
                }
            })
            .collect()
    }

    pub(crate) fn scratch(&self) -> Scratch {
        let sizes = self.layer_sizes();
        Scratch {
            acts: sizes.iter().map(|&n| vec![0.0; n]).collect(),
            deltas: sizes[1..].iter().map(|&n| vec![0.0; n]).collect(),
        }
    }

    fn run(&self, normalized: &[f64], s: &mut Scratch) {
        s.acts[0].copy_from_slice(normalized);
        for (k, layer) in self.layers.iter().enumerate() {
            let (done, rest) = s.acts.split_at_mut(k + 1);
            layer.activate(&done[k], &mut rest[0]);
        }
    }

    /// Output activations, each in (0, 1).
    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_input(x)?;
        let mut s = self.scratch();
        self.run(&self.normalize(x), &mut s);
        Ok(s.acts.pop().unwrap())
    }

    /// Index of the largest output; the lower index wins ties.
    pub fn predict(&self, x: &[f64]) -> Result<usize> {
        Ok(argmax(&self.forward(x)?))
    }

    /// Gradient of `E = 1/2 * sum_k (target_k - out_k)^2` for one sample.
    pub fn gradients(&self, x: &[f64], target: &[f64]) -> Result<Gradients> {
        self.check_input(x)?;
        if target.len() != self.output_size() {
            return Err(Error::DimensionMismatch {
                expected: self.output_size(),
                found: target.len(),
            });
        }
        let mut s = self.scratch();
        let mut g = Gradients::zeros(self);
        self.backprop(&self.normalize(x), target, &mut s, &mut g);
        Ok(g)
    }

    /// Overwrites `g` with the per-sample gradient and returns the sample's
    /// summed squared error.
    pub(crate) fn backprop(
        &self,
        normalized: &[f64],
        target: &[f64],
        s: &mut Scratch,
        g: &mut Gradients,
    ) -> f64 {
        self.run(normalized, s);
        let last = self.layers.len() - 1;
        let mut sse = 0.0;
        for ((d, &o), &t) in s.deltas[last].iter_mut().zip(&s.acts[last + 1]).zip(target) {
            sse += (t - o) * (t - o);
            *d = (o - t) * o * (1.0 - o);
        }
        for k in (0..=last).rev() {
            let layer = &self.layers[k];
            let input = &s.acts[k];
            let delta = &s.deltas[k];
            let gl = &mut g.layers[k];
            for (i, &a) in input.iter().enumerate() {
                let row = &mut gl.weights[i * layer.outputs..(i + 1) * layer.outputs];
                for (gw, &d) in row.iter_mut().zip(delta) {
                    *gw = a * d;
                }
            }
            gl.biases.copy_from_slice(delta);
            if k > 0 {
                let (lower, upper) = s.deltas.split_at_mut(k);
                let below = &mut lower[k - 1];
                for (i, b) in below.iter_mut().enumerate() {
                    let row = &layer.weights[i * layer.outputs..(i + 1) * layer.outputs];
                    let back: f64 = row.iter().zip(&upper[0]).map(|(w, d)| w * d).sum();
                    let a = input[i];
                    *b = back * a * (1.0 - a);
                }
            }
        }
        sse
    }

    /// Serializes to the line-oriented model file format.
    pub fn to_text(&self) -> String {
        let mut out = format!("{MODEL_MAGIC} {MODEL_VERSION}\n");
        out.push_str(&join(self.layer_sizes().iter()));
        out.push('\n');
        let _ = writeln!(out, "{} {}", self.label_names[0], self.label_names[1]);
        out.push_str(&join(self.feature_norm.iter().flat_map(|(a, b)| [a, b])));
        out.push('\n');
        for l in &self.layers {
            out.push_str(&join(l.weights.iter().chain(&l.biases)));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.split('\n').enumerate().map(|(i, l)| (i + 1, l));
        let mut next = |what: &str| {
            lines.next().ok_or_else(|| Error::ModelFormat {
                line: 0,
                message: format!("missing {what}"),
            })
        };
        let bad = |line: usize, message: String| Error::ModelFormat { line, message };

        let (ln, header) = next("header")?;
        match header.split_once(' ') {
            Some((MODEL_MAGIC, v)) if v == MODEL_VERSION.to_string() => {}
            Some((MODEL_MAGIC, v)) => return Err(bad(ln, format!("unsupported version {v:?}"))),
            _ => return Err(bad(ln, "not a model file".into())),
        }

        let (ln, sizes_line) = next("layer sizes")?;
        let sizes: Vec<usize> = sizes_line
            .split(' ')
            .map(|s| s.parse().ok().filter(|&n: &usize| n > 0))
            .collect::<Option<_>>()
            .filter(|v: &Vec<usize>| v.len() >= 2)
            .ok_or_else(|| bad(ln, format!("bad layer sizes {sizes_line:?}")))?;

        let (ln, labels) = next("label names")?;
        let names: Vec<&str> = labels.split(' ').collect();
        let [a, b] = names.as_slice() else {
            return Err(bad(ln, "expected two label names".into()));
        };
        if a.is_empty() || b.is_empty() || a == b {
            return Err(bad(ln, "label names must be distinct and non-empty".into()));
        }

        let (ln, norm_line) = next("normalization")?;
        let norm = parse_floats(norm_line, 2 * sizes[0]).map_err(|m| bad(ln, m))?;
        let feature_norm: Vec<(f64, f64)> = norm.chunks(2).map(|c| (c[0], c[1])).collect();
        if feature_norm.iter().any(|&(lo, hi)| lo > hi) {
            return Err(bad(ln, "normalization min exceeds max".into()));
        }

        let mut layers = Vec::new();
        for w in sizes.windows(2) {
            let (ln, l) = next("layer weights")?;
            let vals = parse_floats(l, w[0] * w[1] + w[1]).map_err(|m| bad(ln, m))?;
            let (weights, biases) = vals.split_at(w[0] * w[1]);
            layers.push(Layer {
                inputs: w[0],
                outputs: w[1],
                weights: weights.to_vec(),
                biases: biases.to_vec(),
            });
        }
        // the final line feed leaves one empty piece and nothing after it
        let (ln, rest) = next("final line feed")?;
        let extra = next("").is_ok();
        if !rest.is_empty() || extra {
            return Err(bad(ln, "unexpected trailing content".into()));
        }
        Ok(Self {
            layers,
            feature_norm,
            label_names: [a.to_string(), b.to_string()],
        })
    }
}

pub(crate) fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

fn join<T: std::fmt::Display>(items: impl Iterator<Item = T>) -> String {
    let mut s = String::new();
    for (i, v) in items.enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{v}");
    }
    s
}

fn parse_floats(line: &str, expected: usize) -> std::result::Result<Vec<f64>, String> {
    let vals: Vec<f64> = line
        .split(' ')
        .map(|t| t.parse::<f64>().ok().filter(|v| v.is_finite()))
        .collect::<Option<_>>()
        .ok_or_else(|| "malformed or non-finite number".to_string())?;
    if vals.len() != expected {
        return Err(format!("expected {expected} values, found {}", vals.len()));
    }
    Ok(vals)
}
