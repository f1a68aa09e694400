//! Train the 8-12-2 classifier on generated words and report held-out
//! accuracy. Pass a number to change the words per class (default 800).

use scriptid::features::{extract_features, FeatureConfig};
use scriptid::mlp::{Sample, XorShift64};
use scriptid::pipeline::{train_samples, PipelineConfig};
use scriptid::synth::{render_word, ScriptClass, SynthParams};

fn main() -> scriptid::Result<()> {
    let per_class: usize = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(800);
    let mut rng = XorShift64::new(7);
    let mut samples = Vec::new();
    for _ in 0..per_class {
        for class in ScriptClass::ALL {
            let w = render_word(&mut rng, class, &SynthParams::default());
            let f = extract_features(&w.image, &FeatureConfig::default())?;
            samples.push(Sample {
                features: f.0.to_vec(),
                label: class.label(),
            });
        }
    }

    let mut cfg = PipelineConfig::default();
    cfg.train.seed = 7;
    let names = ScriptClass::ALL.map(|c| c.name().to_string());
    let run = train_samples(samples, names, &cfg, None)?;
    let mse = &run.outcome.epoch_mse;
    for e in [0, 9, 99, 999, mse.len() - 1] {
        println!("epoch {:>4}  mse {:.6}", e + 1, mse[e]);
    }
    print!("{}", run.summary());
    Ok(())
}
