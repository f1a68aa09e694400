//! Classify every word of a mixed page and write an overlay PGM.
//!
//! Usage: `cargo run --example classify_page [overlay.pgm]`

use scriptid::mlp::XorShift64;
use scriptid::pipeline::{classify_page, render_overlay, train_samples, PipelineConfig};
use scriptid::raster::{save_pgm, GrayImage};
use scriptid::synth::{compose_page, render_word, PageSpec, ScriptClass, SynthParams};

fn main() -> scriptid::Result<()> {
    let params = SynthParams::default();
    let mut cfg = PipelineConfig::default();
    cfg.train.epochs = 300;

    let mut rng = XorShift64::new(1);
    let mut samples = Vec::new();
    for _ in 0..200 {
        for class in ScriptClass::ALL {
            let w = render_word(&mut rng, class, &params);
            let f = scriptid::features::extract_features(&w.image, &cfg.features)?;
            samples.push(scriptid::mlp::Sample {
                features: f.0.to_vec(),
                label: class.label(),
            });
        }
    }
    let model = train_samples(
        samples,
        ScriptClass::ALL.map(|c| c.name().to_string()),
        &cfg,
        None,
    )?
    .outcome
    .model;

    let spec = PageSpec {
        lines: 5,
        words_per_line: (4, 7),
        ..Default::default()
    };
    let page = compose_page(&mut rng, &spec, &params);
    let result = classify_page(&model, &page.image, &cfg)?;
    print!("{}", result.to_tsv());
    let correct = result
        .words
        .iter()
        .zip(&page.truth)
        .filter(|(p, t)| p.label == t.class.label())
        .count();
    println!(
        "{correct}/{} words match the generator's labels",
        page.truth.len()
    );

    let path = std::env::args().nth(1).unwrap_or_else(|| {
        std::env::temp_dir()
            .join("scriptid_overlay.pgm")
            .display()
            .to_string()
    });
    let overlay = render_overlay(&GrayImage::from_mask(&page.image), &result);
    std::fs::write(&path, save_pgm(&overlay)).expect("overlay written");
    println!("overlay: {path}");
    Ok(())
}
