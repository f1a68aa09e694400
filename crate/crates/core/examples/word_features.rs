//! Render one word of each script and print its feature vector.

use scriptid::features::{extract_features, FeatureConfig};
use scriptid::mlp::XorShift64;
use scriptid::raster::BinaryImage;
use scriptid::synth::{render_word, ScriptClass, SynthParams};

fn show(img: &BinaryImage) {
    for y in 0..img.height() {
        let row: String = img
            .row(y)
            .iter()
            .map(|&b| if b { '#' } else { '.' })
            .collect();
        println!("  {row}");
    }
}

fn main() -> scriptid::Result<()> {
    let mut rng = XorShift64::new(42);
    let cfg = FeatureConfig::default();
    for class in ScriptClass::ALL {
        let word = render_word(&mut rng, class, &SynthParams::default());
        let trimmed = word.image.trim().expect("words have ink");
        println!("{}:", class.name());
        show(&trimmed);
        let f = extract_features(&word.image, &cfg)?;
        println!("  f1..f8\t{f}\n");
    }
    Ok(())
}
