//! Segment a generated multi-line page and compare with its ground truth.

use scriptid::layout::{format_manifest, manifest_records};
use scriptid::mlp::XorShift64;
use scriptid::pipeline::{segment, PipelineConfig};
use scriptid::synth::{compose_page, PageSpec, SynthParams};

fn main() {
    let spec = PageSpec {
        lines: 4,
        words_per_line: (3, 6),
        ..Default::default()
    };
    let page = compose_page(&mut XorShift64::new(11), &spec, &SynthParams::default());
    let layout = segment(&page.image, &PipelineConfig::default());

    println!("page {}x{}", page.image.width(), page.image.height());
    println!(
        "lines: found {}, expected {}",
        layout.lines.len(),
        spec.lines
    );
    let records = manifest_records(0, &layout);
    print!("{}", format_manifest(&records));

    let matches = records
        .iter()
        .zip(&page.truth)
        .filter(|(r, t)| r.bbox == t.bbox)
        .count();
    println!(
        "{matches}/{} word boxes match the generator",
        page.truth.len()
    );
}
