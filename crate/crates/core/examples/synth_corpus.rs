//! Write a small labelled corpus plus two mixed pages to a directory.
//!
//! Usage: `cargo run --example synth_corpus [out-dir]`

use std::path::PathBuf;

use scriptid::pipeline::{run_synth, SynthRequest};
use scriptid::synth::SynthParams;

fn main() -> scriptid::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("scriptid_corpus"));
    // harder than the default: more broken headlines and joined letters
    let params = SynthParams {
        matra_break_prob: 0.4,
        cursive_prob: 0.3,
        ..Default::default()
    };
    let req = SynthRequest {
        per_class: 25,
        seed: 2,
        pages: 2,
        ..Default::default()
    };
    let result = run_synth(&req, &params, &out)?;

    println!(
        "{} words listed in {}",
        result.corpus.entries.len(),
        result.corpus_path.display()
    );
    for (k, v) in &result.corpus.metadata {
        println!("  {k} = {v}");
    }
    for p in &result.page_paths {
        println!("page {}", p.display());
    }
    Ok(())
}
