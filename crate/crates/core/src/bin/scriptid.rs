use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use scriptid::pipeline::{self, parse_ratio, PipelineConfig, SynthRequest};
use scriptid::{Error, Result};

/// Word-level script identification for handwritten pages.
#[derive(Parser)]
#[command(name = "scriptid", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Seed for the split, weight init, epoch order and generator.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Plain-text `key = value` config file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Threshold a PGM page and write it as DAT.
    Binarize {
        input: PathBuf,
        /// Also despeckle and close.
        #[arg(long)]
        clean: bool,
    },
    /// Find lines and words; print the manifest, write crops under --out.
    Segment {
        page: PathBuf,
        #[arg(long, default_value_t = 0)]
        page_id: u32,
    },
    /// Print the 8 features of each word of a page, of a corpus
    /// manifest (`.tsv`), or of a single word image.
    Features {
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        page_id: u32,
        /// Treat the input as one word image.
        #[arg(long)]
        word: bool,
    },
    /// Train on a labelled corpus and report held-out accuracy.
    Train {
        corpus: PathBuf,
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long)]
        hidden: Option<usize>,
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        epochs: Option<usize>,
        /// Train:test ratio, e.g. 9:7.
        #[arg(long)]
        split: Option<String>,
    },
    /// Evaluate a model on a labelled corpus.
    Eval {
        corpus: PathBuf,
        #[arg(long)]
        model: PathBuf,
        /// Only the test part of the training split.
        #[arg(long)]
        held_out: bool,
        #[arg(long)]
        split: Option<String>,
    },
    /// Label every word on a page.
    Classify {
        page: PathBuf,
        #[arg(long)]
        model: PathBuf,
        /// Write a PGM copy of the page with class-coloured word frames.
        #[arg(long)]
        overlay: Option<PathBuf>,
    },
    /// Generate a labelled synthetic word corpus (and optional pages).
    Synth {
        #[arg(long, default_value_t = 450)]
        per_class: usize,
        #[arg(long, default_value_t = 0)]
        pages: usize,
        #[arg(long)]
        lines: Option<usize>,
        #[arg(long)]
        words_per_line: Option<usize>,
        /// Share of headline-script words on composed pages.
        #[arg(long)]
        matra_fraction: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("scriptid: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = match &cli.common.config {
        Some(path) => PipelineConfig::from_file(path)?,
        None => PipelineConfig::default(),
    };
    if let Some(seed) = cli.common.seed {
        cfg.train.seed = seed;
    }
    let out = cli.common.out.as_deref();

    match cli.command {
        Command::Binarize { input, clean } => {
            let target = out
                .map(Path::to_path_buf)
                .unwrap_or_else(|| input.with_extension("dat"));
            let b = pipeline::run_binarize(&input, Some(&target), clean, &cfg)?;
            if let Some(t) = b.threshold {
                println!("threshold\t{t}");
            }
            println!("ink\t{}", b.image.foreground_count());
            eprintln!("wrote {}", target.display());
        }
        Command::Segment { page, page_id } => {
            let seg = pipeline::run_segment(&page, page_id, &cfg, out)?;
            print!("{}", seg.manifest());
            eprintln!(
                "{} lines, {} words",
                seg.layout.lines.len(),
                seg.records.len()
            );
        }
        Command::Features {
            input,
            page_id,
            word,
        } => {
            if word {
                println!(
                    "{}\t{}",
                    input.display(),
                    pipeline::word_features(&input, &cfg)?
                );
            } else if input.extension().is_some_and(|e| e == "tsv") {
                for e in pipeline::Corpus::load(&input)?.entries {
                    println!(
                        "{}\t{}",
                        e.path.display(),
                        pipeline::word_features(&e.path, &cfg)?
                    );
                }
            } else {
                let seg = pipeline::run_segment(&input, page_id, &cfg, None)?;
                for (r, f) in pipeline::page_features(&seg, &cfg)? {
                    println!("{}\t{f}", r.key());
                }
            }
        }
        Command::Train {
            corpus,
            model,
            hidden,
            eta,
            alpha,
            epochs,
            split,
        } => {
            if let Some(v) = hidden {
                cfg.train.hidden = v;
            }
            if let Some(v) = eta {
                cfg.train.eta = v;
            }
            if let Some(v) = alpha {
                cfg.train.alpha = v;
            }
            if let Some(v) = epochs {
                cfg.train.epochs = v;
            }
            if let Some(v) = split {
                cfg.split = parse_ratio(&v)?;
            }
            let model_path = model
                .or_else(|| out.map(|d| d.join("model.txt")))
                .unwrap_or_else(|| PathBuf::from("model.txt"));
            let run = pipeline::run_train(&corpus, &cfg, Some(&model_path))?;
            let summary = run.summary();
            if let Some(dir) = out {
                write_file(&dir.join("report.tsv"), &summary)?;
            }
            print!("{summary}");
            eprintln!("wrote {}", model_path.display());
        }
        Command::Eval {
            corpus,
            model,
            held_out,
            split,
        } => {
            if let Some(v) = split {
                cfg.split = parse_ratio(&v)?;
            }
            print!("{}", pipeline::run_eval(&model, &corpus, &cfg, held_out)?);
        }
        Command::Classify {
            page,
            model,
            overlay,
        } => {
            let result = pipeline::run_classify(&model, &page, &cfg, overlay.as_deref())?;
            print!("{}", result.to_tsv());
            eprintln!("{} words classified", result.words.len());
        }
        Command::Synth {
            per_class,
            pages,
            lines,
            words_per_line,
            matra_fraction,
        } => {
            let out = out.ok_or_else(|| Error::Config("synth needs --out DIR".into()))?;
            let mut req = SynthRequest {
                per_class,
                seed: cfg.seed(),
                pages,
                ..Default::default()
            };
            if let Some(n) = lines {
                req.page_spec.lines = n;
            }
            if let Some(n) = words_per_line {
                req.page_spec.words_per_line = (n, n);
            }
            if let Some(f) = matra_fraction {
                req.page_spec.matra_fraction = f;
            }
            let result = pipeline::run_synth(&req, &cfg.synth, out)?;
            println!(
                "corpus\t{}\t{}",
                result.corpus_path.display(),
                result.corpus.entries.len()
            );
            for p in &result.page_paths {
                println!("page\t{}", p.display());
            }
        }
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    let io = |e| Error::Io {
        path: path.into(),
        source: e,
    };
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    std::fs::write(path, text).map_err(io)
}
