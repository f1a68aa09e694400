//! Script identification for handwritten pages: tell headline (Matra)
//! script words from Roman script words.
//!
//! The crate covers the whole path from a scanned page to per-word labels:
//! [`raster`] loads, binarizes and cleans bitmaps, [`layout`] finds lines
//! and words, [`features`] turns a word into eight numbers, and [`mlp`]
//! trains and runs a small sigmoid network on them. [`pipeline`] ties the
//! stages to files, and [`synth`] generates labelled test material.

pub mod error;
pub mod features;
pub mod layout;
pub mod mlp;
pub mod pipeline;
pub mod raster;
pub mod synth;

pub use error::{Error, Result};
