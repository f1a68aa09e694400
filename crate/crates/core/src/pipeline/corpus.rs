use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// One word image of a corpus, with its class name when known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub path: PathBuf,
    pub label: Option<String>,
}

/// A list of word images.
///
/// On disk: `# key=value` metadata lines first, then one
/// `path[<TAB>label]` line per entry. Relative paths are resolved against
/// the manifest's own directory by [`Corpus::load`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    pub metadata: Vec<(String, String)>,
    pub entries: Vec<CorpusEntry>,
}

impl Corpus {
    pub fn parse(text: &str) -> Result<Self> {
        let mut corpus = Corpus::default();
        for (i, line) in text.lines().enumerate() {
            let err = |message: String| Error::Manifest {
                line: i + 1,
                message,
            };
            if line.is_empty() {
                continue;
            }
            if let Some(meta) = line.strip_prefix('#') {
                for pair in meta.split_whitespace() {
                    if let Some((k, v)) = pair.split_once('=') {
                        corpus.metadata.push((k.to_string(), v.to_string()));
                    }
                }
                continue;
            }
            let mut fields = line.split('\t');
            let path = fields.next().unwrap_or_default();
            if path.is_empty() {
                return Err(err("empty path".into()));
            }
            let label = match fields.next() {
                Some("") => return Err(err("empty label".into())),
                other => other.map(str::to_string),
            };
            if fields.next().is_some() {
                return Err(err(format!("too many fields in {line:?}")));
            }
            corpus.entries.push(CorpusEntry {
                path: PathBuf::from(path),
                label,
            });
        }
        Ok(corpus)
    }

    /// Reads a manifest, resolving relative paths against its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut corpus = Self::parse(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        for e in &mut corpus.entries {
            if e.path.is_relative() {
                e.path = base.join(&e.path);
            }
        }
        Ok(corpus)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if !self.metadata.is_empty() {
            out.push('#');
            for (k, v) in &self.metadata {
                let _ = write!(out, " {k}={v}");
            }
            out.push('\n');
        }
        for e in &self.entries {
            out.push_str(&e.path.to_string_lossy());
            if let Some(label) = &e.label {
                out.push('\t');
                out.push_str(label);
            }
            out.push('\n');
        }
        out
    }

    pub fn metadata(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// The two class names, sorted. Every entry must carry a label and
    /// exactly two distinct names must occur.
    pub fn label_names(&self) -> Result<[String; 2]> {
        let mut names: Vec<&str> = Vec::new();
        for (i, e) in self.entries.iter().enumerate() {
            let label = e.label.as_deref().ok_or_else(|| Error::Manifest {
                line: i + 1,
                message: format!("{} has no label", e.path.display()),
            })?;
            if !names.contains(&label) {
                names.push(label);
            }
        }
        names.sort_unstable();
        match names.as_slice() {
            [a, b] => Ok([a.to_string(), b.to_string()]),
            _ => Err(Error::DegenerateLabels(format!(
                "need exactly 2 class names, found {names:?}"
            ))),
        }
    }
}
