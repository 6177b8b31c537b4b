//! Bundled example links: one `<name>.pd` and one `<name>.meta.json` per
//! entry, the metadata carrying known topological facts with a source note.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::LaurentPoly;
use crate::diagram::{parse_pd, LinkDiagram};
use crate::error::DiagramError;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Meta { path: PathBuf, source: serde_json::Error },
    #[error("{path}: {source}")]
    Diagram { path: PathBuf, source: DiagramError },
    #[error("entry `{name}`: {msg}")]
    Inconsistent { name: String, msg: String },
    #[error("no corpus entry named `{0}`")]
    Unknown(String),
}

/// A known value together with where it comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sourced<T> {
    pub value: T,
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryMeta {
    pub components: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<Sourced<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fibered: Option<Sourced<bool>>,
    /// Classical (untwisted) Alexander polynomial, unit-normalized.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alexander: Option<Sourced<LaurentPoly>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub pd_path: PathBuf,
    pub pd_text: String,
    pub diagram: LinkDiagram,
    pub meta: EntryMeta,
}

impl CorpusEntry {
    pub fn load(dir: &Path, name: &str) -> Result<Self, CorpusError> {
        let pd_path = dir.join(format!("{name}.pd"));
        let meta_path = dir.join(format!("{name}.meta.json"));
        let read = |p: &Path| fs::read_to_string(p).map_err(|source| CorpusError::Io { path: p.to_path_buf(), source });
        let pd_text = read(&pd_path)?;
        let diagram = parse_pd(&pd_text).map_err(|source| CorpusError::Diagram { path: pd_path.clone(), source })?;
        let meta: EntryMeta = serde_json::from_str(&read(&meta_path)?)
            .map_err(|source| CorpusError::Meta { path: meta_path.clone(), source })?;
        let entry = CorpusEntry { name: name.to_string(), pd_path, pd_text, diagram, meta };
        entry.check()?;
        Ok(entry)
    }

    fn check(&self) -> Result<(), CorpusError> {
        let bad = |msg: String| Err(CorpusError::Inconsistent { name: self.name.clone(), msg });
        if self.meta.components != self.diagram.component_count() {
            return bad(format!(
                "metadata says {} components, diagram has {}",
                self.meta.components,
                self.diagram.component_count()
            ));
        }
        let notes = [
            self.meta.genus.as_ref().map(|s| &s.provenance),
            self.meta.fibered.as_ref().map(|s| &s.provenance),
            self.meta.alexander.as_ref().map(|s| &s.provenance),
        ];
        if notes.into_iter().flatten().any(|p| p.trim().is_empty()) {
            return bad("metadata field without provenance".into());
        }
        if let Some(a) = &self.meta.alexander {
            if a.value != a.value.normalize_unit() {
                return bad(format!("Alexander polynomial {} is not unit-normalized", a.value));
            }
        }
        Ok(())
    }

    /// `2g - 2 + m` when the genus is known.
    pub fn thurston_norm(&self) -> Option<crate::algebra::Rational> {
        self.meta.genus.as_ref().map(|g| crate::invariants::norm_from_genus(g.value, self.meta.components))
    }

    pub fn is_fibered(&self) -> Option<bool> {
        self.meta.fibered.as_ref().map(|f| f.value)
    }
}

/// The `corpus/` directory shipped with the sources.
pub fn default_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

/// Entry names (file stems of `*.pd`) in sorted order.
pub fn list(dir: &Path) -> Result<Vec<String>, CorpusError> {
    let io = |source| CorpusError::Io { path: dir.to_path_buf(), source };
    let mut names = Vec::new();
    for item in fs::read_dir(dir).map_err(io)? {
        let path = item.map_err(io)?.path();
        if path.extension().is_some_and(|e| e == "pd") {
            if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                names.push(stem.to_string());
            }
        }
    }
    names.sort();
    Ok(names)
}

pub fn load_all(dir: &Path) -> Result<Vec<CorpusEntry>, CorpusError> {
    list(dir)?.iter().map(|n| CorpusEntry::load(dir, n)).collect()
}

pub fn load(dir: &Path, name: &str) -> Result<CorpusEntry, CorpusError> {
    if !dir.join(format!("{name}.pd")).exists() {
        return Err(CorpusError::Unknown(name.to_string()));
    }
    CorpusEntry::load(dir, name)
}
