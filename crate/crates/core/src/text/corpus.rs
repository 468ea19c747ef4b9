//! On-disk corpus layout: `<root>/<cluster>/docs/*.txt` with optional
//! reference summaries in `<root>/<cluster>/refs/*.txt`.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

use super::split_sentences;

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub id: String,
    /// Sentences in source order.
    pub sentences: Vec<String>,
    pub source: PathBuf,
}

impl Document {
    pub fn from_text(id: impl Into<String>, text: &str, source: impl Into<PathBuf>) -> Self {
        Document {
            id: id.into(),
            sentences: split_sentences(text),
            source: source.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    pub id: String,
    pub documents: Vec<Document>,
    /// Raw reference summaries; tokenized with the pipeline settings when scored.
    pub references: Vec<String>,
}

impl Cluster {
    pub fn new(id: impl Into<String>, documents: Vec<Document>, references: Vec<String>) -> Result<Self> {
        let id = id.into();
        if documents.is_empty() {
            return Err(Error::EmptyCluster(id));
        }
        Ok(Cluster {
            id,
            documents,
            references,
        })
    }
}

fn sorted_txt_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "txt") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Loads one cluster directory. Documents are ordered by file name.
pub fn load_cluster(dir: impl AsRef<Path>) -> Result<Cluster> {
    let dir = dir.as_ref();
    let id = dir
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| dir.display().to_string());
    let docs_dir = dir.join("docs");
    if !docs_dir.is_dir() {
        return Err(Error::Parse {
            path: dir.to_path_buf(),
            msg: "cluster directory has no docs/ subdirectory".into(),
        });
    }
    let documents = sorted_txt_files(&docs_dir)?
        .into_iter()
        .map(|p| Ok(Document::from_text(file_stem(&p), &read(&p)?, p)))
        .collect::<Result<Vec<_>>>()?;
    let refs_dir = dir.join("refs");
    let references = if refs_dir.is_dir() {
        sorted_txt_files(&refs_dir)?
            .iter()
            .map(|p| read(p))
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    Cluster::new(id, documents, references)
}

/// Loads every cluster under `root`, ordered by directory name.
pub fn load_corpus(root: impl AsRef<Path>) -> Result<Vec<Cluster>> {
    let root = root.as_ref();
    let mut dirs = Vec::new();
    for entry in fs::read_dir(root).map_err(|e| Error::io(root, e))? {
        let path = entry.map_err(|e| Error::io(root, e))?.path();
        if path.join("docs").is_dir() {
            dirs.push(path);
        }
    }
    dirs.sort();
    if dirs.is_empty() {
        return Err(Error::Parse {
            path: root.to_path_buf(),
            msg: "no cluster directories (expected <cluster>/docs/*.txt)".into(),
        });
    }
    dirs.iter().map(load_cluster).collect()
}
