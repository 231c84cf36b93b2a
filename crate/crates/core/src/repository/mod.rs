//! Persistent store of source files and their cached call sequences.
//!
//! Files are extracted once when added; lookups never re-parse. An inverted
//! index from method keys to file ids narrows query candidates, and the
//! suffix-matching rule is then verified against the cached calls. The whole
//! index serializes to one canonical `repo.xml`: same entries, same bytes.
//!
//! Mutation (`add_files`, `remove_file`, `save`) takes `&mut self`;
//! `lookup`/`load` borrow immutably, so the type system enforces the
//! single-writer, many-readers discipline.

mod xml;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::extractor::extract_file;
use crate::types::{
    ApiCall, CallSequence, DiagnosticKind, ExtractionDiagnostic, MethodQuery, SequenceId,
};

pub const REPOSITORY_FILE: &str = "repo.xml";
const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum RepositoryError {
    #[error("a repository already exists at {0}")]
    AlreadyExists(PathBuf),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("repository is corrupt: {0}")]
    Corrupt(String),
}

/// Stable per-file identifier, rendered as `f000001`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FileId(u64);

impl FileId {
    fn parse(text: &str) -> Option<FileId> {
        let digits = text.strip_prefix('f')?;
        if digits.len() < 6 || !digits.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        digits.parse().ok().map(FileId)
    }
}

impl fmt::Display for FileId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f{:06}", self.0)
    }
}

/// One indexed source file: its identity, content hash, and extraction output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileEntry {
    pub id: FileId,
    pub path: String,
    /// Lowercase hex SHA-256 of the file bytes the sequences were built from.
    pub content_hash: String,
    pub sequences: Vec<CallSequence>,
    pub diagnostics: Vec<ExtractionDiagnostic>,
}

/// What happened to one path during `add_files`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AddStatus {
    Added,
    /// Same path, same content hash: nothing to do.
    Unchanged,
    /// Same path, new content: re-extracted and re-indexed.
    Updated,
}

#[derive(Debug)]
pub struct AddResult {
    pub path: String,
    pub outcome: Result<(FileId, AddStatus), RepositoryError>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RepoStats {
    pub entries: usize,
    pub sequences: usize,
    pub method_keys: usize,
}

/// The in-memory index; see the module docs for the persistence contract.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RepositoryIndex {
    entries: Vec<FileEntry>,
    method_index: BTreeMap<String, BTreeSet<FileId>>,
}

impl RepositoryIndex {
    pub fn new() -> RepositoryIndex {
        RepositoryIndex::default()
    }

    /// Creates `directory` if needed and persists an empty repository there.
    pub fn init(directory: &Path) -> Result<RepositoryIndex, RepositoryError> {
        let file = directory.join(REPOSITORY_FILE);
        if file.exists() {
            return Err(RepositoryError::AlreadyExists(file));
        }
        fs::create_dir_all(directory)
            .map_err(|source| RepositoryError::Io { path: directory.to_path_buf(), source })?;
        let index = RepositoryIndex::new();
        index.save(directory)?;
        Ok(index)
    }

    pub fn load(directory: &Path) -> Result<RepositoryIndex, RepositoryError> {
        let file = directory.join(REPOSITORY_FILE);
        let text = fs::read_to_string(&file)
            .map_err(|source| RepositoryError::Io { path: file, source })?;
        let index = Self::from_canonical_xml(&text)?;
        index.verify_invariants()?;
        Ok(index)
    }

    pub fn save(&self, directory: &Path) -> Result<(), RepositoryError> {
        let file = directory.join(REPOSITORY_FILE);
        fs::write(&file, self.to_canonical_xml())
            .map_err(|source| RepositoryError::Io { path: file, source })?;
        Ok(())
    }

    pub fn entries(&self) -> &[FileEntry] {
        &self.entries
    }

    pub fn method_index(&self) -> &BTreeMap<String, BTreeSet<FileId>> {
        &self.method_index
    }

    pub fn stats(&self) -> RepoStats {
        RepoStats {
            entries: self.entries.len(),
            sequences: self.entries.iter().map(|e| e.sequences.len()).sum(),
            method_keys: self.method_index.len(),
        }
    }

    /// Reads and indexes each path; failures are reported per path and do
    /// not stop the rest.
    pub fn add_files(&mut self, paths: &[impl AsRef<Path>]) -> Vec<AddResult> {
        paths
            .iter()
            .map(|p| {
                let path = p.as_ref();
                let label = path.to_string_lossy().into_owned();
                let outcome = match fs::read(path) {
                    Ok(bytes) => Ok(self.add_source(&label, &bytes)),
                    Err(source) => {
                        Err(RepositoryError::Io { path: path.to_path_buf(), source })
                    }
                };
                AddResult { path: label, outcome }
            })
            .collect()
    }

    /// Indexes one source text under `label`. Re-adding identical content is
    /// a no-op; changed content is re-extracted in place.
    pub fn add_source(&mut self, label: &str, bytes: &[u8]) -> (FileId, AddStatus) {
        let hash = sha256_hex(bytes);
        if let Some(pos) = self.entries.iter().position(|e| e.path == label) {
            if self.entries[pos].content_hash == hash {
                return (self.entries[pos].id, AddStatus::Unchanged);
            }
            let id = self.entries[pos].id;
            self.unindex_entry(pos);
            let extraction = extract_file(&String::from_utf8_lossy(bytes), label);
            self.entries[pos].content_hash = hash;
            self.entries[pos].sequences = extraction.sequences;
            self.entries[pos].diagnostics = extraction.diagnostics;
            self.index_entry(pos);
            return (id, AddStatus::Updated);
        }

        let id = FileId(self.entries.iter().map(|e| e.id.0).max().unwrap_or(0) + 1);
        let extraction = extract_file(&String::from_utf8_lossy(bytes), label);
        self.entries.push(FileEntry {
            id,
            path: label.to_string(),
            content_hash: hash,
            sequences: extraction.sequences,
            diagnostics: extraction.diagnostics,
        });
        self.index_entry(self.entries.len() - 1);
        (id, AddStatus::Added)
    }

    /// Removes the entry selected by file id (`f000001`) or path. Returns
    /// how many entries were removed (0 or 1).
    pub fn remove_file(&mut self, selector: &str) -> usize {
        let pos = self
            .entries
            .iter()
            .position(|e| e.path == selector || e.id.to_string() == selector);
        match pos {
            Some(pos) => {
                self.unindex_entry(pos);
                self.entries.remove(pos);
                1
            }
            None => 0,
        }
    }

    /// Entries with at least one cached call matching the query under
    /// suffix matching, ordered by file id. Unparseable queries match
    /// nothing.
    pub fn lookup(&self, query: &str) -> Vec<&FileEntry> {
        let Some(parsed) = MethodQuery::parse(query) else {
            return Vec::new();
        };
        self.lookup_query(&parsed)
    }

    pub fn lookup_query(&self, query: &MethodQuery) -> Vec<&FileEntry> {
        // Every call is indexed under its bare method name, so the last
        // query segment gives a complete candidate set to verify against.
        let Some(candidates) = self.method_index.get(query.bare_method()) else {
            return Vec::new();
        };
        candidates
            .iter()
            .filter_map(|id| self.entry_by_id(*id))
            .filter(|e| {
                e.sequences.iter().flat_map(|s| &s.calls).any(|c| query.matches(c))
            })
            .collect()
    }

    fn entry_by_id(&self, id: FileId) -> Option<&FileEntry> {
        self.entries.binary_search_by(|e| e.id.cmp(&id)).ok().map(|pos| &self.entries[pos])
    }

    fn index_entry(&mut self, pos: usize) {
        let id = self.entries[pos].id;
        for key in entry_keys(&self.entries[pos]) {
            self.method_index.entry(key).or_default().insert(id);
        }
    }

    fn unindex_entry(&mut self, pos: usize) {
        let id = self.entries[pos].id;
        for key in entry_keys(&self.entries[pos]) {
            if let Some(ids) = self.method_index.get_mut(&key) {
                ids.remove(&id);
                if ids.is_empty() {
                    self.method_index.remove(&key);
                }
            }
        }
    }

    /// Rebuild-and-compare check of every structural invariant.
    pub fn verify_invariants(&self) -> Result<(), RepositoryError> {
        let mut ids = BTreeSet::new();
        let mut paths = BTreeSet::new();
        for pair in self.entries.windows(2) {
            if pair[0].id >= pair[1].id {
                return Err(RepositoryError::Corrupt("entries not sorted by id".into()));
            }
        }
        for entry in &self.entries {
            if !ids.insert(entry.id) {
                return Err(RepositoryError::Corrupt(format!("duplicate file id {}", entry.id)));
            }
            if !paths.insert(&entry.path) {
                return Err(RepositoryError::Corrupt(format!("duplicate path {}", entry.path)));
            }
            if entry.content_hash.len() != 64
                || !entry.content_hash.chars().all(|c| c.is_ascii_hexdigit() && !c.is_uppercase())
            {
                return Err(RepositoryError::Corrupt(format!(
                    "bad sha256 for {}",
                    entry.path
                )));
            }
            if entry.sequences.iter().any(|s| s.calls.is_empty()) {
                return Err(RepositoryError::Corrupt("empty call sequence".into()));
            }
        }

        let mut rebuilt: BTreeMap<String, BTreeSet<FileId>> = BTreeMap::new();
        for entry in &self.entries {
            for key in entry_keys(entry) {
                rebuilt.entry(key).or_default().insert(entry.id);
            }
        }
        if rebuilt != self.method_index {
            return Err(RepositoryError::Corrupt(
                "method index disagrees with cached sequences".into(),
            ));
        }
        Ok(())
    }

    /// The one and only byte form of this index.
    pub fn to_canonical_xml(&self) -> String {
        let version = FORMAT_VERSION.to_string();
        let mut w = xml::Writer::new();
        w.open(0, "repository", &[("version", &version)], self.entries.is_empty());
        for entry in &self.entries {
            let id = entry.id.to_string();
            let empty = entry.sequences.is_empty() && entry.diagnostics.is_empty();
            w.open(
                1,
                "file",
                &[("id", &id), ("path", &entry.path), ("sha256", &entry.content_hash)],
                empty,
            );
            for seq in &entry.sequences {
                w.open(
                    2,
                    "method",
                    &[("owner", &seq.origin_owner), ("name", &seq.origin_method)],
                    false,
                );
                for (i, call) in seq.calls.iter().enumerate() {
                    let i = i.to_string();
                    w.open(
                        3,
                        "call",
                        &[("i", &i), ("class", &call.class_name), ("method", &call.method_name)],
                        true,
                    );
                }
                w.close(2, "method");
            }
            for diag in &entry.diagnostics {
                let line = diag.line.to_string();
                w.open(2, "diag", &[("line", &line), ("kind", diag.kind.as_str())], true);
            }
            if !empty {
                w.close(1, "file");
            }
        }
        if !self.entries.is_empty() {
            w.close(0, "repository");
        }
        w.finish()
    }

    pub fn from_canonical_xml(text: &str) -> Result<RepositoryIndex, RepositoryError> {
        let corrupt = |msg: String| RepositoryError::Corrupt(msg);
        let root = xml::parse_document(text).map_err(corrupt)?;
        if root.name != "repository" {
            return Err(RepositoryError::Corrupt(format!("unexpected root <{}>", root.name)));
        }
        if root.attr("version") != Some("1") {
            return Err(RepositoryError::Corrupt("unsupported repository version".into()));
        }

        let mut index = RepositoryIndex::new();
        for file in &root.children {
            if file.name != "file" {
                return Err(RepositoryError::Corrupt(format!("unexpected <{}>", file.name)));
            }
            let id = file
                .attr("id")
                .and_then(FileId::parse)
                .ok_or_else(|| RepositoryError::Corrupt("bad or missing file id".into()))?;
            let path = file
                .attr("path")
                .ok_or_else(|| RepositoryError::Corrupt("missing file path".into()))?
                .to_string();
            let content_hash = file
                .attr("sha256")
                .ok_or_else(|| RepositoryError::Corrupt("missing sha256".into()))?
                .to_string();

            let mut sequences = Vec::new();
            let mut diagnostics = Vec::new();
            for child in &file.children {
                match child.name.as_str() {
                    "method" => {
                        let owner = child
                            .attr("owner")
                            .ok_or_else(|| RepositoryError::Corrupt("method without owner".into()))?;
                        let name = child
                            .attr("name")
                            .ok_or_else(|| RepositoryError::Corrupt("method without name".into()))?;
                        let mut calls = Vec::new();
                        for (expected, call) in child.children.iter().enumerate() {
                            if call.name != "call" {
                                return Err(RepositoryError::Corrupt(format!(
                                    "unexpected <{}> in method",
                                    call.name
                                )));
                            }
                            let i: usize = call
                                .attr("i")
                                .and_then(|v| v.parse().ok())
                                .ok_or_else(|| RepositoryError::Corrupt("bad call index".into()))?;
                            if i != expected {
                                return Err(RepositoryError::Corrupt(
                                    "call indices not contiguous".into(),
                                ));
                            }
                            let class = call.attr("class").ok_or_else(|| {
                                RepositoryError::Corrupt("call without class".into())
                            })?;
                            let method = call.attr("method").ok_or_else(|| {
                                RepositoryError::Corrupt("call without method".into())
                            })?;
                            if class.is_empty() || method.is_empty() {
                                return Err(RepositoryError::Corrupt("empty call name".into()));
                            }
                            calls.push(ApiCall::new(class, method));
                        }
                        sequences.push(CallSequence {
                            id: SequenceId::derive(&path, sequences.len()),
                            calls,
                            origin_owner: owner.to_string(),
                            origin_method: name.to_string(),
                            origin_file: path.clone(),
                        });
                    }
                    "diag" => {
                        let line: u32 = diag_attr(child, "line")?;
                        let kind = child
                            .attr("kind")
                            .and_then(DiagnosticKind::parse)
                            .ok_or_else(|| RepositoryError::Corrupt("bad diag kind".into()))?;
                        if line == 0 {
                            return Err(RepositoryError::Corrupt("diag line must be 1-based".into()));
                        }
                        diagnostics.push(ExtractionDiagnostic { line, kind });
                    }
                    other => {
                        return Err(RepositoryError::Corrupt(format!(
                            "unexpected <{other}> in file"
                        )))
                    }
                }
            }
            index.entries.push(FileEntry { id, path, content_hash, sequences, diagnostics });
            index.index_entry(index.entries.len() - 1);
        }
        Ok(index)
    }
}

fn diag_attr(element: &xml::Element, name: &str) -> Result<u32, RepositoryError> {
    element
        .attr(name)
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| RepositoryError::Corrupt(format!("bad diag {name}")))
}

fn entry_keys(entry: &FileEntry) -> BTreeSet<String> {
    entry
        .sequences
        .iter()
        .flat_map(|s| &s.calls)
        .flat_map(ApiCall::method_keys)
        .collect()
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}
