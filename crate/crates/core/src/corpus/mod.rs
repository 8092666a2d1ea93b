//! Corpus preparation: normalization, content addressing, deduplication and
//! sample selection.

mod multipart;
mod sample;
mod strip;

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;
use walkdir::WalkDir;

pub use multipart::{decode_lossy, flatten_multipart};
pub use sample::{select_sample, slovin, Sample, SampleSpec, SAMPLE_GENERATOR};
pub use strip::{strip_comments, strip_comments_report, Stripped};

/// Hash used for content identity. Recorded in every manifest.
pub const HASH_ALGO: &str = "sha256";

/// File extensions picked up by [`ingest`].
pub const SOURCE_EXTENSIONS: [&str; 2] = ["sol", "json"];

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("no eligible sources under {}", .0.display())]
    EmptyCorpus(PathBuf),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("confidence must lie in [0, 1), got {0}")]
    InvalidConfidence(f64),
    #[error("population must be at least 1")]
    EmptyPopulation,
    #[error("sample of {requested} requested but the manifest holds {available} entries")]
    SampleTooLarge { requested: u64, available: u64 },
    #[error("manifest {}: {source}", path.display())]
    Manifest {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl CorpusError {
    fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CorpusError::Io {
            path: path.into(),
            source,
        }
    }
}

/// Lowercase hex SHA-256 of normalized source text.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ContentId(String);

impl ContentId {
    pub fn of(normalized: &str) -> Self {
        ContentId(hex::encode(Sha256::digest(normalized.as_bytes())))
    }

    /// Accepts a 64-character lowercase hex string.
    pub fn parse(text: &str) -> Option<Self> {
        let ok = text.len() == 64 && text.bytes().all(|b| matches!(b, b'0'..=b'9' | b'a'..=b'f'));
        ok.then(|| ContentId(text.to_owned()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Location of the normalized text inside a content-addressed store.
    pub fn store_path(&self, store: &Path) -> PathBuf {
        store.join(&self.0[..2]).join(format!("{}.sol", self.0))
    }
}

impl fmt::Display for ContentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceUnit {
    pub id: ContentId,
    pub origin: String,
    pub raw: Vec<u8>,
    pub normalized: String,
    pub byte_len: usize,
}

/// Non-fatal problems met while normalizing or ingesting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CorpusWarning {
    Unreadable { origin: String, reason: String },
    InvalidUtf8 { origin: String },
    UnterminatedBlockComment { origin: String },
}

impl fmt::Display for CorpusWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorpusWarning::Unreadable { origin, reason } => write!(f, "{origin}: skipped, {reason}"),
            CorpusWarning::InvalidUtf8 { origin } => {
                write!(f, "{origin}: invalid UTF-8 replaced with U+FFFD")
            }
            CorpusWarning::UnterminatedBlockComment { origin } => {
                write!(f, "{origin}: unterminated block comment stripped to end of input")
            }
        }
    }
}

impl SourceUnit {
    /// Flattens, decodes and comment-strips `raw`, then hashes the result.
    pub fn normalize(origin: impl Into<String>, raw: Vec<u8>) -> (SourceUnit, Vec<CorpusWarning>) {
        let origin = origin.into();
        let mut warnings = Vec::new();
        if std::str::from_utf8(&raw).is_err() {
            warnings.push(CorpusWarning::InvalidUtf8 {
                origin: origin.clone(),
            });
        }
        let flattened = flatten_multipart(&raw);
        let stripped = strip_comments_report(&flattened);
        if stripped.unterminated_block {
            warnings.push(CorpusWarning::UnterminatedBlockComment {
                origin: origin.clone(),
            });
        }
        let normalized = stripped.text;
        let unit = SourceUnit {
            id: ContentId::of(&normalized),
            byte_len: normalized.len(),
            origin,
            raw,
            normalized,
        };
        (unit, warnings)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: ContentId,
    pub origin: String,
    pub byte_len: usize,
}

impl From<&SourceUnit> for ManifestEntry {
    fn from(unit: &SourceUnit) -> Self {
        ManifestEntry {
            id: unit.id.clone(),
            origin: unit.origin.clone(),
            byte_len: unit.byte_len,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub hash_algo: String,
    pub created_at: String,
    pub entries: Vec<ManifestEntry>,
    pub unique_count: usize,
}

impl CorpusManifest {
    /// Builds a manifest stamped with the current UTC time.
    pub fn new(entries: Vec<ManifestEntry>) -> Self {
        CorpusManifest {
            hash_algo: HASH_ALGO.to_owned(),
            created_at: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            unique_count: entries.len(),
            entries,
        }
    }

    pub fn load(path: &Path) -> Result<Self, CorpusError> {
        let text = fs::read(path).map_err(|e| CorpusError::io(path, e))?;
        serde_json::from_slice(&text).map_err(|source| CorpusError::Manifest {
            path: path.to_owned(),
            source,
        })
    }

    pub fn save(&self, path: &Path) -> Result<(), CorpusError> {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent).map_err(|e| CorpusError::io(parent, e))?;
        }
        let mut json = serde_json::to_string_pretty(self).expect("manifest serializes");
        json.push('\n');
        fs::write(path, json).map_err(|e| CorpusError::io(path, e))
    }
}

/// Keeps the first unit for every distinct id, preserving input order.
pub fn dedupe(units: Vec<SourceUnit>) -> Vec<SourceUnit> {
    let mut seen = HashSet::new();
    units
        .into_iter()
        .filter(|unit| seen.insert(unit.id.clone()))
        .collect()
}

#[derive(Debug)]
pub struct IngestOutcome {
    pub manifest: CorpusManifest,
    pub units: Vec<SourceUnit>,
    pub warnings: Vec<CorpusWarning>,
}

/// Reads every `.sol` / `.json` file under `root`, normalizes and dedupes.
///
/// Files are processed in sorted relative-path order, so the manifest entries
/// depend only on the tree's contents. Unreadable files become warnings.
pub fn ingest(root: &Path) -> Result<IngestOutcome, CorpusError> {
    let meta = fs::metadata(root).map_err(|e| CorpusError::io(root, e))?;
    if !meta.is_dir() {
        return Err(CorpusError::io(
            root,
            std::io::Error::new(std::io::ErrorKind::InvalidInput, "not a directory"),
        ));
    }
    fs::read_dir(root).map_err(|e| CorpusError::io(root, e))?;

    let mut warnings = Vec::new();
    let mut candidates = Vec::new();
    for entry in WalkDir::new(root).follow_links(false) {
        match entry {
            Ok(entry) if entry.file_type().is_file() && is_source_file(entry.path()) => {
                candidates.push(entry.into_path());
            }
            Ok(_) => {}
            Err(err) => warnings.push(CorpusWarning::Unreadable {
                origin: err
                    .path()
                    .map(|p| origin_of(root, p))
                    .unwrap_or_else(|| root.display().to_string()),
                reason: err.to_string(),
            }),
        }
    }
    candidates.sort();

    let mut units = Vec::with_capacity(candidates.len());
    for path in &candidates {
        let origin = origin_of(root, path);
        match fs::read(path) {
            Ok(raw) => {
                let (unit, unit_warnings) = SourceUnit::normalize(origin, raw);
                warnings.extend(unit_warnings);
                units.push(unit);
            }
            Err(err) => warnings.push(CorpusWarning::Unreadable {
                origin,
                reason: err.to_string(),
            }),
        }
    }
    if units.is_empty() {
        return Err(CorpusError::EmptyCorpus(root.to_owned()));
    }

    let units = dedupe(units);
    let manifest = CorpusManifest::new(units.iter().map(ManifestEntry::from).collect());
    Ok(IngestOutcome {
        manifest,
        units,
        warnings,
    })
}

/// Writes every unit's normalized text to `<store>/<id[..2]>/<id>.sol`.
pub fn write_store(store: &Path, units: &[SourceUnit]) -> Result<(), CorpusError> {
    for unit in units {
        let path = unit.id.store_path(store);
        let dir = path.parent().expect("store path has a shard directory");
        fs::create_dir_all(dir).map_err(|e| CorpusError::io(dir, e))?;
        fs::write(&path, &unit.normalized).map_err(|e| CorpusError::io(&path, e))?;
    }
    Ok(())
}

pub fn read_store(store: &Path, id: &ContentId) -> Result<String, CorpusError> {
    let path = id.store_path(store);
    fs::read_to_string(&path).map_err(|e| CorpusError::io(&path, e))
}

fn is_source_file(path: &Path) -> bool {
    path.extension()
        .and_then(|ext| ext.to_str())
        .is_some_and(|ext| SOURCE_EXTENSIONS.contains(&ext))
}

fn origin_of(root: &Path, path: &Path) -> String {
    let rel = path.strip_prefix(root).unwrap_or(path);
    rel.components()
        .map(|c| c.as_os_str().to_string_lossy())
        .collect::<Vec<_>>()
        .join("/")
}
