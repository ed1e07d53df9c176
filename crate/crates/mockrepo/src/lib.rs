//! Fixture-backed mock of the repository wire contract.
//!
//! A fixture directory holds `items.json` (a search response listing every
//! item) and a `files/` directory with the bitstream contents. Bitstreams
//! are served from `/api/bitstreams/<id>/retrieve`, where `<id>` is taken
//! from each bitstream's `retrieveLink`.
//!
//! ```no_run
//! use odrk_mockrepo::{FixtureSet, MockOptions, MockServer};
//! let set = FixtureSet::load("fixtures/depositonce").unwrap();
//! let server = MockServer::start(set, MockOptions::default()).unwrap();
//! println!("{}", server.base_url());
//! ```

mod range;
mod server;

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use odrk_core::model::ItemRecord;
use odrk_core::wire::{SearchResponse, WireItem};

pub use odrk_core::query::match_items;
pub use range::{parse_range_header, RangeSpec};
pub use server::{MockOptions, MockServer};

#[derive(Debug)]
pub enum FixtureError {
    Io { path: PathBuf, source: io::Error },
    Invalid(String),
}

impl fmt::Display for FixtureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixtureError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            FixtureError::Invalid(m) => write!(f, "invalid fixture: {m}"),
        }
    }
}

impl std::error::Error for FixtureError {}

/// Items and bitstream bytes served by one mock repository.
#[derive(Debug, Clone)]
pub struct FixtureSet {
    name: String,
    items: Vec<ItemRecord>,
    /// bitstream id -> contents
    files: HashMap<String, Vec<u8>>,
}

/// The `<id>` of `/api/bitstreams/<id>/retrieve`.
pub fn bitstream_id(retrieve_link: &str) -> Option<&str> {
    let id = retrieve_link
        .strip_prefix("/api/bitstreams/")?
        .strip_suffix("/retrieve")?;
    (!id.is_empty() && !id.contains('/')).then_some(id)
}

impl FixtureSet {
    /// Load `<dir>/items.json` and `<dir>/files/`. The repository is named
    /// after the directory with a `-fixture` suffix.
    pub fn load(dir: impl AsRef<Path>) -> Result<FixtureSet, FixtureError> {
        let dir = dir.as_ref();
        let base = dir
            .canonicalize()
            .ok()
            .and_then(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
            .unwrap_or_else(|| "mock".into());
        let read = |path: PathBuf| fs::read(&path).map_err(|source| FixtureError::Io { path, source });
        let doc = read(dir.join("items.json"))?;
        let response: SearchResponse =
            serde_json::from_slice(&doc).map_err(|e| FixtureError::Invalid(format!("items.json: {e}")))?;
        let mut files = HashMap::new();
        for item in &response.items {
            for b in &item.bitstreams {
                if b.name.contains(['/', '\\']) || b.name.starts_with('.') {
                    return Err(FixtureError::Invalid(format!("unsafe file name {:?}", b.name)));
                }
                files.insert(b.retrieve_link.clone(), read(dir.join("files").join(&b.name))?);
            }
        }
        FixtureSet::new(format!("{base}-fixture"), response.items, files)
    }

    /// Build from wire items and a map from retrieve link to contents.
    pub fn new(
        name: impl Into<String>,
        items: Vec<WireItem>,
        contents: HashMap<String, Vec<u8>>,
    ) -> Result<FixtureSet, FixtureError> {
        let name = name.into();
        let mut records = Vec::with_capacity(items.len());
        let mut files = HashMap::new();
        for item in items {
            let record = item
                .into_record(&name)
                .map_err(|e| FixtureError::Invalid(e.to_string()))?;
            for b in &record.bitstreams {
                let id = bitstream_id(&b.retrieve_url).ok_or_else(|| {
                    FixtureError::Invalid(format!("retrieve link {:?} outside /api/bitstreams", b.retrieve_url))
                })?;
                let bytes = contents
                    .get(&b.retrieve_url)
                    .ok_or_else(|| FixtureError::Invalid(format!("no contents for {}", b.name)))?;
                if bytes.len() as u64 != b.size_bytes {
                    return Err(FixtureError::Invalid(format!(
                        "{}: declared {} bytes, file has {}",
                        b.name,
                        b.size_bytes,
                        bytes.len()
                    )));
                }
                if files.insert(id.to_string(), bytes.clone()).is_some() {
                    return Err(FixtureError::Invalid(format!("bitstream id {id} used twice")));
                }
            }
            if records.iter().any(|r: &ItemRecord| r.handle == record.handle) {
                return Err(FixtureError::Invalid(format!("handle {} used twice", record.handle)));
            }
            records.push(record);
        }
        Ok(FixtureSet {
            name,
            items: records,
            files,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn items(&self) -> &[ItemRecord] {
        &self.items
    }

    pub fn file(&self, bitstream_id: &str) -> Option<&[u8]> {
        self.files.get(bitstream_id).map(Vec::as_slice)
    }

    /// Contents of a bitstream looked up by item handle and file name.
    pub fn file_by_name(&self, handle: &str, name: &str) -> Option<&[u8]> {
        let item = self.items.iter().find(|i| i.handle.as_str() == handle)?;
        let b = item.bitstream(name)?;
        self.file(bitstream_id(&b.retrieve_url)?)
    }

    pub fn find(&self, prefix: &str, suffix: &str) -> Option<&ItemRecord> {
        self.items
            .iter()
            .find(|i| i.handle.prefix() == prefix && i.handle.suffix() == suffix)
    }

    /// Search response body for `query`.
    pub fn search_body(&self, query: &str) -> Vec<u8> {
        let items = match_items(query, &self.items);
        let response = SearchResponse {
            items: items.iter().map(WireItem::from).collect(),
        };
        serde_json::to_vec(&response).expect("search response serializes")
    }

    pub fn item_body(&self, item: &ItemRecord) -> Vec<u8> {
        serde_json::to_vec(&WireItem::from(item)).expect("item serializes")
    }
}
