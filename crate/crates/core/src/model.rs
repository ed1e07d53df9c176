//! Repository-side domain types: endpoints, items, metadata and bitstreams.

use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use url::Url;

use crate::error::ClientError;

pub const DEFAULT_TIMEOUT_SECONDS: f64 = 30.0;

/// Wire dialect spoken by a repository.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flavor {
    /// The documented JSON contract served by the bundled mock repository.
    Fixture,
    /// Same response shapes, reached through configurable path templates.
    DspaceLike,
}

impl Flavor {
    pub fn parse(s: &str) -> Option<Flavor> {
        match s {
            "fixture" => Some(Flavor::Fixture),
            "dspace-like" => Some(Flavor::DspaceLike),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Flavor::Fixture => "fixture",
            Flavor::DspaceLike => "dspace-like",
        }
    }

    fn default_search_path(&self) -> &'static str {
        match self {
            Flavor::Fixture => "/api/search?query={query}",
            Flavor::DspaceLike => "/rest/search?query={query}",
        }
    }

    fn default_item_path(&self) -> &'static str {
        match self {
            Flavor::Fixture => "/api/items/{handle}",
            Flavor::DspaceLike => "/rest/handle/{handle}",
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A configured repository. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct RepositoryEndpoint {
    name: String,
    base_url: Url,
    flavor: Flavor,
    timeout: Duration,
    auth_token: Option<String>,
    range_fallback: bool,
    search_path: String,
    item_path: String,
}

impl RepositoryEndpoint {
    pub fn new(name: &str, base_url: &str, flavor: Flavor) -> Result<Self, ClientError> {
        if name.trim().is_empty() {
            return Err(ClientError::InvalidEndpoint("name is empty".into()));
        }
        let url =
            Url::parse(base_url).map_err(|e| ClientError::InvalidEndpoint(format!("base_url {base_url:?}: {e}")))?;
        if !matches!(url.scheme(), "http" | "https") || url.cannot_be_a_base() {
            return Err(ClientError::InvalidEndpoint(format!(
                "base_url {base_url:?} is not an absolute http(s) URL"
            )));
        }
        Ok(RepositoryEndpoint {
            name: name.to_string(),
            base_url: url,
            flavor,
            timeout: Duration::from_secs_f64(DEFAULT_TIMEOUT_SECONDS),
            auth_token: None,
            range_fallback: true,
            search_path: flavor.default_search_path().to_string(),
            item_path: flavor.default_item_path().to_string(),
        })
    }

    pub fn with_timeout_seconds(mut self, seconds: f64) -> Result<Self, ClientError> {
        if !(seconds.is_finite() && seconds > 0.0) {
            return Err(ClientError::InvalidEndpoint(format!(
                "timeout_seconds must be positive, got {seconds}"
            )));
        }
        self.timeout = Duration::from_secs_f64(seconds);
        Ok(self)
    }

    pub fn with_auth_token(mut self, token: impl Into<String>) -> Self {
        self.auth_token = Some(token.into());
        self
    }

    /// When the server ignores `Range`, slice the full body client-side
    /// instead of failing with [`ClientError::RangeUnsupported`].
    pub fn with_range_fallback(mut self, enabled: bool) -> Self {
        self.range_fallback = enabled;
        self
    }

    /// Override the search path template; `{query}` is replaced by the
    /// url-encoded query.
    pub fn with_search_path(mut self, template: impl Into<String>) -> Self {
        self.search_path = template.into();
        self
    }

    /// Override the item path template; `{handle}` is replaced by
    /// `prefix/suffix`.
    pub fn with_item_path(mut self, template: impl Into<String>) -> Self {
        self.item_path = template.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base_url(&self) -> &Url {
        &self.base_url
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn timeout(&self) -> Duration {
        self.timeout
    }

    pub fn auth_token(&self) -> Option<&str> {
        self.auth_token.as_deref()
    }

    pub fn range_fallback(&self) -> bool {
        self.range_fallback
    }

    pub fn search_path(&self) -> &str {
        &self.search_path
    }

    pub fn item_path(&self) -> &str {
        &self.item_path
    }

    /// Resolve a path (or an absolute URL) against the endpoint's base URL.
    /// Paths are appended to the base path, so a base of
    /// `http://host/dspace` and a path `/api/x` yield `http://host/dspace/api/x`.
    pub fn resolve(&self, path_or_url: &str) -> Result<Url, ClientError> {
        if let Ok(abs) = Url::parse(path_or_url) {
            return Ok(abs);
        }
        let base = self.base_url.as_str().trim_end_matches('/');
        let sep = if path_or_url.starts_with('/') { "" } else { "/" };
        Url::parse(&format!("{base}{sep}{path_or_url}"))
            .map_err(|e| ClientError::Protocol(format!("cannot resolve {path_or_url:?}: {e}")))
    }
}

/// Persistent identifier `prefix/suffix`, e.g. `11303/10989.2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Handle(String);

impl Handle {
    pub fn parse(s: &str) -> Result<Handle, ClientError> {
        let invalid = || ClientError::InvalidHandle(s.to_string());
        let (prefix, suffix) = s.split_once('/').ok_or_else(invalid)?;
        if prefix.is_empty() || !prefix.bytes().all(|b| b.is_ascii_digit()) {
            return Err(invalid());
        }
        if suffix.is_empty() || !suffix.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'.') {
            return Err(invalid());
        }
        Ok(Handle(s.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn prefix(&self) -> &str {
        self.0.split_once('/').map(|(p, _)| p).unwrap_or_default()
    }

    pub fn suffix(&self) -> &str {
        self.0.split_once('/').map(|(_, s)| s).unwrap_or_default()
    }

    /// Directory name used for downloads: `/` becomes `_`.
    pub fn dir_name(&self) -> String {
        self.0.replace('/', "_")
    }
}

impl TryFrom<String> for Handle {
    type Error = ClientError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        Handle::parse(&value)
    }
}

impl From<Handle> for String {
    fn from(h: Handle) -> String {
        h.0
    }
}

impl fmt::Display for Handle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetadataField {
    pub key: String,
    pub value: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub language: Option<String>,
    /// Set only on machine-translated values.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub translated_from: Option<String>,
}

impl MetadataField {
    pub fn new(key: &str, value: &str, language: Option<&str>) -> Self {
        MetadataField {
            key: key.to_string(),
            value: value.to_string(),
            language: language.map(str::to_string),
            translated_from: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitstreamRef {
    pub name: String,
    pub size_bytes: u64,
    pub media_type: String,
    /// Absolute, or relative to the owning endpoint's base URL.
    pub retrieve_url: String,
}

impl BitstreamRef {
    /// Lowercase extension after the last dot, if any.
    pub fn extension(&self) -> Option<String> {
        let (stem, ext) = self.name.rsplit_once('.')?;
        if stem.is_empty() || ext.is_empty() {
            return None;
        }
        Some(ext.to_ascii_lowercase())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItemRecord {
    pub id: String,
    pub handle: Handle,
    pub server: String,
    pub metadata: Vec<MetadataField>,
    pub bitstreams: Vec<BitstreamRef>,
}

impl ItemRecord {
    /// All values of `key`, in document order.
    pub fn values<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.metadata
            .iter()
            .filter(move |m| m.key == key)
            .map(|m| m.value.as_str())
    }

    pub fn first_value(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|m| m.key == key).map(|m| m.value.as_str())
    }

    pub fn bitstream(&self, name: &str) -> Option<&BitstreamRef> {
        self.bitstreams.iter().find(|b| b.name == name)
    }
}

/// A non-fatal problem reported alongside a result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Warning {
    /// Repository, item or field the warning is about.
    pub source: String,
    pub message: String,
}

impl Warning {
    pub fn new(source: impl Into<String>, message: impl Into<String>) -> Self {
        Warning {
            source: source.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.source, self.message)
    }
}
