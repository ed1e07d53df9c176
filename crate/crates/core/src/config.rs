//! Repository configuration file.
//!
//! ```text
//! # comment
//! [repository]
//! name = depositonce
//! base_url = https://depositonce.example.org
//! flavor = dspace-like
//! timeout_seconds = 30
//!
//! [settings]
//! cache_root = /var/cache/odrk
//! default_format = table
//! ```
//!
//! Every `[repository]` block starts a new repository. Optional repository
//! keys: `auth_token`, `range_fallback` (true/false), `search_path`,
//! `item_path`.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::model::{Flavor, RepositoryEndpoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Table,
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "table" | "text" => Ok(OutputFormat::Table),
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!("unknown output format {other:?} (expected table, json or csv)")),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Table => "table",
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub repositories: Vec<RepositoryEndpoint>,
    pub cache_root: Option<PathBuf>,
    pub default_format: OutputFormat,
}

#[derive(Default)]
struct RepoBlock {
    line: usize,
    name: Option<String>,
    base_url: Option<String>,
    flavor: Option<Flavor>,
    timeout: Option<f64>,
    auth_token: Option<String>,
    range_fallback: Option<bool>,
    search_path: Option<String>,
    item_path: Option<String>,
}

enum Section {
    None,
    Repository,
    Settings,
}

fn parse_bool(v: &str) -> Option<bool> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Some(true),
        "false" | "no" | "off" | "0" => Some(false),
        _ => None,
    }
}

impl CliConfig {
    pub fn parse(text: &str) -> Result<CliConfig, ConfigError> {
        let mut blocks: Vec<RepoBlock> = Vec::new();
        let mut cache_root = None;
        let mut default_format = OutputFormat::default();
        let mut section = Section::None;
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let err = |message: String| ConfigError { line, message };
            let l = raw.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            if l.starts_with('[') {
                section = match l {
                    "[repository]" => {
                        blocks.push(RepoBlock {
                            line,
                            ..RepoBlock::default()
                        });
                        Section::Repository
                    }
                    "[settings]" => Section::Settings,
                    other => return Err(err(format!("unknown section {other}"))),
                };
                continue;
            }
            let (key, value) = l
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| err(format!("expected key = value, got {l:?}")))?;
            match section {
                Section::None => return Err(err(format!("{key} outside of a section"))),
                Section::Settings => match key {
                    "cache_root" => cache_root = Some(PathBuf::from(value)),
                    "default_format" => default_format = value.parse().map_err(err)?,
                    other => return Err(err(format!("unknown settings key {other:?}"))),
                },
                Section::Repository => {
                    let b = blocks.last_mut().expect("repository section has a block");
                    match key {
                        "name" => b.name = Some(value.to_string()),
                        "base_url" => b.base_url = Some(value.to_string()),
                        "flavor" => {
                            b.flavor =
                                Some(Flavor::parse(value).ok_or_else(|| err(format!("unknown flavor {value:?}")))?)
                        }
                        "timeout_seconds" => {
                            b.timeout = Some(
                                value
                                    .parse::<f64>()
                                    .ok()
                                    .filter(|t| *t > 0.0 && t.is_finite())
                                    .ok_or_else(|| {
                                        err(format!("timeout_seconds must be a positive number, got {value:?}"))
                                    })?,
                            )
                        }
                        "auth_token" => b.auth_token = Some(value.to_string()),
                        "range_fallback" => {
                            b.range_fallback =
                                Some(parse_bool(value).ok_or_else(|| {
                                    err(format!("range_fallback must be true or false, got {value:?}"))
                                })?)
                        }
                        "search_path" => b.search_path = Some(value.to_string()),
                        "item_path" => b.item_path = Some(value.to_string()),
                        other => return Err(err(format!("unknown repository key {other:?}"))),
                    }
                }
            }
        }

        let mut repositories: Vec<RepositoryEndpoint> = Vec::new();
        for b in blocks {
            let err = |message: String| ConfigError { line: b.line, message };
            let name = b.name.ok_or_else(|| err("repository without name".into()))?;
            if repositories.iter().any(|r| r.name() == name) {
                return Err(err(format!("repository {name:?} defined twice")));
            }
            let base = b
                .base_url
                .ok_or_else(|| err(format!("repository {name:?} has no base_url")))?;
            let mut ep = RepositoryEndpoint::new(&name, &base, b.flavor.unwrap_or(Flavor::Fixture))
                .map_err(|e| err(e.to_string()))?;
            if let Some(t) = b.timeout {
                ep = ep.with_timeout_seconds(t).map_err(|e| err(e.to_string()))?;
            }
            if let Some(tok) = b.auth_token {
                ep = ep.with_auth_token(tok);
            }
            if let Some(f) = b.range_fallback {
                ep = ep.with_range_fallback(f);
            }
            if let Some(p) = b.search_path {
                ep = ep.with_search_path(p);
            }
            if let Some(p) = b.item_path {
                ep = ep.with_item_path(p);
            }
            repositories.push(ep);
        }
        Ok(CliConfig {
            repositories,
            cache_root,
            default_format,
        })
    }

    /// Repositories named in `names`, in that order.
    pub fn select(&self, names: &[&str]) -> Result<Vec<RepositoryEndpoint>, String> {
        names
            .iter()
            .map(|n| {
                self.repositories
                    .iter()
                    .find(|r| r.name() == *n)
                    .cloned()
                    .ok_or_else(|| format!("no repository named {n:?} in the configuration"))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# two repositories
[repository]
name = a
base_url = http://127.0.0.1:1
flavor = fixture

[repository]
name = b
base_url = http://127.0.0.1:2/rest
flavor = dspace-like
timeout_seconds = 5
range_fallback = false

[settings]
default_format = json
cache_root = /tmp/c
";

    #[test]
    fn parses_sample() {
        let c = CliConfig::parse(SAMPLE).unwrap();
        assert_eq!(c.repositories.len(), 2);
        assert_eq!(c.repositories[1].flavor(), Flavor::DspaceLike);
        assert!(!c.repositories[1].range_fallback());
        assert_eq!(c.repositories[1].timeout().as_secs(), 5);
        assert_eq!(c.default_format, OutputFormat::Json);
        assert_eq!(c.select(&["b"]).unwrap()[0].name(), "b");
        assert!(c.select(&["zz"]).is_err());
    }

    #[test]
    fn errors_carry_lines() {
        let e = CliConfig::parse("[repository]\nname = a\nbogus = 1\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = CliConfig::parse("name = a\n").unwrap_err();
        assert_eq!(e.line, 1);
        let dup = "[repository]\nname=a\nbase_url=http://x\n[repository]\nname=a\nbase_url=http://y\n";
        assert_eq!(CliConfig::parse(dup).unwrap_err().line, 4);
        assert!(CliConfig::parse("[repository]\nname=a\nbase_url=http://x\ntimeout_seconds=0\n").is_err());
    }
}
