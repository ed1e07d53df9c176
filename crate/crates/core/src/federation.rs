//! Search several repositories at once and merge the answers.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::mpsc;
use std::thread;

use serde::Serialize;

use crate::client::RepoClient;
use crate::error::ClientError;
use crate::model::{ItemRecord, RepositoryEndpoint, Warning};
use crate::query;
use crate::render::aligned_table;
use crate::tally::{tally, ValueCount};
use crate::translation::{normalize_lang, Translator};

pub const RESULT_COLUMNS: [&str; 7] = ["id", "server", "language", "title", "author", "year", "files"];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FederationError {
    #[error("no repositories configured")]
    NoRepositories,
    #[error("empty query")]
    EmptyQuery,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FederatedResult {
    pub items: Vec<ItemRecord>,
    pub warnings: Vec<Warning>,
}

/// Query every endpoint concurrently. Unreachable or misbehaving endpoints
/// become warnings. Items are deduplicated on (server, id) and sorted by it,
/// so the result does not depend on which endpoint answers first.
pub fn federated_search(
    endpoints: &[RepositoryEndpoint],
    query: &str,
    translate_to: Option<(&Translator, &str)>,
) -> Result<FederatedResult, FederationError> {
    if endpoints.is_empty() {
        return Err(FederationError::NoRepositories);
    }
    if query::query_tokens(query).is_empty() {
        return Err(FederationError::EmptyQuery);
    }
    let answers = thread::scope(|s| {
        let (tx, rx) = mpsc::channel();
        for endpoint in endpoints {
            let tx = tx.clone();
            s.spawn(move || {
                let res = RepoClient::new(endpoint.clone()).search(query);
                let _ = tx.send((endpoint.name().to_string(), res));
            });
        }
        drop(tx);
        rx.into_iter().collect::<Vec<_>>()
    });
    let mut result = merge_answers(answers);
    if let Some((translator, target)) = translate_to {
        let (items, warnings) = translator.translate_records(&result.items, target);
        result.items = items;
        result.warnings.extend(warnings);
    }
    Ok(result)
}

/// Merge per-repository answers, in whatever order they arrived.
pub fn merge_answers(answers: Vec<(String, Result<Vec<ItemRecord>, ClientError>)>) -> FederatedResult {
    let mut merged: BTreeMap<(String, String), ItemRecord> = BTreeMap::new();
    let mut warnings = Vec::new();
    for (name, res) in answers {
        match res {
            Ok(items) => {
                for item in items {
                    merged.entry((item.server.clone(), item.id.clone())).or_insert(item);
                }
            }
            Err(e) => warnings.push(Warning::new(name, e.to_string())),
        }
    }
    warnings.sort_by(|a, b| a.source.cmp(&b.source).then_with(|| a.message.cmp(&b.message)));
    FederatedResult {
        items: merged.into_values().collect(),
        warnings,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResultRow {
    pub id: String,
    pub server: String,
    pub language: String,
    pub title: String,
    pub author: String,
    pub year: String,
    pub files: String,
}

impl ResultRow {
    fn cells(&self) -> Vec<String> {
        vec![
            self.id.clone(),
            self.server.clone(),
            self.language.clone(),
            self.title.clone(),
            self.author.clone(),
            self.year.clone(),
            self.files.clone(),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
}

/// "3 (csv:2, pdf:1)"; "0" for an item without files.
pub fn files_summary(item: &ItemRecord) -> String {
    if item.bitstreams.is_empty() {
        return "0".into();
    }
    let mut by_ext: BTreeMap<String, usize> = BTreeMap::new();
    for b in &item.bitstreams {
        *by_ext
            .entry(b.extension().unwrap_or_else(|| "none".into()))
            .or_default() += 1;
    }
    let parts: Vec<String> = by_ext.iter().map(|(e, n)| format!("{e}:{n}")).collect();
    format!("{} ({})", item.bitstreams.len(), parts.join(", "))
}

pub fn to_result_row(item: &ItemRecord) -> ResultRow {
    to_result_row_in(item, None)
}

/// Like [`to_result_row`], but shows a title in `language` when the item
/// has one (for example a translation).
pub fn to_result_row_in(item: &ItemRecord, language: Option<&str>) -> ResultRow {
    let languages: BTreeSet<&str> = item
        .metadata
        .iter()
        .filter_map(|m| m.language.as_deref())
        .filter(|l| !l.is_empty())
        .collect();
    let year = item
        .first_value("dc.date.issued")
        .map(|d| d.trim())
        .filter(|d| d.len() >= 4 && d.as_bytes()[..4].iter().all(u8::is_ascii_digit))
        .map(|d| d[..4].to_string())
        .unwrap_or_default();
    let titles = || item.metadata.iter().filter(|m| m.key == "dc.title");
    let preferred = language.and_then(|l| {
        let l = normalize_lang(l);
        titles().find(|m| m.language.as_deref().map(normalize_lang).as_deref() == Some(l.as_str()))
    });
    let title = preferred
        .or_else(|| titles().find(|m| m.translated_from.is_none()))
        .or_else(|| titles().next())
        .map(|m| m.value.clone())
        .unwrap_or_default();
    ResultRow {
        id: item.id.clone(),
        server: item.server.clone(),
        language: languages.into_iter().collect::<Vec<_>>().join(","),
        title,
        author: item.values("dc.contributor.author").collect::<Vec<_>>().join("; "),
        year,
        files: files_summary(item),
    }
}

pub fn to_result_table(items: &[ItemRecord]) -> ResultTable {
    to_result_table_in(items, None)
}

pub fn to_result_table_in(items: &[ItemRecord], language: Option<&str>) -> ResultTable {
    ResultTable {
        rows: items.iter().map(|i| to_result_row_in(i, language)).collect(),
    }
}

impl ResultTable {
    pub fn to_text(&self) -> String {
        let header: Vec<String> = RESULT_COLUMNS.iter().map(|c| c.to_uppercase()).collect();
        let rows: Vec<Vec<String>> = self.rows.iter().map(ResultRow::cells).collect();
        aligned_table(&header, &rows)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&RESULT_COLUMNS.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.cells().iter().map(|c| csv_cell(c)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.rows).expect("rows serialize")
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Tally of every value of `field_key` over `items`.
pub fn value_counts(items: &[ItemRecord], field_key: &str, top_k: Option<usize>) -> Vec<ValueCount> {
    tally(
        items
            .iter()
            .flat_map(|i| i.metadata.iter())
            .filter(|m| m.key == field_key)
            .map(|m| m.value.as_str()),
        top_k,
    )
}
