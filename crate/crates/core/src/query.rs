//! Keyword match semantics shared by the client and the mock repository.
//!
//! A query matches an item when every whitespace-separated token of the
//! lowercased query occurs as a substring of the lowercased concatenation of
//! the item's `dc.title`, `dc.subject` and `dc.description` values.

use crate::model::{ItemRecord, MetadataField};

pub const SEARCHABLE_KEYS: [&str; 3] = ["dc.title", "dc.subject", "dc.description"];

/// Lowercase tokens of a query; empty when the query is blank.
pub fn query_tokens(query: &str) -> Vec<String> {
    query.split_whitespace().map(str::to_lowercase).collect()
}

pub fn searchable_text(metadata: &[MetadataField]) -> String {
    let mut text = String::new();
    for m in metadata.iter().filter(|m| SEARCHABLE_KEYS.contains(&m.key.as_str())) {
        if !text.is_empty() {
            text.push(' ');
        }
        text.push_str(&m.value.to_lowercase());
    }
    text
}

pub fn matches(tokens: &[String], metadata: &[MetadataField]) -> bool {
    if tokens.is_empty() {
        return false;
    }
    let text = searchable_text(metadata);
    tokens.iter().all(|t| text.contains(t.as_str()))
}

/// Items matching `query`, in ascending id order.
pub fn match_items(query: &str, items: &[ItemRecord]) -> Vec<ItemRecord> {
    let tokens = query_tokens(query);
    let mut out: Vec<ItemRecord> = items
        .iter()
        .filter(|i| matches(&tokens, &i.metadata))
        .cloned()
        .collect();
    out.sort_by(|a, b| a.id.cmp(&b.id));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Handle;

    fn item(id: &str, title: &str) -> ItemRecord {
        ItemRecord {
            id: id.into(),
            handle: Handle::parse("1/1").unwrap(),
            server: "s".into(),
            metadata: vec![
                MetadataField::new("dc.title", title, Some("en")),
                MetadataField::new("dc.contributor.author", "Zed, Zoe", None),
            ],
            bitstreams: vec![],
        }
    }

    #[test]
    fn and_semantics_and_case() {
        let items = [item("1", "Temperature and Humidity Measurements in Gardens")];
        assert_eq!(match_items("temperature humidity", &items).len(), 1);
        assert_eq!(match_items("TEMPERATURE", &items).len(), 1);
        assert!(match_items("temperature zzz", &items).is_empty());
        assert!(match_items("   ", &items).is_empty());
    }

    #[test]
    fn only_searchable_keys_count() {
        let items = [item("1", "Soil")];
        assert!(match_items("zoe", &items).is_empty());
    }

    #[test]
    fn ordered_by_id() {
        let items = [item("b", "x"), item("a", "x"), item("c", "y")];
        let ids: Vec<_> = match_items("x", &items).into_iter().map(|i| i.id).collect();
        assert_eq!(ids, ["a", "b"]);
    }
}
