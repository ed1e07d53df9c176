//! Metadata translation behind a pluggable provider.
//!
//! Translated values are appended next to the originals, tagged with the
//! target language and `translated_from`; originals are never touched.

mod cache;
mod glossary;

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

pub use cache::TranslationCache;
pub use glossary::{GlossaryStub, BUNDLED_GLOSSARY};

use crate::model::{ItemRecord, MetadataField, Warning};

/// Keys whose values are translated.
pub const TRANSLATED_KEYS: [&str; 3] = ["dc.title", "dc.subject", "dc.description"];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TranslationError {
    #[error("translation from {source_lang:?} to {target_lang:?} is not supported")]
    UnsupportedPair { source_lang: String, target_lang: String },

    #[error("nothing to translate")]
    EmptyText,

    #[error("invalid glossary: {0}")]
    Glossary(String),

    #[error("translation provider failed: {0}")]
    Provider(String),
}

/// A machine-translation backend. Implementations must be callable from
/// several threads at once.
pub trait TranslationProvider: Send + Sync {
    fn name(&self) -> &str;

    fn supports(&self, source: &str, target: &str) -> bool;

    fn translate(&self, text: &str, source: &str, target: &str) -> Result<String, TranslationError>;
}

/// Language codes compare on their primary subtag, lowercased:
/// `de_DE`, `de-DE` and `DE` are all `de`.
pub fn normalize_lang(code: &str) -> String {
    code.trim().split(['-', '_']).next().unwrap_or("").to_ascii_lowercase()
}

/// Translate one text. Identity pairs return the input verbatim.
pub fn translate_text(
    provider: &dyn TranslationProvider,
    text: &str,
    source: &str,
    target: &str,
) -> Result<String, TranslationError> {
    if text.is_empty() {
        return Err(TranslationError::EmptyText);
    }
    if normalize_lang(source) == normalize_lang(target) {
        return Ok(text.to_string());
    }
    if !provider.supports(source, target) {
        return Err(TranslationError::UnsupportedPair {
            source_lang: source.to_string(),
            target_lang: target.to_string(),
        });
    }
    provider.translate(text, source, target)
}

/// A provider with a cache in front of it. Counts the calls that actually
/// reach the provider.
pub struct Translator {
    provider: Arc<dyn TranslationProvider>,
    cache: TranslationCache,
    provider_calls: AtomicU64,
}

impl Translator {
    pub fn new(provider: Arc<dyn TranslationProvider>, cache: TranslationCache) -> Self {
        Translator {
            provider,
            cache,
            provider_calls: AtomicU64::new(0),
        }
    }

    pub fn provider(&self) -> &dyn TranslationProvider {
        self.provider.as_ref()
    }

    /// Calls that missed the cache and went to the provider.
    pub fn provider_calls(&self) -> u64 {
        self.provider_calls.load(Ordering::SeqCst)
    }

    pub fn reset_provider_calls(&self) {
        self.provider_calls.store(0, Ordering::SeqCst);
    }

    pub fn translate(&self, text: &str, source: &str, target: &str) -> Result<String, TranslationError> {
        let (src, tgt) = (normalize_lang(source), normalize_lang(target));
        if text.is_empty() {
            return Err(TranslationError::EmptyText);
        }
        if src == tgt {
            return Ok(text.to_string());
        }
        let name = self.provider.name();
        if let Some(hit) = self.cache.get(name, &src, &tgt, text) {
            return Ok(hit);
        }
        self.provider_calls.fetch_add(1, Ordering::SeqCst);
        let translated = translate_text(self.provider.as_ref(), text, &src, &tgt)?;
        self.cache
            .put(name, &src, &tgt, text, &translated)
            .map_err(|e| TranslationError::Provider(format!("cache write failed: {e}")))?;
        Ok(translated)
    }

    /// Append translations of title, subject and description fields whose
    /// language differs from `target`. Problems become warnings; the batch
    /// always completes.
    pub fn translate_records(&self, items: &[ItemRecord], target: &str) -> (Vec<ItemRecord>, Vec<Warning>) {
        let target_norm = normalize_lang(target);
        let mut warnings = Vec::new();
        let out = items
            .iter()
            .map(|item| {
                let mut item = item.clone();
                let mut added = Vec::new();
                for field in item
                    .metadata
                    .iter()
                    .filter(|m| TRANSLATED_KEYS.contains(&m.key.as_str()))
                {
                    if field.translated_from.is_some() {
                        continue;
                    }
                    let source = match field.language.as_deref() {
                        Some(l) if !normalize_lang(l).is_empty() => l,
                        _ => {
                            warnings.push(Warning::new(
                                format!("{}/{} {}", item.server, item.handle, field.key),
                                "no language code; not translated",
                            ));
                            continue;
                        }
                    };
                    let source_norm = normalize_lang(source);
                    if source_norm == target_norm || field.value.is_empty() {
                        continue;
                    }
                    let already = item.metadata.iter().any(|m| {
                        m.key == field.key
                            && m.translated_from.as_deref().map(normalize_lang).as_deref() == Some(source_norm.as_str())
                            && m.language.as_deref().map(normalize_lang).as_deref() == Some(target_norm.as_str())
                    });
                    if already {
                        continue;
                    }
                    match self.translate(&field.value, source, target) {
                        Ok(value) => added.push(MetadataField {
                            key: field.key.clone(),
                            value,
                            language: Some(target.to_string()),
                            translated_from: Some(source.to_string()),
                        }),
                        Err(e) => warnings.push(Warning::new(
                            format!("{}/{} {}", item.server, item.handle, field.key),
                            e.to_string(),
                        )),
                    }
                }
                item.metadata.extend(added);
                item
            })
            .collect();
        (out, warnings)
    }
}
