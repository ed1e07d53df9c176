use std::collections::HashMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use crate::client::sha256_hex;

type Key = (String, String, String, String);

/// Translation cache keyed by (provider, source, target, content hash).
///
/// Entries live in memory and, when a root is given, on disk under
/// `<root>/translations/<provider>/<source>-<target>/<hash>.txt`. Entries are
/// never removed or rewritten.
#[derive(Debug)]
pub struct TranslationCache {
    root: Option<PathBuf>,
    memory: Mutex<HashMap<Key, String>>,
}

impl TranslationCache {
    pub fn in_memory() -> Self {
        TranslationCache {
            root: None,
            memory: Mutex::new(HashMap::new()),
        }
    }

    pub fn on_disk(cache_root: impl Into<PathBuf>) -> Self {
        TranslationCache {
            root: Some(cache_root.into()),
            memory: Mutex::new(HashMap::new()),
        }
    }

    pub fn root(&self) -> Option<&Path> {
        self.root.as_deref()
    }

    fn path_for(&self, key: &Key) -> Option<PathBuf> {
        let (provider, source, target, hash) = key;
        self.root.as_ref().map(|r| {
            r.join("translations")
                .join(path_safe(provider))
                .join(format!("{}-{}", path_safe(source), path_safe(target)))
                .join(format!("{hash}.txt"))
        })
    }

    fn key(provider: &str, source: &str, target: &str, text: &str) -> Key {
        (
            provider.to_string(),
            source.to_string(),
            target.to_string(),
            sha256_hex(text.as_bytes()),
        )
    }

    pub fn get(&self, provider: &str, source: &str, target: &str, text: &str) -> Option<String> {
        let key = Self::key(provider, source, target, text);
        if let Some(hit) = self.memory.lock().expect("cache lock").get(&key) {
            return Some(hit.clone());
        }
        let path = self.path_for(&key)?;
        let value = fs::read_to_string(path).ok()?;
        self.memory.lock().expect("cache lock").insert(key, value.clone());
        Some(value)
    }

    pub fn put(&self, provider: &str, source: &str, target: &str, text: &str, translated: &str) -> io::Result<()> {
        let key = Self::key(provider, source, target, text);
        let path = self.path_for(&key);
        let mut memory = self.memory.lock().expect("cache lock");
        if memory.contains_key(&key) {
            return Ok(());
        }
        if let Some(path) = path {
            if !path.exists() {
                let dir = path.parent().expect("cache paths have a parent");
                fs::create_dir_all(dir)?;
                let tmp = dir.join(format!(".{}.{}.tmp", key.3, std::process::id()));
                fs::write(&tmp, translated)?;
                fs::rename(&tmp, &path)?;
            }
        }
        memory.insert(key, translated.to_string());
        Ok(())
    }
}

fn path_safe(s: &str) -> String {
    s.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '_' || c == '.' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_layout_and_reload() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TranslationCache::on_disk(dir.path());
        assert_eq!(cache.get("glossary", "de", "en", "Haus"), None);
        cache.put("glossary", "de", "en", "Haus", "house").unwrap();
        let expected = dir
            .path()
            .join("translations/glossary/de-en")
            .join(format!("{}.txt", sha256_hex(b"Haus")));
        assert_eq!(fs::read_to_string(expected).unwrap(), "house");

        let fresh = TranslationCache::on_disk(dir.path());
        assert_eq!(fresh.get("glossary", "de", "en", "Haus").as_deref(), Some("house"));
        assert_eq!(fresh.get("glossary", "de", "fr", "Haus"), None);
    }

    #[test]
    fn memory_only() {
        let cache = TranslationCache::in_memory();
        cache.put("p", "a", "b", "x", "y").unwrap();
        assert_eq!(cache.get("p", "a", "b", "x").as_deref(), Some("y"));
        // append-only: a second put does not replace
        cache.put("p", "a", "b", "x", "z").unwrap();
        assert_eq!(cache.get("p", "a", "b", "x").as_deref(), Some("y"));
    }
}
