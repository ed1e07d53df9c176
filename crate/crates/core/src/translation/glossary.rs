use std::collections::{BTreeSet, HashMap};

use super::{normalize_lang, TranslationError, TranslationProvider};

/// The glossary shipped with the crate.
pub const BUNDLED_GLOSSARY: &str = include_str!("../../data/glossary.tsv");

/// Offline, deterministic provider backed by a phrase glossary.
///
/// Glossary file: one entry per line, tab-separated
/// `source-lang, target-lang, source phrase, target phrase`. Blank lines and
/// lines starting with `#` are ignored. Source phrases are matched
/// case-insensitively on word boundaries, longest phrase first; words that
/// match nothing are copied unchanged.
#[derive(Debug, Clone)]
pub struct GlossaryStub {
    name: String,
    /// (source, target) -> lowercase source phrase (as words) -> target phrase
    entries: HashMap<(String, String), HashMap<Vec<String>, String>>,
    longest: usize,
}

impl GlossaryStub {
    pub fn parse(text: &str) -> Result<GlossaryStub, TranslationError> {
        let mut entries: HashMap<(String, String), HashMap<Vec<String>, String>> = HashMap::new();
        let mut longest = 0;
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |why: &str| TranslationError::Glossary(format!("line {}: {why}", n + 1));
            let cols: Vec<&str> = line.split('\t').collect();
            let [src, tgt, phrase, target] = cols[..] else {
                return Err(bad("expected 4 tab-separated columns"));
            };
            let (src, tgt) = (normalize_lang(src), normalize_lang(tgt));
            if src.is_empty() || tgt.is_empty() {
                return Err(bad("empty language code"));
            }
            if src == tgt {
                return Err(bad("source and target language are the same"));
            }
            let words = words_lower(phrase);
            if words.is_empty() {
                return Err(bad("empty source phrase"));
            }
            longest = longest.max(words.len());
            entries
                .entry((src, tgt))
                .or_default()
                .insert(words, target.trim().to_string());
        }
        Ok(GlossaryStub {
            name: "glossary".into(),
            entries,
            longest,
        })
    }

    pub fn bundled() -> GlossaryStub {
        GlossaryStub::parse(BUNDLED_GLOSSARY).expect("bundled glossary is valid")
    }

    /// Declared (source, target) pairs, sorted.
    pub fn pairs(&self) -> BTreeSet<(String, String)> {
        self.entries.keys().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.entries.values().map(HashMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn words_lower(s: &str) -> Vec<String> {
    s.split_whitespace().map(str::to_lowercase).collect()
}

/// Alternating runs: `(is_word, text)`. Words are maximal runs of
/// alphanumeric characters.
fn segments(text: &str) -> Vec<(bool, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut current: Option<bool> = None;
    for (i, c) in text.char_indices() {
        let is_word = c.is_alphanumeric();
        match current {
            Some(w) if w == is_word => {}
            Some(w) => {
                out.push((w, &text[start..i]));
                start = i;
                current = Some(is_word);
            }
            None => current = Some(is_word),
        }
    }
    if let Some(w) = current {
        out.push((w, &text[start..]));
    }
    out
}

impl TranslationProvider for GlossaryStub {
    fn name(&self) -> &str {
        &self.name
    }

    fn supports(&self, source: &str, target: &str) -> bool {
        self.entries
            .contains_key(&(normalize_lang(source), normalize_lang(target)))
    }

    fn translate(&self, text: &str, source: &str, target: &str) -> Result<String, TranslationError> {
        let table = self
            .entries
            .get(&(normalize_lang(source), normalize_lang(target)))
            .ok_or_else(|| TranslationError::UnsupportedPair {
                source_lang: source.to_string(),
                target_lang: target.to_string(),
            })?;
        let segs = segments(text);
        let mut out = String::with_capacity(text.len());
        let mut i = 0;
        while i < segs.len() {
            let (is_word, s) = segs[i];
            if !is_word {
                out.push_str(s);
                i += 1;
                continue;
            }
            // words at segs[i], segs[i+2], ... joined by whitespace-only gaps
            let mut phrase = vec![s.to_lowercase()];
            let mut best: Option<(usize, &String)> = table.get(&phrase).map(|t| (i, t));
            let mut j = i;
            while phrase.len() < self.longest && j + 2 < segs.len() && segs[j + 1].1.chars().all(char::is_whitespace) {
                j += 2;
                phrase.push(segs[j].1.to_lowercase());
                if let Some(t) = table.get(&phrase) {
                    best = Some((j, t));
                }
            }
            match best {
                Some((end, translated)) => {
                    out.push_str(translated);
                    i = end + 1;
                }
                None => {
                    out.push_str(s);
                    i += 1;
                }
            }
        }
        Ok(out)
    }
}
