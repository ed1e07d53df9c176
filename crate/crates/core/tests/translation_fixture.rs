mod common;

use std::sync::Arc;

use odrk_core::translation::{GlossaryStub, TranslationCache, Translator, TRANSLATED_KEYS};

#[test]
fn german_fixture_to_english() {
    let fx = common::fixture("depositonce");
    let original = fx.items().iter().find(|i| i.id == "11020").unwrap().clone();
    let cache_dir = tempfile::tempdir().unwrap();
    let translator = Translator::new(
        Arc::new(GlossaryStub::bundled()),
        TranslationCache::on_disk(cache_dir.path()),
    );

    let (out, warnings) = translator.translate_records(std::slice::from_ref(&original), "en");
    assert!(warnings.is_empty(), "{warnings:?}");
    let item = &out[0];
    assert_eq!(&item.metadata[..original.metadata.len()], &original.metadata[..]);
    let added = &item.metadata[original.metadata.len()..];
    for key in TRANSLATED_KEYS {
        let german = original
            .metadata
            .iter()
            .filter(|m| m.key == key && m.language.as_deref() == Some("de"))
            .count();
        let translated = added.iter().filter(|m| m.key == key).count();
        assert_eq!(german, translated, "{key}");
        assert!(german > 0, "fixture lacks German {key}");
    }
    assert!(added
        .iter()
        .all(|m| m.translated_from.as_deref() == Some("de") && m.language.as_deref() == Some("en")));
    let title = added.iter().find(|m| m.key == "dc.title").unwrap();
    assert_eq!(title.value, "temperature and humidity in berlin gardens");
    assert!(translator.provider_calls() > 0);

    // a fresh translator on the same cache directory never reaches the provider
    let again = Translator::new(
        Arc::new(GlossaryStub::bundled()),
        TranslationCache::on_disk(cache_dir.path()),
    );
    let (second, _) = again.translate_records(std::slice::from_ref(&original), "en");
    assert_eq!(again.provider_calls(), 0);
    assert_eq!(second, out);
}
