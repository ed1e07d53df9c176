#![no_main]

use libfuzzer_sys::fuzz_target;
use odrk_core::translation::{GlossaryStub, TranslationProvider};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(g) = GlossaryStub::parse(text) {
        let _ = g.translate("temperatur und feuchtigkeit", "de", "en");
    }
});
