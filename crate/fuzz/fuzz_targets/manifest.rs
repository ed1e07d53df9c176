#![no_main]

use std::path::Path;

use libfuzzer_sys::fuzz_target;
use odrk_core::client::DownloadManifest;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = DownloadManifest::parse(text, Path::new("/nonexistent"));
    }
});
