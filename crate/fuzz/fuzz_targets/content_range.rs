#![no_main]

use libfuzzer_sys::fuzz_target;
use odrk_core::client::parse_content_range;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_content_range(text);
    }
});
