#![no_main]

use libfuzzer_sys::fuzz_target;
use odrk_core::model::Handle;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(h) = Handle::parse(text) {
        assert!(!h.dir_name().contains('/'));
        assert_eq!(Handle::parse(h.as_str()).ok().as_ref(), Some(&h));
    }
});
