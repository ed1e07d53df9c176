#![no_main]

use libfuzzer_sys::fuzz_target;
use odrk_core::wire::{decode_item, decode_search};

fuzz_target!(|data: &[u8]| {
    let _ = decode_search(data, "fuzz");
    let _ = decode_item(data, "fuzz");
});
