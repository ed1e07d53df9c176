#![no_main]

use libfuzzer_sys::fuzz_target;
use odrk_core::tabular::{convert, read_table, TableFormat};

fuzz_target!(|data: &[u8]| {
    let Some((&sel, body)) = data.split_first() else { return };
    let formats = [
        TableFormat::Csv,
        TableFormat::Tsv,
        TableFormat::Json,
        TableFormat::Ndjson,
    ];
    let from = formats[sel as usize % 4];
    let Ok(table) = read_table(body, from) else { return };
    // anything that was read must survive a trip through every format
    for to in formats {
        let Ok(out) = convert(&table, to) else {
            // only JSON targets refuse tables, for duplicate column names
            assert!(matches!(to, TableFormat::Json | TableFormat::Ndjson));
            continue;
        };
        if table.row_count() > 0 || matches!(to, TableFormat::Csv | TableFormat::Tsv) {
            let back = read_table(&out, to).expect("re-read");
            assert_eq!(back.header(), table.header());
            assert_eq!(back.records(), table.records());
        }
    }
});
