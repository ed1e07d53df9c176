mod common;
mod oracle;

use common::{endpoint, fixture, serve};
use odrk_core::tabular::{
    preview_head, preview_head_from, preview_tail, preview_tail_from, tabular_delimiter, PreviewOptions,
};
use odrk_core::RepoClient;
use odrk_mockrepo::MockOptions;
use oracle::{full_parse_slices, table_text};
use proptest::prelude::*;

#[test]
fn fixture_tables_match_full_parse() {
    for set in ["depositonce", "refubium"] {
        let fx = fixture(set);
        for ranged in [true, false] {
            let server = serve(
                set,
                MockOptions {
                    range_supported: ranged,
                    ..MockOptions::default()
                },
            );
            let client = RepoClient::new(endpoint(set, &server));
            for item in fx.items() {
                for b in &item.bitstreams {
                    let Ok(delim) = tabular_delimiter(b) else { continue };
                    let bytes = fx.file_by_name(item.handle.as_str(), &b.name).unwrap();
                    for n in [1, 5, 50] {
                        let (header, head, tail) = full_parse_slices(bytes, delim, n);
                        let h = preview_head(&client, b, n).unwrap();
                        let t = preview_tail(&client, b, n).unwrap();
                        assert_eq!(h.header, header, "{} head header", b.name);
                        assert_eq!(h.rows, head, "{} head {n} ranged={ranged}", b.name);
                        assert_eq!(t.header, header, "{} tail header", b.name);
                        assert_eq!(t.rows, tail, "{} tail {n} ranged={ranged}", b.name);
                    }
                }
            }
        }
    }
}

#[test]
fn small_windows_on_embedded_newlines() {
    let fx = fixture("depositonce");
    let bytes = fx.file_by_name("11303/11020", "beobachtungen.csv").unwrap().to_vec();
    for w in [1, 2, 3, 7, 16, 64, 256] {
        let opts = PreviewOptions {
            initial_window: w,
            max_window: 1024,
        };
        for n in [1, 2, 5, 50] {
            let (_, head, tail) = full_parse_slices(&bytes, ',', n);
            assert_eq!(preview_head_from(&bytes, ',', n, &opts).unwrap().rows, head);
            assert_eq!(
                preview_tail_from(&bytes, ',', n, &opts).unwrap().rows,
                tail,
                "window {w}, n {n}"
            );
        }
    }
}

fn cell() -> impl Strategy<Value = String> {
    prop_oneof![
        "[a-z0-9]{0,6}",
        "[a-z ,\"]{0,5}",
        "[a-z]{0,3}\n[a-z]{0,3}",
        "[äöü€]{1,3}",
        Just("\r\n".to_string()),
    ]
}

fn table() -> impl Strategy<Value = (Vec<String>, Vec<Vec<String>>)> {
    (1usize..4).prop_flat_map(|w| {
        (
            prop::collection::vec("[a-z]{1,4}", w),
            prop::collection::vec(prop::collection::vec(cell(), w), 0..30),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn preview_equals_full_parse((header, rows) in table(), n in 1usize..12, w in 1u64..64, crlf in any::<bool>()) {
        let mut text = table_text(&header, &rows, ',');
        if crlf {
            text = text.replace("\"\n", "\"\r\n");
        }
        let bytes = text.into_bytes();
        let opts = PreviewOptions { initial_window: w, max_window: 256 };
        let (h, head, tail) = full_parse_slices(&bytes, ',', n);
        let got_head = preview_head_from(&bytes, ',', n, &opts).unwrap();
        let got_tail = preview_tail_from(&bytes, ',', n, &opts).unwrap();
        prop_assert_eq!(&got_head.header, &h);
        prop_assert_eq!(got_head.rows, head);
        prop_assert_eq!(got_tail.rows, tail);
        prop_assert_eq!(got_tail.truncated_source, rows.len() < n);
    }
}
