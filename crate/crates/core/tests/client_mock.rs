mod common;

use std::fs;

use common::{endpoint, fixture, serve};
use odrk_core::client::{sha256_file, FileSelector, RepoClient, MANIFEST_FILE_NAME};
use odrk_core::model::ItemRecord;
use odrk_core::ClientError;
use odrk_mockrepo::MockOptions;
use proptest::prelude::*;

/// Token-AND substring match written out longhand.
fn brute_force(query: &str, items: &[ItemRecord]) -> Vec<String> {
    let mut ids = Vec::new();
    for item in items {
        let mut text = String::new();
        for m in &item.metadata {
            if m.key == "dc.title" || m.key == "dc.subject" || m.key == "dc.description" {
                text.push_str(&m.value.to_lowercase());
                text.push('\u{0}');
            }
        }
        if query.to_lowercase().split_whitespace().all(|t| text.contains(t)) {
            ids.push(item.id.clone());
        }
    }
    ids.sort();
    ids
}

#[test]
fn search_matches_oracle() {
    let server = serve("depositonce", MockOptions::default());
    let client = RepoClient::new(endpoint("depositonce", &server));
    for q in [
        "Temperature",
        "temperature humidity",
        "TEMPERATURE",
        "temperature zzz",
        "messungen",
        "wind",
    ] {
        let got: Vec<String> = client.search(q).unwrap().into_iter().map(|i| i.id).collect();
        assert_eq!(got, brute_force(q, server.fixture().items()), "query {q:?}");
    }
    let hits = client.search("Temperature and Humidity").unwrap();
    assert!(hits.iter().any(|i| i.handle.as_str() == "11303/10989.2"));
    assert!(hits.iter().all(|i| i.server == "depositonce"));
    assert!(matches!(client.search("   "), Err(ClientError::EmptyQuery)));
}

#[test]
fn item_lookup() {
    let server = serve("depositonce", MockOptions::default());
    let client = RepoClient::new(endpoint("depositonce", &server));
    let item = client.get_item("11303/10989.2").unwrap();
    assert_eq!(item.id, "10989");
    assert!(item.bitstream("name_of_file.csv").is_some());
    assert!(matches!(client.get_item("11303/99999"), Err(ClientError::NotFound(_))));
    assert!(matches!(
        client.get_item("not a handle"),
        Err(ClientError::InvalidHandle(_))
    ));
}

#[test]
fn ranges() {
    let server = serve("depositonce", MockOptions::default());
    let client = RepoClient::new(endpoint("depositonce", &server));
    let item = client.get_item("11303/10989.2").unwrap();
    let bs = item.bitstream("name_of_file.csv").unwrap();
    let full = server
        .fixture()
        .file_by_name("11303/10989.2", "name_of_file.csv")
        .unwrap()
        .to_vec();
    let total = full.len() as u64;

    let w = client.fetch_range(bs, 0, 10).unwrap();
    assert_eq!(w.bytes(), &full[..10]);
    assert_eq!(w.total_size(), total);

    let w = client.fetch_range(bs, total - 4, 100).unwrap();
    assert_eq!(w.bytes(), &full[full.len() - 4..]);
    assert!(w.reaches_end());

    let w = client.fetch_range(bs, total, 10).unwrap();
    assert!(w.is_empty() && w.reaches_end());

    assert!(matches!(
        client.fetch_range(bs, total + 1, 10),
        Err(ClientError::InvalidRange(_))
    ));
    assert!(matches!(
        client.fetch_range(bs, 0, 0),
        Err(ClientError::InvalidRange(_))
    ));

    let mut missing = bs.clone();
    missing.retrieve_url = "/api/bitstreams/nope/retrieve".into();
    assert!(matches!(
        client.fetch_range(&missing, 0, 1),
        Err(ClientError::NoSuchFile(_))
    ));
}

#[test]
fn range_unsupported() {
    let server = serve(
        "depositonce",
        MockOptions {
            range_supported: false,
            ..MockOptions::default()
        },
    );
    let ep = endpoint("depositonce", &server);
    let item = RepoClient::new(ep.clone()).get_item("11303/10989.2").unwrap();
    let bs = item.bitstream("name_of_file.csv").unwrap();
    let full = server
        .fixture()
        .file_by_name("11303/10989.2", "name_of_file.csv")
        .unwrap();

    let w = RepoClient::new(ep.clone()).fetch_range(bs, 5, 20).unwrap();
    assert_eq!(w.bytes(), &full[5..25]);

    let strict = RepoClient::new(ep.with_range_fallback(false));
    assert!(matches!(
        strict.fetch_range(bs, 5, 20),
        Err(ClientError::RangeUnsupported)
    ));
}

#[test]
fn unreachable() {
    let server = serve(
        "depositonce",
        MockOptions {
            fail_all: true,
            ..MockOptions::default()
        },
    );
    let client = RepoClient::new(endpoint("depositonce", &server));
    match client.search("temperature") {
        Err(ClientError::Unreachable { repository, .. }) => assert_eq!(repository, "depositonce"),
        other => panic!("expected Unreachable, got {other:?}"),
    }
}

// Reference values from `sha256sum fixtures/depositonce/files/*`.
const NAME_OF_FILE_SHA256: &str = "1496ca6debfa436a4321974bed650ae1b1f8a40f3a6b22536c382443f63f2adc";
const README_PDF_SHA256: &str = "4715546764ee21bf77fbb6c5b1fed5e42a8af60c23e0fabf8923561aa1a0caff";

#[test]
fn download_with_manifest() {
    let server = serve("depositonce", MockOptions::default());
    let client = RepoClient::new(endpoint("depositonce", &server));
    let item = client.get_item("11303/10989.2").unwrap();
    let out = tempfile::tempdir().unwrap();

    let one = client
        .download(&item, &FileSelector::One("name_of_file.csv".into()), out.path(), false)
        .unwrap();
    assert_eq!(one.entries.len(), 1);
    assert_eq!(one.entries[0].checksum, NAME_OF_FILE_SHA256);
    let path = out.path().join("11303_10989.2").join("name_of_file.csv");
    assert_eq!(sha256_file(&path).unwrap().0, NAME_OF_FILE_SHA256);

    assert!(matches!(
        client.download(&item, &FileSelector::One("name_of_file.csv".into()), out.path(), false),
        Err(ClientError::FileExists(_))
    ));
    assert!(matches!(
        client.download(&item, &FileSelector::One("absent.csv".into()), out.path(), false),
        Err(ClientError::NoSuchFile(_))
    ));

    let all = client.download(&item, &FileSelector::All, out.path(), true).unwrap();
    assert_eq!(all.entries.len(), 3);
    let pdf = all.entries.iter().find(|e| e.name == "readme.pdf").unwrap();
    assert_eq!(pdf.checksum, README_PDF_SHA256);
    assert!(all.verify().unwrap().is_empty());

    let text = fs::read_to_string(out.path().join("11303_10989.2").join(MANIFEST_FILE_NAME)).unwrap();
    assert!(text.contains(&format!("{NAME_OF_FILE_SHA256}  ")));

    fs::write(&path, b"tampered").unwrap();
    assert_eq!(all.verify().unwrap(), vec!["name_of_file.csv".to_string()]);
}

#[test]
fn every_fixture_file_downloads_intact() {
    for set in ["depositonce", "refubium"] {
        let fx = fixture(set);
        let server = serve(set, MockOptions::default());
        let client = RepoClient::new(endpoint(set, &server));
        for item in fx.items() {
            for b in &item.bitstreams {
                let body = client.fetch_all(b).unwrap();
                assert_eq!(body, fx.file_by_name(item.handle.as_str(), &b.name).unwrap());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn windows_concatenate_to_file(chunk in 1u64..5000, ranged in any::<bool>()) {
        let server = serve("depositonce", MockOptions { range_supported: ranged, ..MockOptions::default() });
        let client = RepoClient::new(endpoint("depositonce", &server));
        let item = client.get_item("11303/10989.2").unwrap();
        let bs = item.bitstream("readings_2019.csv").unwrap();
        let full = server.fixture().file_by_name("11303/10989.2", "readings_2019.csv").unwrap();
        let mut joined = Vec::new();
        let mut offset = 0;
        loop {
            let w = client.fetch_range(bs, offset, chunk).unwrap();
            prop_assert_eq!(w.offset(), offset);
            joined.extend_from_slice(w.bytes());
            offset = w.end();
            if w.reaches_end() {
                break;
            }
        }
        prop_assert_eq!(joined.as_slice(), full);
    }
}

#[test]
fn dspace_like_paths_are_configurable() {
    use odrk_core::model::{Flavor, RepositoryEndpoint};
    let server = serve("refubium", MockOptions::default());
    let stock = RepositoryEndpoint::new("r", &server.base_url(), Flavor::DspaceLike).unwrap();
    assert!(RepoClient::new(stock.clone()).get_item("188/2001").is_err());
    let mapped = stock
        .with_search_path("/api/search?query={query}")
        .with_item_path("/api/items/{handle}");
    let client = RepoClient::new(mapped);
    assert_eq!(client.get_item("188/2001").unwrap().id, "2001");
    assert_eq!(
        client.search("temperature").unwrap().len(),
        brute_force("temperature", fixture("refubium").items()).len()
    );
}
