use std::path::{Path, PathBuf};

use odrk_cli::{dispatch, Env, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};
use odrk_mockrepo::{FixtureSet, MockOptions, MockServer};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn serve(name: &str, options: MockOptions) -> MockServer {
    MockServer::start(FixtureSet::load(root().join("fixtures").join(name)).unwrap(), options).unwrap()
}

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run_with(env: &Env, args: &[&str]) -> Run {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("odrk").chain(args.iter().copied());
    let code = dispatch(argv, env, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

/// Two live mock repositories plus a config file naming them.
struct Setup {
    _servers: Vec<MockServer>,
    dir: tempfile::TempDir,
    env: Env,
}

impl Setup {
    fn new(refubium: MockOptions) -> Setup {
        let a = serve("depositonce", MockOptions::default());
        let b = serve("refubium", refubium);
        let dir = tempfile::tempdir().unwrap();
        let config = dir.path().join("repos.conf");
        let text = format!(
            "[settings]\ndefault_format = table\n\n[repository]\nname = depositonce\nbase_url = {}\n\n[repository]\nname = refubium\nbase_url = {}\ntimeout_seconds = 3\n",
            a.base_url(),
            b.base_url()
        );
        std::fs::write(&config, text).unwrap();
        Setup {
            _servers: vec![a, b],
            env: Env {
                config: Some(config),
                cache: Some(dir.path().join("cache")),
            },
            dir,
        }
    }

    fn run(&self, args: &[&str]) -> Run {
        run_with(&self.env, args)
    }

    fn path(&self) -> &Path {
        self.dir.path()
    }
}

fn golden(name: &str, got: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, got).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(got, want, "{name}");
}

#[test]
fn usage_errors_exit_2_with_synopsis() {
    let env = Env::default();
    for args in [
        &["bogus"][..],
        &[],
        &["preview", "1/2", "a.csv"],
        &["preview", "1/2", "a.csv", "--head", "1", "--tail", "1"],
        &["preview", "1/2", "a.csv", "--head", "many"],
        &["convert", "x.csv", "--to", "xml"],
        &["search", "x", "--format", "yaml"],
    ] {
        let r = run_with(&env, args);
        assert_eq!(r.code, EXIT_USAGE, "{args:?}: {}", r.err);
        assert!(r.out.is_empty());
        assert!(r.err.to_lowercase().contains("usage"), "{args:?}: {}", r.err);
    }
}

#[test]
fn help_and_version() {
    let r = run_with(&Env::default(), &["--help"]);
    assert_eq!(r.code, EXIT_OK);
    for cmd in [
        "search",
        "datasets",
        "preview",
        "describe",
        "download",
        "convert",
        "value-counts",
        "usability",
    ] {
        assert!(r.out.contains(cmd), "{cmd} missing from help");
    }
    let r = run_with(&Env::default(), &["--version"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.starts_with("odrk "));
}

#[test]
fn missing_config_is_a_runtime_error() {
    let r = run_with(&Env::default(), &["search", "x"]);
    assert_eq!(r.code, EXIT_FAILURE);
    assert!(r.err.contains("ODRK_CONFIG"), "{}", r.err);
    let env = Env {
        config: Some("/nonexistent/odrk.conf".into()),
        cache: None,
    };
    assert_eq!(run_with(&env, &["search", "x"]).code, EXIT_FAILURE);
}

#[test]
fn config_flag_overrides_environment() {
    let s = Setup::new(MockOptions::default());
    let env = Env {
        config: Some("/nonexistent/odrk.conf".into()),
        cache: None,
    };
    let config = s.env.config.as_ref().unwrap().to_str().unwrap();
    let r = run_with(&env, &["--config", config, "datasets", "11303/10989.2"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
}

#[test]
fn json_output_parses_for_every_command() {
    let s = Setup::new(MockOptions::default());
    let study = root().join("fixtures/study");
    let sessions = study.join("sessions.csv");
    let sus = study.join("sus.csv");
    let cases: Vec<Vec<&str>> = vec![
        vec!["search", "temperature", "--format", "json"],
        vec!["search", "Temperatur", "--translate-to", "en", "--format", "json"],
        vec!["datasets", "11303/10989.2", "--format", "json"],
        vec![
            "preview",
            "11303/10989.2",
            "name_of_file.csv",
            "--head",
            "3",
            "--format",
            "json",
        ],
        vec![
            "preview",
            "11303/10989.2",
            "name_of_file.csv",
            "--tail",
            "3",
            "--format",
            "json",
        ],
        vec!["describe", "11303/10989.2", "name_of_file.csv", "--format", "json"],
        vec![
            "value-counts",
            "temperature",
            "--field",
            "dc.subject",
            "--format",
            "json",
        ],
        vec![
            "usability",
            sessions.to_str().unwrap(),
            "--sus",
            sus.to_str().unwrap(),
            "--format",
            "json",
        ],
    ];
    for args in cases {
        let r = s.run(&args);
        assert_eq!(r.code, EXIT_OK, "{args:?}: {}", r.err);
        serde_json::from_str::<serde_json::Value>(&r.out).unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", r.out));
    }
}

#[test]
fn translated_search_shows_english_title() {
    let s = Setup::new(MockOptions::default());
    let r = s.run(&["search", "Temperatur", "--translate-to", "en", "--repos", "depositonce"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    golden("search_translated.txt", &r.out);
    // the second run is served from the cache directory
    assert_eq!(
        s.run(&["search", "Temperatur", "--translate-to", "en", "--repos", "depositonce"])
            .out,
        r.out
    );
    assert!(s.path().join("cache").exists());
}

#[test]
fn unreachable_repository_is_a_warning() {
    let s = Setup::new(MockOptions {
        fail_all: true,
        ..MockOptions::default()
    });
    let r = s.run(&["search", "temperature", "--format", "csv"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.err.starts_with("warning: refubium"), "{}", r.err);
    assert!(r.out.lines().skip(1).all(|l| l.contains(",depositonce,")), "{}", r.out);
}

#[test]
fn unknown_repository_name() {
    let s = Setup::new(MockOptions::default());
    let r = s.run(&["search", "x", "--repos", "nowhere"]);
    assert_eq!(r.code, EXIT_USAGE, "{}", r.err);
}

#[test]
fn item_lookup_across_repositories() {
    let s = Setup::new(MockOptions::default());
    let r = s.run(&["datasets", "188/2003", "--format", "csv"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!(r.out.starts_with("name,size_bytes,media_type\n"));
    let r = s.run(&["datasets", "99/99"]);
    assert_eq!(r.code, EXIT_FAILURE);
    assert!(r.err.contains("99/99"));
    assert_eq!(s.run(&["datasets", "not-a-handle"]).code, EXIT_FAILURE);
    assert_eq!(
        s.run(&["preview", "11303/10989.2", "missing.csv", "--head", "2"]).code,
        EXIT_FAILURE
    );
    assert_eq!(
        s.run(&["preview", "11303/10989.2", "readme.pdf", "--head", "2"]).code,
        EXIT_FAILURE
    );
}

#[test]
fn zero_rows_is_a_usage_error() {
    let s = Setup::new(MockOptions::default());
    assert_eq!(
        s.run(&["preview", "11303/10989.2", "name_of_file.csv", "--head", "0"])
            .code,
        EXIT_USAGE
    );
}

#[test]
fn download_respects_overwrite() {
    let s = Setup::new(MockOptions::default());
    let out = s.path().join("data");
    std::fs::create_dir(&out).unwrap();
    let out = out.to_str().unwrap();
    let r = s.run(&["download", "11303/10989.2", "name_of_file.csv", "--out", out]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert_eq!(
        r.out.lines().next().unwrap(),
        "1496ca6debfa436a4321974bed650ae1b1f8a40f3a6b22536c382443f63f2adc  1364  11303_10989.2/name_of_file.csv"
    );
    assert_eq!(
        s.run(&["download", "11303/10989.2", "name_of_file.csv", "--out", out])
            .code,
        EXIT_FAILURE
    );
    assert_eq!(
        s.run(&[
            "download",
            "11303/10989.2",
            "name_of_file.csv",
            "--out",
            out,
            "--overwrite"
        ])
        .code,
        EXIT_OK
    );
    let missing = s.path().join("absent");
    assert_eq!(
        s.run(&["download", "11303/10989.2", "--out", missing.to_str().unwrap()])
            .code,
        EXIT_FAILURE
    );
}

#[test]
fn convert_to_file_and_back() {
    let s = Setup::new(MockOptions::default());
    let src = s.path().join("t.csv");
    std::fs::write(&src, "a,b\n1,\"x\ny\"\n2,\n").unwrap();
    let json = s.path().join("t.json");
    let r = s.run(&[
        "convert",
        src.to_str().unwrap(),
        "--to",
        "json",
        "--out",
        json.to_str().unwrap(),
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!(r.out.is_empty());
    assert!(!std::fs::read(&json).unwrap().ends_with(b"\n"));
    let r = s.run(&["convert", json.to_str().unwrap(), "--to", "csv"]);
    assert_eq!(r.out, "a,b\n1,\"x\ny\"\n2,\n");
    let r = s.run(&["convert", s.path().join("t.xls").to_str().unwrap(), "--to", "csv"]);
    assert_eq!(r.code, EXIT_USAGE);
    let r = s.run(&["convert", s.path().join("none.csv").to_str().unwrap(), "--to", "json"]);
    assert_eq!(r.code, EXIT_FAILURE);
}

#[test]
fn value_counts_table() {
    let s = Setup::new(MockOptions::default());
    let r = s.run(&[
        "value-counts",
        "temperature",
        "--field",
        "dc.contributor.author",
        "--top",
        "3",
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    golden("value_counts.txt", &r.out);
    assert_eq!(
        s.run(&["value-counts", "x", "--field", "dc.title", "--top", "0"]).code,
        EXIT_USAGE
    );
}

#[test]
fn usability_report() {
    let study = root().join("fixtures/study");
    let r = run_with(
        &Env::default(),
        &[
            "usability",
            study.join("sessions.csv").to_str().unwrap(),
            "--sus",
            study.join("sus.csv").to_str().unwrap(),
        ],
    );
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    golden("usability.txt", &r.out);
    let bad = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(bad.path(), "participant,task,success,time_seconds\nP1,1,1,0\n").unwrap();
    assert_eq!(
        run_with(&Env::default(), &["usability", bad.path().to_str().unwrap()]).code,
        EXIT_FAILURE
    );
}

#[test]
fn example_config_parses() {
    let text = std::fs::read_to_string(root().join("docs/repositories.conf")).unwrap();
    let config = odrk_core::config::CliConfig::parse(&text).unwrap();
    let names: Vec<&str> = config.repositories.iter().map(|r| r.name()).collect();
    assert_eq!(names, ["depositonce", "refubium"]);
}
