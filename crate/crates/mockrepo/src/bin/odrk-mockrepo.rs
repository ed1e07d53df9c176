use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use odrk_mockrepo::{FixtureSet, MockOptions, MockServer};

/// Serve a fixture directory over the repository wire contract.
#[derive(Parser)]
#[command(name = "odrk-mockrepo", version)]
struct Args {
    /// Directory holding items.json and files/
    fixtures: PathBuf,
    #[arg(long, default_value = "127.0.0.1:8080")]
    bind: String,
    /// Ignore Range headers and always send the whole file
    #[arg(long)]
    no_range: bool,
    /// Drop every connection
    #[arg(long)]
    fail_all: bool,
    #[arg(long, default_value_t = 0)]
    latency_ms: u64,
    #[arg(long, default_value_t = 0)]
    jitter_ms: u64,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let set = match FixtureSet::load(&args.fixtures) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("odrk-mockrepo: {e}");
            return ExitCode::FAILURE;
        }
    };
    let options = MockOptions {
        range_supported: !args.no_range,
        fail_all: args.fail_all,
        latency_ms: args.latency_ms,
        jitter_ms: args.jitter_ms,
    };
    let name = set.name().to_string();
    let items = set.items().len();
    match MockServer::bind(set, options, args.bind.as_str()) {
        Ok(server) => {
            eprintln!("{name}: {items} items on {}", server.base_url());
            server.wait();
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("odrk-mockrepo: cannot bind {}: {e}", args.bind);
            ExitCode::FAILURE
        }
    }
}
