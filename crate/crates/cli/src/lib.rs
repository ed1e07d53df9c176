//! `odrk` command-line front end. [`dispatch`] runs one command against
//! explicit output streams so it can be driven in-process.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{ArgGroup, Args, Parser, Subcommand};
use odrk_core::client::{FileSelector, RepoClient};
use odrk_core::config::{CliConfig, OutputFormat};
use odrk_core::federation::{federated_search, to_result_table_in, value_counts, FederatedResult};
use odrk_core::model::{ItemRecord, RepositoryEndpoint, Warning};
use odrk_core::profile::{describe, render_profile, ProfileFormat};
use odrk_core::render::aligned_table;
use odrk_core::tabular::{
    convert, parse_delimited, preview_head, preview_tail, read_table, tabular_delimiter, PreviewSlice, TableData,
    TableFormat,
};
use odrk_core::translation::{GlossaryStub, TranslationCache, Translator};
use odrk_core::usability::{parse_sessions_csv, parse_sus_csv, summarize_study, StudyLog};
use odrk_core::ClientError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "odrk",
    version,
    about = "Search, preview, profile and fetch research data from DSpace-style repositories"
)]
struct Cli {
    /// Repository configuration file (default: $ODRK_CONFIG)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Translation glossary replacing the bundled one
    #[arg(long, global = true, value_name = "PATH")]
    glossary: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Keyword search across the configured repositories
    Search {
        query: String,
        /// Add translations of title, subject and description
        #[arg(long, value_name = "LANG")]
        translate_to: Option<String>,
        /// Comma-separated repository names (default: all)
        #[arg(long, value_delimiter = ',')]
        repos: Vec<String>,
        #[arg(long)]
        format: Option<OutputFormat>,
    },
    /// List the files of an item
    Datasets {
        handle: String,
        #[arg(long, value_delimiter = ',')]
        repos: Vec<String>,
        #[arg(long)]
        format: Option<OutputFormat>,
    },
    /// First or last rows of a remote table
    Preview(PreviewArgs),
    /// Column profile of a remote table
    Describe {
        handle: String,
        file: String,
        #[arg(long, value_delimiter = ',')]
        repos: Vec<String>,
        #[arg(long)]
        format: Option<OutputFormat>,
    },
    /// Save one or all files of an item with a checksum manifest
    Download {
        handle: String,
        file: Option<String>,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        #[arg(long)]
        overwrite: bool,
        #[arg(long, value_delimiter = ',')]
        repos: Vec<String>,
    },
    /// Convert a local table between csv, tsv, json and ndjson
    Convert {
        input: PathBuf,
        #[arg(long)]
        to: TableFormat,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Tally a metadata field over search results
    ValueCounts {
        query: String,
        #[arg(long, value_name = "KEY")]
        field: String,
        #[arg(long, value_name = "K")]
        top: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        repos: Vec<String>,
        #[arg(long)]
        format: Option<OutputFormat>,
    },
    /// Completion rate, efficiency and SUS report for a usability study
    Usability {
        sessions: PathBuf,
        #[arg(long, value_name = "PATH")]
        sus: Option<PathBuf>,
        #[arg(long)]
        format: Option<OutputFormat>,
    },
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("side").required(true).args(["head", "tail"])))]
struct PreviewArgs {
    handle: String,
    file: String,
    #[arg(long, value_name = "N")]
    head: Option<usize>,
    #[arg(long, value_name = "N")]
    tail: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    repos: Vec<String>,
    #[arg(long)]
    format: Option<OutputFormat>,
}

/// Values normally taken from the process environment.
#[derive(Debug, Clone, Default)]
pub struct Env {
    /// `ODRK_CONFIG`
    pub config: Option<PathBuf>,
    /// `ODRK_CACHE`
    pub cache: Option<PathBuf>,
}

impl Env {
    pub fn from_process() -> Env {
        Env {
            config: std::env::var_os("ODRK_CONFIG")
                .filter(|v| !v.is_empty())
                .map(PathBuf::from),
            cache: std::env::var_os("ODRK_CACHE")
                .filter(|v| !v.is_empty())
                .map(PathBuf::from),
        }
    }
}

/// A failed command: message for the error stream and exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn domain(message: impl ToString) -> Failure {
        Failure {
            code: EXIT_FAILURE,
            message: message.to_string(),
        }
    }

    fn usage(message: impl ToString) -> Failure {
        Failure {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }
}

impl From<ClientError> for Failure {
    fn from(e: ClientError) -> Failure {
        Failure::domain(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::domain(e)
    }
}

type Outcome = Result<(), Failure>;

/// Run one command. Returns the process exit code.
pub fn dispatch<I, S>(argv: I, env: &Env, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    EXIT_OK
                }
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = stderr.write_all(text.as_bytes());
                    EXIT_USAGE
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    let _ = writeln!(stderr, "\n{}", synopsis());
                    EXIT_USAGE
                }
            };
        }
    };
    let mut ctx = Context {
        env,
        config_path: cli.config.clone().or_else(|| env.config.clone()),
        glossary: cli.glossary.clone(),
        stdout,
        stderr,
    };
    match ctx.run(cli.command) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(ctx.stderr, "odrk: {}", f.message);
            if f.code == EXIT_USAGE {
                let _ = writeln!(ctx.stderr, "{}", synopsis());
            }
            f.code
        }
    }
}

pub fn synopsis() -> &'static str {
    "usage:
  odrk search <query> [--translate-to L] [--repos a,b] [--format F]
  odrk datasets <handle>
  odrk preview <handle> <file> (--head N | --tail N)
  odrk describe <handle> <file> [--format F]
  odrk download <handle> [file] --out DIR [--overwrite]
  odrk convert <in-path> --to {csv,tsv,json,ndjson} [--out path]
  odrk value-counts <query> --field KEY [--top K]
  odrk usability <sessions.csv> [--sus sus.csv] [--format F]
global options: --config PATH (or ODRK_CONFIG), --glossary PATH; cache root from ODRK_CACHE"
}

struct Context<'a> {
    env: &'a Env,
    config_path: Option<PathBuf>,
    glossary: Option<PathBuf>,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::domain(format!("{}: {e}", path.display())))
}

fn csv_line(cells: &[String]) -> String {
    let quoted: Vec<String> = cells
        .iter()
        .map(|c| {
            if c.is_empty() && cells.len() == 1 || c.contains([',', '"', '\n', '\r']) {
                format!("\"{}\"", c.replace('"', "\"\""))
            } else {
                c.clone()
            }
        })
        .collect();
    quoted.join(",") + "\n"
}

impl Context<'_> {
    fn out(&mut self, text: &str) -> Outcome {
        self.stdout.write_all(text.as_bytes())?;
        Ok(())
    }

    fn warn(&mut self, warnings: &[Warning]) {
        for w in warnings {
            let _ = writeln!(self.stderr, "warning: {w}");
        }
    }

    fn config(&self) -> Result<CliConfig, Failure> {
        let path = self
            .config_path
            .as_ref()
            .ok_or_else(|| Failure::domain("no repository configuration; pass --config or set ODRK_CONFIG"))?;
        let text = fs::read_to_string(path).map_err(|e| Failure::domain(format!("{}: {e}", path.display())))?;
        CliConfig::parse(&text).map_err(|e| Failure::domain(format!("{}: {e}", path.display())))
    }

    fn format(&self, given: Option<OutputFormat>) -> Result<OutputFormat, Failure> {
        if let Some(f) = given {
            return Ok(f);
        }
        Ok(match &self.config_path {
            Some(_) => self.config()?.default_format,
            None => OutputFormat::Table,
        })
    }

    fn endpoints(&self, config: &CliConfig, repos: &[String]) -> Result<Vec<RepositoryEndpoint>, Failure> {
        let eps = if repos.is_empty() {
            config.repositories.clone()
        } else {
            let names: Vec<&str> = repos.iter().map(String::as_str).collect();
            config.select(&names).map_err(Failure::usage)?
        };
        if eps.is_empty() {
            return Err(Failure::domain("no repositories configured"));
        }
        Ok(eps)
    }

    fn translator(&self, config: &CliConfig) -> Result<Translator, Failure> {
        let glossary = match &self.glossary {
            Some(p) => {
                let text = fs::read_to_string(p).map_err(|e| Failure::domain(format!("{}: {e}", p.display())))?;
                GlossaryStub::parse(&text).map_err(|e| Failure::domain(format!("{}: {e}", p.display())))?
            }
            None => GlossaryStub::bundled(),
        };
        let cache = match self.env.cache.clone().or_else(|| config.cache_root.clone()) {
            Some(root) => TranslationCache::on_disk(root),
            None => TranslationCache::in_memory(),
        };
        Ok(Translator::new(Arc::new(glossary), cache))
    }

    /// Look the handle up in each repository in turn.
    fn find_item(&mut self, repos: &[String], handle: &str) -> Result<(RepoClient, ItemRecord), Failure> {
        let config = self.config()?;
        let mut last = None;
        for ep in self.endpoints(&config, repos)? {
            let client = RepoClient::new(ep);
            match client.get_item(handle) {
                Ok(item) => return Ok((client, item)),
                Err(e @ ClientError::InvalidHandle(_)) => return Err(e.into()),
                Err(ClientError::NotFound(_)) => {}
                Err(e) => {
                    self.warn(&[Warning::new(client.endpoint().name(), e.to_string())]);
                    last = Some(e);
                }
            }
        }
        Err(match last {
            Some(e) => Failure::domain(format!("{handle} not found ({e})")),
            None => Failure::domain(format!("no item with handle {handle} in the configured repositories")),
        })
    }

    fn run(&mut self, command: Command) -> Outcome {
        match command {
            Command::Search {
                query,
                translate_to,
                repos,
                format,
            } => {
                let format = self.format(format)?;
                let result = self.search(&query, translate_to.as_deref(), &repos)?;
                let table = to_result_table_in(&result.items, translate_to.as_deref());
                self.out(&match format {
                    OutputFormat::Table => table.to_text(),
                    OutputFormat::Csv => table.to_csv(),
                    OutputFormat::Json => table.to_json() + "\n",
                })
            }
            Command::Datasets { handle, repos, format } => {
                let format = self.format(format)?;
                let (_, item) = self.find_item(&repos, &handle)?;
                self.datasets(&item, format)
            }
            Command::Preview(args) => {
                let format = self.format(args.format)?;
                let (client, item) = self.find_item(&args.repos, &args.handle)?;
                let bs = item
                    .bitstream(&args.file)
                    .ok_or_else(|| ClientError::NoSuchFile(args.file.clone()))?;
                let slice = match (args.head, args.tail) {
                    (Some(n), _) => preview_head(&client, bs, n),
                    (_, Some(n)) => preview_tail(&client, bs, n),
                    _ => unreachable!("clap requires one of --head/--tail"),
                }
                .map_err(|e| match e {
                    odrk_core::tabular::PreviewError::ZeroRows => Failure::usage(e),
                    other => Failure::domain(other),
                })?;
                self.preview(&slice, format)
            }
            Command::Describe {
                handle,
                file,
                repos,
                format,
            } => {
                let format = match self.format(format)? {
                    OutputFormat::Table => ProfileFormat::Text,
                    OutputFormat::Json => ProfileFormat::Json,
                    OutputFormat::Csv => return Err(Failure::usage("describe prints table or json")),
                };
                let (client, item) = self.find_item(&repos, &handle)?;
                let bs = item
                    .bitstream(&file)
                    .ok_or_else(|| ClientError::NoSuchFile(file.clone()))?;
                let delim = tabular_delimiter(bs).map_err(Failure::domain)?;
                let body = client.fetch_all(bs)?;
                let table =
                    parse_delimited(&body, delim, false).map_err(|e| Failure::domain(format!("{file}: {e}")))?;
                if table.adjusted_rows() > 0 {
                    let msg = format!("{} rows padded or truncated to the header width", table.adjusted_rows());
                    self.warn(&[Warning::new(&file, msg)]);
                }
                let mut text = render_profile(&describe(&table), format);
                if format == ProfileFormat::Json {
                    text.push(b'\n');
                }
                self.stdout.write_all(&text)?;
                Ok(())
            }
            Command::Download {
                handle,
                file,
                out,
                overwrite,
                repos,
            } => {
                let (client, item) = self.find_item(&repos, &handle)?;
                let selector = file.map_or(FileSelector::All, FileSelector::One);
                let manifest = client.download(&item, &selector, &out, overwrite)?;
                let dir = item.handle.dir_name();
                let mut text = String::new();
                for e in &manifest.entries {
                    text.push_str(&format!("{}  {}  {dir}/{}\n", e.checksum, e.size_bytes, e.name));
                }
                text.push_str(&format!("manifest {dir}/{}\n", odrk_core::client::MANIFEST_FILE_NAME));
                self.out(&text)
            }
            Command::Convert { input, to, out } => {
                let name = input.to_string_lossy();
                let from = TableFormat::from_extension(&name)
                    .ok_or_else(|| Failure::usage(format!("cannot tell the format of {name} from its extension")))?;
                let table = read_table(&read(&input)?, from).map_err(|e| Failure::domain(format!("{name}: {e}")))?;
                if table.adjusted_rows() > 0 {
                    let msg = format!("{} rows padded or truncated to the header width", table.adjusted_rows());
                    self.warn(&[Warning::new(name.as_ref(), msg)]);
                }
                // written exactly as converted; JSON carries no trailing newline
                let bytes = convert(&table, to).map_err(Failure::domain)?;
                match out {
                    Some(path) => {
                        fs::write(&path, &bytes).map_err(|e| Failure::domain(format!("{}: {e}", path.display())))
                    }
                    None => {
                        self.stdout.write_all(&bytes)?;
                        Ok(())
                    }
                }
            }
            Command::ValueCounts {
                query,
                field,
                top,
                repos,
                format,
            } => {
                if field.trim().is_empty() {
                    return Err(Failure::usage("--field must not be empty"));
                }
                if top == Some(0) {
                    return Err(Failure::usage("--top must be positive"));
                }
                let format = self.format(format)?;
                let result = self.search(&query, None, &repos)?;
                let counts = value_counts(&result.items, &field, top);
                let rows: Vec<Vec<String>> = counts
                    .iter()
                    .map(|v| vec![v.value.clone(), v.count.to_string()])
                    .collect();
                self.out(&match format {
                    OutputFormat::Table => aligned_table(&["VALUE", "COUNT"], &rows),
                    OutputFormat::Json => serde_json::to_string_pretty(&counts).expect("counts serialize") + "\n",
                    OutputFormat::Csv => {
                        let mut s = csv_line(&["value".into(), "count".into()]);
                        rows.iter().for_each(|r| s.push_str(&csv_line(r)));
                        s
                    }
                })
            }
            Command::Usability { sessions, sus, format } => {
                let format = self.format(format)?;
                let outcomes = parse_sessions_csv(&read(&sessions)?)
                    .map_err(|e| Failure::domain(format!("{}: {e}", sessions.display())))?;
                let responses = match &sus {
                    Some(p) => {
                        parse_sus_csv(&read(p)?).map_err(|e| Failure::domain(format!("{}: {e}", p.display())))?
                    }
                    None => Vec::new(),
                };
                let log = StudyLog::new(outcomes, responses).map_err(Failure::domain)?;
                let report = summarize_study(&log).map_err(Failure::domain)?;
                match format {
                    OutputFormat::Table => self.out(&report.to_text()),
                    OutputFormat::Json => self.out(&(report.to_json() + "\n")),
                    OutputFormat::Csv => Err(Failure::usage("usability prints table or json")),
                }
            }
        }
    }

    fn search(
        &mut self,
        query: &str,
        translate_to: Option<&str>,
        repos: &[String],
    ) -> Result<FederatedResult, Failure> {
        let config = self.config()?;
        let eps = self.endpoints(&config, repos)?;
        let translator = match translate_to {
            Some(_) => Some(self.translator(&config)?),
            None => None,
        };
        let result = federated_search(&eps, query, translator.as_ref().zip(translate_to)).map_err(Failure::domain)?;
        self.warn(&result.warnings);
        Ok(result)
    }

    fn datasets(&mut self, item: &ItemRecord, format: OutputFormat) -> Outcome {
        let rows: Vec<Vec<String>> = item
            .bitstreams
            .iter()
            .map(|b| vec![b.name.clone(), b.size_bytes.to_string(), b.media_type.clone()])
            .collect();
        self.out(&match format {
            OutputFormat::Table => aligned_table(&["NAME", "SIZE", "TYPE"], &rows),
            OutputFormat::Csv => {
                let mut s = csv_line(&["name".into(), "size_bytes".into(), "media_type".into()]);
                rows.iter().for_each(|r| s.push_str(&csv_line(r)));
                s
            }
            OutputFormat::Json => {
                let list: Vec<serde_json::Value> = item
                    .bitstreams
                    .iter()
                    .map(
                        |b| serde_json::json!({"name": b.name, "size_bytes": b.size_bytes, "media_type": b.media_type}),
                    )
                    .collect();
                serde_json::to_string_pretty(&list).expect("list serializes") + "\n"
            }
        })
    }

    fn preview(&mut self, slice: &PreviewSlice, format: OutputFormat) -> Outcome {
        if slice.truncated_source {
            let msg = format!("file has only {} rows", slice.rows.len());
            self.warn(&[Warning::new("preview", msg)]);
        }
        match format {
            OutputFormat::Table => self.out(&aligned_table(&slice.header, &slice.rows)),
            OutputFormat::Csv | OutputFormat::Json => {
                let table = TableData::new(slice.header.clone(), slice.rows.clone()).map_err(Failure::domain)?;
                let target = if format == OutputFormat::Csv {
                    TableFormat::Csv
                } else {
                    TableFormat::Json
                };
                let bytes = convert(&table, target).map_err(Failure::domain)?;
                self.stdout.write_all(&bytes)?;
                Ok(())
            }
        }
    }
}
