use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;

use anyhow::Context;
use clap::{Parser, Subcommand};
use opinsum::aspects::AspectRequest;
use opinsum::evaluation::{run_ablation, ablation_grid};
use opinsum::summarizer::ControlParams;
use opinsum::Error;

use crate::http;
use crate::store::DataDir;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "opinsum",
    version,
    about = "Controllable aspect-based summaries of place reviews",
    arg_required_else_help = true
)]
pub struct Cli {
    /// Directory holding place indexes and optional vectors/catalog/lexicon.
    #[arg(long, global = true, env = "OPINSUM_DATA_DIR", default_value = "opinsum-data")]
    pub data_dir: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Index a JSON Lines (or .csv) review file into the data directory.
    Ingest {
        file: PathBuf,
        /// Keep only this place; without it every place in the file is indexed.
        #[arg(long)]
        place: Option<String>,
    },
    /// Summarize the reviews of one place.
    Summarize {
        #[arg(long)]
        place: String,
        /// "all" or a comma-separated list of aspect labels.
        #[arg(long, default_value = "all")]
        aspects: String,
        /// Word budget.
        #[arg(long, default_value_t = 100)]
        length: u64,
        /// Desired share of female opinions, in [0, 1].
        #[arg(long, default_value_t = 0.5, value_parser = parse_ratio)]
        female_ratio: f64,
        #[arg(long, default_value_t = 150)]
        candidate_pool: usize,
        /// Redundancy weight.
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        /// Print the JSON serialization instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Run the ROUGE ablation over every indexed place.
    Eval {
        #[arg(long, required = true)]
        ablation: bool,
        /// Also write the report as JSON to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        length: u64,
        #[arg(long, default_value_t = 0.5, value_parser = parse_ratio)]
        female_ratio: f64,
    },
    /// Serve the JSON API under /api/v1.
    Serve {
        #[arg(long, env = "OPINSUM_PORT", default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
    },
}

fn parse_ratio(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("must be in the range [0, 1], got {v}"))
    }
}

/// Maps a failure to the process exit status.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    match err.downcast_ref::<Error>() {
        Some(Error::Controls(_) | Error::UnknownAspect { .. }) => EXIT_USAGE,
        Some(
            Error::Io { .. }
            | Error::Parse { .. }
            | Error::Index { .. }
            | Error::UnknownPlace(_)
            | Error::Invalid(_),
        ) => EXIT_DATA,
        _ => EXIT_INTERNAL,
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    }
}

fn execute(cli: Cli) -> anyhow::Result<i32> {
    let data = DataDir::new(&cli.data_dir);
    let mut stdout = std::io::stdout().lock();
    match cli.command {
        Command::Ingest { file, place } => {
            let summary = data.ingest(&file, place.as_deref())?;
            for e in &summary.report.errors {
                eprintln!("warning: {}: {e}", file.display());
            }
            if summary.report.other_place > 0 {
                eprintln!("skipped {} records of other places", summary.report.other_place);
            }
            for s in &summary.places {
                writeln!(
                    stdout,
                    "{}: {} reviews ({} female, {} male, {} unknown), {} sentences",
                    s.place, s.review_count, s.female_count, s.male_count, s.unknown_count, s.sentence_count
                )?;
            }
            if summary.places.is_empty() {
                eprintln!("error: no valid reviews in {}", file.display());
                return Ok(EXIT_DATA);
            }
            Ok(EXIT_OK)
        }
        Command::Summarize {
            place,
            aspects,
            length,
            female_ratio,
            candidate_pool,
            lambda,
            json,
        } => {
            let controls = ControlParams {
                place,
                aspects: AspectRequest::parse(&aspects),
                length_words: length,
                female_ratio,
                candidate_pool,
                penalty_weight: lambda,
                ..ControlParams::default()
            };
            controls.validate()?;
            let engine = data.load_engine()?;
            let summary = engine.summarize(&controls)?;
            if json {
                writeln!(stdout, "{}", summary.to_json())?;
            } else {
                write!(stdout, "{}", summary.render_text())?;
            }
            Ok(EXIT_OK)
        }
        Command::Eval {
            ablation: _,
            out,
            length,
            female_ratio,
        } => {
            let engine = data.load_engine()?;
            if engine.places().next().is_none() {
                return Err(Error::Invalid(format!("no indexed places under {}", data.root().display())).into());
            }
            let base = ControlParams {
                length_words: length,
                female_ratio,
                ..ControlParams::default()
            };
            let report = run_ablation(&engine, &ablation_grid(), &base);
            write!(stdout, "{}", report.render_table())?;
            if let Some(path) = out {
                fs::write(&path, report.to_json() + "\n")
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(EXIT_OK)
        }
        Command::Serve { port, host } => {
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(http::serve(data, SocketAddr::new(host, port)))?;
            Ok(EXIT_OK)
        }
    }
}
