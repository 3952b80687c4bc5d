//! Command-line front end for filtered-ends experiments.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use coarse_ends::experiment::{catalog, catalog_entry, parse_description, run, Command, Description, Report, RunOptions};
use coarse_ends::group::DEFAULT_CAP;

/// Overrides the default output directory; `--out` still wins.
const OUT_ENV: &str = "COARSE_ENDS_OUT";

#[derive(Parser, Debug)]
#[command(name = "coarse-ends", version, about = "Filtered ends of pairs on truncated Cayley graphs and sampled spaces")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Largest ball, in points, a run may build.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Directory for report files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// What to print on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct DescriptionArg {
    /// JSON space description.
    file: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    FilteredEnds(DescriptionArg),
    Ends(DescriptionArg),
    PairCheck(DescriptionArg),
    Stabilizer(DescriptionArg),
    Hausdorff(DescriptionArg),
    Commensurator(DescriptionArg),
    /// List, run or export the built-in descriptions.
    Catalog {
        /// Run this entry under its own command.
        #[arg(long)]
        id: Option<String>,
        /// Write descriptions as JSON files into this directory.
        #[arg(long)]
        export: Option<PathBuf>,
    },
}

fn read_description(path: &Path) -> Result<Description> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("{} is not valid JSON", path.display()))?;
    Ok(parse_description(&value)?)
}

fn out_dir(cli: &Cli) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("reports"))
}

fn emit(cli: &Cli, report: &Report) -> Result<()> {
    let dir = out_dir(cli);
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let stem = format!("{}-{}", report.id, report.command);
    let csv = report.to_csv()?;
    let summary = report.summary_json();
    fs::write(dir.join(format!("{stem}.csv")), &csv)?;
    fs::write(dir.join(format!("{stem}.json")), &summary)?;
    match cli.format {
        Format::Csv => print!("{csv}"),
        Format::Json => print!("{summary}"),
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<()> {
    let opts = RunOptions { cap: cli.cap, ..RunOptions::default() };
    let (command, desc) = match &cli.command {
        Cmd::FilteredEnds(a) => (Command::FilteredEnds, read_description(&a.file)?),
        Cmd::Ends(a) => (Command::Ends, read_description(&a.file)?),
        Cmd::PairCheck(a) => (Command::PairCheck, read_description(&a.file)?),
        Cmd::Stabilizer(a) => (Command::Stabilizer, read_description(&a.file)?),
        Cmd::Hausdorff(a) => (Command::Hausdorff, read_description(&a.file)?),
        Cmd::Commensurator(a) => (Command::Commensurator, read_description(&a.file)?),
        Cmd::Catalog { id, export } => {
            let entries = match id {
                Some(id) => vec![catalog_entry(id)?],
                None => catalog(),
            };
            if let Some(dir) = export {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                for e in &entries {
                    let text = serde_json::to_string_pretty(&e.document)? + "\n";
                    fs::write(dir.join(format!("{}.json", e.id)), text)?;
                }
                return Ok(());
            }
            let Some(entry) = entries.into_iter().next().filter(|_| id.is_some()) else {
                for e in catalog() {
                    println!("{:<22} {}", e.id, e.title());
                }
                return Ok(());
            };
            let desc = entry.description()?;
            (desc.command.unwrap_or(Command::FilteredEnds), desc)
        }
    };
    log::info!("running {} on {}", command.name(), desc.id);
    let report = run(&desc, command, &opts)?;
    emit(cli, &report)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = (|| -> Result<()> {
        if let Some(n) = cli.threads {
            if n == 0 {
                bail!("--threads must be at least 1");
            }
            rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
        }
        execute(&cli)
    })();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
