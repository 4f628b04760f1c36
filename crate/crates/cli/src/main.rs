use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nicecone::certify::Condition;
use nicecone_cli::error::{CliError, CliResult};
use nicecone_cli::search::{Family, SearchConfig};
use nicecone_cli::{commands, format, model, paper, search};
use serde_json::Value;

#[derive(Parser)]
#[command(name = "nicecone", version, about = "Exact niceness, exposedness and closedness certificates for convex cones")]
struct Cli {
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Machine-readable output (certificate commands always emit JSON).
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum CondArg {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    #[value(name = "2p")]
    TwoP,
    #[value(name = "3p")]
    ThreeP,
    All,
}

impl CondArg {
    fn selector(self) -> Option<Condition> {
        match self {
            CondArg::One => Some(Condition::One),
            CondArg::Two => Some(Condition::Two),
            CondArg::Three => Some(Condition::Three),
            CondArg::TwoP => Some(Condition::TwoP),
            CondArg::ThreeP => Some(Condition::ThreeP),
            CondArg::All => None,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Dual, lineality, pointedness and face counts.
    Analyze { file: PathBuf },
    /// List the faces with their exposure data.
    Faces { file: PathBuf },
    /// Facial exposedness certificate.
    Exposed { file: PathBuf },
    /// Niceness certificate over every face.
    Nice {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        condition: CondArg,
    },
    /// Point of F* outside K* + F^perp for a nonexposed face.
    Witness {
        file: PathBuf,
        #[arg(long)]
        face: String,
    },
    /// Closedness of the image of the dual cone under the adjoint of the map.
    Closedness { file: PathBuf },
    /// Random search for exposed cones that are not nice.
    Search {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "polyhedral")]
        family: String,
    },
    /// Reproduce the worked examples and compare against the golden files.
    PaperExamples {
        #[arg(long)]
        golden: Option<PathBuf>,
        /// Rewrite the golden files instead of comparing.
        #[arg(long)]
        bless: bool,
    },
    /// Print a cone file in canonical form.
    Canon { file: PathBuf },
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_text(v: &Value) -> String {
    paper::bundle_text(v)
}

fn load(file: &Path) -> CliResult<model::Model> {
    model::load(&format::read(file)?)
}

fn run(cli: Cli) -> CliResult<()> {
    let out = cli.out.as_deref();
    let report = match cli.cmd {
        Cmd::Analyze { file } => commands::analyze(&load(&file)?)?,
        Cmd::Faces { file } => commands::faces(&load(&file)?)?,
        Cmd::Exposed { file } => commands::exposed(&load(&file)?)?,
        Cmd::Nice { file, condition } => commands::nice(&load(&file)?, condition.selector())?,
        Cmd::Witness { file, face } => commands::witness(&load(&file)?, &face)?,
        Cmd::Closedness { file } => commands::closedness(&load(&file)?)?,
        Cmd::Canon { file } => return emit(out, &format::serialize(&format::read(&file)?)),
        Cmd::Search { trials, seed, family } => {
            let cfg = SearchConfig {
                trials,
                seed,
                family: family.parse::<Family>()?,
            };
            let r = search::run(&cfg)?;
            emit(out, &json_text(&r.json))?;
            if r.alarms > 0 {
                return Err(CliError::Breach(format!(
                    "{} cones certified nice but not facially exposed",
                    r.alarms
                )));
            }
            return Ok(());
        }
        Cmd::PaperExamples { golden, bless } => {
            let dir = golden.unwrap_or_else(paper::default_golden_dir);
            let r = paper::run(&dir, bless)?;
            let text = if cli.json { json_text(&r.to_json()) } else { r.to_text() };
            emit(out, &text)?;
            if !r.passed() {
                return Err(CliError::Mismatch(r.failures().join(", ")));
            }
            return Ok(());
        }
    };
    emit(out, &json_text(&report))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nicecone: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
