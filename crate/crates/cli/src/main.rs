//! Binary entry point: argument parsing, config merging, and exit codes.
//! All real work happens in [`newsstyle_cli::commands`].

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use newsstyle_cli::commands::{self, FeatureSource};
use newsstyle_cli::config::{Format, RunConfig};
use newsstyle_cli::error::CliError;
use newsstyle_core::corpus::ClassPair;
use newsstyle_core::features::FeatureId;

#[derive(Parser)]
#[command(
    name = "newsstyle",
    version,
    about = "Stylometric news analysis: extract features, test class separations, \
             compare datasets, train linear classifiers."
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// RNG seed for splitting, upsampling, and training.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Flat key=value config file; flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output directory for reports and artifacts.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Report format: json, table, or both.
    #[arg(long, global = true, value_name = "KIND")]
    format: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Extract the feature matrix from a corpus into a CSV.
    Extract {
        /// JSON-lines corpus file (falls back to `corpus=` in the config).
        corpus: Option<PathBuf>,
        /// Category lexicon file (falls back to `lexicon=` in the config).
        lexicon: Option<PathBuf>,
    },
    /// Test per-feature class separations in a feature matrix.
    Analyze {
        /// Feature CSV written by `extract`.
        matrix: PathBuf,
    },
    /// Score ordering agreement between two analysis reports.
    Compare {
        report_a: PathBuf,
        report_b: PathBuf,
    },
    /// Train a linear classifier for one class pair.
    Train {
        /// Feature CSV written by `extract`.
        matrix: PathBuf,
        /// Class pair, e.g. R_U.
        task: String,
        /// Analysis or comparison report to take the feature list from.
        #[arg(long, value_name = "FILE", conflicts_with = "feature_ids")]
        features_from: Option<PathBuf>,
        /// Comma-separated feature ids, e.g. TTL_GI,TXT_WC.
        #[arg(long, value_name = "IDS")]
        feature_ids: Option<String>,
    },
    /// Evaluate a saved model against a feature matrix.
    Evaluate {
        model: PathBuf,
        matrix: PathBuf,
    },
    /// Render a saved JSON report as a table.
    Report {
        report: PathBuf,
    },
}

fn parse_task(s: &str) -> Result<ClassPair, CliError> {
    ClassPair::parse(s).ok_or_else(|| {
        CliError::Config(format!("invalid class pair {s:?} (expected R_U, R_S, or U_S)"))
    })
}

fn parse_feature_list(s: &str) -> Result<Vec<FeatureId>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|part| !part.is_empty())
        .map(|part| part.parse::<FeatureId>().map_err(CliError::from))
        .collect()
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let mut config = match &cli.global.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.global.seed {
        config.seed = Some(seed);
    }
    if let Some(out) = &cli.global.out {
        config.out = out.clone();
    }
    if let Some(format) = &cli.global.format {
        config.format = Format::parse(format).ok_or_else(|| {
            CliError::Config(format!("unknown format {format:?} (expected json, table, or both)"))
        })?;
    }

    let outcome = match &cli.command {
        Command::Extract { corpus, lexicon } => {
            let corpus = corpus.clone().or_else(|| config.corpus.clone()).ok_or_else(|| {
                CliError::Config(String::from("no corpus file (argument or `corpus=` in config)"))
            })?;
            let lexicon = lexicon.clone().or_else(|| config.lexicon.clone()).ok_or_else(|| {
                CliError::Config(String::from(
                    "no lexicon file (argument or `lexicon=` in config)",
                ))
            })?;
            commands::cmd_extract(&corpus, &lexicon, &config)?
        }
        Command::Analyze { matrix } => commands::cmd_analyze(matrix, &config)?,
        Command::Compare { report_a, report_b } => {
            commands::cmd_compare(report_a, report_b, &config)?
        }
        Command::Train { matrix, task, features_from, feature_ids } => {
            let task = parse_task(task)?;
            let source = match (features_from, feature_ids) {
                (Some(path), None) => FeatureSource::Report(path.clone()),
                (None, Some(list)) => FeatureSource::List(parse_feature_list(list)?),
                _ => {
                    return Err(CliError::Config(String::from(
                        "train needs exactly one of --features-from or --feature-ids",
                    )));
                }
            };
            commands::cmd_train(matrix, task, &source, &config)?
        }
        Command::Evaluate { model, matrix } => commands::cmd_evaluate(model, matrix, &config)?,
        Command::Report { report } => commands::cmd_report(report)?,
    };

    for warning in &outcome.warnings {
        eprintln!("warning: {warning}");
    }
    for path in &outcome.written {
        eprintln!("wrote {}", path.display());
    }
    if config.format.wants_table() {
        if let Some(table) = &outcome.table {
            print!("{table}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
