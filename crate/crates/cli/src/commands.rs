//! Command implementations. Each function takes parsed arguments plus the
//! merged [`RunConfig`], reads and writes files, and returns an [`Outcome`]
//! for the binary to print; exit codes and stream selection stay in `main`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use newsstyle_core::classifier::{evaluate, train, Hyperparams};
use newsstyle_core::corpus::ClassPair;
use newsstyle_core::features::{extract_corpus, FeatureId, FeatureMatrix, REGISTRY};
use newsstyle_core::stats::{agreement_score, analyze_dataset, universal_features, AnalysisConfig};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{self, AnyReport, ComparePayload, Envelope, EvalPayload};
use crate::{jsonl, lexfile, matrix_csv, model_file, sha256_hex};

/// What a command produced: files written, a table for stdout (when the
/// format asks for one), and warnings for stderr.
#[derive(Debug)]
pub struct Outcome {
    pub written: Vec<PathBuf>,
    pub table: Option<String>,
    pub warnings: Vec<String>,
}

/// Where `train` gets its feature list.
pub enum FeatureSource {
    /// An analysis report (its `selected` list for the task) or a
    /// comparison report (its `universal` list for the task).
    Report(PathBuf),
    /// Feature ids given directly on the command line.
    List(Vec<FeatureId>),
}

fn file_checksum(path: &Path) -> Result<String, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    Ok(sha256_hex(&bytes))
}

fn input_checksums(paths: &[&Path]) -> Result<BTreeMap<String, String>, CliError> {
    paths
        .iter()
        .map(|p| Ok((p.display().to_string(), file_checksum(p)?)))
        .collect()
}

fn ensure_out_dir(config: &RunConfig) -> Result<(), CliError> {
    std::fs::create_dir_all(&config.out)
        .map_err(|source| CliError::Write { path: config.out.clone(), source })
}

fn analysis_config(config: &RunConfig) -> AnalysisConfig {
    AnalysisConfig {
        p_threshold: config.p_threshold,
        d_select_threshold: config.d_select_threshold,
        d_equality_threshold: config.d_equality_threshold,
    }
}

/// Keeps only the rows labeled with one of the task's two classes.
fn restrict_to_task(matrix: &FeatureMatrix, task: ClassPair) -> FeatureMatrix {
    FeatureMatrix {
        corpus_name: matrix.corpus_name.clone(),
        feature_ids: matrix.feature_ids.clone(),
        rows: matrix.rows.iter().filter(|r| task.contains(r.label)).cloned().collect(),
    }
}

pub fn cmd_extract(
    corpus_path: &Path,
    lexicon_path: &Path,
    config: &RunConfig,
) -> Result<Outcome, CliError> {
    let corpus = jsonl::load_corpus(corpus_path)?;
    let lexicon = lexfile::load_lexicon(lexicon_path)?;
    let matrix = extract_corpus(&corpus, &lexicon)?;
    ensure_out_dir(config)?;
    let csv_path = config.out.join(format!("{}.features.csv", corpus.name()));
    matrix_csv::write_matrix(&matrix, &csv_path)?;
    Ok(Outcome {
        written: vec![csv_path],
        table: Some(format!(
            "extracted {} articles x {} features from {}\n",
            matrix.rows.len(),
            matrix.feature_ids.len(),
            corpus.name(),
        )),
        warnings: Vec::new(),
    })
}

pub fn cmd_analyze(matrix_path: &Path, config: &RunConfig) -> Result<Outcome, CliError> {
    let matrix = matrix_csv::load_matrix(matrix_path)?;
    let analysis = analyze_dataset(&matrix, &analysis_config(config))?;
    let warnings = analysis.warnings.clone();
    ensure_out_dir(config)?;
    let json_path = config.out.join(format!("{}.analysis.json", matrix.corpus_name));
    let envelope = Envelope {
        command: String::from("analyze"),
        inputs: input_checksums(&[matrix_path])?,
        config: config.echo(),
        report: analysis,
    };
    report::write_json(&json_path, &envelope)?;
    let table = report::render_analysis(&envelope.report);
    Ok(Outcome { written: vec![json_path], table: Some(table), warnings })
}

pub fn cmd_compare(
    path_a: &Path,
    path_b: &Path,
    config: &RunConfig,
) -> Result<Outcome, CliError> {
    let a = report::load_analysis(path_a)?;
    let b = report::load_analysis(path_b)?;
    let mut warnings = Vec::new();

    let mut universal: BTreeMap<ClassPair, Vec<FeatureId>> = BTreeMap::new();
    for &pair in a.selected.keys() {
        if b.selected.contains_key(&pair) {
            universal.insert(pair, universal_features(&a.selected, &b.selected, pair)?);
        } else {
            warnings.push(format!("pair {pair} is only in {}; skipped", a.dataset_name));
        }
    }
    for &pair in b.selected.keys() {
        if !a.selected.contains_key(&pair) {
            warnings.push(format!("pair {pair} is only in {}; skipped", b.dataset_name));
        }
    }

    // The compared set is every feature selected in both datasets for at
    // least one shared pair, in registry order.
    let shared: Vec<FeatureId> = REGISTRY
        .iter()
        .filter(|id| universal.values().any(|features| features.contains(id)))
        .copied()
        .collect();
    let agreement = if shared.is_empty() {
        warnings.push(format!(
            "{} and {} share no selected features; nothing to score",
            a.dataset_name, b.dataset_name,
        ));
        None
    } else {
        Some(agreement_score(&a.ordering, &b.ordering, &shared)?)
    };

    ensure_out_dir(config)?;
    let json_path = config
        .out
        .join(format!("{}_vs_{}.agreement.json", a.dataset_name, b.dataset_name));
    let envelope = Envelope {
        command: String::from("compare"),
        inputs: input_checksums(&[path_a, path_b])?,
        config: config.echo(),
        report: ComparePayload {
            dataset_a: a.dataset_name,
            dataset_b: b.dataset_name,
            agreement,
            universal,
        },
    };
    report::write_json(&json_path, &envelope)?;
    let table = report::render_compare(&envelope.report);
    Ok(Outcome { written: vec![json_path], table: Some(table), warnings })
}

fn resolve_features(
    source: &FeatureSource,
    task: ClassPair,
) -> Result<(Vec<FeatureId>, Option<PathBuf>), CliError> {
    match source {
        FeatureSource::List(ids) => {
            if ids.is_empty() {
                return Err(CliError::Config(String::from("the feature list is empty")));
            }
            Ok((ids.clone(), None))
        }
        FeatureSource::Report(path) => {
            let lists = match report::load_any(path)? {
                AnyReport::Analysis(analysis) => analysis.selected,
                AnyReport::Compare(payload) => payload.universal,
                _ => {
                    return Err(CliError::format(
                        path,
                        "expected an analysis or comparison report with per-task feature lists",
                    ));
                }
            };
            let features = lists.get(&task).cloned().unwrap_or_default();
            if features.is_empty() {
                return Err(CliError::format(
                    path,
                    format!("no features listed for task {task}"),
                ));
            }
            Ok((features, Some(path.clone())))
        }
    }
}

pub fn cmd_train(
    matrix_path: &Path,
    task: ClassPair,
    source: &FeatureSource,
    config: &RunConfig,
) -> Result<Outcome, CliError> {
    let seed = config.require_seed()?;
    let matrix = matrix_csv::load_matrix(matrix_path)?;
    let (features, source_path) = resolve_features(source, task)?;

    let task_matrix = restrict_to_task(&matrix, task);
    let (train_split, test_split) = task_matrix.stratified_split(config.test_fraction, seed)?;
    let balanced = train_split.upsample_minority((task.first, task.second), seed)?;
    let params = Hyperparams { lambda: config.lambda, epochs: config.epochs, seed };
    let mut model = train(&balanced, &features, task, &params)?;
    model.provenance.created = config.timestamp.clone();
    if !model.bias.is_finite() || model.weights.iter().any(|w| !w.is_finite()) {
        return Err(CliError::Numerical(String::from(
            "training produced non-finite parameters",
        )));
    }

    ensure_out_dir(config)?;
    let model_path = config.out.join(format!("{task}_model.json"));
    model_file::save_model(&model, &model_path)?;

    let eval = evaluate(&model, &test_split)?;
    let payload = EvalPayload {
        model_file: model_path.display().to_string(),
        n_features: features.len(),
        feature_ids: features,
        eval,
    };
    let mut inputs = vec![matrix_path];
    if let Some(path) = &source_path {
        inputs.push(path);
    }
    let envelope = Envelope {
        command: String::from("train"),
        inputs: input_checksums(&inputs)?,
        config: config.echo(),
        report: payload,
    };
    let json_path = config.out.join(format!("{task}_train_report.json"));
    report::write_json(&json_path, &envelope)?;
    let table = report::render_eval(&envelope.report.eval, Some(&envelope.report));
    Ok(Outcome { written: vec![model_path, json_path], table: Some(table), warnings: Vec::new() })
}

pub fn cmd_evaluate(
    model_path: &Path,
    matrix_path: &Path,
    config: &RunConfig,
) -> Result<Outcome, CliError> {
    let model = model_file::load_model(model_path)?;
    let matrix = matrix_csv::load_matrix(matrix_path)?;
    let restricted = restrict_to_task(&matrix, model.task);
    let eval = evaluate(&model, &restricted)?;
    let payload = EvalPayload {
        model_file: model_path.display().to_string(),
        n_features: model.feature_ids().len(),
        feature_ids: model.feature_ids().to_vec(),
        eval,
    };
    ensure_out_dir(config)?;
    let envelope = Envelope {
        command: String::from("evaluate"),
        inputs: input_checksums(&[model_path, matrix_path])?,
        config: config.echo(),
        report: payload,
    };
    let json_path = config.out.join(format!("{}_eval_report.json", model.task));
    report::write_json(&json_path, &envelope)?;
    let table = report::render_eval(&envelope.report.eval, Some(&envelope.report));
    Ok(Outcome { written: vec![json_path], table: Some(table), warnings: Vec::new() })
}

pub fn cmd_report(report_path: &Path) -> Result<Outcome, CliError> {
    let any = report::load_any(report_path)?;
    Ok(Outcome {
        written: Vec::new(),
        table: Some(report::render_any(&any)),
        warnings: Vec::new(),
    })
}
