//! Report envelopes and plain-text rendering.
//!
//! Every command writes its JSON result wrapped in an [`Envelope`] that
//! echoes the command line, the effective configuration, and a SHA-256
//! checksum of each input file, so a report alone identifies the run that
//! produced it. The renderers turn saved reports back into the same tables
//! the commands print, grouping features by category and writing class
//! orderings in `U > R > S` notation.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use newsstyle_core::classifier::EvalReport;
use newsstyle_core::corpus::{ClassLabel, ClassPair};
use newsstyle_core::features::{FeatureCategory, FeatureId, REGISTRY};
use newsstyle_core::stats::{AgreementReport, DatasetAnalysis, Relation};

use crate::error::CliError;

/// Common wrapper for every JSON report a command writes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub command: String,
    /// Input path → SHA-256 of the file bytes.
    pub inputs: BTreeMap<String, String>,
    /// Effective configuration after flag/file merging.
    pub config: BTreeMap<String, String>,
    pub report: T,
}

/// Payload written by `compare`. `agreement` is `None` when the datasets
/// share no selected features, in which case there is nothing to score.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComparePayload {
    pub dataset_a: String,
    pub dataset_b: String,
    pub agreement: Option<AgreementReport>,
    /// Per pair: selected in both datasets, in registry order.
    pub universal: BTreeMap<ClassPair, Vec<FeatureId>>,
}

/// Payload written by `train` and `evaluate`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalPayload {
    pub model_file: String,
    pub n_features: usize,
    pub feature_ids: Vec<FeatureId>,
    pub eval: EvalReport,
}

/// Serializes `value` as pretty JSON with a trailing newline. Key order is
/// fixed by struct definitions, so identical values give identical bytes.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    std::fs::write(path, text)
        .map_err(|source| CliError::Write { path: path.to_path_buf(), source })
}

fn relation_symbol(relation: Relation) -> &'static str {
    match relation {
        Relation::FirstGreater => ">",
        Relation::SecondGreater => "<",
        Relation::Equal => "=",
    }
}

fn relation_between(
    relations: &BTreeMap<ClassPair, Relation>,
    a: ClassLabel,
    b: ClassLabel,
) -> Option<Relation> {
    if let Some(&r) = relations.get(&ClassPair { first: a, second: b }) {
        return Some(r);
    }
    relations.get(&ClassPair { first: b, second: a }).map(|r| r.mirrored())
}

fn permutations(classes: &[ClassLabel]) -> Vec<Vec<ClassLabel>> {
    let index_orders: &[&[usize]] = match classes.len() {
        1 => &[&[0]],
        2 => &[&[0, 1], &[1, 0]],
        3 => &[&[0, 1, 2], &[0, 2, 1], &[1, 0, 2], &[1, 2, 0], &[2, 0, 1], &[2, 1, 0]],
        _ => &[],
    };
    index_orders.iter().map(|order| order.iter().map(|&i| classes[i]).collect()).collect()
}

/// Renders the pairwise relations as a single chain such as `U > R = S`.
///
/// The chain must agree with every pairwise relation, not just adjacent
/// ones; when no linear order does (relations can be cyclic), the raw pairs
/// are listed instead.
pub fn ordering_chain(relations: &BTreeMap<ClassPair, Relation>) -> String {
    let mut classes: Vec<ClassLabel> = Vec::new();
    for pair in relations.keys() {
        for class in [pair.first, pair.second] {
            if !classes.contains(&class) {
                classes.push(class);
            }
        }
    }
    classes.sort();
    'perm: for perm in permutations(&classes) {
        let mut separators = Vec::new();
        for window in perm.windows(2) {
            match relation_between(relations, window[0], window[1]) {
                Some(Relation::FirstGreater) => separators.push(">"),
                Some(Relation::Equal) => separators.push("="),
                _ => continue 'perm,
            }
        }
        // Non-adjacent pairs must also agree with the chain's implication.
        for i in 0..perm.len() {
            for j in i + 2..perm.len() {
                let implied = if separators[i..j].iter().all(|&s| s == "=") {
                    Relation::Equal
                } else {
                    Relation::FirstGreater
                };
                if relation_between(relations, perm[i], perm[j]) != Some(implied) {
                    continue 'perm;
                }
            }
        }
        let mut chain = String::from(perm[0].code());
        for (class, sep) in perm[1..].iter().zip(&separators) {
            let _ = write!(chain, " {sep} {}", class.code());
        }
        return chain;
    }
    let pairs: Vec<String> = relations
        .iter()
        .map(|(pair, &r)| {
            format!("{} {} {}", pair.first.code(), relation_symbol(r), pair.second.code())
        })
        .collect();
    pairs.join(", ")
}

pub fn render_analysis(analysis: &DatasetAnalysis) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dataset: {}", analysis.dataset_name);
    let _ = writeln!(
        out,
        "thresholds: p < {}, select |d| >= {}, equal |d| < {}",
        analysis.config.p_threshold,
        analysis.config.d_select_threshold,
        analysis.config.d_equality_threshold,
    );
    for category in [
        FeatureCategory::Complexity,
        FeatureCategory::Stylistic,
        FeatureCategory::Linguistic,
        FeatureCategory::Psychological,
    ] {
        let rows: Vec<&FeatureId> = REGISTRY
            .iter()
            .filter(|id| id.category == category && analysis.ordering.entries.contains_key(id))
            .collect();
        if rows.is_empty() {
            continue;
        }
        let _ = writeln!(out, "\n[{category}]");
        for id in rows {
            let chain = ordering_chain(&analysis.ordering.entries[id]);
            let _ = writeln!(out, "  {:<14} {chain}", id.to_string());
        }
    }
    let _ = writeln!(out, "\nselected features");
    for (pair, features) in &analysis.selected {
        let names: Vec<String> = features.iter().map(|f| f.to_string()).collect();
        let list = if names.is_empty() { "-".to_string() } else { names.join(", ") };
        let _ = writeln!(out, "  {pair} ({}): {list}", features.len());
    }
    if !analysis.excluded.is_empty() {
        let _ = writeln!(out, "\nexcluded");
        for note in &analysis.excluded {
            let _ = writeln!(out, "  {} x {}: {}", note.feature, note.pair, note.reason);
        }
    }
    if !analysis.warnings.is_empty() {
        let _ = writeln!(out, "\nwarnings");
        for warning in &analysis.warnings {
            let _ = writeln!(out, "  - {warning}");
        }
    }
    out
}

pub fn render_compare(payload: &ComparePayload) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "agreement: {} vs {}", payload.dataset_a, payload.dataset_b);
    if let Some(agreement) = &payload.agreement {
        let names: Vec<String> =
            agreement.compared_features.iter().map(|f| f.to_string()).collect();
        let _ = writeln!(out, "compared features ({}): {}", names.len(), names.join(", "));
        let _ = writeln!(out, "\noverall: {:.4}", agreement.overall);
        let _ = writeln!(out, "per pair");
        for (pair, score) in &agreement.per_pair {
            let _ = writeln!(out, "  {pair}: {score:.4}");
        }
        let _ = writeln!(out, "per category");
        for (category, score) in &agreement.per_category {
            let _ = writeln!(out, "  {category}: {score:.4}");
        }
    } else {
        let _ = writeln!(out, "no shared selected features; nothing to score");
    }
    let _ = writeln!(out, "\nuniversal features");
    for (pair, features) in &payload.universal {
        let names: Vec<String> = features.iter().map(|f| f.to_string()).collect();
        let list = if names.is_empty() { "-".to_string() } else { names.join(", ") };
        let _ = writeln!(out, "  {pair} ({}): {list}", features.len());
    }
    let _ = writeln!(
        out,
        "\nnote: each compared feature/pair scores +1 when the class orderings\n\
         match in both datasets and -1 when they differ; every score is that sum\n\
         divided by the number of comparisons and is printed unrounded."
    );
    out
}

pub fn render_eval(eval: &EvalReport, detail: Option<&EvalPayload>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "task: {}", eval.task);
    if let Some(detail) = detail {
        let _ = writeln!(out, "model: {}", detail.model_file);
        let _ = writeln!(out, "features used: {}", detail.n_features);
    }
    let _ = writeln!(out, "test articles: {}", eval.n_test);
    let _ = writeln!(out, "accuracy: {:.4}", eval.accuracy);
    let _ = writeln!(out, "baseline: {:.4}", eval.baseline);
    let (first, second) = (eval.task.first.code(), eval.task.second.code());
    let _ = writeln!(out, "confusion (rows = actual, columns = predicted)");
    let _ = writeln!(out, "  {:<10} {:>8} {:>8}", "", format!("pred {first}"), format!("pred {second}"));
    let _ = writeln!(
        out,
        "  {:<10} {:>8} {:>8}",
        format!("actual {first}"),
        eval.confusion[0][0],
        eval.confusion[0][1],
    );
    let _ = writeln!(
        out,
        "  {:<10} {:>8} {:>8}",
        format!("actual {second}"),
        eval.confusion[1][0],
        eval.confusion[1][1],
    );
    out
}

/// A report of any kind, as loaded back from disk.
#[derive(Debug, Clone)]
pub enum AnyReport {
    Analysis(DatasetAnalysis),
    Compare(ComparePayload),
    Agreement(AgreementReport),
    Eval(EvalPayload),
    BareEval(EvalReport),
}

fn decode<T: serde::de::DeserializeOwned>(
    path: &Path,
    kind: &str,
    body: Value,
) -> Result<T, CliError> {
    serde_json::from_value(body)
        .map_err(|e| CliError::format(path, format!("malformed {kind} report: {e}")))
}

/// Loads a JSON report, accepting both enveloped and bare payloads, and
/// detects its kind from the fields present.
pub fn load_any(path: &Path) -> Result<AnyReport, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::format(path, format!("not valid JSON: {e}")))?;
    let body = match &value {
        Value::Object(map) if map.contains_key("report") => {
            map.get("report").cloned().expect("key checked")
        }
        _ => value,
    };
    let Some(fields) = body.as_object() else {
        return Err(CliError::format(path, "report body is not a JSON object"));
    };
    if fields.contains_key("ordering") && fields.contains_key("selected") {
        Ok(AnyReport::Analysis(decode(path, "analysis", body)?))
    } else if fields.contains_key("agreement") {
        Ok(AnyReport::Compare(decode(path, "comparison", body)?))
    } else if fields.contains_key("overall") && fields.contains_key("per_pair") {
        Ok(AnyReport::Agreement(decode(path, "agreement", body)?))
    } else if fields.contains_key("eval") {
        Ok(AnyReport::Eval(decode(path, "evaluation", body)?))
    } else if fields.contains_key("confusion") {
        Ok(AnyReport::BareEval(decode(path, "evaluation", body)?))
    } else {
        Err(CliError::format(path, "unrecognized report shape"))
    }
}

pub fn render_any(report: &AnyReport) -> String {
    match report {
        AnyReport::Analysis(analysis) => render_analysis(analysis),
        AnyReport::Compare(payload) => render_compare(payload),
        AnyReport::Agreement(agreement) => {
            let payload = ComparePayload {
                dataset_a: String::from("A"),
                dataset_b: String::from("B"),
                agreement: Some(agreement.clone()),
                universal: BTreeMap::new(),
            };
            render_compare(&payload)
        }
        AnyReport::Eval(payload) => render_eval(&payload.eval, Some(payload)),
        AnyReport::BareEval(eval) => render_eval(eval, None),
    }
}

/// Loads a dataset analysis, from either an envelope or a bare payload.
pub fn load_analysis(path: &Path) -> Result<DatasetAnalysis, CliError> {
    match load_any(path)? {
        AnyReport::Analysis(analysis) => Ok(analysis),
        _ => Err(CliError::format(path, "expected a dataset analysis report")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(s: &str) -> ClassPair {
        ClassPair::parse(s).unwrap()
    }

    fn relations(entries: &[(&str, Relation)]) -> BTreeMap<ClassPair, Relation> {
        entries.iter().map(|&(p, r)| (pair(p), r)).collect()
    }

    #[test]
    fn chain_orders_three_classes() {
        let table = relations(&[
            ("R_U", Relation::SecondGreater),
            ("R_S", Relation::FirstGreater),
            ("U_S", Relation::FirstGreater),
        ]);
        assert_eq!(ordering_chain(&table), "U > R > S");
    }

    #[test]
    fn chain_renders_ties() {
        let table = relations(&[
            ("R_U", Relation::SecondGreater),
            ("R_S", Relation::Equal),
            ("U_S", Relation::FirstGreater),
        ]);
        assert_eq!(ordering_chain(&table), "U > R = S");

        let all_equal = relations(&[
            ("R_U", Relation::Equal),
            ("R_S", Relation::Equal),
            ("U_S", Relation::Equal),
        ]);
        assert_eq!(ordering_chain(&all_equal), "R = U = S");
    }

    #[test]
    fn cyclic_relations_fall_back_to_pair_list() {
        // R > U, U > S, S > R admits no linear order.
        let table = relations(&[
            ("R_U", Relation::FirstGreater),
            ("U_S", Relation::FirstGreater),
            ("R_S", Relation::SecondGreater),
        ]);
        let rendered = ordering_chain(&table);
        assert!(rendered.contains("R > U"), "{rendered}");
        assert!(rendered.contains("S > R") || rendered.contains("R < S"), "{rendered}");
    }

    #[test]
    fn two_class_chain() {
        let table = relations(&[("R_U", Relation::SecondGreater)]);
        assert_eq!(ordering_chain(&table), "U > R");
    }

    #[test]
    fn report_kind_detection_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("report.json");

        let eval = EvalReport {
            task: pair("R_U"),
            n_test: 4,
            accuracy: 0.75,
            confusion: [[2, 0], [1, 1]],
            baseline: 0.5,
        };
        let envelope = Envelope {
            command: String::from("evaluate"),
            inputs: BTreeMap::new(),
            config: BTreeMap::new(),
            report: EvalPayload {
                model_file: String::from("model.json"),
                n_features: 2,
                feature_ids: vec!["TTL_GI".parse().unwrap()],
                eval,
            },
        };
        write_json(&path, &envelope).unwrap();
        let loaded = load_any(&path).unwrap();
        assert!(matches!(loaded, AnyReport::Eval(_)));
        let table = render_any(&loaded);
        assert!(table.contains("accuracy: 0.7500"), "{table}");
        assert!(table.contains("actual R"), "{table}");
    }
}
