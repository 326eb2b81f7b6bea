//! Pairwise significance testing and cross-dataset ordering agreement.
//!
//! For every feature and every canonical class pair — (R,U), (R,S), (U,S) —
//! the analysis runs a two-group one-way ANOVA and computes Cohen's d with
//! the pooled sample standard deviation, `d = (mean_first − mean_second) /
//! pooled_sd`. A feature is *selected* for a pair when `p <
//! p_threshold` and `|d| ≥ d_select_threshold`; its *relation* is `equal`
//! when `|d| < d_equality_threshold` (strictly below — `|d| = 0.2` already
//! orders the classes) and otherwise follows the sign of d.
//!
//! Two datasets' ordering tables are compared feature by feature and pair by
//! pair: identical relations score +1, anything else (including an `equal`
//! facing a strict ordering) scores −1, and each score block is the sum
//! divided by its comparison count, landing in [−1, 1].
//!
//! Groups that are exactly constant get special handling: constant with
//! identical values is a no-variance exclusion, while constant with
//! different values is a degenerate separation reported as `p = 0`,
//! infinite F and |d|, and a `degenerate` flag.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use core::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::{ClassLabel, ClassPair, CANONICAL_PAIRS};
use crate::features::{FeatureCategory, FeatureId, FeatureMatrix};
use crate::special::f_survival;

/// Thresholds for selection and ordering.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub p_threshold: f64,
    pub d_select_threshold: f64,
    pub d_equality_threshold: f64,
}

impl Default for AnalysisConfig {
    fn default() -> AnalysisConfig {
        AnalysisConfig { p_threshold: 0.05, d_select_threshold: 0.5, d_equality_threshold: 0.2 }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<(), StatsError> {
        if !(self.p_threshold > 0.0 && self.p_threshold < 1.0) {
            return Err(StatsError::BadConfig(format!(
                "p_threshold {} outside (0, 1)",
                self.p_threshold
            )));
        }
        if self.d_equality_threshold < 0.0 {
            return Err(StatsError::BadConfig(format!(
                "d_equality_threshold {} negative",
                self.d_equality_threshold
            )));
        }
        if self.d_equality_threshold >= self.d_select_threshold {
            return Err(StatsError::BadConfig(format!(
                "d_equality_threshold {} must be below d_select_threshold {}",
                self.d_equality_threshold, self.d_select_threshold
            )));
        }
        Ok(())
    }
}

/// How a feature orders a class pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    FirstGreater,
    SecondGreater,
    Equal,
}

impl Relation {
    /// The same relation seen from the swapped pair orientation.
    pub fn mirrored(self) -> Relation {
        match self {
            Relation::FirstGreater => Relation::SecondGreater,
            Relation::SecondGreater => Relation::FirstGreater,
            Relation::Equal => Relation::Equal,
        }
    }
}

/// One feature × class-pair test result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseStat {
    pub feature: FeatureId,
    pub pair: ClassPair,
    /// Infinite (JSON `null`) when the separation is degenerate.
    pub f_stat: f64,
    pub p_value: f64,
    pub cohens_d: f64,
    pub relation: Relation,
    /// Both groups constant with different values: zero within-group
    /// variance makes F and |d| infinite and p exactly 0.
    pub degenerate: bool,
}

/// Every feature's relation per class pair for one dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderingTable {
    pub dataset_name: String,
    pub entries: BTreeMap<FeatureId, BTreeMap<ClassPair, Relation>>,
}

/// A feature × pair left out of the statistics, and why.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExclusionNote {
    pub feature: FeatureId,
    pub pair: ClassPair,
    pub reason: String,
}

/// Full output of [`analyze_dataset`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetAnalysis {
    pub dataset_name: String,
    pub config: AnalysisConfig,
    pub stats: Vec<PairwiseStat>,
    pub ordering: OrderingTable,
    pub selected: BTreeMap<ClassPair, Vec<FeatureId>>,
    pub excluded: Vec<ExclusionNote>,
    pub warnings: Vec<String>,
}

/// Cross-dataset ordering agreement, all scores in [−1, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementReport {
    pub overall: f64,
    pub per_pair: BTreeMap<ClassPair, f64>,
    pub per_category: BTreeMap<FeatureCategory, f64>,
    pub compared_features: Vec<FeatureId>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnovaResult {
    pub f: f64,
    pub p: f64,
    pub degenerate: bool,
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn sum_sq_dev(values: &[f64], center: f64) -> f64 {
    values.iter().map(|&v| (v - center) * (v - center)).sum()
}

fn is_constant(values: &[f64]) -> bool {
    values.iter().all(|&v| v == values[0])
}

/// One-way ANOVA over `k ≥ 2` groups of `≥ 2` values each:
/// `F = (SSB/(k−1)) / (SSW/(N−k))`, p from the F survival function.
///
/// Constantness is detected by exact value equality rather than a computed
/// `SSW == 0`, because identical inputs can produce a nonzero SSW in
/// floating point. All groups constant and equal is a no-variance error;
/// constant but different is the degenerate case.
pub fn one_way_anova(groups: &[&[f64]]) -> Result<AnovaResult, StatsError> {
    if groups.len() < 2 {
        return Err(StatsError::TooFewGroups(groups.len()));
    }
    for (index, group) in groups.iter().enumerate() {
        if group.len() < 2 {
            return Err(StatsError::GroupTooSmall { index, len: group.len() });
        }
    }
    if groups.iter().all(|g| is_constant(g)) {
        if groups.iter().all(|g| g[0] == groups[0][0]) {
            return Err(StatsError::NoVariance);
        }
        return Ok(AnovaResult { f: f64::INFINITY, p: 0.0, degenerate: true });
    }
    let n_total: usize = groups.iter().map(|g| g.len()).sum();
    let grand_mean =
        groups.iter().flat_map(|g| g.iter()).sum::<f64>() / n_total as f64;
    let mut ssb = 0.0;
    let mut ssw = 0.0;
    for group in groups {
        let m = mean(group);
        ssb += group.len() as f64 * (m - grand_mean) * (m - grand_mean);
        ssw += sum_sq_dev(group, m);
    }
    let d1 = (groups.len() - 1) as f64;
    let d2 = (n_total - groups.len()) as f64;
    let f = (ssb / d1) / (ssw / d2);
    Ok(AnovaResult { f, p: f_survival(f, d1, d2), degenerate: false })
}

/// Cohen's d with the pooled sample standard deviation:
/// `(mean(a) − mean(b)) / sqrt(((n_a−1)s_a² + (n_b−1)s_b²)/(n_a+n_b−2))`.
pub fn cohens_d(a: &[f64], b: &[f64]) -> Result<f64, StatsError> {
    if a.len() < 2 {
        return Err(StatsError::GroupTooSmall { index: 0, len: a.len() });
    }
    if b.len() < 2 {
        return Err(StatsError::GroupTooSmall { index: 1, len: b.len() });
    }
    let (ma, mb) = (mean(a), mean(b));
    let pooled_var =
        (sum_sq_dev(a, ma) + sum_sq_dev(b, mb)) / (a.len() + b.len() - 2) as f64;
    if (is_constant(a) && is_constant(b)) || pooled_var <= 0.0 {
        return Err(StatsError::ZeroPooledVariance);
    }
    Ok((ma - mb) / libm::sqrt(pooled_var))
}

/// Equal strictly below the equality threshold, otherwise ordered by the
/// sign of d.
pub fn derive_relation(d: f64, config: &AnalysisConfig) -> Relation {
    if d.abs() < config.d_equality_threshold {
        Relation::Equal
    } else if d > 0.0 {
        Relation::FirstGreater
    } else {
        Relation::SecondGreater
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalityFlag {
    Pass,
    Warn,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalityDiagnostic {
    pub skewness: f64,
    pub excess_kurtosis: f64,
    pub flag: NormalityFlag,
}

/// Moment-based normality screen: population skewness `g1 = m3/m2^1.5` and
/// excess kurtosis `g2 = m4/m2² − 3`, warning outside |g1| ≤ 2, |g2| ≤ 7
/// (a liberal large-sample heuristic). Advisory only — analysis never
/// blocks on a warning.
pub fn normality_diagnostic(values: &[f64]) -> Result<NormalityDiagnostic, StatsError> {
    if values.len() < 8 {
        return Err(StatsError::TooFewValues { needed: 8, got: values.len() });
    }
    if is_constant(values) {
        return Err(StatsError::NoVariance);
    }
    let n = values.len() as f64;
    let m = mean(values);
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &v in values {
        let d = v - m;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    let skewness = m3 / libm::pow(m2, 1.5);
    let excess_kurtosis = m4 / (m2 * m2) - 3.0;
    let flag = if skewness.abs() > 2.0 || excess_kurtosis.abs() > 7.0 {
        NormalityFlag::Warn
    } else {
        NormalityFlag::Pass
    };
    Ok(NormalityDiagnostic { skewness, excess_kurtosis, flag })
}

/// Features selected for `pair` in both maps, in registry order.
pub fn universal_features(
    selected_a: &BTreeMap<ClassPair, Vec<FeatureId>>,
    selected_b: &BTreeMap<ClassPair, Vec<FeatureId>>,
    pair: ClassPair,
) -> Result<Vec<FeatureId>, StatsError> {
    let a = selected_a.get(&pair).ok_or(StatsError::PairAbsent(pair))?;
    let b = selected_b.get(&pair).ok_or(StatsError::PairAbsent(pair))?;
    let a: BTreeSet<FeatureId> = a.iter().copied().collect();
    let b: BTreeSet<FeatureId> = b.iter().copied().collect();
    Ok(crate::features::REGISTRY
        .iter()
        .filter(|id| a.contains(id) && b.contains(id))
        .copied()
        .collect())
}

/// Scores how two datasets' ordering tables agree over `features`: +1 per
/// identical relation, −1 otherwise (an `equal` against a strict ordering
/// is a disagreement), each block divided by its own comparison count.
/// Symmetric in its table arguments.
pub fn agreement_score(
    a: &OrderingTable,
    b: &OrderingTable,
    features: &[FeatureId],
) -> Result<AgreementReport, StatsError> {
    let mut compared_features = Vec::new();
    let mut seen = BTreeSet::new();
    for &feature in features {
        if seen.insert(feature) {
            compared_features.push(feature);
        }
    }
    if compared_features.is_empty() {
        return Err(StatsError::EmptyFeatureList);
    }
    let mut total = (0i64, 0u64);
    let mut per_pair: BTreeMap<ClassPair, (i64, u64)> = BTreeMap::new();
    let mut per_category: BTreeMap<FeatureCategory, (i64, u64)> = BTreeMap::new();
    for &feature in &compared_features {
        let ra = a.entries.get(&feature).ok_or(StatsError::MissingFeature(feature))?;
        let rb = b.entries.get(&feature).ok_or(StatsError::MissingFeature(feature))?;
        let mut shared = 0;
        for (pair, rel_a) in ra {
            let Some(rel_b) = rb.get(pair) else { continue };
            shared += 1;
            let score = if rel_a == rel_b { 1 } else { -1 };
            total.0 += score;
            total.1 += 1;
            let p = per_pair.entry(*pair).or_insert((0, 0));
            p.0 += score;
            p.1 += 1;
            let c = per_category.entry(feature.category).or_insert((0, 0));
            c.0 += score;
            c.1 += 1;
        }
        if shared == 0 {
            return Err(StatsError::NoSharedPairs(feature));
        }
    }
    let ratio = |(s, n): (i64, u64)| s as f64 / n as f64;
    Ok(AgreementReport {
        overall: ratio(total),
        per_pair: per_pair.into_iter().map(|(k, v)| (k, ratio(v))).collect(),
        per_category: per_category.into_iter().map(|(k, v)| (k, ratio(v))).collect(),
        compared_features,
    })
}

/// Runs the full pairwise analysis for one dataset: statistics, ordering
/// relations, selections, exclusions, and advisory warnings (skipped pairs,
/// normality screens).
pub fn analyze_dataset(
    matrix: &FeatureMatrix,
    config: &AnalysisConfig,
) -> Result<DatasetAnalysis, StatsError> {
    config.validate()?;
    let labels = matrix.labels();
    let mut class_rows: BTreeMap<ClassLabel, Vec<usize>> = BTreeMap::new();
    for (i, label) in labels.iter().enumerate() {
        class_rows.entry(*label).or_default().push(i);
    }
    let eligible: BTreeSet<ClassLabel> = class_rows
        .iter()
        .filter(|(_, rows)| rows.len() >= 2)
        .map(|(&label, _)| label)
        .collect();
    if eligible.len() < 2 {
        return Err(StatsError::DegenerateMatrix);
    }
    let mut warnings = Vec::new();
    let mut pairs = Vec::new();
    for pair in CANONICAL_PAIRS {
        if eligible.contains(&pair.first) && eligible.contains(&pair.second) {
            pairs.push(pair);
        } else {
            for label in [pair.first, pair.second] {
                if !eligible.contains(&label) {
                    let n = class_rows.get(&label).map_or(0, Vec::len);
                    warnings.push(format!("pair {pair} skipped: class {label} has {n} row(s)"));
                }
            }
        }
    }

    let mut stats = Vec::new();
    let mut entries: BTreeMap<FeatureId, BTreeMap<ClassPair, Relation>> = BTreeMap::new();
    let mut selected: BTreeMap<ClassPair, Vec<FeatureId>> =
        pairs.iter().map(|&p| (p, Vec::new())).collect();
    let mut excluded = Vec::new();

    for &feature in &matrix.feature_ids {
        let column = matrix.column(feature);
        let by_class: BTreeMap<ClassLabel, Vec<f64>> = class_rows
            .iter()
            .map(|(&label, rows)| (label, rows.iter().map(|&i| column[i]).collect()))
            .collect();
        for &pair in &pairs {
            let a = &by_class[&pair.first];
            let b = &by_class[&pair.second];
            let anova = match one_way_anova(&[a, b]) {
                Ok(result) => result,
                Err(StatsError::NoVariance) => {
                    excluded.push(ExclusionNote {
                        feature,
                        pair,
                        reason: String::from("no variance"),
                    });
                    entries.entry(feature).or_default().insert(pair, Relation::Equal);
                    continue;
                }
                Err(e) => return Err(e),
            };
            let d = if anova.degenerate {
                // Zero pooled spread with distinct means: the effect size
                // diverges; keep the sign so the relation stays ordered.
                if mean(a) > mean(b) {
                    f64::INFINITY
                } else {
                    f64::NEG_INFINITY
                }
            } else {
                match cohens_d(a, b) {
                    Ok(d) => d,
                    Err(StatsError::ZeroPooledVariance) => {
                        excluded.push(ExclusionNote {
                            feature,
                            pair,
                            reason: String::from("no measurable variance"),
                        });
                        entries.entry(feature).or_default().insert(pair, Relation::Equal);
                        continue;
                    }
                    Err(e) => return Err(e),
                }
            };
            let relation = derive_relation(d, config);
            if anova.p < config.p_threshold && d.abs() >= config.d_select_threshold {
                selected.get_mut(&pair).expect("pair registered").push(feature);
            }
            entries.entry(feature).or_default().insert(pair, relation);
            stats.push(PairwiseStat {
                feature,
                pair,
                f_stat: anova.f,
                p_value: anova.p,
                cohens_d: d,
                relation,
                degenerate: anova.degenerate,
            });
        }
        for (&label, values) in &by_class {
            if values.len() < 8 {
                continue;
            }
            if let Ok(diag) = normality_diagnostic(values) {
                if diag.flag == NormalityFlag::Warn {
                    warnings.push(format!(
                        "{feature} class {label}: skewness {:.3}, excess kurtosis {:.3} outside normality heuristic",
                        diag.skewness, diag.excess_kurtosis
                    ));
                }
            }
        }
    }

    Ok(DatasetAnalysis {
        dataset_name: matrix.corpus_name.clone(),
        config: *config,
        stats,
        ordering: OrderingTable { dataset_name: matrix.corpus_name.clone(), entries },
        selected,
        excluded,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum StatsError {
    TooFewGroups(usize),
    GroupTooSmall { index: usize, len: usize },
    NoVariance,
    ZeroPooledVariance,
    TooFewValues { needed: usize, got: usize },
    BadConfig(String),
    DegenerateMatrix,
    MissingFeature(FeatureId),
    NoSharedPairs(FeatureId),
    PairAbsent(ClassPair),
    EmptyFeatureList,
}

impl fmt::Display for StatsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatsError::TooFewGroups(n) => write!(f, "need at least 2 groups, got {n}"),
            StatsError::GroupTooSmall { index, len } => {
                write!(f, "group {index} has {len} value(s), need at least 2")
            }
            StatsError::NoVariance => f.write_str("no variance"),
            StatsError::ZeroPooledVariance => f.write_str("zero pooled variance"),
            StatsError::TooFewValues { needed, got } => {
                write!(f, "need at least {needed} values, got {got}")
            }
            StatsError::BadConfig(msg) => write!(f, "invalid analysis config: {msg}"),
            StatsError::DegenerateMatrix => {
                f.write_str("matrix needs at least 2 classes with at least 2 rows each")
            }
            StatsError::MissingFeature(id) => write!(f, "feature {id} missing from a table"),
            StatsError::NoSharedPairs(id) => {
                write!(f, "feature {id} has no class pair present in both tables")
            }
            StatsError::PairAbsent(pair) => write!(f, "pair {pair} absent from a selection"),
            StatsError::EmptyFeatureList => f.write_str("no features to compare"),
        }
    }
}

impl core::error::Error for StatsError {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::{FeatureVector, REGISTRY, REGISTRY_LEN};
    use alloc::vec;

    #[test]
    fn identical_groups_have_no_effect() {
        let r = one_way_anova(&[&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]]).unwrap();
        assert_eq!(r.f, 0.0);
        assert_eq!(r.p, 1.0);
        assert!(!r.degenerate);
    }

    #[test]
    fn known_two_group_case() {
        let r = one_way_anova(&[&[1.0, 2.0, 3.0], &[3.0, 4.0, 5.0]]).unwrap();
        assert!((r.f - 6.0).abs() < 1e-12, "F = {}", r.f);
        assert!((r.p - 0.0705).abs() < 5e-4, "p = {}", r.p);
        // tighter bound against the frozen high-precision value
        assert!((r.p - 0.070_483_996_910_2).abs() < 1e-8);
    }

    #[test]
    fn anova_is_shift_invariant() {
        let base = one_way_anova(&[&[1.0, 2.0, 3.0], &[3.0, 4.0, 5.0]]).unwrap();
        let shifted =
            one_way_anova(&[&[101.0, 102.0, 103.0], &[103.0, 104.0, 105.0]]).unwrap();
        assert!((base.f - shifted.f).abs() < 1e-9);
        assert!((base.p - shifted.p).abs() < 1e-9);
    }

    #[test]
    fn anova_matches_pooled_t_squared() {
        let a = [2.1, 3.9, 1.4, 4.4, 2.8];
        let b = [5.0, 6.2, 4.1, 5.9];
        let r = one_way_anova(&[&a, &b]).unwrap();
        let (ma, mb) = (mean(&a), mean(&b));
        let pooled = (sum_sq_dev(&a, ma) + sum_sq_dev(&b, mb)) / (a.len() + b.len() - 2) as f64;
        let t = (ma - mb)
            / libm::sqrt(pooled * (1.0 / a.len() as f64 + 1.0 / b.len() as f64));
        assert!((r.f - t * t).abs() < 1e-9, "F = {} vs t² = {}", r.f, t * t);
    }

    #[test]
    fn anova_input_validation() {
        assert_eq!(
            one_way_anova(&[&[1.0, 2.0]]).unwrap_err(),
            StatsError::TooFewGroups(1)
        );
        assert_eq!(
            one_way_anova(&[&[1.0, 2.0], &[1.0]]).unwrap_err(),
            StatsError::GroupTooSmall { index: 1, len: 1 }
        );
        assert_eq!(
            one_way_anova(&[&[2.0, 2.0], &[2.0, 2.0]]).unwrap_err(),
            StatsError::NoVariance
        );
    }

    #[test]
    fn degenerate_separation_flagged() {
        let r = one_way_anova(&[&[2.0, 2.0], &[3.0, 3.0]]).unwrap();
        assert!(r.f.is_infinite());
        assert_eq!(r.p, 0.0);
        assert!(r.degenerate);
    }

    #[test]
    fn cohens_d_hand_case() {
        let d = cohens_d(&[1.0, 2.0, 3.0], &[3.0, 4.0, 5.0]).unwrap();
        assert!((d + 2.0).abs() < 1e-12);
        assert_eq!(cohens_d(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap(), 0.0);
        let forward = cohens_d(&[1.0, 5.0, 2.0], &[4.0, 4.5, 6.0]).unwrap();
        let backward = cohens_d(&[4.0, 4.5, 6.0], &[1.0, 5.0, 2.0]).unwrap();
        assert!((forward + backward).abs() < 1e-12);
        assert_eq!(
            cohens_d(&[1.0, 1.0], &[1.0, 1.0]).unwrap_err(),
            StatsError::ZeroPooledVariance
        );
    }

    #[test]
    fn relation_thresholds() {
        let config = AnalysisConfig::default();
        assert_eq!(derive_relation(0.1, &config), Relation::Equal);
        assert_eq!(derive_relation(-2.0, &config), Relation::SecondGreater);
        // boundary: equality needs strictly below the threshold
        assert_eq!(derive_relation(0.2, &config), Relation::FirstGreater);
        assert_eq!(derive_relation(-0.2, &config), Relation::SecondGreater);
    }

    #[test]
    fn normality_flags_one_sided_sample() {
        let diag =
            normality_diagnostic(&[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 100.0]).unwrap();
        assert!((diag.skewness - 2.267_786_838_055_363).abs() < 1e-12);
        assert!((diag.excess_kurtosis - 3.142_857_142_857_143_2).abs() < 1e-12);
        assert_eq!(diag.flag, NormalityFlag::Warn);
    }

    #[test]
    fn normality_passes_symmetric_sample() {
        let diag =
            normality_diagnostic(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]).unwrap();
        assert!(diag.skewness.abs() < 1e-12);
        assert_eq!(diag.flag, NormalityFlag::Pass);
    }

    #[test]
    fn normality_input_validation() {
        assert_eq!(
            normality_diagnostic(&[1.0; 7]).unwrap_err(),
            StatsError::TooFewValues { needed: 8, got: 7 }
        );
        assert_eq!(normality_diagnostic(&[3.0; 12]).unwrap_err(), StatsError::NoVariance);
    }

    fn feature(name: &str) -> FeatureId {
        name.parse().unwrap()
    }

    fn table(name: &str, rows: &[(&str, [Relation; 3])]) -> OrderingTable {
        let entries = rows
            .iter()
            .map(|(f, rels)| {
                (
                    feature(f),
                    CANONICAL_PAIRS.iter().copied().zip(rels.iter().copied()).collect(),
                )
            })
            .collect();
        OrderingTable { dataset_name: name.into(), entries }
    }

    #[test]
    fn identical_tables_fully_agree() {
        use Relation::*;
        let a = table(
            "a",
            &[("TTL_GI", [FirstGreater, Equal, SecondGreater]), ("TXT_WC", [Equal, Equal, Equal])],
        );
        let features = vec![feature("TTL_GI"), feature("TXT_WC")];
        let report = agreement_score(&a, &a, &features).unwrap();
        assert_eq!(report.overall, 1.0);
        assert!(report.per_pair.values().all(|&v| v == 1.0));
        assert_eq!(report.compared_features, features);
    }

    #[test]
    fn reversed_tables_fully_disagree() {
        use Relation::*;
        let a = table("a", &[("TTL_GI", [FirstGreater, FirstGreater, Equal])]);
        let b = table("b", &[("TTL_GI", [SecondGreater, SecondGreater, FirstGreater])]);
        let report = agreement_score(&a, &b, &[feature("TTL_GI")]).unwrap();
        assert_eq!(report.overall, -1.0);
    }

    #[test]
    fn equal_versus_strict_is_a_disagreement() {
        use Relation::*;
        let a = table("a", &[("TTL_GI", [Equal, FirstGreater, FirstGreater])]);
        let b = table("b", &[("TTL_GI", [FirstGreater, FirstGreater, FirstGreater])]);
        let report = agreement_score(&a, &b, &[feature("TTL_GI")]).unwrap();
        // one disagreement, two agreements over three comparisons
        assert!((report.overall - 1.0 / 3.0).abs() < 1e-12);
        let ru = ClassPair { first: ClassLabel::R, second: ClassLabel::U };
        assert_eq!(report.per_pair[&ru], -1.0);
    }

    #[test]
    fn agreement_is_symmetric_and_validates() {
        use Relation::*;
        let a = table("a", &[("TTL_GI", [Equal, FirstGreater, SecondGreater])]);
        let b = table("b", &[("TTL_GI", [FirstGreater, FirstGreater, Equal])]);
        let ab = agreement_score(&a, &b, &[feature("TTL_GI")]).unwrap();
        let ba = agreement_score(&b, &a, &[feature("TTL_GI")]).unwrap();
        assert_eq!(ab.overall, ba.overall);
        assert_eq!(
            agreement_score(&a, &b, &[feature("TXT_WC")]).unwrap_err(),
            StatsError::MissingFeature(feature("TXT_WC"))
        );
        assert_eq!(
            agreement_score(&a, &b, &[]).unwrap_err(),
            StatsError::EmptyFeatureList
        );
    }

    #[test]
    fn universal_intersection_in_registry_order() {
        let pair = CANONICAL_PAIRS[0];
        let a = BTreeMap::from([(pair, vec![feature("TXT_WC"), feature("TXT_WPS")])]);
        let b = BTreeMap::from([(pair, vec![feature("TXT_WPS"), feature("TTL_WC")])]);
        assert_eq!(universal_features(&a, &b, pair).unwrap(), vec![feature("TXT_WPS")]);
        // registry order regardless of input order
        let a = BTreeMap::from([(pair, vec![feature("TXT_WC"), feature("TTL_GI")])]);
        let b = BTreeMap::from([(pair, vec![feature("TXT_WC"), feature("TTL_GI")])]);
        assert_eq!(
            universal_features(&a, &b, pair).unwrap(),
            vec![feature("TTL_GI"), feature("TXT_WC")]
        );
        let empty: BTreeMap<ClassPair, Vec<FeatureId>> = BTreeMap::new();
        assert_eq!(
            universal_features(&empty, &b, pair).unwrap_err(),
            StatsError::PairAbsent(pair)
        );
        let disjoint = BTreeMap::from([(pair, vec![feature("TXT_Anx")])]);
        assert!(universal_features(&a, &disjoint, pair).unwrap().is_empty());
    }

    /// Matrix rows that are zero everywhere except the given registry
    /// positions.
    fn matrix(rows: Vec<(ClassLabel, Vec<(usize, f64)>)>) -> FeatureMatrix {
        let rows = rows
            .into_iter()
            .enumerate()
            .map(|(i, (label, edits))| {
                let mut values = vec![0.0; REGISTRY_LEN];
                for (pos, v) in edits {
                    values[pos] = v;
                }
                FeatureVector::from_registry_values(format!("row{i}"), label, values).unwrap()
            })
            .collect();
        FeatureMatrix {
            corpus_name: "synthetic".into(),
            feature_ids: REGISTRY.to_vec(),
            rows,
        }
    }

    #[test]
    fn analysis_selects_separated_feature() {
        // Feature 0 (TTL_GI): R runs 1..=10, U runs 6..=15 — strong
        // separation. All other features are constant zero.
        let mut rows = Vec::new();
        for i in 0..10 {
            rows.push((ClassLabel::R, vec![(0usize, 1.0 + i as f64)]));
        }
        for i in 0..10 {
            rows.push((ClassLabel::U, vec![(0usize, 6.0 + i as f64)]));
        }
        let analysis = analyze_dataset(&matrix(rows), &AnalysisConfig::default()).unwrap();
        let pair = CANONICAL_PAIRS[0];
        assert_eq!(analysis.selected[&pair], vec![REGISTRY[0]]);
        let stat = analysis
            .stats
            .iter()
            .find(|s| s.feature == REGISTRY[0] && s.pair == pair)
            .unwrap();
        assert!(stat.p_value < 0.05);
        assert_eq!(stat.relation, Relation::SecondGreater);
        assert!(!stat.degenerate);
        // constant features are excluded but still ordered as equal
        assert!(analysis.excluded.iter().any(|e| e.feature == REGISTRY[1]));
        assert_eq!(analysis.ordering.entries[&REGISTRY[1]][&pair], Relation::Equal);
        assert!(!analysis.selected[&pair].contains(&REGISTRY[1]));
        // R/S and U/S pairs are skipped with warnings: no S rows
        assert!(analysis.warnings.iter().any(|w| w.contains("R_S")));
        assert!(analysis.warnings.iter().any(|w| w.contains("U_S")));
    }

    #[test]
    fn analysis_requires_two_populated_classes() {
        let rows = (0..5).map(|i| (ClassLabel::R, vec![(0usize, i as f64)])).collect();
        assert_eq!(
            analyze_dataset(&matrix(rows), &AnalysisConfig::default()).unwrap_err(),
            StatsError::DegenerateMatrix
        );
        let rows = vec![
            (ClassLabel::R, vec![(0usize, 1.0)]),
            (ClassLabel::R, vec![(0usize, 2.0)]),
            (ClassLabel::U, vec![(0usize, 3.0)]),
        ];
        assert_eq!(
            analyze_dataset(&matrix(rows), &AnalysisConfig::default()).unwrap_err(),
            StatsError::DegenerateMatrix
        );
    }

    #[test]
    fn degenerate_feature_is_selected_with_infinite_effect() {
        // Feature 0 constant per class but different across classes.
        let mut rows = Vec::new();
        for _ in 0..3 {
            rows.push((ClassLabel::R, vec![(0usize, 5.0)]));
        }
        for _ in 0..3 {
            rows.push((ClassLabel::U, vec![(0usize, 1.0)]));
        }
        let analysis = analyze_dataset(&matrix(rows), &AnalysisConfig::default()).unwrap();
        let pair = CANONICAL_PAIRS[0];
        let stat = analysis
            .stats
            .iter()
            .find(|s| s.feature == REGISTRY[0] && s.pair == pair)
            .unwrap();
        assert!(stat.degenerate);
        assert_eq!(stat.p_value, 0.0);
        assert!(stat.cohens_d.is_infinite() && stat.cohens_d > 0.0);
        assert_eq!(stat.relation, Relation::FirstGreater);
        assert!(analysis.selected[&pair].contains(&REGISTRY[0]));
    }

    #[test]
    fn config_validation() {
        let bad_p = AnalysisConfig { p_threshold: 0.0, ..AnalysisConfig::default() };
        assert!(matches!(bad_p.validate(), Err(StatsError::BadConfig(_))));
        let inverted = AnalysisConfig {
            d_select_threshold: 0.1,
            d_equality_threshold: 0.2,
            ..AnalysisConfig::default()
        };
        assert!(matches!(inverted.validate(), Err(StatsError::BadConfig(_))));
    }
}
