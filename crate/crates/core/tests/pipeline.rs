//! End-to-end pipeline over a synthetic matrix with known separation:
//! analyze → select → split → upsample → train → evaluate, all in-process.

use newsstyle_core::classifier::{evaluate, train_traced, Hyperparams};
use newsstyle_core::corpus::{ClassLabel, ClassPair};
use newsstyle_core::features::FeatureId;
use newsstyle_core::stats::{analyze_dataset, AnalysisConfig};
use newsstyle_core::synth::{default_planted, planted_matrix, PlantedSpec};

fn spec() -> PlantedSpec {
    PlantedSpec {
        name: "planted".into(),
        seed: 20240601,
        counts: vec![(ClassLabel::R, 1200), (ClassLabel::U, 800)],
        planted: default_planted(),
        shifted_class: ClassLabel::R,
        shift: 1.0,
    }
}

#[test]
fn planted_separation_is_recovered_end_to_end() {
    let matrix = planted_matrix(&spec()).unwrap();
    let pair = ClassPair::parse("R_U").unwrap();

    // Selection finds the planted columns and almost nothing else.
    let analysis = analyze_dataset(&matrix, &AnalysisConfig::default()).unwrap();
    let selected: &[FeatureId] = &analysis.selected[&pair];
    let planted = default_planted();
    let hits = planted.iter().filter(|id| selected.contains(id)).count();
    let spurious = selected.iter().filter(|id| !planted.contains(id)).count();
    assert!(hits >= 8, "selected {hits}/10 planted features");
    assert!(spurious <= 5, "{spurious} spurious selections");

    // Hold out a test split, balance the training classes, train, score.
    let (train_half, test_half) = matrix.stratified_split(0.2, 99).unwrap();
    let balanced = train_half.upsample_minority((pair.first, pair.second), 99).unwrap();
    let counts = (
        balanced.rows.iter().filter(|r| r.label == pair.first).count(),
        balanced.rows.iter().filter(|r| r.label == pair.second).count(),
    );
    assert_eq!(counts.0, counts.1, "upsampling balanced the classes");

    let params = Hyperparams { seed: 99, ..Hyperparams::default() };
    let (model, trace) = train_traced(&balanced, selected, pair, &params).unwrap();

    // Loss has settled: telescoped mean delta over the final 10 epochs.
    let mean_delta = (trace[trace.len() - 1] - trace[trace.len() - 11]) / 10.0;
    assert!(mean_delta <= 1e-6, "mean loss delta {mean_delta}");

    let report = evaluate(&model, &test_half).unwrap();
    assert_eq!(report.baseline, 0.5);
    assert!(
        report.accuracy >= 0.90,
        "test accuracy {} on {} rows",
        report.accuracy,
        report.n_test
    );
}
