//! Seeded synthetic feature matrices with known class separation, for
//! end-to-end pipeline validation: every column is unit-variance Gaussian
//! noise except a chosen set of planted columns, which get a constant
//! shift added for one class. The pooled standard deviation stays ≈ 1, so
//! the planted shift is also the planted effect size.

use alloc::string::String;
use alloc::vec::Vec;

use core::f64::consts::TAU;
use core::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::ClassLabel;
use crate::features::{registry_index, FeatureId, FeatureMatrix, FeatureVector, REGISTRY, REGISTRY_LEN};

/// Recipe for a planted-separation matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedSpec {
    pub name: String,
    pub seed: u64,
    /// Rows per class, emitted in this order (may be imbalanced).
    pub counts: Vec<(ClassLabel, usize)>,
    /// Columns that carry the shift.
    pub planted: Vec<FeatureId>,
    /// Class whose rows get `shift` added on the planted columns.
    pub shifted_class: ClassLabel,
    /// Mean separation between the shifted class and the rest.
    pub shift: f64,
}

/// Standard normals by the Box–Muller transform; `1 − u` keeps the
/// logarithm away from zero.
struct Normal {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl Normal {
    fn new(seed: u64) -> Normal {
        Normal { rng: ChaCha8Rng::seed_from_u64(seed), spare: None }
    }

    fn next(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1: f64 = 1.0 - self.rng.random::<f64>();
        let u2: f64 = self.rng.random::<f64>();
        let r = libm::sqrt(-2.0 * libm::log(u1));
        let theta = TAU * u2;
        self.spare = Some(r * libm::sin(theta));
        r * libm::cos(theta)
    }
}

/// Generates the matrix described by `spec`. Rows are grouped by class in
/// `counts` order with ids `"{name}-0001"` onward; all 102 registry
/// columns are N(0,1) draws, plus `shift` on the planted columns for rows
/// of the shifted class.
pub fn planted_matrix(spec: &PlantedSpec) -> Result<FeatureMatrix, SynthError> {
    if spec.counts.is_empty() || spec.counts.iter().all(|&(_, n)| n == 0) {
        return Err(SynthError::NoRows);
    }
    let mut seen: Vec<FeatureId> = Vec::new();
    for &id in &spec.planted {
        if seen.contains(&id) {
            return Err(SynthError::DuplicatePlant(id));
        }
        seen.push(id);
    }
    let planted_positions: Vec<usize> =
        spec.planted.iter().map(|&id| registry_index(id)).collect();

    let mut normal = Normal::new(spec.seed);
    let total: usize = spec.counts.iter().map(|&(_, n)| n).sum();
    let width = if total >= 10_000 { 5 } else { 4 };
    let mut rows = Vec::with_capacity(total);
    let mut serial = 0usize;
    for &(label, count) in &spec.counts {
        for _ in 0..count {
            serial += 1;
            let mut values: Vec<f64> = (0..REGISTRY_LEN).map(|_| normal.next()).collect();
            if label == spec.shifted_class {
                for &pos in &planted_positions {
                    values[pos] += spec.shift;
                }
            }
            let id = alloc::format!("{}-{serial:0width$}", spec.name);
            let row = FeatureVector::from_registry_values(id, label, values)
                .expect("registry-length values");
            rows.push(row);
        }
    }
    Ok(FeatureMatrix {
        corpus_name: spec.name.clone(),
        feature_ids: REGISTRY.to_vec(),
        rows,
    })
}

/// The ten shifted columns used by the shipped end-to-end fixtures: a mix
/// of title and body columns across all four feature categories.
pub fn default_planted() -> Vec<FeatureId> {
    [
        "TTL_GI",
        "TTL_Exclam",
        "TTL_AllCaps",
        "TXT_WC",
        "TXT_WPS",
        "TXT_SixLtr",
        "TXT_QMark",
        "TXT_Pronoun",
        "TXT_Negemo",
        "TXT_Funct",
    ]
    .iter()
    .map(|s| s.parse().expect("registry feature"))
    .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SynthError {
    NoRows,
    DuplicatePlant(FeatureId),
}

impl fmt::Display for SynthError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SynthError::NoRows => f.write_str("no rows requested"),
            SynthError::DuplicatePlant(id) => write!(f, "feature {id} planted twice"),
        }
    }
}

impl core::error::Error for SynthError {}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn small_spec() -> PlantedSpec {
        PlantedSpec {
            name: "synth".into(),
            seed: 7,
            counts: vec![(ClassLabel::R, 300), (ClassLabel::U, 200)],
            planted: default_planted(),
            shifted_class: ClassLabel::R,
            shift: 1.0,
        }
    }

    #[test]
    fn shape_ids_and_labels() {
        let m = planted_matrix(&small_spec()).unwrap();
        assert_eq!(m.rows.len(), 500);
        assert_eq!(m.feature_ids.len(), REGISTRY_LEN);
        assert_eq!(m.rows[0].article_id, "synth-0001");
        assert_eq!(m.rows[499].article_id, "synth-0500");
        assert_eq!(m.rows.iter().filter(|r| r.label == ClassLabel::R).count(), 300);
        assert_eq!(m.rows.iter().filter(|r| r.label == ClassLabel::U).count(), 200);
    }

    #[test]
    fn deterministic_in_the_seed() {
        let a = planted_matrix(&small_spec()).unwrap();
        let b = planted_matrix(&small_spec()).unwrap();
        assert_eq!(a, b);
        let mut other = small_spec();
        other.seed = 8;
        assert_ne!(planted_matrix(&other).unwrap(), a);
    }

    #[test]
    fn planted_columns_separate_and_noise_columns_do_not() {
        let m = planted_matrix(&small_spec()).unwrap();
        let mean = |values: &[f64]| values.iter().sum::<f64>() / values.len() as f64;
        for &id in &m.feature_ids {
            let column = m.column(id);
            let (r, u): (Vec<_>, Vec<_>) = column
                .iter()
                .zip(m.rows.iter())
                .partition(|(_, row)| row.label == ClassLabel::R);
            let gap = mean(&r.iter().map(|(v, _)| **v).collect::<Vec<_>>())
                - mean(&u.iter().map(|(v, _)| **v).collect::<Vec<_>>());
            if default_planted().contains(&id) {
                assert!(gap > 0.6, "{id}: planted gap {gap}");
            } else {
                assert!(gap.abs() < 0.4, "{id}: noise gap {gap}");
            }
        }
    }

    #[test]
    fn unit_scale_noise() {
        let m = planted_matrix(&small_spec()).unwrap();
        let column = m.column("TTL_SMOG".parse().unwrap());
        let mean = column.iter().sum::<f64>() / column.len() as f64;
        let var =
            column.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (column.len() - 1) as f64;
        assert!(mean.abs() < 0.2, "mean {mean}");
        assert!((var - 1.0).abs() < 0.3, "variance {var}");
    }

    #[test]
    fn input_validation() {
        let mut spec = small_spec();
        spec.counts.clear();
        assert_eq!(planted_matrix(&spec).unwrap_err(), SynthError::NoRows);
        let mut dup = small_spec();
        dup.planted.push(dup.planted[0]);
        assert!(matches!(planted_matrix(&dup).unwrap_err(), SynthError::DuplicatePlant(_)));
    }
}
