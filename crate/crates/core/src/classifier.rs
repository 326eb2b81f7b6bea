//! From-scratch linear SVM over standardized feature columns: training by
//! deterministic epoch-wise subgradient descent, prediction, evaluation,
//! and the data carried by a persisted model.
//!
//! Training minimizes the regularized hinge objective
//! `λ/2·‖w‖² + (1/n)·Σ max(0, 1 − yᵢ(w·xᵢ + b))` with step size
//! `η_t = 1/(λ·t)` over a global step counter and a seeded per-epoch
//! shuffle, so a `(matrix, task, hyperparams)` triple always produces the
//! same model, bit for bit. The positive label (+1) is the task's first
//! class; a decision value of exactly 0 predicts positive. The bias is
//! unregularized.
//!
//! Columns are z-scored by a [`Standardizer`] fitted on the training rows
//! only — rate features (0–100) and raw counts otherwise differ by orders
//! of magnitude and would dominate the margin.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use core::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::corpus::{ClassLabel, ClassPair};
use crate::features::{registry_index, FeatureId, FeatureMatrix, FeatureVector};

/// Per-column z-scoring parameters, fitted on training rows only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub feature_ids: Vec<FeatureId>,
    pub means: Vec<f64>,
    /// Sample (n−1) standard deviations, strictly positive.
    pub stds: Vec<f64>,
}

impl Standardizer {
    /// Fits means and sample standard deviations per column of `rows`
    /// (each row aligned with `feature_ids`). A column with zero variance
    /// cannot be scaled and is an error.
    pub fn fit(feature_ids: Vec<FeatureId>, rows: &[Vec<f64>]) -> Result<Standardizer, TrainError> {
        let n = rows.len();
        if n < 2 {
            return Err(TrainError::TooFewRows(n));
        }
        let m = feature_ids.len();
        let mut means = vec![0.0; m];
        for row in rows {
            for (j, &v) in row.iter().enumerate() {
                means[j] += v;
            }
        }
        for mean in &mut means {
            *mean /= n as f64;
        }
        let mut stds = vec![0.0; m];
        for row in rows {
            for (j, &v) in row.iter().enumerate() {
                let d = v - means[j];
                stds[j] += d * d;
            }
        }
        for (j, std) in stds.iter_mut().enumerate() {
            let constant = rows.iter().all(|r| r[j] == rows[0][j]);
            *std = libm::sqrt(*std / (n - 1) as f64);
            if constant || *std <= 0.0 {
                return Err(TrainError::ZeroVarianceFeature(feature_ids[j]));
            }
        }
        Ok(Standardizer { feature_ids, means, stds })
    }

    pub fn transform_row(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(self.means.iter().zip(&self.stds))
            .map(|(&v, (&mean, &std))| (v - mean) / std)
            .collect()
    }
}

/// Training hyperparameters. `seed` drives the per-epoch shuffles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyperparams {
    pub lambda: f64,
    pub epochs: u32,
    pub seed: u64,
}

impl Default for Hyperparams {
    fn default() -> Hyperparams {
        Hyperparams { lambda: 1e-4, epochs: 200, seed: 0 }
    }
}

/// Where a model came from: the corpus it was fitted on, a hash of the
/// training configuration, and an optional caller-supplied timestamp
/// (`None` by default so identical runs stay byte-identical).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub corpus_name: String,
    pub config_hash: String,
    pub created: Option<String>,
}

/// A trained binary linear SVM for one class pair.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSvmModel {
    /// (positive class, negative class).
    pub task: ClassPair,
    pub standardizer: Standardizer,
    pub weights: Vec<f64>,
    pub bias: f64,
    pub hyperparams: Hyperparams,
    pub provenance: Provenance,
}

impl LinearSvmModel {
    pub fn feature_ids(&self) -> &[FeatureId] {
        &self.standardizer.feature_ids
    }
}

/// Test-set evaluation. `confusion` rows are actual classes (positive
/// first), columns predicted; `baseline` is the fixed 0.5 of a balanced
/// coin on class-balanced training.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub task: ClassPair,
    pub n_test: u64,
    pub accuracy: f64,
    pub confusion: [[u64; 2]; 2],
    pub baseline: f64,
}

fn sha256_hex(input: &str) -> String {
    let digest = Sha256::digest(input.as_bytes());
    let mut out = String::with_capacity(64);
    for byte in digest {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

/// The regularized hinge objective `λ/2·‖w‖² + (1/n)·Σ hinge`, over
/// standardized rows `x` with labels `y ∈ {+1, −1}`.
pub fn objective(w: &[f64], b: f64, x: &[Vec<f64>], y: &[f64], lambda: f64) -> f64 {
    let hinge: f64 = x
        .iter()
        .zip(y)
        .map(|(row, &label)| {
            let margin = label * (dot(w, row) + b);
            if margin < 1.0 {
                1.0 - margin
            } else {
                0.0
            }
        })
        .sum();
    lambda / 2.0 * dot(w, w) + hinge / x.len() as f64
}

/// Batch subgradient of [`objective`] at `(w, b)`:
/// `∇w = λ·w − (1/n)·Σ_{margin<1} y·x`, `∂b = −(1/n)·Σ_{margin<1} y`.
pub fn batch_subgradient(
    w: &[f64],
    b: f64,
    x: &[Vec<f64>],
    y: &[f64],
    lambda: f64,
) -> (Vec<f64>, f64) {
    let n = x.len() as f64;
    let mut grad_w: Vec<f64> = w.iter().map(|&wj| lambda * wj).collect();
    let mut grad_b = 0.0;
    for (row, &label) in x.iter().zip(y) {
        if label * (dot(w, row) + b) < 1.0 {
            for (g, &xj) in grad_w.iter_mut().zip(row) {
                *g -= label * xj / n;
            }
            grad_b -= label / n;
        }
    }
    (grad_w, grad_b)
}

fn restricted_rows(
    matrix: &FeatureMatrix,
    features: &[FeatureId],
) -> Result<Vec<Vec<f64>>, TrainError> {
    let positions: Vec<usize> = features.iter().map(|&id| registry_index(id)).collect();
    let mut rows = Vec::with_capacity(matrix.rows.len());
    for row in &matrix.rows {
        let values = row.values();
        let mut out = Vec::with_capacity(positions.len());
        for (&pos, &id) in positions.iter().zip(features) {
            let v = values[pos];
            if !v.is_finite() {
                return Err(TrainError::NonFinite { id: row.article_id.clone(), feature: id });
            }
            out.push(v);
        }
        rows.push(out);
    }
    Ok(rows)
}

/// Trains on the matrix restricted to `features`, and also returns the
/// per-epoch objective value trace.
pub fn train_traced(
    matrix: &FeatureMatrix,
    features: &[FeatureId],
    task: ClassPair,
    params: &Hyperparams,
) -> Result<(LinearSvmModel, Vec<f64>), TrainError> {
    if features.is_empty() {
        return Err(TrainError::EmptyFeatureList);
    }
    if !(params.lambda > 0.0) {
        return Err(TrainError::BadHyperparams(format!("lambda {} must be > 0", params.lambda)));
    }
    if params.epochs < 1 {
        return Err(TrainError::BadHyperparams("epochs must be ≥ 1".to_string()));
    }
    let mut counts = (0usize, 0usize);
    for row in &matrix.rows {
        if row.label == task.first {
            counts.0 += 1;
        } else if row.label == task.second {
            counts.1 += 1;
        } else {
            return Err(TrainError::ForeignLabel { id: row.article_id.clone(), label: row.label });
        }
    }
    if counts.0 < 2 || counts.1 < 2 {
        return Err(TrainError::SingleClass { task, counts });
    }

    let raw = restricted_rows(matrix, features)?;
    let standardizer = Standardizer::fit(features.to_vec(), &raw)?;
    let x: Vec<Vec<f64>> = raw.iter().map(|r| standardizer.transform_row(r)).collect();
    let y: Vec<f64> = matrix
        .rows
        .iter()
        .map(|r| if r.label == task.first { 1.0 } else { -1.0 })
        .collect();

    let n = x.len();
    let m = features.len();
    let mut w = vec![0.0; m];
    let mut b = 0.0;
    // Returned parameters are the average of the second half of the
    // iterates (suffix averaging): the raw iterate keeps bouncing at the
    // step-size floor η_t = 1/(λ·t), while the average settles as O(1/t),
    // which is what lets the per-epoch training loss stop increasing. The
    // first half is excluded because the earliest steps (η_1 = 1/λ) are
    // huge and their 1/t-decaying tail would bias a full average on short
    // runs.
    let total_steps = params.epochs as u64 * n as u64;
    let average_from = total_steps / 2;
    let mut avg_w = vec![0.0; m];
    let mut avg_b = 0.0;
    let mut averaged: u64 = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut order: Vec<usize> = (0..n).collect();
    let mut t: u64 = 0;
    let mut trace = Vec::with_capacity(params.epochs as usize);
    for _ in 0..params.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            t += 1;
            let eta = 1.0 / (params.lambda * t as f64);
            let decay = 1.0 - eta * params.lambda;
            let margin = y[i] * (dot(&w, &x[i]) + b);
            if margin < 1.0 {
                for (wj, &xj) in w.iter_mut().zip(&x[i]) {
                    *wj = decay * *wj + eta * y[i] * xj;
                }
                b += eta * y[i];
            } else {
                for wj in &mut w {
                    *wj *= decay;
                }
            }
            if t > average_from {
                averaged += 1;
                let blend = 1.0 / averaged as f64;
                for (aj, &wj) in avg_w.iter_mut().zip(&w) {
                    *aj += (wj - *aj) * blend;
                }
                avg_b += (b - avg_b) * blend;
            }
        }
        // The trace reports the parameters training would return if it
        // stopped after this epoch: the suffix average once it exists, the
        // raw iterate before that.
        if averaged > 0 {
            trace.push(objective(&avg_w, avg_b, &x, &y, params.lambda));
        } else {
            trace.push(objective(&w, b, &x, &y, params.lambda));
        }
    }
    let w = avg_w;
    let b = avg_b;

    let feature_names: Vec<String> = features.iter().map(|id| id.to_string()).collect();
    let config = format!(
        "task={task};features={};lambda={};epochs={};seed={}",
        feature_names.join(","),
        params.lambda,
        params.epochs,
        params.seed
    );
    let model = LinearSvmModel {
        task,
        standardizer,
        weights: w,
        bias: b,
        hyperparams: *params,
        provenance: Provenance {
            corpus_name: matrix.corpus_name.clone(),
            config_hash: sha256_hex(&config),
            created: None,
        },
    };
    Ok((model, trace))
}

/// [`train_traced`] without the loss trace.
pub fn train(
    matrix: &FeatureMatrix,
    features: &[FeatureId],
    task: ClassPair,
    params: &Hyperparams,
) -> Result<LinearSvmModel, TrainError> {
    train_traced(matrix, features, task, params).map(|(model, _)| model)
}

fn decide(model: &LinearSvmModel, raw: &[f64]) -> (ClassLabel, f64) {
    let z = dot(&model.weights, &model.standardizer.transform_row(raw)) + model.bias;
    // Exactly 0 predicts the positive class.
    let class = if z >= 0.0 { model.task.first } else { model.task.second };
    (class, z)
}

/// Predicts from a full registry vector. The margin is the raw decision
/// value `w·standardize(x) + b`; ≥ 0 means the positive (first task)
/// class.
pub fn predict(
    model: &LinearSvmModel,
    vector: &FeatureVector,
) -> Result<(ClassLabel, f64), PredictError> {
    let raw: Vec<f64> = model.feature_ids().iter().map(|&id| vector.value(id)).collect();
    for (&v, &id) in raw.iter().zip(model.feature_ids()) {
        if !v.is_finite() {
            return Err(PredictError::NonFinite(id));
        }
    }
    Ok(decide(model, &raw))
}

/// Predicts from an explicit `(feature_ids, values)` row, for callers that
/// do not hold full registry vectors. Every model feature must be present.
pub fn predict_row(
    model: &LinearSvmModel,
    feature_ids: &[FeatureId],
    values: &[f64],
) -> Result<(ClassLabel, f64), PredictError> {
    if feature_ids.len() != values.len() {
        return Err(PredictError::LengthMismatch {
            ids: feature_ids.len(),
            values: values.len(),
        });
    }
    let mut raw = Vec::with_capacity(model.feature_ids().len());
    for &id in model.feature_ids() {
        let pos = feature_ids
            .iter()
            .position(|&given| given == id)
            .ok_or(PredictError::MissingFeature(id))?;
        let v = values[pos];
        if !v.is_finite() {
            return Err(PredictError::NonFinite(id));
        }
        raw.push(v);
    }
    Ok(decide(model, &raw))
}

/// Accuracy and confusion counts on a held-out matrix. Rows must belong to
/// the task's two classes.
pub fn evaluate(model: &LinearSvmModel, test: &FeatureMatrix) -> Result<EvalReport, EvalError> {
    if test.rows.is_empty() {
        return Err(EvalError::EmptyTestSet);
    }
    let mut confusion = [[0u64; 2]; 2];
    for row in &test.rows {
        let actual = if row.label == model.task.first {
            0
        } else if row.label == model.task.second {
            1
        } else {
            return Err(EvalError::ForeignLabel { id: row.article_id.clone(), label: row.label });
        };
        let (class, _) = predict(model, row)?;
        let predicted = if class == model.task.first { 0 } else { 1 };
        confusion[actual][predicted] += 1;
    }
    let n_test = test.rows.len() as u64;
    let correct = confusion[0][0] + confusion[1][1];
    Ok(EvalReport {
        task: model.task,
        n_test,
        accuracy: correct as f64 / n_test as f64,
        confusion,
        baseline: 0.5,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum TrainError {
    EmptyFeatureList,
    BadHyperparams(String),
    ForeignLabel { id: String, label: ClassLabel },
    SingleClass { task: ClassPair, counts: (usize, usize) },
    TooFewRows(usize),
    NonFinite { id: String, feature: FeatureId },
    ZeroVarianceFeature(FeatureId),
}

impl fmt::Display for TrainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrainError::EmptyFeatureList => f.write_str("no features to train on"),
            TrainError::BadHyperparams(msg) => write!(f, "invalid hyperparameters: {msg}"),
            TrainError::ForeignLabel { id, label } => {
                write!(f, "row {id:?} has label {label} outside the task classes")
            }
            TrainError::SingleClass { task, counts } => write!(
                f,
                "task {task} needs at least 2 rows per class, got {} and {}",
                counts.0, counts.1
            ),
            TrainError::TooFewRows(n) => write!(f, "need at least 2 rows to standardize, got {n}"),
            TrainError::NonFinite { id, feature } => {
                write!(f, "row {id:?} has a non-finite value for {feature}")
            }
            TrainError::ZeroVarianceFeature(id) => {
                write!(f, "feature {id} has zero variance on the training rows")
            }
        }
    }
}

impl core::error::Error for TrainError {}

#[derive(Debug, Clone, PartialEq)]
pub enum PredictError {
    MissingFeature(FeatureId),
    NonFinite(FeatureId),
    LengthMismatch { ids: usize, values: usize },
}

impl fmt::Display for PredictError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PredictError::MissingFeature(id) => write!(f, "vector is missing feature {id}"),
            PredictError::NonFinite(id) => write!(f, "non-finite value for feature {id}"),
            PredictError::LengthMismatch { ids, values } => {
                write!(f, "{ids} feature ids but {values} values")
            }
        }
    }
}

impl core::error::Error for PredictError {}

#[derive(Debug, Clone, PartialEq)]
pub enum EvalError {
    EmptyTestSet,
    ForeignLabel { id: String, label: ClassLabel },
    Predict(PredictError),
}

impl From<PredictError> for EvalError {
    fn from(e: PredictError) -> EvalError {
        EvalError::Predict(e)
    }
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::EmptyTestSet => f.write_str("empty test set"),
            EvalError::ForeignLabel { id, label } => {
                write!(f, "test row {id:?} has label {label} outside the task classes")
            }
            EvalError::Predict(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for EvalError {}
