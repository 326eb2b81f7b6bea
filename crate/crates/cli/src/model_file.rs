//! Persisted models: a single JSON object with a schema version and a
//! SHA-256 checksum over the payload, so stale schemas, corruption, and
//! truncation are all caught at load time. Numbers round-trip at full
//! precision and identical models serialize to identical bytes.

use std::path::Path;

use serde::{Deserialize, Serialize};

use newsstyle_core::classifier::{Hyperparams, LinearSvmModel, Provenance, Standardizer};
use newsstyle_core::corpus::ClassPair;
use newsstyle_core::features::FeatureId;

use crate::error::CliError;
use crate::sha256_hex;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Payload {
    version: u32,
    task: ClassPair,
    feature_ids: Vec<FeatureId>,
    means: Vec<f64>,
    stds: Vec<f64>,
    weights: Vec<f64>,
    bias: f64,
    lambda: f64,
    epochs: u32,
    seed: u64,
    provenance: Provenance,
}

#[derive(Serialize, Deserialize)]
struct FileJson {
    #[serde(flatten)]
    payload: Payload,
    checksum: String,
}

fn payload_of(model: &LinearSvmModel) -> Payload {
    Payload {
        version: SCHEMA_VERSION,
        task: model.task,
        feature_ids: model.standardizer.feature_ids.clone(),
        means: model.standardizer.means.clone(),
        stds: model.standardizer.stds.clone(),
        weights: model.weights.clone(),
        bias: model.bias,
        lambda: model.hyperparams.lambda,
        epochs: model.hyperparams.epochs,
        seed: model.hyperparams.seed,
        provenance: model.provenance.clone(),
    }
}

fn checksum_of(payload: &Payload) -> String {
    sha256_hex(&serde_json::to_vec(payload).expect("model payload serializes"))
}

pub fn save_model(model: &LinearSvmModel, path: &Path) -> Result<(), CliError> {
    let payload = payload_of(model);
    let checksum = checksum_of(&payload);
    let file = FileJson { payload, checksum };
    let mut text = serde_json::to_string_pretty(&file).expect("model file serializes");
    text.push('\n');
    std::fs::write(path, text)
        .map_err(|source| CliError::Write { path: path.to_path_buf(), source })
}

pub fn load_model(path: &Path) -> Result<LinearSvmModel, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    let file: FileJson = serde_json::from_str(&text).map_err(|e| {
        CliError::format(
            path,
            format!("corrupted model file ({e}); checksum could not be verified"),
        )
    })?;
    if file.payload.version != SCHEMA_VERSION {
        return Err(CliError::format(
            path,
            format!(
                "unsupported model schema version {} (this build reads version {SCHEMA_VERSION})",
                file.payload.version
            ),
        ));
    }
    let expected = checksum_of(&file.payload);
    if expected != file.checksum {
        return Err(CliError::format(
            path,
            format!(
                "checksum mismatch: file says {}, payload hashes to {expected}",
                file.checksum
            ),
        ));
    }
    let p = file.payload;
    let n = p.feature_ids.len();
    if p.means.len() != n || p.stds.len() != n || p.weights.len() != n {
        return Err(CliError::format(path, "corrupted model file: mismatched array lengths"));
    }
    Ok(LinearSvmModel {
        task: p.task,
        standardizer: Standardizer { feature_ids: p.feature_ids, means: p.means, stds: p.stds },
        weights: p.weights,
        bias: p.bias,
        hyperparams: Hyperparams { lambda: p.lambda, epochs: p.epochs, seed: p.seed },
        provenance: p.provenance,
    })
}
