//! File formats, configuration, and command logic behind the `newsstyle`
//! binary. Everything here is std-side plumbing around `newsstyle-core`:
//! JSONL corpora, dictionary files, feature-matrix CSVs, persisted models,
//! and human/JSON report rendering.

pub mod commands;
pub mod config;
pub mod error;
pub mod jsonl;
pub mod lexfile;
pub mod matrix_csv;
pub mod model_file;
pub mod report;

use sha2::{Digest, Sha256};

/// Lowercase hex SHA-256 of a byte slice; used for input checksums in
/// reports and for model-file integrity.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for byte in digest {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}
