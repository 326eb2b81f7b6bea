//! Feature-matrix CSV: `article_id,label,` then the full 102-column
//! registry in registry order. Values are written with six significant
//! digits in a stable format, so identical runs produce identical bytes.

use std::path::Path;

use newsstyle_core::corpus::ClassLabel;
use newsstyle_core::features::{FeatureMatrix, FeatureVector, REGISTRY, REGISTRY_LEN};

use crate::error::CliError;

/// Six-significant-digit rendering: positional where compact, scientific
/// for extreme magnitudes, no trailing zeros.
pub fn format_significant(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return if v.is_nan() { "NaN".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{v:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponential format");
    let exp: i32 = exp.parse().expect("exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();

    let body = if (-4..=14).contains(&exp) {
        let positional = if exp >= 0 {
            let int_len = exp as usize + 1;
            if int_len >= digits.len() {
                let mut s = digits.clone();
                s.push_str(&"0".repeat(int_len - digits.len()));
                s
            } else {
                format!("{}.{}", &digits[..int_len], &digits[int_len..])
            }
        } else {
            format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
        };
        if positional.contains('.') {
            positional.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            positional
        }
    } else {
        let trimmed = digits.trim_end_matches('0');
        let head = if trimmed.is_empty() { "0" } else { trimmed };
        let rendered = if head.len() == 1 {
            head.to_string()
        } else {
            format!("{}.{}", &head[..1], &head[1..])
        };
        format!("{rendered}e{exp}")
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

pub fn write_matrix(matrix: &FeatureMatrix, path: &Path) -> Result<(), CliError> {
    let to_write =
        |source: csv::Error| CliError::Write { path: path.to_path_buf(), source: source.into() };
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| CliError::Write { path: path.to_path_buf(), source: e.into() })?;
    let mut header = vec!["article_id".to_string(), "label".to_string()];
    header.extend(REGISTRY.iter().map(|id| id.to_string()));
    writer.write_record(&header).map_err(to_write)?;
    for row in &matrix.rows {
        let mut record = vec![row.article_id.clone(), row.label.code().to_string()];
        record.extend(row.values().iter().map(|&v| format_significant(v)));
        writer.write_record(&record).map_err(to_write)?;
    }
    writer.flush().map_err(|source| CliError::Write { path: path.to_path_buf(), source })?;
    Ok(())
}

/// Loads a matrix, insisting on the exact registry header: a CSV missing
/// any feature column (or carrying extras) is rejected by name.
pub fn load_matrix(path: &Path) -> Result<FeatureMatrix, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| CliError::Read { path: path.to_path_buf(), source: e.into() })?;
    let fail = |detail: String| CliError::format(path, detail);

    let header = reader
        .headers()
        .map_err(|e| fail(format!("cannot read header: {e}")))?
        .clone();
    if header.len() != REGISTRY_LEN + 2 {
        return Err(fail(format!(
            "expected {} columns (article_id, label, {} features), found {}",
            REGISTRY_LEN + 2,
            REGISTRY_LEN,
            header.len()
        )));
    }
    if &header[0] != "article_id" || &header[1] != "label" {
        return Err(fail("header must start with article_id,label".to_string()));
    }
    for (i, id) in REGISTRY.iter().enumerate() {
        let got = &header[i + 2];
        if got != id.to_string().as_str() {
            return Err(fail(format!(
                "feature column {} is {got:?}, expected {id:?} — this file does not carry the full feature registry",
                i + 3
            )));
        }
    }

    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "matrix".to_string());
    // "demo.features.csv" names the dataset "demo", matching what extract
    // wrote it from.
    let name = stem.strip_suffix(".features").unwrap_or(&stem).to_string();
    let mut rows = Vec::new();
    for (number, record) in reader.records().enumerate() {
        let record = record.map_err(|e| fail(format!("row {}: {e}", number + 2)))?;
        let line = number + 2;
        let id = record[0].to_string();
        let label = ClassLabel::parse(&record[1])
            .ok_or_else(|| fail(format!("row {line}: unknown label {:?}", &record[1])))?;
        let mut values = Vec::with_capacity(REGISTRY_LEN);
        for (i, cell) in record.iter().skip(2).enumerate() {
            let v: f64 = cell.parse().map_err(|_| {
                fail(format!("row {line}, column {}: bad number {cell:?}", i + 3))
            })?;
            values.push(v);
        }
        rows.push(
            FeatureVector::from_registry_values(id, label, values)
                .map_err(|e| fail(format!("row {line}: {e}")))?,
        );
    }
    if rows.is_empty() {
        return Err(fail("no data rows".to_string()));
    }
    Ok(FeatureMatrix { corpus_name: name, feature_ids: REGISTRY.to_vec(), rows })
}
