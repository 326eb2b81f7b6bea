//! Run configuration: defaults, a flat `key = value` config file, and the
//! precedence rule "command-line flags override file values". The resolved
//! configuration is echoed into every report for provenance.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Table,
    Both,
}

impl Format {
    pub fn parse(s: &str) -> Option<Format> {
        match s {
            "json" => Some(Format::Json),
            "table" => Some(Format::Table),
            "both" => Some(Format::Both),
            _ => None,
        }
    }

    pub fn wants_table(self) -> bool {
        matches!(self, Format::Table | Format::Both)
    }
}

/// Everything a command run depends on besides its input files. All fields
/// have working defaults except `seed`, which the splitting and training
/// commands insist on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corpus: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lexicon: Option<PathBuf>,
    pub out: PathBuf,
    pub p_threshold: f64,
    pub d_select_threshold: f64,
    pub d_equality_threshold: f64,
    pub lambda: f64,
    pub epochs: u32,
    pub test_fraction: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub format: Format,
    /// Stamped into model provenance when set; omitted by default so that
    /// identical runs produce byte-identical model files.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            corpus: None,
            lexicon: None,
            out: PathBuf::from("."),
            p_threshold: 0.05,
            d_select_threshold: 0.5,
            d_equality_threshold: 0.2,
            lambda: 1e-4,
            epochs: 200,
            test_fraction: 0.2,
            seed: None,
            format: Format::Both,
            timestamp: None,
        }
    }
}

impl RunConfig {
    /// Reads a flat `key = value` file: one pair per line, `#` starts a
    /// comment, blank lines ignored, unknown keys rejected.
    pub fn from_file(path: &Path) -> Result<RunConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
        let mut config = RunConfig::default();
        for (number, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::format(
                    path,
                    format!("line {}: expected key = value, got {raw:?}", number + 1),
                ));
            };
            config
                .set(key.trim(), value.trim())
                .map_err(|detail| CliError::format(path, format!("line {}: {detail}", number + 1)))?;
        }
        Ok(config)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
            value.parse().map_err(|_| format!("invalid value {value:?} for {key}"))
        }
        match key {
            "corpus" => self.corpus = Some(PathBuf::from(value)),
            "lexicon" => self.lexicon = Some(PathBuf::from(value)),
            "out" => self.out = PathBuf::from(value),
            "p_threshold" => self.p_threshold = parse(key, value)?,
            "d_select_threshold" => self.d_select_threshold = parse(key, value)?,
            "d_equality_threshold" => self.d_equality_threshold = parse(key, value)?,
            "lambda" => self.lambda = parse(key, value)?,
            "epochs" => self.epochs = parse(key, value)?,
            "test_fraction" => self.test_fraction = parse(key, value)?,
            "seed" => self.seed = Some(parse(key, value)?),
            "timestamp" => self.timestamp = Some(value.to_string()),
            "format" => {
                self.format = Format::parse(value)
                    .ok_or_else(|| format!("invalid value {value:?} for format"))?
            }
            other => return Err(format!("unknown key {other:?}")),
        }
        Ok(())
    }

    /// The seed, or a validation error for commands that need one.
    pub fn require_seed(&self) -> Result<u64, CliError> {
        self.seed.ok_or_else(|| {
            CliError::Config("this command needs --seed (or seed = … in the config file)".into())
        })
    }

    /// Flat map of the resolved values, echoed into reports.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let mut map = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            map.insert(k.to_string(), v);
        };
        if let Some(corpus) = &self.corpus {
            put("corpus", corpus.display().to_string());
        }
        if let Some(lexicon) = &self.lexicon {
            put("lexicon", lexicon.display().to_string());
        }
        put("out", self.out.display().to_string());
        put("p_threshold", self.p_threshold.to_string());
        put("d_select_threshold", self.d_select_threshold.to_string());
        put("d_equality_threshold", self.d_equality_threshold.to_string());
        put("lambda", self.lambda.to_string());
        put("epochs", self.epochs.to_string());
        put("test_fraction", self.test_fraction.to_string());
        if let Some(seed) = self.seed {
            put("seed", seed.to_string());
        }
        if let Some(timestamp) = &self.timestamp {
            put("timestamp", timestamp.clone());
        }
        put(
            "format",
            match self.format {
                Format::Json => "json",
                Format::Table => "table",
                Format::Both => "both",
            }
            .to_string(),
        );
        map
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_values_parse_and_unknown_keys_fail() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(
            &path,
            "# analysis knobs\np_threshold = 0.01\nseed = 42\nformat = json # output\n\nepochs=50\n",
        )
        .unwrap();
        let config = RunConfig::from_file(&path).unwrap();
        assert_eq!(config.p_threshold, 0.01);
        assert_eq!(config.seed, Some(42));
        assert_eq!(config.format, Format::Json);
        assert_eq!(config.epochs, 50);
        assert_eq!(config.lambda, 1e-4);

        std::fs::write(&path, "not_a_key = 1\n").unwrap();
        let err = RunConfig::from_file(&path).unwrap_err();
        assert!(err.to_string().contains("unknown key"), "{err}");

        std::fs::write(&path, "just some words\n").unwrap();
        let err = RunConfig::from_file(&path).unwrap_err();
        assert!(err.to_string().contains("expected key = value"), "{err}");
    }

    #[test]
    fn seed_is_demanded_when_absent() {
        let config = RunConfig::default();
        assert!(config.require_seed().is_err());
        let with = RunConfig { seed: Some(7), ..RunConfig::default() };
        assert_eq!(with.require_seed().unwrap(), 7);
    }
}
