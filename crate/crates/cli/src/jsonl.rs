//! JSON-lines corpus files: one article object per line. Articles are
//! NFC-normalized on load and every structural error carries the line it
//! came from.

use std::path::Path;

use newsstyle_core::corpus::{Article, Corpus, CorpusError};

use crate::error::CliError;

/// Loads a corpus named after the file stem. Blank lines are allowed and
/// skipped; every parse or validation failure names its 1-based line.
pub fn load_corpus(path: &Path) -> Result<Corpus, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    let name = path
        .file_stem()
        .map(|stem| stem.to_string_lossy().into_owned())
        .unwrap_or_else(|| "corpus".to_string());

    let mut articles = Vec::new();
    let mut lines = Vec::new();
    for (number, raw) in text.lines().enumerate() {
        if raw.trim().is_empty() {
            continue;
        }
        let article: Article = serde_json::from_str(raw).map_err(|e| {
            CliError::format(path, format!("line {}: {e}", number + 1))
        })?;
        let article = article.into_nfc();
        article.validate().map_err(|e| {
            CliError::format(path, format!("line {}: {e}", number + 1))
        })?;
        articles.push(article);
        lines.push(number + 1);
    }
    if articles.is_empty() {
        return Err(CliError::format(path, "no articles in file"));
    }
    Corpus::new(name, articles).map_err(|e| match e {
        CorpusError::DuplicateId { ref id, index } => {
            CliError::format(path, format!("duplicate id {id:?} at line {}", lines[index]))
        }
        other => CliError::Corpus(other),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use newsstyle_core::corpus::ClassLabel;

    fn write(lines: &str) -> (tempfile::TempDir, std::path::PathBuf) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sample.jsonl");
        std::fs::write(&path, lines).unwrap();
        (dir, path)
    }

    const GOOD: &str = r#"{"id":"a1","source":"siteA","language":"en","label":"R","title":"A tale","body":"Words here."}
{"id":"a2","source":"siteB","language":"en","label":"U","title":"Another","body":"More words."}
"#;

    #[test]
    fn loads_articles_and_names_corpus_after_the_file() {
        let (_dir, path) = write(GOOD);
        let corpus = load_corpus(&path).unwrap();
        assert_eq!(corpus.name(), "sample");
        assert_eq!(corpus.len(), 2);
        assert_eq!(corpus.articles()[1].label, ClassLabel::U);
    }

    #[test]
    fn duplicate_id_error_names_the_line() {
        let dup = r#"{"id":"a1","source":"s","language":"en","label":"R","title":"T","body":"B."}

{"id":"a1","source":"s","language":"en","label":"U","title":"T2","body":"B2."}
"#;
        let (_dir, path) = write(dup);
        let err = load_corpus(&path).unwrap_err().to_string();
        assert!(err.contains("duplicate id \"a1\" at line 3"), "{err}");
    }

    #[test]
    fn bad_json_and_bad_fields_name_their_lines() {
        let (_dir, path) = write("{broken\n");
        let err = load_corpus(&path).unwrap_err().to_string();
        assert!(err.contains("line 1"), "{err}");

        let blank_title = r#"{"id":"a1","source":"s","language":"en","label":"R","title":"  ","body":"B."}"#;
        let (_dir2, path2) = write(blank_title);
        let err = load_corpus(&path2).unwrap_err().to_string();
        assert!(err.contains("line 1"), "{err}");
    }

    #[test]
    fn empty_file_is_an_error() {
        let (_dir, path) = write("\n\n");
        let err = load_corpus(&path).unwrap_err().to_string();
        assert!(err.contains("no articles"), "{err}");
    }
}
