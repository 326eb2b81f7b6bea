//! Dictionary files: a category index between `%` marker lines, then
//! `pattern<TAB>index[,index…]` entries, with `#` comments and a required
//! `# language: <tag>` directive so the dictionary can refuse corpora in
//! the wrong language. File indices are arbitrary labels — they are mapped
//! to category positions on load.

use std::collections::BTreeMap;
use std::path::Path;

use newsstyle_core::corpus::Language;
use newsstyle_core::lexicon::Lexicon;

use crate::error::CliError;

pub fn load_lexicon(path: &Path) -> Result<Lexicon, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    let fail = |line: usize, detail: String| -> CliError {
        CliError::format(path, format!("line {line}: {detail}"))
    };

    let mut language: Option<Language> = None;
    let mut marker_count = 0;
    let mut categories: Vec<String> = Vec::new();
    let mut index_to_position: BTreeMap<u32, u16> = BTreeMap::new();
    let mut entries: Vec<(String, Vec<u16>)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let line = raw.trim();
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(tag) = comment.trim().strip_prefix("language:") {
                let tag = tag.trim();
                language = Some(Language::parse(tag).ok_or_else(|| {
                    fail(number, format!("unknown language tag {tag:?} (expected en or pt)"))
                })?);
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        if line == "%" {
            marker_count += 1;
            if marker_count > 2 {
                return Err(fail(number, "more than two % marker lines".into()));
            }
            continue;
        }
        match marker_count {
            0 => return Err(fail(number, format!("unexpected content before first %: {line:?}"))),
            1 => {
                let mut parts = line.split_whitespace();
                let index: u32 = parts
                    .next()
                    .unwrap()
                    .parse()
                    .map_err(|_| fail(number, format!("category line must start with an integer index: {line:?}")))?;
                let name: String = parts.collect::<Vec<_>>().join(" ");
                if name.is_empty() {
                    return Err(fail(number, format!("category {index} has no name")));
                }
                if categories.len() >= usize::from(u16::MAX) {
                    return Err(fail(number, "too many categories".into()));
                }
                if index_to_position.insert(index, categories.len() as u16).is_some() {
                    return Err(fail(number, format!("category index {index} defined twice")));
                }
                categories.push(name);
            }
            _ => {
                let mut parts = line.split_whitespace();
                let pattern = parts.next().unwrap().to_string();
                let mut positions = Vec::new();
                for token in parts.flat_map(|chunk| chunk.split(',')) {
                    if token.is_empty() {
                        continue;
                    }
                    let index: u32 = token.parse().map_err(|_| {
                        fail(number, format!("bad category index {token:?} for {pattern:?}"))
                    })?;
                    let position = index_to_position.get(&index).ok_or_else(|| {
                        fail(number, format!("pattern {pattern:?} uses undefined category index {index}"))
                    })?;
                    positions.push(*position);
                }
                if positions.is_empty() {
                    return Err(fail(number, format!("pattern {pattern:?} lists no categories")));
                }
                entries.push((pattern, positions));
            }
        }
    }

    let language = language.ok_or_else(|| {
        CliError::format(path, "missing \"# language: <en|pt>\" directive")
    })?;
    if marker_count < 2 {
        return Err(CliError::format(path, "expected two % marker lines around the category list"));
    }
    Lexicon::new(language, categories, entries).map_err(CliError::Lexicon)
}
