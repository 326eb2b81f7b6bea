//! Word-category dictionaries with prefix wildcards, in the style of
//! word-count text analysis tools: a word maps to a set of named categories,
//! and category scores are percentages of total words.
//!
//! Matching folds the query (NFC, then lowercase) and tries exact patterns
//! first; only when no exact pattern matches are prefix patterns consulted,
//! longest stem first. A prefix pattern matches its bare stem too, so
//! `certain*` covers "certain" as well as "certainly".
//!
//! This module owns the in-memory type and the matching rules; reading the
//! on-disk dictionary format lives with the rest of the file IO.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use core::fmt;

use unicode_normalization::UnicodeNormalization;

use crate::corpus::Language;
use crate::textproc::TokenizedText;

/// Canonical form used for both patterns and queries: NFC, then lowercase.
pub(crate) fn fold(s: &str) -> String {
    s.nfc().collect::<String>().to_lowercase()
}

/// A validated, immutable dictionary. Patterns are stored folded; category
/// order is preserved from construction and drives output ordering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    language: Language,
    categories: Vec<String>,
    exact: BTreeMap<String, Vec<u16>>,
    prefixes: BTreeMap<String, Vec<u16>>,
}

/// The categories one word matched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryHit {
    pub word: String,
    pub categories: BTreeSet<String>,
}

impl Lexicon {
    /// Builds a lexicon from category names and `(pattern, category
    /// positions)` entries. A trailing `*` marks a prefix pattern; `*` is
    /// not allowed anywhere else. Positions index into `categories`.
    pub fn new(
        language: Language,
        categories: Vec<String>,
        entries: Vec<(String, Vec<u16>)>,
    ) -> Result<Lexicon, LexiconError> {
        if categories.is_empty() {
            return Err(LexiconError::EmptyCategories);
        }
        let mut seen = BTreeSet::new();
        for name in &categories {
            if name.trim().is_empty() {
                return Err(LexiconError::EmptyCategoryName);
            }
            if !seen.insert(name.as_str()) {
                return Err(LexiconError::DuplicateCategory(name.clone()));
            }
        }
        let mut exact: BTreeMap<String, Vec<u16>> = BTreeMap::new();
        let mut prefixes: BTreeMap<String, Vec<u16>> = BTreeMap::new();
        for (raw_pattern, mut indices) in entries {
            let is_prefix = raw_pattern.ends_with('*');
            let stem_raw = if is_prefix { &raw_pattern[..raw_pattern.len() - 1] } else { &raw_pattern[..] };
            if stem_raw.contains('*') {
                return Err(LexiconError::BadWildcard(raw_pattern.clone()));
            }
            let stem = fold(stem_raw);
            if stem.is_empty() {
                return Err(LexiconError::EmptyPattern);
            }
            if indices.is_empty() {
                return Err(LexiconError::NoCategories(raw_pattern.clone()));
            }
            indices.sort_unstable();
            indices.dedup();
            for &index in &indices {
                if usize::from(index) >= categories.len() {
                    return Err(LexiconError::UnknownCategory { pattern: raw_pattern.clone(), index });
                }
            }
            let table = if is_prefix { &mut prefixes } else { &mut exact };
            if table.insert(stem, indices).is_some() {
                return Err(LexiconError::DuplicatePattern(raw_pattern));
            }
        }
        Ok(Lexicon { language, categories, exact, prefixes })
    }

    pub fn language(&self) -> Language {
        self.language
    }

    pub fn categories(&self) -> &[String] {
        &self.categories
    }

    pub fn pattern_count(&self) -> usize {
        self.exact.len() + self.prefixes.len()
    }

    /// Category positions the folded word matches, following the precedence
    /// rules: exact match wins outright; otherwise the longest matching
    /// prefix stem.
    fn match_indices(&self, folded: &str) -> &[u16] {
        if let Some(indices) = self.exact.get(folded) {
            return indices;
        }
        // Walk char-boundary prefixes of the word, longest first.
        let mut ends: Vec<usize> = folded.char_indices().map(|(i, _)| i).skip(1).collect();
        ends.push(folded.len());
        for &end in ends.iter().rev() {
            if let Some(indices) = self.prefixes.get(&folded[..end]) {
                return indices;
            }
        }
        &[]
    }

    /// Names of the categories a word belongs to; empty for out-of-vocabulary
    /// words. Case- and normalization-insensitive in the query.
    pub fn match_word(&self, word: &str) -> CategoryHit {
        let folded = fold(word);
        let categories = self
            .match_indices(&folded)
            .iter()
            .map(|&i| self.categories[usize::from(i)].clone())
            .collect();
        CategoryHit { word: word.to_string(), categories }
    }

    /// Per-category percentages over the text's word tokens:
    /// `100 × hits / word_count`. Every category is present in the output,
    /// zero when nothing matched. Errors when the text has no word tokens.
    pub fn category_frequencies(
        &self,
        tokens: &TokenizedText,
    ) -> Result<BTreeMap<String, f64>, LexiconError> {
        if tokens.word_count == 0 {
            return Err(LexiconError::ZeroWords);
        }
        let mut counts = alloc::vec![0usize; self.categories.len()];
        for word in tokens.words() {
            for &index in self.match_indices(&fold(&word.surface)) {
                counts[usize::from(index)] += 1;
            }
        }
        let total = tokens.word_count as f64;
        Ok(self
            .categories
            .iter()
            .zip(&counts)
            .map(|(name, &count)| (name.clone(), 100.0 * count as f64 / total))
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LexiconError {
    EmptyCategories,
    EmptyCategoryName,
    DuplicateCategory(String),
    EmptyPattern,
    BadWildcard(String),
    NoCategories(String),
    UnknownCategory { pattern: String, index: u16 },
    DuplicatePattern(String),
    ZeroWords,
}

impl fmt::Display for LexiconError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LexiconError::EmptyCategories => f.write_str("lexicon declares no categories"),
            LexiconError::EmptyCategoryName => f.write_str("empty category name"),
            LexiconError::DuplicateCategory(name) => write!(f, "duplicate category {name:?}"),
            LexiconError::EmptyPattern => f.write_str("empty pattern"),
            LexiconError::BadWildcard(pattern) => {
                write!(f, "pattern {pattern:?}: `*` allowed only as the final character")
            }
            LexiconError::NoCategories(pattern) => {
                write!(f, "pattern {pattern:?} lists no categories")
            }
            LexiconError::UnknownCategory { pattern, index } => {
                write!(f, "pattern {pattern:?} references unknown category index {index}")
            }
            LexiconError::DuplicatePattern(pattern) => write!(f, "duplicate pattern {pattern:?}"),
            LexiconError::ZeroWords => f.write_str("text has no word tokens"),
        }
    }
}

impl core::error::Error for LexiconError {}
