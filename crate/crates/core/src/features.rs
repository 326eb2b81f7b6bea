//! The closed feature registry — 51 measurements × {title, body} = 102
//! features per article — and extraction of complete feature vectors.
//!
//! Measurements fall into four groups:
//!
//! * **complexity** — readability indices (GI, SMOG, FK-RE, FK-GL) and
//!   lexical statistics (TTR, WC, WPS, AVG_WLEN, SixLtr);
//! * **stylistic** — punctuation-mark and all-caps rates;
//! * **linguistic** / **psychological** — lexicon category rates, except
//!   `Number`, which counts numeral tokens straight from the tokenizer.
//!
//! Every rate is `100 × count / word_count`, the word-count convention of
//! LIWC-style tools. Title (`TTL`) and body (`TXT`) are measured
//! independently; a feature vector always carries all 102 values in
//! registry order (scope-major: every `TTL_*`, then every `TXT_*`).

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{Article, ClassLabel, Corpus, CorpusError, Language};
use crate::lexicon::{fold, Lexicon, LexiconError};
use crate::textproc::{analyze, TextError, TokenKind, TokenizedText};

/// Which text of the article a feature measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scope {
    /// The article title.
    Ttl,
    /// The article body.
    Txt,
}

impl Scope {
    pub fn code(self) -> &'static str {
        match self {
            Scope::Ttl => "TTL",
            Scope::Txt => "TXT",
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FeatureCategory {
    Complexity,
    Stylistic,
    Linguistic,
    Psychological,
}

impl FeatureCategory {
    pub fn code(self) -> &'static str {
        match self {
            FeatureCategory::Complexity => "complexity",
            FeatureCategory::Stylistic => "stylistic",
            FeatureCategory::Linguistic => "linguistic",
            FeatureCategory::Psychological => "psychological",
        }
    }
}

impl fmt::Display for FeatureCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl Serialize for FeatureCategory {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FeatureCategory {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        match s.as_str() {
            "complexity" => Ok(FeatureCategory::Complexity),
            "stylistic" => Ok(FeatureCategory::Stylistic),
            "linguistic" => Ok(FeatureCategory::Linguistic),
            "psychological" => Ok(FeatureCategory::Psychological),
            _ => Err(serde::de::Error::custom(format_args!("unknown feature category {s:?}"))),
        }
    }
}

/// One registry feature: a scope plus a measurement abbreviation.
/// Serialized as its column name, e.g. `"TTL_GI"` or `"TXT_AVG_WLEN"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FeatureId {
    pub scope: Scope,
    pub abbr: &'static str,
    pub category: FeatureCategory,
}

impl fmt::Display for FeatureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.scope, self.abbr)
    }
}

impl FromStr for FeatureId {
    type Err = FeatureError;

    fn from_str(s: &str) -> Result<FeatureId, FeatureError> {
        // Split at the first underscore only: abbreviations such as
        // AVG_WLEN contain underscores of their own.
        let parsed = s.split_once('_').and_then(|(scope, abbr)| {
            let scope = match scope {
                "TTL" => Scope::Ttl,
                "TXT" => Scope::Txt,
                _ => return None,
            };
            REGISTRY.iter().find(|id| id.scope == scope && id.abbr == abbr).copied()
        });
        parsed.ok_or_else(|| FeatureError::UnknownFeature(s.to_owned()))
    }
}

impl Serialize for FeatureId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FeatureId {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The 51 measurement abbreviations in registry order, with their groups.
pub const ABBREVIATIONS: [(&str, FeatureCategory); 51] = [
    ("GI", FeatureCategory::Complexity),
    ("SMOG", FeatureCategory::Complexity),
    ("FK-RE", FeatureCategory::Complexity),
    ("FK-GL", FeatureCategory::Complexity),
    ("TTR", FeatureCategory::Complexity),
    ("WC", FeatureCategory::Complexity),
    ("WPS", FeatureCategory::Complexity),
    ("AVG_WLEN", FeatureCategory::Complexity),
    ("SixLtr", FeatureCategory::Complexity),
    ("Comma", FeatureCategory::Stylistic),
    ("Period", FeatureCategory::Stylistic),
    ("Colon", FeatureCategory::Stylistic),
    ("SemiC", FeatureCategory::Stylistic),
    ("QMark", FeatureCategory::Stylistic),
    ("Exclam", FeatureCategory::Stylistic),
    ("Dash", FeatureCategory::Stylistic),
    ("Quote", FeatureCategory::Stylistic),
    ("Parenth", FeatureCategory::Stylistic),
    ("OtherP", FeatureCategory::Stylistic),
    ("AllPunc", FeatureCategory::Stylistic),
    ("AllCaps", FeatureCategory::Stylistic),
    ("Funct", FeatureCategory::Linguistic),
    ("Pronoun", FeatureCategory::Linguistic),
    ("PPronoun", FeatureCategory::Linguistic),
    ("IPron", FeatureCategory::Linguistic),
    ("You", FeatureCategory::Linguistic),
    ("SheHe", FeatureCategory::Linguistic),
    ("We", FeatureCategory::Linguistic),
    ("Negate", FeatureCategory::Linguistic),
    ("Compare", FeatureCategory::Linguistic),
    ("Preps", FeatureCategory::Linguistic),
    ("Article", FeatureCategory::Linguistic),
    ("Verb", FeatureCategory::Linguistic),
    ("AuxVerb", FeatureCategory::Linguistic),
    ("Quant", FeatureCategory::Linguistic),
    ("Number", FeatureCategory::Linguistic),
    ("Adjective", FeatureCategory::Linguistic),
    ("Conj", FeatureCategory::Linguistic),
    ("Insight", FeatureCategory::Psychological),
    ("Percept", FeatureCategory::Psychological),
    ("Posemo", FeatureCategory::Psychological),
    ("Negemo", FeatureCategory::Psychological),
    ("Tentat", FeatureCategory::Psychological),
    ("Certain", FeatureCategory::Psychological),
    ("Sad", FeatureCategory::Psychological),
    ("Achieve", FeatureCategory::Psychological),
    ("Anger", FeatureCategory::Psychological),
    ("Anx", FeatureCategory::Psychological),
    ("Cause", FeatureCategory::Psychological),
    ("Discrep", FeatureCategory::Psychological),
    ("Feel", FeatureCategory::Psychological),
];

pub const REGISTRY_LEN: usize = ABBREVIATIONS.len() * 2;

const fn build_registry() -> [FeatureId; REGISTRY_LEN] {
    let mut out = [FeatureId {
        scope: Scope::Ttl,
        abbr: "",
        category: FeatureCategory::Complexity,
    }; REGISTRY_LEN];
    let mut i = 0;
    while i < ABBREVIATIONS.len() {
        let (abbr, category) = ABBREVIATIONS[i];
        out[i] = FeatureId { scope: Scope::Ttl, abbr, category };
        out[i + ABBREVIATIONS.len()] = FeatureId { scope: Scope::Txt, abbr, category };
        i += 1;
    }
    out
}

/// Every feature, in the frozen column order: all `TTL_*` (registry
/// abbreviation order), then all `TXT_*`.
pub static REGISTRY: [FeatureId; REGISTRY_LEN] = build_registry();

/// Position of `id` in [`REGISTRY`].
pub fn registry_index(id: FeatureId) -> usize {
    let base = match id.scope {
        Scope::Ttl => 0,
        Scope::Txt => ABBREVIATIONS.len(),
    };
    // The registry is closed; a FeatureId can only be built from it.
    base + ABBREVIATIONS
        .iter()
        .position(|&(abbr, _)| abbr == id.abbr)
        .expect("feature id from the registry")
}

/// All 102 values for one article, aligned with [`REGISTRY`].
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub article_id: String,
    pub label: ClassLabel,
    values: Vec<f64>,
}

impl FeatureVector {
    /// `values` must be aligned with [`REGISTRY`].
    pub fn from_registry_values(
        article_id: String,
        label: ClassLabel,
        values: Vec<f64>,
    ) -> Result<FeatureVector, FeatureError> {
        if values.len() != REGISTRY_LEN {
            return Err(FeatureError::WrongArity { got: values.len() });
        }
        Ok(FeatureVector { article_id, label, values })
    }

    pub fn value(&self, id: FeatureId) -> f64 {
        self.values[registry_index(id)]
    }

    /// Values in registry order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Feature vectors for a whole corpus, one row per article in corpus order.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub corpus_name: String,
    pub feature_ids: Vec<FeatureId>,
    pub rows: Vec<FeatureVector>,
}

impl FeatureMatrix {
    pub fn labels(&self) -> Vec<ClassLabel> {
        self.rows.iter().map(|r| r.label).collect()
    }

    /// One feature's value for every row, in row order.
    pub fn column(&self, id: FeatureId) -> Vec<f64> {
        self.rows.iter().map(|r| r.value(id)).collect()
    }

    /// Stratified train/test row split with the same counting and seeding
    /// rules as the corpus-level split; row order is preserved on both
    /// sides.
    pub fn stratified_split(
        &self,
        test_fraction: f64,
        seed: u64,
    ) -> Result<(FeatureMatrix, FeatureMatrix), CorpusError> {
        let labels = self.labels();
        let mask = crate::corpus::stratified_test_mask(&labels, test_fraction, seed)?;
        let mut train = Vec::new();
        let mut test = Vec::new();
        for (row, &is_test) in self.rows.iter().zip(&mask) {
            if is_test {
                test.push(row.clone());
            } else {
                train.push(row.clone());
            }
        }
        Ok((
            FeatureMatrix {
                corpus_name: alloc::format!("{}-train", self.corpus_name),
                feature_ids: self.feature_ids.clone(),
                rows: train,
            },
            FeatureMatrix {
                corpus_name: alloc::format!("{}-test", self.corpus_name),
                feature_ids: self.feature_ids.clone(),
                rows: test,
            },
        ))
    }

    /// Duplicates minority-class rows (seeded, with replacement, appended
    /// after the originals) until the two classes are balanced.
    pub fn upsample_minority(
        &self,
        classes: (ClassLabel, ClassLabel),
        seed: u64,
    ) -> Result<FeatureMatrix, CorpusError> {
        let labels = self.labels();
        let additions = crate::corpus::upsample_additions(&labels, classes, seed)?;
        let mut rows = self.rows.clone();
        rows.extend(additions.into_iter().map(|i| self.rows[i].clone()));
        Ok(FeatureMatrix {
            corpus_name: self.corpus_name.clone(),
            feature_ids: self.feature_ids.clone(),
            rows,
        })
    }
}

/// The four readability indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Readability {
    pub gi: f64,
    pub smog: f64,
    pub fk_re: f64,
    pub fk_gl: f64,
}

/// Readability from raw counts: `w` words, `s` sentences, `y` syllables,
/// `p` polysyllabic (≥ 3 syllable) words. Standard published constants; no
/// clamping, so short texts can score outside the usual school-grade range.
pub fn readability_from_counts(
    w: usize,
    s: usize,
    y: usize,
    p: usize,
) -> Result<Readability, FeatureError> {
    if w == 0 {
        return Err(FeatureError::ZeroWords);
    }
    if s == 0 {
        return Err(FeatureError::ZeroSentences);
    }
    let (w, s, y, p) = (w as f64, s as f64, y as f64, p as f64);
    Ok(Readability {
        gi: 0.4 * (w / s + 100.0 * p / w),
        smog: 1.0430 * libm::sqrt(p * 30.0 / s) + 3.1291,
        fk_re: 206.835 - 1.015 * (w / s) - 84.6 * (y / w),
        fk_gl: 0.39 * (w / s) + 11.8 * (y / w) - 15.59,
    })
}

pub fn readability_indices(tok: &TokenizedText) -> Result<Readability, FeatureError> {
    readability_from_counts(
        tok.word_count,
        tok.sentence_count,
        tok.syllable_total,
        tok.polysyllable_count,
    )
}

/// Lexical statistics over word tokens.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lexical {
    /// Distinct case-folded word surfaces / word count; ∈ (0, 1].
    pub ttr: f64,
    pub wc: f64,
    pub wps: f64,
    pub avg_wlen: f64,
    /// Percent of words strictly longer than six letters.
    pub six_ltr: f64,
}

pub fn lexical_stats(tok: &TokenizedText) -> Result<Lexical, FeatureError> {
    if tok.word_count == 0 {
        return Err(FeatureError::ZeroWords);
    }
    if tok.sentence_count == 0 {
        return Err(FeatureError::ZeroSentences);
    }
    let w = tok.word_count as f64;
    let distinct: BTreeSet<String> = tok.words().map(|t| fold(&t.surface)).collect();
    let letters: usize = tok.words().map(|t| t.letter_count).sum();
    let long_words = tok.words().filter(|t| t.letter_count > 6).count();
    Ok(Lexical {
        ttr: distinct.len() as f64 / w,
        wc: w,
        wps: w / tok.sentence_count as f64,
        avg_wlen: letters as f64 / w,
        six_ltr: 100.0 * long_words as f64 / w,
    })
}

const STYLISTIC_ABBRS: [&str; 12] = [
    "Comma", "Period", "Colon", "SemiC", "QMark", "Exclam", "Dash", "Quote", "Parenth", "OtherP",
    "AllPunc", "AllCaps",
];

fn punct_class(c: char) -> &'static str {
    match c {
        ',' => "Comma",
        '.' => "Period",
        ':' => "Colon",
        ';' => "SemiC",
        '?' => "QMark",
        '!' => "Exclam",
        '-' | '–' | '—' => "Dash",
        '"' | '“' | '”' | '\'' | '‘' | '’' => "Quote",
        '(' | ')' => "Parenth",
        _ => "OtherP",
    }
}

/// Punctuation and casing rates, percent of words. The punctuation classes
/// partition the punctuation tokens, so `AllPunc` equals their sum.
pub fn stylistic_profile(tok: &TokenizedText) -> Result<BTreeMap<&'static str, f64>, FeatureError> {
    if tok.word_count == 0 {
        return Err(FeatureError::ZeroWords);
    }
    let mut counts: BTreeMap<&'static str, usize> =
        STYLISTIC_ABBRS.iter().map(|&a| (a, 0)).collect();
    for token in tok.tokens() {
        match token.kind {
            TokenKind::Punct => {
                let c = token.surface.chars().next().expect("punct token has its character");
                *counts.get_mut(punct_class(c)).expect("class name in table") += 1;
                *counts.get_mut("AllPunc").expect("AllPunc in table") += 1;
            }
            TokenKind::Word if token.is_all_caps => {
                *counts.get_mut("AllCaps").expect("AllCaps in table") += 1;
            }
            _ => {}
        }
    }
    let w = tok.word_count as f64;
    Ok(counts.into_iter().map(|(abbr, count)| (abbr, 100.0 * count as f64 / w)).collect())
}

/// Everything needed to fill one scope's 51 values.
struct ScopeMeasurements {
    readability: Readability,
    lexical: Lexical,
    stylistic: BTreeMap<&'static str, f64>,
    lexicon_rates: BTreeMap<String, f64>,
    number_pct: f64,
}

fn measure_scope(text: &str, lexicon: &Lexicon) -> Result<ScopeMeasurements, FeatureError> {
    let tok = analyze(text, lexicon.language())?;
    let readability = readability_indices(&tok)?;
    let lexical = lexical_stats(&tok)?;
    let stylistic = stylistic_profile(&tok)?;
    let lexicon_rates = lexicon.category_frequencies(&tok)?;
    let numbers = tok.tokens().filter(|t| t.kind == TokenKind::Number).count();
    let number_pct = 100.0 * numbers as f64 / tok.word_count as f64;
    Ok(ScopeMeasurements { readability, lexical, stylistic, lexicon_rates, number_pct })
}

impl ScopeMeasurements {
    fn value(&self, abbr: &str) -> f64 {
        match abbr {
            "GI" => self.readability.gi,
            "SMOG" => self.readability.smog,
            "FK-RE" => self.readability.fk_re,
            "FK-GL" => self.readability.fk_gl,
            "TTR" => self.lexical.ttr,
            "WC" => self.lexical.wc,
            "WPS" => self.lexical.wps,
            "AVG_WLEN" => self.lexical.avg_wlen,
            "SixLtr" => self.lexical.six_ltr,
            "Number" => self.number_pct,
            _ if self.stylistic.contains_key(abbr) => self.stylistic[abbr],
            // Linguistic/psychological rates: the category is the
            // lowercased abbreviation. A category the lexicon does not
            // declare scores zero.
            _ => self.lexicon_rates.get(&abbr.to_lowercase()).copied().unwrap_or(0.0),
        }
    }
}

/// Extracts all 102 features for one article. The lexicon must match the
/// article's language; analysis errors carry the article id and scope.
pub fn extract_article(
    article: &Article,
    lexicon: &Lexicon,
) -> Result<FeatureVector, FeatureError> {
    if article.language != lexicon.language() {
        return Err(FeatureError::LanguageMismatch {
            article: article.language,
            lexicon: lexicon.language(),
        });
    }
    let wrap = |scope: Scope, source: FeatureError| FeatureError::Article {
        id: article.id.clone(),
        scope,
        source: Box::new(source),
    };
    let title = measure_scope(&article.title, lexicon).map_err(|e| wrap(Scope::Ttl, e))?;
    let body = measure_scope(&article.body, lexicon).map_err(|e| wrap(Scope::Txt, e))?;
    let mut values = Vec::with_capacity(REGISTRY_LEN);
    for measurements in [&title, &body] {
        for (abbr, _) in ABBREVIATIONS {
            values.push(measurements.value(abbr));
        }
    }
    Ok(FeatureVector { article_id: article.id.clone(), label: article.label, values })
}

/// One matrix row per article, in corpus order. Extraction is pure per
/// article; this reference implementation runs sequentially, which is the
/// ordering any parallel execution must reproduce.
pub fn extract_corpus(corpus: &Corpus, lexicon: &Lexicon) -> Result<FeatureMatrix, FeatureError> {
    let rows = corpus
        .articles()
        .iter()
        .map(|article| extract_article(article, lexicon))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FeatureMatrix {
        corpus_name: corpus.name().to_owned(),
        feature_ids: REGISTRY.to_vec(),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum FeatureError {
    ZeroWords,
    ZeroSentences,
    Text(TextError),
    Lexicon(LexiconError),
    LanguageMismatch { article: Language, lexicon: Language },
    UnknownFeature(String),
    WrongArity { got: usize },
    Article { id: String, scope: Scope, source: Box<FeatureError> },
}

impl From<TextError> for FeatureError {
    fn from(e: TextError) -> FeatureError {
        FeatureError::Text(e)
    }
}

impl From<LexiconError> for FeatureError {
    fn from(e: LexiconError) -> FeatureError {
        FeatureError::Lexicon(e)
    }
}

impl fmt::Display for FeatureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureError::ZeroWords => f.write_str("zero word tokens"),
            FeatureError::ZeroSentences => f.write_str("zero sentences"),
            FeatureError::Text(e) => write!(f, "{e}"),
            FeatureError::Lexicon(e) => write!(f, "{e}"),
            FeatureError::LanguageMismatch { article, lexicon } => {
                write!(f, "article language {article} does not match lexicon language {lexicon}")
            }
            FeatureError::UnknownFeature(name) => write!(f, "unknown feature {name:?}"),
            FeatureError::WrongArity { got } => {
                write!(f, "expected {REGISTRY_LEN} feature values, got {got}")
            }
            FeatureError::Article { id, scope, source } => {
                write!(f, "article {id:?}, {scope} text: {source}")
            }
        }
    }
}

impl core::error::Error for FeatureError {}
