//! Labeled article corpora: validation, stratified splitting, and
//! minority-class upsampling.
//!
//! A [`Corpus`] keeps its articles in ingestion order; that order is the
//! determinism anchor for every downstream row ordering. Split and upsample
//! selections are driven by a ChaCha generator seeded explicitly by the
//! caller, so identical inputs and seeds reproduce identical outputs on any
//! platform.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use core::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

/// Source class of an article: Reliable, Unreliable, or Satire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ClassLabel {
    R,
    U,
    S,
}

impl ClassLabel {
    /// All labels, in the canonical ordering used for pair enumeration.
    pub const ALL: [ClassLabel; 3] = [ClassLabel::R, ClassLabel::U, ClassLabel::S];

    pub fn code(self) -> &'static str {
        match self {
            ClassLabel::R => "R",
            ClassLabel::U => "U",
            ClassLabel::S => "S",
        }
    }

    pub fn parse(s: &str) -> Option<ClassLabel> {
        match s {
            "R" => Some(ClassLabel::R),
            "U" => Some(ClassLabel::U),
            "S" => Some(ClassLabel::S),
            _ => None,
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Supported article languages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Language {
    #[serde(rename = "en")]
    En,
    #[serde(rename = "pt")]
    Pt,
}

impl Language {
    pub fn code(self) -> &'static str {
        match self {
            Language::En => "en",
            Language::Pt => "pt",
        }
    }

    pub fn parse(s: &str) -> Option<Language> {
        match s {
            "en" => Some(Language::En),
            "pt" => Some(Language::Pt),
            _ => None,
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// An ordered pair of distinct class labels.
///
/// Orientation matters everywhere: effect sizes are `first − second`, and a
/// classifier task treats `first` as the positive class. Serialized as
/// `"R_U"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassPair {
    pub first: ClassLabel,
    pub second: ClassLabel,
}

/// The canonical pair orientations: (R,U), (R,S), (U,S).
pub const CANONICAL_PAIRS: [ClassPair; 3] = [
    ClassPair { first: ClassLabel::R, second: ClassLabel::U },
    ClassPair { first: ClassLabel::R, second: ClassLabel::S },
    ClassPair { first: ClassLabel::U, second: ClassLabel::S },
];

impl ClassPair {
    pub fn new(first: ClassLabel, second: ClassLabel) -> Result<ClassPair, CorpusError> {
        if first == second {
            return Err(CorpusError::DegeneratePair(first));
        }
        Ok(ClassPair { first, second })
    }

    pub fn contains(self, label: ClassLabel) -> bool {
        self.first == label || self.second == label
    }

    pub fn parse(s: &str) -> Option<ClassPair> {
        let (a, b) = s.split_once('_')?;
        let pair = ClassPair {
            first: ClassLabel::parse(a)?,
            second: ClassLabel::parse(b)?,
        };
        (pair.first != pair.second).then_some(pair)
    }
}

impl fmt::Display for ClassPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.first, self.second)
    }
}

impl Serialize for ClassPair {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ClassPair {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        ClassPair::parse(&s)
            .ok_or_else(|| serde::de::Error::custom(format!("invalid class pair {s:?}")))
    }
}

/// One labeled news article. The JSONL schema rejects unknown fields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Article {
    pub id: String,
    pub source: String,
    pub language: Language,
    pub label: ClassLabel,
    pub title: String,
    pub body: String,
}

impl Article {
    /// NFC-normalizes every text field. Applied once at load time so that
    /// downstream matching never sees mixed normalization forms.
    pub fn into_nfc(self) -> Article {
        Article {
            id: self.id.nfc().collect(),
            source: self.source.nfc().collect(),
            language: self.language,
            label: self.label,
            title: self.title.nfc().collect(),
            body: self.body.nfc().collect(),
        }
    }

    /// Field-level invariants: non-empty id, and title/body non-empty after
    /// whitespace trimming.
    pub fn validate(&self) -> Result<(), CorpusError> {
        if self.id.trim().is_empty() {
            return Err(CorpusError::EmptyField { id: self.id.clone(), field: "id" });
        }
        if self.title.trim().is_empty() {
            return Err(CorpusError::EmptyField { id: self.id.clone(), field: "title" });
        }
        if self.body.trim().is_empty() {
            return Err(CorpusError::EmptyField { id: self.id.clone(), field: "body" });
        }
        Ok(())
    }
}

/// An ordered collection of validated articles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    name: String,
    articles: Vec<Article>,
}

impl Corpus {
    /// Builds a corpus, enforcing article validity and id uniqueness.
    /// The reported index on a duplicate is the position of the second
    /// occurrence.
    pub fn new(name: impl Into<String>, articles: Vec<Article>) -> Result<Corpus, CorpusError> {
        let mut seen = BTreeSet::new();
        for (index, article) in articles.iter().enumerate() {
            article.validate()?;
            if !seen.insert(article.id.as_str()) {
                return Err(CorpusError::DuplicateId { id: article.id.clone(), index });
            }
        }
        Ok(Corpus { name: name.into(), articles })
    }

    /// Builds a corpus without the id-uniqueness check. Upsampling
    /// intentionally produces duplicate ids; this is its construction path.
    pub fn allowing_duplicates(name: impl Into<String>, articles: Vec<Article>) -> Corpus {
        Corpus { name: name.into(), articles }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn articles(&self) -> &[Article] {
        &self.articles
    }

    pub fn len(&self) -> usize {
        self.articles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.articles.is_empty()
    }

    /// Per-class article counts, derived from the article list so the two
    /// can never disagree.
    pub fn class_counts(&self) -> BTreeMap<ClassLabel, usize> {
        let mut counts = BTreeMap::new();
        for article in &self.articles {
            *counts.entry(article.label).or_insert(0) += 1;
        }
        counts
    }

    pub fn class_count(&self, label: ClassLabel) -> usize {
        self.articles.iter().filter(|a| a.label == label).count()
    }
}

/// Marks `round(count × fraction)` (minimum 1) test members per class via a
/// seeded per-class shuffle. Classes are visited in `ClassLabel::ALL` order
/// so the generator stream, and therefore the selection, is reproducible.
pub(crate) fn stratified_test_mask(
    labels: &[ClassLabel],
    test_fraction: f64,
    seed: u64,
) -> Result<Vec<bool>, CorpusError> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(CorpusError::FractionOutOfRange(test_fraction));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mask = vec![false; labels.len()];
    for class in ClassLabel::ALL {
        let mut members: Vec<usize> =
            (0..labels.len()).filter(|&i| labels[i] == class).collect();
        if members.is_empty() {
            continue;
        }
        if members.len() < 2 {
            return Err(CorpusError::ClassTooSmall { label: class, count: members.len() });
        }
        let count = members.len();
        let n_test = (libm::round(count as f64 * test_fraction) as usize).clamp(1, count);
        members.shuffle(&mut rng);
        for &i in &members[..n_test] {
            mask[i] = true;
        }
    }
    Ok(mask)
}

/// Indices (into `labels`) to append so the smaller of the two classes
/// reaches the larger one's count, sampled with replacement.
pub(crate) fn upsample_additions(
    labels: &[ClassLabel],
    classes: (ClassLabel, ClassLabel),
    seed: u64,
) -> Result<Vec<usize>, CorpusError> {
    let (a, b) = classes;
    if a == b {
        return Err(CorpusError::DegeneratePair(a));
    }
    let members_a: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == a).collect();
    let members_b: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == b).collect();
    if members_a.is_empty() {
        return Err(CorpusError::ClassAbsent(a));
    }
    if members_b.is_empty() {
        return Err(CorpusError::ClassAbsent(b));
    }
    let n_add = members_a.len().abs_diff(members_b.len());
    let minority = if members_a.len() < members_b.len() { members_a } else { members_b };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n_add).map(|_| minority[rng.random_range(0..minority.len())]).collect())
}

/// Splits into train and test corpora, stratified by class.
///
/// Per-class test counts are `round(count × test_fraction)`, minimum 1;
/// membership comes from a seeded per-class shuffle. Both outputs preserve
/// the input article order, so `train ∪ test = corpus` exactly and the two
/// sides are disjoint by position (and by id, since ids are unique).
pub fn stratified_split(
    corpus: &Corpus,
    test_fraction: f64,
    seed: u64,
) -> Result<(Corpus, Corpus), CorpusError> {
    let labels: Vec<ClassLabel> = corpus.articles.iter().map(|a| a.label).collect();
    let mask = stratified_test_mask(&labels, test_fraction, seed)?;
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (article, &is_test) in corpus.articles.iter().zip(&mask) {
        if is_test {
            test.push(article.clone());
        } else {
            train.push(article.clone());
        }
    }
    Ok((
        Corpus { name: format!("{}-train", corpus.name), articles: train },
        Corpus { name: format!("{}-test", corpus.name), articles: test },
    ))
}

/// Duplicates articles of the smaller of the two classes (seeded sampling
/// with replacement) until both counts are equal. Existing articles are
/// never altered and no text is synthesized; the output therefore contains
/// duplicate ids by design. Articles of any third class pass through
/// untouched.
pub fn upsample_minority(
    corpus: &Corpus,
    classes: (ClassLabel, ClassLabel),
    seed: u64,
) -> Result<Corpus, CorpusError> {
    let labels: Vec<ClassLabel> = corpus.articles.iter().map(|a| a.label).collect();
    let additions = upsample_additions(&labels, classes, seed)?;
    let mut articles = corpus.articles.clone();
    articles.extend(additions.into_iter().map(|i| corpus.articles[i].clone()));
    Ok(Corpus { name: corpus.name.clone(), articles })
}

#[derive(Debug, Clone, PartialEq)]
pub enum CorpusError {
    DuplicateId { id: String, index: usize },
    EmptyField { id: String, field: &'static str },
    FractionOutOfRange(f64),
    ClassTooSmall { label: ClassLabel, count: usize },
    ClassAbsent(ClassLabel),
    DegeneratePair(ClassLabel),
}

impl fmt::Display for CorpusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorpusError::DuplicateId { id, index } => {
                write!(f, "duplicate id {id:?} (article index {index})")
            }
            CorpusError::EmptyField { id, field } => {
                write!(f, "article {id:?}: empty {field}")
            }
            CorpusError::FractionOutOfRange(v) => {
                write!(f, "test fraction {v} outside (0, 1)")
            }
            CorpusError::ClassTooSmall { label, count } => {
                write!(f, "class {label} has {count} article(s), need at least 2 to split")
            }
            CorpusError::ClassAbsent(label) => write!(f, "class {label} absent from corpus"),
            CorpusError::DegeneratePair(label) => {
                write!(f, "class pair must name two distinct classes, got {label} twice")
            }
        }
    }
}

impl core::error::Error for CorpusError {}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn article(id: &str, label: ClassLabel) -> Article {
        Article {
            id: id.to_string(),
            source: "src".to_string(),
            language: Language::En,
            label,
            title: "Title text".to_string(),
            body: "Body text here.".to_string(),
        }
    }

    fn labeled_corpus(spec: &[(ClassLabel, usize)]) -> Corpus {
        let mut articles = Vec::new();
        for &(label, count) in spec {
            for i in 0..count {
                articles.push(article(&format!("{label}{i}"), label));
            }
        }
        Corpus::new("demo", articles).unwrap()
    }

    #[test]
    fn single_article_corpus_counts() {
        let c = Corpus::new("one", vec![article("a1", ClassLabel::R)]).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.class_counts(), BTreeMap::from([(ClassLabel::R, 1)]));
    }

    #[test]
    fn duplicate_id_rejected_with_position() {
        let err = Corpus::new(
            "dup",
            vec![article("a1", ClassLabel::R), article("a1", ClassLabel::U)],
        )
        .unwrap_err();
        assert_eq!(err, CorpusError::DuplicateId { id: "a1".into(), index: 1 });
    }

    #[test]
    fn blank_title_rejected() {
        let mut bad = article("a1", ClassLabel::R);
        bad.title = "   ".to_string();
        assert!(matches!(
            Corpus::new("c", vec![bad]).unwrap_err(),
            CorpusError::EmptyField { field: "title", .. }
        ));
    }

    #[test]
    fn split_counts_follow_rounding() {
        let c = labeled_corpus(&[(ClassLabel::R, 100), (ClassLabel::U, 50)]);
        let (train, test) = stratified_split(&c, 0.2, 7).unwrap();
        assert_eq!(train.class_count(ClassLabel::R), 80);
        assert_eq!(train.class_count(ClassLabel::U), 40);
        assert_eq!(test.class_count(ClassLabel::R), 20);
        assert_eq!(test.class_count(ClassLabel::U), 10);
    }

    #[test]
    fn split_is_deterministic_and_seed_sensitive() {
        let c = labeled_corpus(&[(ClassLabel::R, 30), (ClassLabel::U, 30)]);
        let ids = |corpus: &Corpus| -> Vec<String> {
            corpus.articles().iter().map(|a| a.id.clone()).collect()
        };
        let (tr1, te1) = stratified_split(&c, 0.2, 7).unwrap();
        let (tr2, te2) = stratified_split(&c, 0.2, 7).unwrap();
        assert_eq!(ids(&tr1), ids(&tr2));
        assert_eq!(ids(&te1), ids(&te2));
        let (_, te3) = stratified_split(&c, 0.2, 8).unwrap();
        assert_ne!(ids(&te1), ids(&te3), "seeds 7 and 8 picked identical test sets");
    }

    #[test]
    fn split_union_is_input_and_sides_disjoint() {
        let c = labeled_corpus(&[(ClassLabel::R, 9), (ClassLabel::S, 5)]);
        let (train, test) = stratified_split(&c, 0.3, 42).unwrap();
        let mut merged: Vec<&Article> = train.articles().iter().chain(test.articles()).collect();
        merged.sort_by(|a, b| a.id.cmp(&b.id));
        let mut original: Vec<&Article> = c.articles().iter().collect();
        original.sort_by(|a, b| a.id.cmp(&b.id));
        assert_eq!(merged, original);
        let test_ids: BTreeSet<&str> = test.articles().iter().map(|a| a.id.as_str()).collect();
        assert!(train.articles().iter().all(|a| !test_ids.contains(a.id.as_str())));
    }

    #[test]
    fn split_rejects_tiny_class_and_bad_fraction() {
        let c = labeled_corpus(&[(ClassLabel::R, 10), (ClassLabel::U, 1)]);
        assert_eq!(
            stratified_split(&c, 0.2, 1).unwrap_err(),
            CorpusError::ClassTooSmall { label: ClassLabel::U, count: 1 }
        );
        let one = labeled_corpus(&[(ClassLabel::U, 1)]);
        assert!(stratified_split(&one, 0.2, 1).is_err());
        let ok = labeled_corpus(&[(ClassLabel::R, 4)]);
        assert!(stratified_split(&ok, 0.0, 1).is_err());
        assert!(stratified_split(&ok, 1.0, 1).is_err());
    }

    #[test]
    fn upsample_balances_by_duplicating_minority_ids() {
        let c = labeled_corpus(&[(ClassLabel::R, 10), (ClassLabel::U, 3)]);
        let balanced = upsample_minority(&c, (ClassLabel::R, ClassLabel::U), 11).unwrap();
        assert_eq!(balanced.class_count(ClassLabel::R), 10);
        assert_eq!(balanced.class_count(ClassLabel::U), 10);
        let original_u: BTreeSet<&str> = c
            .articles()
            .iter()
            .filter(|a| a.label == ClassLabel::U)
            .map(|a| a.id.as_str())
            .collect();
        for added in &balanced.articles()[c.len()..] {
            assert_eq!(added.label, ClassLabel::U);
            assert!(original_u.contains(added.id.as_str()));
        }
    }

    #[test]
    fn upsample_balanced_input_is_identity() {
        let c = labeled_corpus(&[(ClassLabel::R, 5), (ClassLabel::U, 5)]);
        let out = upsample_minority(&c, (ClassLabel::R, ClassLabel::U), 3).unwrap();
        assert_eq!(out, c);
    }

    #[test]
    fn upsample_requires_both_classes() {
        let c = labeled_corpus(&[(ClassLabel::R, 4)]);
        assert_eq!(
            upsample_minority(&c, (ClassLabel::R, ClassLabel::U), 3).unwrap_err(),
            CorpusError::ClassAbsent(ClassLabel::U)
        );
    }

    #[test]
    fn nfc_applies_to_text_fields() {
        let mut a = article("a1", ClassLabel::R);
        a.title = "pol\u{0069}\u{0301}tica".to_string();
        let normalized = a.into_nfc();
        assert_eq!(normalized.title, "pol\u{ed}tica");
    }

    #[test]
    fn class_pair_round_trips_through_text() {
        for pair in CANONICAL_PAIRS {
            assert_eq!(ClassPair::parse(&pair.to_string()), Some(pair));
        }
        assert_eq!(ClassPair::parse("R_R"), None);
        assert_eq!(ClassPair::parse("Q_U"), None);
    }
}
