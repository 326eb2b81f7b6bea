//! Deterministic sentence segmentation, tokenization, and per-language
//! syllable counting — the measurement substrate for every feature.
//!
//! All rules are defined here rather than borrowed from a language toolkit,
//! so identical input bytes always produce identical measurements:
//!
//! * **Sentences** end at `.`, `!`, `?`, or `…` followed by whitespace and
//!   then an uppercase letter, digit, or opening quote. A short per-language
//!   abbreviation stoplist (`Mr.`, `Dr.`, `U.S.`, `vs.`, `etc.` / `Sr.`,
//!   `Sra.`, `Dr.`, `Dra.`, `etc.`, `pág.`) suppresses false boundaries.
//!   Text with no terminator is a single sentence.
//! * **Tokens** are maximal letter runs (words — internal apostrophes and
//!   hyphens with letters on both sides stay inside the word), maximal
//!   digit runs with internal `.`/`,` separators (numbers), or single
//!   punctuation characters.
//! * **Syllables** are counted by maximal-vowel-group heuristics: English
//!   treats `y` as a vowel and drops a terminal silent `e` (except after
//!   consonant + `le`); Portuguese treats acute-accented vowels as their own
//!   group (hiatus) and mutes the `u` of `qu`/`gu` before `e`/`i`. Both are
//!   documented approximations that err consistently, not dictionary
//!   syllabifications.
//!
//! URLs and @-handles are boilerplate, not authorial style; [`strip_noise`]
//! removes them and [`analyze`] applies it before measuring anything.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use core::fmt;

use unicode_normalization::UnicodeNormalization;

use crate::corpus::Language;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Word,
    Number,
    Punct,
}

/// One token of a sentence.
///
/// Word tokens have `letter_count ≥ 1` and `syllables ≥ 1`; number and
/// punctuation tokens carry zero for both. `is_all_caps` holds only for
/// words with at least two letters, all uppercase — single capitals like
/// "I" or "É" do not count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub kind: TokenKind,
    pub letter_count: usize,
    pub syllables: usize,
    pub is_all_caps: bool,
}

/// A fully measured text: tokens grouped by sentence plus the aggregate
/// counts every readability formula consumes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizedText {
    pub sentences: Vec<Vec<Token>>,
    pub word_count: usize,
    pub sentence_count: usize,
    pub syllable_total: usize,
    /// Words with ≥ 3 syllables.
    pub polysyllable_count: usize,
}

impl TokenizedText {
    pub fn tokens(&self) -> impl Iterator<Item = &Token> {
        self.sentences.iter().flatten()
    }

    pub fn words(&self) -> impl Iterator<Item = &Token> {
        self.tokens().filter(|t| t.kind == TokenKind::Word)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TextError {
    EmptyInput,
    NoLetters(String),
}

impl fmt::Display for TextError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TextError::EmptyInput => f.write_str("empty input text"),
            TextError::NoLetters(word) => write!(f, "no letters in {word:?}"),
        }
    }
}

impl core::error::Error for TextError {}

/// Drops whitespace-delimited chunks that are URLs (`http://`, `https://`,
/// `www.` prefixes, case-insensitive) or @-handles (`@` followed by an
/// alphanumeric), rejoining the rest with single spaces.
pub fn strip_noise(text: &str) -> String {
    let mut kept: Vec<&str> = Vec::new();
    for chunk in text.split_whitespace() {
        let lower = chunk.to_lowercase();
        if lower.starts_with("http://")
            || lower.starts_with("https://")
            || lower.starts_with("www.")
        {
            continue;
        }
        let mut chars = chunk.chars();
        if chars.next() == Some('@') && chars.next().is_some_and(|c| c.is_alphanumeric()) {
            continue;
        }
        kept.push(chunk);
    }
    kept.join(" ")
}

fn abbreviations(language: Language) -> &'static [&'static str] {
    match language {
        Language::En => &["mr.", "dr.", "u.s.", "vs.", "etc."],
        Language::Pt => &["sr.", "sra.", "dr.", "dra.", "etc.", "pág."],
    }
}

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?' | '…')
}

fn opens_sentence(c: char) -> bool {
    c.is_uppercase() || c.is_ascii_digit() || matches!(c, '"' | '\'' | '“' | '‘' | '«')
}

/// True when the terminator at `chars[i]` ends a sentence: it must be
/// followed by whitespace and then a sentence opener, and a `.` must not
/// close a stoplisted abbreviation.
fn is_boundary(chars: &[char], i: usize, language: Language) -> bool {
    let mut j = i + 1;
    if j >= chars.len() || !chars[j].is_whitespace() {
        return false;
    }
    while j < chars.len() && chars[j].is_whitespace() {
        j += 1;
    }
    if j >= chars.len() || !opens_sentence(chars[j]) {
        return false;
    }
    if chars[i] == '.' {
        let mut k = i;
        while k > 0 && (chars[k - 1].is_alphabetic() || chars[k - 1] == '.') {
            k -= 1;
        }
        let token: String = chars[k..=i].iter().collect::<String>().to_lowercase();
        if abbreviations(language).contains(&token.as_str()) {
            return false;
        }
    }
    true
}

/// Splits text into sentences; see the module docs for the boundary rule.
/// Text with no terminator comes back as a single sentence. Sentences are
/// trimmed of surrounding whitespace.
pub fn segment_sentences(text: &str, language: Language) -> Result<Vec<String>, TextError> {
    if text.trim().is_empty() {
        return Err(TextError::EmptyInput);
    }
    let chars: Vec<char> = text.chars().collect();
    let mut sentences = Vec::new();
    let mut start = 0;
    let mut i = 0;
    while i < chars.len() {
        if is_terminator(chars[i]) && is_boundary(&chars, i, language) {
            let sentence: String = chars[start..=i].iter().collect();
            let trimmed = sentence.trim();
            if !trimmed.is_empty() {
                sentences.push(trimmed.to_string());
            }
            i += 1;
            while i < chars.len() && chars[i].is_whitespace() {
                i += 1;
            }
            start = i;
        } else {
            i += 1;
        }
    }
    if start < chars.len() {
        let tail: String = chars[start..].iter().collect();
        let trimmed = tail.trim();
        if !trimmed.is_empty() {
            sentences.push(trimmed.to_string());
        }
    }
    debug_assert!(!sentences.is_empty(), "non-blank text must yield a sentence");
    Ok(sentences)
}

fn en_is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}

fn en_syllables(lower: &[char]) -> usize {
    let mut groups = 0usize;
    let mut in_group = false;
    for &c in lower {
        if en_is_vowel(c) {
            if !in_group {
                groups += 1;
                in_group = true;
            }
        } else {
            in_group = false;
        }
    }
    // Terminal silent e: "make" → 1, but keep the consonant-le group of
    // "table" → 2.
    let n = lower.len();
    if n >= 2 && lower[n - 1] == 'e' {
        let consonant_le =
            n >= 3 && lower[n - 2] == 'l' && lower[n - 3].is_alphabetic() && !en_is_vowel(lower[n - 3]);
        if !consonant_le {
            groups = groups.saturating_sub(1);
        }
    }
    groups.max(1)
}

fn pt_is_vowel(c: char) -> bool {
    matches!(
        c,
        'a' | 'e' | 'i' | 'o' | 'u' | 'y'
            | 'á' | 'é' | 'í' | 'ó' | 'ú'
            | 'â' | 'ê' | 'ô' | 'ã' | 'õ' | 'à' | 'ü'
    )
}

fn pt_is_acute(c: char) -> bool {
    matches!(c, 'á' | 'é' | 'í' | 'ó' | 'ú')
}

fn pt_syllables(lower: &[char]) -> usize {
    let mut groups = 0usize;
    let mut in_group = false;
    for i in 0..lower.len() {
        let c = lower[i];
        // qu/gu before e/i: the u is mute ("que", "guerra").
        let mute_u = c == 'u'
            && i > 0
            && matches!(lower[i - 1], 'q' | 'g')
            && i + 1 < lower.len()
            && matches!(lower[i + 1], 'e' | 'é' | 'ê' | 'i' | 'í');
        if pt_is_vowel(c) && !mute_u {
            if pt_is_acute(c) {
                // Acute accents mark stress in hiatus: "país" → pa-ís.
                groups += 1;
                in_group = false;
            } else if !in_group {
                groups += 1;
                in_group = true;
            }
        } else {
            in_group = false;
        }
    }
    groups.max(1)
}

/// Heuristic syllable count, always ≥ 1. Case-insensitive; the input is
/// NFC-normalized internally. Errors when the input has no letters.
pub fn count_syllables(word: &str, language: Language) -> Result<usize, TextError> {
    let lower: Vec<char> = word.nfc().collect::<String>().to_lowercase().chars().collect();
    if !lower.iter().any(|c| c.is_alphabetic()) {
        return Err(TextError::NoLetters(word.to_string()));
    }
    Ok(match language {
        Language::En => en_syllables(&lower),
        Language::Pt => pt_syllables(&lower),
    })
}

fn word_token(surface: String, language: Language) -> Token {
    let letter_count = surface.chars().filter(|c| c.is_alphabetic()).count();
    // A word run starts at a letter, so the unwrap cannot trip.
    let syllables = count_syllables(&surface, language).expect("word token has a letter");
    let is_all_caps =
        letter_count >= 2 && surface.chars().filter(|c| c.is_alphabetic()).all(|c| c.is_uppercase());
    Token { surface, kind: TokenKind::Word, letter_count, syllables, is_all_caps }
}

/// Tokenizes one sentence. Empty input yields an empty list; no errors.
pub fn tokenize(sentence: &str, language: Language) -> Vec<Token> {
    let chars: Vec<char> = sentence.nfc().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_alphabetic() {
            let start = i;
            i += 1;
            while i < chars.len() {
                if chars[i].is_alphabetic() {
                    i += 1;
                } else if matches!(chars[i], '\'' | '’' | '-')
                    && i + 1 < chars.len()
                    && chars[i + 1].is_alphabetic()
                {
                    i += 2;
                } else {
                    break;
                }
            }
            tokens.push(word_token(chars[start..i].iter().collect(), language));
        } else if c.is_ascii_digit() {
            let start = i;
            i += 1;
            while i < chars.len() {
                if chars[i].is_ascii_digit() {
                    i += 1;
                } else if matches!(chars[i], '.' | ',')
                    && i + 1 < chars.len()
                    && chars[i + 1].is_ascii_digit()
                {
                    i += 2;
                } else {
                    break;
                }
            }
            tokens.push(Token {
                surface: chars[start..i].iter().collect(),
                kind: TokenKind::Number,
                letter_count: 0,
                syllables: 0,
                is_all_caps: false,
            });
        } else {
            tokens.push(Token {
                surface: c.to_string(),
                kind: TokenKind::Punct,
                letter_count: 0,
                syllables: 0,
                is_all_caps: false,
            });
            i += 1;
        }
    }
    tokens
}

/// Strips noise, segments, tokenizes, and aggregates. Input that is empty —
/// or consists only of URLs/@-handles, leaving nothing after
/// [`strip_noise`] — is an error.
pub fn analyze(text: &str, language: Language) -> Result<TokenizedText, TextError> {
    let cleaned = strip_noise(text);
    if cleaned.trim().is_empty() {
        return Err(TextError::EmptyInput);
    }
    let normalized: String = cleaned.nfc().collect();
    let sentence_strings = segment_sentences(&normalized, language)?;
    let sentences: Vec<Vec<Token>> =
        sentence_strings.iter().map(|s| tokenize(s, language)).collect();
    let mut word_count = 0;
    let mut syllable_total = 0;
    let mut polysyllable_count = 0;
    for token in sentences.iter().flatten() {
        if token.kind == TokenKind::Word {
            word_count += 1;
            syllable_total += token.syllables;
            if token.syllables >= 3 {
                polysyllable_count += 1;
            }
        }
    }
    Ok(TokenizedText {
        sentence_count: sentences.len(),
        sentences,
        word_count,
        syllable_total,
        polysyllable_count,
    })
}
