//! Lexicon-based sentence polarity on a 0-4 scale (2 = neutral).

use std::collections::{HashMap, HashSet};
use std::path::Path;

use crate::{resources, Error, Result};

pub const NEUTRAL: u8 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct SentimentLexicon {
    valences: HashMap<String, i8>,
    negations: HashSet<String>,
}

impl SentimentLexicon {
    /// Parses `word<TAB>valence` lines (valence in {-2, -1, 1, 2}); words
    /// after a `[negations]` line are negators. `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut valences = HashMap::new();
        let mut negations = HashSet::new();
        let mut in_negations = false;
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line.eq_ignore_ascii_case("[negations]") {
                in_negations = true;
                continue;
            }
            if in_negations {
                negations.insert(line.to_lowercase());
                continue;
            }
            let (word, value) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(idx + 1, "expected word<TAB>valence"))?;
            let valence: i8 = value
                .trim()
                .parse()
                .map_err(|_| Error::parse(idx + 1, format!("bad valence {value:?}")))?;
            if !matches!(valence, -2 | -1 | 1 | 2) {
                return Err(Error::parse(idx + 1, format!("valence {valence} outside {{-2,-1,1,2}}")));
            }
            valences.insert(word.trim().to_lowercase(), valence);
        }
        if valences.is_empty() {
            return Err(Error::Invalid("sentiment lexicon is empty".into()));
        }
        Ok(SentimentLexicon { valences, negations })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        SentimentLexicon::parse(&text)
    }

    pub fn valence(&self, word: &str) -> Option<i8> {
        self.valences.get(word).copied()
    }

    pub fn is_negation(&self, word: &str) -> bool {
        self.negations.contains(word)
    }

    pub fn len(&self) -> usize {
        self.valences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.valences.is_empty()
    }
}

impl Default for SentimentLexicon {
    fn default() -> Self {
        SentimentLexicon::parse(resources::LEXICON).expect("shipped lexicon parses")
    }
}

/// Sums token valences (a negator flips the sign of the next lexicon hit),
/// clamps the sum to [-2, 2] and shifts it onto 0..=4.
pub fn sentiment_polarity<S: AsRef<str>>(tokens: &[S], lexicon: &SentimentLexicon) -> u8 {
    let mut sum: i32 = 0;
    let mut negated = false;
    for token in tokens {
        let token = token.as_ref();
        if lexicon.is_negation(token) {
            negated = !negated;
        } else if let Some(v) = lexicon.valence(token) {
            let v = i32::from(v);
            sum += if negated { -v } else { v };
            negated = false;
        }
    }
    (sum.clamp(-2, 2) + i32::from(NEUTRAL)) as u8
}

/// Distance of a polarity from neutral.
pub fn sentiment_strength(polarity: u8) -> Result<u8> {
    if polarity > 4 {
        return Err(Error::Invalid(format!("polarity {polarity} outside 0..=4")));
    }
    Ok(polarity.abs_diff(NEUTRAL))
}
