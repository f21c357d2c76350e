//! Flesch Reading Ease with a vowel-group syllable heuristic.

use crate::corpus::Sentence;
use crate::{Error, Result};

const BASE: f64 = 206.835;
const WORDS_PER_SENTENCE_WEIGHT: f64 = 1.015;
const SYLLABLES_PER_WORD_WEIGHT: f64 = 84.6;

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}

/// Heuristic syllable count: vowel groups, minus a silent final `e` or a
/// silent `-ed`, never below 1.
///
/// Only letters are considered; a word without letters returns 0 and is the
/// caller's to filter.
pub fn count_syllables(word: &str) -> usize {
    let letters: Vec<char> = word
        .chars()
        .filter(|c| c.is_alphabetic())
        .flat_map(char::to_lowercase)
        .collect();
    if letters.is_empty() {
        return 0;
    }
    let mut groups = 0;
    let mut prev_vowel = false;
    for &c in &letters {
        let v = is_vowel(c);
        if v && !prev_vowel {
            groups += 1;
        }
        prev_vowel = v;
    }
    let n = letters.len();
    let ends = |suffix: &str| letters.iter().rev().take(suffix.len()).rev().copied().eq(suffix.chars());
    if groups > 1 {
        let consonant_before = |i: usize| n > i && !is_vowel(letters[n - 1 - i]);
        let silent_e = ends("e") && !(ends("le") && consonant_before(2)) && !ends("ee");
        let silent_ed = ends("ed") && n > 2 && !matches!(letters[n - 3], 't' | 'd') && consonant_before(2);
        if silent_e || silent_ed {
            groups -= 1;
        }
    }
    groups.max(1)
}

/// Raw Flesch Reading Ease from counts. Not clamped: short, simple text can
/// exceed 100 and dense text can go negative.
pub fn flesch_from_counts(words: usize, sentences: usize, syllables: usize) -> Result<f64> {
    if words == 0 || sentences == 0 {
        return Err(Error::Invalid("Flesch score needs at least one word".into()));
    }
    let w = words as f64;
    Ok(BASE
        - WORDS_PER_SENTENCE_WEIGHT * (w / sentences as f64)
        - SYLLABLES_PER_WORD_WEIGHT * (syllables as f64 / w))
}

/// Flesch Reading Ease of a single sentence (sentence count fixed at 1).
/// Tokens without letters, such as numbers, count as one syllable.
pub fn flesch_reading_ease(sentence: &Sentence) -> Result<f64> {
    let syllables = sentence
        .tokens
        .iter()
        .map(|t| count_syllables(t).max(1))
        .sum();
    flesch_from_counts(sentence.word_count, 1, syllables)
}
