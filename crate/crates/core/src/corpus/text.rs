use std::collections::HashSet;

use crate::resources;

/// Lowercases a whitespace-delimited word and strips punctuation.
///
/// Leading and trailing non-alphanumeric characters are dropped; inside the
/// word only letters, digits, apostrophes and hyphens survive. Returns `None`
/// when nothing is left (e.g. a bare dash or ellipsis).
pub fn normalize_word(raw: &str) -> Option<String> {
    let trimmed = raw.trim_matches(|c: char| !c.is_alphanumeric());
    if trimmed.is_empty() {
        return None;
    }
    let word: String = trimmed
        .chars()
        .map(|c| if c == '\u{2019}' { '\'' } else { c })
        .filter(|c| c.is_alphanumeric() || *c == '\'' || *c == '-')
        .flat_map(char::to_lowercase)
        .collect();
    (!word.is_empty()).then_some(word)
}

/// Lowercased, punctuation-stripped tokens, one per whitespace word that has
/// at least one alphanumeric character.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace().filter_map(normalize_word).collect()
}

/// Fixed stop-word set; includes every personal pronoun.
#[derive(Debug, Clone)]
pub struct StopWords {
    words: HashSet<String>,
}

impl StopWords {
    pub fn parse(text: &str) -> Self {
        let words = resources::word_list(text)
            .map(|w| w.to_lowercase())
            .collect();
        StopWords { words }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

impl Default for StopWords {
    fn default() -> Self {
        StopWords::parse(resources::STOPWORDS)
    }
}

/// Splits a sentence into `(tokens, content_tokens)`.
///
/// `content_tokens` keeps token order and drops stop-words and pronouns.
pub fn preprocess(sentence_text: &str, stopwords: &StopWords) -> (Vec<String>, Vec<String>) {
    let tokens = tokenize(sentence_text);
    let content = tokens
        .iter()
        .filter(|t| !stopwords.contains(t))
        .cloned()
        .collect();
    (tokens, content)
}
