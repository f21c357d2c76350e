use std::collections::HashSet;

use crate::resources;

/// Rule-based sentence splitter.
///
/// A sentence ends at a word whose last non-closing character is `.`, `!`,
/// `?` or `…`, unless the word is a known abbreviation or a dotted
/// initialism ("U.S.", "a.m."). A line break also ends a sentence. Chunks
/// without any alphanumeric word are attached to a neighbouring sentence.
#[derive(Debug, Clone)]
pub struct Segmenter {
    abbreviations: HashSet<String>,
}

impl Default for Segmenter {
    fn default() -> Self {
        Segmenter::with_abbreviations(resources::word_list(resources::ABBREVIATIONS))
    }
}

impl Segmenter {
    pub fn with_abbreviations<'a>(words: impl IntoIterator<Item = &'a str>) -> Self {
        Segmenter {
            abbreviations: words.into_iter().map(|w| w.to_lowercase()).collect(),
        }
    }

    /// Byte spans `(start, end)` of the sentences in `text`.
    pub fn spans(&self, text: &str) -> Vec<(usize, usize)> {
        let words = word_spans(text);
        let mut spans: Vec<(usize, usize)> = Vec::new();
        let mut chunk_start: Option<usize> = None;
        let mut has_word = false;

        for (idx, &(start, end)) in words.iter().enumerate() {
            let word = &text[start..end];
            let s = *chunk_start.get_or_insert(start);
            has_word |= word.chars().any(char::is_alphanumeric);

            let line_break = words
                .get(idx + 1)
                .is_some_and(|&(next, _)| text[end..next].contains('\n'));
            let last = idx + 1 == words.len();
            if !(self.ends_sentence(word) || line_break || last) {
                continue;
            }
            if has_word {
                spans.push((s, end));
                chunk_start = None;
            } else if let Some(prev) = spans.last_mut() {
                prev.1 = end;
                chunk_start = None;
            }
            // otherwise a leading punctuation chunk carries over into the next sentence
            has_word = false;
        }
        spans
    }

    pub fn split<'t>(&self, text: &'t str) -> Vec<&'t str> {
        self.spans(text).into_iter().map(|(s, e)| &text[s..e]).collect()
    }

    fn ends_sentence(&self, word: &str) -> bool {
        let core = word.trim_end_matches(['"', '\'', ')', ']', '\u{201d}', '\u{2019}']);
        let Some(last) = core.chars().last() else {
            return false;
        };
        match last {
            '!' | '?' | '\u{2026}' => true,
            '.' => {
                let bare = core
                    .trim_start_matches(['"', '\'', '(', '[', '\u{201c}', '\u{2018}'])
                    .to_lowercase();
                !(self.abbreviations.contains(&bare) || is_initialism(&bare))
            }
            _ => false,
        }
    }
}

/// "u.s.", "a.m.", "e.g." style tokens: single letters each followed by a dot.
fn is_initialism(word: &str) -> bool {
    let parts: Vec<&str> = word.split('.').collect();
    parts.len() >= 3
        && parts.last() == Some(&"")
        && parts[..parts.len() - 1]
            .iter()
            .all(|p| p.chars().count() == 1 && p.chars().all(char::is_alphabetic))
}

fn word_spans(text: &str) -> Vec<(usize, usize)> {
    let mut spans = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                spans.push((s, i));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        spans.push((s, text.len()));
    }
    spans
}
