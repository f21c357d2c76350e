//! Data files shipped with the crate and compiled into the binary.

pub const STOPWORDS: &str = include_str!("../../../data/stopwords.txt");
pub const ABBREVIATIONS: &str = include_str!("../../../data/abbreviations.txt");
pub const LEXICON: &str = include_str!("../../../data/lexicon.tsv");
pub const CATALOG: &str = include_str!("../../../data/catalog.toml");

/// Seed of the fallback word-vector generator.
pub const VECTOR_SEED: u64 = 0x0F1A_5EED;
/// Dimension of the fallback word vectors.
pub const VECTOR_DIM: usize = 48;

/// Non-empty, non-comment lines of a word-list file.
pub fn word_list(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}
