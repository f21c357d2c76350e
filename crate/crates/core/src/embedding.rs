//! Word and sentence vectors behind a small provider contract.
//!
//! Everything downstream needs only [`EmbeddingProvider`] and [`cosine`], so a
//! pretrained sentence encoder can replace the default mean-pooled word
//! vectors without touching scoring or selection.

use std::collections::HashMap;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::corpus::Sentence;
use crate::{Error, Result};

pub trait EmbeddingProvider: Send + Sync {
    fn dimension(&self) -> usize;

    /// Vector for `word`, or `None` when out of vocabulary.
    fn word_vector(&self, word: &str) -> Option<&[f64]>;

    /// Mean of the in-vocabulary content-token vectors. With no such token
    /// the zero vector is returned and the result is marked non-embeddable.
    fn sentence_vector(&self, sentence: &Sentence) -> SentenceVector {
        let (vector, embeddable) = mean_vector(self, sentence.content_tokens.iter().map(String::as_str));
        SentenceVector {
            vector,
            source_sentence: sentence.id.clone(),
            embeddable,
        }
    }
}

/// Component-wise mean over the in-vocabulary words; `false` if none.
pub fn mean_vector<'a, P: EmbeddingProvider + ?Sized>(
    provider: &P,
    words: impl Iterator<Item = &'a str>,
) -> (Vec<f64>, bool) {
    let mut sum = vec![0.0; provider.dimension()];
    let mut hits = 0usize;
    for v in words.filter_map(|w| provider.word_vector(w)) {
        for (acc, x) in sum.iter_mut().zip(v) {
            *acc += x;
        }
        hits += 1;
    }
    if hits > 0 {
        let n = hits as f64;
        sum.iter_mut().for_each(|x| *x /= n);
    }
    (sum, hits > 0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SentenceVector {
    pub vector: Vec<f64>,
    pub source_sentence: String,
    pub embeddable: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WordVectorTable {
    dimension: usize,
    entries: HashMap<String, Vec<f64>>,
}

impl WordVectorTable {
    pub fn new(dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::Invalid("vector dimension must be positive".into()));
        }
        Ok(WordVectorTable {
            dimension,
            entries: HashMap::new(),
        })
    }

    /// Inserts or replaces a vector, returning the previous one.
    pub fn insert(&mut self, word: impl Into<String>, vector: Vec<f64>) -> Result<Option<Vec<f64>>> {
        if vector.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                left: self.dimension,
                right: vector.len(),
            });
        }
        if vector.iter().any(|x| !x.is_finite()) {
            return Err(Error::Invalid("vector has a non-finite component".into()));
        }
        Ok(self.entries.insert(word.into(), vector))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.word_vector(word).is_some()
    }

    /// Deterministic pseudo-random table over `words`.
    ///
    /// Each word's vector depends only on `(seed, word)`, so adding words never
    /// changes the vectors of existing ones.
    pub fn seeded<'a>(words: impl IntoIterator<Item = &'a str>, dimension: usize, seed: u64) -> Self {
        let mut entries = HashMap::new();
        for w in words {
            entries
                .entry(w.to_string())
                .or_insert_with(|| seeded_vector(w, dimension, seed));
        }
        WordVectorTable {
            dimension,
            entries,
        }
    }

    /// Parses the text vector format: `word v1 ... vd` per line with an
    /// optional `count dim` header line.
    pub fn parse<R: BufRead>(reader: R) -> Result<Self> {
        let mut table: Option<WordVectorTable> = None;
        let mut declared: Option<usize> = None;
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line.map_err(|e| Error::parse(line_no, e.to_string()))?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            if idx == 0 && fields.len() == 2 {
                if let (Ok(count), Ok(dim)) = (fields[0].parse::<usize>(), fields[1].parse::<usize>()) {
                    declared = Some(count);
                    table = Some(WordVectorTable::new(dim).map_err(|e| Error::parse(line_no, e.to_string()))?);
                    continue;
                }
            }
            let (word, values) = (fields[0], &fields[1..]);
            let vector = values
                .iter()
                .map(|v| v.parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::parse(line_no, format!("bad component: {e}")))?;
            let table = match &mut table {
                Some(t) => t,
                None => table.insert(WordVectorTable::new(vector.len()).map_err(|e| Error::parse(line_no, e.to_string()))?),
            };
            if vector.len() != table.dimension {
                return Err(Error::parse(
                    line_no,
                    format!("{word:?} has {} components, expected {}", vector.len(), table.dimension),
                ));
            }
            match table.insert(word, vector) {
                Ok(Some(_)) => tracing::warn!(word, line = line_no, "duplicate word vector; last wins"),
                Ok(None) => {}
                Err(e) => return Err(Error::parse(line_no, e.to_string())),
            }
        }
        let table = table
            .filter(|t| !t.is_empty())
            .ok_or_else(|| Error::Invalid("word-vector file has no entries".into()))?;
        if let Some(count) = declared.filter(|&c| c != table.len()) {
            tracing::warn!(declared = count, found = table.len(), "vector count differs from header");
        }
        Ok(table)
    }
}

/// Loads a word-vector file (see [`WordVectorTable::parse`]).
pub fn load_word_vectors(path: &Path) -> Result<WordVectorTable> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    WordVectorTable::parse(BufReader::new(file))
}

impl EmbeddingProvider for WordVectorTable {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn word_vector(&self, word: &str) -> Option<&[f64]> {
        if let Some(v) = self.entries.get(word) {
            return Some(v);
        }
        if word.chars().any(char::is_uppercase) {
            return self.entries.get(&word.to_lowercase()).map(Vec::as_slice);
        }
        None
    }
}

/// Cosine similarity; 0 when either vector has zero norm.
pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    let (mut dot, mut nu, mut nv) = (0.0, 0.0, 0.0);
    for (a, b) in u.iter().zip(v) {
        dot += a * b;
        nu += a * a;
        nv += b * b;
    }
    if nu == 0.0 || nv == 0.0 {
        return Ok(0.0);
    }
    Ok((dot / (nu.sqrt() * nv.sqrt())).clamp(-1.0, 1.0))
}

fn seeded_vector(word: &str, dimension: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv1a(word.as_bytes()));
    (0..dimension).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(*b)).wrapping_mul(0x0100_0000_01b3)
    })
}
