//! Per-sentence opinion scores: readability × sentiment strength × aspect
//! relevance, each normalized to [0, 1] before multiplying.

mod readability;
mod sentiment;

use serde::Serialize;

use crate::aspects::AspectClass;
use crate::corpus::Sentence;
use crate::embedding::{cosine, EmbeddingProvider};
use crate::{Error, Result};

pub use readability::{count_syllables, flesch_from_counts, flesch_reading_ease};
pub use sentiment::{sentiment_polarity, sentiment_strength, SentimentLexicon, NEUTRAL};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OpinionScore {
    pub readability_raw: f64,
    pub readability: f64,
    pub polarity: u8,
    pub sentiment_strength_raw: u8,
    pub sentiment_strength: f64,
    pub relevance_raw: f64,
    pub relevance: f64,
    pub combined: f64,
}

impl OpinionScore {
    /// Builds a score from raw signals; factors switched off in `config`
    /// contribute 1 to the product but keep their raw values.
    pub fn from_raw(
        readability_raw: f64,
        polarity: u8,
        relevance_raw: f64,
        config: ScoringConfig,
    ) -> Result<Self> {
        let strength_raw = sentiment_strength(polarity)?;
        let readability = readability_raw.clamp(0.0, 100.0) / 100.0;
        let sentiment_strength = f64::from(strength_raw) / 2.0;
        let relevance = relevance_raw.max(0.0);
        let r = if config.use_readability { readability } else { 1.0 };
        let s = if config.use_sentiment { sentiment_strength } else { 1.0 };
        Ok(OpinionScore {
            readability_raw,
            readability,
            polarity,
            sentiment_strength_raw: strength_raw,
            sentiment_strength,
            relevance_raw,
            relevance,
            combined: r * s * relevance,
        })
    }
}

/// Which salience factors take part in the product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ScoringConfig {
    pub use_readability: bool,
    pub use_sentiment: bool,
}

impl Default for ScoringConfig {
    fn default() -> Self {
        ScoringConfig {
            use_readability: true,
            use_sentiment: true,
        }
    }
}

/// Result of the max-of-max relevance search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelevanceMatch {
    /// Best cosine between a content word and a selected aspect, or 0.
    pub value: f64,
    /// Index into the selected aspects of the best match. `None` when the
    /// sentence has no in-vocabulary content word.
    pub aspect: Option<usize>,
}

/// Maximum over in-vocabulary content words and selected aspects of the
/// word-aspect cosine. Ties go to the earlier aspect.
pub fn relevance<S: AsRef<str>>(
    content_tokens: &[S],
    aspects: &[&AspectClass],
    provider: &dyn EmbeddingProvider,
) -> Result<RelevanceMatch> {
    if aspects.is_empty() {
        return Err(Error::Invalid("relevance needs at least one aspect".into()));
    }
    let mut best: Option<(f64, usize)> = None;
    for token in content_tokens {
        let Some(w) = provider.word_vector(token.as_ref()) else {
            continue;
        };
        for (j, aspect) in aspects.iter().enumerate() {
            let c = cosine(w, &aspect.embedding)?;
            let better = match best {
                None => true,
                Some((v, k)) => c > v || (c == v && j < k),
            };
            if better {
                best = Some((c, j));
            }
        }
    }
    Ok(match best {
        Some((value, j)) => RelevanceMatch {
            value,
            aspect: Some(j),
        },
        None => RelevanceMatch {
            value: 0.0,
            aspect: None,
        },
    })
}

/// Scores sentences against a fixed aspect selection.
pub struct Scorer<'a> {
    pub lexicon: &'a SentimentLexicon,
    pub provider: &'a dyn EmbeddingProvider,
    pub config: ScoringConfig,
}

impl<'a> Scorer<'a> {
    pub fn new(lexicon: &'a SentimentLexicon, provider: &'a dyn EmbeddingProvider) -> Self {
        Scorer {
            lexicon,
            provider,
            config: ScoringConfig::default(),
        }
    }

    pub fn with_config(mut self, config: ScoringConfig) -> Self {
        self.config = config;
        self
    }

    /// Opinion score plus the index (into `aspects`) of the best-matching aspect.
    pub fn score(
        &self,
        sentence: &Sentence,
        aspects: &[&AspectClass],
    ) -> Result<(OpinionScore, Option<usize>)> {
        let readability_raw = flesch_reading_ease(sentence)?;
        let polarity = sentiment_polarity(&sentence.tokens, self.lexicon);
        let rel = relevance(&sentence.content_tokens, aspects, self.provider)?;
        let score = OpinionScore::from_raw(readability_raw, polarity, rel.value, self.config)?;
        Ok((score, rel.aspect))
    }

    pub fn opinion_score(&self, sentence: &Sentence, aspects: &[&AspectClass]) -> Result<OpinionScore> {
        self.score(sentence, aspects).map(|(s, _)| s)
    }
}
