//! Controllable, aspect-based extractive summarization of review corpora.
//!
//! Sentences are scored by readability, sentiment strength and relevance to a
//! reader-chosen set of aspects, then a subset is chosen by a 0-1 program that
//! trades salience against redundancy and a gender-balance term under a word
//! budget.
//!
//! The pipeline, bottom up:
//!
//! - [`corpus`]: review ingestion, sentence segmentation, tokenization.
//! - [`embedding`]: word/sentence vectors and cosine similarity.
//! - [`aspects`]: the aspect catalog and its embeddings.
//! - [`scoring`]: per-sentence opinion scores.
//! - [`optimizer`]: the selection program and its solvers.
//! - [`summarizer`]: request orchestration and summary assembly.
//! - [`evaluation`]: ROUGE precision and the ablation runner.

pub mod aspects;
pub mod corpus;
pub mod embedding;
mod error;
pub mod evaluation;
pub mod optimizer;
pub mod resources;
pub mod scoring;
pub mod summarizer;

pub use error::{Error, FieldError, Result};
