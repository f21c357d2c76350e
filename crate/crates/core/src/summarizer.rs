//! Request orchestration: score, prune, solve, assemble.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::aspects::{catalog_terms, AspectCatalog, AspectClass, AspectRequest};
use crate::corpus::{Corpus, Gender, Sentence};
use crate::embedding::{cosine, EmbeddingProvider, WordVectorTable};
use crate::optimizer::{solve_exact, solve_heuristic, SelectionProblem, Solution, SolverConfig};
use crate::scoring::{relevance, OpinionScore, Scorer, ScoringConfig, SentimentLexicon};
use crate::{resources, Error, FieldError, Result};

/// Label for entries with no in-vocabulary content word.
pub const UNASSIGNED: &str = "unassigned";

/// Largest accepted `candidate_pool`.
pub const MAX_CANDIDATE_POOL: usize = 1000;
/// Largest accepted `exact_limit`.
pub const MAX_EXACT_LIMIT: usize = 60;

/// Everything a reader can set for one summary. Missing fields take their
/// defaults when deserialized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ControlParams {
    pub place: String,
    pub aspects: AspectRequest,
    pub length_words: u64,
    pub female_ratio: f64,
    pub candidate_pool: usize,
    pub exact_limit: usize,
    pub time_limit_ms: u64,
    /// Redundancy weight λ.
    pub penalty_weight: f64,
    /// Whether the gender-balance term is part of the objective.
    pub fairness: bool,
    pub use_readability: bool,
    pub use_sentiment: bool,
    /// Similarities below this are treated as 0.
    pub sim_threshold: Option<f64>,
}

impl Default for ControlParams {
    fn default() -> Self {
        let solver = SolverConfig::default();
        ControlParams {
            place: String::new(),
            aspects: AspectRequest::All,
            length_words: 100,
            female_ratio: 0.5,
            candidate_pool: 150,
            exact_limit: solver.exact_limit,
            time_limit_ms: solver.time_limit.map_or(10_000, |d| d.as_millis() as u64),
            penalty_weight: 1.0,
            fairness: true,
            use_readability: true,
            use_sentiment: true,
            sim_threshold: None,
        }
    }
}

impl ControlParams {
    pub fn for_place(place: impl Into<String>) -> Self {
        ControlParams {
            place: place.into(),
            ..ControlParams::default()
        }
    }

    /// Field-level validation; aspect labels are checked against the catalog
    /// later.
    pub fn validate(&self) -> Result<()> {
        let mut errors = Vec::new();
        if self.place.trim().is_empty() {
            errors.push(FieldError::new("place", "is required"));
        }
        if !(0.0..=1.0).contains(&self.female_ratio) {
            errors.push(FieldError::new(
                "female_ratio",
                format!("must be in [0, 1], got {}", self.female_ratio),
            ));
        }
        if !(1..=MAX_CANDIDATE_POOL).contains(&self.candidate_pool) {
            errors.push(FieldError::new(
                "candidate_pool",
                format!("must be between 1 and {MAX_CANDIDATE_POOL}, got {}", self.candidate_pool),
            ));
        }
        if self.exact_limit > MAX_EXACT_LIMIT {
            errors.push(FieldError::new(
                "exact_limit",
                format!("must be at most {MAX_EXACT_LIMIT}, got {}", self.exact_limit),
            ));
        }
        if !(self.penalty_weight.is_finite() && self.penalty_weight >= 0.0) {
            errors.push(FieldError::new(
                "penalty_weight",
                format!("must be a finite non-negative number, got {}", self.penalty_weight),
            ));
        }
        if let Some(t) = self.sim_threshold {
            if !(0.0..=1.0).contains(&t) {
                errors.push(FieldError::new("sim_threshold", format!("must be in [0, 1], got {t}")));
            }
        }
        if let AspectRequest::Labels(labels) = &self.aspects {
            if labels.is_empty() {
                errors.push(FieldError::new("aspects", "must name at least one aspect or be \"all\""));
            }
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(Error::Controls(errors))
        }
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            exact_limit: self.exact_limit,
            time_limit: (self.time_limit_ms > 0).then(|| Duration::from_millis(self.time_limit_ms)),
            ..SolverConfig::default()
        }
    }

    pub fn scoring_config(&self) -> ScoringConfig {
        ScoringConfig {
            use_readability: self.use_readability,
            use_sentiment: self.use_sentiment,
        }
    }
}

/// A pooled sentence with its score.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    /// Index into the place's `Corpus::sentences`.
    pub sentence: usize,
    pub score: OpinionScore,
    /// Catalog label of the best-matching selected aspect.
    pub aspect: Option<String>,
}

/// The selection program for one request, before solving.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub candidates: Vec<Candidate>,
    pub problem: SelectionProblem,
    /// Sentences with a positive score, before pooling.
    pub scoreable: usize,
    pub duplicates_dropped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryEntry {
    pub sentence_id: String,
    pub review_id: String,
    pub text: String,
    pub gender: Gender,
    pub word_count: usize,
    pub aspect: String,
    pub score: OpinionScore,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub place: String,
    pub entries: Vec<SummaryEntry>,
    pub total_words: u64,
    pub female_count: usize,
    pub male_count: usize,
    pub unknown_count: usize,
    pub objective: f64,
    pub score_sum: f64,
    pub redundancy_penalty: f64,
    pub fairness_term: f64,
    pub solver: &'static str,
    pub solver_optimal: bool,
    pub candidate_count: usize,
    pub controls_echo: ControlParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

impl Summary {
    /// The imbalance of the entries' genders at `female_ratio`, with unknown
    /// counted as male.
    pub fn recomputed_imbalance(&self) -> f64 {
        let fp = self.controls_echo.female_ratio;
        let males = (self.male_count + self.unknown_count) as f64;
        (fp * males - (1.0 - fp) * self.female_count as f64).abs()
    }

    /// The stable JSON form shared by the CLI and the HTTP service.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serialization cannot fail")
    }

    /// One sentence per line under aspect headers.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let mut current: Option<&str> = None;
        for e in &self.entries {
            if current != Some(e.aspect.as_str()) {
                if current.is_some() {
                    out.push('\n');
                }
                let _ = writeln!(out, "## {}", e.aspect);
                current = Some(&e.aspect);
            }
            let _ = writeln!(out, "{}", e.text);
        }
        if let Some(d) = &self.diagnostic {
            let _ = writeln!(out, "({d})");
        }
        let _ = writeln!(
            out,
            "\n{} / {} words; {} female, {} male, {} unknown",
            self.total_words,
            self.controls_echo.length_words,
            self.female_count,
            self.male_count,
            self.unknown_count
        );
        out
    }
}

/// Label of the selected aspect that maximizes the relevance of `sentence`,
/// or [`UNASSIGNED`] when no content word has a vector.
pub fn assign_best_aspect(
    sentence: &Sentence,
    aspects: &[&AspectClass],
    provider: &dyn EmbeddingProvider,
) -> Result<String> {
    let m = relevance(&sentence.content_tokens, aspects, provider)?;
    Ok(m.aspect.map_or_else(|| UNASSIGNED.to_string(), |j| aspects[j].label.clone()))
}

/// A word table over every content token of `corpora` plus the shipped
/// catalog terms, with seeded pseudo-random vectors. Stands in when no
/// pretrained vectors are available.
pub fn vocabulary_table<'a>(corpora: impl IntoIterator<Item = &'a Corpus>) -> Result<WordVectorTable> {
    let mut words: Vec<String> = catalog_terms(resources::CATALOG)?;
    for corpus in corpora {
        for s in &corpus.sentences {
            words.extend(s.content_tokens.iter().cloned());
        }
    }
    words.sort();
    words.dedup();
    Ok(WordVectorTable::seeded(
        words.iter().map(String::as_str),
        resources::VECTOR_DIM,
        resources::VECTOR_SEED,
    ))
}

/// Immutable state shared by every request.
pub struct Engine {
    corpora: BTreeMap<String, Corpus>,
    catalog: AspectCatalog,
    lexicon: SentimentLexicon,
    provider: Arc<dyn EmbeddingProvider>,
}

impl Engine {
    /// `catalog` must have been embedded with `provider`.
    pub fn new(
        corpora: impl IntoIterator<Item = Corpus>,
        catalog: AspectCatalog,
        lexicon: SentimentLexicon,
        provider: Arc<dyn EmbeddingProvider>,
    ) -> Self {
        Engine {
            corpora: corpora.into_iter().map(|c| (c.place.clone(), c)).collect(),
            catalog,
            lexicon,
            provider,
        }
    }

    /// Shipped catalog and lexicon.
    pub fn with_defaults(
        corpora: impl IntoIterator<Item = Corpus>,
        provider: Arc<dyn EmbeddingProvider>,
    ) -> Result<Self> {
        let catalog = AspectCatalog::default_catalog(provider.as_ref())?;
        Ok(Engine::new(corpora, catalog, SentimentLexicon::default(), provider))
    }

    pub fn places(&self) -> impl Iterator<Item = &Corpus> {
        self.corpora.values()
    }

    pub fn corpus(&self, place: &str) -> Result<&Corpus> {
        self.corpora
            .get(place)
            .ok_or_else(|| Error::UnknownPlace(place.to_string()))
    }

    pub fn catalog(&self) -> &AspectCatalog {
        &self.catalog
    }

    pub fn lexicon(&self) -> &SentimentLexicon {
        &self.lexicon
    }

    pub fn provider(&self) -> &dyn EmbeddingProvider {
        self.provider.as_ref()
    }

    /// Scores, deduplicates and pools the sentences of the requested place
    /// and builds the selection program over the pool.
    pub fn prepare(&self, controls: &ControlParams) -> Result<Prepared> {
        controls.validate()?;
        let corpus = self.corpus(&controls.place)?;
        let aspects = self.catalog.resolve_selection(&controls.aspects)?;
        let scorer = Scorer::new(&self.lexicon, self.provider.as_ref()).with_config(controls.scoring_config());

        let (unique, duplicates_dropped) = dedup(&corpus.sentences);
        let mut candidates = Vec::new();
        for k in unique {
            let sentence = &corpus.sentences[k];
            // a sentence longer than the budget can never be selected
            if sentence.word_count as u64 > controls.length_words {
                continue;
            }
            let (score, aspect) = scorer.score(sentence, &aspects)?;
            if score.combined > 0.0 {
                candidates.push(Candidate {
                    sentence: k,
                    score,
                    aspect: aspect.map(|j| aspects[j].label.clone()),
                });
            }
        }
        let scoreable = candidates.len();
        candidates.sort_by(|a, b| {
            b.score
                .combined
                .total_cmp(&a.score.combined)
                .then(a.sentence.cmp(&b.sentence))
        });
        candidates.truncate(controls.candidate_pool);

        let sentences: Vec<&Sentence> = candidates.iter().map(|c| &corpus.sentences[c.sentence]).collect();
        let problem = SelectionProblem::new(
            candidates.iter().map(|c| c.score.combined).collect(),
            sentences.iter().map(|s| s.word_count as u32).collect(),
            sentences.iter().map(|s| s.gender.is_female()).collect(),
            self.similarities(&sentences, controls.sim_threshold)?,
            controls.length_words,
            controls.female_ratio,
        )?
        .with_penalty_weight(controls.penalty_weight)?
        .with_fairness_weight(if controls.fairness { 1.0 } else { 0.0 })?;

        Ok(Prepared {
            candidates,
            problem,
            scoreable,
            duplicates_dropped,
        })
    }

    fn similarities(&self, sentences: &[&Sentence], threshold: Option<f64>) -> Result<Vec<Vec<f64>>> {
        let vectors: Vec<Vec<f64>> = sentences
            .iter()
            .map(|s| self.provider.sentence_vector(s).vector)
            .collect();
        let n = vectors.len();
        let mut sim = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let mut s = cosine(&vectors[i], &vectors[j])?.clamp(0.0, 1.0);
                if threshold.is_some_and(|t| s < t) {
                    s = 0.0;
                }
                sim[i][j] = s;
                sim[j][i] = s;
            }
        }
        Ok(sim)
    }

    pub fn summarize(&self, controls: &ControlParams) -> Result<Summary> {
        let prepared = self.prepare(controls)?;
        let config = controls.solver_config();
        let (solution, solver) = if prepared.problem.n() <= config.exact_limit {
            (solve_exact(&prepared.problem, &config)?, "exact")
        } else {
            (solve_heuristic(&prepared.problem, &config)?, "heuristic")
        };
        let corpus = self.corpus(&controls.place)?;
        Ok(self.assemble(corpus, controls, &prepared, &solution, solver))
    }

    fn assemble(
        &self,
        corpus: &Corpus,
        controls: &ControlParams,
        prepared: &Prepared,
        solution: &Solution,
        solver: &'static str,
    ) -> Summary {
        let mut chosen: Vec<&Candidate> = solution.indices().into_iter().map(|i| &prepared.candidates[i]).collect();
        let rank = |c: &Candidate| {
            c.aspect
                .as_deref()
                .and_then(|l| self.catalog.position(l))
                .unwrap_or(usize::MAX)
        };
        chosen.sort_by(|a, b| {
            rank(a)
                .cmp(&rank(b))
                .then(b.score.combined.total_cmp(&a.score.combined))
                .then(a.sentence.cmp(&b.sentence))
        });
        let entries: Vec<SummaryEntry> = chosen
            .into_iter()
            .map(|c| {
                let s = &corpus.sentences[c.sentence];
                SummaryEntry {
                    sentence_id: s.id.clone(),
                    review_id: s.review_id.clone(),
                    text: s.text.clone(),
                    gender: s.gender,
                    word_count: s.word_count,
                    aspect: c.aspect.clone().unwrap_or_else(|| UNASSIGNED.to_string()),
                    score: c.score,
                }
            })
            .collect();
        let count = |g: Gender| entries.iter().filter(|e| e.gender == g).count();
        let diagnostic = if prepared.scoreable == 0 {
            Some("no sentence has a positive opinion score for the selected aspects within the length budget".to_string())
        } else {
            None
        };
        Summary {
            place: corpus.place.clone(),
            total_words: solution.total_length,
            female_count: count(Gender::Female),
            male_count: count(Gender::Male),
            unknown_count: count(Gender::Unknown),
            entries,
            objective: solution.objective,
            score_sum: solution.score_sum,
            redundancy_penalty: solution.penalty_sum,
            fairness_term: solution.fairness_term,
            solver,
            solver_optimal: solution.optimal,
            candidate_count: prepared.candidates.len(),
            controls_echo: controls.clone(),
            diagnostic,
        }
    }
}

/// Indices of the first instance of each distinct token sequence, keeping the
/// most-liked instance; plus the number of duplicates dropped.
fn dedup(sentences: &[Sentence]) -> (Vec<usize>, usize) {
    let mut keep: HashMap<&[String], usize> = HashMap::new();
    let mut order = Vec::new();
    for (k, s) in sentences.iter().enumerate() {
        match keep.get_mut(s.tokens.as_slice()) {
            Some(slot) => {
                if s.likes > sentences[*slot].likes {
                    *slot = k;
                }
            }
            None => {
                keep.insert(&s.tokens, k);
                order.push(s.tokens.as_slice());
            }
        }
    }
    let mut kept: Vec<usize> = order.into_iter().map(|t| keep[t]).collect();
    kept.sort_unstable();
    let dropped = sentences.len() - kept.len();
    (kept, dropped)
}
