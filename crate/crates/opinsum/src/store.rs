//! The on-disk data directory.
//!
//! ```text
//! <data-dir>/
//!   places/<place>.idx   corpus indexes written by `ingest`
//!   vectors.txt          optional word vectors (word2vec text format)
//!   catalog.toml         optional aspect catalog override
//!   lexicon.tsv          optional sentiment lexicon override
//! ```
//!
//! Without `vectors.txt` every word of the corpus gets a seeded pseudo-random
//! vector, which keeps the pipeline runnable but makes relevance arbitrary.

use std::fs::{self, File};
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use opinsum::aspects::{load_catalog, AspectCatalog};
use opinsum::corpus::{
    group_by_place, ingest_all_reviews, ingest_reviews, ingest_reviews_csv, load_index, save_index, Corpus,
    CorpusStats, IngestReport, TextPipeline,
};
use opinsum::embedding::{load_word_vectors, EmbeddingProvider};
use opinsum::scoring::SentimentLexicon;
use opinsum::summarizer::{vocabulary_table, Engine};
use opinsum::{Error, Result};

const INDEX_EXT: &str = "idx";

#[derive(Debug, Clone)]
pub struct DataDir {
    root: PathBuf,
}

/// What one `ingest` call wrote.
#[derive(Debug)]
pub struct IngestSummary {
    pub places: Vec<CorpusStats>,
    pub report: IngestReport,
}

/// Place ids become file names, so they are restricted to a safe alphabet.
pub fn check_place_id(place: &str) -> Result<()> {
    let ok = !place.is_empty()
        && !place.starts_with('.')
        && place.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'));
    if ok {
        Ok(())
    } else {
        Err(Error::Invalid(format!(
            "place id {place:?} may only contain ASCII letters, digits, '-', '_' and '.'"
        )))
    }
}

impl DataDir {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        DataDir { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn places_dir(&self) -> PathBuf {
        self.root.join("places")
    }

    pub fn index_path(&self, place: &str) -> PathBuf {
        self.places_dir().join(format!("{place}.{INDEX_EXT}"))
    }

    /// Reads a JSON Lines or CSV (by extension) review file and writes one
    /// index per place. With `place`, only that place's records are kept.
    pub fn ingest(&self, file: &Path, place: Option<&str>) -> Result<IngestSummary> {
        if let Some(p) = place {
            check_place_id(p)?;
        }
        let open = || File::open(file).map_err(|e| Error::io(file, e));
        let is_csv = file.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
        let report = match (is_csv, place) {
            (true, p) => ingest_reviews_csv(open()?, p)?,
            (false, Some(p)) => ingest_reviews(BufReader::new(open()?), p)?,
            (false, None) => ingest_all_reviews(BufReader::new(open()?))?,
        };
        let grouped = group_by_place(report.reviews.clone());
        for p in grouped.keys() {
            check_place_id(p)?;
        }
        let pipeline = TextPipeline::default();
        let mut places = Vec::new();
        for (p, reviews) in grouped {
            let corpus = Corpus::build(p.clone(), reviews, &pipeline);
            save_index(&corpus, &self.index_path(&p))?;
            places.push(corpus.stats());
        }
        Ok(IngestSummary { places, report })
    }

    /// Every indexed place, sorted by id.
    pub fn load_corpora(&self) -> Result<Vec<Corpus>> {
        let dir = self.places_dir();
        let entries = match fs::read_dir(&dir) {
            Ok(entries) => entries,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(Error::io(&dir, e)),
        };
        let mut paths = Vec::new();
        for entry in entries {
            let path = entry.map_err(|e| Error::io(&dir, e))?.path();
            if path.extension().is_some_and(|e| e == INDEX_EXT) {
                paths.push(path);
            }
        }
        paths.sort();
        paths.iter().map(|p| load_index(p)).collect()
    }

    fn optional(&self, name: &str) -> Option<PathBuf> {
        let path = self.root.join(name);
        path.is_file().then_some(path)
    }

    /// Loads corpora, vectors, catalog and lexicon into a ready engine.
    pub fn load_engine(&self) -> Result<Engine> {
        let corpora = self.load_corpora()?;
        let provider: Arc<dyn EmbeddingProvider> = match self.optional("vectors.txt") {
            Some(path) => Arc::new(load_word_vectors(&path)?),
            None => {
                tracing::warn!("no vectors.txt in the data directory; using seeded pseudo-random word vectors");
                Arc::new(vocabulary_table(&corpora)?)
            }
        };
        let catalog = match self.optional("catalog.toml") {
            Some(path) => load_catalog(&path, provider.as_ref())?,
            None => AspectCatalog::default_catalog(provider.as_ref())?,
        };
        let lexicon = match self.optional("lexicon.tsv") {
            Some(path) => SentimentLexicon::load(&path)?,
            None => SentimentLexicon::default(),
        };
        Ok(Engine::new(corpora, catalog, lexicon, provider))
    }
}
