//! Review ingestion, sentence segmentation and tokenization.
//!
//! A [`Corpus`] is the immutable, indexed sentence pool of one place. It is
//! built once from validated [`Review`]s and shared read-only afterwards.

mod index;
mod segment;
mod text;

use std::collections::BTreeMap;
use std::fmt;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

pub use index::{load_index, save_index, INDEX_MAGIC};
pub use segment::Segmenter;
pub use text::{normalize_word, preprocess, tokenize, StopWords};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Gender {
    #[serde(rename = "F")]
    Female,
    #[serde(rename = "M")]
    Male,
    #[serde(rename = "U")]
    Unknown,
}

impl Gender {
    pub fn parse(code: &str) -> Option<Gender> {
        match code.trim() {
            "F" | "f" => Some(Gender::Female),
            "M" | "m" => Some(Gender::Male),
            "U" | "u" | "" => Some(Gender::Unknown),
            _ => None,
        }
    }

    /// The female indicator of the fairness term. Unknown counts as male.
    pub fn is_female(self) -> bool {
        self == Gender::Female
    }
}

impl fmt::Display for Gender {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gender::Female => "F",
            Gender::Male => "M",
            Gender::Unknown => "U",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Review {
    pub id: String,
    pub place: String,
    pub text: String,
    pub rating: u8,
    pub likes: u64,
    pub username: String,
    pub gender: Gender,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub country: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sentence {
    pub id: String,
    pub review_id: String,
    pub place: String,
    pub text: String,
    pub tokens: Vec<String>,
    pub content_tokens: Vec<String>,
    pub word_count: usize,
    pub gender: Gender,
    /// Likes of the source review.
    pub likes: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub place: String,
    pub review_count: usize,
    pub female_count: usize,
    pub male_count: usize,
    pub unknown_count: usize,
    pub sentence_count: usize,
}

/// A record that failed validation, with its 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecordError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for RecordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Clone, Default)]
pub struct IngestReport {
    pub reviews: Vec<Review>,
    pub errors: Vec<RecordError>,
    /// Valid records that belong to another place.
    pub other_place: usize,
}

/// Wire shape of a review record. Every field is optional here so that
/// missing fields become record-level errors instead of parse failures.
#[derive(Debug, Deserialize)]
struct RawReview {
    id: Option<serde_json::Value>,
    place: Option<String>,
    text: Option<String>,
    rating: Option<serde_json::Value>,
    likes: Option<serde_json::Value>,
    username: Option<String>,
    gender: Option<String>,
    country: Option<String>,
}

impl RawReview {
    fn validate(self, default_place: &str) -> Result<Review, String> {
        let id = match self.id {
            Some(serde_json::Value::String(s)) if !s.trim().is_empty() => s,
            Some(serde_json::Value::Number(n)) => n.to_string(),
            Some(_) => return Err("field `id` must be a non-empty string".into()),
            None => return Err("missing field `id`".into()),
        };
        let text = self.text.ok_or("missing field `text`")?;
        if text.trim().is_empty() {
            return Err("field `text` is empty".into());
        }
        let rating = self
            .rating
            .as_ref()
            .ok_or("missing field `rating`")
            .and_then(|v| integer(v).ok_or("field `rating` must be an integer"))?;
        if !(1..=5).contains(&rating) {
            return Err(format!("rating {rating} outside 1..=5"));
        }
        let likes = match &self.likes {
            None => 0,
            Some(v) => match integer(v) {
                Some(n) if n >= 0 => n as u64,
                _ => return Err("field `likes` must be a non-negative integer".into()),
            },
        };
        let gender = match self.gender.as_deref() {
            None => Gender::Unknown,
            Some(code) => {
                Gender::parse(code).ok_or_else(|| format!("gender {code:?} is not F/M/U"))?
            }
        };
        Ok(Review {
            id,
            place: self.place.unwrap_or_else(|| default_place.to_string()),
            text,
            rating: rating as u8,
            likes,
            username: self.username.unwrap_or_default(),
            gender,
            country: self.country.filter(|c| !c.is_empty()),
        })
    }
}

fn integer(v: &serde_json::Value) -> Option<i64> {
    match v {
        serde_json::Value::Number(n) => n.as_i64(),
        serde_json::Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

/// Reads JSON Lines review records for `place`.
///
/// Records whose `place` field names another place are counted and skipped;
/// a missing `place` means the requested one. Malformed records are reported
/// with their line number. Blank lines are ignored.
pub fn ingest_reviews<R: BufRead>(source: R, place: &str) -> crate::Result<IngestReport> {
    ingest_jsonl(source, Some(place))
}

/// Reads JSON Lines review records for every place. Each record must carry
/// its `place`; group the result with [`group_by_place`].
pub fn ingest_all_reviews<R: BufRead>(source: R) -> crate::Result<IngestReport> {
    ingest_jsonl(source, None)
}

fn ingest_jsonl<R: BufRead>(source: R, place: Option<&str>) -> crate::Result<IngestReport> {
    let mut report = IngestReport::default();
    for (idx, line) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| crate::Error::parse(line_no, e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawReview = match serde_json::from_str(&line) {
            Ok(raw) => raw,
            Err(e) => {
                report.errors.push(RecordError {
                    line: line_no,
                    message: format!("malformed record: {e}"),
                });
                continue;
            }
        };
        accept(&mut report, raw, place, line_no);
    }
    Ok(report)
}

/// CSV counterpart of [`ingest_reviews`] (`Some(place)`) and
/// [`ingest_all_reviews`] (`None`); the header row carries the same field
/// names as the JSON records. Line numbers count the header as line 1.
pub fn ingest_reviews_csv<R: std::io::Read>(source: R, place: Option<&str>) -> crate::Result<IngestReport> {
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(source);
    let headers = reader
        .headers()
        .map_err(|e| crate::Error::parse(1, e.to_string()))?
        .clone();
    let mut report = IngestReport::default();
    for (idx, record) in reader.records().enumerate() {
        let line_no = record
            .as_ref()
            .ok()
            .and_then(|r| r.position())
            .map(|p| p.line() as usize)
            .unwrap_or(idx + 2);
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                report.errors.push(RecordError {
                    line: line_no,
                    message: format!("malformed record: {e}"),
                });
                continue;
            }
        };
        let mut object = serde_json::Map::new();
        for (name, value) in headers.iter().zip(record.iter()) {
            if value.is_empty() {
                continue;
            }
            object.insert(name.to_string(), serde_json::Value::String(value.to_string()));
        }
        let raw: RawReview = serde_json::from_value(serde_json::Value::Object(object))
            .map_err(|e| crate::Error::parse(line_no, e.to_string()))?;
        accept(&mut report, raw, place, line_no);
    }
    Ok(report)
}

fn accept(report: &mut IngestReport, raw: RawReview, place: Option<&str>, line: usize) {
    let place = match (place, raw.place.as_deref()) {
        (Some(wanted), Some(p)) if p != wanted => {
            report.other_place += 1;
            return;
        }
        (Some(wanted), _) => wanted.to_string(),
        (None, Some(p)) if !p.trim().is_empty() => p.to_string(),
        (None, _) => {
            report.errors.push(RecordError {
                line,
                message: "missing field `place`".into(),
            });
            return;
        }
    };
    match raw.validate(&place) {
        Ok(review) => report.reviews.push(review),
        Err(message) => report.errors.push(RecordError { line, message }),
    }
}

/// Distinct place identifiers of a JSON Lines source, in first-seen order.
/// Records without a `place` field are ignored.
pub fn places_in<R: BufRead>(source: R) -> crate::Result<Vec<String>> {
    #[derive(Deserialize)]
    struct PlaceOnly {
        place: Option<String>,
    }
    let mut seen = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let line = line.map_err(|e| crate::Error::parse(idx + 1, e.to_string()))?;
        if let Ok(PlaceOnly { place: Some(p) }) = serde_json::from_str(&line) {
            if !seen.contains(&p) {
                seen.push(p);
            }
        }
    }
    Ok(seen)
}

/// Segmenter and stop-words, bundled because every sentence needs both.
#[derive(Debug, Clone, Default)]
pub struct TextPipeline {
    pub segmenter: Segmenter,
    pub stopwords: StopWords,
}

impl TextPipeline {
    /// Splits a review into sentences. An empty result means the review had
    /// no words at all.
    pub fn segment_sentences(&self, review: &Review) -> Vec<Sentence> {
        self.segmenter
            .split(&review.text)
            .into_iter()
            .filter_map(|text| {
                let (tokens, content_tokens) = preprocess(text, &self.stopwords);
                (!tokens.is_empty()).then_some((text, tokens, content_tokens))
            })
            .enumerate()
            .map(|(k, (text, tokens, content_tokens))| Sentence {
                id: format!("{}:{}", review.id, k),
                review_id: review.id.clone(),
                place: review.place.clone(),
                text: text.to_string(),
                word_count: tokens.len(),
                tokens,
                content_tokens,
                gender: review.gender,
                likes: review.likes,
            })
            .collect()
    }
}

/// The sentence pool of a single place.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    pub place: String,
    pub reviews: Vec<Review>,
    pub sentences: Vec<Sentence>,
}

impl Corpus {
    /// Segments every review. Reviews that yield no sentence are dropped with
    /// a warning.
    pub fn build(place: impl Into<String>, reviews: Vec<Review>, pipeline: &TextPipeline) -> Self {
        let place = place.into();
        let mut kept = Vec::with_capacity(reviews.len());
        let mut sentences = Vec::new();
        for review in reviews {
            let segmented = pipeline.segment_sentences(&review);
            if segmented.is_empty() {
                tracing::warn!(review = %review.id, "review has no sentences; skipped");
                continue;
            }
            sentences.extend(segmented);
            kept.push(review);
        }
        Corpus {
            place,
            reviews: kept,
            sentences,
        }
    }

    pub fn stats(&self) -> CorpusStats {
        let count = |g: Gender| self.reviews.iter().filter(|r| r.gender == g).count();
        CorpusStats {
            place: self.place.clone(),
            review_count: self.reviews.len(),
            female_count: count(Gender::Female),
            male_count: count(Gender::Male),
            unknown_count: count(Gender::Unknown),
            sentence_count: self.sentences.len(),
        }
    }

    pub fn review(&self, id: &str) -> Option<&Review> {
        self.reviews.iter().find(|r| r.id == id)
    }
}

/// Groups reviews by their `place` field.
pub fn group_by_place(reviews: Vec<Review>) -> BTreeMap<String, Vec<Review>> {
    let mut map: BTreeMap<String, Vec<Review>> = BTreeMap::new();
    for r in reviews {
        map.entry(r.place.clone()).or_default().push(r);
    }
    map
}
