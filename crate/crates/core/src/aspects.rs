//! The coarse-grained aspect catalog and aspect embeddings.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::embedding::{mean_vector, EmbeddingProvider};
use crate::{resources, Error, Result};

/// Number of in-vocabulary seed terms averaged into an aspect embedding.
pub const EMBEDDING_TERMS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AspectClass {
    pub label: String,
    pub terms: Vec<String>,
    /// Whether the class belongs to the "all" selection.
    pub in_all: bool,
    #[serde(skip)]
    pub embedding: Vec<f64>,
}

#[derive(Debug, Deserialize)]
struct CatalogFile {
    aspect: Vec<ClassRecord>,
}

#[derive(Debug, Deserialize)]
struct ClassRecord {
    label: String,
    terms: Vec<String>,
    #[serde(default = "yes")]
    in_all: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq)]
pub struct AspectCatalog {
    classes: Vec<AspectClass>,
}

impl AspectCatalog {
    /// Parses a catalog file and embeds every class with `provider`.
    pub fn parse(text: &str, provider: &dyn EmbeddingProvider) -> Result<Self> {
        let file: CatalogFile =
            toml::from_str(text).map_err(|e| Error::Invalid(format!("catalog: {e}")))?;
        let mut classes: Vec<AspectClass> = Vec::with_capacity(file.aspect.len());
        for record in file.aspect {
            let label = record.label.trim().to_string();
            if label.is_empty() {
                return Err(Error::Invalid("catalog: empty aspect label".into()));
            }
            if classes.iter().any(|c| c.label.eq_ignore_ascii_case(&label)) {
                return Err(Error::Invalid(format!("catalog: duplicate aspect label {label:?}")));
            }
            if record.terms.is_empty() {
                return Err(Error::Invalid(format!("catalog: aspect {label:?} has no terms")));
            }
            classes.push(AspectClass {
                label,
                terms: record.terms.iter().map(|t| t.trim().to_lowercase()).collect(),
                in_all: record.in_all,
                embedding: Vec::new(),
            });
        }
        if classes.is_empty() {
            return Err(Error::Invalid("catalog: no aspect classes".into()));
        }
        let mut catalog = AspectCatalog { classes };
        catalog.reembed(provider)?;
        Ok(catalog)
    }

    /// The shipped eight-class tourism catalog.
    pub fn default_catalog(provider: &dyn EmbeddingProvider) -> Result<Self> {
        AspectCatalog::parse(resources::CATALOG, provider)
    }

    /// Recomputes every embedding as the mean of the first
    /// [`EMBEDDING_TERMS`] in-vocabulary seed terms.
    pub fn reembed(&mut self, provider: &dyn EmbeddingProvider) -> Result<()> {
        for class in &mut self.classes {
            let in_vocab = class
                .terms
                .iter()
                .map(String::as_str)
                .filter(|t| provider.word_vector(t).is_some())
                .take(EMBEDDING_TERMS);
            let (embedding, any) = mean_vector(provider, in_vocab);
            if !any {
                return Err(Error::Invalid(format!(
                    "aspect {:?} has no seed term in the vector table",
                    class.label
                )));
            }
            class.embedding = embedding;
        }
        Ok(())
    }

    pub fn classes(&self) -> &[AspectClass] {
        &self.classes
    }

    pub fn labels(&self) -> Vec<&str> {
        self.classes.iter().map(|c| c.label.as_str()).collect()
    }

    pub fn get(&self, label: &str) -> Option<&AspectClass> {
        self.classes.iter().find(|c| c.label.eq_ignore_ascii_case(label))
    }

    /// Catalog-order position of a class.
    pub fn position(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.label == label)
    }

    /// Resolves a reader's aspect request into the selected classes, in
    /// catalog order.
    pub fn resolve_selection(&self, request: &AspectRequest) -> Result<Vec<&AspectClass>> {
        match request {
            AspectRequest::All => Ok(self.classes.iter().filter(|c| c.in_all).collect()),
            AspectRequest::Labels(labels) => {
                if labels.is_empty() {
                    return Err(Error::Invalid(
                        "empty aspect list; request \"all\" for every aspect".into(),
                    ));
                }
                for label in labels {
                    if self.get(label).is_none() {
                        return Err(self.unknown(label));
                    }
                }
                Ok(self
                    .classes
                    .iter()
                    .filter(|c| labels.iter().any(|l| c.label.eq_ignore_ascii_case(l)))
                    .collect())
            }
        }
    }

    fn unknown(&self, label: &str) -> Error {
        let lower = label.to_lowercase();
        let suggestion = self
            .classes
            .iter()
            .map(|c| (strsim::levenshtein(&lower, &c.label.to_lowercase()), &c.label))
            .filter(|(d, _)| *d <= 2)
            .min_by_key(|(d, _)| *d)
            .map(|(_, l)| l.clone());
        Error::UnknownAspect {
            label: label.to_string(),
            suggestion,
            valid: self.classes.iter().map(|c| c.label.clone()).collect(),
        }
    }
}

/// Every seed term of a catalog file, without embedding anything. Useful for
/// building a vocabulary before a vector table exists.
pub fn catalog_terms(text: &str) -> Result<Vec<String>> {
    let file: CatalogFile =
        toml::from_str(text).map_err(|e| Error::Invalid(format!("catalog: {e}")))?;
    Ok(file
        .aspect
        .into_iter()
        .flat_map(|c| c.terms)
        .map(|t| t.trim().to_lowercase())
        .collect())
}

/// Loads a catalog file and embeds it against `provider`.
pub fn load_catalog(path: &Path, provider: &dyn EmbeddingProvider) -> Result<AspectCatalog> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    AspectCatalog::parse(&text, provider)
}

/// Which aspects a reader asked for: `"all"` or explicit labels.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum AspectRequest {
    #[default]
    All,
    Labels(Vec<String>),
}

impl AspectRequest {
    /// `"all"` or a comma-separated label list.
    pub fn parse(s: &str) -> Self {
        if s.trim().eq_ignore_ascii_case("all") {
            return AspectRequest::All;
        }
        AspectRequest::Labels(
            s.split(',')
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(String::from)
                .collect(),
        )
    }
}

impl fmt::Display for AspectRequest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AspectRequest::All => f.write_str("all"),
            AspectRequest::Labels(l) => f.write_str(&l.join(",")),
        }
    }
}

impl Serialize for AspectRequest {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            AspectRequest::All => s.serialize_str("all"),
            AspectRequest::Labels(l) => l.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for AspectRequest {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            One(String),
            Many(Vec<String>),
        }
        Ok(match Raw::deserialize(d)? {
            Raw::One(s) => AspectRequest::parse(&s),
            Raw::Many(v) if v.len() == 1 && v[0].eq_ignore_ascii_case("all") => AspectRequest::All,
            Raw::Many(v) => AspectRequest::Labels(v),
        })
    }
}
