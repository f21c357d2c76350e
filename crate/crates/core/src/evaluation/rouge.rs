use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::corpus::{tokenize, Review};
use crate::{Error, Result};

/// Number of most-liked reviews concatenated into a proxy reference.
pub const PROXY_GOLD_SIZE: usize = 10;

/// The most-liked reviews, likes descending then id ascending.
pub fn proxy_gold_reviews(reviews: &[Review]) -> Vec<&Review> {
    let mut sorted: Vec<&Review> = reviews.iter().collect();
    sorted.sort_by(|a, b| b.likes.cmp(&a.likes).then_with(|| a.id.cmp(&b.id)));
    sorted.truncate(PROXY_GOLD_SIZE);
    sorted
}

/// Concatenated text of [`proxy_gold_reviews`], one review per line.
pub fn build_proxy_gold(reviews: &[Review]) -> String {
    proxy_gold_reviews(reviews)
        .iter()
        .map(|r| r.text.as_str())
        .collect::<Vec<_>>()
        .join("\n")
}

/// Lowercased, punctuation-stripped tokens; no stemming.
pub fn rouge_tokens(text: &str) -> Vec<String> {
    tokenize(text)
}

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut counts = HashMap::new();
    for gram in tokens.windows(n) {
        *counts.entry(gram).or_insert(0) += 1;
    }
    counts
}

fn candidate_tokens(candidate: &str) -> Result<Vec<String>> {
    let tokens = rouge_tokens(candidate);
    if tokens.is_empty() {
        return Err(Error::Invalid("ROUGE needs a non-empty candidate".into()));
    }
    Ok(tokens)
}

/// Clipped n-gram matches over the candidate's n-gram count. A candidate
/// shorter than `n` words has no n-grams and scores 0.
pub fn rouge_n_precision(candidate: &str, reference: &str, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Invalid("ROUGE-n needs n ≥ 1".into()));
    }
    let cand = candidate_tokens(candidate)?;
    let refs = rouge_tokens(reference);
    let total = cand.len().saturating_sub(n - 1);
    if total == 0 {
        return Ok(0.0);
    }
    let ref_counts = ngram_counts(&refs, n);
    let matched: usize = ngram_counts(&cand, n)
        .into_iter()
        .map(|(gram, c)| c.min(ref_counts.get(gram).copied().unwrap_or(0)))
        .sum();
    Ok(matched as f64 / total as f64)
}

pub fn lcs_length<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for x in a {
        for (j, y) in b.iter().enumerate() {
            cur[j + 1] = if x == y { prev[j] + 1 } else { cur[j].max(prev[j + 1]) };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Longest common subsequence length over the candidate's token count.
pub fn rouge_l_precision(candidate: &str, reference: &str) -> Result<f64> {
    let cand = candidate_tokens(candidate)?;
    let refs = rouge_tokens(reference);
    Ok(lcs_length(&cand, &refs) as f64 / cand.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RougeScores {
    pub rouge1_p: f64,
    pub rouge2_p: f64,
    #[serde(rename = "rougeL_p")]
    pub rouge_l_p: f64,
}

impl RougeScores {
    pub fn compute(candidate: &str, reference: &str) -> Result<Self> {
        Ok(RougeScores {
            rouge1_p: rouge_n_precision(candidate, reference, 1)?,
            rouge2_p: rouge_n_precision(candidate, reference, 2)?,
            rouge_l_p: rouge_l_precision(candidate, reference)?,
        })
    }

    /// Unweighted mean; `None` for an empty input.
    pub fn mean<'a>(scores: impl IntoIterator<Item = &'a RougeScores>) -> Option<RougeScores> {
        let mut n = 0usize;
        let mut sum = RougeScores {
            rouge1_p: 0.0,
            rouge2_p: 0.0,
            rouge_l_p: 0.0,
        };
        for s in scores {
            sum.rouge1_p += s.rouge1_p;
            sum.rouge2_p += s.rouge2_p;
            sum.rouge_l_p += s.rouge_l_p;
            n += 1;
        }
        (n > 0).then(|| {
            let k = n as f64;
            RougeScores {
                rouge1_p: sum.rouge1_p / k,
                rouge2_p: sum.rouge2_p / k,
                rouge_l_p: sum.rouge_l_p / k,
            }
        })
    }
}

/// Per-place scores and their macro average.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RougeReport {
    pub places: BTreeMap<String, RougeScores>,
    pub macro_average: Option<RougeScores>,
}

impl RougeReport {
    pub fn from_places(places: BTreeMap<String, RougeScores>) -> Self {
        let macro_average = RougeScores::mean(places.values());
        RougeReport { places, macro_average }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Gender;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn review(id: &str, likes: u64) -> Review {
        Review {
            id: id.into(),
            place: "p".into(),
            text: format!("text {id}"),
            rating: 4,
            likes,
            username: String::new(),
            gender: Gender::Unknown,
            country: None,
        }
    }

    #[test]
    fn cat_sat_triple() {
        assert_abs_diff_eq!(rouge_n_precision("the cat sat", "the cat", 1).unwrap(), 2.0 / 3.0);
        assert_abs_diff_eq!(rouge_n_precision("the cat sat", "the cat", 2).unwrap(), 0.5);
        assert_abs_diff_eq!(rouge_l_precision("the cat sat", "the cat").unwrap(), 2.0 / 3.0);
    }

    #[test]
    fn normalization_and_edges() {
        assert_eq!(rouge_n_precision("The CAT, sat!", "the cat sat", 1).unwrap(), 1.0);
        assert_eq!(rouge_l_precision("dog runs", "the cat sat").unwrap(), 0.0);
        assert!(rouge_n_precision("", "x", 1).is_err());
        assert!(rouge_n_precision("...", "x", 1).is_err());
        assert!(rouge_l_precision("  ", "x").is_err());
        assert_eq!(rouge_n_precision("alone", "alone", 2).unwrap(), 0.0);
    }

    #[test]
    fn clipping() {
        // "the" appears three times in the candidate but once in the reference
        assert_abs_diff_eq!(rouge_n_precision("the the the", "the cat", 1).unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn proxy_gold_selection() {
        let five: Vec<Review> = (0..5).map(|i| review(&format!("r{i}"), i)).collect();
        assert_eq!(proxy_gold_reviews(&five).len(), 5);
        assert_eq!(build_proxy_gold(&five).lines().count(), 5);

        // likes 0..12 plus two ties at rank 10
        let mut many: Vec<Review> = (0..12).map(|i| review(&format!("a{i:02}"), i)).collect();
        many.push(review("z", 3));
        many.push(review("b", 3));
        let ids: Vec<&str> = proxy_gold_reviews(&many).iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids, ["a11", "a10", "a09", "a08", "a07", "a06", "a05", "a04", "a03", "b"]);
    }

    #[test]
    fn macro_average_is_unweighted() {
        let mut places = BTreeMap::new();
        places.insert("a".to_string(), RougeScores { rouge1_p: 1.0, rouge2_p: 0.5, rouge_l_p: 0.5 });
        places.insert("b".to_string(), RougeScores { rouge1_p: 0.0, rouge2_p: 0.0, rouge_l_p: 0.25 });
        let report = RougeReport::from_places(places);
        let m = report.macro_average.unwrap();
        assert_eq!((m.rouge1_p, m.rouge2_p, m.rouge_l_p), (0.5, 0.25, 0.375));
        assert!(RougeReport::from_places(BTreeMap::new()).macro_average.is_none());
    }

    fn words() -> impl Strategy<Value = Vec<String>> {
        prop::collection::vec(prop::sample::select(vec!["the", "cat", "sat", "on", "mat", "a", "dog", "ran"]), 2..30)
            .prop_map(|w| w.into_iter().map(String::from).collect())
    }

    proptest! {
        #[test]
        fn self_similarity_is_one(w in words()) {
            let t = w.join(" ");
            prop_assert_eq!(rouge_n_precision(&t, &t, 1).unwrap(), 1.0);
            prop_assert_eq!(rouge_n_precision(&t, &t, 2).unwrap(), 1.0);
            prop_assert_eq!(rouge_l_precision(&t, &t).unwrap(), 1.0);
        }

        #[test]
        fn lcs_bounded_by_unigram(a in words(), b in words()) {
            let (a, b) = (a.join(" "), b.join(" "));
            let r1 = rouge_n_precision(&a, &b, 1).unwrap();
            let rl = rouge_l_precision(&a, &b).unwrap();
            prop_assert!(rl <= r1 + 1e-12);
            prop_assert!((0.0..=1.0).contains(&r1) && (0.0..=1.0).contains(&rl));
        }

        #[test]
        fn disjoint_is_zero(w in words()) {
            let a = w.join(" ");
            let b = w.iter().map(|x| format!("{x}x")).collect::<Vec<_>>().join(" ");
            prop_assert_eq!(rouge_n_precision(&a, &b, 1).unwrap(), 0.0);
            prop_assert_eq!(rouge_l_precision(&a, &b).unwrap(), 0.0);
        }
    }
}
