#![allow(dead_code)]

use std::sync::Arc;

use opinsum::corpus::{group_by_place, ingest_all_reviews, Corpus, TextPipeline};
use opinsum::embedding::WordVectorTable;
use opinsum::optimizer::SelectionProblem;
use opinsum::summarizer::Engine;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DESK_REVIEWS: &str = include_str!("../../../../data/fixtures/desk/reviews.jsonl");
pub const DESK_VECTORS: &str = include_str!("../../../../data/fixtures/desk/vectors.txt");
pub const SEVEN_PLACES_REVIEWS: &str = include_str!("../../../../data/fixtures/seven-places/reviews.jsonl");

pub fn corpora(jsonl: &str) -> Vec<Corpus> {
    let report = ingest_all_reviews(jsonl.as_bytes()).unwrap();
    assert!(report.errors.is_empty(), "{:?}", report.errors);
    let pipeline = TextPipeline::default();
    group_by_place(report.reviews)
        .into_iter()
        .map(|(place, reviews)| Corpus::build(place, reviews, &pipeline))
        .collect()
}

pub fn desk_engine_with(corpora: Vec<Corpus>) -> Engine {
    let table = WordVectorTable::parse(DESK_VECTORS.as_bytes()).unwrap();
    Engine::with_defaults(corpora, Arc::new(table)).unwrap()
}

pub fn desk_engine() -> Engine {
    desk_engine_with(corpora(DESK_REVIEWS))
}

/// Raw ingredients of a random instance, kept so tests can rebuild variants.
#[derive(Debug, Clone)]
pub struct Instance {
    pub score: Vec<f64>,
    pub length: Vec<u32>,
    pub female: Vec<bool>,
    pub sim: Vec<Vec<f64>>,
    pub budget: u64,
    pub fp: f64,
}

impl Instance {
    #[allow(clippy::needless_range_loop)]
    pub fn random(seed: u64, n: usize, fp: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let score = (0..n).map(|_| rng.gen::<f64>()).collect();
        let length: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=25)).collect();
        let female = (0..n).map(|_| rng.gen_bool(0.5)).collect();
        let mut sim = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let s = rng.gen::<f64>();
                sim[i][j] = s;
                sim[j][i] = s;
            }
        }
        let total: u64 = length.iter().map(|&l| u64::from(l)).sum();
        let budget = rng.gen_range(0..=total.max(1));
        Instance {
            score,
            length,
            female,
            sim,
            budget,
            fp,
        }
    }

    pub fn problem(&self) -> SelectionProblem {
        SelectionProblem::new(
            self.score.clone(),
            self.length.clone(),
            self.female.clone(),
            self.sim.clone(),
            self.budget,
            self.fp,
        )
        .unwrap()
    }
}
