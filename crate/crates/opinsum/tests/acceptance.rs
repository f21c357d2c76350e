//! Runs every acceptance criterion at its stated tolerance and prints one
//! PASS/FAIL line per criterion. Exits non-zero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use opinsum::aspects::{AspectCatalog, AspectClass};
use opinsum::corpus::{Gender, Review, TextPipeline};
use opinsum::embedding::WordVectorTable;
use opinsum::evaluation::{rouge_l_precision, rouge_n_precision};
use opinsum::optimizer::{brute_force_oracle, solve_exact, SelectionProblem, SolverConfig};
use opinsum::scoring::{flesch_reading_ease, relevance, OpinionScore, ScoringConfig};
use opinsum::summarizer::ControlParams;
use opinsum_cli::store::DataDir;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use common::{desk_data_dir, fixtures, opinsum, stderr, stdout};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn sentence(text: &str) -> opinsum::corpus::Sentence {
    let review = Review {
        id: "r".into(),
        place: "p".into(),
        text: text.into(),
        rating: 3,
        likes: 0,
        username: String::new(),
        gender: Gender::Unknown,
        country: None,
    };
    TextPipeline::default().segment_sentences(&review).remove(0)
}

#[allow(clippy::needless_range_loop)]
fn solver_exactness() -> Outcome {
    let started = Instant::now();
    let fps = [0.0, 0.3, 0.5, 1.0];
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0000 + seed);
        let n = rng.gen_range(1..=12);
        let fp = fps[seed as usize % 4];
        let score: Vec<f64> = (0..n).map(|_| rng.gen()).collect();
        let length: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=25)).collect();
        let female: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
        let mut sim = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let s: f64 = rng.gen();
                sim[i][j] = s;
                sim[j][i] = s;
            }
        }
        let total: u64 = length.iter().map(|&l| u64::from(l)).sum();
        let budget = rng.gen_range(0..=total);
        let p = SelectionProblem::new(score, length, female, sim, budget, fp).map_err(|e| e.to_string())?;
        let exact = solve_exact(&p, &SolverConfig::default()).map_err(|e| e.to_string())?;
        let oracle = brute_force_oracle(&p).map_err(|e| e.to_string())?;
        check((exact.objective - oracle.objective).abs() <= 1e-9, || {
            format!("seed {seed}: objective {} vs oracle {}", exact.objective, oracle.objective)
        })?;
        check(exact.selected == oracle.selected, || {
            format!("seed {seed}: {:?} vs oracle {:?}", exact.indices(), oracle.indices())
        })?;
    }
    let elapsed = started.elapsed();
    check(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"))?;
    Ok(format!("200 instances agree with the oracle in {elapsed:.2?}"))
}

fn constraint_and_fairness_sweep() -> Result<(usize, f64), String> {
    let dir = desk_data_dir();
    let engine = DataDir::new(dir.path()).load_engine().map_err(|e| e.to_string())?;
    let mut summaries = 0;
    let mut worst_gap: f64 = 0.0;
    for place in ["petra", "taj-mahal"] {
        for length in [0, 20, 50, 100, 200] {
            for fp in [0.0, 0.3, 0.5, 1.0] {
                let controls = ControlParams {
                    length_words: length,
                    female_ratio: fp,
                    ..ControlParams::for_place(place)
                };
                let s = engine.summarize(&controls).map_err(|e| e.to_string())?;
                check(s.total_words <= length, || format!("{place} L={length}: {} words", s.total_words))?;
                // C from the entry genders alone, unknown counted as male
                let females = s.entries.iter().filter(|e| e.gender == Gender::Female).count() as f64;
                let males = s.entries.len() as f64 - females;
                let c = (fp * males - (1.0 - fp) * females).abs();
                worst_gap = worst_gap.max((c - s.fairness_term).abs());
                summaries += 1;
            }
        }
    }
    Ok((summaries, worst_gap))
}

fn constraint_satisfaction() -> Outcome {
    let (n, _) = constraint_and_fairness_sweep()?;
    Ok(format!("{n} summaries over L in {{0, 20, 50, 100, 200}}, zero budget violations"))
}

fn fairness_term() -> Outcome {
    let (n, gap) = constraint_and_fairness_sweep()?;
    check(gap <= 1e-9, || format!("recomputed C differs by {gap}"))?;
    // x0 female, x1 and x2 male: {0,1} has C = 0, {1,2} has C = 1
    let p = SelectionProblem::new(
        vec![0.6; 3],
        vec![10; 3],
        vec![true, false, false],
        vec![vec![0.0; 3]; 3],
        20,
        0.5,
    )
    .map_err(|e| e.to_string())?;
    let s = solve_exact(&p, &SolverConfig::default()).map_err(|e| e.to_string())?;
    check(s.indices() == [0, 1], || format!("selected {:?}", s.indices()))?;
    check((s.objective - 1.2).abs() <= 1e-12, || format!("objective {}", s.objective))?;
    Ok(format!("C matches on {n} summaries (max gap {gap:.1e}); mixed pair chosen"))
}

fn relevance_criterion() -> Outcome {
    let table = WordVectorTable::parse(
        "road 1 0\nfee 0 1\nview 3 4\ndust -1 0\nacc 1 0\ncst 0 2\natt -4 3\n".as_bytes(),
    )
    .map_err(|e| e.to_string())?;
    let catalog = AspectCatalog::parse(
        "[[aspect]]\nlabel = \"Access\"\nterms = [\"acc\"]\n\
         [[aspect]]\nlabel = \"Cost\"\nterms = [\"cst\"]\n\
         [[aspect]]\nlabel = \"Attractions\"\nterms = [\"att\"]\n",
        &table,
    )
    .map_err(|e| e.to_string())?;
    let all: Vec<&AspectClass> = catalog.classes().iter().collect();
    let access_attr = vec![all[0], all[2]];
    let access = vec![all[0]];
    // cosines (Access, Cost, Attractions): road (1, 0, −0.8), fee (0, 1, 0.6),
    // view (0.6, 0.8, 0), dust (−1, 0, 0.8)
    type Case<'a> = (&'a [&'a str], &'a Vec<&'a AspectClass>, f64);
    let cases: Vec<Case> = vec![
        (&["road"], &all, 1.0),
        (&["fee", "view"], &all, 1.0),
        (&["view"], &all, 0.8),
        (&["dust"], &all, 0.8),
        (&["dust", "view"], &all, 0.8),
        (&["view"], &access_attr, 0.6),
        (&["dust"], &access, -1.0),
        (&["unknown"], &all, 0.0),
    ];
    for (words, aspects, expected) in &cases {
        let got = relevance(words, aspects, &table).map_err(|e| e.to_string())?.value;
        check((got - expected).abs() <= 1e-12, || format!("{words:?}: {got} vs {expected}"))?;
    }
    let clamped = OpinionScore::from_raw(50.0, 4, -1.0, ScoringConfig::default()).map_err(|e| e.to_string())?;
    check(clamped.relevance == 0.0, || "negative relevance not clamped".into())?;

    let mut rng = ChaCha8Rng::seed_from_u64(0x00E0_0001);
    for trial in 0..100 {
        let dim = rng.gen_range(2..6);
        let mut t = WordVectorTable::new(dim).map_err(|e| e.to_string())?;
        let words: Vec<String> = (0..rng.gen_range(1..6)).map(|i| format!("w{i}")).collect();
        for w in &words {
            t.insert(w.clone(), (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
                .map_err(|e| e.to_string())?;
        }
        let classes: Vec<AspectClass> = (0..rng.gen_range(2..7))
            .map(|k| AspectClass {
                label: format!("A{k}"),
                terms: vec![],
                in_all: true,
                embedding: (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            })
            .collect();
        let refs: Vec<&AspectClass> = classes.iter().collect();
        let cut = rng.gen_range(1..refs.len());
        let small = relevance(&words, &refs[..cut], &t).map_err(|e| e.to_string())?.value;
        let large = relevance(&words, &refs, &t).map_err(|e| e.to_string())?.value;
        check(small <= large, || format!("trial {trial}: {small} > {large}"))?;
    }
    Ok(format!("{} hand-enumerated cases exact; 100 monotonicity fixtures hold", cases.len()))
}

fn flesch() -> Outcome {
    let cat = flesch_reading_ease(&sentence("The cat sat.")).map_err(|e| e.to_string())?;
    let twenty = sentence("we saw the big red fort and ran up the hill to see the sun set on the old town");
    check(twenty.word_count == 20, || format!("{} words", twenty.word_count))?;
    let twenty = flesch_reading_ease(&twenty).map_err(|e| e.to_string())?;
    check((cat - 119.19).abs() <= 1e-3, || format!("cat sat = {cat}"))?;
    check((twenty - 101.935).abs() <= 1e-3, || format!("twenty = {twenty}"))?;
    for raw in [cat, twenty] {
        let s = OpinionScore::from_raw(raw, 4, 1.0, ScoringConfig::default()).map_err(|e| e.to_string())?;
        check(s.readability == 1.0, || format!("{raw} normalizes to {}", s.readability))?;
    }
    Ok(format!("{cat:.3} and {twenty:.3}, both normalized to 1.0"))
}

fn rouge() -> Outcome {
    let r1 = rouge_n_precision("the cat sat", "the cat", 1).map_err(|e| e.to_string())?;
    let r2 = rouge_n_precision("the cat sat", "the cat", 2).map_err(|e| e.to_string())?;
    let rl = rouge_l_precision("the cat sat", "the cat").map_err(|e| e.to_string())?;
    check(r1 == 2.0 / 3.0 && r2 == 0.5 && rl == 2.0 / 3.0, || format!("({r1}, {r2}, {rl})"))?;
    let texts: Vec<String> = std::fs::read_to_string(fixtures().join("desk/reviews.jsonl"))
        .map_err(|e| e.to_string())?
        .lines()
        .take(50)
        .map(|l| serde_json::from_str::<Value>(l).unwrap()["text"].as_str().unwrap().to_string())
        .collect();
    check(texts.len() == 50, || "fewer than 50 fixture texts".into())?;
    for t in &texts {
        let scores = [
            rouge_n_precision(t, t, 1).map_err(|e| e.to_string())?,
            rouge_n_precision(t, t, 2).map_err(|e| e.to_string())?,
            rouge_l_precision(t, t).map_err(|e| e.to_string())?,
        ];
        check(scores == [1.0; 3], || format!("self-similarity {scores:?} for {t:?}"))?;
    }
    Ok("(2/3, 1/2, 2/3) exact; self-similarity 1.0 on 50 texts".into())
}

fn ablation() -> Outcome {
    let started = Instant::now();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    std::fs::copy(fixtures().join("desk/vectors.txt"), dir.path().join("vectors.txt")).map_err(|e| e.to_string())?;
    let reviews = fixtures().join("desk/reviews.jsonl");
    let out = opinsum(dir.path(), &["ingest", reviews.to_str().unwrap()]);
    check(out.status.success(), || stderr(&out))?;

    let mut runs = Vec::new();
    for k in 0..2 {
        let json = dir.path().join(format!("ablation-{k}.json"));
        let out = opinsum(dir.path(), &["eval", "--ablation", "--out", json.to_str().unwrap()]);
        check(out.status.success(), || stderr(&out))?;
        let report = std::fs::read_to_string(&json).map_err(|e| e.to_string())?;
        runs.push((stdout(&out), report));
    }
    check(runs[0] == runs[1], || "two runs differ".into())?;

    let report: Value = serde_json::from_str(&runs[0].1).map_err(|e| e.to_string())?;
    let rows = report["rows"].as_array().ok_or("no rows")?;
    let labels: Vec<&str> = rows.iter().filter_map(|r| r["config"]["label"].as_str()).collect();
    let expected = [
        "with all constraints",
        "w/o Fairness",
        "w/o Redundancy",
        "basic",
        "w/o Readability",
        "w/o Sentiment",
        "w/o both",
    ];
    check(labels == expected, || format!("rows {labels:?}"))?;
    let mut cells = 0;
    for row in rows {
        check(row["errors"].as_array().is_some_and(|e| e.is_empty()), || format!("cell errors {}", row["errors"]))?;
        let places = row["report"]["places"].as_object().ok_or("no places")?;
        check(places.len() == 2, || format!("{} places", places.len()))?;
        for scores in places.values().chain(std::iter::once(&row["report"]["macro_average"])) {
            for key in ["rouge1_p", "rouge2_p", "rougeL_p"] {
                let v = scores[key].as_f64().ok_or("missing score")?;
                check((0.0..=1.0).contains(&v), || format!("{key} = {v}"))?;
            }
        }
        cells += places.len();
    }
    let elapsed = started.elapsed();
    check(elapsed < Duration::from_secs(120), || format!("took {elapsed:?}"))?;
    Ok(format!("7 rows, {cells} cells in [0, 1], identical across two runs, {elapsed:.2?}"))
}

fn dataset_statistics() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let reviews = fixtures().join("seven-places/reviews.jsonl");
    let out = opinsum(dir.path(), &["ingest", reviews.to_str().unwrap()]);
    check(out.status.success(), || stderr(&out))?;
    let corpora = DataDir::new(dir.path()).load_corpora().map_err(|e| e.to_string())?;
    let expected = [
        ("chichen-itza", 482, 518),
        ("christ-the-redeemer", 445, 555),
        ("colosseum", 492, 508),
        ("great-wall", 452, 548),
        ("machu-picchu", 456, 544),
        ("petra", 439, 561),
        ("taj-mahal", 398, 602),
    ];
    let got: Vec<(String, usize, usize)> = corpora
        .iter()
        .map(|c| {
            let s = c.stats();
            (s.place, s.female_count, s.male_count)
        })
        .collect();
    let want: Vec<(String, usize, usize)> = expected.iter().map(|&(p, f, m)| (p.to_string(), f, m)).collect();
    check(got == want, || format!("{got:?}"))?;
    let female: usize = got.iter().map(|g| g.1).sum();
    let male: usize = got.iter().map(|g| g.2).sum();
    check((female, male) == (3164, 3836), || format!("totals {female}/{male}"))?;
    Ok("7 places match, totals 3164 female / 3836 male".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("solver exactness", solver_exactness),
        ("constraint satisfaction", constraint_satisfaction),
        ("fairness-term correctness", fairness_term),
        ("relevance max-of-max", relevance_criterion),
        ("Flesch exactness", flesch),
        ("ROUGE correctness", rouge),
        ("end-to-end ablation", ablation),
        ("dataset statistics", dataset_statistics),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", 8 - failed, 8);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
