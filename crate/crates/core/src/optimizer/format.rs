//! Plain-text problem files, one keyword per line:
//!
//! ```text
//! n 3
//! budget 25
//! female_ratio 0.5
//! penalty_weight 1
//! fairness_weight 1
//! item 0.8 10 M
//! item 0.7 12 F
//! item 0.6 8 F
//! sim 0 1 0.4
//! ```
//!
//! `item` lines give score, length and gender (`F` or `M`) in index order.
//! `sim i j v` sets a symmetric pair; omitted pairs are 0. Blank lines and
//! `#` comments are ignored.

use std::fmt::Write as _;

use super::SelectionProblem;
use crate::{Error, Result};

/// Serializes `problem`; floats round-trip exactly.
pub fn write_problem(problem: &SelectionProblem) -> String {
    let mut out = String::new();
    let n = problem.n();
    let _ = writeln!(out, "n {n}");
    let _ = writeln!(out, "budget {}", problem.budget());
    let _ = writeln!(out, "female_ratio {}", problem.female_ratio());
    let _ = writeln!(out, "penalty_weight {}", problem.penalty_weight());
    let _ = writeln!(out, "fairness_weight {}", problem.fairness_weight());
    for i in 0..n {
        let g = if problem.is_female(i) { 'F' } else { 'M' };
        let _ = writeln!(out, "item {} {} {g}", problem.score(i), problem.length(i));
    }
    for i in 0..n {
        for j in i + 1..n {
            let s = problem.sim(i, j);
            if s != 0.0 {
                let _ = writeln!(out, "sim {i} {j} {s}");
            }
        }
    }
    out
}

fn field<T: std::str::FromStr>(value: Option<&str>, line: usize, what: &str) -> Result<T> {
    let raw = value.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    raw.parse()
        .map_err(|_| Error::parse(line, format!("invalid {what} {raw:?}")))
}

pub fn parse_problem(text: &str) -> Result<SelectionProblem> {
    let mut n: Option<usize> = None;
    let mut budget: Option<u64> = None;
    let mut female_ratio: Option<f64> = None;
    let mut lambda = 1.0;
    let mut mu = 1.0;
    let mut score = Vec::new();
    let mut length = Vec::new();
    let mut female = Vec::new();
    let mut triples = Vec::new();

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut parts = content.split_whitespace();
        let key = parts.next().unwrap_or_default();
        match key {
            "n" => n = Some(field(parts.next(), line, "n")?),
            "budget" => budget = Some(field(parts.next(), line, "budget")?),
            "female_ratio" => female_ratio = Some(field(parts.next(), line, "female_ratio")?),
            "penalty_weight" => lambda = field(parts.next(), line, "penalty_weight")?,
            "fairness_weight" => mu = field(parts.next(), line, "fairness_weight")?,
            "item" => {
                score.push(field::<f64>(parts.next(), line, "score")?);
                length.push(field::<u32>(parts.next(), line, "length")?);
                female.push(match parts.next() {
                    Some("F") | Some("f") => true,
                    Some("M") | Some("m") | Some("U") | Some("u") => false,
                    other => return Err(Error::parse(line, format!("invalid gender {other:?}"))),
                });
            }
            "sim" => {
                let i: usize = field(parts.next(), line, "sim row")?;
                let j: usize = field(parts.next(), line, "sim column")?;
                let v: f64 = field(parts.next(), line, "sim value")?;
                if i == j {
                    return Err(Error::parse(line, "similarity on the diagonal"));
                }
                triples.push((i, j, v));
            }
            other => return Err(Error::parse(line, format!("unknown keyword {other:?}"))),
        }
        if let Some(extra) = parts.next() {
            return Err(Error::parse(line, format!("unexpected trailing field {extra:?}")));
        }
    }

    let budget = budget.ok_or_else(|| Error::Invalid("problem file: missing budget".into()))?;
    let female_ratio =
        female_ratio.ok_or_else(|| Error::Invalid("problem file: missing female_ratio".into()))?;
    if let Some(n) = n {
        if n != score.len() {
            return Err(Error::Invalid(format!("problem file: n = {n} but {} items", score.len())));
        }
    }
    SelectionProblem::from_triples(score, length, female, &triples, budget, female_ratio)?
        .with_penalty_weight(lambda)?
        .with_fairness_weight(mu)
}
