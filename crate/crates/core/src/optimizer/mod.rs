//! The 0-1 sentence-selection program and its solvers.
//!
//! Maximize
//!
//! ```text
//! Σ_i score_i·x_i − λ·Σ_{i<j} sim_ij·y_ij − μ·C
//! C = | fp·Σ_i m_i·x_i − (1 − fp)·Σ_i f_i·x_i |
//! ```
//!
//! subject to `Σ_i len_i·x_i ≤ L`, `y_ij ≤ (x_i + x_j)/2` and
//! `y_ij ≥ x_i + x_j − 1`, which pin `y_ij = x_i ∧ x_j`. `λ` is the
//! redundancy weight and `μ` the fairness weight (both 1 by default).
//!
//! The pair sum runs over unordered pairs; summing over ordered pairs is the
//! same program with `λ' = 2λ`.
//!
//! [`solve_exact`] is a best-first branch and bound, [`solve_heuristic`] a
//! greedy with local search for pools too large for it, and
//! [`brute_force_oracle`] the enumeration both are tested against.

mod exact;
mod format;
mod heuristic;
mod model;
mod oracle;

use std::time::Duration;

use serde::Serialize;

use crate::{Error, Result};

pub use exact::solve_exact;
pub use format::{parse_problem, write_problem};
pub use heuristic::solve_heuristic;
pub use model::{forced_pair_indicator, Assignment, LinearModel, Violation};
pub use oracle::{brute_force_oracle, ORACLE_LIMIT};

/// Objectives closer than this are ties, broken by the lexicographically
/// smallest selected index set.
pub const TIE_EPSILON: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionProblem {
    score: Vec<f64>,
    length: Vec<u32>,
    is_female: Vec<bool>,
    /// Row-major n×n, symmetric, zero diagonal.
    sim: Vec<f64>,
    budget: u64,
    female_ratio: f64,
    penalty_weight: f64,
    fairness_weight: f64,
}

impl SelectionProblem {
    /// Validates and builds a problem. `sim` must be an n×n symmetric matrix
    /// with zero diagonal and entries in [0, 1].
    pub fn new(
        score: Vec<f64>,
        length: Vec<u32>,
        is_female: Vec<bool>,
        sim: Vec<Vec<f64>>,
        budget: u64,
        female_ratio: f64,
    ) -> Result<Self> {
        let n = score.len();
        if length.len() != n || is_female.len() != n || sim.len() != n {
            return Err(Error::Invalid(format!(
                "sequence lengths differ: score {n}, length {}, gender {}, sim {}",
                length.len(),
                is_female.len(),
                sim.len()
            )));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in sim.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Invalid(format!("sim row {i} has {} entries, expected {n}", row.len())));
            }
            flat.extend_from_slice(row);
        }
        let problem = SelectionProblem {
            score,
            length,
            is_female,
            sim: flat,
            budget,
            female_ratio,
            penalty_weight: 1.0,
            fairness_weight: 1.0,
        };
        problem.validate()?;
        Ok(problem)
    }

    /// Builds a problem from sparse similarity triples `(i, j, sim)`; missing
    /// pairs are 0 and each triple sets both `(i, j)` and `(j, i)`.
    pub fn from_triples(
        score: Vec<f64>,
        length: Vec<u32>,
        is_female: Vec<bool>,
        triples: &[(usize, usize, f64)],
        budget: u64,
        female_ratio: f64,
    ) -> Result<Self> {
        let n = score.len();
        let mut sim = vec![vec![0.0; n]; n];
        for &(i, j, s) in triples {
            if i >= n || j >= n {
                return Err(Error::Invalid(format!("similarity index ({i}, {j}) out of range")));
            }
            sim[i][j] = s;
            sim[j][i] = s;
        }
        SelectionProblem::new(score, length, is_female, sim, budget, female_ratio)
    }

    pub fn with_penalty_weight(mut self, lambda: f64) -> Result<Self> {
        self.penalty_weight = lambda;
        self.validate()?;
        Ok(self)
    }

    pub fn with_fairness_weight(mut self, mu: f64) -> Result<Self> {
        self.fairness_weight = mu;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let n = self.n();
        let bad = |m: String| Err(Error::Invalid(m));
        if let Some(i) = self.score.iter().position(|s| !(0.0..=1.0).contains(s)) {
            return bad(format!("score[{i}] = {} outside [0, 1]", self.score[i]));
        }
        if let Some(i) = self.length.iter().position(|&l| l == 0) {
            return bad(format!("length[{i}] must be positive"));
        }
        for i in 0..n {
            if self.sim(i, i) != 0.0 {
                return bad(format!("sim[{i}][{i}] must be 0"));
            }
            for j in 0..n {
                let s = self.sim(i, j);
                if !(0.0..=1.0).contains(&s) {
                    return bad(format!("sim[{i}][{j}] = {s} outside [0, 1]"));
                }
                if s != self.sim(j, i) {
                    return bad(format!("sim is not symmetric at ({i}, {j})"));
                }
            }
        }
        if !(0.0..=1.0).contains(&self.female_ratio) {
            return bad(format!("female ratio {} outside [0, 1]", self.female_ratio));
        }
        if !(self.penalty_weight >= 0.0 && self.penalty_weight.is_finite()) {
            return bad(format!("penalty weight {} must be a finite value ≥ 0", self.penalty_weight));
        }
        if !(self.fairness_weight >= 0.0 && self.fairness_weight.is_finite()) {
            return bad(format!("fairness weight {} must be a finite value ≥ 0", self.fairness_weight));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.score.len()
    }

    pub fn score(&self, i: usize) -> f64 {
        self.score[i]
    }

    pub fn length(&self, i: usize) -> u32 {
        self.length[i]
    }

    pub fn is_female(&self, i: usize) -> bool {
        self.is_female[i]
    }

    pub fn sim(&self, i: usize, j: usize) -> f64 {
        self.sim[i * self.n() + j]
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn female_ratio(&self) -> f64 {
        self.female_ratio
    }

    pub fn penalty_weight(&self) -> f64 {
        self.penalty_weight
    }

    pub fn fairness_weight(&self) -> f64 {
        self.fairness_weight
    }

    /// Signed imbalance `fp·males − (1 − fp)·females`; the fairness term is
    /// its absolute value.
    pub fn imbalance(&self, males: u32, females: u32) -> f64 {
        self.female_ratio * f64::from(males) - (1.0 - self.female_ratio) * f64::from(females)
    }

    /// Copy with every gender flag flipped.
    pub fn with_genders_swapped(&self) -> Self {
        let mut p = self.clone();
        p.is_female.iter_mut().for_each(|f| *f = !*f);
        p
    }

    /// Copy with a different word budget.
    pub fn with_budget(&self, budget: u64) -> Self {
        let mut p = self.clone();
        p.budget = budget;
        p
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Solution {
    pub selected: Vec<bool>,
    pub objective: f64,
    pub score_sum: f64,
    /// Σ sim_ij over selected unordered pairs, before weighting.
    pub penalty_sum: f64,
    pub fairness_term: f64,
    pub total_length: u64,
    pub optimal: bool,
}

impl Solution {
    pub fn indices(&self) -> Vec<usize> {
        selected_indices(&self.selected)
    }
}

pub(crate) fn selected_indices(selected: &[bool]) -> Vec<usize> {
    selected
        .iter()
        .enumerate()
        .filter_map(|(i, &x)| x.then_some(i))
        .collect()
}

/// Evaluates the objective of a selection from scratch.
pub fn evaluate_objective(problem: &SelectionProblem, selected: &[bool]) -> Result<Solution> {
    let n = problem.n();
    if selected.len() != n {
        return Err(Error::Invalid(format!(
            "selection has {} entries, problem has {n}",
            selected.len()
        )));
    }
    let idx = selected_indices(selected);
    let total_length: u64 = idx.iter().map(|&i| u64::from(problem.length(i))).sum();
    if total_length > problem.budget() {
        return Err(Error::Infeasible {
            length: total_length,
            budget: problem.budget(),
        });
    }
    let score_sum: f64 = idx.iter().map(|&i| problem.score(i)).sum();
    let mut penalty_sum = 0.0;
    for (a, &i) in idx.iter().enumerate() {
        for &j in &idx[a + 1..] {
            penalty_sum += problem.sim(i, j);
        }
    }
    let females = idx.iter().filter(|&&i| problem.is_female(i)).count() as u32;
    let males = idx.len() as u32 - females;
    let fairness_term = problem.imbalance(males, females).abs();
    Ok(Solution {
        selected: selected.to_vec(),
        objective: score_sum - problem.penalty_weight() * penalty_sum - problem.fairness_weight() * fairness_term,
        score_sum,
        penalty_sum,
        fairness_term,
        total_length,
        optimal: false,
    })
}

/// `true` if a candidate `(objective, sorted indices)` beats the incumbent:
/// a strictly larger objective, or a tie with a lexicographically smaller
/// index set.
pub(crate) fn prefer(cand_obj: f64, cand: &[usize], best_obj: f64, best: &[usize]) -> bool {
    if cand_obj > best_obj + TIE_EPSILON {
        return true;
    }
    (cand_obj - best_obj).abs() <= TIE_EPSILON && cand < best
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverConfig {
    /// Largest instance `solve_exact` accepts.
    pub exact_limit: usize,
    /// Wall-clock limit for `solve_exact`; the incumbent is returned with
    /// `optimal = false` when it runs out.
    pub time_limit: Option<Duration>,
    /// Node limit for `solve_exact`, same fallback as `time_limit`.
    pub max_nodes: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            exact_limit: 40,
            time_limit: Some(Duration::from_secs(10)),
            max_nodes: 2_000_000,
        }
    }
}

/// Checks a solver result against the linearized model: budget, pair
/// indicators and the fairness auxiliary all have to hold.
pub(crate) fn verify(problem: &SelectionProblem, solution: &Solution) -> Result<()> {
    let model = LinearModel::new(problem);
    let assignment = model.assignment(&solution.selected)?;
    model
        .check(&assignment)
        .map_err(|v| Error::Invalid(format!("solver produced an infeasible selection: {v}")))?;
    let linear = model.objective(&assignment);
    if (linear - solution.objective).abs() > 1e-9 {
        return Err(Error::Invalid(format!(
            "objective mismatch: linearized {linear}, evaluated {}",
            solution.objective
        )));
    }
    Ok(())
}
