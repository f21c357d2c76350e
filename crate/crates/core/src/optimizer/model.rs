//! Explicit linearized form of the selection program.
//!
//! Variables are `x_i` (selection), `y_ij` for `i < j` (pair indicator) and a
//! continuous `c` standing in for the absolute value of the gender
//! imbalance `e`:
//!
//! ```text
//! max  Σ score_i·x_i − λ·Σ sim_ij·y_ij − μ·c
//! s.t. Σ len_i·x_i ≤ L
//!      y_ij ≤ (x_i + x_j) / 2
//!      y_ij ≥ x_i + x_j − 1
//!      c ≥ e,  c ≥ −e
//! ```
//!
//! Solvers never build this model; it is used to certify their output.

use std::fmt;

use super::{selected_indices, SelectionProblem};
use crate::{Error, Result};

const FEAS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pub x: Vec<bool>,
    /// `y[(i, j)]` for `i < j`, row-major over the strict upper triangle.
    pub y: Vec<bool>,
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Budget { length: u64, budget: u64 },
    PairUpper { i: usize, j: usize },
    PairLower { i: usize, j: usize },
    FairnessBelowImbalance { c: f64, e: f64 },
    Shape,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Budget { length, budget } => write!(f, "length {length} exceeds budget {budget}"),
            Violation::PairUpper { i, j } => write!(f, "y[{i},{j}] > (x_i + x_j)/2"),
            Violation::PairLower { i, j } => write!(f, "y[{i},{j}] < x_i + x_j − 1"),
            Violation::FairnessBelowImbalance { c, e } => write!(f, "c = {c} below |e| bound for e = {e}"),
            Violation::Shape => f.write_str("assignment shape does not match the problem"),
        }
    }
}

/// The unique `y ∈ {0, 1}` allowed by both pair constraints for given
/// `x_i, x_j`. Enumerates the two candidates rather than computing `x_i ∧ x_j`.
pub fn forced_pair_indicator(xi: bool, xj: bool) -> bool {
    let (a, b) = (f64::from(u8::from(xi)), f64::from(u8::from(xj)));
    let allowed: Vec<bool> = [false, true]
        .into_iter()
        .filter(|&y| {
            let y = f64::from(u8::from(y));
            y <= (a + b) / 2.0 && y >= a + b - 1.0
        })
        .collect();
    assert_eq!(allowed.len(), 1, "pair constraints must pin y");
    allowed[0]
}

pub struct LinearModel<'p> {
    problem: &'p SelectionProblem,
}

impl<'p> LinearModel<'p> {
    pub fn new(problem: &'p SelectionProblem) -> Self {
        LinearModel { problem }
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        let n = self.problem.n();
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
    }

    fn imbalance(&self, x: &[bool]) -> f64 {
        let idx = selected_indices(x);
        let females = idx.iter().filter(|&&i| self.problem.is_female(i)).count() as u32;
        self.problem.imbalance(idx.len() as u32 - females, females)
    }

    /// Completes `x` with the pair indicators the constraints force and the
    /// optimal auxiliary `c = max(e, −e)`.
    pub fn assignment(&self, x: &[bool]) -> Result<Assignment> {
        if x.len() != self.problem.n() {
            return Err(Error::Invalid("selection length does not match the problem".into()));
        }
        let y = self.pairs().map(|(i, j)| forced_pair_indicator(x[i], x[j])).collect();
        let e = self.imbalance(x);
        Ok(Assignment {
            x: x.to_vec(),
            y,
            c: e.max(-e),
        })
    }

    pub fn check(&self, a: &Assignment) -> std::result::Result<(), Violation> {
        let n = self.problem.n();
        if a.x.len() != n || a.y.len() != n * n.saturating_sub(1) / 2 {
            return Err(Violation::Shape);
        }
        let length: u64 = selected_indices(&a.x)
            .iter()
            .map(|&i| u64::from(self.problem.length(i)))
            .sum();
        if length > self.problem.budget() {
            return Err(Violation::Budget {
                length,
                budget: self.problem.budget(),
            });
        }
        for ((i, j), &y) in self.pairs().zip(&a.y) {
            let (xi, xj, y) = (u8::from(a.x[i]), u8::from(a.x[j]), u8::from(y));
            if 2 * y > xi + xj {
                return Err(Violation::PairUpper { i, j });
            }
            if y + 1 < xi + xj {
                return Err(Violation::PairLower { i, j });
            }
        }
        let e = self.imbalance(&a.x);
        if a.c < e - FEAS_TOL || a.c < -e - FEAS_TOL {
            return Err(Violation::FairnessBelowImbalance { c: a.c, e });
        }
        Ok(())
    }

    pub fn objective(&self, a: &Assignment) -> f64 {
        let p = self.problem;
        let scores: f64 = selected_indices(&a.x).iter().map(|&i| p.score(i)).sum();
        let pairs: f64 = self
            .pairs()
            .zip(&a.y)
            .filter(|(_, &y)| y)
            .map(|((i, j), _)| p.sim(i, j))
            .sum();
        scores - p.penalty_weight() * pairs - p.fairness_weight() * a.c
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizer::{evaluate_objective, testing::random_problem};
    use proptest::prelude::*;

    #[test]
    fn pair_indicator_is_conjunction() {
        for xi in [false, true] {
            for xj in [false, true] {
                assert_eq!(forced_pair_indicator(xi, xj), xi && xj);
            }
        }
    }

    #[test]
    fn detects_violations() {
        let p = random_problem(1, 4, 0.5).with_budget(1000);
        let model = LinearModel::new(&p);
        let mut a = model.assignment(&[true, true, false, true]).unwrap();
        assert!(model.check(&a).is_ok());
        a.y[0] = false; // pair (0, 1) both selected
        assert_eq!(model.check(&a), Err(Violation::PairLower { i: 0, j: 1 }));
        a.y[0] = true;
        a.y[1] = true; // pair (0, 2), x_2 = 0
        assert_eq!(model.check(&a), Err(Violation::PairUpper { i: 0, j: 2 }));
        a.y[1] = false;
        a.c = -1.0;
        assert!(matches!(model.check(&a), Err(Violation::FairnessBelowImbalance { .. })));
        let tight = p.with_budget(0);
        let model = LinearModel::new(&tight);
        let a = model.assignment(&[true, false, false, false]).unwrap();
        assert!(matches!(model.check(&a), Err(Violation::Budget { .. })));
    }

    proptest! {
        #[test]
        fn linearized_objective_matches_direct(seed in any::<u64>(), mask in any::<u16>(), fp in 0.0..=1.0f64) {
            let p = random_problem(seed, 9, fp).with_budget(10_000);
            let x: Vec<bool> = (0..9).map(|i| mask & (1 << i) != 0).collect();
            let model = LinearModel::new(&p);
            let a = model.assignment(&x).unwrap();
            prop_assert!(model.check(&a).is_ok());
            let direct = evaluate_objective(&p, &x).unwrap();
            prop_assert!((model.objective(&a) - direct.objective).abs() < 1e-9);

            // ordered-pair reading: each unordered pair counted twice
            let mut ordered = 0.0;
            for i in 0..9 { for j in 0..9 { if i != j && x[i] && x[j] { ordered += p.sim(i, j); } } }
            prop_assert!((ordered - 2.0 * direct.penalty_sum).abs() < 1e-9);

            let e = p.imbalance(
                x.iter().zip(0..).filter(|(s, i)| **s && !p.is_female(*i)).count() as u32,
                x.iter().zip(0..).filter(|(s, i)| **s && p.is_female(*i)).count() as u32,
            );
            prop_assert_eq!(a.c, e.max(-e));
            prop_assert!((a.c - direct.fairness_term).abs() < 1e-12);
        }
    }
}
