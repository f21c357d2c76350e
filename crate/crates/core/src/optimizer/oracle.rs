use super::{evaluate_objective, prefer, SelectionProblem, Solution};
use crate::{Error, Result};

/// Largest instance the oracle enumerates.
pub const ORACLE_LIMIT: usize = 20;

/// Exhaustive search over all `2^n` subsets. Same tie rule as the solvers.
pub fn brute_force_oracle(problem: &SelectionProblem) -> Result<Solution> {
    let n = problem.n();
    if n > ORACLE_LIMIT {
        return Err(Error::TooLarge {
            solver: "brute_force_oracle",
            n,
            limit: ORACLE_LIMIT,
        });
    }
    let mut best = evaluate_objective(problem, &vec![false; n])?;
    let mut best_idx: Vec<usize> = Vec::new();
    for mask in 1u32..(1u32 << n) {
        let selected: Vec<bool> = (0..n).map(|i| mask & (1 << i) != 0).collect();
        let cand = match evaluate_objective(problem, &selected) {
            Ok(s) => s,
            Err(Error::Infeasible { .. }) => continue,
            Err(e) => return Err(e),
        };
        let idx = cand.indices();
        if prefer(cand.objective, &idx, best.objective, &best_idx) {
            best = cand;
            best_idx = idx;
        }
    }
    best.optimal = true;
    Ok(best)
}
