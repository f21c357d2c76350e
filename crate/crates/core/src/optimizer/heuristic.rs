//! Greedy construction followed by add/drop/swap local search.

use super::{evaluate_objective, verify, SelectionProblem, Solution, SolverConfig, TIE_EPSILON};
use crate::Result;

struct State<'p> {
    problem: &'p SelectionProblem,
    selected: Vec<bool>,
    /// Σ_{k selected} sim_jk for every j.
    sim_to_selected: Vec<f64>,
    males: u32,
    females: u32,
    length: u64,
}

impl<'p> State<'p> {
    fn new(problem: &'p SelectionProblem) -> Self {
        State {
            problem,
            selected: vec![false; problem.n()],
            sim_to_selected: vec![0.0; problem.n()],
            males: 0,
            females: 0,
            length: 0,
        }
    }

    fn fairness(&self, males: u32, females: u32) -> f64 {
        self.problem.fairness_weight() * self.problem.imbalance(males, females).abs()
    }

    /// Gender counts after adding `add` and removing `drop` items.
    fn counts_after(&self, add: &[usize], drop: &[usize]) -> (u32, u32) {
        let (mut m, mut f) = (self.males as i64, self.females as i64);
        for &i in add {
            if self.problem.is_female(i) { f += 1 } else { m += 1 }
        }
        for &i in drop {
            if self.problem.is_female(i) { f -= 1 } else { m -= 1 }
        }
        (m as u32, f as u32)
    }

    fn fairness_delta(&self, add: &[usize], drop: &[usize]) -> f64 {
        let (m, f) = self.counts_after(add, drop);
        self.fairness(m, f) - self.fairness(self.males, self.females)
    }

    fn fits(&self, extra: u64, freed: u64) -> bool {
        self.length + extra - freed <= self.problem.budget()
    }

    fn add_gain(&self, j: usize) -> f64 {
        let p = self.problem;
        p.score(j) - p.penalty_weight() * self.sim_to_selected[j] - self.fairness_delta(&[j], &[])
    }

    fn pair_gain(&self, i: usize, j: usize) -> f64 {
        let p = self.problem;
        p.score(i) + p.score(j)
            - p.penalty_weight() * (self.sim_to_selected[i] + self.sim_to_selected[j] + p.sim(i, j))
            - self.fairness_delta(&[i, j], &[])
    }

    fn drop_gain(&self, i: usize) -> f64 {
        let p = self.problem;
        -p.score(i) + p.penalty_weight() * self.sim_to_selected[i] - self.fairness_delta(&[], &[i])
    }

    fn swap_gain(&self, out: usize, inn: usize) -> f64 {
        let p = self.problem;
        -p.score(out) + p.score(inn)
            + p.penalty_weight() * (self.sim_to_selected[out] - (self.sim_to_selected[inn] - p.sim(out, inn)))
            - self.fairness_delta(&[inn], &[out])
    }

    fn set(&mut self, i: usize, on: bool) {
        let p = self.problem;
        debug_assert_ne!(self.selected[i], on);
        self.selected[i] = on;
        let sign = if on { 1.0 } else { -1.0 };
        for j in 0..p.n() {
            self.sim_to_selected[j] += sign * p.sim(i, j);
        }
        let len = u64::from(p.length(i));
        let count = if p.is_female(i) { &mut self.females } else { &mut self.males };
        if on {
            *count += 1;
            self.length += len;
        } else {
            *count -= 1;
            self.length -= len;
        }
    }

    fn len(&self, i: usize) -> u64 {
        u64::from(self.problem.length(i))
    }

    fn free(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.problem.n()).filter(|&j| !self.selected[j])
    }

    fn chosen(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.problem.n()).filter(|&j| self.selected[j])
    }
}

#[derive(Debug, Clone, Copy)]
enum Move {
    Add(usize),
    Pair(usize, usize),
    Drop(usize),
    Swap(usize, usize),
}

/// Greedy by marginal objective gain, then local search.
///
/// Each greedy step adds the fitting item with the largest gain (ties: larger
/// gain per word, then lower index). When no single item gains, the best
/// fitting pair is tried, since one sentence alone can cost more in
/// imbalance than it brings in score. Local search then applies the best
/// improving add, drop or swap until none improves. Always feasible; never
/// claims optimality.
pub fn solve_heuristic(problem: &SelectionProblem, _config: &SolverConfig) -> Result<Solution> {
    let n = problem.n();
    let mut state = State::new(problem);

    loop {
        let mut best: Option<(f64, f64, usize)> = None; // gain, gain per word, index
        for j in state.free().filter(|&j| state.fits(state.len(j), 0)) {
            let gain = state.add_gain(j);
            let ratio = gain / state.len(j) as f64;
            let better = match best {
                None => true,
                Some((g, r, _)) => gain > g + TIE_EPSILON || ((gain - g).abs() <= TIE_EPSILON && ratio > r + TIE_EPSILON),
            };
            if better {
                best = Some((gain, ratio, j));
            }
        }
        if let Some((gain, _, j)) = best.filter(|b| b.0 > TIE_EPSILON) {
            let _ = gain;
            state.set(j, true);
            continue;
        }
        let mut best_pair: Option<(f64, usize, usize)> = None;
        let free: Vec<usize> = state.free().collect();
        for (a, &i) in free.iter().enumerate() {
            for &j in &free[a + 1..] {
                if !state.fits(state.len(i) + state.len(j), 0) {
                    continue;
                }
                let gain = state.pair_gain(i, j);
                if best_pair.is_none_or(|(g, _, _)| gain > g + TIE_EPSILON) {
                    best_pair = Some((gain, i, j));
                }
            }
        }
        match best_pair {
            Some((gain, i, j)) if gain > TIE_EPSILON => {
                state.set(i, true);
                state.set(j, true);
            }
            _ => break,
        }
    }

    for _ in 0..(20 * n.max(1)) {
        let mut best: Option<(f64, Move)> = None;
        let mut consider = |gain: f64, mv: Move| {
            if gain > TIE_EPSILON && best.is_none_or(|(g, _)| gain > g + TIE_EPSILON) {
                best = Some((gain, mv));
            }
        };
        for j in state.free() {
            if state.fits(state.len(j), 0) {
                consider(state.add_gain(j), Move::Add(j));
            }
        }
        let chosen: Vec<usize> = state.chosen().collect();
        let free: Vec<usize> = state.free().collect();
        for &i in &chosen {
            consider(state.drop_gain(i), Move::Drop(i));
            for &j in &free {
                if state.fits(state.len(j), state.len(i)) {
                    consider(state.swap_gain(i, j), Move::Swap(i, j));
                }
            }
        }
        for (a, &i) in free.iter().enumerate() {
            for &j in &free[a + 1..] {
                if state.fits(state.len(i) + state.len(j), 0) {
                    consider(state.pair_gain(i, j), Move::Pair(i, j));
                }
            }
        }
        match best {
            None => break,
            Some((_, Move::Add(j))) => state.set(j, true),
            Some((_, Move::Pair(i, j))) => {
                state.set(i, true);
                state.set(j, true);
            }
            Some((_, Move::Drop(i))) => state.set(i, false),
            Some((_, Move::Swap(i, j))) => {
                state.set(i, false);
                state.set(j, true);
            }
        }
    }

    let solution = evaluate_objective(problem, &state.selected)?;
    verify(problem, &solution)?;
    Ok(solution)
}
