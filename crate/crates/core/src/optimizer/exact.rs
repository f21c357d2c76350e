//! Best-first branch and bound over `x_0, x_1, …` in index order.
//!
//! A node fixes the decisions for items `< next`; its chosen set `P` is
//! itself a feasible selection (all later items excluded). The upper bound of
//! a subtree is
//!
//! ```text
//! score(P) − λ·pen(P) + fractional_knapsack(adjusted scores, residual budget) − μ·c_min
//! ```
//!
//! where an item's adjusted score already subtracts its similarity to `P`,
//! pairs among later items are dropped (they only lower the objective) and
//! `c_min` is the smallest imbalance the remaining genders can still reach.
//!
//! Since every set in a subtree has `P` as its lexicographic prefix, a
//! subtree whose bound only ties the incumbent is explored only when `P`
//! itself sorts before the incumbent's index set.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use super::{evaluate_objective, prefer, solve_heuristic, verify, SelectionProblem, Solution, SolverConfig, TIE_EPSILON};
use crate::{Error, Result};

#[derive(Debug, Clone)]
struct Node {
    bound: f64,
    next: usize,
    chosen: Vec<usize>,
    score: f64,
    penalty: f64,
    males: u32,
    females: u32,
    length: u64,
    /// `score_j − λ·Σ_{k ∈ chosen} sim_jk`, meaningful for `j ≥ next`.
    adjusted: Vec<f64>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    // max-heap: highest bound, then deepest, then lexicographically smallest set
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound
            .total_cmp(&other.bound)
            .then(self.next.cmp(&other.next))
            .then_with(|| other.chosen.cmp(&self.chosen))
    }
}

struct Search<'p> {
    problem: &'p SelectionProblem,
    best_obj: f64,
    best: Vec<usize>,
}

impl Search<'_> {
    fn objective(&self, node: &Node) -> f64 {
        let p = self.problem;
        node.score
            - p.penalty_weight() * node.penalty
            - p.fairness_weight() * p.imbalance(node.males, node.females).abs()
    }

    fn bound(&self, node: &Node) -> f64 {
        let p = self.problem;
        let capacity = p.budget() - node.length;
        let mut items: Vec<usize> = (node.next..p.n())
            .filter(|&j| u64::from(p.length(j)) <= capacity)
            .collect();

        let fp = p.female_ratio();
        let e = p.imbalance(node.males, node.females);
        let females_left = items.iter().filter(|&&j| p.is_female(j)).count() as f64;
        let males_left = items.len() as f64 - females_left;
        let c_min = if e > 0.0 {
            (e - (1.0 - fp) * females_left).max(0.0)
        } else {
            (-e - fp * males_left).max(0.0)
        };

        items.retain(|&j| node.adjusted[j] > 0.0);
        items.sort_by(|&a, &b| {
            let ra = node.adjusted[a] / f64::from(p.length(a));
            let rb = node.adjusted[b] / f64::from(p.length(b));
            rb.total_cmp(&ra).then(a.cmp(&b))
        });
        let mut room = capacity as f64;
        let mut relaxed = 0.0;
        for j in items {
            let len = f64::from(p.length(j));
            if len <= room {
                relaxed += node.adjusted[j];
                room -= len;
            } else {
                relaxed += node.adjusted[j] * room / len;
                break;
            }
        }
        node.score - p.penalty_weight() * node.penalty + relaxed - p.fairness_weight() * c_min
    }

    fn prunable(&self, node: &Node) -> bool {
        node.bound < self.best_obj - TIE_EPSILON
            || (node.bound <= self.best_obj + TIE_EPSILON && node.chosen.as_slice() >= self.best.as_slice())
    }

    fn offer(&mut self, node: &Node) {
        let obj = self.objective(node);
        if prefer(obj, &node.chosen, self.best_obj, &self.best) {
            self.best_obj = obj;
            self.best = node.chosen.clone();
        }
    }

    fn include(&self, node: &Node, i: usize) -> Node {
        let p = self.problem;
        let mut child = node.clone();
        child.penalty += node.chosen.iter().map(|&k| p.sim(i, k)).sum::<f64>();
        child.score += p.score(i);
        child.length += u64::from(p.length(i));
        if p.is_female(i) {
            child.females += 1;
        } else {
            child.males += 1;
        }
        child.chosen.push(i);
        child.next = i + 1;
        let lambda = p.penalty_weight();
        for j in i + 1..p.n() {
            child.adjusted[j] -= lambda * p.sim(i, j);
        }
        child.bound = self.bound(&child);
        child
    }

    fn exclude(&self, mut node: Node) -> Node {
        node.next += 1;
        node.bound = self.bound(&node);
        node
    }
}

/// Exact maximization for instances with `n ≤ config.exact_limit`.
///
/// Among optimal selections the lexicographically smallest index set wins.
/// When the time or node limit is hit, the best selection found so far is
/// returned with `optimal = false`.
pub fn solve_exact(problem: &SelectionProblem, config: &SolverConfig) -> Result<Solution> {
    let n = problem.n();
    if n > config.exact_limit {
        return Err(Error::TooLarge {
            solver: "solve_exact (use solve_heuristic)",
            n,
            limit: config.exact_limit,
        });
    }
    let started = Instant::now();

    let mut search = Search {
        problem,
        best_obj: 0.0,
        best: Vec::new(),
    };
    let warm = solve_heuristic(problem, config)?;
    let warm_idx = warm.indices();
    if prefer(warm.objective, &warm_idx, search.best_obj, &search.best) {
        search.best_obj = warm.objective;
        search.best = warm_idx;
    }

    let mut root = Node {
        bound: 0.0,
        next: 0,
        chosen: Vec::new(),
        score: 0.0,
        penalty: 0.0,
        males: 0,
        females: 0,
        length: 0,
        adjusted: (0..n).map(|j| problem.score(j)).collect(),
    };
    root.bound = search.bound(&root);

    let mut heap = BinaryHeap::new();
    if !search.prunable(&root) {
        heap.push(root);
    }
    let mut expanded = 0usize;
    let mut complete = true;
    while let Some(node) = heap.pop() {
        expanded += 1;
        let out_of_time = expanded.is_multiple_of(256)
            && config.time_limit.is_some_and(|limit| started.elapsed() > limit);
        if expanded > config.max_nodes || out_of_time {
            complete = false;
            break;
        }
        if search.prunable(&node) || node.next == n {
            continue;
        }
        let i = node.next;
        if node.length + u64::from(problem.length(i)) <= problem.budget() {
            let child = search.include(&node, i);
            search.offer(&child);
            if !search.prunable(&child) {
                heap.push(child);
            }
        }
        let child = search.exclude(node);
        if !search.prunable(&child) {
            heap.push(child);
        }
    }
    if !complete {
        tracing::warn!(expanded, elapsed = ?started.elapsed(), "exact solver stopped early; returning incumbent");
    }

    let mut selected = vec![false; n];
    for &i in &search.best {
        selected[i] = true;
    }
    let mut solution = evaluate_objective(problem, &selected)?;
    solution.optimal = complete;
    verify(problem, &solution)?;
    Ok(solution)
}
