//! Exact maximum coverage on small instances by branch and bound.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CoverInstance, CoverSolution};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleLimits {
    pub max_x_nodes: usize,
    pub time_budget: Duration,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_x_nodes: 25,
            time_budget: Duration::from_secs(60),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleOutcome {
    pub solution: CoverSolution,
    /// False when the time budget ran out and `solution` is only the best found.
    pub optimal: bool,
    pub nodes_explored: u64,
}

/// Maximum covered weight over all selections with cost within budget.
///
/// Depth-first over X ids in ascending order, including a node before
/// excluding it. A branch is cut when it cannot reach the incumbent: its
/// bound is the current coverage plus all uncovered Y-weight still reachable
/// from undecided nodes that individually fit the remaining budget. Among
/// equal-value optima the lexicographically smallest id list wins.
pub fn exact_solve(inst: &CoverInstance, lim: &OracleLimits) -> Result<OracleOutcome> {
    let g = &inst.graph;
    if g.n_x() > lim.max_x_nodes {
        return Err(Error::OracleCap {
            n_x: g.n_x(),
            cap: lim.max_x_nodes,
        });
    }
    let mut search = Search {
        inst,
        deadline: Instant::now() + lim.time_budget,
        timed_out: false,
        nodes: 0,
        cover_count: vec![0; g.n_y()],
        current: Vec::new(),
        current_value: 0.0,
        spent: 0.0,
        best: Vec::new(),
        best_value: 0.0,
    };
    search.descend(0);
    let solution = CoverSolution::from_selection(g, search.best)?;
    Ok(OracleOutcome {
        solution,
        optimal: !search.timed_out,
        nodes_explored: search.nodes,
    })
}

struct Search<'a> {
    inst: &'a CoverInstance,
    deadline: Instant,
    timed_out: bool,
    nodes: u64,
    cover_count: Vec<u32>,
    current: Vec<usize>,
    current_value: f64,
    spent: f64,
    best: Vec<usize>,
    best_value: f64,
}

impl Search<'_> {
    fn descend(&mut self, next: usize) {
        self.nodes += 1;
        if self.timed_out || (self.nodes.is_multiple_of(4096) && Instant::now() >= self.deadline) {
            self.timed_out = true;
            return;
        }
        let g = &self.inst.graph;
        if next == g.n_x() {
            self.offer();
            return;
        }
        if self.bound(next) < self.best_value {
            return;
        }

        let cost = g.x_weights()[next];
        if self.spent + cost <= self.inst.budget {
            let weights = g.y_weights();
            let mut gained = 0.0;
            for &a in g.x_neighbors(next) {
                if self.cover_count[a] == 0 {
                    gained += weights[a];
                }
                self.cover_count[a] += 1;
            }
            self.current.push(next);
            self.spent += cost;
            self.current_value += gained;

            self.descend(next + 1);

            self.current_value -= gained;
            self.spent -= cost;
            self.current.pop();
            for &a in g.x_neighbors(next) {
                self.cover_count[a] -= 1;
            }
        }
        self.descend(next + 1);
    }

    fn bound(&self, next: usize) -> f64 {
        let g = &self.inst.graph;
        let room = self.inst.budget - self.spent;
        let weights = g.y_weights();
        let mut reachable = vec![false; g.n_y()];
        let mut extra = 0.0;
        for i in next..g.n_x() {
            if g.x_weights()[i] > room {
                continue;
            }
            for &a in g.x_neighbors(i) {
                if self.cover_count[a] == 0 && !reachable[a] {
                    reachable[a] = true;
                    extra += weights[a];
                }
            }
        }
        // slack absorbs summation-order rounding so true ties are never cut
        self.current_value + extra + 1e-9 * (1.0 + self.current_value.abs() + extra)
    }

    fn offer(&mut self) {
        let value = self
            .inst
            .graph
            .covered_weight(&self.current)
            .expect("ids in range");
        if value > self.best_value || (value == self.best_value && self.current < self.best) {
            self.best_value = value;
            self.best.clone_from(&self.current);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::BipartiteGraph;

    fn fixture(budget: f64) -> CoverInstance {
        let g = BipartiteGraph::new(
            vec![2.0, 2.0],
            vec![3.0, 1.0, 2.0],
            [(0, 0), (0, 1), (1, 1), (1, 2)],
        )
        .unwrap();
        CoverInstance::new(g, budget).unwrap()
    }

    #[test]
    fn fixture_optimum() {
        let out = exact_solve(&fixture(2.0), &OracleLimits::default()).unwrap();
        assert!(out.optimal);
        assert_eq!(out.solution.selected, vec![0]);
        assert_eq!(out.solution.covered_weight, 4.0);
    }

    #[test]
    fn zero_budget() {
        let out = exact_solve(&fixture(0.0), &OracleLimits::default()).unwrap();
        assert!(out.solution.selected.is_empty());
        assert_eq!(out.solution.covered_weight, 0.0);
    }

    #[test]
    fn full_budget_covers_everything_reachable() {
        // Y-node 3 is isolated and must not count
        let g = BipartiteGraph::new(
            vec![1.0, 2.0, 3.0],
            vec![1.0, 2.0, 3.0, 100.0],
            [(0, 0), (1, 1), (2, 2), (2, 0)],
        )
        .unwrap();
        let inst = CoverInstance::new(g, 6.0).unwrap();
        let out = exact_solve(&inst, &OracleLimits::default()).unwrap();
        assert_eq!(out.solution.covered_weight, 6.0);
        assert_eq!(out.solution.covered_weight, inst.graph.coverable_weight());
    }

    #[test]
    fn ties_resolve_to_lexicographically_smallest() {
        // {0, 2} and {1} both cover weight 2 under budget 2
        let g = BipartiteGraph::new(
            vec![1.0, 2.0, 1.0],
            vec![1.0, 1.0],
            [(0, 0), (1, 0), (1, 1), (2, 1)],
        )
        .unwrap();
        let out = exact_solve(&CoverInstance::new(g, 2.0).unwrap(), &OracleLimits::default()).unwrap();
        assert_eq!(out.solution.selected, vec![0, 2]);
    }

    #[test]
    fn refuses_oversized_instance() {
        let g = crate::graph::generate_biregular(30, 30, 1, 1, 0).unwrap();
        let inst = CoverInstance::new(g, 3.0).unwrap();
        assert!(matches!(
            exact_solve(&inst, &OracleLimits::default()),
            Err(Error::OracleCap { n_x: 30, cap: 25 })
        ));
    }

    #[test]
    fn exhausted_time_budget_is_flagged() {
        let g = crate::graph::generate_biregular(24, 72, 9, 3, 3).unwrap();
        let w = crate::graph::sample_integer_weights(72, 1, 10, 1).unwrap();
        let g = g.with_weights(vec![1.0; 24], w).unwrap();
        let inst = CoverInstance::new(g, 12.0).unwrap();
        let lim = OracleLimits {
            time_budget: Duration::ZERO,
            ..OracleLimits::default()
        };
        let out = exact_solve(&inst, &lim).unwrap();
        assert!(!out.optimal);
        assert!(out.solution.cost <= 12.0);
    }
}
