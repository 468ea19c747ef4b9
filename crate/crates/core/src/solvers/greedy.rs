use crate::graph::{CoverInstance, CoverSolution};

#[derive(Clone, Copy)]
enum Score {
    /// Uncovered neighbour weight divided by the node's cost.
    Ratio,
    /// Uncovered neighbour weight alone.
    Gain,
}

/// Cost-ratio greedy: repeatedly take the remaining X-node with the largest
/// uncovered-weight-to-cost ratio, keep it if the budget allows, and drop it
/// from the candidate pool either way. Zero-cost nodes score `+inf`.
pub fn g_greedy(inst: &CoverInstance) -> CoverSolution {
    run(inst, Score::Ratio)
}

/// Same loop as [`g_greedy`] but ranks by uncovered weight without dividing
/// by cost.
pub fn simple_greedy(inst: &CoverInstance) -> CoverSolution {
    run(inst, Score::Gain)
}

fn run(inst: &CoverInstance, score: Score) -> CoverSolution {
    let g = &inst.graph;
    let costs = g.x_weights();
    let weights = g.y_weights();
    let mut remaining = vec![true; g.n_x()];
    let mut covered = vec![false; g.n_y()];
    let mut spent = 0.0;
    let mut chosen = Vec::new();

    for _ in 0..g.n_x() {
        let mut best: Option<(usize, f64)> = None;
        for i in (0..g.n_x()).filter(|&i| remaining[i]) {
            let gain: f64 = g
                .x_neighbors(i)
                .iter()
                .filter(|&&a| !covered[a])
                .map(|&a| weights[a])
                .sum();
            let s = match score {
                Score::Gain => gain,
                Score::Ratio if costs[i] == 0.0 => f64::INFINITY,
                Score::Ratio => gain / costs[i],
            };
            // strict comparison keeps the lowest id on ties
            if best.is_none_or(|(_, b)| s > b) {
                best = Some((i, s));
            }
        }
        let (k, _) = best.expect("a remaining node exists");
        remaining[k] = false;
        if spent + costs[k] <= inst.budget {
            spent += costs[k];
            chosen.push(k);
            for &a in g.x_neighbors(k) {
                covered[a] = true;
            }
        }
    }
    super::solution(g, chosen)
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
    fn g_greedy_hand_trace() {
        // ratios 4/2 = 2 vs 3/2 = 1.5; node 1 then costs 4 > 2
        let s = g_greedy(&fixture(2.0));
        assert_eq!(s.selected, vec![0]);
        assert_eq!(s.cost, 2.0);
        assert_eq!(s.covered_weight, 4.0);
    }

    #[test]
    fn simple_greedy_hand_trace() {
        let s = simple_greedy(&fixture(2.0));
        assert_eq!(s.selected, vec![0]);
        assert_eq!(s.covered_weight, 4.0);
    }

    #[test]
    fn zero_budget_selects_nothing() {
        for s in [g_greedy(&fixture(0.0)), simple_greedy(&fixture(0.0))] {
            assert!(s.selected.is_empty());
            assert_eq!(s.covered_weight, 0.0);
        }
    }

    #[test]
    fn rejected_node_does_not_block_cheaper_later_ones() {
        // node 0 has the best ratio but is too expensive; nodes 1, 2 fit
        let g = BipartiteGraph::new(
            vec![10.0, 1.0, 1.0],
            vec![100.0, 1.0, 1.0],
            [(0, 0), (1, 1), (2, 2)],
        )
        .unwrap();
        let s = g_greedy(&CoverInstance::new(g, 2.0).unwrap());
        assert_eq!(s.selected, vec![1, 2]);
        assert_eq!(s.covered_weight, 2.0);
    }

    #[test]
    fn zero_cost_nodes_go_first() {
        let g = BipartiteGraph::new(vec![1.0, 0.0], vec![5.0, 1.0], [(0, 0), (1, 1)]).unwrap();
        let s = g_greedy(&CoverInstance::new(g, 1.0).unwrap());
        assert_eq!(s.selected, vec![0, 1]);
        assert_eq!(s.cost, 1.0);
    }

    #[test]
    fn ties_break_to_lowest_id() {
        let g = BipartiteGraph::new(vec![1.0; 3], vec![1.0; 3], [(0, 0), (1, 1), (2, 2)]).unwrap();
        let s = g_greedy(&CoverInstance::new(g, 1.0).unwrap());
        assert_eq!(s.selected, vec![0]);
    }
}
