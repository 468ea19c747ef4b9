//! Approximate solvers for budgeted maximum coverage.

mod bp;
mod greedy;

pub use bp::{
    bp_local_fields, bp_solve, bp_solve_observed, bp_sweep, marginals, BeliefState, BpDiagnostics, BpOutcome,
    BpParams, LocalFields, Marginals,
};
pub use greedy::{g_greedy, simple_greedy};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{BipartiteGraph, CoverInstance, CoverSolution};

/// A solver and its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "solver", rename_all = "kebab-case")]
pub enum Solver {
    /// Ranks by uncovered weight.
    Greedy,
    /// Ranks by uncovered weight per unit cost.
    GGreedy,
    Bp(BpParams),
}

impl Solver {
    pub fn name(&self) -> &'static str {
        match self {
            Solver::Greedy => "greedy",
            Solver::GGreedy => "g-greedy",
            Solver::Bp(_) => "bp",
        }
    }

    pub fn run(&self, inst: &CoverInstance) -> Result<SolveReport> {
        let (solution, params, diagnostics) = match self {
            Solver::Greedy => (simple_greedy(inst), None, None),
            Solver::GGreedy => (g_greedy(inst), None, None),
            Solver::Bp(p) => {
                let out = bp_solve(inst, p)?;
                (out.solution, Some(*p), Some(out.diagnostics))
            }
        };
        Ok(SolveReport {
            solver: self.name().to_string(),
            budget: inst.budget,
            solution,
            params,
            diagnostics,
        })
    }
}

/// JSON-serializable result of one solver run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub solver: String,
    pub budget: f64,
    #[serde(flatten)]
    pub solution: CoverSolution,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<BpParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<BpDiagnostics>,
}

/// Walks candidates in the given order, keeping each one that still fits the
/// budget. Every candidate is consumed whether or not it was kept.
pub(crate) fn fill_budget(
    graph: &BipartiteGraph,
    budget: f64,
    order: impl IntoIterator<Item = usize>,
) -> Vec<usize> {
    let costs = graph.x_weights();
    let mut spent = 0.0;
    let mut chosen = Vec::new();
    for k in order {
        if spent + costs[k] <= budget {
            spent += costs[k];
            chosen.push(k);
        }
    }
    chosen
}

pub(crate) fn solution(graph: &BipartiteGraph, chosen: Vec<usize>) -> CoverSolution {
    CoverSolution::from_selection(graph, chosen).expect("solver produced in-range ids")
}
