//! Belief propagation for weighted maximum coverage.
//!
//! Each edge `(i, a)` carries two cavity fields: `h[i->a]` from the X side and
//! `h_hat[a->i]` from the Y side. One sweep updates every `h` from the current
//! `h_hat`, then every `h_hat` from the new `h`:
//!
//! ```text
//! h[i->a]     = -mu c_i + sum_{b in N(i) \ a} h_hat[b->i]
//! h_hat[a->i] = -(1/beta) ln(1 - sigmoid(beta w_a) * prod_{j in N(a) \ i} 1 / (exp(beta h[j->a]) + 1))
//! ```
//!
//! The product is evaluated as `exp(-sum softplus(beta h))`, and the whole
//! bracket as `1 - exp(-t)` with `t = softplus(-beta w_a) + sum softplus(beta h)`
//! carried in the log domain. That keeps the update finite for `beta` in the
//! hundreds, where the direct form under- or overflows.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, CoverInstance, CoverSolution};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BpParams {
    /// Inverse temperature.
    pub beta: f64,
    /// Chemical potential: penalty per unit of selected cost.
    pub mu: f64,
    /// Number of synchronous sweeps.
    pub iterations: usize,
    /// `new = (1 - damping) * update + damping * old`.
    pub damping: f64,
    /// Threshold on the final sweep's largest message change used to flag convergence.
    pub convergence_tol: f64,
}

impl Default for BpParams {
    fn default() -> Self {
        BpParams {
            beta: 3.0,
            mu: 0.0,
            iterations: 150,
            damping: 0.0,
            convergence_tol: 1e-6,
        }
    }
}

impl BpParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParam(m));
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return bad(format!("beta must be positive and finite, got {}", self.beta));
        }
        if !self.mu.is_finite() {
            return bad(format!("mu must be finite, got {}", self.mu));
        }
        if self.iterations == 0 {
            return bad("iterations must be >= 1".into());
        }
        if !(0.0..1.0).contains(&self.damping) {
            return bad(format!("damping must lie in [0, 1), got {}", self.damping));
        }
        if self.convergence_tol.is_nan() || self.convergence_tol <= 0.0 {
            return bad(format!(
                "convergence_tol must be positive, got {}",
                self.convergence_tol
            ));
        }
        Ok(())
    }
}

/// Messages on every edge in both directions.
///
/// Edges are numbered in X-major order, matching [`BipartiteGraph::edges`].
#[derive(Debug, Clone, PartialEq)]
pub struct BeliefState {
    edges: Vec<(usize, usize)>,
    /// `x_offsets[i]..x_offsets[i + 1]` are the edge ids leaving X-node `i`.
    x_offsets: Vec<usize>,
    /// Edge ids incident to each Y-node, ascending in X id.
    y_edges: Vec<Vec<usize>>,
    h: Vec<f64>,
    h_hat: Vec<f64>,
    iteration_count: usize,
    last_max_delta: f64,
}

impl BeliefState {
    /// All-zero messages on the edges of `graph`.
    pub fn new(graph: &BipartiteGraph) -> Self {
        let edges: Vec<_> = graph.edges().collect();
        let mut x_offsets = Vec::with_capacity(graph.n_x() + 1);
        x_offsets.push(0);
        for x in 0..graph.n_x() {
            x_offsets.push(x_offsets[x] + graph.x_neighbors(x).len());
        }
        let mut y_edges = vec![Vec::new(); graph.n_y()];
        for (e, &(_, y)) in edges.iter().enumerate() {
            y_edges[y].push(e);
        }
        let m = edges.len();
        BeliefState {
            edges,
            x_offsets,
            y_edges,
            h: vec![0.0; m],
            h_hat: vec![0.0; m],
            iteration_count: 0,
            last_max_delta: 0.0,
        }
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `h[i->a]` per edge id.
    pub fn h(&self) -> &[f64] {
        &self.h
    }

    /// `h_hat[a->i]` per edge id.
    pub fn h_hat(&self) -> &[f64] {
        &self.h_hat
    }

    pub fn iteration_count(&self) -> usize {
        self.iteration_count
    }

    /// Largest absolute message change during the latest sweep.
    pub fn last_max_delta(&self) -> f64 {
        self.last_max_delta
    }

    fn check_matches(&self, graph: &BipartiteGraph) -> Result<()> {
        let same = self.x_offsets.len() == graph.n_x() + 1
            && self.y_edges.len() == graph.n_y()
            && self.edges.len() == graph.edge_count()
            && self.edges.iter().copied().eq(graph.edges());
        if same {
            Ok(())
        } else {
            Err(Error::InvalidParam(
                "belief state was built for a different graph".into(),
            ))
        }
    }

    /// One synchronous sweep in place.
    pub fn sweep(&mut self, graph: &BipartiteGraph, p: &BpParams) -> Result<()> {
        let BpParams {
            beta, mu, damping, ..
        } = *p;
        let keep = damping;
        let take = 1.0 - damping;
        let sweep_no = self.iteration_count + 1;
        let mut max_delta = 0.0f64;
        let mut scratch = Vec::new();

        // X -> Y, from the previous h_hat
        let costs = graph.x_weights();
        for x in 0..graph.n_x() {
            let range = self.x_offsets[x]..self.x_offsets[x + 1];
            exclusive_sums(&self.h_hat[range.clone()], &mut scratch, 0.0, |a, b| a + b);
            for (k, e) in range.enumerate() {
                let update = -mu * costs[x] + scratch[k];
                let new = take * update + keep * self.h[e];
                if !new.is_finite() {
                    return Err(self.non_finite("h", e, sweep_no));
                }
                max_delta = max_delta.max((new - self.h[e]).abs());
                self.h[e] = new;
            }
        }

        // Y -> X, from the new h
        let weights = graph.y_weights();
        let mut terms = Vec::new();
        for (y, ids) in self.y_edges.iter().enumerate() {
            terms.clear();
            terms.extend(ids.iter().map(|&e| log_softplus(beta * self.h[e])));
            exclusive_sums(&terms, &mut scratch, f64::NEG_INFINITY, log_add_exp);
            let base = log_softplus(-beta * weights[y]);
            for (k, &e) in ids.iter().enumerate() {
                let update = -ln_one_minus_exp_neg(log_add_exp(base, scratch[k])) / beta;
                let new = take * update + keep * self.h_hat[e];
                if !new.is_finite() {
                    return Err(self.non_finite("h_hat", e, sweep_no));
                }
                max_delta = max_delta.max((new - self.h_hat[e]).abs());
                self.h_hat[e] = new;
            }
        }

        self.iteration_count = sweep_no;
        self.last_max_delta = max_delta;
        Ok(())
    }

    fn non_finite(&self, what: &'static str, e: usize, sweep: usize) -> Error {
        let (x, y) = self.edges[e];
        Error::NonFinite { what, x, y, sweep }
    }
}

/// Functional form of [`BeliefState::sweep`].
pub fn bp_sweep(graph: &BipartiteGraph, p: &BpParams, s: &BeliefState) -> Result<BeliefState> {
    p.validate()?;
    s.check_matches(graph)?;
    let mut next = s.clone();
    next.sweep(graph, p)?;
    Ok(next)
}

/// Full-neighbourhood fields: `h_node[i]` for X-nodes, `eta_node[a]` for Y-nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalFields {
    pub h_node: Vec<f64>,
    pub eta_node: Vec<f64>,
}

impl LocalFields {
    /// Ranking key `h_i / c_i`; zero-cost nodes rank at `+inf`.
    pub fn ranking_keys(&self, graph: &BipartiteGraph) -> Vec<f64> {
        self.h_node
            .iter()
            .zip(graph.x_weights())
            .map(|(&h, &c)| if c == 0.0 { f64::INFINITY } else { h / c })
            .collect()
    }
}

pub fn bp_local_fields(graph: &BipartiteGraph, p: &BpParams, s: &BeliefState) -> Result<LocalFields> {
    s.check_matches(graph)?;
    let costs = graph.x_weights();
    let mut h_node = Vec::with_capacity(graph.n_x());
    for x in 0..graph.n_x() {
        let incoming: f64 = s.h_hat[s.x_offsets[x]..s.x_offsets[x + 1]].iter().sum();
        let h = -p.mu * costs[x] + incoming;
        if !h.is_finite() {
            return Err(Error::NonFiniteField { side: 'X', id: x });
        }
        h_node.push(h);
    }

    let weights = graph.y_weights();
    let mut eta_node = Vec::with_capacity(graph.n_y());
    for (y, ids) in s.y_edges.iter().enumerate() {
        let ln_t = ids
            .iter()
            .map(|&e| log_softplus(p.beta * s.h[e]))
            .fold(log_softplus(-p.beta * weights[y]), log_add_exp);
        let eta = -ln_one_minus_exp_neg(ln_t) / p.beta;
        if !eta.is_finite() {
            return Err(Error::NonFiniteField { side: 'Y', id: y });
        }
        eta_node.push(eta);
    }
    Ok(LocalFields { h_node, eta_node })
}

/// Selection probabilities `P(x_i = 1)` and `P(y_a = 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Marginals {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

pub fn marginals(fields: &LocalFields, beta: f64) -> Marginals {
    let prob = |v: &Vec<f64>| v.iter().map(|&f| sigmoid(beta * f)).collect();
    Marginals {
        x: prob(&fields.h_node),
        y: prob(&fields.eta_node),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BpDiagnostics {
    pub iterations: usize,
    pub last_max_delta: f64,
    pub converged: bool,
    /// Smallest `h_hat` message seen after any sweep; `None` on edgeless graphs.
    pub min_h_hat: Option<f64>,
    pub fields: LocalFields,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BpOutcome {
    pub solution: CoverSolution,
    pub diagnostics: BpDiagnostics,
}

/// Runs the configured number of sweeps from zero messages, computes the
/// local fields once, then fills the budget in descending `h_i / c_i` order
/// (ties to the lowest id).
pub fn bp_solve(inst: &CoverInstance, p: &BpParams) -> Result<BpOutcome> {
    bp_solve_observed(inst, p, |_| {})
}

/// [`bp_solve`] with a callback invoked after every sweep.
pub fn bp_solve_observed(
    inst: &CoverInstance,
    p: &BpParams,
    mut observer: impl FnMut(&BeliefState),
) -> Result<BpOutcome> {
    p.validate()?;
    let g = &inst.graph;
    let mut state = BeliefState::new(g);
    let mut min_h_hat: Option<f64> = None;
    for _ in 0..p.iterations {
        state.sweep(g, p)?;
        if let Some(m) = state.h_hat.iter().copied().reduce(f64::min) {
            min_h_hat = Some(min_h_hat.map_or(m, |old| old.min(m)));
        }
        observer(&state);
    }
    let fields = bp_local_fields(g, p, &state)?;

    let keys = fields.ranking_keys(g);
    let mut order: Vec<usize> = (0..g.n_x()).collect();
    order.sort_by(|&a, &b| keys[b].total_cmp(&keys[a]).then(a.cmp(&b)));
    let chosen = super::fill_budget(g, inst.budget, order);

    Ok(BpOutcome {
        solution: super::solution(g, chosen),
        diagnostics: BpDiagnostics {
            iterations: state.iteration_count,
            last_max_delta: state.last_max_delta,
            converged: state.last_max_delta < p.convergence_tol,
            min_h_hat,
            fields,
        },
    })
}

/// `out[k]` = fold of every element of `xs` except `xs[k]`, built from prefix
/// and suffix folds so no value is ever subtracted back out.
fn exclusive_sums(xs: &[f64], out: &mut Vec<f64>, identity: f64, op: impl Fn(f64, f64) -> f64) {
    let n = xs.len();
    out.clear();
    out.resize(n, identity);
    let mut acc = identity;
    for k in 0..n {
        out[k] = acc;
        acc = op(acc, xs[k]);
    }
    acc = identity;
    for k in (0..n).rev() {
        out[k] = op(out[k], acc);
        acc = op(acc, xs[k]);
    }
}

fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// `ln(softplus(x))`, accurate where `softplus(x)` itself would underflow.
fn log_softplus(x: f64) -> f64 {
    if x < -37.0 {
        // softplus(x) = e^x (1 - e^x / 2 + ...), correction below f64 resolution
        x
    } else {
        softplus(x).ln()
    }
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        hi
    } else {
        hi + (lo - hi).exp().ln_1p()
    }
}

/// `ln(1 - exp(-t))` given `ln t`.
fn ln_one_minus_exp_neg(ln_t: f64) -> f64 {
    let t = ln_t.exp();
    if t == 0.0 {
        ln_t
    } else if t < std::f64::consts::LN_2 {
        (-(-t).exp_m1()).ln()
    } else {
        (-(-t).exp()).ln_1p()
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}
