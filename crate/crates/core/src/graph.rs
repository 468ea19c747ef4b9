//! Weighted bipartite graphs, coverage accounting, random generation and the
//! JSON graph file format.
//!
//! X-nodes carry a cost `c_i`, Y-nodes a weight `w_a`. Selecting a set of
//! X-nodes covers every Y-node adjacent to at least one of them.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sparse bipartite adjacency with per-node weights.
///
/// Node ids are dense and 0-based on each side. Both adjacency views are
/// kept sorted so every traversal is deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteGraph {
    n_x: usize,
    n_y: usize,
    x_weights: Vec<f64>,
    y_weights: Vec<f64>,
    adj_x: Vec<Vec<usize>>,
    adj_y: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    /// Builds a graph from an edge list, rejecting anything `validate` would
    /// flag (out-of-range ids, duplicate edges, negative or non-finite weights).
    pub fn new(
        x_weights: Vec<f64>,
        y_weights: Vec<f64>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let n_x = x_weights.len();
        let n_y = y_weights.len();
        let mut adj_x = vec![Vec::new(); n_x];
        let mut adj_y = vec![Vec::new(); n_y];
        let mut seen = HashSet::new();
        let mut problems = Vec::new();
        for (k, (x, y)) in edges.into_iter().enumerate() {
            if x >= n_x || y >= n_y {
                problems.push(format!(
                    "edge #{k} ({x}, {y}) out of range (n_x = {n_x}, n_y = {n_y})"
                ));
                continue;
            }
            if !seen.insert((x, y)) {
                problems.push(format!("edge #{k} ({x}, {y}) is a duplicate"));
                continue;
            }
            adj_x[x].push(y);
            adj_y[y].push(x);
        }
        for list in adj_x.iter_mut().chain(adj_y.iter_mut()) {
            list.sort_unstable();
        }
        let g = BipartiteGraph {
            n_x,
            n_y,
            x_weights,
            y_weights,
            adj_x,
            adj_y,
        };
        problems.extend(g.validate());
        if problems.is_empty() {
            Ok(g)
        } else {
            Err(Error::InvalidGraph(problems))
        }
    }

    /// Assembles a graph from raw parts without any checking. Useful for
    /// diagnostics; everything else should go through [`BipartiteGraph::new`].
    pub fn from_raw_parts(
        x_weights: Vec<f64>,
        y_weights: Vec<f64>,
        adj_x: Vec<Vec<usize>>,
        adj_y: Vec<Vec<usize>>,
    ) -> Self {
        BipartiteGraph {
            n_x: x_weights.len(),
            n_y: y_weights.len(),
            x_weights,
            y_weights,
            adj_x,
            adj_y,
        }
    }

    pub fn empty() -> Self {
        Self::from_raw_parts(Vec::new(), Vec::new(), Vec::new(), Vec::new())
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn n_y(&self) -> usize {
        self.n_y
    }

    /// Cost `c_i` of every X-node.
    pub fn x_weights(&self) -> &[f64] {
        &self.x_weights
    }

    /// Weight `w_a` of every Y-node.
    pub fn y_weights(&self) -> &[f64] {
        &self.y_weights
    }

    /// Sorted Y-neighbours of X-node `x`.
    pub fn x_neighbors(&self, x: usize) -> &[usize] {
        &self.adj_x[x]
    }

    /// Sorted X-neighbours of Y-node `y`.
    pub fn y_neighbors(&self, y: usize) -> &[usize] {
        &self.adj_y[y]
    }

    pub fn edge_count(&self) -> usize {
        self.adj_x.iter().map(Vec::len).sum()
    }

    /// All edges as `(x, y)` pairs in X-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj_x
            .iter()
            .enumerate()
            .flat_map(|(x, ys)| ys.iter().map(move |&y| (x, y)))
    }

    /// Every structural violation found; an empty list means the graph is valid.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.x_weights.len() != self.n_x || self.adj_x.len() != self.n_x {
            out.push(format!(
                "X side size mismatch: n_x = {}, {} weights, {} adjacency lists",
                self.n_x,
                self.x_weights.len(),
                self.adj_x.len()
            ));
        }
        if self.y_weights.len() != self.n_y || self.adj_y.len() != self.n_y {
            out.push(format!(
                "Y side size mismatch: n_y = {}, {} weights, {} adjacency lists",
                self.n_y,
                self.y_weights.len(),
                self.adj_y.len()
            ));
        }
        for (side, weights) in [('X', &self.x_weights), ('Y', &self.y_weights)] {
            for (i, &w) in weights.iter().enumerate() {
                if !w.is_finite() || w < 0.0 {
                    out.push(format!("{side}-node {i} has invalid weight {w}"));
                }
            }
        }
        let check_side = |out: &mut Vec<String>, side: char, lists: &[Vec<usize>], other_len: usize| {
            for (i, list) in lists.iter().enumerate() {
                for pair in list.windows(2) {
                    if pair[0] == pair[1] {
                        out.push(format!("{side}-node {i}: duplicate neighbour {}", pair[0]));
                    } else if pair[0] > pair[1] {
                        out.push(format!("{side}-node {i}: adjacency not sorted"));
                    }
                }
                for &j in list {
                    if j >= other_len {
                        out.push(format!("{side}-node {i}: neighbour {j} out of range"));
                    }
                }
            }
        };
        check_side(&mut out, 'X', &self.adj_x, self.adj_y.len());
        check_side(&mut out, 'Y', &self.adj_y, self.adj_x.len());

        for (x, ys) in self.adj_x.iter().enumerate() {
            for &y in ys {
                if y < self.adj_y.len() && self.adj_y[y].binary_search(&x).is_err() {
                    out.push(format!("asymmetric edge ({x}, {y}): missing from Y adjacency"));
                }
            }
        }
        for (y, xs) in self.adj_y.iter().enumerate() {
            for &x in xs {
                if x < self.adj_x.len() && self.adj_x[x].binary_search(&y).is_err() {
                    out.push(format!("asymmetric edge ({x}, {y}): missing from X adjacency"));
                }
            }
        }
        out
    }

    fn check_ids(&self, selected: &[usize]) -> Result<()> {
        match selected.iter().find(|&&i| i >= self.n_x) {
            Some(&id) => Err(Error::InvalidNode {
                side: 'X',
                id,
                len: self.n_x,
            }),
            None => Ok(()),
        }
    }

    /// Total weight of Y-nodes adjacent to at least one selected X-node.
    /// Each Y-node counts once; the sum runs in ascending Y id order.
    pub fn covered_weight(&self, selected: &[usize]) -> Result<f64> {
        self.check_ids(selected)?;
        let mut covered = vec![false; self.n_y];
        for &x in selected {
            for &y in &self.adj_x[x] {
                covered[y] = true;
            }
        }
        Ok(covered
            .iter()
            .zip(&self.y_weights)
            .filter(|(&c, _)| c)
            .map(|(_, &w)| w)
            .sum())
    }

    /// Sum of `c_i` over the selection.
    pub fn selection_cost(&self, selected: &[usize]) -> Result<f64> {
        self.check_ids(selected)?;
        Ok(selected.iter().map(|&x| self.x_weights[x]).sum())
    }

    /// Y-weight reachable from any X-node with at least one edge.
    pub fn coverable_weight(&self) -> f64 {
        self.adj_y
            .iter()
            .zip(&self.y_weights)
            .filter(|(xs, _)| !xs.is_empty())
            .map(|(_, &w)| w)
            .sum()
    }

    pub fn with_weights(&self, x_weights: Vec<f64>, y_weights: Vec<f64>) -> Result<Self> {
        if x_weights.len() != self.n_x || y_weights.len() != self.n_y {
            return Err(Error::InvalidParam(format!(
                "weight vectors of length {}/{} do not match graph of size {}/{}",
                x_weights.len(),
                y_weights.len(),
                self.n_x,
                self.n_y
            )));
        }
        BipartiteGraph::new(x_weights, y_weights, self.edges())
    }
}

/// A graph together with its budget `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverInstance {
    pub graph: BipartiteGraph,
    pub budget: f64,
}

impl CoverInstance {
    pub fn new(graph: BipartiteGraph, budget: f64) -> Result<Self> {
        if !budget.is_finite() || budget < 0.0 {
            return Err(Error::InvalidParam(format!(
                "budget must be finite and >= 0, got {budget}"
            )));
        }
        Ok(CoverInstance { graph, budget })
    }
}

/// A selected set of X-nodes with its cost and covered Y-weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverSolution {
    /// Selected X ids, ascending.
    pub selected: Vec<usize>,
    pub cost: f64,
    pub covered_weight: f64,
}

impl CoverSolution {
    pub fn from_selection(graph: &BipartiteGraph, mut selected: Vec<usize>) -> Result<Self> {
        selected.sort_unstable();
        selected.dedup();
        let cost = graph.selection_cost(&selected)?;
        let covered_weight = graph.covered_weight(&selected)?;
        Ok(CoverSolution {
            selected,
            cost,
            covered_weight,
        })
    }

    pub fn empty() -> Self {
        CoverSolution {
            selected: Vec::new(),
            cost: 0.0,
            covered_weight: 0.0,
        }
    }
}

/// Random `(deg_x, deg_y)`-biregular simple bipartite graph with zero weights.
///
/// Configuration model: `deg_x` stubs per X-node are matched against a random
/// permutation of `deg_y` stubs per Y-node. Duplicate edges are repaired with
/// double-edge swaps; after 100 failed swap attempts the matching is redrawn.
pub fn generate_biregular(
    n_x: usize,
    n_y: usize,
    deg_x: usize,
    deg_y: usize,
    seed: u64,
) -> Result<BipartiteGraph> {
    const MAX_FAILED_SWAPS: usize = 100;
    const MAX_RESAMPLES: usize = 1000;

    if n_x * deg_x != n_y * deg_y {
        return Err(Error::Handshake(format!(
            "n_x * deg_x = {} but n_y * deg_y = {}",
            n_x * deg_x,
            n_y * deg_y
        )));
    }
    if (n_x > 0 && deg_x > n_y) || (n_y > 0 && deg_y > n_x) {
        return Err(Error::Handshake(format!(
            "degrees ({deg_x}, {deg_y}) exceed opposite side sizes ({n_y}, {n_x})"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x_stubs: Vec<usize> = (0..n_x).flat_map(|x| std::iter::repeat_n(x, deg_x)).collect();
    let base_y: Vec<usize> = (0..n_y).flat_map(|y| std::iter::repeat_n(y, deg_y)).collect();
    let m = x_stubs.len();

    for _ in 0..MAX_RESAMPLES {
        let mut y_stubs = base_y.clone();
        y_stubs.shuffle(&mut rng);
        let mut counts: HashMap<(usize, usize), usize> = HashMap::with_capacity(m);
        for (&x, &y) in x_stubs.iter().zip(&y_stubs) {
            *counts.entry((x, y)).or_default() += 1;
        }

        let mut failures = 0;
        let mut repaired = true;
        loop {
            let dup = (0..m).find(|&p| counts[&(x_stubs[p], y_stubs[p])] > 1);
            let Some(p) = dup else { break };
            if failures >= MAX_FAILED_SWAPS {
                repaired = false;
                break;
            }
            let q = rng.gen_range(0..m);
            let (x1, y1) = (x_stubs[p], y_stubs[p]);
            let (x2, y2) = (x_stubs[q], y_stubs[q]);
            let ok =
                x1 != x2 && y1 != y2 && !counts.contains_key(&(x1, y2)) && !counts.contains_key(&(x2, y1));
            if !ok {
                failures += 1;
                continue;
            }
            for key in [(x1, y1), (x2, y2)] {
                let c = counts.get_mut(&key).expect("edge present");
                *c -= 1;
                if *c == 0 {
                    counts.remove(&key);
                }
            }
            counts.insert((x1, y2), 1);
            counts.insert((x2, y1), 1);
            y_stubs.swap(p, q);
        }
        if repaired {
            let zeros_x = vec![0.0; n_x];
            let zeros_y = vec![0.0; n_y];
            return BipartiteGraph::new(zeros_x, zeros_y, x_stubs.iter().copied().zip(y_stubs));
        }
    }
    Err(Error::GeneratorExhausted {
        retries: MAX_RESAMPLES,
    })
}

/// `n` integer values drawn uniformly from `lo..=hi`, stored as `f64`.
pub fn sample_integer_weights(n: usize, lo: i64, hi: i64, seed: u64) -> Result<Vec<f64>> {
    if lo > hi {
        return Err(Error::InvalidParam(format!("weight range lo={lo} > hi={hi}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n).map(|_| rng.gen_range(lo..=hi) as f64).collect())
}

/// On-disk layout of a graph.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    n_x: usize,
    n_y: usize,
    x_weights: Vec<f64>,
    y_weights: Vec<f64>,
    edges: Vec<[usize; 2]>,
}

impl BipartiteGraph {
    pub fn to_json(&self) -> Result<String> {
        let file = GraphFile {
            n_x: self.n_x,
            n_y: self.n_y,
            x_weights: self.x_weights.clone(),
            y_weights: self.y_weights.clone(),
            edges: self.edges().map(|(x, y)| [x, y]).collect(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    /// Parses the JSON graph format. `origin` only labels error messages.
    pub fn from_json(text: &str, origin: &Path) -> Result<Self> {
        let parse_err = |msg: String| Error::Parse {
            path: origin.to_path_buf(),
            msg,
        };
        let file: GraphFile = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
        if file.x_weights.len() != file.n_x {
            return Err(parse_err(format!(
                "field x_weights: {} entries but n_x = {}",
                file.x_weights.len(),
                file.n_x
            )));
        }
        if file.y_weights.len() != file.n_y {
            return Err(parse_err(format!(
                "field y_weights: {} entries but n_y = {}",
                file.y_weights.len(),
                file.n_y
            )));
        }
        let mut seen = HashSet::new();
        for (k, &[x, y]) in file.edges.iter().enumerate() {
            if x >= file.n_x {
                return Err(parse_err(format!("edges[{k}]: x id {x} >= n_x = {}", file.n_x)));
            }
            if y >= file.n_y {
                return Err(parse_err(format!("edges[{k}]: y id {y} >= n_y = {}", file.n_y)));
            }
            if !seen.insert((x, y)) {
                return Err(parse_err(format!("edges[{k}]: duplicate edge [{x}, {y}]")));
            }
        }
        BipartiteGraph::new(
            file.x_weights,
            file.y_weights,
            file.edges.into_iter().map(|[x, y]| (x, y)),
        )
        .map_err(|e| parse_err(e.to_string()))
    }
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<BipartiteGraph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    BipartiteGraph::from_json(&text, path)
}

pub fn store_graph(graph: &BipartiteGraph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, graph.to_json()?).map_err(|e| Error::io(path, e))
}
