//! Parameter sweeps over the chemical potential `mu`, comparing the BP solver
//! with g-greedy on random biregular graphs or on a document corpus.
//!
//! Instances (or clusters) run in parallel on the rayon pool; results are
//! collected in index order so the aggregated rows do not depend on the
//! thread count.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{generate_biregular, sample_integer_weights, CoverInstance};
use crate::rouge::{corpus_rouge, rouge1_multi, RougeMode};
use crate::solvers::{bp_solve, g_greedy, BpDiagnostics, BpParams, Solver};
use crate::text::{
    build_cover_graph, compute_tfidf, load_corpus, summary_from, Cluster, PreprocessConfig, Tokenizer,
};

/// Column header of the sweep CSV.
pub const CSV_HEADER: &str =
    "mu,bp_weight_mean,bp_weight_se,greedy_weight_mean,greedy_weight_se,bp_rouge1,greedy_rouge1,n";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomGraphSpec {
    pub instances: usize,
    pub n_x: usize,
    pub n_y: usize,
    pub deg_x: usize,
    pub deg_y: usize,
    /// Integer cost and weight range, inclusive.
    pub weight_lo: i64,
    pub weight_hi: i64,
}

impl Default for RandomGraphSpec {
    fn default() -> Self {
        RandomGraphSpec {
            instances: 1000,
            n_x: 100,
            n_y: 300,
            deg_x: 9,
            deg_y: 3,
            weight_lo: 1,
            weight_hi: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub corpus: PathBuf,
    /// Extra corpora that only contribute document frequencies.
    #[serde(default)]
    pub background: Vec<PathBuf>,
    #[serde(default)]
    pub preprocess: PreprocessConfig,
    #[serde(default)]
    pub rouge_mode: RougeMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum SweepMode {
    RandomGraph(RandomGraphSpec),
    Corpus(CorpusSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    #[serde(flatten)]
    pub mode: SweepMode,
    /// Defaults to [`default_mu_grid`] for the mode when omitted.
    #[serde(default)]
    pub mu_grid: Vec<f64>,
    pub beta: f64,
    pub budget: f64,
    #[serde(default = "default_iterations")]
    pub iterations: usize,
    #[serde(default)]
    pub damping: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_iterations() -> usize {
    150
}

/// `lo, lo + step, ...` up to and including `hi` (within rounding).
pub fn linear_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=n).map(|k| lo + k as f64 * step).collect()
}

/// `n` points spaced evenly in log scale from `lo` to `hi`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Linear 0..=10 in steps of 0.5 for random graphs (integer weights);
/// log-spaced 1e-3..=0.3 for corpora, whose TF-IDF weights are around 1e-2.
pub fn default_mu_grid(mode: &SweepMode) -> Vec<f64> {
    match mode {
        SweepMode::RandomGraph(_) => linear_grid(0.0, 10.0, 0.5),
        SweepMode::Corpus(_) => log_grid(1e-3, 0.3, 25),
    }
}

impl SweepConfig {
    /// The random-graph setup: (9,3)-biregular, 100 x 300 nodes, costs and
    /// weights uniform on 1..=10, K = 100, beta = 3, 150 sweeps.
    pub fn random_graph_default() -> Self {
        let mode = SweepMode::RandomGraph(RandomGraphSpec::default());
        SweepConfig {
            mu_grid: default_mu_grid(&mode),
            mode,
            beta: 3.0,
            budget: 100.0,
            iterations: 150,
            damping: 0.0,
            seed: 0,
        }
    }

    pub fn mu_values(&self) -> Vec<f64> {
        if self.mu_grid.is_empty() {
            default_mu_grid(&self.mode)
        } else {
            self.mu_grid.clone()
        }
    }

    pub fn bp_params(&self, mu: f64) -> BpParams {
        BpParams {
            beta: self.beta,
            mu,
            iterations: self.iterations,
            damping: self.damping,
            ..BpParams::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.mu_values().iter().any(|m| !m.is_finite()) {
            return Err(Error::InvalidParam("mu grid contains non-finite values".into()));
        }
        if let SweepMode::RandomGraph(spec) = &self.mode {
            if spec.instances == 0 {
                return Err(Error::InvalidParam("instances must be >= 1".into()));
            }
        }
        CoverInstance::new(crate::graph::BipartiteGraph::empty(), self.budget)?;
        self.bp_params(0.0).validate()
    }
}

/// Outcome of one solver run inside a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub covered_weight: f64,
    pub cost: f64,
    pub rouge1: Option<f64>,
    pub last_max_delta: Option<f64>,
    pub min_h_hat: Option<f64>,
    /// Selected sentences (corpus mode only).
    pub summary: Vec<String>,
}

/// Everything computed for one instance or cluster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub label: String,
    /// Seed that regenerates the instance (random mode).
    pub seed: Option<u64>,
    pub greedy: RunResult,
    /// One entry per mu, in grid order.
    pub bp: Vec<RunResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub mu: f64,
    pub bp_weight_mean: f64,
    pub bp_weight_se: Option<f64>,
    pub greedy_weight_mean: f64,
    pub greedy_weight_se: Option<f64>,
    pub bp_rouge1: Option<f64>,
    pub greedy_rouge1: Option<f64>,
    pub n: usize,
}

/// Seeds for the graph and both weight vectors of instance `index`, drawn
/// from stream `index` of a ChaCha generator keyed by the master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceSeeds {
    pub instance: u64,
    pub graph: u64,
    pub x_weights: u64,
    pub y_weights: u64,
}

impl InstanceSeeds {
    pub fn derive(master: u64, index: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master);
        rng.set_stream(index as u64);
        Self::from_instance_seed(rng.next_u64())
    }

    /// Replays an instance from its logged seed.
    pub fn from_instance_seed(instance: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(instance);
        InstanceSeeds {
            instance,
            graph: rng.next_u64(),
            x_weights: rng.next_u64(),
            y_weights: rng.next_u64(),
        }
    }
}

/// Builds the random instance for the given seeds.
pub fn random_instance(spec: &RandomGraphSpec, budget: f64, seeds: InstanceSeeds) -> Result<CoverInstance> {
    let g = generate_biregular(spec.n_x, spec.n_y, spec.deg_x, spec.deg_y, seeds.graph)?;
    let c = sample_integer_weights(spec.n_x, spec.weight_lo, spec.weight_hi, seeds.x_weights)?;
    let w = sample_integer_weights(spec.n_y, spec.weight_lo, spec.weight_hi, seeds.y_weights)?;
    CoverInstance::new(g.with_weights(c, w)?, budget)
}

fn run_result(solution: &crate::graph::CoverSolution, diag: Option<&BpDiagnostics>) -> RunResult {
    RunResult {
        covered_weight: solution.covered_weight,
        cost: solution.cost,
        rouge1: None,
        last_max_delta: diag.map(|d| d.last_max_delta),
        min_h_hat: diag.and_then(|d| d.min_h_hat),
        summary: Vec::new(),
    }
}

/// Per-instance results of a random-graph sweep.
pub fn random_graph_records(cfg: &SweepConfig) -> Result<Vec<SweepRecord>> {
    cfg.validate()?;
    let SweepMode::RandomGraph(spec) = &cfg.mode else {
        return Err(Error::InvalidParam(
            "random_graph_sweep needs mode random-graph".into(),
        ));
    };
    let mus = cfg.mu_values();
    (0..spec.instances)
        .into_par_iter()
        .map(|index| {
            let seeds = InstanceSeeds::derive(cfg.seed, index);
            let wrap = |e: Error| Error::Instance {
                index,
                seed: seeds.instance,
                source: Box::new(e),
            };
            let inst = random_instance(spec, cfg.budget, seeds).map_err(wrap)?;
            let greedy = run_result(&g_greedy(&inst), None);
            let bp = mus
                .iter()
                .map(|&mu| {
                    let out = bp_solve(&inst, &cfg.bp_params(mu)).map_err(wrap)?;
                    Ok(run_result(&out.solution, Some(&out.diagnostics)))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(SweepRecord {
                label: format!("instance-{index}"),
                seed: Some(seeds.instance),
                greedy,
                bp,
            })
        })
        .collect()
}

pub fn random_graph_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    let records = random_graph_records(cfg)?;
    Ok(aggregate(&cfg.mu_values(), &records))
}

/// A loaded corpus with per-cluster term weights.
pub struct PreparedCorpus {
    pub clusters: Vec<Cluster>,
    pub weights: Vec<crate::text::TermWeights>,
}

pub fn prepare_corpus(spec: &CorpusSpec) -> Result<PreparedCorpus> {
    let clusters = load_corpus(&spec.corpus)?;
    let mut background = Vec::new();
    for root in &spec.background {
        background.extend(load_corpus(root)?);
    }
    let weights = compute_tfidf(&clusters, &background, &spec.preprocess)?;
    Ok(PreparedCorpus { clusters, weights })
}

/// Per-cluster results of a corpus sweep.
pub fn corpus_records(cfg: &SweepConfig) -> Result<Vec<SweepRecord>> {
    cfg.validate()?;
    let SweepMode::Corpus(spec) = &cfg.mode else {
        return Err(Error::InvalidParam("corpus_sweep needs mode corpus".into()));
    };
    let prepared = prepare_corpus(spec)?;
    corpus_records_prepared(cfg, spec, &prepared)
}

pub fn corpus_records_prepared(
    cfg: &SweepConfig,
    spec: &CorpusSpec,
    prepared: &PreparedCorpus,
) -> Result<Vec<SweepRecord>> {
    let mus = cfg.mu_values();
    prepared
        .clusters
        .par_iter()
        .zip(&prepared.weights)
        .map(|(cluster, weights)| {
            let wrap = |e: Error| Error::Cluster {
                cluster: cluster.id.clone(),
                source: Box::new(e),
            };
            let tokenizer = Tokenizer::new(&spec.preprocess);
            let refs: Vec<Vec<String>> = cluster.references.iter().map(|r| tokenizer.tokenize(r)).collect();
            let built = build_cover_graph(cluster, weights, cfg.budget, &spec.preprocess).map_err(wrap)?;

            let score = |solver: &Solver| -> Result<RunResult> {
                let s = summary_from(&built, solver).map_err(wrap)?;
                let rouge1 = if refs.is_empty() {
                    None
                } else {
                    Some(
                        rouge1_multi(&s.tokens, &refs, spec.rouge_mode)
                            .map_err(wrap)?
                            .value,
                    )
                };
                Ok(RunResult {
                    covered_weight: s.solution.covered_weight,
                    cost: s.solution.cost,
                    rouge1,
                    last_max_delta: s.diagnostics.as_ref().map(|d| d.last_max_delta),
                    min_h_hat: s.diagnostics.as_ref().and_then(|d| d.min_h_hat),
                    summary: s.sentences,
                })
            };
            let greedy = score(&Solver::GGreedy)?;
            let bp = mus
                .iter()
                .map(|&mu| score(&Solver::Bp(cfg.bp_params(mu))))
                .collect::<Result<Vec<_>>>()?;
            Ok(SweepRecord {
                label: cluster.id.clone(),
                seed: None,
                greedy,
                bp,
            })
        })
        .collect()
}

pub fn corpus_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    let records = corpus_records(cfg)?;
    Ok(aggregate(&cfg.mu_values(), &records))
}

/// Dispatches on the configured mode.
pub fn run_sweep(cfg: &SweepConfig) -> Result<(Vec<SweepRecord>, Vec<SweepRow>)> {
    let records = match cfg.mode {
        SweepMode::RandomGraph(_) => random_graph_records(cfg)?,
        SweepMode::Corpus(_) => corpus_records(cfg)?,
    };
    let rows = aggregate(&cfg.mu_values(), &records);
    Ok((records, rows))
}

fn mean_se(xs: &[f64]) -> (f64, Option<f64>) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, None);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, Some((var / n).sqrt()))
}

fn mean_rouge<'a>(runs: impl Iterator<Item = &'a RunResult>) -> Option<f64> {
    let scores: Vec<f64> = runs.filter_map(|r| r.rouge1).collect();
    corpus_rouge(&scores).ok()
}

/// One row per mu: mean and standard error over records. The greedy columns
/// repeat on every row.
pub fn aggregate(mus: &[f64], records: &[SweepRecord]) -> Vec<SweepRow> {
    if records.is_empty() {
        return Vec::new();
    }
    let greedy: Vec<f64> = records.iter().map(|r| r.greedy.covered_weight).collect();
    let (greedy_weight_mean, greedy_weight_se) = mean_se(&greedy);
    let greedy_rouge1 = mean_rouge(records.iter().map(|r| &r.greedy));
    mus.iter()
        .enumerate()
        .map(|(k, &mu)| {
            let bp: Vec<f64> = records.iter().map(|r| r.bp[k].covered_weight).collect();
            let (bp_weight_mean, bp_weight_se) = mean_se(&bp);
            SweepRow {
                mu,
                bp_weight_mean,
                bp_weight_se,
                greedy_weight_mean,
                greedy_weight_se,
                bp_rouge1: mean_rouge(records.iter().map(|r| &r.bp[k])),
                greedy_rouge1,
                n: records.len(),
            }
        })
        .collect()
}

pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.mu,
            r.bp_weight_mean,
            opt(r.bp_weight_se),
            r.greedy_weight_mean,
            opt(r.greedy_weight_se),
            opt(r.bp_rouge1),
            opt(r.greedy_rouge1),
            r.n
        );
    }
    out
}

pub fn write_csv(rows: &[SweepRow], mut w: impl Write) -> std::io::Result<()> {
    w.write_all(rows_to_csv(rows).as_bytes())
}
