//! Acceptance suite. Runs every criterion and prints one PASS/FAIL line each.
//!
//! `cargo test --test acceptance` runs all of them; trailing numeric
//! arguments select a subset, e.g. `cargo test --test acceptance -- 2 5`.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::OnceLock;

use maxcov::experiments::{
    aggregate, corpus_records, linear_grid, random_graph_records, rows_to_csv, CorpusSpec, RandomGraphSpec,
    SweepConfig, SweepMode, SweepRecord,
};
use maxcov::oracle::{exact_solve, OracleLimits};
use maxcov::rouge::{rouge1, rouge1_with, RougeMode};
use maxcov::solvers::{bp_local_fields, bp_solve, bp_sweep, g_greedy, simple_greedy, BeliefState, BpParams};
use maxcov::text::PreprocessConfig;
use maxcov::BipartiteGraph;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{brute_force, small_instance, toy_corpus};

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

const RANDOM_SEED: u64 = 20_240_601;
const SMALL_SEED: u64 = 7_000;

fn random_graph_config() -> SweepConfig {
    SweepConfig {
        mode: SweepMode::RandomGraph(RandomGraphSpec {
            instances: 100,
            n_x: 100,
            n_y: 300,
            deg_x: 9,
            deg_y: 3,
            weight_lo: 1,
            weight_hi: 10,
        }),
        mu_grid: linear_grid(0.0, 10.0, 0.5),
        beta: 3.0,
        budget: 100.0,
        iterations: 150,
        damping: 0.0,
        seed: RANDOM_SEED,
    }
}

// Shared by criteria 1 and 4.
fn random_graph_run() -> &'static (SweepConfig, Vec<SweepRecord>) {
    static RUN: OnceLock<(SweepConfig, Vec<SweepRecord>)> = OnceLock::new();
    RUN.get_or_init(|| {
        let cfg = random_graph_config();
        let records = random_graph_records(&cfg).expect("random graph sweep");
        (cfg, records)
    })
}

fn criterion_1() -> Outcome {
    let (cfg, records) = random_graph_run();
    let mus = cfg.mu_values();
    let rows = aggregate(&mus, records);
    let (peak, row) = rows
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.bp_weight_mean.total_cmp(&b.1.bp_weight_mean))
        .unwrap();
    let se = row.bp_weight_se.unwrap_or(f64::INFINITY);
    let greedy = row.greedy_weight_mean;
    let interior = peak > 0 && peak + 1 < rows.len();
    let in_window = (3.0..=7.0).contains(&row.mu);
    let superior = row.bp_weight_mean - greedy > se;
    let msg = format!(
        "peak mu = {} (interior: {interior}), bp peak mean = {:.2} (se {:.2}), g-greedy mean = {:.2}",
        row.mu, row.bp_weight_mean, se, greedy
    );
    if interior && in_window && superior {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_2() -> Outcome {
    let lim = OracleLimits::default();
    let bp = BpParams::default();
    for k in 0..200u64 {
        let inst = small_instance(SMALL_SEED + k, 10, 20);
        let exact = exact_solve(&inst, &lim).map_err(|e| e.to_string())?;
        if !exact.optimal {
            return Err(format!("instance {k}: oracle did not finish"));
        }
        let brute = brute_force(&inst);
        if exact.solution.covered_weight != brute {
            return Err(format!(
                "instance {k}: branch-and-bound {} vs enumeration {brute}",
                exact.solution.covered_weight
            ));
        }
        let outputs = [
            ("g-greedy", g_greedy(&inst)),
            ("greedy", simple_greedy(&inst)),
            ("bp", bp_solve(&inst, &bp).map_err(|e| e.to_string())?.solution),
        ];
        for (name, s) in outputs {
            let cost = inst
                .graph
                .selection_cost(&s.selected)
                .map_err(|e| e.to_string())?;
            let cover = inst
                .graph
                .covered_weight(&s.selected)
                .map_err(|e| e.to_string())?;
            if cost > inst.budget {
                return Err(format!(
                    "instance {k}: {name} cost {cost} exceeds budget {}",
                    inst.budget
                ));
            }
            if cover > brute {
                return Err(format!(
                    "instance {k}: {name} covers {cover} above optimum {brute}"
                ));
            }
        }
    }
    Ok("200 instances: all outputs feasible and <= optimum, oracle equals enumeration".into())
}

fn criterion_3() -> Outcome {
    let grid = linear_grid(0.0, 10.0, 0.5);
    let (mut bp_total, mut greedy_total) = (0.0, 0.0);
    for k in 0..200u64 {
        let inst = small_instance(SMALL_SEED + k, 10, 20);
        greedy_total += g_greedy(&inst).covered_weight;
        let mut best = f64::NEG_INFINITY;
        for &mu in &grid {
            let p = BpParams {
                mu,
                ..BpParams::default()
            };
            best = best.max(
                bp_solve(&inst, &p)
                    .map_err(|e| e.to_string())?
                    .solution
                    .covered_weight,
            );
        }
        bp_total += best;
    }
    let (bp, greedy) = (bp_total / 200.0, greedy_total / 200.0);
    let msg = format!("mean best-over-mu bp = {bp:.4}, mean g-greedy = {greedy:.4}");
    if bp >= greedy {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_4() -> Outcome {
    let (_, records) = random_graph_run();
    let mut runs = 0;
    let mut non_positive = 0;
    let mut unconverged = 0;
    let mut worst_delta = 0.0f64;
    let mut min_msg = f64::INFINITY;
    for r in records {
        for run in &r.bp {
            runs += 1;
            let m = run.min_h_hat.unwrap_or(f64::INFINITY);
            min_msg = min_msg.min(m);
            if m <= 0.0 {
                non_positive += 1;
            }
            let d = run.last_max_delta.unwrap_or(f64::INFINITY);
            worst_delta = worst_delta.max(d);
            if d >= 1e-6 {
                unconverged += 1;
            }
        }
    }
    let msg = format!(
        "{runs} runs: {non_positive} with a non-positive h_hat (smallest {min_msg:.3e}), \
         {unconverged} with last_max_delta >= 1e-6 (largest {worst_delta:.3e})"
    );
    if non_positive == 0 && unconverged == 0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_5() -> Outcome {
    let p = BpParams {
        beta: 50.0,
        mu: 1e6,
        ..BpParams::default()
    };
    for k in 0..100u64 {
        let inst = small_instance(SMALL_SEED + 10_000 + k, 10, 20);
        let g = &inst.graph;
        let out = bp_solve(&inst, &p).map_err(|e| e.to_string())?;
        let keys = out.diagnostics.fields.ranking_keys(g);
        let top = (0..g.n_x())
            .max_by(|&a, &b| keys[a].total_cmp(&keys[b]).then(b.cmp(&a)))
            .unwrap();
        let ratio = |i: usize| g.covered_weight(&[i]).unwrap() / g.x_weights()[i];
        let best = (0..g.n_x()).map(ratio).fold(f64::NEG_INFINITY, f64::max);
        if (ratio(top) - best).abs() > 1e-9 * best.abs().max(1.0) {
            return Err(format!(
                "instance {k}: bp top node {top} has ratio {} < {best}",
                ratio(top)
            ));
        }
    }
    Ok("100 instances: bp top-ranked node attains the best initial gain/cost ratio".into())
}

fn criterion_6() -> Outcome {
    let fixtures: [(&[&str], &[&str], f64); 4] = [
        (&["the", "cat", "sat"], &["the", "cat", "ran", "far"], 0.5),
        (&["the", "the", "the", "dog"], &["the", "the", "cat", "dog"], 0.75),
        (&["a", "b"], &["c"], 0.0),
        (&["x", "y", "z"], &["z", "y", "x"], 1.0),
    ];
    for (s, r, want) in fixtures {
        let got = rouge1(s, r).map_err(|e| e.to_string())?.value;
        if (got - want).abs() > 1e-12 {
            return Err(format!("{s:?} vs {r:?}: {got} != {want}"));
        }
    }
    let set = rouge1_with(
        &["the", "the", "dog"],
        &["the", "cat", "dog", "dog"],
        RougeMode::Set,
    )
    .map_err(|e| e.to_string())?
    .value;
    if (set - 2.0 / 3.0).abs() > 1e-12 {
        return Err(format!("set mode fixture: {set}"));
    }

    let vocab = ["a", "b", "c", "d", "e", "f", "g", "h"];
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    for k in 0..1000 {
        let draw = |rng: &mut ChaCha8Rng, lo: usize| -> Vec<&str> {
            let n = rng.gen_range(lo..16);
            (0..n).map(|_| *vocab.choose(rng).unwrap()).collect()
        };
        let s = draw(&mut rng, 0);
        let r = draw(&mut rng, 1);
        let extra = draw(&mut rng, 0);
        for mode in [RougeMode::Multiset, RougeMode::Set] {
            let base = rouge1_with(&s, &r, mode).map_err(|e| e.to_string())?.value;
            if !(0.0..=1.0).contains(&base) {
                return Err(format!("pair {k}: score {base} out of [0, 1]"));
            }
            let longer: Vec<&str> = s.iter().chain(&extra).copied().collect();
            let grown = rouge1_with(&longer, &r, mode).map_err(|e| e.to_string())?.value;
            if grown < base {
                return Err(format!("pair {k}: appending tokens lowered {base} to {grown}"));
            }
            let mut shuffled = s.clone();
            shuffled.shuffle(&mut rng);
            if rouge1_with(&shuffled, &r, mode).map_err(|e| e.to_string())?.value != base {
                return Err(format!("pair {k}: score depends on token order"));
            }
            if rouge1_with(&r, &r, mode).map_err(|e| e.to_string())?.value != 1.0 {
                return Err(format!("pair {k}: reference against itself is not 1"));
            }
        }
    }
    Ok("fixtures exact to 1e-12; bounds, monotonicity and order invariance hold on 1000 pairs".into())
}

fn toy_config(beta: f64, remove_stopwords: bool) -> SweepConfig {
    SweepConfig {
        mode: SweepMode::Corpus(CorpusSpec {
            corpus: toy_corpus(),
            background: Vec::new(),
            preprocess: PreprocessConfig {
                remove_stopwords,
                ..PreprocessConfig::default()
            },
            rouge_mode: RougeMode::Multiset,
        }),
        mu_grid: Vec::new(),
        beta,
        budget: 30.0,
        iterations: 150,
        damping: 0.0,
        seed: 0,
    }
}

fn criterion_7() -> Outcome {
    let mut checked = 0;
    for (beta, remove) in [(45.0, true), (80.0, false)] {
        let cfg = toy_config(beta, remove);
        let run = || -> Result<(String, String), String> {
            let records = corpus_records(&cfg).map_err(|e| e.to_string())?;
            let csv = rows_to_csv(&aggregate(&cfg.mu_values(), &records));
            let summaries = serde_json::to_string(&records).map_err(|e| e.to_string())?;
            for r in &records {
                for (mu, run) in cfg.mu_values().iter().zip(&r.bp) {
                    if run.cost > cfg.budget {
                        return Err(format!(
                            "{} beta {beta} mu {mu}: {} words > {}",
                            r.label, run.cost, cfg.budget
                        ));
                    }
                }
                if r.greedy.cost > cfg.budget {
                    return Err(format!("{}: g-greedy uses {} words", r.label, r.greedy.cost));
                }
            }
            Ok((summaries, csv))
        };
        let first = run()?;
        let second = run()?;
        if first != second {
            return Err(format!("beta {beta}: two runs differ"));
        }
        checked += cfg.mu_values().len();
    }
    Ok(format!(
        "{checked} (beta, mu) settings: identical reruns, every summary within budget"
    ))
}

fn criterion_8() -> Outcome {
    let ln2 = std::f64::consts::LN_2;
    let g = BipartiteGraph::new(vec![1.0], vec![0.0], [(0, 0)]).map_err(|e| e.to_string())?;
    let p = BpParams {
        beta: 1.0,
        mu: 0.0,
        ..BpParams::default()
    };
    let s = bp_sweep(&g, &p, &BeliefState::new(&g)).map_err(|e| e.to_string())?;
    let f = bp_local_fields(&g, &p, &s).map_err(|e| e.to_string())?;
    let err = f.h_node[0] - ln2;
    if err.abs() > 1e-12 {
        return Err(format!("h_1 = {} != ln 2", f.h_node[0]));
    }

    // x1 and y1 are isolated
    let (beta, mu) = (2.0, 0.7);
    let g = BipartiteGraph::new(vec![2.0, 3.0], vec![1.5, 4.0], [(0, 0)]).map_err(|e| e.to_string())?;
    let p = BpParams {
        beta,
        mu,
        ..BpParams::default()
    };
    let s = bp_sweep(&g, &p, &BeliefState::new(&g)).map_err(|e| e.to_string())?;
    let f = bp_local_fields(&g, &p, &s).map_err(|e| e.to_string())?;
    let h_iso = -mu * 3.0;
    let eta_iso = -(1.0 - 1.0 / (1.0 + (-beta * 4.0f64).exp())).ln() / beta;
    if (f.h_node[1] - h_iso).abs() > 1e-12 || (f.eta_node[1] - eta_iso).abs() > 1e-12 {
        return Err(format!(
            "isolated fields h = {} (want {h_iso}), eta = {} (want {eta_iso})",
            f.h_node[1], f.eta_node[1]
        ));
    }
    Ok(format!("h_1 - ln 2 = {err:.1e}; isolated-node fields match"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (1, "random-graph mu sweep peak", criterion_1),
        (2, "oracle dominance", criterion_2),
        (3, "bp best-over-mu vs g-greedy", criterion_3),
        (4, "message positivity and convergence", criterion_4),
        (5, "large-mu reduction to g-greedy", criterion_5),
        (6, "rouge-1 exactness", criterion_6),
        (7, "summarization determinism and budget", criterion_7),
        (8, "closed-form bp", criterion_8),
    ];
    let wanted: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (id, name, run) in criteria {
        if !wanted.is_empty() && !wanted.contains(&id) {
            continue;
        }
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let why = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {why}"))
        });
        match outcome {
            Ok(m) => println!("PASS criterion {id} ({name}): {m}"),
            Err(m) => {
                failed += 1;
                println!("FAIL criterion {id} ({name}): {m}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
