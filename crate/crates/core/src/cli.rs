//! Command-line front end. Exit codes: 0 success, 1 usage error, 2 data error.

use std::fs;
use std::io::ErrorKind;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use serde::{Deserialize, Serialize};

use maxcov::experiments::{rows_to_csv, run_sweep, SweepConfig, SweepMode};
use maxcov::graph::{generate_biregular, load_graph, sample_integer_weights, store_graph, CoverInstance};
use maxcov::oracle::{exact_solve, OracleLimits};
use maxcov::rouge::{rouge1_multi, RougeMode};
use maxcov::solvers::{BpParams, Solver};
use maxcov::text::{
    build_cover_graph, compute_tfidf, load_cluster, load_corpus, summary_from, PreprocessConfig, Tokenizer,
};
use maxcov::Error;

#[derive(Debug, Parser)]
#[command(
    name = "maxcov",
    version,
    about = "Budgeted maximum coverage: BP, greedy and exact solvers"
)]
struct Cli {
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a random biregular graph with integer weights.
    GenGraph(GenGraphArgs),
    /// Solve a graph file with one solver.
    Solve(SolveArgs),
    /// Exact optimum by branch and bound (small graphs only).
    Oracle(OracleArgs),
    /// Run a mu sweep described by a config file and write CSV.
    Sweep(SweepArgs),
    /// Extractive summary of a cluster (or every cluster of a corpus).
    Summarize(SummarizeArgs),
    /// ROUGE-1 of a summary file against reference files.
    Rouge(RougeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum SolverName {
    Greedy,
    GGreedy,
    Bp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

impl Switch {
    fn on(self) -> bool {
        self == Switch::On
    }
}

#[derive(Debug, Args)]
struct GenGraphArgs {
    #[arg(long)]
    nx: usize,
    #[arg(long)]
    ny: usize,
    #[arg(long)]
    dx: usize,
    #[arg(long)]
    dy: usize,
    /// Smallest integer cost/weight.
    #[arg(long, default_value_t = 1)]
    wlo: i64,
    /// Largest integer cost/weight.
    #[arg(long, default_value_t = 10)]
    whi: i64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

/// Solver flags shared by `solve` and `summarize`. Unset flags fall back to
/// the config file, then to built-in defaults.
#[derive(Debug, Args)]
struct SolverFlags {
    #[arg(long, value_enum)]
    solver: Option<SolverName>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long)]
    damping: Option<f64>,
    #[arg(long)]
    budget: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// JSON file with default values for any of these flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long)]
    graph: PathBuf,
    #[command(flatten)]
    flags: SolverFlags,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    budget: f64,
    #[arg(long, default_value_t = 25)]
    max_nodes: usize,
    /// Wall-clock limit in seconds.
    #[arg(long, default_value_t = 60.0)]
    time_limit: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    beta: Option<f64>,
    /// Comma-separated mu grid.
    #[arg(long, value_delimiter = ',')]
    mu: Option<Vec<f64>>,
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long)]
    damping: Option<f64>,
    #[arg(long)]
    budget: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    stopwords: Option<Switch>,
    #[arg(long, value_enum)]
    stem: Option<Switch>,
    /// CSV destination (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write per-instance records as JSON.
    #[arg(long)]
    records: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SummarizeArgs {
    /// A cluster directory (with docs/) or a corpus root of clusters.
    #[arg(long)]
    corpus: PathBuf,
    /// Corpus roots used only for document frequencies.
    #[arg(long)]
    background: Vec<PathBuf>,
    #[command(flatten)]
    flags: SolverFlags,
    #[arg(long, value_enum)]
    stopwords: Option<Switch>,
    #[arg(long, value_enum)]
    stem: Option<Switch>,
    /// JSON report destination; the summary text always goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RougeArgs {
    #[arg(long)]
    summary: PathBuf,
    #[arg(long, num_args = 1.., required = true)]
    refs: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "off")]
    stopwords: Switch,
    #[arg(long, value_enum, default_value = "on")]
    stem: Switch,
    /// Count distinct words instead of clipped token multisets.
    #[arg(long)]
    set: bool,
}

/// Config-file overlay for `solve` and `summarize`.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct FileConfig {
    solver: Option<SolverName>,
    beta: Option<f64>,
    mu: Option<f64>,
    iters: Option<usize>,
    damping: Option<f64>,
    budget: Option<f64>,
    seed: Option<u64>,
    threads: Option<usize>,
    stopwords: Option<bool>,
    stem: Option<bool>,
    first_sentence_boost: Option<f64>,
}

/// Fully resolved run settings, echoed to stderr on every run.
#[derive(Debug, Clone, Serialize)]
struct Resolved {
    command: &'static str,
    solver: Solver,
    budget: f64,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    preprocess: Option<PreprocessConfig>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match &e {
            Error::Io { source, .. } if source.kind() == ErrorKind::NotFound => {
                CliError::Usage(e.to_string())
            }
            Error::InvalidParam(_) | Error::OracleCap { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

pub fn dispatch(args: &[String]) -> u8 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: could not size thread pool: {e}");
        }
    }
    let result = match cli.command {
        Command::GenGraph(a) => gen_graph(a),
        Command::Solve(a) => solve(a),
        Command::Oracle(a) => oracle(a),
        Command::Sweep(a) => sweep(a),
        Command::Summarize(a) => summarize(a),
        Command::Rouge(a) => rouge(a),
    };
    match result {
        Ok(()) => 0,
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            1
        }
        Err(CliError::Data(m)) => {
            eprintln!("error: {m}");
            2
        }
    }
}

fn require_exists(path: &Path, what: &str) -> CliResult<()> {
    if path.exists() {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "{what} {} does not exist",
            path.display()
        )))
    }
}

fn echo<T: Serialize>(resolved: &T) {
    match serde_json::to_string(resolved) {
        Ok(s) => eprintln!("config: {s}"),
        Err(e) => eprintln!("config: <unserializable: {e}>"),
    }
}

fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Usage(format!("{}: {e}", p.display()))),
        None => {
            stdout(&format!("{text}\n"));
            Ok(())
        }
    }
}

// A closed pipe on stdout is not an error worth reporting.
fn stdout(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn to_json<T: Serialize>(v: &T) -> CliResult<String> {
    serde_json::to_string_pretty(v).map_err(|e| CliError::Data(e.to_string()))
}

fn read_file_config(path: Option<&Path>) -> CliResult<FileConfig> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    require_exists(path, "config")?;
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

impl SolverFlags {
    fn resolve(&self, default_solver: SolverName) -> CliResult<(Solver, f64, u64, FileConfig)> {
        let file = read_file_config(self.config.as_deref())?;
        let defaults = BpParams::default();
        let params = BpParams {
            beta: self.beta.or(file.beta).unwrap_or(defaults.beta),
            mu: self.mu.or(file.mu).unwrap_or(defaults.mu),
            iterations: self.iters.or(file.iters).unwrap_or(defaults.iterations),
            damping: self.damping.or(file.damping).unwrap_or(defaults.damping),
            ..defaults
        };
        params.validate()?;
        let solver = match self.solver.or(file.solver).unwrap_or(default_solver) {
            SolverName::Greedy => Solver::Greedy,
            SolverName::GGreedy => Solver::GGreedy,
            SolverName::Bp => Solver::Bp(params),
        };
        let budget = self
            .budget
            .or(file.budget)
            .ok_or_else(|| CliError::Usage("--budget is required (flag or config file)".into()))?;
        let seed = self.seed.or(file.seed).unwrap_or(0);
        Ok((solver, budget, seed, file))
    }
}

fn gen_graph(a: GenGraphArgs) -> CliResult<()> {
    echo(&serde_json::json!({
        "command": "gen-graph", "nx": a.nx, "ny": a.ny, "dx": a.dx, "dy": a.dy,
        "wlo": a.wlo, "whi": a.whi, "seed": a.seed, "out": a.out,
    }));
    let seeds = maxcov::experiments::InstanceSeeds::from_instance_seed(a.seed);
    let g = generate_biregular(a.nx, a.ny, a.dx, a.dy, seeds.graph)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let c = sample_integer_weights(a.nx, a.wlo, a.whi, seeds.x_weights)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let w = sample_integer_weights(a.ny, a.wlo, a.whi, seeds.y_weights)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let g = g.with_weights(c, w)?;
    store_graph(&g, &a.out).map_err(|e| CliError::Usage(e.to_string()))?;
    info!("wrote {} edges to {}", g.edge_count(), a.out.display());
    Ok(())
}

fn solve(a: SolveArgs) -> CliResult<()> {
    require_exists(&a.graph, "graph")?;
    let (solver, budget, seed, _) = a.flags.resolve(SolverName::GGreedy)?;
    echo(&Resolved {
        command: "solve",
        solver: solver.clone(),
        budget,
        seed,
        preprocess: None,
    });
    let g = load_graph(&a.graph)?;
    let inst = CoverInstance::new(g, budget)?;
    let report = solver.run(&inst)?;
    emit(&to_json(&report)?, a.out.as_deref())
}

fn oracle(a: OracleArgs) -> CliResult<()> {
    require_exists(&a.graph, "graph")?;
    if !(a.time_limit.is_finite() && a.time_limit > 0.0) {
        return Err(CliError::Usage("--time-limit must be positive".into()));
    }
    echo(&serde_json::json!({
        "command": "oracle", "graph": a.graph, "budget": a.budget,
        "max_nodes": a.max_nodes, "time_limit": a.time_limit,
    }));
    let g = load_graph(&a.graph)?;
    let inst = CoverInstance::new(g, a.budget)?;
    let lim = OracleLimits {
        max_x_nodes: a.max_nodes,
        time_budget: std::time::Duration::from_secs_f64(a.time_limit),
    };
    let out = exact_solve(&inst, &lim)?;
    let report = serde_json::json!({
        "solver": "exact",
        "budget": a.budget,
        "selected": out.solution.selected,
        "cost": out.solution.cost,
        "covered_weight": out.solution.covered_weight,
        "optimal": out.optimal,
        "nodes_explored": out.nodes_explored,
    });
    emit(&to_json(&report)?, a.out.as_deref())
}

fn sweep(a: SweepArgs) -> CliResult<()> {
    require_exists(&a.config, "config")?;
    let text = fs::read_to_string(&a.config).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut cfg: SweepConfig =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", a.config.display())))?;
    if let Some(v) = a.beta {
        cfg.beta = v;
    }
    if let Some(v) = a.mu {
        cfg.mu_grid = v;
    }
    if let Some(v) = a.iters {
        cfg.iterations = v;
    }
    if let Some(v) = a.damping {
        cfg.damping = v;
    }
    if let Some(v) = a.budget {
        cfg.budget = v;
    }
    if let Some(v) = a.seed {
        cfg.seed = v;
    }
    if let SweepMode::Corpus(ref mut spec) = cfg.mode {
        if let Some(s) = a.stopwords {
            spec.preprocess.remove_stopwords = s.on();
        }
        if let Some(s) = a.stem {
            spec.preprocess.apply_stemming = s.on();
        }
        // relative corpus paths resolve against the config file's directory
        let base = a.config.parent().unwrap_or(Path::new("."));
        if spec.corpus.is_relative() {
            spec.corpus = base.join(&spec.corpus);
        }
        for b in &mut spec.background {
            if b.is_relative() {
                *b = base.join(&*b);
            }
        }
        require_exists(&spec.corpus, "corpus")?;
    }
    if cfg.mu_grid.is_empty() {
        cfg.mu_grid = cfg.mu_values();
    }
    echo(&cfg);
    let (records, rows) = run_sweep(&cfg)?;
    if let Some(p) = &a.records {
        fs::write(p, to_json(&records)?).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
    }
    let csv = rows_to_csv(&rows);
    match &a.out {
        Some(p) => fs::write(p, csv).map_err(|e| CliError::Usage(format!("{}: {e}", p.display()))),
        None => {
            stdout(&csv);
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct ClusterReport {
    cluster: String,
    summary: Vec<String>,
    word_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    rouge1: Option<f64>,
    solution: maxcov::CoverSolution,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagnostics: Option<maxcov::solvers::BpDiagnostics>,
}

fn summarize(a: SummarizeArgs) -> CliResult<()> {
    require_exists(&a.corpus, "corpus")?;
    for b in &a.background {
        require_exists(b, "background corpus")?;
    }
    let (solver, budget, seed, file) = a.flags.resolve(SolverName::GGreedy)?;
    let defaults = PreprocessConfig::default();
    let cfg = PreprocessConfig {
        remove_stopwords: a
            .stopwords
            .map(Switch::on)
            .or(file.stopwords)
            .unwrap_or(defaults.remove_stopwords),
        apply_stemming: a
            .stem
            .map(Switch::on)
            .or(file.stem)
            .unwrap_or(defaults.apply_stemming),
        first_sentence_boost: file.first_sentence_boost.unwrap_or(defaults.first_sentence_boost),
        ..defaults
    };
    cfg.validate()?;
    echo(&Resolved {
        command: "summarize",
        solver: solver.clone(),
        budget,
        seed,
        preprocess: Some(cfg.clone()),
    });

    let clusters = if a.corpus.join("docs").is_dir() {
        vec![load_cluster(&a.corpus)?]
    } else {
        load_corpus(&a.corpus)?
    };
    let mut background = Vec::new();
    for b in &a.background {
        background.extend(load_corpus(b)?);
    }
    let weights = compute_tfidf(&clusters, &background, &cfg)?;
    let tokenizer = Tokenizer::new(&cfg);

    let mut reports = Vec::new();
    let mut text = String::new();
    for (cluster, w) in clusters.iter().zip(&weights) {
        let built = build_cover_graph(cluster, w, budget, &cfg)?;
        let s = summary_from(&built, &solver)?;
        let refs: Vec<Vec<String>> = cluster.references.iter().map(|r| tokenizer.tokenize(r)).collect();
        let rouge1 = if refs.is_empty() {
            None
        } else {
            Some(rouge1_multi(&s.tokens, &refs, RougeMode::Multiset)?.value)
        };
        if clusters.len() > 1 {
            text.push_str(&format!("## {}\n", cluster.id));
        }
        text.push_str(&s.text());
        text.push('\n');
        reports.push(ClusterReport {
            cluster: cluster.id.clone(),
            summary: s.sentences,
            word_count: s.word_count,
            rouge1,
            solution: s.solution,
            diagnostics: s.diagnostics,
        });
    }
    stdout(&text);
    if let Some(p) = &a.out {
        fs::write(p, to_json(&reports)?).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn rouge(a: RougeArgs) -> CliResult<()> {
    require_exists(&a.summary, "summary")?;
    for r in &a.refs {
        require_exists(r, "reference")?;
    }
    let cfg = PreprocessConfig {
        remove_stopwords: a.stopwords.on(),
        apply_stemming: a.stem.on(),
        ..PreprocessConfig::default()
    };
    let mode = if a.set {
        RougeMode::Set
    } else {
        RougeMode::Multiset
    };
    echo(&serde_json::json!({"command": "rouge", "preprocess": cfg, "mode": mode}));
    let tokenizer = Tokenizer::new(&cfg);
    let read =
        |p: &PathBuf| fs::read_to_string(p).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())));
    let summary = tokenizer.tokenize(&read(&a.summary)?);
    let refs = a
        .refs
        .iter()
        .map(|p| Ok(tokenizer.tokenize(&read(p)?)))
        .collect::<CliResult<Vec<_>>>()?;
    let score = rouge1_multi(&summary, &refs, mode)?;
    emit(&to_json(&score)?, None)
}
