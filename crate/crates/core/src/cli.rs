//! Command-line front end. Every subcommand validates its flags before doing
//! any work, writes outputs atomically and leaves a `manifest.txt` of
//! `key=value` lines next to them.
//!
//! Exit codes: 0 success, 1 usage or parameter error, 2 data or runtime
//! error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use nalgebra::DVector;

use crate::bandit::{AlgoConfig, Algorithm};
use crate::basis::SpectralBasis;
use crate::data::{ingest, load_ratings, parse_rewards_csv, AlsConfig, IngestConfig, Thresholds};
use crate::effdim::{dimension_report, EffDimInput};
use crate::env::{compare, summarize, summary_csv, sweep, CompareSpec, EnvSpec, SweepSpec};
use crate::error::{Error, Result};
use crate::graph::{generate, latent_to_csv, load_graph, save_graph, GraphModel, WeightedGraph};
use crate::output::write_atomic;

#[derive(Debug, Parser)]
#[command(
    name = "spectral-bandits",
    version,
    about = "Spectral bandits on graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random or structured graph.
    GenGraph(GenGraphArgs),
    /// Effective dimension of a graph's spectrum.
    Effdim(EffdimArgs),
    /// Simulate bandit algorithms on a graph.
    Simulate(SimulateArgs),
    /// Grid search over (lambda, scale) for one algorithm.
    Sweep(SweepArgs),
    /// Ratings file to item graph and per-user rewards.
    Ingest(IngestArgs),
    /// Eigendecomposition of a graph Laplacian.
    Basis(BasisArgs),
}

#[derive(Debug, Args)]
pub struct GenGraphArgs {
    /// er, ba, lattice or blocks.
    #[arg(long)]
    pub model: String,
    /// Node count (derived for blocks).
    #[arg(long)]
    pub n: Option<usize>,
    /// Edge probability for er.
    #[arg(long, default_value_t = 0.005)]
    pub p: f64,
    /// Edges per new node for ba.
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    /// Initial isolated nodes for ba.
    #[arg(long, default_value_t = 3)]
    pub k0: usize,
    /// Number of cliques for blocks.
    #[arg(long, default_value_t = 2)]
    pub blocks: usize,
    /// Clique size for blocks.
    #[arg(long, default_value_t = 2)]
    pub block_size: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output graph file.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct GraphInput {
    /// Graph file.
    #[arg(long)]
    pub graph: PathBuf,
    /// Keep only the first L eigenvectors.
    #[arg(long = "L")]
    pub l: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EffdimArgs {
    #[command(flatten)]
    pub input: GraphInput,
    #[arg(long = "T", default_value_t = 100)]
    pub horizon: u64,
    #[arg(long, default_value_t = 0.1)]
    pub lambda: f64,
    /// Also print the water-filling allocation.
    #[arg(long)]
    pub waterfill: bool,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub input: GraphInput,
    #[arg(long = "T", default_value_t = 100)]
    pub horizon: usize,
    /// Sub-Gaussian noise bound; environment noise is uniform on [-R, R].
    #[arg(long = "R", default_value_t = 0.05)]
    pub noise: f64,
    /// Bound on the Lambda-norm of alpha (needed with --theoretical).
    #[arg(long = "C")]
    pub norm_bound: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
    /// Environment seeds as a..b (exclusive) or a..=b.
    #[arg(long, default_value = "0..5")]
    pub seeds: String,
    /// Lazy UCB updates.
    #[arg(long)]
    pub lazy: bool,
    /// Use the closed-form confidence constant instead of --scale.
    #[arg(long)]
    pub theoretical: bool,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long)]
    pub check_invariants: bool,
    /// Nonzero leading coefficients of alpha.
    #[arg(long, default_value_t = 20)]
    pub k_nonzero: usize,
    #[arg(long, default_value_t = 1.0)]
    pub magnitude: f64,
    /// Rescale rewards to max |f| = 1.
    #[arg(long)]
    pub normalize: bool,
    /// Rescale rewards only if they leave [-1, 1].
    #[arg(long)]
    pub clip: bool,
    /// Fixed rewards CSV (user,item,reward) instead of a random draw.
    #[arg(long)]
    pub rewards: Option<PathBuf>,
    /// User whose row of --rewards is used (default: first).
    #[arg(long)]
    pub user: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Algorithm, optionally with its own parameters: name[:lambda:scale].
    /// Repeat or separate with commas; "all" selects every algorithm.
    #[arg(long = "algo", required = true, value_delimiter = ',')]
    pub algos: Vec<String>,
    #[arg(long, default_value_t = 0.01)]
    pub lambda: f64,
    /// Confidence scale: c (UCB), v (TS) or beta (elimination).
    #[arg(long, default_value_t = 0.1)]
    pub scale: f64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long = "algo")]
    pub algo: String,
    #[arg(long, value_delimiter = ',', default_value = "0.001,0.01,0.1,1")]
    pub lambdas: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.01,0.1,1")]
    pub scales: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Ratings file: user<TAB>item<TAB>rating or MovieLens "::" format.
    #[arg(long)]
    pub ratings: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub min_item_ratings: usize,
    #[arg(long, default_value_t = 0)]
    pub min_user_ratings: usize,
    #[arg(long, default_value_t = 10)]
    pub rank: usize,
    /// ALS ridge penalty.
    #[arg(long, default_value_t = 0.1)]
    pub mu: f64,
    #[arg(long, default_value_t = 30)]
    pub sweeps: usize,
    /// Neighbours per item.
    #[arg(long, default_value_t = 5)]
    pub knn: usize,
    /// Users to emit reward vectors for.
    #[arg(long, default_value_t = 400)]
    pub users: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BasisArgs {
    #[command(flatten)]
    pub input: GraphInput,
    #[arg(long, default_value_t = 0.1)]
    pub lambda: f64,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

/// Parses `a..b` (exclusive) or `a..=b`.
pub fn parse_seed_range(s: &str) -> Result<Vec<u64>> {
    let bad = || Error::param(format!("--seeds expects a..b or a..=b, got {s:?}"));
    let (lo, hi, inclusive) = if let Some((a, b)) = s.split_once("..=") {
        (a, b, true)
    } else if let Some((a, b)) = s.split_once("..") {
        (a, b, false)
    } else {
        let one: u64 = s.trim().parse().map_err(|_| bad())?;
        return Ok(vec![one]);
    };
    let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
    let seeds: Vec<u64> = if inclusive {
        (lo..=hi).collect()
    } else {
        (lo..hi).collect()
    };
    if seeds.is_empty() {
        return Err(Error::param(format!("--seeds {s:?} is empty")));
    }
    Ok(seeds)
}

/// `name` or `name:lambda:scale`.
fn parse_algo(spec: &str, lambda: f64, scale: f64) -> Result<Vec<AlgoConfig>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let algorithms = if parts[0].eq_ignore_ascii_case("all") {
        Algorithm::ALL.to_vec()
    } else {
        vec![parts[0].parse::<Algorithm>()?]
    };
    let (lambda, scale) = match parts.len() {
        1 => (lambda, scale),
        3 => (
            parts[1]
                .parse()
                .map_err(|_| Error::param(format!("bad lambda in --algo {spec:?}")))?,
            parts[2]
                .parse()
                .map_err(|_| Error::param(format!("bad scale in --algo {spec:?}")))?,
        ),
        _ => {
            return Err(Error::param(format!(
                "--algo expects name[:lambda:scale], got {spec:?}"
            )))
        }
    };
    Ok(algorithms
        .into_iter()
        .map(|a| AlgoConfig::new(a, lambda, scale))
        .collect())
}

struct Manifest(Vec<(String, String)>);

impl Manifest {
    fn new(command: &str) -> Self {
        Self(vec![
            ("command".into(), command.into()),
            ("version".into(), env!("CARGO_PKG_VERSION").into()),
        ])
    }

    fn set(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.0.push((key.into(), value.to_string()));
        self
    }

    fn write(&self, dir: &Path) -> Result<()> {
        let mut out = String::new();
        for (k, v) in &self.0 {
            let _ = writeln!(out, "{k}={v}");
        }
        write_atomic(&dir.join("manifest.txt"), out.as_bytes())
    }
}

fn parent_dir(path: &Path) -> PathBuf {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    }
}

fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::State(format!("thread pool: {e}")))?;
    pool.install(f)
}

fn load_bases(
    input: &GraphInput,
    lambda: f64,
) -> Result<(WeightedGraph, SpectralBasis, SpectralBasis)> {
    let graph = load_graph(&input.graph)?;
    let full = SpectralBasis::from_graph(&graph, lambda, None)?;
    let policy = match input.l {
        Some(l) => full.truncated(l)?,
        None => full.clone(),
    };
    Ok((graph, full, policy))
}

fn gen_graph(args: &GenGraphArgs, out: &mut dyn std::io::Write) -> Result<()> {
    let model = match args.model.as_str() {
        "er" => GraphModel::ErdosRenyi { p: args.p },
        "ba" => GraphModel::BarabasiAlbert {
            m: args.m,
            k0: args.k0,
        },
        "lattice" => GraphModel::Lattice,
        "blocks" => GraphModel::Blocks {
            k: args.blocks,
            m: args.block_size,
        },
        other => other.parse()?,
    };
    let n = match (model, args.n) {
        (GraphModel::Blocks { k, m }, None) => k * m,
        (_, Some(n)) => n,
        (_, None) => return Err(Error::param("--n is required for this model")),
    };
    let g = generate(model, n, args.seed)?;
    save_graph(&g, &args.out)?;
    let hash = g.content_hash();
    Manifest::new("gen-graph")
        .set("model", model)
        .set("n", n)
        .set("seed", args.seed)
        .set("edges", g.n_edges())
        .set("graph", args.out.display())
        .set("graph_hash", &hash)
        .write(&parent_dir(&args.out))?;
    writeln!(
        out,
        "nodes={} edges={} components={} hash={hash}",
        n,
        g.n_edges(),
        g.n_components()
    )
    .map_err(|e| Error::io("stdout", e))
}

fn effdim(args: &EffdimArgs, out: &mut dyn std::io::Write) -> Result<()> {
    let (_, _, basis) = load_bases(&args.input, args.lambda)?;
    let input = EffDimInput::from_basis(&basis, args.horizon)?;
    let report = dimension_report(&input);
    let mut text = format!(
        "d={} d_old={} omega={}\n",
        report.d, report.d_old, report.fill.omega
    );
    if args.waterfill {
        let fill: Vec<String> = report.fill.t.iter().map(|t| format!("{t}")).collect();
        let _ = writeln!(text, "waterfill={}", fill.join(","));
    }
    out.write_all(text.as_bytes())
        .map_err(|e| Error::io("stdout", e))
}

fn env_spec(run: &RunArgs, n_nodes: usize) -> Result<EnvSpec> {
    let rewards = match &run.rewards {
        None => None,
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            let rows = parse_rewards_csv(&text, &path.display().to_string())?;
            let row: DVector<f64> = match run.user {
                None => rows.into_iter().next().map(|r| r.1),
                Some(u) => rows.into_iter().find(|r| r.0 == u).map(|r| r.1),
            }
            .ok_or_else(|| Error::Data(format!("{}: user not found", path.display())))?;
            if row.len() != n_nodes {
                return Err(Error::Data(format!(
                    "{} rewards for a {n_nodes}-node graph",
                    row.len()
                )));
            }
            Some(Arc::new(row))
        }
    };
    Ok(EnvSpec {
        k_nonzero: run.k_nonzero,
        magnitude: run.magnitude,
        noise_bound: run.noise,
        normalize: run.normalize,
        clip: run.clip,
        rewards,
    })
}

fn apply_run_args(cfg: &mut AlgoConfig, run: &RunArgs) {
    cfg.noise_bound = run.noise;
    cfg.norm_bound = run.norm_bound;
    cfg.delta = run.delta;
    cfg.horizon = run.horizon;
    cfg.lazy_ucb = run.lazy;
    cfg.use_theoretical_constant = run.theoretical;
}

fn run_manifest(command: &str, run: &RunArgs, hash: &str, seeds: &[u64]) -> Manifest {
    let mut m = Manifest::new(command);
    m.set("graph", run.input.graph.display())
        .set("graph_hash", hash)
        .set(
            "L",
            run.input.l.map_or("full".to_string(), |l| l.to_string()),
        )
        .set("T", run.horizon)
        .set("R", run.noise)
        .set(
            "C",
            run.norm_bound.map_or("none".to_string(), |c| c.to_string()),
        )
        .set("delta", run.delta)
        .set(
            "seeds",
            format!("{}..={}", seeds[0], seeds[seeds.len() - 1]),
        )
        .set("k_nonzero", run.k_nonzero)
        .set("magnitude", run.magnitude)
        .set("normalize", run.normalize)
        .set("clip", run.clip)
        .set("lazy", run.lazy)
        .set("theoretical", run.theoretical)
        .set("check_invariants", run.check_invariants);
    if let Some(r) = &run.rewards {
        m.set("rewards", r.display())
            .set("user", run.user.map_or("first".into(), |u| u.to_string()));
    }
    m
}

fn validate_run(run: &RunArgs) -> Result<()> {
    if run.horizon == 0 {
        return Err(Error::param("--T must be at least 1"));
    }
    if let Some(l) = run.input.l {
        if run.rewards.is_none() && l < run.k_nonzero {
            return Err(Error::param(format!(
                "--L {l} is below --k-nonzero {}",
                run.k_nonzero
            )));
        }
    }
    if run.user.is_some() && run.rewards.is_none() {
        return Err(Error::param("--user needs --rewards"));
    }
    Ok(())
}

fn simulate(args: &SimulateArgs, out: &mut dyn std::io::Write) -> Result<()> {
    let run = &args.run;
    validate_run(run)?;
    let seeds = parse_seed_range(&run.seeds)?;
    let mut configs = Vec::new();
    for spec in &args.algos {
        configs.extend(parse_algo(spec, args.lambda, args.scale)?);
    }
    for cfg in &mut configs {
        apply_run_args(cfg, run);
        cfg.validate()?;
        if cfg.use_theoretical_constant && cfg.norm_bound.is_none() {
            return Err(Error::param("--theoretical needs --C"));
        }
    }
    let (graph, full, policy_basis) = load_bases(&run.input, configs[0].reg_lambda)?;
    let env = env_spec(run, graph.n_nodes())?;
    let hash = graph.content_hash();
    let spec = CompareSpec {
        env,
        horizon: run.horizon,
        seeds: seeds.clone(),
        configs: configs.clone(),
        check_invariants: run.check_invariants,
        graph_hash: Some(hash.clone()),
    };
    let records = with_pool(run.jobs, || compare(&full, &policy_basis, &spec))?;
    for r in &records {
        let name = format!("{}_seed{}.csv", r.meta.algorithm, r.meta.seed);
        write_atomic(&run.out.join(name), r.to_csv().as_bytes())?;
    }
    write_atomic(
        &run.out.join("summary.csv"),
        summary_csv(&records).as_bytes(),
    )?;
    let mut manifest = run_manifest("simulate", run, &hash, &seeds);
    for (i, cfg) in configs.iter().enumerate() {
        manifest.set(
            &format!("algo.{i}"),
            format!(
                "{} lambda={} scale={}",
                cfg.algorithm, cfg.reg_lambda, cfg.scale
            ),
        );
    }
    manifest.write(&run.out)?;
    let mut text = String::from("algorithm,mean_regret,stderr,n_runs\n");
    for s in summarize(&records) {
        let _ = writeln!(
            text,
            "{},{:.4},{:.4},{}",
            s.algorithm, s.mean_regret, s.stderr, s.n_runs
        );
    }
    out.write_all(text.as_bytes())
        .map_err(|e| Error::io("stdout", e))
}

fn sweep_cmd(args: &SweepArgs, out: &mut dyn std::io::Write) -> Result<()> {
    let run = &args.run;
    validate_run(run)?;
    let seeds = parse_seed_range(&run.seeds)?;
    let mut template = AlgoConfig::new(args.algo.parse()?, 1.0, 1.0);
    apply_run_args(&mut template, run);
    template.use_theoretical_constant = false;
    if args
        .lambdas
        .iter()
        .chain(&args.scales)
        .any(|x| !(x.is_finite() && *x >= 0.0))
        || args.lambdas.iter().any(|l| *l <= 0.0)
    {
        return Err(Error::param(
            "--lambdas must be positive and --scales non-negative",
        ));
    }
    template.validate()?;
    let (graph, full, policy_basis) = load_bases(&run.input, args.lambdas[0])?;
    let hash = graph.content_hash();
    let spec = SweepSpec {
        template,
        lambdas: args.lambdas.clone(),
        scales: args.scales.clone(),
        env: env_spec(run, graph.n_nodes())?,
        horizon: run.horizon,
        seeds: seeds.clone(),
        check_invariants: run.check_invariants,
    };
    let result = with_pool(run.jobs, || sweep(&full, &policy_basis, &spec))?;
    write_atomic(&run.out.join("sweep.csv"), result.to_csv().as_bytes())?;
    let best = result.best_cell();
    let mut manifest = run_manifest("sweep", run, &hash, &seeds);
    manifest
        .set("algo", &args.algo)
        .set("best_lambda", best.lambda)
        .set("best_scale", best.scale);
    manifest.write(&run.out)?;
    writeln!(
        out,
        "best lambda={} scale={} mean_regret={:.4} stderr={:.4}",
        best.lambda, best.scale, best.mean_regret, best.stderr
    )
    .map_err(|e| Error::io("stdout", e))
}

fn ingest_cmd(args: &IngestArgs, out: &mut dyn std::io::Write) -> Result<()> {
    let config = IngestConfig {
        als: AlsConfig {
            rank: args.rank,
            reg: args.mu,
            sweeps: args.sweeps,
            seed: args.seed,
        },
        knn_k: args.knn,
        n_users: args.users,
        seed: args.seed,
    };
    if args.knn == 0 || args.rank == 0 || args.users == 0 || args.mu.is_nan() || args.mu <= 0.0 {
        return Err(Error::param(
            "--knn, --rank, --users and --mu must be positive",
        ));
    }
    let thresholds = Thresholds {
        min_item_ratings: args.min_item_ratings,
        min_user_ratings: args.min_user_ratings,
    };
    let table = load_ratings(&args.ratings, thresholds)?;
    let output = with_pool(args.jobs, || ingest(&table, &config))?;
    let dir = &args.out;
    save_graph(&output.graph, dir.join("graph.txt"))?;
    write_atomic(&dir.join("rewards.csv"), output.rewards_csv().as_bytes())?;
    write_atomic(
        &dir.join("item_factors.csv"),
        latent_to_csv(&output.graph_factors.item_factors).as_bytes(),
    )?;
    write_atomic(
        &dir.join("user_factors.csv"),
        latent_to_csv(&output.reward_factors.user_factors).as_bytes(),
    )?;
    let hash = output.graph.content_hash();
    Manifest::new("ingest")
        .set("ratings", args.ratings.display())
        .set("min_item_ratings", args.min_item_ratings)
        .set("min_user_ratings", args.min_user_ratings)
        .set("users_retained", table.n_users())
        .set("items_retained", table.n_items())
        .set("ratings_retained", table.len())
        .set("rank", args.rank)
        .set("mu", args.mu)
        .set("sweeps", args.sweeps)
        .set("knn", args.knn)
        .set("seed", args.seed)
        .set("graph_hash", &hash)
        .set("rmse_graph_part", output.graph_factors.rmse())
        .set("rmse_model_part", output.reward_factors.rmse())
        .write(dir)?;
    writeln!(
        out,
        "users={} items={} ratings={} graph_edges={} sampled_users={}",
        table.n_users(),
        table.n_items(),
        table.len(),
        output.graph.n_edges(),
        output.users.len()
    )
    .map_err(|e| Error::io("stdout", e))
}

fn basis_cmd(args: &BasisArgs, out: &mut dyn std::io::Write) -> Result<()> {
    let (graph, _, basis) = load_bases(&args.input, args.lambda)?;
    let dir = &args.out;
    let mut eig = String::from("index,eigenvalue,reg_eigenvalue\n");
    for (i, (l, r)) in basis
        .eigenvalues()
        .iter()
        .zip(basis.reg_eigenvalues().iter())
        .enumerate()
    {
        let _ = writeln!(eig, "{i},{l:?},{r:?}");
    }
    write_atomic(&dir.join("eigenvalues.csv"), eig.as_bytes())?;
    write_atomic(
        &dir.join("eigenvectors.csv"),
        latent_to_csv(basis.eigenvectors()).as_bytes(),
    )?;
    let residual = basis.max_relative_residual(&graph.laplacian());
    let ortho = basis.orthonormality_error();
    Manifest::new("basis")
        .set("graph", args.input.graph.display())
        .set("graph_hash", graph.content_hash())
        .set("lambda", args.lambda)
        .set("L", basis.dim())
        .set("components", basis.n_components())
        .write(dir)?;
    writeln!(
        out,
        "nodes={} L={} components={} residual={residual:.3e} orthonormality={ortho:.3e}",
        basis.n_nodes(),
        basis.dim(),
        basis.n_components()
    )
    .map_err(|e| Error::io("stdout", e))
}

pub fn execute(cli: &Cli, out: &mut dyn std::io::Write) -> Result<()> {
    match &cli.command {
        Command::GenGraph(a) => gen_graph(a, out),
        Command::Effdim(a) => effdim(a, out),
        Command::Simulate(a) => simulate(a, out),
        Command::Sweep(a) => sweep_cmd(a, out),
        Command::Ingest(a) => ingest_cmd(a, out),
        Command::Basis(a) => basis_cmd(a, out),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run_with_args<I, T>(
    args: I,
    out: &mut dyn std::io::Write,
    err: &mut dyn std::io::Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if matches!(e, Error::Parameter(_)) {
                1
            } else {
                2
            }
        }
    }
}
