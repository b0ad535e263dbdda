mod config;
mod plot;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use cutcouple_core::baselines::{gw_max_cut, local_search, naive_random_cut, GwConfig};
use cutcouple_core::coupling::{algorithm4_on, run_multi_qaoa, select_dense_subgraph};
use cutcouple_core::experiment::{
    bounds_files, fig3_csv, fig3_rows, fmt_float, mean_ratios, tg_growth_csv, tg_growth_rows,
    ExperimentConfig,
};
use cutcouple_core::graph::{brute_force_max_cut, cut_size, gen_erdos_renyi, parse_graph, Graph};
use cutcouple_core::guarantee::{greedy_full_cover, measure_guarantee};
use cutcouple_core::qaoa::{maxcut_cost_table, optimize, QaoaConfig};
use cutcouple_core::rng::{derive_seed, streams};

use config::FileConfig;

/// Largest graph for which `run` also reports the exact optimum.
const REPORT_OPTIMUM_LIMIT: usize = 24;

#[derive(Parser)]
#[command(name = "cutcouple", version, about = "QAOA coupling experiments for Max-Cut")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the threshold and device-sizing tables as CSV files.
    Bounds {
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Print an Erdős–Rényi graph in edge-list format.
    Gen {
        #[arg(long, default_value_t = 14)]
        n: usize,
        #[arg(long, default_value_t = 0.8)]
        prob: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve one instance with a single method.
    Run {
        #[arg(long, value_enum)]
        method: Method,
        /// Edge-list file; otherwise instance 0 of the generator settings.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Compare all methods over random instances.
    Fig3 {
        #[command(flatten)]
        common: Common,
    },
    /// Guarantee-set size along growing sampled universes.
    TgGrowth {
        /// Orderings per graph.
        #[arg(long)]
        perms: Option<usize>,
        /// Also write an SVG scatter plot here.
        #[arg(long)]
        plot: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Coupled,
    MultiQaoa,
    QaoaFull,
    Gw,
    Local,
    Naive,
    Brute,
}

#[derive(Args, Clone, Default)]
struct Common {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    n0: Option<usize>,
    #[arg(long)]
    prob: Option<f64>,
    #[arg(long)]
    instances: Option<usize>,
    #[arg(long)]
    beta: Option<f64>,
    /// QAOA layers; defaults to the qubit count.
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    shots: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, env = "CUTCOUPLE_THREADS")]
    threads: Option<usize>,
    /// Solve the fixed-s1 subproblems exactly instead of by QAOA.
    #[arg(long)]
    exact_inner: bool,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// key=value file; flags win over it.
    #[arg(long)]
    config: Option<PathBuf>,
}

struct Resolved {
    exp: ExperimentConfig,
    threads: Option<usize>,
    out: Option<PathBuf>,
}

fn resolve(common: &Common, perms: Option<usize>) -> Result<Resolved> {
    let file = match &common.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let d = ExperimentConfig::default();
    let q = QaoaConfig::default();
    macro_rules! pick {
        ($flag:expr, $key:literal, $default:expr) => {
            match $flag {
                Some(v) => v,
                None => file.get($key)?.unwrap_or($default),
            }
        };
    }
    let qaoa = QaoaConfig {
        p: match common.p {
            Some(p) => Some(p),
            None => file.get("p")?,
        },
        dt: pick!(common.dt, "dt", q.dt),
        max_iters: pick!(common.max_iters, "max-iters", q.max_iters),
        shots: pick!(common.shots, "shots", q.shots),
        ..q
    };
    let exp = ExperimentConfig {
        n: pick!(common.n, "n", d.n),
        n0: pick!(common.n0, "n0", d.n0),
        prob: pick!(common.prob, "prob", d.prob),
        instances: pick!(common.instances, "instances", d.instances),
        beta: pick!(common.beta, "beta", d.beta),
        perms: pick!(perms, "perms", d.perms),
        qaoa,
        exact_inner: common.exact_inner || file.get("exact-inner")?.unwrap_or(false),
        seed: pick!(common.seed, "seed", d.seed),
    };
    let threads = match common.threads {
        Some(t) => Some(t),
        None => file.get("threads")?,
    };
    if threads == Some(0) {
        bail!("--threads must be positive");
    }
    let out = match &common.out {
        Some(p) => Some(p.clone()),
        None => file.get::<String>("out")?.map(PathBuf::from),
    };
    Ok(Resolved { exp, threads, out })
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().context("building thread pool")?;
    Ok(pool.install(f))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_bounds(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for (name, contents) in bounds_files() {
        let path = dir.join(&name);
        std::fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_fig3(r: &Resolved) -> Result<()> {
    let rows = with_threads(r.threads, || fig3_rows(&r.exp))??;
    emit(r.out.as_deref(), &fig3_csv(&rows))?;
    for (method, mean) in mean_ratios(&rows) {
        eprintln!("{method:>15}  mean ratio {}", fmt_float(mean));
    }
    Ok(())
}

fn cmd_tg_growth(r: &Resolved, plot: Option<&Path>) -> Result<()> {
    let rows = with_threads(r.threads, || tg_growth_rows(&r.exp))??;
    emit(r.out.as_deref(), &tg_growth_csv(&rows))?;
    if let Some(path) = plot {
        std::fs::write(path, plot::growth_svg(&rows))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    // Report whether the curves grew monotonically; not required to.
    let per_curve = r.exp.n0 + 1;
    let monotone = rows
        .chunks(per_curve)
        .filter(|c| c.windows(2).all(|w| w[1].tg_size >= w[0].tg_size))
        .count();
    eprintln!(
        "{} curves, {} monotone in |U0|",
        rows.len() / per_curve.max(1),
        monotone
    );
    Ok(())
}

fn run_report(method: Method, g: &Graph, exp: &ExperimentConfig) -> Result<String> {
    let seed = exp.instance_seed(0);
    let n0 = exp.n0.min(g.n()).max(1);
    let mut report = String::new();
    let start = Instant::now();
    let value: f64 = match method {
        Method::Brute => brute_force_max_cut(g)?.value as f64,
        Method::Local => cut_size(g, &local_search(g))? as f64,
        Method::Naive => cut_size(g, &naive_random_cut(g, derive_seed(seed, streams::NAIVE)))? as f64,
        Method::Gw => {
            let out = gw_max_cut(g, &GwConfig::with_seed(derive_seed(seed, streams::GW)));
            writeln!(report, "gw_mean: {}", fmt_float(out.mean_cut))?;
            writeln!(report, "sdp_objective: {}", fmt_float(out.sdp_objective))?;
            out.cut as f64
        }
        Method::QaoaFull => {
            let cfg = exp.qaoa.with_seed(derive_seed(seed, streams::COUPLED));
            let res = optimize(&maxcut_cost_table(g)?, &cfg)?;
            writeln!(report, "best_sample: {}", res.best_sampled.1)?;
            writeln!(report, "iterations: {}", res.iterations)?;
            res.expectation
        }
        Method::Coupled => {
            let part = select_dense_subgraph(g, n0)?;
            let cfg = exp.qaoa.with_seed(derive_seed(seed, streams::COUPLED));
            let out = algorithm4_on(&part, &cfg, exp.exact_inner)?;
            writeln!(report, "coloring: {}", out.coloring)?;
            writeln!(report, "best_sample: {}", out.inner.sampled_cut)?;
            writeln!(report, "accepted_flips: {}", out.trace.len() - 1)?;
            out.value
        }
        Method::MultiQaoa => {
            let part = select_dense_subgraph(g, n0)?;
            let set = greedy_full_cover(&part, exp.beta)?;
            let measured = measure_guarantee(&part, &set)?;
            let cfg = exp.qaoa.with_seed(derive_seed(seed, streams::MULTI_QAOA));
            let out = run_multi_qaoa(&part, &set, &cfg, exp.exact_inner)?;
            writeln!(report, "guarantee_set_size: {}", set.len())?;
            writeln!(report, "measured_beta: {}", fmt_float(measured.worst_ratio))?;
            writeln!(report, "coloring: {}", out.coloring)?;
            writeln!(report, "best_sample: {}", out.sampled_cut)?;
            out.value
        }
    };
    let elapsed = start.elapsed().as_secs_f64();
    let name = method.to_possible_value().expect("no skipped variants");
    let mut head = format!(
        "method: {}\nn: {}\nedges: {}\nvalue: {}\n",
        name.get_name(),
        g.n(),
        g.num_edges(),
        fmt_float(value)
    );
    if g.n() <= REPORT_OPTIMUM_LIMIT {
        let opt = brute_force_max_cut(g)?.value;
        writeln!(head, "optimum: {opt}")?;
        let ratio = if opt == 0 { 1.0 } else { value / opt as f64 };
        writeln!(head, "ratio: {}", fmt_float(ratio))?;
    }
    head.push_str(&report);
    writeln!(head, "seed: {} (instance seed {seed})", exp.seed)?;
    writeln!(head, "wall_time_s: {elapsed:.3}")?;
    Ok(head)
}

fn cmd_run(method: Method, graph: Option<&Path>, r: &Resolved) -> Result<()> {
    let g = match graph {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            parse_graph(&text)?
        }
        None => {
            // A default n0 larger than a small --n means "all qubits".
            let exp = ExperimentConfig {
                n0: r.exp.n0.min(r.exp.n),
                ..r.exp.clone()
            };
            exp.validate()?;
            exp.instance_graph(0)
        }
    };
    let report = with_threads(r.threads, || run_report(method, &g, &r.exp))??;
    emit(r.out.as_deref(), &report)
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Bounds { out } => cmd_bounds(&out),
        Command::Gen { n, prob, seed, out } => {
            if !(0.0..=1.0).contains(&prob) {
                bail!("--prob must lie in [0, 1]");
            }
            emit(out.as_deref(), &gen_erdos_renyi(n, prob, seed).render())
        }
        Command::Run { method, graph, common } => {
            let r = resolve(&common, None)?;
            cmd_run(method, graph.as_deref(), &r)
        }
        Command::Fig3 { common } => cmd_fig3(&resolve(&common, None)?),
        Command::TgGrowth { perms, plot, common } => {
            let r = resolve(&common, perms)?;
            cmd_tg_growth(&r, plot.as_deref())
        }
    }
}
