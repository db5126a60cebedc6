//! `fullspec`: batch runner for spectra, property checks, graph generation,
//! refinement and the heterophily sweep.
//!
//! Exit codes: 0 success, 1 I/O or parse failure, 2 precondition failure,
//! 3 property violation.

mod config;
mod output;
mod source;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fullspec::graph::{laplacian, Graph, LaplacianKind};
use fullspec::heterophily::{heterophily_csv, heterophily_sweep, median_energy_by_h, HeterophilySweepConfig};
use fullspec::linalg::{default_spectral_tol, format_f64, Spectrum};
use fullspec::refinement::{local2_refine, wl1_refine, RefinementMode};
use serde_json::json;

use config::{Params, RunConfig};
use output::Sink;
use verify::Check;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub msg: String,
}

impl CliError {
    pub fn io(msg: impl Into<String>) -> Self {
        Self { code: 1, msg: msg.into() }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        Self { code: 1, msg: msg.into() }
    }
}

impl From<fullspec::Error> for CliError {
    fn from(e: fullspec::Error) -> Self {
        use fullspec::Error::*;
        let code = match e {
            Parse { .. } | Io(_) | Json(_) | Domain(_) | Dimension(_) => 1,
            Precondition(_) | Guard(_) | Numeric(_) | NeedsSpectrum => 2,
        };
        Self { code, msg: e.to_string() }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Lap {
    Comb,
    Norm,
}

impl From<Lap> for LaplacianKind {
    fn from(l: Lap) -> Self {
        match l {
            Lap::Comb => LaplacianKind::Combinatorial,
            Lap::Norm => LaplacianKind::SymmetricNormalized,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "fullspec", version, about = "Full-spectrum graph filter analyses")]
struct Cli {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Edge list, or graph JSON when the extension is `.json`.
    #[arg(long, global = true, conflicts_with = "generate")]
    graph: Option<PathBuf>,
    /// Generator spec such as `cycle:n=6`, `er:n=8,p=0.35` or `class:sizes=10+10,h=0.5,deg=4`.
    #[arg(long, global = true)]
    generate: Option<String>,
    /// Laplacian variant [default: comb; norm for heterophily-sweep].
    #[arg(long, global = true, value_enum)]
    laplacian: Option<Lap>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory; artifacts go to stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Single-threaded run with no timestamp header lines.
    #[arg(long, global = true)]
    deterministic: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Default)]
struct ParamFlags {
    /// Filter degree.
    #[arg(long = "K")]
    k: Option<usize>,
    /// Tensor rank.
    #[arg(long = "S")]
    s: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    /// Number of random graphs when no graph source is given.
    #[arg(long)]
    graphs: Option<usize>,
    /// Refinement rounds (overrides the round count of the statement).
    #[arg(long)]
    rounds: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    #[arg(long)]
    seeds: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    taus: Option<Vec<f64>>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long = "h-grid", value_delimiter = ',')]
    h_grid: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    deltas: Option<Vec<f64>>,
    #[arg(long = "avg-degree")]
    avg_degree: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
}

impl From<ParamFlags> for Params {
    fn from(f: ParamFlags) -> Self {
        Params {
            k: f.k,
            s: f.s,
            trials: f.trials,
            graphs: f.graphs,
            rounds: f.rounds,
            dims: f.dims,
            seeds: f.seeds,
            tol: f.tol,
            sizes: f.sizes,
            taus: f.taus,
            dim: f.dim,
            h_grid: f.h_grid,
            deltas: f.deltas,
            avg_degree: f.avg_degree,
            tau: f.tau,
            mode: None,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Laplacian eigenvalues (`spectrum.csv`) and a simplicity report (`spectrum.json`).
    Spectrum,
    /// Run one verification harness and write `verify-<id>.json`.
    Verify {
        #[arg(value_enum)]
        check: Check,
        #[command(flatten)]
        params: ParamFlags,
    },
    /// Near-diagonal energy of the optimal convolution across a homophily grid.
    HeterophilySweep {
        #[command(flatten)]
        params: ParamFlags,
    },
    /// Write the graph source as graph JSON.
    Generate,
    /// Color refinement on the graph source.
    Refine {
        #[arg(long, value_enum, default_value = "wl1")]
        mode: Mode,
        #[arg(long)]
        rounds: Option<usize>,
    },
    /// Run the command named in `--config`.
    Run,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Wl1,
    Local2,
}

struct Resolved {
    graph: Option<Graph>,
    laplacian: Option<LaplacianKind>,
    seed: u64,
    sink: Sink,
}

fn resolve(cli: &Cli, cfg: &RunConfig) -> Result<Resolved, CliError> {
    let seed = cli.seed.or(cfg.seed).unwrap_or(0);
    let graph = match (&cli.graph, &cli.generate) {
        (Some(p), _) => Some(source::load_graph(p)?),
        (None, Some(spec)) => Some(source::generate_graph(spec, seed)?),
        (None, None) => match (&cfg.graph, &cfg.generate) {
            (Some(p), _) => Some(source::load_graph(p)?),
            (None, Some(spec)) => Some(source::generate_graph(spec, seed)?),
            (None, None) => None,
        },
    };
    let laplacian = match (cli.laplacian, &cfg.laplacian) {
        (Some(l), _) => Some(l.into()),
        (None, Some(s)) => Some(s.parse::<LaplacianKind>()?),
        (None, None) => None,
    };
    let deterministic = cli.deterministic || cfg.deterministic;
    Ok(Resolved {
        graph,
        laplacian,
        seed,
        sink: Sink {
            dir: cli.out.clone().or_else(|| cfg.out.clone()),
            deterministic,
        },
    })
}

fn need_graph(r: &Resolved) -> Result<&Graph, CliError> {
    r.graph
        .as_ref()
        .ok_or_else(|| CliError::usage("this command needs --graph or --generate"))
}

fn cmd_spectrum(r: &Resolved) -> Result<u8, CliError> {
    let g = need_graph(r)?;
    let kind = r.laplacian.unwrap_or(LaplacianKind::Combinatorial);
    let s = Spectrum::of_laplacian(&laplacian(g, kind), kind)?;
    let mut csv = String::from("eigenvalue\n");
    for &l in s.eigenvalues() {
        csv += &format_f64(l);
        csv.push('\n');
    }
    r.sink.csv("spectrum.csv", &csv)?;
    let tol = default_spectral_tol(s.eigenvalues());
    let report = json!({
        "n": g.n(),
        "laplacian": kind,
        "simple": s.is_simple(tol),
        "gap_tol": tol,
        "min_gap": if g.n() > 1 { Some(s.min_gap()) } else { None },
        "components": g.component_count(),
    });
    r.sink.json("spectrum.json", &report)?;
    Ok(0)
}

fn cmd_verify(r: &Resolved, check: Check, params: Params) -> Result<u8, CliError> {
    let ctx = verify::Ctx {
        graph: r.graph.clone(),
        kind: r.laplacian.unwrap_or(LaplacianKind::Combinatorial),
        seed: r.seed,
        params,
        sink: &r.sink,
    };
    let report = verify::run(check, &ctx)?;
    let name = serde_json::to_value(check).expect("enum serializes");
    r.sink.json(&format!("verify-{}.json", name.as_str().unwrap_or("check")), &report)?;
    eprintln!("{:?}: {}", report.status, report.summary);
    Ok(report.status.exit_code())
}

fn cmd_sweep(r: &Resolved, p: Params) -> Result<u8, CliError> {
    let d = HeterophilySweepConfig::default();
    let cfg = HeterophilySweepConfig {
        class_sizes: p.sizes.unwrap_or(d.class_sizes),
        h_grid: p.h_grid.unwrap_or(d.h_grid),
        avg_degree: p.avg_degree.unwrap_or(d.avg_degree),
        dim: p.dim.unwrap_or(d.dim),
        tau: p.tau.unwrap_or(d.tau),
        deltas: p.deltas.unwrap_or(d.deltas),
        seeds: p.seeds.unwrap_or(d.seeds),
        laplacian: r.laplacian.unwrap_or(d.laplacian),
        seed: r.seed,
    };
    if cfg.deltas.is_empty() {
        return Err(CliError::usage("the delta grid is empty"));
    }
    if cfg.h_grid.is_empty() {
        return Err(CliError::usage("the h grid is empty"));
    }
    let rows = heterophily_sweep(&cfg)?;
    r.sink.csv("heterophily.csv", &heterophily_csv(&rows))?;
    let medians: Vec<_> = cfg
        .deltas
        .iter()
        .map(|&delta| json!({"delta": delta, "median_ratio": median_energy_by_h(&rows, &cfg.h_grid, delta)}))
        .collect();
    r.sink.json("heterophily-summary.json", &json!({"config": cfg, "medians": medians}))?;
    Ok(0)
}

fn cmd_generate(r: &Resolved) -> Result<u8, CliError> {
    r.sink.json("graph.json", &need_graph(r)?.to_json())?;
    Ok(0)
}

fn cmd_refine(r: &Resolved, mode: RefinementMode, rounds: Option<usize>) -> Result<u8, CliError> {
    let g = need_graph(r)?;
    let n = g.n();
    let run = match mode {
        RefinementMode::Wl1 => wl1_refine(g, g.labels(), rounds.unwrap_or(n + 1)),
        RefinementMode::Local2 => local2_refine(g, g.labels(), rounds.unwrap_or(n * n + 1)),
    };
    let report = json!({
        "mode": mode,
        "stable_round": run.stable_round(),
        "classes": run.class_count(),
        "coloring": run.export(),
    });
    r.sink.json("refine.json", &report)?;
    Ok(0)
}

fn parse_enum<T: ValueEnum>(what: &str, s: &str) -> Result<T, CliError> {
    T::from_str(s, true).map_err(|_| CliError::usage(format!("unknown {what} `{s}`")))
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if cli.deterministic || cfg.deterministic {
        rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build_global()
            .map_err(|e| CliError::io(e.to_string()))?;
    }
    let r = resolve(&cli, &cfg)?;
    let file_params = cfg.params.clone();
    match cli.command {
        Command::Spectrum => cmd_spectrum(&r),
        Command::Verify { check, params } => cmd_verify(&r, check, Params::from(params).over(file_params)),
        Command::HeterophilySweep { params } => cmd_sweep(&r, Params::from(params).over(file_params)),
        Command::Generate => cmd_generate(&r),
        Command::Refine { mode, rounds } => {
            let mode = match mode {
                Mode::Wl1 => RefinementMode::Wl1,
                Mode::Local2 => RefinementMode::Local2,
            };
            cmd_refine(&r, mode, rounds.or(file_params.rounds))
        }
        Command::Run => {
            let command = cfg
                .command
                .as_deref()
                .ok_or_else(|| CliError::usage("`run` needs a config with a `command` field"))?;
            match command {
                "spectrum" => cmd_spectrum(&r),
                "verify" => {
                    let id = cfg.check.as_deref().ok_or_else(|| CliError::usage("`verify` needs `check`"))?;
                    cmd_verify(&r, parse_enum("check", id)?, file_params)
                }
                "heterophily-sweep" => cmd_sweep(&r, file_params),
                "generate" => cmd_generate(&r),
                "refine" => {
                    let mode = match file_params.mode.as_deref().unwrap_or("wl1") {
                        "wl1" => RefinementMode::Wl1,
                        "local2" => RefinementMode::Local2,
                        other => return Err(CliError::usage(format!("unknown mode `{other}`"))),
                    };
                    cmd_refine(&r, mode, file_params.rounds)
                }
                other => Err(CliError::usage(format!("unknown command `{other}`"))),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}
