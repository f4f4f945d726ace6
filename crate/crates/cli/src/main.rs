mod config;

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufReader, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::time::Duration;

use advisor_core::eval::{
    citation_pattern_cdf, feedback_simulation, intersection_matrix, mean, parameter_sweep, plan_trials,
    reviewer_experiment, run_trials, std_dev, tuned_params, venue_experiment, write_csv, ExperimentSpec,
    FeedbackMode, FeedbackSpec, Labeling, Method, ScenarioKind, ScenarioSpec, SourceFilter, SweepSpec,
};
use advisor_core::graph::{CitationGraph, PaperId};
use advisor_core::ingest::{build_graph, load_dir, read_citeseer, read_dblp, save_dir, synth_corpus, MatchConfig, SynthParams};
use advisor_core::rankers::{Algorithm, RankerParams};
use advisor_service::{AppState, ServiceConfig};
use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use config::Config;

#[derive(Parser, Debug)]
#[command(name = "advisor", version, about = "Direction-aware citation recommendation")]
struct Cli {
    /// TOML settings file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Corpus directory (meta.tsv + edges.tsv). Falls back to the config
    /// file, then to $ADVISOR_DATA_DIR.
    #[arg(long, global = true)]
    graph_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Merge a dblp.xml dump with a JSON-lines reference dump into a corpus.
    Ingest {
        #[arg(long)]
        dblp: PathBuf,
        #[arg(long)]
        refs: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a synthetic time-layered corpus.
    Synth {
        #[arg(long, default_value_t = 1000)]
        papers: usize,
        #[arg(long, default_value_t = 20.0)]
        mean_refs: f64,
        #[arg(long, default_value_t = 20)]
        communities: usize,
        #[arg(long, default_value_t = 0.85)]
        locality: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Hidden-citation recovery for one scenario and a set of rankers.
    Scenario {
        #[arg(long, default_value = "random")]
        kind: ScenarioKind,
        /// Comma-separated ranker names, or `all`.
        #[arg(long, default_value = "all", value_delimiter = ',')]
        algo: Vec<String>,
        /// Use each ranker's tuned parameters for the scenario.
        #[arg(long)]
        tuned: bool,
        #[arg(long, default_value_t = 0.1)]
        hide_fraction: f64,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        sources: SourceArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// DaRWR over a (d, lambda) grid: mean distance and year of the top list.
    Sweep {
        #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.25, 0.5, 0.75, 0.9])]
        dampings: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0])]
        lambdas: Vec<f64>,
        #[arg(long, default_value_t = 10)]
        top: usize,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        sources: SourceArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Share of hidden papers found by both rankers of every pair.
    Intersect {
        #[arg(long, default_value = "random")]
        kind: ScenarioKind,
        #[arg(long)]
        tuned: bool,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        sources: SourceArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Clustering coefficient and PageRank distributions of hidden and
    /// recommended papers.
    Patterns {
        #[arg(long, default_value = "random")]
        kind: ScenarioKind,
        #[arg(long, default_value = "all", value_delimiter = ',')]
        algo: Vec<String>,
        #[arg(long)]
        tuned: bool,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        sources: SourceArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Pages needed to reach a distant target under simulated feedback.
    FeedbackSim {
        #[arg(long, default_value_t = 5)]
        target_distance: u32,
        #[arg(long, default_value_t = 10)]
        page_size: usize,
        #[arg(long, default_value_t = 100)]
        max_pages: usize,
        /// Label papers within this distance of the target relevant instead
        /// of those on a shortest seed-target path.
        #[arg(long)]
        radius: Option<u32>,
        #[arg(long, default_value = "darwr")]
        algo: Algorithm,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        sources: SourceArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Recover the venue of held-out papers.
    VenueExp {
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        sources: SourceArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Recover the authors of held-out papers as reviewers.
    ReviewerExp {
        #[arg(long, default_value_t = 25)]
        k: usize,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        sources: SourceArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run the HTTP JSON service.
    Serve {
        #[arg(long)]
        bind: Option<String>,
        #[arg(long)]
        session_ttl_secs: Option<u64>,
        #[arg(long)]
        time_budget_secs: Option<u64>,
        #[arg(long)]
        cors_origin: Option<String>,
    },
}

#[derive(Args, Debug, Clone, Default)]
struct ParamArgs {
    /// Damping factor.
    #[arg(long)]
    d: Option<f64>,
    /// Direction preference: 0 favours older, 1 newer papers.
    #[arg(long)]
    lambda: Option<f64>,
    /// Katz decay.
    #[arg(long)]
    beta: Option<f64>,
    /// Katz path length.
    #[arg(long = "L")]
    max_len: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
}

impl ParamArgs {
    fn resolve(&self, base: RankerParams) -> Result<RankerParams> {
        let p = RankerParams {
            damping: self.d.unwrap_or(base.damping),
            lambda: self.lambda.unwrap_or(base.lambda),
            beta: self.beta.unwrap_or(base.beta),
            max_len: self.max_len.unwrap_or(base.max_len),
            epsilon: self.epsilon.unwrap_or(base.epsilon),
            max_iters: self.max_iters.unwrap_or(base.max_iters),
        };
        p.validate()?;
        Ok(p)
    }
}

#[derive(Args, Debug, Clone, Default)]
struct SourceArgs {
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    min_refs: Option<usize>,
    #[arg(long)]
    year_from: Option<u16>,
    #[arg(long)]
    year_to: Option<u16>,
}

struct Sources {
    trials: usize,
    seed: u64,
    filter: SourceFilter,
}

impl SourceArgs {
    fn resolve(&self, cfg: &Config) -> Sources {
        let base = SourceFilter::default();
        Sources {
            trials: self.trials.or(cfg.trials).unwrap_or(500),
            seed: self.seed.or(cfg.seed).unwrap_or(0),
            filter: SourceFilter {
                year_window: (
                    self.year_from.or(cfg.year_from).unwrap_or(base.year_window.0),
                    self.year_to.or(cfg.year_to).unwrap_or(base.year_window.1),
                ),
                min_refs: self.min_refs.or(cfg.min_refs).unwrap_or(base.min_refs),
            },
        }
    }
}

#[derive(Args, Debug, Clone, Default)]
struct OutArg {
    /// CSV output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl OutArg {
    fn write<T: Serialize>(&self, rows: &[T]) -> Result<()> {
        match &self.out {
            Some(p) => write_csv(File::create(p).with_context(|| format!("creating {}", p.display()))?, rows)?,
            None => write_csv(std::io::stdout().lock(), rows)?,
        }
        Ok(())
    }
}

struct Ctx {
    cfg: Config,
    graph_dir: Option<PathBuf>,
}

impl Ctx {
    fn graph(&self) -> Result<CitationGraph> {
        let dir = self
            .graph_dir
            .clone()
            .or_else(|| self.cfg.graph_dir.clone())
            .or_else(|| std::env::var_os("ADVISOR_DATA_DIR").map(PathBuf::from))
            .context("no corpus given: use --graph-dir, `graph_dir` in the config file, or ADVISOR_DATA_DIR")?;
        load_dir(&dir).with_context(|| format!("loading corpus from {}", dir.display()))
    }
}

fn algorithms(names: &[String]) -> Result<Vec<Algorithm>> {
    if names.iter().any(|n| n.eq_ignore_ascii_case("all")) {
        return Ok(Algorithm::ALL.to_vec());
    }
    names.iter().map(|n| n.parse::<Algorithm>().map_err(Into::into)).collect()
}

fn scenario_spec(kind: ScenarioKind, s: &Sources, hide_fraction: f64) -> ScenarioSpec {
    ScenarioSpec {
        kind,
        trials: s.trials,
        min_refs: s.filter.min_refs,
        year_window: s.filter.year_window,
        hide_fraction,
        seed: s.seed,
    }
}

fn params_for(kind: ScenarioKind, alg: Algorithm, tuned: bool, given: RankerParams) -> RankerParams {
    if tuned {
        tuned_params(kind, alg)
    } else {
        given
    }
}

#[derive(Serialize)]
struct ScenarioRow {
    kind: String,
    algorithm: String,
    d: f64,
    lambda: f64,
    beta: f64,
    #[serde(rename = "L")]
    max_len: usize,
    trials: usize,
    skipped: usize,
    mean_accuracy: f64,
    std_accuracy: f64,
    random_baseline: f64,
}

#[derive(Serialize)]
struct MatrixRow {
    row: String,
    column: String,
    shared_accuracy: f64,
}

#[derive(Serialize)]
struct FeedbackRow {
    mode: String,
    trials: usize,
    skipped: usize,
    mean_pages: f64,
    reduction: f64,
}

fn main() -> Result<()> {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()))
        .with_writer(std::io::stderr)
        .init();
    let cli = Cli::parse();
    let cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let base = cfg.params();
    let ctx = Ctx { graph_dir: cli.graph_dir.clone(), cfg };

    match cli.command {
        Command::Ingest { dblp, refs, out } => ingest(&dblp, &refs, &out),
        Command::Synth { papers, mean_refs, communities, locality, seed, out } => {
            let p = SynthParams { papers, mean_refs, communities, locality, seed, ..SynthParams::default() };
            let g = synth_corpus(&p)?;
            save_dir(&g, &out)?;
            println!("{}", serde_json::json!({ "papers": g.paper_count(), "edges": g.edge_count() }));
            Ok(())
        }
        Command::Scenario { kind, algo, tuned, hide_fraction, params, sources, out } => {
            let g = ctx.graph()?;
            let given = params.resolve(base)?;
            let spec = scenario_spec(kind, &sources.resolve(&ctx.cfg), hide_fraction);
            let plans = plan_trials(&g, &spec)?;
            let baseline = mean(&plans.iter().map(|p| p.random_baseline()).collect::<Vec<_>>());
            let mut rows = Vec::new();
            for alg in algorithms(&algo)? {
                let p = params_for(kind, alg, tuned, given);
                let r = run_trials(&g, kind, &plans, alg, &p)?;
                let acc: Vec<f64> = r.trials.iter().map(|t| t.accuracy).collect();
                rows.push(ScenarioRow {
                    kind: kind.to_string(),
                    algorithm: alg.to_string(),
                    d: p.damping,
                    lambda: p.lambda,
                    beta: p.beta,
                    max_len: p.max_len,
                    trials: plans.len(),
                    skipped: spec.trials - plans.len(),
                    mean_accuracy: r.mean_accuracy,
                    std_accuracy: std_dev(&acc),
                    random_baseline: baseline,
                });
            }
            out.write(&rows)
        }
        Command::Sweep { dampings, lambdas, top, params, sources, out } => {
            let g = ctx.graph()?;
            let s = sources.resolve(&ctx.cfg);
            let spec = SweepSpec {
                dampings,
                lambdas,
                sources: s.trials,
                filter: s.filter,
                top,
                seed: s.seed,
                params: params.resolve(base)?,
            };
            out.write(&parameter_sweep(&g, &spec)?)
        }
        Command::Intersect { kind, tuned, params, sources, out } => {
            let g = ctx.graph()?;
            let given = params.resolve(base)?;
            let spec = scenario_spec(kind, &sources.resolve(&ctx.cfg), 0.1);
            let plans = plan_trials(&g, &spec)?;
            let results = Algorithm::ALL
                .iter()
                .map(|&a| run_trials(&g, kind, &plans, a, &params_for(kind, a, tuned, given)))
                .collect::<advisor_core::Result<Vec<_>>>()?;
            let m = intersection_matrix(&plans, &results)?;
            let mut rows = Vec::new();
            for (i, a) in m.names.iter().enumerate() {
                for (j, b) in m.names.iter().enumerate() {
                    rows.push(MatrixRow { row: a.clone(), column: b.clone(), shared_accuracy: m.cells[i][j] });
                }
            }
            out.write(&rows)
        }
        Command::Patterns { kind, algo, tuned, params, sources, out } => {
            let g = ctx.graph()?;
            let given = params.resolve(base)?;
            let spec = scenario_spec(kind, &sources.resolve(&ctx.cfg), 0.1);
            let plans = plan_trials(&g, &spec)?;
            let hidden: BTreeSet<PaperId> = plans.iter().flat_map(|p| p.targets.iter().copied()).collect();
            let mut lists = vec![("hidden".to_string(), hidden.into_iter().collect::<Vec<_>>())];
            for alg in algorithms(&algo)? {
                let r = run_trials(&g, kind, &plans, alg, &params_for(kind, alg, tuned, given))?;
                let top: BTreeSet<PaperId> = r.trials.iter().flat_map(|t| t.top.iter().copied()).collect();
                lists.push((alg.to_string(), top.into_iter().collect()));
            }
            out.write(&citation_pattern_cdf(&g.full_view(), &lists, &given)?)
        }
        Command::FeedbackSim { target_distance, page_size, max_pages, radius, algo, params, sources, out } => {
            let g = ctx.graph()?;
            let s = sources.resolve(&ctx.cfg);
            let spec = FeedbackSpec {
                trials: s.trials,
                filter: s.filter,
                seed: s.seed,
                target_distance,
                labeling: radius.map_or(Labeling::ShortestPath, Labeling::Radius),
                page_size,
                max_pages,
                algorithm: algo,
                params: params.resolve(base)?,
            };
            let r = feedback_simulation(&g, &spec)?;
            let rows: Vec<FeedbackRow> = FeedbackMode::ALL
                .iter()
                .map(|&m| FeedbackRow {
                    mode: m.to_string(),
                    trials: r.trials.len(),
                    skipped: r.skipped,
                    mean_pages: r.mean_pages(m),
                    reduction: r.reduction(m),
                })
                .collect();
            out.write(&rows)
        }
        Command::VenueExp { k, params, sources, out } => {
            let g = ctx.graph()?;
            let (spec, methods) = experiment(&ctx.cfg, &sources, params.resolve(base)?);
            out.write(&venue_experiment(&g, &ExperimentSpec { venue_k: k, ..spec }, &methods)?)
        }
        Command::ReviewerExp { k, params, sources, out } => {
            let g = ctx.graph()?;
            let (spec, methods) = experiment(&ctx.cfg, &sources, params.resolve(base)?);
            out.write(&reviewer_experiment(&g, &ExperimentSpec { expert_k: k, ..spec }, &methods)?)
        }
        Command::Serve { bind, session_ttl_secs, time_budget_secs, cors_origin } => {
            let g = ctx.graph()?;
            let defaults = ServiceConfig::default();
            let config = ServiceConfig {
                session_ttl: session_ttl_secs
                    .or(ctx.cfg.session_ttl_secs)
                    .map_or(defaults.session_ttl, Duration::from_secs),
                time_budget: time_budget_secs
                    .or(ctx.cfg.time_budget_secs)
                    .map_or(defaults.time_budget, Duration::from_secs),
                cors_origin: cors_origin.or(ctx.cfg.cors_origin.clone()),
                ..defaults
            };
            let addr: SocketAddr = bind
                .or(ctx.cfg.bind.clone())
                .unwrap_or_else(|| "127.0.0.1:8080".into())
                .parse()
                .context("invalid bind address")?;
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(advisor_service::serve(AppState::new(g, config), addr))?;
            Ok(())
        }
    }
}

fn experiment(cfg: &Config, sources: &SourceArgs, params: RankerParams) -> (ExperimentSpec, Vec<Method>) {
    let s = sources.resolve(cfg);
    let spec = ExperimentSpec { trials: s.trials, filter: s.filter, seed: s.seed, ..ExperimentSpec::default() };
    let methods = vec![
        Method::Ranker(Algorithm::DaRwr, params),
        Method::Ranker(Algorithm::PaperRank, params),
        Method::Ranker(Algorithm::DaKatz, params),
        Method::Baseline1,
        Method::Baseline2,
    ];
    (spec, methods)
}

fn ingest(dblp: &Path, refs: &Path, out: &Path) -> Result<()> {
    let open = |p: &Path| File::open(p).map(BufReader::new).with_context(|| format!("opening {}", p.display()));
    let meta = read_dblp(open(dblp)?)?;
    let records = read_citeseer(open(refs)?)?;
    let (g, report) = build_graph(&meta, &records, MatchConfig::default());
    if g.paper_count() == 0 {
        bail!("no papers found in {}", dblp.display());
    }
    save_dir(&g, out)?;
    let mut stdout = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut stdout, &report)?;
    writeln!(stdout)?;
    Ok(())
}
