//! `instsel`: select representative benchmark suites and check how robust
//! algorithm comparisons on them are.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use instsel::pipeline::{self, HeuristicChoice, KRange, Outcome, PipelineConfig};
use instsel::similarity::Scaling;
use instsel::Error;

#[derive(Parser, Debug)]
#[command(name = "instsel", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the built-in harness and write features.csv and performance.csv.
    Extract(Overrides),
    /// Build similarity graphs and degree statistics for each threshold.
    BuildGraph(Overrides),
    /// Write selected suites for each heuristic, threshold and seed.
    Select(Overrides),
    /// Compare algorithms on the full set, per benchmark and on every
    /// selection; writes report.json and report.md.
    Compare(Overrides),
    /// Extract (or load), select and compare in one go.
    Pipeline(Overrides),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ScalingArg {
    Raw,
    Minmax,
}

/// Flags override values from `--config`.
#[derive(Args, Debug, Default)]
struct Overrides {
    /// TOML configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    features: Option<PathBuf>,
    #[arg(long)]
    performance: Option<PathBuf>,
    /// cluster, ds, mis or all.
    #[arg(long)]
    heuristic: Option<String>,
    /// Similarity threshold; repeat for several.
    #[arg(long = "threshold")]
    thresholds: Vec<f64>,
    /// Cluster counts to sweep, e.g. `2-30`.
    #[arg(long)]
    clusters_range: Option<String>,
    /// Re-cluster the largest cluster into this many sub-clusters.
    #[arg(long)]
    sub_split: Option<usize>,
    #[arg(long)]
    pool_fraction: Option<f64>,
    /// Repetitions of every stochastic selection (graph seeds and cluster
    /// pool draws).
    #[arg(long)]
    repetitions: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Treat statistical-precondition warnings as failures (exit code 4).
    #[arg(long)]
    strict: bool,
    /// Feature scaling before cosine similarity.
    #[arg(long, value_enum)]
    scaling: Option<ScalingArg>,
    /// Problem dimension for the harness.
    #[arg(long)]
    dimension: Option<usize>,
}

impl Overrides {
    fn resolve(&self) -> Result<PipelineConfig, Error> {
        let mut c = match &self.config {
            Some(p) => PipelineConfig::from_file(p)?,
            None => PipelineConfig::default(),
        };
        if let Some(f) = &self.features {
            c.features = Some(f.clone());
        }
        if let Some(p) = &self.performance {
            c.performance = Some(p.clone());
        }
        if let Some(h) = &self.heuristic {
            c.heuristics = HeuristicChoice::parse_list(h)?;
        }
        if !self.thresholds.is_empty() {
            c.thresholds = self.thresholds.clone();
        }
        if let Some(r) = &self.clusters_range {
            c.cluster.k_range = Some(r.parse::<KRange>()?);
        }
        if let Some(s) = self.sub_split {
            c.cluster.sub_split = Some(s);
        }
        if let Some(f) = self.pool_fraction {
            c.cluster.pool_fraction = f;
        }
        if let Some(r) = self.repetitions {
            c.graph_repetitions = r;
            c.cluster.repetitions = r;
        }
        if let Some(a) = self.alpha {
            c.alpha = a;
        }
        if let Some(s) = self.seed {
            c.seed = s;
        }
        if let Some(o) = &self.out {
            c.out = o.clone();
        }
        c.strict |= self.strict;
        if let Some(s) = self.scaling {
            c.scaling = match s {
                ScalingArg::Raw => Scaling::Raw,
                ScalingArg::Minmax => Scaling::MinMax,
            };
        }
        if let Some(d) = self.dimension {
            c.harness.dimension = d;
        }
        c.validate()?;
        Ok(c)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Constraint(_) => 2,
        Error::Precondition(_) => 4,
        _ => 3,
    }
}

fn configure_threads() -> Result<(), Error> {
    let Ok(v) = std::env::var("SELECTOR_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Config(format!("SELECTOR_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    configure_threads()?;
    let (overrides, cmd): (&Overrides, fn(&PipelineConfig) -> Result<Outcome, Error>) = match &cli.command {
        Command::Extract(o) => (o, pipeline::cmd_extract),
        Command::BuildGraph(o) => (o, pipeline::cmd_build_graph),
        Command::Select(o) => (o, pipeline::cmd_select),
        Command::Compare(o) => (o, pipeline::cmd_compare),
        Command::Pipeline(o) => (o, pipeline::cmd_pipeline),
    };
    let config = overrides.resolve()?;
    cmd(&config)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(outcome) => {
            for p in &outcome.written {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
