use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use horolab_core::experiment::{run, ExperimentConfig, Report, RunStatus};
use horolab_core::{Error, ErrorKind};

const EXIT_CONFIG: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_VIOLATION: u8 = 4;

#[derive(Parser)]
#[command(name = "horolab", version, about = "Horoball and augmented-space experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the depth-n horoball over a graph
    BuildHoroball(RunArgs),
    /// Glue horoballs onto a family of parabolic subgraphs
    Augment(RunArgs),
    /// Four-point hyperbolicity constant
    Delta(RunArgs),
    /// Convexity defect of a vertex subset
    Convexity(RunArgs),
    /// Bilipschitz cycle-embedding profile
    Shortcut(RunArgs),
    /// Distortion of displacement generating sets
    MilnorSvarc(RunArgs),
    /// Convexity of top-level parabolics as the depth grows
    ConvexifyExperiment(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment config (JSON)
    #[arg(long)]
    config: PathBuf,
    /// Output directory; defaults to the config's output.dir, then ./horolab-out
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the config seed
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
    /// Also write DOT renderings of every built graph
    #[arg(long)]
    export_dot: bool,
}

impl Command {
    fn parts(&self) -> (&'static str, &RunArgs) {
        match self {
            Command::BuildHoroball(a) => ("build-horoball", a),
            Command::Augment(a) => ("augment", a),
            Command::Delta(a) => ("delta", a),
            Command::Convexity(a) => ("convexity", a),
            Command::Shortcut(a) => ("shortcut", a),
            Command::MilnorSvarc(a) => ("milnor-svarc", a),
            Command::ConvexifyExperiment(a) => ("convexify-experiment", a),
        }
    }
}

fn exit_for(e: &Error) -> ExitCode {
    match e.kind() {
        ErrorKind::Resource => ExitCode::from(EXIT_RESOURCE),
        ErrorKind::Config | ErrorKind::Input => ExitCode::from(EXIT_CONFIG),
    }
}

fn load(kind: &str, args: &RunArgs) -> Result<ExperimentConfig, Error> {
    let mut config = ExperimentConfig::read(&args.config)?;
    if config.experiment.kind() != kind {
        return Err(Error::Config {
            path: "experiment.kind".into(),
            message: format!(
                "config describes a `{}` experiment but `{kind}` was requested",
                config.experiment.kind()
            ),
        });
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if args.export_dot {
        config.output.dot = true;
    }
    Ok(config)
}

fn summarize(report: &Report, dir: &std::path::Path) {
    eprintln!("{}: {:?}", report.experiment, report.status);
    if let Some(e) = &report.error {
        eprintln!("  error: {e}");
    }
    for c in &report.checks {
        eprintln!("  [{}] {}: {}", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail);
    }
    eprintln!("  report written to {}", dir.join("report.json").display());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = cli.command.parts();
    let config = match load(kind, args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_for(&e);
        }
    };
    if let Some(k) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("error: cannot configure {k} threads: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    }
    let report = run(&config);
    let dir = args
        .out
        .clone()
        .or_else(|| config.output.dir.clone())
        .unwrap_or_else(|| PathBuf::from("horolab-out"));
    if let Err(e) = report.write(&dir).with_context(|| format!("writing outputs to {}", dir.display())) {
        eprintln!("error: {e:#}");
        return ExitCode::FAILURE;
    }
    summarize(&report, &dir);
    match report.status {
        RunStatus::Ok => ExitCode::SUCCESS,
        RunStatus::InputError => ExitCode::from(EXIT_CONFIG),
        RunStatus::ResourceError => ExitCode::from(EXIT_RESOURCE),
        RunStatus::PropertyViolation => ExitCode::from(EXIT_VIOLATION),
    }
}
