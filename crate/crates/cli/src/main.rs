//! `dyson-rc`: sampling, estimation and renormalization experiments for
//! long-range percolation on the integer line.

mod commands;
mod config;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use commands::Artifact;
use config::Opts;
use output::{emit, Format};

#[derive(Parser, Debug)]
#[command(
    name = "dyson-rc",
    version,
    about = "Long-range percolation experiments"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
    /// Flat `key = value` file; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Draw one graph (bernoulli, fk or site-bond) and write it as text.
    Sample,
    /// Cluster statistics of a graph file.
    Clusters,
    /// Frequency of a large cluster in [0, N) per size.
    Lemma2,
    /// Proxy rates on a beta grid and the crossing estimate.
    Betac,
    /// Coarse graph over good blocks.
    Coarse,
    /// Scale schedule c_n, M_n, d_n, eps_n.
    Schedule,
    /// One induction step at desk scale.
    Induction,
    /// Stochastic domination checks from a corpus file.
    Dominate,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Sample => "sample",
            Command::Clusters => "clusters",
            Command::Lemma2 => "lemma2",
            Command::Betac => "betac",
            Command::Coarse => "coarse",
            Command::Schedule => "schedule",
            Command::Induction => "induction",
            Command::Dominate => "dominate",
        }
    }

    fn run(self, o: &Opts) -> Result<Artifact> {
        match self {
            Command::Sample => commands::sample(o),
            Command::Clusters => commands::clusters(o),
            Command::Lemma2 => commands::lemma2(o),
            Command::Betac => commands::betac(o),
            Command::Coarse => commands::coarse(o),
            Command::Schedule => commands::schedule(o),
            Command::Induction => commands::induction(o),
            Command::Dominate => commands::dominate(o),
        }
    }
}

fn threads(o: &Opts) -> Result<usize> {
    if let Some(t) = o.threads {
        return Ok(t);
    }
    match std::env::var("DYSON_RC_THREADS") {
        Ok(s) => s
            .trim()
            .parse()
            .with_context(|| format!("DYSON_RC_THREADS: cannot parse {s:?}")),
        Err(_) => Ok(0),
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut opts = cli.opts;
    if let Some(path) = &cli.config {
        opts.merge_file(path)?;
    }
    let format: Format = opts.format.as_deref().unwrap_or("csv").parse()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads(&opts)?)
        .build()?;
    let artifact = pool.install(|| cli.cmd.run(&opts))?;
    let text = match artifact {
        Artifact::Graph(g) => g.to_text(),
        Artifact::Table { table, streams } => {
            let hash = opts.config_hash(cli.cmd.name());
            table
                .with_provenance(opts.seed.unwrap_or(0), &streams, &hash)
                .render(format)
        }
    };
    emit(opts.out.as_deref().map(Path::new), &text)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
