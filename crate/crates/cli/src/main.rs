use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use flagpoly::surgery::Strategy;
use flagpoly_cli::commands::{self, Format};
use flagpoly_cli::models::Cache;
use flagpoly_cli::verify::{self, Claim, Family, Options};
use flagpoly_cli::{render, Failure};

/// Flag-polytope workbench: generalized associahedra, nestohedra, f/h/γ
/// vectors and shaving sequences.
///
/// Exit codes: 0 pass, 2 input error, 3 structural violation,
/// 4 budget exhausted, 5 verification failure.
#[derive(Parser)]
#[command(name = "flagpoly", version)]
struct Cli {
    /// Memo cache directory for canonical forms and f-vectors.
    #[arg(long, global = true, env = "FLAGPOLY_CACHE")]
    cache: Option<PathBuf>,
    /// Ignore the cache entirely.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Worker thread cap (the kernels currently run on one thread).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the facet compatibility graph of a model.
    Model {
        /// A, D, Cy (rank argument), nestohedron (building-set file) or spec (e.g. prism:D3).
        family: String,
        arg: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// f-, h- and γ-vectors of a graph or building-set file.
    Vectors {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite over a rank range and print a JSON report.
    Verify {
        #[arg(value_enum)]
        claim: ClaimArg,
        /// Model families (repeatable); defaults depend on the claim.
        #[arg(long, value_enum)]
        family: Vec<FamilyArg>,
        #[arg(long)]
        min_rank: Option<usize>,
        #[arg(long)]
        max_rank: Option<usize>,
        #[arg(long)]
        budget_seconds: Option<f64>,
        /// Include wall-clock timings (makes the report non-reproducible).
        #[arg(long)]
        timings: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cut off the codimension-2 face F_i ∩ F_j of a graph.
    Shave {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, num_args = 2, value_names = ["I", "J"])]
        edge: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a shaving sequence between two models and certify it.
    FindSequence {
        /// Model spec: A<n>, D<n>, Cy<n>, cube<n>, prism:<spec> or a file.
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        max_steps: Option<usize>,
        #[arg(long, value_enum)]
        strategy: Option<StrategyArg>,
        #[arg(long)]
        budget_seconds: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClaimArg {
    Gal,
    Prop1,
    Prop2,
    Thm2,
    DehnSommerville,
    NestohedronCross,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "D", alias = "d")]
    D,
    #[value(name = "Cy", alias = "cy")]
    Cy,
    Nestohedron,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Guided,
    Full,
}

fn budget(seconds: Option<f64>) -> Result<Option<Duration>, Failure> {
    seconds
        .map(|s| Duration::try_from_secs_f64(s).map_err(|e| anyhow::anyhow!("--budget-seconds: {e}").into()))
        .transpose()
}

fn emit(text: &str, out: Option<PathBuf>) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cache = match (&cli.cache, cli.no_cache) {
        (Some(dir), false) => Cache::new(Some(dir.clone()))?,
        _ => Cache::disabled(),
    };
    match cli.command {
        Command::Model { family, arg, out } => emit(&commands::model(&family, &arg)?, out),
        Command::Vectors { file, format, out } => {
            let format = match format {
                FormatArg::Csv => Format::Csv,
                FormatArg::Json => Format::Json,
            };
            emit(&commands::vectors(&file, format, &cache)?, out)
        }
        Command::Verify { claim, family, min_rank, max_rank, budget_seconds, timings, out } => {
            let claim = match claim {
                ClaimArg::Gal => Claim::Gal,
                ClaimArg::Prop1 => Claim::Prop1,
                ClaimArg::Prop2 => Claim::Prop2,
                ClaimArg::Thm2 => Claim::Thm2,
                ClaimArg::DehnSommerville => Claim::DehnSommerville,
                ClaimArg::NestohedronCross => Claim::NestohedronCross,
            };
            let families = family
                .into_iter()
                .map(|f| match f {
                    FamilyArg::A => Family::A,
                    FamilyArg::D => Family::D,
                    FamilyArg::Cy => Family::Cy,
                    FamilyArg::Nestohedron => Family::Nestohedron,
                })
                .collect();
            let opts = Options { families, min_rank, max_rank, budget: budget(budget_seconds)?, timings };
            let (report, families) = verify::run(claim, &opts, &cache)?;
            // the report is written even when the claim fails
            emit(&render(&report.to_json(&opts, &families)), out)?;
            report.outcome()
        }
        Command::Shave { graph, edge, out } => emit(&commands::shave_file(&graph, edge[0], edge[1])?, out),
        Command::FindSequence { source, target, max_steps, strategy, budget_seconds, out } => {
            let strategy = strategy.map(|s| match s {
                StrategyArg::Guided => Strategy::Guided,
                StrategyArg::Full => Strategy::Full,
            });
            let text = commands::find_sequence(&source, &target, max_steps, strategy, budget(budget_seconds)?)?;
            emit(&text, out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads == 0 {
        eprintln!("error: --threads must be at least 1");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{f}");
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
