//! `ghlab`: constructions, GH solvers, invariants and geodesic checks on
//! finite metric spaces from the command line.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on bad input.

mod commands;
mod experiment;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::VerificationFailed;

#[derive(Parser, Debug)]
#[command(name = "ghlab", version, about = "Finite metric spaces and Gromov-Hausdorff geodesics")]
struct Cli {
    /// Write the main artifact here instead of stdout (`.csv` writes a matrix for spaces).
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,
    /// Print machine-readable JSON where a text summary is the default.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a space and write it as JSON.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Gromov-Hausdorff distance between two space files.
    Gh {
        #[command(subcommand)]
        mode: GhMode,
    },
    /// Invariant report for one space, or a truncation-depth sweep of Cantor spaces.
    Analyze {
        file: Option<PathBuf>,
        /// Resolution for the uniform perfectness constant (default: the separation).
        #[arg(long)]
        t: Option<f64>,
        /// Emit a CSV sweep over Cantor depths instead of a report.
        #[arg(long)]
        sweep_depth: bool,
        #[arg(long, default_value_t = 0.5)]
        c: f64,
        /// Largest depth of the sweep.
        #[arg(long, default_value_t = 8)]
        depth: u32,
    },
    /// Build and verify geodesics.
    Geodesic {
        #[command(subcommand)]
        kind: GeodesicKind,
    },
    /// Run an experiment description file.
    Run { experiment: PathBuf },
    /// Run the acceptance suite.
    Reproduce {
        /// Directory for summary.json.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Break criterion N on purpose; the run should then fail.
        #[arg(long, value_name = "N")]
        inject_fault: Option<u8>,
    },
}

#[derive(Subcommand, Debug)]
enum ConstructKind {
    /// Binary strings of length `depth` with distance c^(first differing index).
    Cantor {
        #[arg(long)]
        c: f64,
        #[arg(long)]
        depth: u32,
    },
    /// Telescope over stage space files, stage i at distance 2^-i from the limit point.
    Telescope { stages: Vec<PathBuf> },
    /// Identifier space for a cube point.
    USpace {
        /// Cube coordinates, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<f64>,
        /// Number of stages (default: number of coordinates).
        #[arg(long)]
        depth: Option<usize>,
        /// Use scaled Cantor parts with this ratio instead of one-point parts.
        #[arg(long)]
        part_c: Option<f64>,
        #[arg(long, default_value_t = 2)]
        part_depth: u32,
    },
    /// Isosceles triple of a stage.
    Triple {
        #[arg(long)]
        stage: usize,
        #[arg(long)]
        q: f64,
    },
    /// Sup-product of two space files.
    Product { a: PathBuf, b: PathBuf },
    /// Multiply all distances by a factor.
    Scale {
        a: PathBuf,
        #[arg(long)]
        factor: f64,
    },
}

#[derive(Subcommand, Debug)]
enum GhMode {
    /// Exact value by branch and bound.
    Exact {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = ghlab::gh::DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Lower bound and seeded local-search upper bound.
    Bound {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = ghlab::gh::DEFAULT_RESTARTS)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
enum GeodesicKind {
    /// Straight geodesic through an optimal correspondence.
    Straight {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 11)]
        grid: usize,
        #[arg(long, default_value_t = ghlab::gh::DEFAULT_NODE_BUDGET)]
        budget: u64,
        /// CSV of (s, t, upper, lower, bound).
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Also write every sampled space into this directory.
        #[arg(long)]
        samples_dir: Option<PathBuf>,
    },
    /// Branching bunch from a JSON description.
    Bunch {
        spec: PathBuf,
        #[arg(long, default_value_t = 11)]
        s_grid: usize,
        #[arg(long, default_value_t = 8)]
        q_samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV of (q, s, t, upper, lower, bound).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn dispatch(cli: Cli) -> anyhow::Result<()> {
    let out = cli.output.as_deref();
    let artifact = match cli.command {
        Command::Construct { kind } => {
            let space = match kind {
                ConstructKind::Cantor { c, depth } => commands::construct_cantor(c, depth)?,
                ConstructKind::Telescope { stages } => commands::construct_telescope(&stages)?,
                ConstructKind::USpace {
                    q,
                    depth,
                    part_c,
                    part_depth,
                } => commands::construct_u_space(q, depth, part_c, part_depth)?,
                ConstructKind::Triple { stage, q } => commands::construct_triple(stage, q)?,
                ConstructKind::Product { a, b } => commands::construct_product(&a, &b)?,
                ConstructKind::Scale { a, factor } => commands::construct_scale(&a, factor)?,
            };
            return commands::write_space_artifact(&space, out);
        }
        Command::Gh { mode } => match mode {
            GhMode::Exact { a, b, budget } => commands::gh_exact_cmd(&a, &b, budget)?,
            GhMode::Bound { a, b, restarts, seed } => commands::gh_bound_cmd(&a, &b, restarts, seed)?,
        },
        Command::Analyze {
            file,
            t,
            sweep_depth,
            c,
            depth,
        } => {
            if sweep_depth {
                let csv = commands::sweep_depth(c, depth)?;
                return commands::write_text(out, &csv);
            }
            let file = file.ok_or_else(|| anyhow::anyhow!("analyze needs a space file or --sweep-depth"))?;
            commands::analyze_cmd(&file, t)?
        }
        Command::Geodesic { kind } => match kind {
            GeodesicKind::Straight {
                a,
                b,
                grid,
                budget,
                csv,
                samples_dir,
            } => {
                let artifact = commands::straight_cmd(&a, &b, grid, budget, samples_dir.as_deref())?;
                return artifact.deliver(out, csv.as_deref());
            }
            GeodesicKind::Bunch {
                spec,
                s_grid,
                q_samples,
                seed,
                csv,
            } => {
                let artifact = commands::bunch_cmd(&spec, s_grid, q_samples, seed)?;
                return artifact.deliver(out, csv.as_deref());
            }
        },
        Command::Run { experiment } => return experiment::run(&experiment),
        Command::Reproduce { out_dir, inject_fault } => {
            return commands::reproduce(out_dir.as_deref(), inject_fault, cli.json);
        }
    };
    artifact.deliver(out, None)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<VerificationFailed>().is_some() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
