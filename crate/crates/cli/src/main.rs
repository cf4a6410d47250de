use std::path::{Path, PathBuf};
use std::process::ExitCode;

use aaqaoa::automorphism::{
    brute_force_automorphisms, edge_classes, edge_equivalence_classes, GeneratorSet,
};
use aaqaoa::graph::{
    balanced_tree, full_rary_tree, parse_edge_list, path_graph, serialize_edge_list, star_graph,
    Graph,
};
use aaqaoa::hamiltonian::{
    full_hamiltonian, reduced_hamiltonian, reduction_percentage, Convention,
};
use aaqaoa::harness::{
    emit_report, run_bench, run_instance, BenchSuite, GraphSpec, RatioEstimator, ReportFormat,
    RunConfig, RunMode, DEFAULT_SHOTS,
};
use aaqaoa::optimizer::EvaluationMode;
use aaqaoa::rcc::{combined_coverage, minimal_depth};
use aaqaoa::{Error, Result};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "aaqaoa",
    version,
    about = "Automorphism-assisted QAOA for MaxCut on trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Binary,
    Balanced,
    Star,
    Path,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated graph as an edge list.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        nodes: Option<usize>,
        /// Children per vertex (binary: defaults to 2; balanced: required).
        #[arg(long)]
        branching: Option<usize>,
        #[arg(long)]
        height: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the edge equivalence classes as JSON.
    Orbits {
        #[arg(long)]
        graph: PathBuf,
        /// Cross-check against brute-force group enumeration (n <= 10).
        #[arg(long)]
        oracle: bool,
    },
    /// Write the reduced Ising Hamiltonian as JSON.
    Reduce {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value = "maxcut")]
        convention: Convention,
        #[arg(long)]
        out: PathBuf,
    },
    /// Reverse-causal-cone coverage of the class representatives.
    Rcc {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, conflicts_with = "minimal")]
        p: Option<usize>,
        #[arg(long)]
        minimal: bool,
        #[arg(long)]
        json: bool,
    },
    /// Optimize and sample one instance.
    Run {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value = "both")]
        mode: RunMode,
        #[arg(long, default_value_t = 1)]
        p: usize,
        #[arg(long, default_value_t = DEFAULT_SHOTS)]
        shots: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "maxcut")]
        convention: Convention,
        #[arg(long)]
        max_evals: Option<usize>,
        #[arg(long, default_value = "lightcone")]
        evaluation: EvaluationMode,
        /// best | most-likely
        #[arg(long, default_value = "best")]
        estimator: RatioEstimator,
        /// Fill the wall-time columns (the report is then not reproducible).
        #[arg(long)]
        timings: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: ReportFormat,
        /// Also print the full record as JSON on stdout.
        #[arg(long)]
        json: bool,
    },
    /// Run a predefined suite and write its report.
    Bench {
        #[arg(long)]
        suite: BenchSuite,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "csv")]
        format: ReportFormat,
        #[arg(long)]
        timings: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn load(path: &Path) -> Result<Graph> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_edge_list(&text)
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn required(value: Option<usize>, flag: &str) -> Result<usize> {
    value.ok_or_else(|| Error::InvalidArgument(format!("--{flag} is required for this kind")))
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Gen {
            kind,
            nodes,
            branching,
            height,
            out,
        } => {
            let g = match kind {
                Kind::Binary => full_rary_tree(branching.unwrap_or(2), required(nodes, "nodes")?)?,
                Kind::Balanced => balanced_tree(
                    required(branching, "branching")?,
                    required(height, "height")?,
                )?,
                Kind::Star => star_graph(required(nodes, "nodes")?)?,
                Kind::Path => path_graph(required(nodes, "nodes")?)?,
            };
            write(&out, &serialize_edge_list(&g))
        }
        Command::Orbits { graph, oracle } => {
            let g = load(&graph)?;
            let classes = edge_classes(&g)?;
            if oracle {
                let group = GeneratorSet::new(g.n(), brute_force_automorphisms(&g)?)?;
                let expected = edge_equivalence_classes(&g, &group)?;
                if expected != classes {
                    return Err(Error::Contract(
                        "generator search and brute-force enumeration disagree".into(),
                    ));
                }
                eprintln!("oracle: {} classes confirmed by brute force", classes.len());
            }
            println!("{}", classes.to_json());
            Ok(())
        }
        Command::Reduce {
            graph,
            convention,
            out,
        } => {
            let g = load(&graph)?;
            let full = full_hamiltonian(&g, convention);
            let red = reduced_hamiltonian(&g, &edge_classes(&g)?, convention)?;
            write(&out, &red.to_json())?;
            println!(
                "terms: reduced {} full {} ({:.2}% fewer)",
                red.term_count().total,
                full.term_count().total,
                reduction_percentage(&full, &red)?
            );
            Ok(())
        }
        Command::Rcc {
            graph,
            p,
            minimal,
            json,
        } => {
            let g = load(&graph)?;
            let reps = edge_classes(&g)?.representatives();
            if minimal {
                println!("{}", minimal_depth(&g, &reps)?);
                return Ok(());
            }
            let report = combined_coverage(&g, &reps, p.unwrap_or(1))?;
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.render_table());
            }
            Ok(())
        }
        Command::Run {
            graph,
            mode,
            p,
            shots,
            seed,
            convention,
            max_evals,
            evaluation,
            estimator,
            timings,
            out,
            format,
            json,
        } => {
            let mut cfg = RunConfig::new(GraphSpec::File(graph));
            cfg.mode = mode;
            cfg.layers = p;
            cfg.shots = shots;
            cfg.seed = seed;
            cfg.convention = convention;
            cfg.evaluation = evaluation;
            cfg.estimator = estimator;
            cfg.record_timings = timings;
            if let Some(e) = max_evals {
                cfg.optimizer.max_evals = e;
            }
            let record = run_instance(&cfg)?;
            let report = emit_report(std::slice::from_ref(&record), format)?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&record).expect("record serializes")
                );
            }
            match out {
                Some(path) => write(&path, &report),
                None => {
                    print!("{report}");
                    Ok(())
                }
            }
        }
        Command::Bench {
            suite,
            out,
            seed,
            format,
            timings,
        } => {
            let mut base = RunConfig::new(GraphSpec::Path(2));
            base.seed = seed;
            base.record_timings = timings;
            let records = run_bench(suite, &base)?;
            write(&out, &emit_report(&records, format)?)
        }
    }
}
