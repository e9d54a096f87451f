use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use logstar_delaunay::analysis::{
    binomial, brute_force_delaunay, census, check_triangulation, count_strict_violations,
    created_bound, created_edges_bound, estimate_stages, expected_conflict_size, expected_y,
    factorial, x_bound, CensusMethod, Estimate, Orders, TriangulationCheck, EXHAUSTIVE_ORDERS,
    EXHAUSTIVE_SUBSETS,
};
use logstar_delaunay::io::{
    generate, read_edges, read_points, read_triangles, write_edges, write_json, write_points,
    write_triangles, BuildReport, PointKind,
};
use logstar_delaunay::runner::{bench_cell, build, emst, write_bench_csv, Algorithm};
use logstar_delaunay::spanning::{SpanningSubgraph, EMST_DEGREE_BOUND};
use logstar_delaunay::{Point, Result, Triangulation};

#[derive(Parser)]
#[command(
    name = "logstar",
    version,
    about = "Randomized incremental Delaunay triangulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated point set.
    Generate {
        #[arg(long, default_value = "uniform-square")]
        kind: PointKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Defaults to stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Triangulate a points file.
    Build(BuildArgs),
    /// Write the Euclidean minimum spanning tree as an edge file.
    Emst {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Counter sweep over generated inputs, as CSV.
    Bench {
        /// Comma-separated algorithms.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "influence,accelerated-emst"
        )]
        algorithm: Vec<Algorithm>,
        #[arg(long, value_delimiter = ',', default_value = "4096,16384,65536")]
        n_sweep: Vec<usize>,
        /// Seeds per cell.
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value = "uniform-square")]
        kind: PointKind,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check a triangle file against a points file.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        triangles: PathBuf,
        /// Also compare with the brute-force triangulation up to this size.
        #[arg(long, default_value_t = 64)]
        oracle_limit: usize,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Estimate expected conflict and creation counts against their bounds.
    Lemmas {
        #[arg(long)]
        input: PathBuf,
        /// Stages to observe; defaults to n/4, n/2 and 3n/4.
        #[arg(long, value_delimiter = ',')]
        stages: Vec<usize>,
        /// Sampled orders; all orders are enumerated when n! <= 5040.
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Monte Carlo samples when a census is too large to enumerate.
        #[arg(long, default_value_t = 100_000)]
        census_samples: usize,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long, default_value = "influence")]
    algorithm: Algorithm,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    input: PathBuf,
    /// Edge file of a spanning subgraph made of Delaunay edges.
    #[arg(long)]
    subgraph: Option<PathBuf>,
    /// Degree bound checked on the subgraph file.
    #[arg(long, default_value_t = EMST_DEGREE_BOUND)]
    max_degree: usize,
    /// Triangle file; defaults to stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// JSON report with hull and counters.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Record wall time per phase in the report.
    #[arg(long)]
    timing: bool,
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load_points(path: &Path) -> Result<Vec<Point>> {
    read_points(BufReader::new(File::open(path)?))
}

fn run_build(args: BuildArgs) -> Result<()> {
    let points = load_points(&args.input)?;
    let t = match &args.subgraph {
        Some(p) => {
            let edges = read_edges(BufReader::new(File::open(p)?))?;
            Some(SpanningSubgraph::from_edges(
                points.len(),
                &edges,
                args.max_degree,
            )?)
        }
        None => None,
    };
    let (tri, stats) = build(&points, args.algorithm, args.seed, t.as_ref(), args.timing)?;
    let mut w = output(args.output.as_deref())?;
    write_triangles(&mut w, &tri)?;
    w.flush()?;
    if let Some(path) = &args.report {
        let r = BuildReport {
            algorithm: args.algorithm.to_string(),
            n: points.len(),
            seed: args.seed,
            triangles: tri.triangles.len(),
            hull: tri.hull,
            stats,
        };
        write_json(output(Some(path))?, &r)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct VerifyReport {
    n: usize,
    check: TriangulationCheck,
    strict_violations: Option<usize>,
    matches_oracle: Option<bool>,
    valid: bool,
}

fn run_verify(
    input: &Path,
    triangles: &Path,
    oracle_limit: usize,
    report: Option<&Path>,
) -> Result<bool> {
    let points = load_points(input)?;
    let tris = read_triangles(BufReader::new(File::open(triangles)?))?;
    let hull = logstar_delaunay::analysis::convex_hull(&points);
    let tri = Triangulation::from_parts(tris, hull);
    let check = check_triangulation(&points, &tri);
    let small = points.len() <= oracle_limit;
    let strict_violations = small.then(|| count_strict_violations(&points, &tri));
    // With cocircular points the oracle picks one of several valid
    // triangulations, so a mismatch alone is not a failure.
    let matches_oracle = if small {
        Some(brute_force_delaunay(&points)? == tri)
    } else {
        None
    };
    let valid = check.is_valid() && strict_violations.unwrap_or(0) == 0;
    let r = VerifyReport {
        n: points.len(),
        check,
        strict_violations,
        matches_oracle,
        valid,
    };
    write_json(output(report)?, &r)?;
    Ok(valid)
}

#[derive(Serialize)]
struct Comparison {
    name: String,
    observed: Estimate,
    predicted: f64,
    /// `equal` within 3 standard errors, or `at-most` up to +3 standard errors.
    relation: &'static str,
    holds: bool,
}

#[derive(Serialize)]
struct LemmaReport {
    n: usize,
    orders: Orders,
    comparisons: Vec<Comparison>,
}

fn census_method(n: usize, r: usize, samples: usize, seed: u64) -> CensusMethod {
    if binomial(n, r) <= EXHAUSTIVE_SUBSETS {
        CensusMethod::Exhaustive
    } else {
        CensusMethod::MonteCarlo { samples, seed }
    }
}

fn run_lemmas(
    input: &Path,
    stages: Vec<usize>,
    trials: usize,
    seed: u64,
    census_samples: usize,
    report: Option<&Path>,
) -> Result<bool> {
    let points = load_points(input)?;
    let n = points.len();
    let mut stages = if stages.is_empty() {
        vec![n / 4, n / 2, 3 * n / 4]
    } else {
        stages
    };
    stages.retain(|&k| k >= 3 && k + 1 < n);
    stages.sort_unstable();
    stages.dedup();
    let orders = if factorial(n) <= EXHAUSTIVE_ORDERS {
        Orders::Exhaustive
    } else {
        Orders::Sampled { trials, seed }
    };
    let mut comparisons = Vec::new();
    for s in estimate_stages(&points, &stages, orders)? {
        let k = s.k;
        let f0 = census(&points, k, census_method(n, k, census_samples, seed))?.f0;
        let f1 = census(
            &points,
            k + 1,
            census_method(n, k + 1, census_samples, seed),
        )?
        .f1;
        let mut push = |name: String, observed: Estimate, predicted: f64, equal: bool| {
            let slack = 3.0 * observed.stderr + 1e-9 * predicted.abs();
            let holds = if equal {
                (observed.mean - predicted).abs() <= slack
            } else {
                observed.mean <= predicted + slack
            };
            comparisons.push(Comparison {
                name,
                observed,
                predicted,
                relation: if equal { "equal" } else { "at-most" },
                holds,
            });
        };
        push(
            format!("Y[{k},{}]", k + 1),
            *s.y_at(k + 1),
            expected_y(f1, k),
            true,
        );
        push(
            format!("X[{k},{}]", k + 1),
            *s.x_at(k + 1),
            x_bound(f1, k),
            false,
        );
        push(
            format!("created[{k}]"),
            s.created,
            created_bound(f0, k),
            false,
        );
        push(
            format!("conflict-size[{k}]"),
            s.conflict_graph_size,
            expected_conflict_size(n, f1, k),
            true,
        );
        push(
            format!("conflict-new-edges[{k}]"),
            s.created_edges,
            created_edges_bound(n, f1, k),
            false,
        );
    }
    let ok = comparisons.iter().all(|c| c.holds);
    write_json(
        output(report)?,
        &LemmaReport {
            n,
            orders,
            comparisons,
        },
    )?;
    Ok(ok)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Generate {
            kind,
            n,
            seed,
            output: out,
        } => {
            let mut w = output(out.as_deref())?;
            write_points(&mut w, &generate(kind, n, seed)?)?;
            w.flush()?;
        }
        Command::Build(args) => run_build(args)?,
        Command::Emst { input, output: out } => {
            let t = emst(&load_points(&input)?)?;
            let mut w = output(out.as_deref())?;
            write_edges(&mut w, &t.edges())?;
            w.flush()?;
        }
        Command::Bench {
            algorithm,
            n_sweep,
            trials,
            kind,
            output: out,
        } => {
            let mut rows = Vec::new();
            for &n in &n_sweep {
                for &a in &algorithm {
                    rows.push(bench_cell(kind, n, a, trials)?);
                }
            }
            write_bench_csv(output(out.as_deref())?, &rows)?;
        }
        Command::Verify {
            input,
            triangles,
            oracle_limit,
            report,
        } => return run_verify(&input, &triangles, oracle_limit, report.as_deref()),
        Command::Lemmas {
            input,
            stages,
            trials,
            seed,
            census_samples,
            report,
        } => {
            return run_lemmas(
                &input,
                stages,
                trials,
                seed,
                census_samples,
                report.as_deref(),
            )
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
