//! Algorithm selection and benchmark rows.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::accelerated::accelerated_build_with;
use crate::conflict::conflict_build;
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::influence::{influence_build, Triangulation};
use crate::io::{generate, PointKind};
use crate::spanning::{
    brute_force_mst, convex_polygon_subgraph, emst_from_delaunay, SpanningSubgraph,
};
use crate::stats::RunStats;

/// Above this size the EMST for `accelerated-emst` is taken from a plain
/// Delaunay build instead of the quadratic complete-graph MST.
pub const BRUTE_FORCE_EMST_LIMIT: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Influence,
    Conflict,
    AcceleratedEmst,
    AcceleratedGivenSubgraph,
    AcceleratedConvex,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Influence,
        Algorithm::Conflict,
        Algorithm::AcceleratedEmst,
        Algorithm::AcceleratedGivenSubgraph,
        Algorithm::AcceleratedConvex,
    ];
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Influence => "influence",
            Algorithm::Conflict => "conflict",
            Algorithm::AcceleratedEmst => "accelerated-emst",
            Algorithm::AcceleratedGivenSubgraph => "accelerated-given-subgraph",
            Algorithm::AcceleratedConvex => "accelerated-convex",
        })
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.to_string() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown algorithm `{s}`")))
    }
}

/// EMST of `points`: complete-graph Prim up to [`BRUTE_FORCE_EMST_LIMIT`]
/// points, Kruskal over a plain Delaunay build beyond.
pub fn emst(points: &[Point]) -> Result<SpanningSubgraph> {
    if points.len() <= BRUTE_FORCE_EMST_LIMIT {
        brute_force_mst(points)
    } else {
        let (tri, _) = influence_build(points, 0)?;
        emst_from_delaunay(&tri, points)
    }
}

/// Runs `algorithm`. `subgraph` is required by `accelerated-given-subgraph`
/// and replaces the computed EMST for `accelerated-emst`.
pub fn build(
    points: &[Point],
    algorithm: Algorithm,
    seed: u64,
    subgraph: Option<&SpanningSubgraph>,
    timing: bool,
) -> Result<(Triangulation, RunStats)> {
    match algorithm {
        Algorithm::Influence => influence_build(points, seed),
        Algorithm::Conflict => conflict_build(points, seed),
        Algorithm::AcceleratedEmst => match subgraph {
            Some(t) => accelerated_build_with(points, t, seed, timing),
            None => accelerated_build_with(points, &emst(points)?, seed, timing),
        },
        Algorithm::AcceleratedGivenSubgraph => {
            let t = subgraph.ok_or_else(|| {
                Error::InvalidArgument("accelerated-given-subgraph needs a subgraph".into())
            })?;
            accelerated_build_with(points, t, seed, timing)
        }
        Algorithm::AcceleratedConvex => {
            accelerated_build_with(points, &convex_polygon_subgraph(points)?, seed, timing)
        }
    }
}

/// One CSV row of a benchmark sweep: means over seeds, normalized by `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    pub algorithm: String,
    pub kind: String,
    pub seeds: usize,
    pub visited_per_n: f64,
    pub created_per_n: f64,
    pub crossings_per_n: f64,
    /// Mean over rebuilds of the walk crossings of one rebuild, over `n`.
    pub rebuild_crossings_per_n: f64,
    pub visited_plus_crossings_per_n: f64,
    /// Walks that needed the linear-scan fallback, summed over seeds.
    pub walk_fallbacks: u64,
    pub wall_ms: f64,
}

/// Runs `algorithm` on generated points for seeds `0..seeds` (seed `s` drives
/// both the generator and the insertion order). Seeds run in parallel.
/// The wall time excludes generating points and computing the subgraph.
pub fn bench_cell(
    kind: PointKind,
    n: usize,
    algorithm: Algorithm,
    seeds: usize,
) -> Result<BenchRow> {
    let runs: Vec<(RunStats, f64)> = (0..seeds as u64)
        .into_par_iter()
        .map(|seed| {
            let points = generate(kind, n, seed)?;
            let t = match algorithm {
                Algorithm::AcceleratedEmst | Algorithm::AcceleratedGivenSubgraph => {
                    Some(emst(&points)?)
                }
                Algorithm::AcceleratedConvex => Some(convex_polygon_subgraph(&points)?),
                _ => None,
            };
            let alg = if t.is_some() {
                Algorithm::AcceleratedGivenSubgraph
            } else {
                algorithm
            };
            let start = Instant::now();
            let (_, stats) = build(&points, alg, seed, t.as_ref(), false)?;
            Ok((stats, start.elapsed().as_secs_f64() * 1e3))
        })
        .collect::<Result<_>>()?;
    let nf = n as f64;
    let mean = |f: &dyn Fn(&RunStats) -> f64| {
        runs.iter().map(|(s, _)| f(s)).sum::<f64>() / runs.len() as f64
    };
    let rebuild_crossings: Vec<f64> = runs
        .iter()
        .flat_map(|(s, _)| s.walk_crossings.iter().map(|&c| c as f64 / nf))
        .collect();
    Ok(BenchRow {
        n,
        algorithm: algorithm.to_string(),
        kind: kind.to_string(),
        seeds,
        visited_per_n: mean(&|s| s.total_visited() as f64 / nf),
        created_per_n: mean(&|s| s.total_created() as f64 / nf),
        crossings_per_n: mean(&|s| s.total_walk_crossings() as f64 / nf),
        rebuild_crossings_per_n: if rebuild_crossings.is_empty() {
            0.0
        } else {
            rebuild_crossings.iter().sum::<f64>() / rebuild_crossings.len() as f64
        },
        visited_plus_crossings_per_n: mean(&|s| {
            (s.total_visited() + s.total_walk_crossings()) as f64 / nf
        }),
        walk_fallbacks: runs.iter().map(|(s, _)| s.walk_fallbacks).sum(),
        wall_ms: runs.iter().map(|(_, ms)| ms).sum::<f64>() / runs.len() as f64,
    })
}

pub fn write_bench_csv(w: impl std::io::Write, rows: &[BenchRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for row in rows {
        out.serialize(row).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_bench_csv(r: impl std::io::Read) -> Result<Vec<BenchRow>> {
    csv::Reader::from_reader(r)
        .deserialize()
        .map(|row| row.map_err(csv_err))
        .collect()
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidArgument(format!("csv: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.to_string().parse::<Algorithm>().unwrap(), a);
        }
        assert!("quadtree".parse::<Algorithm>().is_err());
    }

    #[test]
    fn all_algorithms_agree() {
        let pts = generate(PointKind::ConvexPosition, 40, 2).unwrap();
        let t = brute_force_mst(&pts).unwrap();
        let base = build(&pts, Algorithm::Influence, 7, None, false).unwrap().0;
        for a in Algorithm::ALL {
            assert_eq!(build(&pts, a, 7, Some(&t), false).unwrap().0, base, "{a}");
        }
        assert!(build(&pts, Algorithm::AcceleratedGivenSubgraph, 7, None, false).is_err());
    }

    #[test]
    fn bench_rows_reparse() {
        let rows = vec![
            bench_cell(PointKind::UniformSquare, 200, Algorithm::Influence, 3).unwrap(),
            bench_cell(PointKind::UniformSquare, 200, Algorithm::AcceleratedEmst, 3).unwrap(),
        ];
        assert_eq!(rows[0].crossings_per_n, 0.0);
        assert!(rows[1].rebuild_crossings_per_n > 0.0);
        let mut buf = Vec::new();
        write_bench_csv(&mut buf, &rows).unwrap();
        assert_eq!(read_bench_csv(buf.as_slice()).unwrap(), rows);
    }
}
