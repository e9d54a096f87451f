//! Point generators and plain-text file formats.
//!
//! Points file: the count `n` on the first line, then `n` lines `x y` in
//! shortest round-trip decimal. Edge file: lines `i j` with 0-based ids.
//! Triangle file: lines `i j k`, counter-clockwise with the smallest id
//! first, sorted.

use std::collections::HashSet;
use std::f64::consts::TAU;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point, PointId};
use crate::influence::Triangulation;
use crate::random::rng;
use crate::spanning::convex_polygon_subgraph;
use crate::stats::RunStats;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointKind {
    /// Uniform in the unit square.
    UniformSquare,
    /// Strictly convex position on an ellipse, counter-clockwise.
    ConvexPosition,
    /// Distinct cells of an integer grid, some nudged by multiples of 1/8.
    /// Keeps many collinear and cocircular subsets.
    GridPerturbed,
}

impl PointKind {
    pub const ALL: [PointKind; 3] = [
        PointKind::UniformSquare,
        PointKind::ConvexPosition,
        PointKind::GridPerturbed,
    ];
}

impl fmt::Display for PointKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PointKind::UniformSquare => "uniform-square",
            PointKind::ConvexPosition => "convex-position",
            PointKind::GridPerturbed => "grid-perturbed",
        })
    }
}

impl FromStr for PointKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PointKind::ALL
            .into_iter()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown point kind `{s}`")))
    }
}

/// Deterministic, duplicate-free point set.
pub fn generate(kind: PointKind, n: usize, seed: u64) -> Result<Vec<Point>> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "need at least 3 points, got {n}"
        )));
    }
    Ok(match kind {
        PointKind::UniformSquare => uniform_square(n, seed),
        PointKind::ConvexPosition => convex_position(n, seed),
        PointKind::GridPerturbed => grid_perturbed(n, seed),
    })
}

fn uniform_square(n: usize, seed: u64) -> Vec<Point> {
    let mut r = rng(seed);
    let mut seen = HashSet::with_capacity(n);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let p = Point::new(r.gen::<f64>(), r.gen::<f64>());
        if seen.insert(p.key()) {
            out.push(p);
        }
    }
    out
}

fn convex_position(n: usize, seed: u64) -> Vec<Point> {
    let mut r = rng(seed);
    loop {
        // One jittered angle per sector keeps neighbors well separated.
        let pts: Vec<Point> = (0..n)
            .map(|i| {
                let theta = TAU * (i as f64 + 0.1 + 0.8 * r.gen::<f64>()) / n as f64;
                Point::new(theta.cos(), 0.75 * theta.sin())
            })
            .collect();
        if convex_polygon_subgraph(&pts).is_ok() {
            return pts;
        }
    }
}

fn grid_perturbed(n: usize, seed: u64) -> Vec<Point> {
    let mut r = rng(seed);
    let side = (n as f64).sqrt().ceil() as usize + 1;
    let mut cells: Vec<(usize, usize)> = (0..side)
        .flat_map(|i| (0..side).map(move |j| (i, j)))
        .collect();
    // Partial Fisher-Yates: the first n cells are a uniform sample.
    for i in 0..n {
        let j = r.gen_range(i..cells.len());
        cells.swap(i, j);
    }
    cells[..n]
        .iter()
        .map(|&(i, j)| {
            let mut nudge = || {
                if r.gen_bool(0.5) {
                    0.0
                } else {
                    r.gen_range(-3i32..=3) as f64 / 8.0
                }
            };
            Point::new(i as f64 + nudge(), j as f64 + nudge())
        })
        .collect()
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn numbers<T: FromStr>(line: &str, lineno: usize, count: usize) -> Result<Vec<T>> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != count {
        return Err(parse_err(
            lineno,
            format!("expected {count} fields, found {}", fields.len()),
        ));
    }
    fields
        .iter()
        .map(|f| {
            f.parse()
                .map_err(|_| parse_err(lineno, format!("cannot parse `{f}`")))
        })
        .collect()
}

/// Non-empty lines with their 1-based line numbers.
fn content_lines(r: impl BufRead) -> Result<Vec<(usize, String)>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if !line.trim().is_empty() {
            out.push((i + 1, line));
        }
    }
    Ok(out)
}

pub fn write_points(mut w: impl Write, points: &[Point]) -> Result<()> {
    writeln!(w, "{}", points.len())?;
    for p in points {
        writeln!(w, "{} {}", p.x, p.y)?;
    }
    Ok(())
}

pub fn read_points(r: impl BufRead) -> Result<Vec<Point>> {
    let lines = content_lines(r)?;
    let Some((first, header)) = lines.first() else {
        return Err(parse_err(1, "empty points file"));
    };
    let n: usize = numbers(header, *first, 1)?[0];
    if lines.len() - 1 != n {
        return Err(parse_err(
            *first,
            format!("header announces {n} points, file has {}", lines.len() - 1),
        ));
    }
    lines[1..]
        .iter()
        .map(|(no, line)| {
            let v: Vec<f64> = numbers(line, *no, 2)?;
            Ok(Point::new(v[0], v[1]))
        })
        .collect()
}

pub fn write_edges(mut w: impl Write, edges: &[(PointId, PointId)]) -> Result<()> {
    for (i, j) in edges {
        writeln!(w, "{i} {j}")?;
    }
    Ok(())
}

pub fn read_edges(r: impl BufRead) -> Result<Vec<(PointId, PointId)>> {
    content_lines(r)?
        .iter()
        .map(|(no, line)| {
            let v: Vec<PointId> = numbers(line, *no, 2)?;
            Ok((v[0], v[1]))
        })
        .collect()
}

pub fn write_triangles(mut w: impl Write, tri: &Triangulation) -> Result<()> {
    for [a, b, c] in &tri.triangles {
        writeln!(w, "{a} {b} {c}")?;
    }
    Ok(())
}

pub fn read_triangles(r: impl BufRead) -> Result<Vec<[PointId; 3]>> {
    content_lines(r)?
        .iter()
        .map(|(no, line)| {
            let v: Vec<PointId> = numbers(line, *no, 3)?;
            Ok([v[0], v[1], v[2]])
        })
        .collect()
}

/// JSON report written by `build`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuildReport {
    pub algorithm: String,
    pub n: usize,
    pub seed: u64,
    pub triangles: usize,
    /// Hull vertices, counter-clockwise from the smallest id.
    pub hull: Vec<PointId>,
    pub stats: RunStats,
}

pub fn write_json<T: Serialize>(mut w: impl Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value)
        .map_err(|e| Error::InvalidArgument(format!("cannot serialize report: {e}")))?;
    writeln!(w)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::orient2d;
    use crate::Sign;

    #[test]
    fn generators_are_deterministic_and_distinct() {
        for kind in PointKind::ALL {
            for n in [3, 12, 64, 100] {
                let a = generate(kind, n, 1).unwrap();
                assert_eq!(a.len(), n);
                assert_eq!(a, generate(kind, n, 1).unwrap());
                let keys: HashSet<_> = a.iter().map(|p| p.key()).collect();
                assert_eq!(keys.len(), n, "{kind} n={n}");
            }
        }
        assert!(generate(PointKind::UniformSquare, 2, 0).is_err());
    }

    #[test]
    fn convex_position_is_strictly_convex() {
        for seed in 0..10 {
            let pts = generate(PointKind::ConvexPosition, 12, seed).unwrap();
            for i in 0..12 {
                let s = orient2d(pts[i], pts[(i + 1) % 12], pts[(i + 2) % 12]);
                assert_eq!(s, Sign::Positive);
            }
        }
        assert!(
            convex_polygon_subgraph(&generate(PointKind::ConvexPosition, 2000, 3).unwrap()).is_ok()
        );
    }

    #[test]
    fn grid_keeps_degeneracies() {
        let pts = generate(PointKind::GridPerturbed, 64, 2).unwrap();
        let on_grid = pts
            .iter()
            .filter(|p| p.x.fract() == 0.0 && p.y.fract() == 0.0)
            .count();
        assert!(on_grid >= 3);
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in PointKind::ALL {
            assert_eq!(kind.to_string().parse::<PointKind>().unwrap(), kind);
        }
        assert!("spiral".parse::<PointKind>().is_err());
    }

    #[test]
    fn points_round_trip_exactly() {
        let pts = generate(PointKind::UniformSquare, 50, 9).unwrap();
        let mut buf = Vec::new();
        write_points(&mut buf, &pts).unwrap();
        let back = read_points(buf.as_slice()).unwrap();
        assert_eq!(back, pts);
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("50\n"));
    }

    #[test]
    fn malformed_files_report_lines() {
        let err = read_points("2\n0 0\n1 x\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        assert!(read_points("3\n0 0\n".as_bytes()).is_err());
        assert!(read_points("".as_bytes()).is_err());
        let err = read_edges("0 1\n\n2\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn edges_and_triangles_round_trip() {
        let edges = vec![(0, 1), (1, 2), (5, 3)];
        let mut buf = Vec::new();
        write_edges(&mut buf, &edges).unwrap();
        assert_eq!(read_edges(buf.as_slice()).unwrap(), edges);

        let tri = Triangulation::from_parts(vec![[2, 0, 1], [0, 2, 3]], vec![0, 1, 2, 3]);
        let mut buf = Vec::new();
        write_triangles(&mut buf, &tri).unwrap();
        assert_eq!(read_triangles(buf.as_slice()).unwrap(), tri.triangles);
    }
}
