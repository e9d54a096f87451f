//! Accelerated construction.
//!
//! Points are inserted through the history DAG as usual, but at a handful of
//! key stages `N_i = floor(n / log^(i) n)` the conflicts of every pending
//! point are rebuilt directly: a breadth-first traversal of a spanning
//! subgraph walks each subgraph edge across the current triangulation to
//! locate its far endpoint, and a flood fill over live adjacency collects the
//! full conflict set from there. Insertions between `N_i` and `N_{i+1}` then
//! start their DAG search from the stage-`N_i` conflicts.

use std::collections::VecDeque;
use std::time::Instant;

use serde::Serialize;

use crate::conflict::ConflictGraph;
use crate::error::{Error, Result};
use crate::geometry::{
    orient2d, point_in_triangle, segment_exit_edge, validate_points, Containment, Point, PointId,
    Sign,
};
use crate::influence::{InfluenceGraph, NodeId, Triangulation};
use crate::random::permutation;
use crate::spanning::{validate_subgraph, SpanningSubgraph};
use crate::stats::RunStats;

/// Iterated base-2 logarithm: the number of `log2` applications needed to
/// bring `n` down to at most 1.
pub fn log_star(n: u64) -> u32 {
    let mut x = n as f64;
    let mut k = 0;
    while x > 1.0 {
        x = x.log2();
        k += 1;
    }
    k
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KeySchedule {
    pub n: usize,
    /// Strictly increasing stages in `[3, n)`.
    pub stages: Vec<usize>,
}

pub fn key_values(n: usize) -> KeySchedule {
    let mut stages = Vec::new();
    let mut l = n as f64;
    loop {
        l = l.log2();
        if l <= 1.0 || !l.is_finite() {
            break;
        }
        let v = (n as f64 / l).floor() as usize;
        if (3..n).contains(&v) {
            stages.push(v);
        }
    }
    stages.sort_unstable();
    stages.dedup();
    KeySchedule { n, stages }
}

/// Result of one direct conflict rebuild.
#[derive(Debug, Clone)]
pub struct Rebuild {
    pub conflicts: ConflictGraph,
    /// Triangles visited by all straight walks, start triangles included.
    pub crossings: u64,
    /// Conflict tests made by the flood fills.
    pub tests: u64,
    /// Walks that did not terminate within budget and fell back to a scan.
    pub fallbacks: u64,
}

struct Walker<'g, 'a> {
    g: &'g InfluenceGraph<'a>,
    budget: usize,
}

impl Walker<'_, '_> {
    fn pt(&self, id: NodeId, i: usize) -> Point {
        let v = self.g.node(id).vertices.unwrap()[i % 3];
        self.g.point(v).expect("finite vertex")
    }

    /// Walks the segment `from -> to` starting in `start`, which must meet
    /// the segment. Returns the finite triangle containing `to`, or an
    /// infinite region in conflict with it.
    fn walk(&self, start: NodeId, from: Point, to: Point, crossings: &mut u64) -> Option<NodeId> {
        let mut cur = start;
        for _ in 0..self.budget {
            *crossings += 1;
            let node = self.g.node(cur);
            let nb = node.live_neighbors;
            match node.infinite_index() {
                None => {
                    let tri = [self.pt(cur, 0), self.pt(cur, 1), self.pt(cur, 2)];
                    match segment_exit_edge(tri, from, to) {
                        None => return Some(cur),
                        Some(i) => cur = nb[i],
                    }
                }
                Some(i) => {
                    if self.g.conflicts(cur, to) {
                        return Some(cur);
                    }
                    // Hull edge (s, t) with the exterior on its left.
                    let s = self.pt(cur, i + 1);
                    let t = self.pt(cur, i + 2);
                    let os = orient2d(from, to, s);
                    let ot = orient2d(from, to, t);
                    cur = if os == Sign::Zero || ot == Sign::Zero || os != ot {
                        nb[i]
                    } else if os == Sign::Negative {
                        nb[(i + 1) % 3]
                    } else {
                        nb[(i + 2) % 3]
                    };
                }
            }
        }
        None
    }

    fn scan(&self, to: Point) -> NodeId {
        self.g
            .live_regions()
            .find(|&r| {
                let node = self.g.node(r);
                if node.is_infinite() {
                    self.g.conflicts(r, to)
                } else {
                    point_in_triangle(to, self.pt(r, 0), self.pt(r, 1), self.pt(r, 2))
                        != Containment::Exterior
                }
            })
            .expect("live regions cover the plane")
    }
}

/// Rebuilds the conflicts between the live regions of `g` and the `pending`
/// points, using the spanning subgraph `t` over all points.
pub fn rebuild_conflicts_via_subgraph(
    g: &InfluenceGraph,
    t: &SpanningSubgraph,
    pending: &[PointId],
) -> Result<Rebuild> {
    if !g.is_bootstrapped() {
        return Err(Error::NotBootstrapped);
    }
    let points = g.points();
    let n = points.len();
    if t.len() != n {
        return Err(Error::InvalidSubgraph(format!(
            "subgraph spans {} points, input has {n}",
            t.len()
        )));
    }
    let incident = g.incident_finite_regions();
    let walker = Walker {
        g,
        budget: 4 * g.node_count() + 16,
    };

    let mut crossings = 0u64;
    let mut fallbacks = 0u64;
    let mut located: Vec<Option<NodeId>> = vec![None; n];
    let origin = g.inserted()[0];
    located[origin] = incident[origin];
    let mut queue = VecDeque::from([origin]);
    while let Some(u) = queue.pop_front() {
        let from = located[u].expect("located before queued");
        for &w in t.neighbors(u) {
            if located[w].is_some() {
                continue;
            }
            let region = match incident[w] {
                Some(r) => r,
                None => match walker.walk(from, points[u], points[w], &mut crossings) {
                    Some(r) => r,
                    None => {
                        fallbacks += 1;
                        walker.scan(points[w])
                    }
                },
            };
            located[w] = Some(region);
            queue.push_back(w);
        }
    }
    if let Some(v) = located.iter().position(Option::is_none) {
        return Err(Error::DisconnectedSubgraph(v));
    }

    let mut marks = vec![u32::MAX; g.node_count()];
    let mut tests = 0u64;
    let mut conflicts = Vec::with_capacity(pending.len());
    let mut stack = Vec::new();
    for (k, &w) in pending.iter().enumerate() {
        let stamp = k as u32;
        let q = points[w];
        let seed = located[w].unwrap();
        let mut found = Vec::new();
        marks[seed as usize] = stamp;
        tests += 1;
        if g.conflicts(seed, q) {
            stack.push(seed);
        }
        while let Some(r) = stack.pop() {
            found.push(r);
            for nb in g.node(r).live_neighbors {
                if marks[nb as usize] == stamp {
                    continue;
                }
                marks[nb as usize] = stamp;
                tests += 1;
                if g.conflicts(nb, q) {
                    stack.push(nb);
                }
            }
        }
        if found.is_empty() {
            return Err(Error::DuplicatePoint(w));
        }
        conflicts.push((w, found));
    }
    Ok(Rebuild {
        conflicts: ConflictGraph::from_conflicts(n, pending.to_vec(), conflicts),
        crossings,
        tests,
        fallbacks,
    })
}

/// Accelerated construction without timing.
pub fn accelerated_build(
    points: &[Point],
    t: &SpanningSubgraph,
    seed: u64,
) -> Result<(Triangulation, RunStats)> {
    accelerated_build_with(points, t, seed, false)
}

/// Accelerated construction. With `timing`, wall time of each phase is
/// appended to `phase_wall_ms`.
pub fn accelerated_build_with(
    points: &[Point],
    t: &SpanningSubgraph,
    seed: u64,
    timing: bool,
) -> Result<(Triangulation, RunStats)> {
    validate_points(points)?;
    let n = points.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if t.len() != n {
        return Err(Error::InvalidSubgraph(format!(
            "subgraph spans {} points, input has {n}",
            t.len()
        )));
    }
    let order = permutation(n, seed);
    let schedule = key_values(n);
    let mut g = InfluenceGraph::new(points);
    let mut snapshot: Option<(ConflictGraph, usize)> = None;
    let mut keys = schedule.stages.iter().copied().peekable();
    let mut clock = Instant::now();
    let mut phase_ms = Vec::new();

    for (idx, &p) in order.iter().enumerate() {
        if keys.peek() == Some(&idx) {
            keys.next();
            if timing {
                phase_ms.push(clock.elapsed().as_secs_f64() * 1e3);
                clock = Instant::now();
            }
            if g.is_bootstrapped() && g.stage() == idx {
                let rebuild = rebuild_conflicts_via_subgraph(&g, t, &order[idx..])?;
                let stats = g.stats_mut();
                stats.walk_crossings.push(rebuild.crossings);
                stats.rebuild_conflict_tests.push(rebuild.tests);
                stats.rebuild_stages.push(idx);
                stats.walk_fallbacks += rebuild.fallbacks;
                snapshot = Some((rebuild.conflicts, idx));
            }
        }
        match &snapshot {
            Some((cg, floor)) => g.insert_with_hint(p, cg.conflicts_of(p), *floor)?,
            None => g.insert(p)?,
        };
    }
    if !g.is_bootstrapped() {
        return Err(Error::AllCollinear);
    }
    let tri = g.live_triangulation()?;
    let report = validate_subgraph(t, &tri);
    if let Some(&(u, v)) = report.breaches.first() {
        return Err(Error::SubgraphEdgeNotDelaunay(u, v));
    }
    let mut stats = g.into_stats();
    if timing {
        phase_ms.push(clock.elapsed().as_secs_f64() * 1e3);
        stats.phase_wall_ms = phase_ms;
    }
    Ok((tri, stats))
}
