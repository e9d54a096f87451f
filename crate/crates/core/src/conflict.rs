//! Static conflict-graph construction.
//!
//! The bipartite graph links every live region to the pending points in
//! conflict with it. Inserting a point reads its conflicts directly, carves
//! the cavity in the shared region store and re-homes the pending points of
//! the parents of each new region.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::geometry::{validate_points, Point, PointId};
use crate::influence::{InfluenceGraph, NodeId, Triangulation, ROOT};
use crate::random::permutation;
use crate::stats::RunStats;

const UNMARKED: NodeId = NodeId::MAX;

#[derive(Debug, Clone)]
pub struct ConflictGraph {
    region_to_points: HashMap<NodeId, Vec<PointId>>,
    point_to_regions: Vec<Vec<NodeId>>,
    pending: Vec<PointId>,
    cursor: usize,
    edges: usize,
    audit: bool,
    scratch: Vec<NodeId>,
}

impl ConflictGraph {
    /// Every point in conflict with the root, pending in a seeded random order.
    pub fn init_full(n: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        Ok(Self::with_order(permutation(n, seed)))
    }

    /// Like [`init_full`](Self::init_full) with an explicit insertion order.
    pub fn with_order(order: Vec<PointId>) -> Self {
        let n = order.iter().max().map_or(0, |&m| m + 1);
        let mut point_to_regions = vec![Vec::new(); n];
        for &p in &order {
            point_to_regions[p].push(ROOT);
        }
        let mut region_to_points = HashMap::new();
        region_to_points.insert(ROOT, order.clone());
        ConflictGraph {
            region_to_points,
            point_to_regions,
            edges: order.len(),
            audit: cfg!(debug_assertions) && n <= 64,
            scratch: vec![UNMARKED; n],
            pending: order,
            cursor: 0,
        }
    }

    /// Builds a graph from known conflict lists of the `pending` points.
    pub(crate) fn from_conflicts(
        n: usize,
        pending: Vec<PointId>,
        conflicts: Vec<(PointId, Vec<NodeId>)>,
    ) -> Self {
        let mut point_to_regions = vec![Vec::new(); n];
        let mut region_to_points: HashMap<NodeId, Vec<PointId>> = HashMap::new();
        let mut edges = 0;
        for (p, regions) in conflicts {
            for &r in &regions {
                region_to_points.entry(r).or_default().push(p);
            }
            edges += regions.len();
            point_to_regions[p] = regions;
        }
        ConflictGraph {
            region_to_points,
            point_to_regions,
            pending,
            cursor: 0,
            edges,
            audit: false,
            scratch: vec![UNMARKED; n],
        }
    }

    /// Turns the consistency audit after every step on or off.
    pub fn set_audit(&mut self, on: bool) {
        self.audit = on;
    }

    /// Number of bipartite edges.
    pub fn size(&self) -> usize {
        self.edges
    }

    /// Points not inserted yet, in insertion order.
    pub fn pending(&self) -> &[PointId] {
        &self.pending[self.cursor..]
    }

    pub fn conflicts_of(&self, p: PointId) -> &[NodeId] {
        &self.point_to_regions[p]
    }

    pub fn points_of(&self, region: NodeId) -> &[PointId] {
        self.region_to_points
            .get(&region)
            .map_or(&[], |v| v.as_slice())
    }

    /// Inserts the next pending point and updates all conflicts.
    pub fn insert_step(&mut self, g: &mut InfluenceGraph) -> Result<PointId> {
        let Some(&p) = self.pending.get(self.cursor) else {
            return Err(Error::InvalidArgument("no pending point".into()));
        };
        self.cursor += 1;
        if !g.is_bootstrapped() {
            self.step_before_bootstrap(p, g)?;
        } else {
            self.step(p, g)?;
        }
        if self.audit {
            self.audit(g)?;
        }
        Ok(p)
    }

    fn step_before_bootstrap(&mut self, p: PointId, g: &mut InfluenceGraph) -> Result<()> {
        g.insert(p)?;
        if let Some(list) = self.region_to_points.get_mut(&ROOT) {
            list.retain(|&q| q != p);
        }
        self.point_to_regions[p].clear();
        self.edges -= 1;
        if !g.is_bootstrapped() {
            return Ok(());
        }
        // First real triangulation: re-home everything that hung off the root.
        self.region_to_points.clear();
        self.edges = 0;
        let points = g.points();
        let mut created = 0u64;
        for i in self.cursor..self.pending.len() {
            let q = self.pending[i];
            let regions = g.locate_conflicts_quiet(points[q]);
            for &r in &regions {
                self.region_to_points.entry(r).or_default().push(q);
            }
            created += regions.len() as u64;
            self.edges += regions.len();
            self.point_to_regions[q] = regions;
        }
        let stage = g.stage();
        g.stats_mut().add_conflict_edges(stage, created);
        Ok(())
    }

    fn step(&mut self, p: PointId, g: &mut InfluenceGraph) -> Result<()> {
        let hint = std::mem::take(&mut self.point_to_regions[p]);
        let floor = g.stage();
        let created = g.insert_with_hint(p, &hint, floor)?;
        let points = g.points();

        let mut new_edges: Vec<(NodeId, PointId)> = Vec::new();
        for &t in &created {
            let node = g.node(t);
            for parent in node.parents() {
                let Some(list) = self.region_to_points.get(&parent) else {
                    continue;
                };
                for &q in list {
                    // Region ids are never reused, so marks need no reset.
                    if q == p || self.scratch[q] == t {
                        continue;
                    }
                    self.scratch[q] = t;
                    if g.conflicts(t, points[q]) {
                        new_edges.push((t, q));
                    }
                }
            }
        }
        for &c in &hint {
            if let Some(list) = self.region_to_points.remove(&c) {
                self.edges -= list.len();
                for q in list {
                    if q != p {
                        self.point_to_regions[q].retain(|&r| r != c);
                    }
                }
            }
        }
        for &(t, q) in &new_edges {
            self.region_to_points.entry(t).or_default().push(q);
            self.point_to_regions[q].push(t);
        }
        self.edges += new_edges.len();
        g.stats_mut()
            .add_conflict_edges(floor + 1, new_edges.len() as u64);
        Ok(())
    }

    /// Checks edge symmetry, liveness and completeness against a brute-force
    /// recomputation over all live regions.
    pub fn audit(&self, g: &InfluenceGraph) -> Result<()> {
        let bad = |m: String| Err(Error::InconsistentState(m));
        let pending: HashSet<PointId> = self.pending().iter().copied().collect();
        let mut total = 0;
        for (&r, list) in &self.region_to_points {
            if !g.node(r).is_live() {
                return bad(format!("region {r} is dead but still listed"));
            }
            for &q in list {
                if !pending.contains(&q) {
                    return bad(format!("point {q} is listed under {r} but not pending"));
                }
                if !self.point_to_regions[q].contains(&r) {
                    return bad(format!("edge {r}-{q} is one-sided"));
                }
            }
            total += list.len();
        }
        let other_side: usize = self
            .pending()
            .iter()
            .map(|&q| self.point_to_regions[q].len())
            .sum();
        if total != self.edges || other_side != self.edges {
            return bad(format!(
                "edge count {} disagrees with lists ({total}, {other_side})",
                self.edges
            ));
        }
        let live: Vec<NodeId> = g.live_regions().collect();
        let points = g.points();
        for &q in self.pending() {
            let mut truth: Vec<NodeId> = live
                .iter()
                .copied()
                .filter(|&r| g.conflicts(r, points[q]))
                .collect();
            let mut have = self.point_to_regions[q].clone();
            truth.sort_unstable();
            have.sort_unstable();
            if truth != have {
                return bad(format!("conflicts of point {q} are incomplete"));
            }
        }
        Ok(())
    }
}

/// Builds the triangulation with the conflict graph, inserting in the
/// order given by `seed`.
pub fn conflict_build(points: &[Point], seed: u64) -> Result<(Triangulation, RunStats)> {
    validate_points(points)?;
    let mut cg = ConflictGraph::init_full(points.len(), seed)?;
    let mut g = InfluenceGraph::new(points);
    while !cg.pending().is_empty() {
        cg.insert_step(&mut g)?;
    }
    if !g.is_bootstrapped() {
        return Err(Error::AllCollinear);
    }
    let tri = g.live_triangulation()?;
    Ok((tri, g.into_stats()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::influence::InfluenceGraph;

    fn sample() -> Vec<Point> {
        [
            (0.0, 0.0),
            (5.0, 0.5),
            (1.0, 4.0),
            (2.0, 2.0),
            (3.5, 3.0),
            (-1.0, 2.0),
            (2.5, -1.0),
            (4.0, 1.5),
        ]
        .into_iter()
        .map(Point::from)
        .collect()
    }

    #[test]
    fn init_links_everything_to_root() {
        let cg = ConflictGraph::init_full(5, 1).unwrap();
        assert_eq!(cg.size(), 5);
        assert_eq!(cg.points_of(ROOT).len(), 5);
        assert!(matches!(
            ConflictGraph::init_full(0, 1),
            Err(Error::EmptyInput)
        ));
        assert_eq!(ConflictGraph::init_full(7, 3).unwrap().size(), 7);
    }

    #[test]
    fn matches_influence_construction() {
        let pts = sample();
        for seed in 0..20 {
            let (tri, _) = conflict_build(&pts, seed).unwrap();
            let mut g = InfluenceGraph::new(&pts);
            for p in permutation(pts.len(), seed) {
                g.insert(p).unwrap();
            }
            assert_eq!(tri, g.live_triangulation().unwrap());
        }
    }

    #[test]
    fn size_drops_to_zero() {
        let pts = sample();
        let mut cg = ConflictGraph::init_full(pts.len(), 4).unwrap();
        let mut g = InfluenceGraph::new(&pts);
        while !cg.pending().is_empty() {
            cg.insert_step(&mut g).unwrap();
            cg.audit(&g).unwrap();
        }
        assert_eq!(cg.size(), 0);
    }

    #[test]
    fn hint_traversal_is_free_of_descent() {
        let pts = sample();
        let mut cg = ConflictGraph::init_full(pts.len(), 9).unwrap();
        let mut g = InfluenceGraph::new(&pts);
        while !cg.pending().is_empty() {
            let before = g.stats().nodes_visited.len();
            let next = cg.pending()[0];
            let hint_len = cg.conflicts_of(next).len() as u64;
            let bootstrapped = g.is_bootstrapped();
            cg.insert_step(&mut g).unwrap();
            if bootstrapped {
                assert_eq!(g.stats().nodes_visited[before], hint_len);
            }
        }
    }

    #[test]
    fn collinear_prefix_rehomes_pending_points() {
        let pts: Vec<Point> = [
            (0.0, 0.0),
            (1.0, 0.0),
            (2.0, 0.0),
            (3.0, 0.0),
            (1.0, 1.0),
            (2.0, -1.0),
        ]
        .into_iter()
        .map(Point::from)
        .collect();
        let order = vec![0, 1, 2, 3, 4, 5];
        let mut cg = ConflictGraph::with_order(order);
        let mut g = InfluenceGraph::new(&pts);
        while !cg.pending().is_empty() {
            cg.insert_step(&mut g).unwrap();
            cg.audit(&g).unwrap();
        }
        let t = g.live_triangulation().unwrap();
        assert_eq!(t.triangles.len(), 2 * 6 - 2 - t.hull.len());
    }

    #[test]
    fn all_collinear_is_reported() {
        let pts: Vec<Point> = (0..5)
            .map(|i| Point::new(i as f64, 2.0 * i as f64))
            .collect();
        assert!(matches!(conflict_build(&pts, 0), Err(Error::AllCollinear)));
    }
}
