//! History DAG of triangle regions.
//!
//! Every region that was ever part of the triangulation stays in the graph.
//! A region created by inserting `p` across the cavity edge `ab` has two
//! parents: its father (the killed region on the cavity side of `ab`) and its
//! stepfather (the surviving region across `ab`). Any point in conflict with
//! the new region is in conflict with one of them, so a depth-first search
//! from the root restricted to conflicting nodes reaches every live region in
//! conflict with a query point.
//!
//! Live regions additionally keep their three neighbors, which turns the
//! leaves into an ordinary triangulation of the plane closed by a symbolic
//! vertex at infinity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    in_circle, orient2d, same_point, strictly_between, validate_points, Point, PointId, Sign,
};
use crate::random::permutation;
use crate::stats::RunStats;

pub type NodeId = u32;

/// The region defined by no point; conflicts with everything.
pub const ROOT: NodeId = 0;

const NO_NODE: NodeId = NodeId::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexRef {
    Finite(PointId),
    Infinite,
}

impl VertexRef {
    pub fn finite(self) -> Option<PointId> {
        match self {
            VertexRef::Finite(p) => Some(p),
            VertexRef::Infinite => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RegionNode {
    /// Counter-clockwise vertices; `None` only for the root.
    pub vertices: Option<[VertexRef; 3]>,
    pub children: Vec<NodeId>,
    pub father: Option<NodeId>,
    pub stepfather: Option<NodeId>,
    pub creation_stage: usize,
    pub killer_stage: Option<usize>,
    /// `live_neighbors[i]` lies across the edge opposite vertex `i`.
    /// Stale once the node is dead.
    pub live_neighbors: [NodeId; 3],
}

impl RegionNode {
    pub fn is_live(&self) -> bool {
        self.killer_stage.is_none()
    }

    pub fn is_infinite(&self) -> bool {
        self.vertices
            .is_some_and(|v| v.contains(&VertexRef::Infinite))
    }

    /// Index of the infinite vertex, if any.
    pub fn infinite_index(&self) -> Option<usize> {
        self.vertices?
            .iter()
            .position(|v| *v == VertexRef::Infinite)
    }

    /// The two parents of a non-initial node.
    pub fn parents(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.father.into_iter().chain(self.stepfather)
    }
}

/// Finite triangles and hull of a completed (or partial) triangulation.
///
/// Triangles are counter-clockwise, rotated so the smallest id comes first,
/// and sorted. The hull is counter-clockwise starting at its smallest id and
/// includes points lying on hull edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triangulation {
    pub triangles: Vec<[PointId; 3]>,
    pub hull: Vec<PointId>,
}

pub(crate) fn canonical_triangle(t: [PointId; 3]) -> [PointId; 3] {
    let m = (0..3).min_by_key(|&i| t[i]).unwrap();
    [t[m], t[(m + 1) % 3], t[(m + 2) % 3]]
}

impl Triangulation {
    pub fn from_parts(mut triangles: Vec<[PointId; 3]>, mut hull: Vec<PointId>) -> Self {
        for t in triangles.iter_mut() {
            *t = canonical_triangle(*t);
        }
        triangles.sort_unstable();
        if let Some(m) = hull
            .iter()
            .enumerate()
            .min_by_key(|(_, &v)| v)
            .map(|(i, _)| i)
        {
            hull.rotate_left(m);
        }
        Triangulation { triangles, hull }
    }

    /// Undirected edges `(min, max)` of all triangles, sorted and deduplicated.
    pub fn edges(&self) -> Vec<(PointId, PointId)> {
        let mut e: Vec<_> = self
            .triangles
            .iter()
            .flat_map(|t| (0..3).map(move |i| (t[i].min(t[(i + 1) % 3]), t[i].max(t[(i + 1) % 3]))))
            .collect();
        e.sort_unstable();
        e.dedup();
        e
    }
}

#[derive(Debug, Clone)]
pub struct InfluenceGraph<'a> {
    points: &'a [Point],
    nodes: Vec<RegionNode>,
    inserted: Vec<PointId>,
    collinear_prefix: Vec<PointId>,
    links: usize,
    stats: RunStats,
    counting: bool,
    marks: Vec<u32>,
    epoch: u32,
}

impl<'a> InfluenceGraph<'a> {
    pub fn new(points: &'a [Point]) -> Self {
        let root = RegionNode {
            vertices: None,
            children: Vec::new(),
            father: None,
            stepfather: None,
            creation_stage: 0,
            killer_stage: None,
            live_neighbors: [NO_NODE; 3],
        };
        InfluenceGraph {
            points,
            nodes: vec![root],
            inserted: Vec::new(),
            collinear_prefix: Vec::new(),
            links: 0,
            stats: RunStats::default(),
            counting: true,
            marks: vec![0],
            epoch: 0,
        }
    }

    /// Disables (or re-enables) counter collection.
    pub fn with_counting(mut self, counting: bool) -> Self {
        self.counting = counting;
        self
    }

    pub fn points(&self) -> &'a [Point] {
        self.points
    }

    pub fn nodes(&self) -> &[RegionNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &RegionNode {
        &self.nodes[id as usize]
    }

    pub fn inserted(&self) -> &[PointId] {
        &self.inserted
    }

    /// Number of points structurally inserted. Points held back while the
    /// input is still collinear are not counted.
    pub fn stage(&self) -> usize {
        self.inserted.len()
    }

    pub fn is_bootstrapped(&self) -> bool {
        !self.nodes[ROOT as usize].is_live()
    }

    /// Points received but waiting for a non-collinear point.
    pub fn buffered(&self) -> &[PointId] {
        &self.collinear_prefix
    }

    pub fn stats(&self) -> &RunStats {
        &self.stats
    }

    pub fn stats_mut(&mut self) -> &mut RunStats {
        &mut self.stats
    }

    pub fn into_stats(self) -> RunStats {
        self.stats
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Number of parent-to-child links in the DAG.
    pub fn link_count(&self) -> usize {
        self.links
    }

    pub fn live_regions(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.is_live())
            .map(|(i, _)| i as NodeId)
    }

    pub fn point(&self, v: VertexRef) -> Option<Point> {
        v.finite().map(|p| self.points[p])
    }

    /// Conflict test between a region and an arbitrary point.
    pub fn conflicts(&self, id: NodeId, q: Point) -> bool {
        let node = &self.nodes[id as usize];
        let Some(v) = node.vertices else {
            return true;
        };
        match node.infinite_index() {
            None => {
                let [a, b, c] = v.map(|x| self.points[x.finite().unwrap()]);
                in_circle(a, b, c, q) == Sign::Positive
            }
            Some(i) => {
                let s = self.points[v[(i + 1) % 3].finite().unwrap()];
                let t = self.points[v[(i + 2) % 3].finite().unwrap()];
                match orient2d(s, t, q) {
                    Sign::Positive => true,
                    Sign::Zero => strictly_between(s, t, q),
                    Sign::Negative => false,
                }
            }
        }
    }

    /// Live regions in conflict with `p`, found by searching from the root.
    pub fn locate_conflicts(&mut self, p: PointId) -> Result<Vec<NodeId>> {
        if !self.is_bootstrapped() {
            return Err(Error::NotBootstrapped);
        }
        let (found, tests) = self.search(self.points[p], p, &[ROOT], 0)?;
        if self.counting {
            self.stats.record_visit(self.inserted.len(), tests);
        }
        Ok(found)
    }

    /// Same search as [`locate_conflicts`](Self::locate_conflicts) without touching counters.
    pub fn locate_conflicts_quiet(&mut self, q: Point) -> Vec<NodeId> {
        self.search(q, PointId::MAX, &[ROOT], 0)
            .map(|(f, _)| f)
            .unwrap_or_default()
    }

    /// Depth-first search from `hint` through nodes created after `floor`.
    /// Returns the live conflicting regions and the number of conflict tests.
    fn search(
        &mut self,
        q: Point,
        p: PointId,
        hint: &[NodeId],
        floor: usize,
    ) -> Result<(Vec<NodeId>, u64)> {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.marks.iter_mut().for_each(|m| *m = 0);
            self.epoch = 1;
        }
        let epoch = self.epoch;
        let mut tests = 0u64;
        let mut stack = Vec::with_capacity(16);
        for &h in hint {
            let idx = h as usize;
            if idx >= self.nodes.len() {
                return Err(Error::BadHint {
                    region: h,
                    point: p,
                    stage: floor,
                });
            }
            if self.marks[idx] == epoch {
                continue;
            }
            self.marks[idx] = epoch;
            tests += 1;
            let node = &self.nodes[idx];
            let live_at_floor =
                node.creation_stage <= floor && node.killer_stage.is_none_or(|k| k > floor);
            if !live_at_floor || !self.conflicts(h, q) {
                return Err(Error::BadHint {
                    region: h,
                    point: p,
                    stage: floor,
                });
            }
            stack.push(h);
        }
        let mut found = Vec::new();
        while let Some(id) = stack.pop() {
            let node = &self.nodes[id as usize];
            // Live nodes may already have children through stepfather links.
            if node.is_live() {
                found.push(id);
            }
            for &c in &node.children {
                let ci = c as usize;
                if self.marks[ci] == epoch || self.nodes[ci].creation_stage <= floor {
                    continue;
                }
                self.marks[ci] = epoch;
                tests += 1;
                if self.conflicts(c, q) {
                    stack.push(c);
                }
            }
        }
        Ok((found, tests))
    }

    /// Inserts `p`, locating its conflicts from the root.
    pub fn insert(&mut self, p: PointId) -> Result<Vec<NodeId>> {
        self.insert_with_hint(p, &[ROOT], 0)
    }

    /// Inserts `p` knowing `hint`, the regions live at stage `floor` that
    /// conflict with `p`. Only nodes created after `floor` are searched.
    pub fn insert_with_hint(
        &mut self,
        p: PointId,
        hint: &[NodeId],
        floor: usize,
    ) -> Result<Vec<NodeId>> {
        if !self.is_bootstrapped() {
            return self.buffer_point(p);
        }
        let (conflicts, tests) = self.search(self.points[p], p, hint, floor)?;
        if conflicts.is_empty() {
            return Err(Error::DuplicatePoint(p));
        }
        if self.counting {
            self.stats.record_visit(self.inserted.len(), tests);
        }
        Ok(self.carve(p, &conflicts))
    }

    fn push_node(&mut self, node: RegionNode) -> NodeId {
        let id = self.nodes.len() as NodeId;
        self.nodes.push(node);
        self.marks.push(0);
        id
    }

    /// Kills the cavity and stars it from `p`.
    fn carve(&mut self, p: PointId, cavity: &[NodeId]) -> Vec<NodeId> {
        let stage = self.inserted.len() + 1;
        for &c in cavity {
            self.nodes[c as usize].killer_stage = Some(stage);
        }
        let apex = VertexRef::Finite(p);
        let mut created = Vec::with_capacity(cavity.len() + 2);
        let mut spokes: Vec<(VertexRef, NodeId)> = Vec::with_capacity(cavity.len() + 2);
        for &c in cavity {
            let verts = self.nodes[c as usize].vertices.expect("cavity region");
            let nb = self.nodes[c as usize].live_neighbors;
            for i in 0..3 {
                let across = nb[i];
                if self.nodes[across as usize].killer_stage == Some(stage) {
                    continue;
                }
                let a = verts[(i + 1) % 3];
                let b = verts[(i + 2) % 3];
                debug_assert!(
                    a == VertexRef::Infinite
                        || b == VertexRef::Infinite
                        || orient2d(
                            self.points[a.finite().unwrap()],
                            self.points[b.finite().unwrap()],
                            self.points[p]
                        ) == Sign::Positive,
                    "cavity is not star-shaped from the new point"
                );
                let id = self.push_node(RegionNode {
                    vertices: Some([apex, a, b]),
                    children: Vec::new(),
                    father: Some(c),
                    stepfather: Some(across),
                    creation_stage: stage,
                    killer_stage: None,
                    live_neighbors: [across, NO_NODE, NO_NODE],
                });
                let back = &mut self.nodes[across as usize].live_neighbors;
                let slot = back
                    .iter()
                    .position(|&x| x == c)
                    .expect("symmetric adjacency");
                back[slot] = id;
                self.nodes[c as usize].children.push(id);
                self.nodes[across as usize].children.push(id);
                self.links += 2;
                created.push(id);
                spokes.push((b, id));
            }
        }
        spokes.sort_unstable();
        for &id in &created {
            let a = self.nodes[id as usize].vertices.unwrap()[1];
            let k = spokes
                .binary_search_by(|(v, _)| v.cmp(&a))
                .expect("cavity boundary is a closed cycle");
            let other = spokes[k].1;
            self.nodes[id as usize].live_neighbors[2] = other;
            self.nodes[other as usize].live_neighbors[1] = id;
        }
        self.inserted.push(p);
        if self.counting {
            self.stats.add_created(stage, created.len() as u64);
        }
        created
    }

    fn buffer_point(&mut self, p: PointId) -> Result<Vec<NodeId>> {
        let q = self.points[p];
        if self
            .collinear_prefix
            .iter()
            .any(|&b| same_point(self.points[b], q))
        {
            return Err(Error::DuplicatePoint(p));
        }
        self.collinear_prefix.push(p);
        let buf = &self.collinear_prefix;
        if buf.len() < 3 {
            return Ok(Vec::new());
        }
        let (b0, b1) = (buf[0], buf[1]);
        let o = orient2d(self.points[b0], self.points[b1], q);
        if o == Sign::Zero {
            return Ok(Vec::new());
        }
        let rest: Vec<PointId> = buf[2..buf.len() - 1].to_vec();
        self.collinear_prefix.clear();
        let tri = if o == Sign::Positive {
            [b0, b1, p]
        } else {
            [b1, b0, p]
        };
        let mut created = self.bootstrap(tri);
        for r in rest {
            created.extend(self.insert(r)?);
        }
        Ok(created)
    }

    fn bootstrap(&mut self, tri: [PointId; 3]) -> Vec<NodeId> {
        let stage = 3;
        let fv = tri.map(VertexRef::Finite);
        let mut verts = vec![fv];
        for i in 0..3 {
            verts.push([fv[(i + 2) % 3], fv[(i + 1) % 3], VertexRef::Infinite]);
        }
        let base = self.nodes.len() as NodeId;
        let ids: Vec<NodeId> = (0..4).map(|k| base + k as NodeId).collect();
        for v in &verts {
            self.push_node(RegionNode {
                vertices: Some(*v),
                children: Vec::new(),
                father: None,
                stepfather: None,
                creation_stage: stage,
                killer_stage: None,
                live_neighbors: [NO_NODE; 3],
            });
        }
        // Match each directed edge with its reverse among the four regions.
        for (x, vx) in verts.iter().enumerate() {
            for i in 0..3 {
                let (u, w) = (vx[(i + 1) % 3], vx[(i + 2) % 3]);
                let y = verts
                    .iter()
                    .position(|vy| (0..3).any(|j| vy[(j + 1) % 3] == w && vy[(j + 2) % 3] == u))
                    .expect("closed surface");
                self.nodes[ids[x] as usize].live_neighbors[i] = ids[y];
            }
        }
        let root = &mut self.nodes[ROOT as usize];
        root.killer_stage = Some(stage);
        root.children.extend(&ids);
        self.links += 4;
        if self.counting {
            for rank in self.inserted.len()..self.inserted.len() + 3 {
                self.stats.record_visit(rank, 0);
            }
            self.stats.add_created(stage, 4);
        }
        self.inserted.extend(tri);
        ids
    }

    /// The finite live triangles and the counter-clockwise hull.
    pub fn live_triangulation(&self) -> Result<Triangulation> {
        if !self.is_bootstrapped() {
            return Err(Error::NotBootstrapped);
        }
        let mut triangles = Vec::new();
        let mut next = std::collections::HashMap::new();
        for id in self.live_regions() {
            let node = &self.nodes[id as usize];
            let v = node.vertices.unwrap();
            match node.infinite_index() {
                None => triangles.push(v.map(|x| x.finite().unwrap())),
                Some(i) => {
                    let s = v[(i + 1) % 3].finite().unwrap();
                    let t = v[(i + 2) % 3].finite().unwrap();
                    next.insert(t, s);
                }
            }
        }
        let start = *next.keys().min().unwrap();
        let mut hull = vec![start];
        let mut cur = next[&start];
        while cur != start {
            hull.push(cur);
            cur = next[&cur];
        }
        Ok(Triangulation::from_parts(triangles, hull))
    }

    /// A live finite region incident to each inserted point.
    pub fn incident_finite_regions(&self) -> Vec<Option<NodeId>> {
        let mut out = vec![None; self.points.len()];
        for id in self.live_regions() {
            let node = &self.nodes[id as usize];
            if node.is_infinite() {
                continue;
            }
            for v in node.vertices.unwrap() {
                let p = v.finite().unwrap();
                out[p].get_or_insert(id);
            }
        }
        out
    }

    /// Region vertices as points; `None` stands for the infinite vertex.
    pub fn region_points(&self, id: NodeId) -> Option<[Option<Point>; 3]> {
        self.nodes[id as usize]
            .vertices
            .map(|v| v.map(|x| self.point(x)))
    }

    #[cfg(test)]
    pub(crate) fn marks_len(&self) -> usize {
        self.marks.len()
    }
}

/// Builds the triangulation with the history DAG, inserting in the order
/// given by `seed`.
pub fn influence_build(points: &[Point], seed: u64) -> Result<(Triangulation, RunStats)> {
    validate_points(points)?;
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut g = InfluenceGraph::new(points);
    for p in permutation(points.len(), seed) {
        g.insert(p)?;
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

    fn pts(v: &[(f64, f64)]) -> Vec<Point> {
        v.iter().map(|&p| p.into()).collect()
    }

    fn check_adjacency(g: &InfluenceGraph) {
        assert_eq!(g.marks_len(), g.node_count());
        if !g.is_bootstrapped() {
            return;
        }
        for id in g.live_regions() {
            let n = g.node(id);
            let v = n.vertices.unwrap();
            for i in 0..3 {
                let m = n.live_neighbors[i];
                let other = g.node(m);
                assert!(other.is_live());
                let j = other.live_neighbors.iter().position(|&x| x == id).unwrap();
                let ov = other.vertices.unwrap();
                assert_eq!(v[(i + 1) % 3], ov[(j + 2) % 3]);
                assert_eq!(v[(i + 2) % 3], ov[(j + 1) % 3]);
            }
        }
    }

    #[test]
    fn bootstrap_creates_four_regions() {
        let p = pts(&[(0., 0.), (4., 0.), (0., 4.)]);
        let mut g = InfluenceGraph::new(&p);
        for i in 0..3 {
            g.insert(i).unwrap();
        }
        assert_eq!(g.live_regions().count(), 4);
        let t = g.live_triangulation().unwrap();
        assert_eq!(t.triangles, vec![[0, 1, 2]]);
        assert_eq!(t.hull, vec![0, 1, 2]);
        check_adjacency(&g);
    }

    #[test]
    fn collinear_prefix_is_buffered() {
        let p = pts(&[(0., 0.), (1., 0.), (2., 0.), (1., 1.)]);
        let mut g = InfluenceGraph::new(&p);
        for i in 0..3 {
            g.insert(i).unwrap();
        }
        assert!(!g.is_bootstrapped());
        assert_eq!(g.buffered(), &[0, 1, 2]);
        assert!(matches!(
            g.live_triangulation(),
            Err(Error::NotBootstrapped)
        ));
        g.insert(3).unwrap();
        let t = g.live_triangulation().unwrap();
        assert_eq!(t.triangles.len(), 2);
        assert_eq!(t.hull, vec![0, 1, 2, 3]);
        assert_eq!(g.inserted(), &[0, 1, 3, 2]);
        check_adjacency(&g);
    }

    #[test]
    fn four_points_one_interior_gives_star() {
        let p = pts(&[(0., 0.), (4., 0.), (0., 4.), (1., 1.)]);
        let mut g = InfluenceGraph::new(&p);
        for i in 0..3 {
            g.insert(i).unwrap();
        }
        let conf = g.locate_conflicts(3).unwrap();
        assert_eq!(conf.len(), 1);
        assert!(!g.node(conf[0]).is_infinite());
        let created = g.insert(3).unwrap();
        assert_eq!(created.len(), 3);
        let t = g.live_triangulation().unwrap();
        assert_eq!(t.triangles, vec![[0, 1, 3], [0, 3, 2], [1, 2, 3]]);
        check_adjacency(&g);
    }

    #[test]
    fn far_point_conflicts_only_with_infinite_regions() {
        let p = pts(&[(0., 0.), (4., 0.), (0., 4.), (10., 10.)]);
        let mut g = InfluenceGraph::new(&p);
        for i in 0..3 {
            g.insert(i).unwrap();
        }
        let conf = g.locate_conflicts(3).unwrap();
        assert_eq!(conf.len(), 1);
        assert!(g.node(conf[0]).is_infinite());
    }

    #[test]
    fn cocircular_corner_goes_through_infinite_region() {
        let p = pts(&[(0., 0.), (1., 0.), (0., 1.), (1., 1.)]);
        let mut g = InfluenceGraph::new(&p);
        for i in 0..3 {
            g.insert(i).unwrap();
        }
        let conf = g.locate_conflicts(3).unwrap();
        assert_eq!(conf.len(), 1);
        assert!(g.node(conf[0]).is_infinite());
        g.insert(3).unwrap();
        let t = g.live_triangulation().unwrap();
        assert_eq!(t.triangles, vec![[0, 1, 2], [1, 3, 2]]);
        assert_eq!(t.hull, vec![0, 1, 3, 2]);
        check_adjacency(&g);
    }

    #[test]
    fn point_on_hull_edge_splits_it() {
        let p = pts(&[(0., 0.), (4., 0.), (0., 4.), (2., 0.)]);
        let mut g = InfluenceGraph::new(&p);
        for i in 0..4 {
            g.insert(i).unwrap();
        }
        let t = g.live_triangulation().unwrap();
        assert_eq!(t.triangles, vec![[0, 3, 2], [1, 2, 3]]);
        assert_eq!(t.hull, vec![0, 3, 1, 2]);
        check_adjacency(&g);
    }

    #[test]
    fn collinear_extension_of_hull_edge() {
        let p = pts(&[(0., 0.), (4., 0.), (0., 4.), (6., 0.)]);
        let mut g = InfluenceGraph::new(&p);
        for i in 0..4 {
            g.insert(i).unwrap();
        }
        let t = g.live_triangulation().unwrap();
        assert_eq!(t.triangles, vec![[0, 1, 2], [1, 3, 2]]);
        assert_eq!(t.hull, vec![0, 1, 3, 2]);
        check_adjacency(&g);
    }

    #[test]
    fn duplicates_are_rejected() {
        let p = pts(&[(0., 0.), (4., 0.), (0., 4.), (4., 0.), (0., 0.)]);
        let mut g = InfluenceGraph::new(&p);
        for i in 0..3 {
            g.insert(i).unwrap();
        }
        assert!(matches!(g.insert(3), Err(Error::DuplicatePoint(3))));
        let p2 = pts(&[(0., 0.), (0., 0.)]);
        let mut g2 = InfluenceGraph::new(&p2);
        g2.insert(0).unwrap();
        assert!(matches!(g2.insert(1), Err(Error::DuplicatePoint(1))));
    }

    #[test]
    fn hint_must_conflict() {
        let p = pts(&[(0., 0.), (4., 0.), (0., 4.), (1., 1.)]);
        let mut g = InfluenceGraph::new(&p);
        for i in 0..3 {
            g.insert(i).unwrap();
        }
        let infinite = g.live_regions().find(|&r| g.node(r).is_infinite()).unwrap();
        assert!(matches!(
            g.insert_with_hint(3, &[infinite], 3),
            Err(Error::BadHint { .. })
        ));
        let finite = g
            .live_regions()
            .find(|&r| !g.node(r).is_infinite())
            .unwrap();
        let before = g.stats().total_visited();
        g.insert_with_hint(3, &[finite], 3).unwrap();
        assert_eq!(g.stats().total_visited() - before, 1);
    }

    #[test]
    fn links_and_in_degree() {
        let p = pts(&[
            (0., 0.),
            (5., 0.5),
            (1., 4.),
            (2., 2.),
            (3.5, 3.),
            (-1., 2.),
            (2.5, -1.),
            (4., 1.5),
        ]);
        let mut g = InfluenceGraph::new(&p);
        for i in 0..p.len() {
            g.insert(i).unwrap();
            assert!(g.link_count() <= 2 * g.node_count());
            check_adjacency(&g);
        }
        let mut indeg = vec![0; g.node_count()];
        for n in g.nodes() {
            for &c in &n.children {
                indeg[c as usize] += 1;
            }
        }
        for (i, n) in g.nodes().iter().enumerate() {
            let expected = match (i, n.father) {
                (0, _) => 0,
                (_, None) => 1,
                _ => 2,
            };
            assert_eq!(indeg[i], expected);
            if let Some(f) = n.father {
                assert!(n.creation_stage > g.node(f).creation_stage);
            }
        }
        let t = g.live_triangulation().unwrap();
        assert_eq!(t.triangles.len(), 2 * p.len() - 2 - t.hull.len());
    }

    #[test]
    fn counting_can_be_disabled() {
        let p = pts(&[(0., 0.), (4., 0.), (0., 4.), (1., 1.)]);
        let mut g = InfluenceGraph::new(&p).with_counting(false);
        for i in 0..4 {
            g.insert(i).unwrap();
        }
        assert_eq!(g.stats(), &RunStats::default());
    }
}
