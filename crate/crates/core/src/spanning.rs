//! Bounded-degree spanning subgraphs of the Delaunay triangulation.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{cmp_squared_dist, orient2d, squared_dist, Point, PointId, Sign};
use crate::influence::Triangulation;

/// Maximum degree of a Euclidean minimum spanning tree.
pub const EMST_DEGREE_BOUND: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningSubgraph {
    adjacency: Vec<Vec<PointId>>,
    degree_bound: usize,
}

impl SpanningSubgraph {
    pub fn from_edges(n: usize, edges: &[(PointId, PointId)], degree_bound: usize) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        let mut seen = HashSet::new();
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidSubgraph(format!(
                    "edge {u}-{v} names a missing point"
                )));
            }
            if u == v {
                return Err(Error::InvalidSubgraph(format!("self loop at {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                continue;
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for (v, adj) in adjacency.iter_mut().enumerate() {
            adj.sort_unstable();
            if adj.len() > degree_bound {
                return Err(Error::InvalidSubgraph(format!(
                    "point {v} has degree {} above the bound {degree_bound}",
                    adj.len()
                )));
            }
        }
        Ok(SpanningSubgraph {
            adjacency,
            degree_bound,
        })
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn neighbors(&self, v: PointId) -> &[PointId] {
        &self.adjacency[v]
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Undirected edges as sorted `(min, max)` pairs.
    pub fn edges(&self) -> Vec<(PointId, PointId)> {
        let mut out: Vec<_> = self
            .adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, adj)| adj.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect();
        out.sort_unstable();
        out
    }

    /// Points not reachable from point 0.
    pub fn unreached(&self) -> Vec<PointId> {
        let n = self.len();
        if n == 0 {
            return Vec::new();
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        (0..n).filter(|&v| !seen[v]).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.unreached().is_empty()
    }

    /// Sum of euclidean edge lengths.
    pub fn total_length(&self, points: &[Point]) -> f64 {
        self.edges()
            .iter()
            .map(|&(u, v)| squared_dist(points[u], points[v]).sqrt())
            .sum()
    }
}

/// An edge with its squared length. The length is rounded; ordering goes
/// through [`edge_order`], which is exact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightedEdge {
    pub u: PointId,
    pub v: PointId,
    pub weight: f64,
}

impl WeightedEdge {
    pub fn new(points: &[Point], u: PointId, v: PointId) -> Self {
        let (u, v) = (u.min(v), u.max(v));
        WeightedEdge {
            u,
            v,
            weight: squared_dist(points[u], points[v]),
        }
    }
}

/// Total order on edges: exact squared length, then endpoint ids.
pub fn edge_order(points: &[Point], a: &WeightedEdge, b: &WeightedEdge) -> Ordering {
    cmp_squared_dist(points[a.u], points[a.v], points[b.u], points[b.v])
        .then_with(|| (a.u, a.v).cmp(&(b.u, b.v)))
}

struct DisjointSets {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            Ordering::Less => self.parent[ra] = rb,
            Ordering::Greater => self.parent[rb] = ra,
            Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

/// Minimum spanning tree restricted to the edges of a Delaunay triangulation.
pub fn emst_from_delaunay(tri: &Triangulation, points: &[Point]) -> Result<SpanningSubgraph> {
    let n = points.len();
    let mut edges: Vec<WeightedEdge> = tri
        .edges()
        .into_iter()
        .chain(
            tri.hull
                .iter()
                .zip(tri.hull.iter().cycle().skip(1))
                .map(|(&a, &b)| (a.min(b), a.max(b))),
        )
        .map(|(u, v)| WeightedEdge::new(points, u, v))
        .collect();
    edges.sort_unstable_by(|a, b| edge_order(points, a, b));
    edges.dedup_by(|a, b| (a.u, a.v) == (b.u, b.v));
    let mut sets = DisjointSets::new(n);
    let mut chosen = Vec::with_capacity(n.saturating_sub(1));
    for e in edges {
        if sets.union(e.u, e.v) {
            chosen.push((e.u, e.v));
        }
    }
    let t = SpanningSubgraph::from_edges(n, &chosen, EMST_DEGREE_BOUND)?;
    if let Some(&v) = t.unreached().first() {
        return Err(Error::DisconnectedSubgraph(v));
    }
    Ok(t)
}

/// Minimum spanning tree of the complete graph (Prim, quadratic).
pub fn brute_force_mst(points: &[Point]) -> Result<SpanningSubgraph> {
    let n = points.len();
    if n < 2 {
        return Err(Error::InvalidArgument("need at least two points".into()));
    }
    let mut in_tree = vec![false; n];
    let mut best: Vec<Option<WeightedEdge>> = vec![None; n];
    let mut chosen = Vec::with_capacity(n - 1);
    let mut current = 0;
    in_tree[0] = true;
    for _ in 1..n {
        let mut next: Option<usize> = None;
        for v in 0..n {
            if in_tree[v] {
                continue;
            }
            let cand = WeightedEdge::new(points, current, v);
            let replace = match &best[v] {
                None => true,
                Some(b) => edge_order(points, &cand, b) == Ordering::Less,
            };
            if replace {
                best[v] = Some(cand);
            }
            next = match next {
                None => Some(v),
                Some(w) => {
                    let (bv, bw) = (best[v].as_ref().unwrap(), best[w].as_ref().unwrap());
                    if edge_order(points, bv, bw) == Ordering::Less {
                        Some(v)
                    } else {
                        Some(w)
                    }
                }
            };
        }
        let v = next.expect("a vertex outside the tree");
        let e = best[v].unwrap();
        chosen.push((e.u, e.v));
        in_tree[v] = true;
        current = v;
    }
    SpanningSubgraph::from_edges(n, &chosen, EMST_DEGREE_BOUND)
}

/// Open chain `0-1-...-(n-1)` over points given in counter-clockwise
/// convex position.
pub fn convex_polygon_subgraph(points: &[Point]) -> Result<SpanningSubgraph> {
    let n = points.len();
    if n < 3 {
        return Err(Error::InvalidArgument("need at least three points".into()));
    }
    let turns: Vec<Sign> = (0..n)
        .map(|i| orient2d(points[i], points[(i + 1) % n], points[(i + 2) % n]))
        .collect();
    if turns.iter().all(|&s| s == Sign::Negative) {
        return Err(Error::NotCcw);
    }
    if let Some(i) = turns.iter().position(|&s| s != Sign::Positive) {
        return Err(Error::NotConvex(i));
    }
    // All left turns can still wind around more than once (star polygons).
    // Edge directions wrap from the lower half-plane to the upper one
    // exactly once per turn.
    let upper = |i: usize| {
        let (a, b) = (points[i], points[(i + 1) % n]);
        b.y > a.y || (b.y == a.y && b.x > a.x)
    };
    let wraps = (0..n).filter(|&i| !upper(i) && upper((i + 1) % n)).count();
    if wraps != 1 {
        return Err(Error::NotConvex(0));
    }
    let chain: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
    SpanningSubgraph::from_edges(n, &chain, 2)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubgraphReport {
    pub connected: bool,
    pub unreached: Vec<PointId>,
    pub max_degree: usize,
    pub degree_bound: usize,
    /// Subgraph edges missing from the triangulation.
    pub breaches: Vec<(PointId, PointId)>,
}

impl SubgraphReport {
    pub fn is_valid(&self) -> bool {
        self.connected && self.breaches.is_empty() && self.max_degree <= self.degree_bound
    }
}

pub fn validate_subgraph(t: &SpanningSubgraph, tri: &Triangulation) -> SubgraphReport {
    let mut tri_edges: HashSet<(PointId, PointId)> = tri.edges().into_iter().collect();
    for (&a, &b) in tri.hull.iter().zip(tri.hull.iter().cycle().skip(1)) {
        tri_edges.insert((a.min(b), a.max(b)));
    }
    let unreached = t.unreached();
    SubgraphReport {
        connected: unreached.is_empty(),
        unreached,
        max_degree: t.max_degree(),
        degree_bound: t.degree_bound(),
        breaches: t
            .edges()
            .into_iter()
            .filter(|e| !tri_edges.contains(e))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(f64, f64)]) -> Vec<Point> {
        v.iter().map(|&p| p.into()).collect()
    }

    #[test]
    fn small_mst() {
        let p = pts(&[(0.0, 0.0), (1.0, 0.0), (0.4, 2.0)]);
        let t = brute_force_mst(&p).unwrap();
        assert_eq!(t.edges(), vec![(0, 1), (0, 2)]);
        let tri = Triangulation::from_parts(vec![[0, 1, 2]], vec![0, 1, 2]);
        assert_eq!(emst_from_delaunay(&tri, &p).unwrap(), t);
    }

    #[test]
    fn two_points_and_collinear_chain() {
        let t = brute_force_mst(&pts(&[(0.0, 0.0), (3.0, 1.0)])).unwrap();
        assert_eq!(t.edges(), vec![(0, 1)]);
        let t = brute_force_mst(&pts(&[(0.0, 0.0), (1.0, 0.0), (3.0, 0.0)])).unwrap();
        assert_eq!(t.edges(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn ties_break_by_ids() {
        // Unit square: four sides of length 1, MST takes the three lowest id pairs.
        let p = pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        let t = brute_force_mst(&p).unwrap();
        assert_eq!(t.edges(), vec![(0, 1), (0, 3), (1, 2)]);
        assert_eq!(brute_force_mst(&p).unwrap(), t);
    }

    #[test]
    fn convex_chain_validation() {
        let square = pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        let t = convex_polygon_subgraph(&square).unwrap();
        assert_eq!(t.edges(), vec![(0, 1), (1, 2), (2, 3)]);
        assert_eq!(t.max_degree(), 2);

        let mut cw = square.clone();
        cw.reverse();
        assert!(matches!(convex_polygon_subgraph(&cw), Err(Error::NotCcw)));

        let reflex = pts(&[(0.0, 0.0), (2.0, 0.0), (1.0, 0.5), (2.0, 2.0), (0.0, 2.0)]);
        assert!(matches!(
            convex_polygon_subgraph(&reflex),
            Err(Error::NotConvex(_))
        ));

        let star: Vec<Point> = (0..5)
            .map(|i| {
                let a = std::f64::consts::TAU * (2 * i) as f64 / 5.0;
                Point::new(a.cos(), a.sin())
            })
            .collect();
        assert!(matches!(
            convex_polygon_subgraph(&star),
            Err(Error::NotConvex(_))
        ));
    }

    #[test]
    fn nudged_regular_polygon_is_accepted() {
        let mut p: Vec<Point> = (0..12)
            .map(|i| {
                let a = std::f64::consts::TAU * i as f64 / 12.0;
                Point::new(a.cos(), a.sin())
            })
            .collect();
        p[5].x *= 1.001;
        p[5].y *= 1.001;
        assert!(convex_polygon_subgraph(&p).is_ok());
    }

    #[test]
    fn report_flags_breaches() {
        let tri = Triangulation::from_parts(vec![[0, 1, 3], [1, 2, 3]], vec![0, 1, 2, 3]);
        let ok = SpanningSubgraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)], 2).unwrap();
        assert!(validate_subgraph(&ok, &tri).is_valid());
        let star = SpanningSubgraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)], 3).unwrap();
        let r = validate_subgraph(&star, &tri);
        assert_eq!(r.breaches, vec![(0, 2)]);
        let split = SpanningSubgraph::from_edges(4, &[(0, 1)], 2).unwrap();
        let r = validate_subgraph(&split, &tri);
        assert!(!r.connected);
        assert_eq!(r.unreached, vec![2, 3]);
    }

    #[test]
    fn degree_bound_enforced() {
        let err = SpanningSubgraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)], 2);
        assert!(matches!(err, Err(Error::InvalidSubgraph(_))));
    }
}
