//! Brute-force oracles, region census and estimators for the expected
//! conflict and creation counts of randomized incremental construction.
//!
//! Estimators drive the production engines over random (or all) insertion
//! orders and read counts from them; the census counts regions of samples by
//! brute force. Every observed quantity is an integer, so sums are kept
//! exactly and exhaustive results can be compared with exact arithmetic.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::conflict::ConflictGraph;
use crate::error::{Error, Result};
use crate::geometry::{
    in_circle, orient2d, strictly_between, validate_points, Point, PointId, Sign,
};
use crate::influence::{InfluenceGraph, Triangulation};
use crate::random::trial_permutation;

/// Maximum number of objects defining a region.
pub const B: usize = 3;

/// Largest subset count the exhaustive census accepts.
pub const EXHAUSTIVE_SUBSETS: u128 = 1_000_000;

/// Largest order count the exhaustive estimators accept.
pub const EXHAUSTIVE_ORDERS: u128 = 5040;

/// Convex hull vertices in counter-clockwise order, including points lying
/// on hull edges. Empty if all points are collinear.
pub fn convex_hull(points: &[Point]) -> Vec<PointId> {
    let mut ids: Vec<PointId> = (0..points.len()).collect();
    ids.sort_by(|&a, &b| {
        let (p, q) = (points[a], points[b]);
        p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y))
    });
    ids.dedup_by(|a, b| points[*a] == points[*b]);
    if ids.len() < 3 {
        return Vec::new();
    }
    let mut strict: Vec<PointId> = Vec::new();
    for pass in [ids.clone(), ids.iter().rev().copied().collect()] {
        let base = strict.len();
        for p in pass {
            while strict.len() >= base + 2
                && orient2d(
                    points[strict[strict.len() - 2]],
                    points[strict[strict.len() - 1]],
                    points[p],
                ) != Sign::Positive
            {
                strict.pop();
            }
            strict.push(p);
        }
        strict.pop();
    }
    if strict.len() < 3 {
        return Vec::new();
    }
    let mut hull = Vec::new();
    for (i, &a) in strict.iter().enumerate() {
        let b = strict[(i + 1) % strict.len()];
        let mut on_edge: Vec<PointId> = (0..points.len())
            .filter(|&p| {
                orient2d(points[a], points[b], points[p]) == Sign::Zero
                    && strictly_between(points[a], points[b], points[p])
            })
            .collect();
        on_edge.sort_by(|&p, &q| {
            if strictly_between(points[a], points[q], points[p]) {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        });
        hull.push(a);
        hull.extend(on_edge);
    }
    hull
}

/// Counter-clockwise triples with no point strictly inside their circumcircle.
pub fn delaunay_candidates(points: &[Point]) -> Vec<[PointId; 3]> {
    let n = points.len();
    (0..n)
        .tuple_combinations()
        .filter_map(|(a, b, c)| {
            let t = match orient2d(points[a], points[b], points[c]) {
                Sign::Positive => [a, b, c],
                Sign::Negative => [a, c, b],
                Sign::Zero => return None,
            };
            let [a, b, c] = t.map(|i| points[i]);
            let empty = points
                .iter()
                .all(|&p| in_circle(a, b, c, p) != Sign::Positive);
            empty.then_some(t)
        })
        .collect()
}

/// Delaunay triangulation by the empty-circle definition. Faces with four
/// or more cocircular vertices are fanned from their lexicographically
/// smallest vertex.
pub fn brute_force_delaunay(points: &[Point]) -> Result<Triangulation> {
    validate_points(points)?;
    if points.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "need at least 3 points, got {}",
            points.len()
        )));
    }
    let hull = convex_hull(points);
    if hull.is_empty() {
        return Err(Error::AllCollinear);
    }
    let mut faces: HashSet<Vec<PointId>> = HashSet::new();
    for t in delaunay_candidates(points) {
        let [a, b, c] = t.map(|i| points[i]);
        let mut face: Vec<PointId> = (0..points.len())
            .filter(|&p| t.contains(&p) || in_circle(a, b, c, points[p]) == Sign::Zero)
            .collect();
        face.sort_unstable();
        faces.insert(face);
    }
    let mut triangles = Vec::new();
    for face in faces {
        let origin = *face
            .iter()
            .min_by(|&&p, &&q| {
                let (p, q) = (points[p], points[q]);
                p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y))
            })
            .unwrap();
        let o = points[origin];
        let mut rest: Vec<PointId> = face.into_iter().filter(|&p| p != origin).collect();
        rest.sort_by(|&p, &q| match orient2d(o, points[p], points[q]) {
            Sign::Positive => Ordering::Less,
            Sign::Negative => Ordering::Greater,
            Sign::Zero => Ordering::Equal,
        });
        for w in rest.windows(2) {
            triangles.push([origin, w[0], w[1]]);
        }
    }
    Ok(Triangulation::from_parts(triangles, hull))
}

/// Structural and empty-circle checks of a triangulation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TriangulationCheck {
    pub triangles: usize,
    /// `2n - 2 - h` with `h` the number of hull points.
    pub expected_triangles: usize,
    pub all_ccw: bool,
    /// Every point is a vertex and every edge has the right number of sides.
    pub manifold: bool,
    pub hull_matches: bool,
    /// Pairs of adjacent triangles where the opposite vertex lies strictly
    /// inside the other circumcircle.
    pub local_violations: usize,
}

impl TriangulationCheck {
    pub fn is_valid(&self) -> bool {
        self.triangles == self.expected_triangles
            && self.all_ccw
            && self.manifold
            && self.hull_matches
            && self.local_violations == 0
    }
}

/// Checks `tri` against the oracle hull, Euler's relation and the local
/// Delaunay condition. A valid triangulation that is locally Delaunay is
/// Delaunay.
pub fn check_triangulation(points: &[Point], tri: &Triangulation) -> TriangulationCheck {
    let n = points.len();
    let hull = convex_hull(points);
    let expected_triangles = (2 * n).saturating_sub(2 + hull.len());
    let in_range = tri.triangles.iter().flatten().all(|&v| v < n);
    let all_ccw = in_range
        && tri
            .triangles
            .iter()
            .all(|t| orient2d(points[t[0]], points[t[1]], points[t[2]]) == Sign::Positive);

    let mut directed: HashMap<(PointId, PointId), PointId> = HashMap::new();
    let mut manifold = in_range;
    for &[a, b, c] in &tri.triangles {
        for (u, v, w) in [(a, b, c), (b, c, a), (c, a, b)] {
            manifold &= directed.insert((u, v), w).is_none();
        }
    }
    let hull_edges: HashSet<(PointId, PointId)> = tri
        .hull
        .iter()
        .copied()
        .zip(tri.hull.iter().copied().cycle().skip(1))
        .collect();
    for &(u, v) in directed.keys() {
        if !directed.contains_key(&(v, u)) && !hull_edges.contains(&(u, v)) {
            manifold = false;
        }
    }
    manifold &= hull_edges.iter().all(|e| directed.contains_key(e));
    let used: HashSet<PointId> = tri.triangles.iter().flatten().copied().collect();
    manifold &= used.len() == n;

    let mut local_violations = 0;
    if in_range {
        for (&(u, v), &w) in &directed {
            if u < v {
                if let Some(&x) = directed.get(&(v, u)) {
                    if in_circle(points[u], points[v], points[w], points[x]) == Sign::Positive {
                        local_violations += 1;
                    }
                }
            }
        }
    }

    TriangulationCheck {
        triangles: tri.triangles.len(),
        expected_triangles,
        all_ccw,
        manifold,
        hull_matches: Triangulation::from_parts(Vec::new(), hull).hull == tri.hull,
        local_violations,
    }
}

/// Number of (triangle, point) pairs with the point strictly inside the
/// triangle's circumcircle. Quadratic; meant for small inputs.
pub fn count_strict_violations(points: &[Point], tri: &Triangulation) -> usize {
    tri.triangles
        .iter()
        .map(|t| {
            let [a, b, c] = t.map(|i| points[i]);
            points
                .iter()
                .filter(|&&p| in_circle(a, b, c, p) == Sign::Positive)
                .count()
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CensusMethod {
    Exhaustive,
    MonteCarlo { samples: usize, seed: u64 },
}

/// Mean counts of empty and single-conflict regions over `r`-subsets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionCensus {
    pub r: usize,
    pub method: CensusMethod,
    pub f0: f64,
    pub f1: f64,
    /// Zero for the exhaustive method.
    pub f0_stderr: f64,
    pub f1_stderr: f64,
    pub f0_sum: u128,
    pub f1_sum: u128,
    pub subsets: u128,
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    // Each prefix product is itself a binomial, so the division is exact.
    (0..k).fold(1u128, |acc, i| {
        acc.saturating_mul((n - i) as u128) / (i + 1) as u128
    })
}

/// Saturates at `u128::MAX`.
pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).fold(1u128, |acc, i| acc.saturating_mul(i))
}

/// Counts regions defined by `sample` that are empty or have exactly one
/// conflict with the rest of the sample. Regions are counter-clockwise
/// triangles and hull-edge half-planes, with the same conflict rule as the
/// engines.
pub fn region_counts(points: &[Point], sample: &[PointId]) -> (u64, u64) {
    let mut f = [0u64; 2];
    let mut tally = |conflicts: usize| {
        if conflicts < 2 {
            f[conflicts] += 1;
        }
    };
    for (a, b, c) in sample.iter().copied().tuple_combinations() {
        let (pa, pb, pc) = match orient2d(points[a], points[b], points[c]) {
            Sign::Positive => (points[a], points[b], points[c]),
            Sign::Negative => (points[a], points[c], points[b]),
            Sign::Zero => continue,
        };
        let conflicts = sample
            .iter()
            .filter(|&&q| q != a && q != b && q != c)
            .filter(|&&q| in_circle(pa, pb, pc, points[q]) == Sign::Positive)
            .take(2)
            .count();
        tally(conflicts);
    }
    for (s, t) in sample.iter().copied().tuple_combinations() {
        for (s, t) in [(s, t), (t, s)] {
            let (ps, pt) = (points[s], points[t]);
            let conflicts = sample
                .iter()
                .filter(|&&q| q != s && q != t)
                .filter(|&&q| match orient2d(ps, pt, points[q]) {
                    Sign::Positive => true,
                    Sign::Zero => strictly_between(ps, pt, points[q]),
                    Sign::Negative => false,
                })
                .take(2)
                .count();
            tally(conflicts);
        }
    }
    (f[0], f[1])
}

fn mean_stderr(sum: u128, sum_sq: u128, count: u64) -> (f64, f64) {
    let n = count as f64;
    let mean = sum as f64 / n;
    if count < 2 {
        return (mean, 0.0);
    }
    let var = ((sum_sq as f64 - n * mean * mean) / (n - 1.0)).max(0.0);
    (mean, (var / n).sqrt())
}

pub fn census(points: &[Point], r: usize, method: CensusMethod) -> Result<RegionCensus> {
    let n = points.len();
    if r > n || r == 0 {
        return Err(Error::InvalidArgument(format!(
            "sample size {r} not in 1..={n}"
        )));
    }
    let counts: Vec<(u64, u64)> = match method {
        CensusMethod::Exhaustive => {
            let total = binomial(n, r);
            if total > EXHAUSTIVE_SUBSETS {
                return Err(Error::TooLarge {
                    count: total,
                    limit: EXHAUSTIVE_SUBSETS,
                });
            }
            (0..n)
                .combinations(r)
                .par_bridge()
                .map(|s| region_counts(points, &s))
                .collect()
        }
        CensusMethod::MonteCarlo { samples, seed } => (0..samples as u64)
            .into_par_iter()
            .map(|i| region_counts(points, &trial_permutation(n, seed, i)[..r]))
            .collect(),
    };
    let sums = counts.iter().fold([0u128; 4], |mut acc, &(a, b)| {
        let (a, b) = (a as u128, b as u128);
        acc[0] += a;
        acc[1] += a * a;
        acc[2] += b;
        acc[3] += b * b;
        acc
    });
    let count = counts.len() as u64;
    let (f0, mut f0_stderr) = mean_stderr(sums[0], sums[1], count);
    let (f1, mut f1_stderr) = mean_stderr(sums[2], sums[3], count);
    if method == CensusMethod::Exhaustive {
        f0_stderr = 0.0;
        f1_stderr = 0.0;
    }
    Ok(RegionCensus {
        r,
        method,
        f0,
        f1,
        f0_stderr,
        f1_stderr,
        f0_sum: sums[0],
        f1_sum: sums[2],
        subsets: count as u128,
    })
}

/// What one insertion order shows at stage `k`. Objects are numbered from
/// 1 in insertion order; `y[j]` and `x[j]` refer to object `k + 1 + j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageObservation {
    pub k: usize,
    /// Regions created by inserting object `k`.
    pub created: u64,
    /// Conflict-graph edges after stage `k`.
    pub conflict_graph_size: u64,
    /// Conflict-graph edges created at stage `k`.
    pub created_edges: u64,
    /// Conflicts between regions live at stage `k` and each later object.
    pub y: Vec<u64>,
    /// Conflicts between regions created at stage `k` and each later object.
    pub x: Vec<u64>,
}

/// Runs the conflict-graph construction in `order` and observes it at the
/// requested stages, which must be at least 3.
pub fn observe_order(
    points: &[Point],
    order: &[PointId],
    stages: &[usize],
) -> Result<Vec<StageObservation>> {
    if let Some(&k) = stages.iter().find(|&&k| k < 3 || k > order.len()) {
        return Err(Error::InvalidArgument(format!("stage {k} out of range")));
    }
    let mut g = InfluenceGraph::new(points);
    let mut cg = ConflictGraph::with_order(order.to_vec());
    cg.set_audit(false);
    let mut out = Vec::with_capacity(stages.len());
    for k in 1..=order.len() {
        cg.insert_step(&mut g)?;
        if !stages.contains(&k) {
            continue;
        }
        if !g.is_bootstrapped() || g.stage() != k {
            return Err(Error::NotBootstrapped);
        }
        let created_at = |q: &PointId| {
            cg.conflicts_of(*q)
                .iter()
                .filter(|&&r| g.node(r).creation_stage == k)
                .count() as u64
        };
        let stats = g.stats();
        out.push(StageObservation {
            k,
            created: stats.nodes_created.get(k).copied().unwrap_or(0),
            conflict_graph_size: cg.size() as u64,
            created_edges: stats.conflict_edges_created.get(k).copied().unwrap_or(0),
            y: cg
                .pending()
                .iter()
                .map(|q| cg.conflicts_of(*q).len() as u64)
                .collect(),
            x: cg.pending().iter().map(created_at).collect(),
        });
    }
    Ok(out)
}

/// Which insertion orders an estimator averages over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Orders {
    /// All `n!` orders.
    Exhaustive,
    Sampled {
        trials: usize,
        seed: u64,
    },
}

/// Mean of an integer-valued quantity with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub sum: u128,
    pub count: u64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Acc {
    sum: u128,
    sum_sq: u128,
    count: u64,
}

impl Acc {
    fn add(&mut self, v: u64) {
        self.sum += v as u128;
        self.sum_sq += v as u128 * v as u128;
        self.count += 1;
    }

    fn estimate(self) -> Estimate {
        let (mean, stderr) = mean_stderr(self.sum, self.sum_sq, self.count);
        Estimate {
            mean,
            stderr,
            sum: self.sum,
            count: self.count,
        }
    }
}

/// Estimates at one stage `k`. `y[j]` and `x[j]` refer to object `k + 1 + j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageEstimates {
    pub k: usize,
    pub created: Estimate,
    pub conflict_graph_size: Estimate,
    pub created_edges: Estimate,
    pub y: Vec<Estimate>,
    pub x: Vec<Estimate>,
}

impl StageEstimates {
    pub fn y_at(&self, l: usize) -> &Estimate {
        &self.y[l - self.k - 1]
    }

    pub fn x_at(&self, l: usize) -> &Estimate {
        &self.x[l - self.k - 1]
    }
}

/// Observes the requested stages over many orders and averages.
pub fn estimate_stages(
    points: &[Point],
    stages: &[usize],
    orders: Orders,
) -> Result<Vec<StageEstimates>> {
    let n = points.len();
    validate_points(points)?;
    let observations: Vec<Vec<StageObservation>> = match orders {
        Orders::Exhaustive => {
            let total = factorial(n);
            if total > EXHAUSTIVE_ORDERS {
                return Err(Error::TooLarge {
                    count: total,
                    limit: EXHAUSTIVE_ORDERS,
                });
            }
            (0..n)
                .permutations(n)
                .par_bridge()
                .map(|order| observe_order(points, &order, stages))
                .collect::<Result<_>>()?
        }
        Orders::Sampled { trials, seed } => (0..trials as u64)
            .into_par_iter()
            .map(|t| observe_order(points, &trial_permutation(n, seed, t), stages))
            .collect::<Result<_>>()?,
    };
    Ok(stages
        .iter()
        .enumerate()
        .map(|(s, &k)| {
            let mut created = Acc::default();
            let mut size = Acc::default();
            let mut edges = Acc::default();
            let mut y = vec![Acc::default(); n - k];
            let mut x = vec![Acc::default(); n - k];
            for obs in &observations {
                let o = &obs[s];
                created.add(o.created);
                size.add(o.conflict_graph_size);
                edges.add(o.created_edges);
                for j in 0..n - k {
                    y[j].add(o.y[j]);
                    x[j].add(o.x[j]);
                }
            }
            StageEstimates {
                k,
                created: created.estimate(),
                conflict_graph_size: size.estimate(),
                created_edges: edges.estimate(),
                y: y.into_iter().map(Acc::estimate).collect(),
                x: x.into_iter().map(Acc::estimate).collect(),
            }
        })
        .collect())
}

fn check_kl(n: usize, k: usize, l: usize) -> Result<()> {
    if !(3 <= k && k < l && l <= n) {
        return Err(Error::InvalidArgument(format!(
            "need 3 <= k < l <= n, got k={k} l={l} n={n}"
        )));
    }
    Ok(())
}

/// Conflicts between the regions live at stage `k` and object `l`.
pub fn estimate_y(points: &[Point], k: usize, l: usize, orders: Orders) -> Result<Estimate> {
    check_kl(points.len(), k, l)?;
    Ok(*estimate_stages(points, &[k], orders)?[0].y_at(l))
}

/// Conflicts between the regions created at stage `k` and object `l`.
pub fn estimate_x(points: &[Point], k: usize, l: usize, orders: Orders) -> Result<Estimate> {
    check_kl(points.len(), k, l)?;
    Ok(*estimate_stages(points, &[k], orders)?[0].x_at(l))
}

/// Expected conflicts with a later object: `f1(k+1) / (k+1)`.
pub fn expected_y(f1_next: f64, k: usize) -> f64 {
    f1_next / (k + 1) as f64
}

/// Bound on regions created at stage `k`: `b f0(k) / k`.
pub fn created_bound(f0: f64, k: usize) -> f64 {
    (B as f64) * f0 / k as f64
}

/// Bound on conflicts of regions created at stage `k`: `(b/k) f1(k+1)/(k+1)`.
pub fn x_bound(f1_next: f64, k: usize) -> f64 {
    (B as f64) / k as f64 * expected_y(f1_next, k)
}

/// Expected conflict-graph size at stage `k`: `(n-k) f1(k+1)/(k+1)`.
pub fn expected_conflict_size(n: usize, f1_next: f64, k: usize) -> f64 {
    (n - k) as f64 * expected_y(f1_next, k)
}

/// Bound on conflict-graph edges created at stage `k`.
pub fn created_edges_bound(n: usize, f1_next: f64, k: usize) -> f64 {
    (n - k) as f64 * x_bound(f1_next, k)
}

/// Exact test of `E[Y] = f1(k+1)/(k+1)` from an exhaustive order
/// enumeration and an exhaustive census at `r = k + 1`.
pub fn y_matches_exactly(y: &Estimate, census_next: &RegionCensus) -> bool {
    let k1 = census_next.r as u128;
    y.sum * census_next.subsets * k1 == census_next.f1_sum * y.count as u128
}
