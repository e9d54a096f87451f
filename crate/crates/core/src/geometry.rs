//! Exact planar predicates.
//!
//! Signs come from adaptive-precision evaluation: a floating-point filter
//! answers most queries and an exact expansion takes over when the filter
//! cannot certify the sign. The expansion arithmetic is only exact while no
//! intermediate product underflows or overflows, so points with a nonzero
//! coordinate outside `[2^-150, 2^150]` in magnitude are evaluated with
//! rationals instead. The returned [`Sign`] is always the sign of the true
//! determinant.

use std::collections::HashSet;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a point within its input set.
pub type PointId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    fn coord(self) -> robust::Coord<f64> {
        robust::Coord {
            x: self.x,
            y: self.y,
        }
    }

    /// Bit pattern used for duplicate detection; `-0.0` and `0.0` compare equal.
    pub(crate) fn key(self) -> (u64, u64) {
        let norm = |v: f64| if v == 0.0 { 0u64 } else { v.to_bits() };
        (norm(self.x), norm(self.y))
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point { x, y }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    fn of_rational(v: &BigRational) -> Sign {
        if v.is_zero() {
            Sign::Zero
        } else if v.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    fn of(v: f64) -> Sign {
        if v > 0.0 {
            Sign::Positive
        } else if v < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn reversed(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

const SAFE_MIN: f64 = 7.006492321624085e-46; // 2^-150
const SAFE_MAX: f64 = 1.42724769270596e45; // 2^150

fn in_safe_range(points: &[Point]) -> bool {
    let ok = |v: f64| v == 0.0 || (SAFE_MIN..=SAFE_MAX).contains(&v.abs());
    points.iter().all(|p| ok(p.x) && ok(p.y))
}

fn rational(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite coordinate")
}

/// Sign of the signed area of `abc`; positive iff counter-clockwise.
pub fn orient2d(a: Point, b: Point, c: Point) -> Sign {
    if in_safe_range(&[a, b, c]) {
        return Sign::of(robust::orient2d(a.coord(), b.coord(), c.coord()));
    }
    let d = |p: Point| (rational(p.x) - rational(c.x), rational(p.y) - rational(c.y));
    let (ax, ay) = d(a);
    let (bx, by) = d(b);
    Sign::of_rational(&(ax * by - ay * bx))
}

/// Positive iff `p` lies strictly inside the circumcircle of the
/// counter-clockwise triangle `abc`, zero iff the four points are cocircular.
pub fn in_circle(a: Point, b: Point, c: Point, p: Point) -> Sign {
    if in_safe_range(&[a, b, c, p]) {
        return Sign::of(robust::incircle(a.coord(), b.coord(), c.coord(), p.coord()));
    }
    let row = |v: Point| {
        let x = rational(v.x) - rational(p.x);
        let y = rational(v.y) - rational(p.y);
        let w = &x * &x + &y * &y;
        (x, y, w)
    };
    let (ax, ay, aw) = row(a);
    let (bx, by, bw) = row(b);
    let (cx, cy, cw) = row(c);
    let det = &ax * (&by * &cw - &bw * &cy) - &ay * (&bx * &cw - &bw * &cx)
        + &aw * (&bx * &cy - &by * &cx);
    Sign::of_rational(&det)
}

/// True iff `p` lies on the open segment `ab`. Assumes `p` is collinear with `a` and `b`.
pub fn strictly_between(a: Point, b: Point, p: Point) -> bool {
    let within = |lo: f64, hi: f64, v: f64| (lo < v && v < hi) || (hi < v && v < lo);
    if a.x != b.x {
        within(a.x, b.x, p.x)
    } else {
        within(a.y, b.y, p.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Containment {
    Interior,
    OnBoundary,
    Exterior,
}

/// Classifies `p` against the counter-clockwise triangle `abc`.
pub fn point_in_triangle(p: Point, a: Point, b: Point, c: Point) -> Containment {
    let signs = [orient2d(a, b, p), orient2d(b, c, p), orient2d(c, a, p)];
    if signs.contains(&Sign::Negative) {
        Containment::Exterior
    } else if signs.contains(&Sign::Zero) {
        Containment::OnBoundary
    } else {
        Containment::Interior
    }
}

/// Edge through which the directed segment `s -> t` leaves the
/// counter-clockwise triangle `tri`, or `None` when `t` lies inside or on it.
///
/// Edge `i` is the edge opposite vertex `i`, i.e. `(tri[i+1], tri[i+2])`.
/// When the segment passes exactly through a vertex, the edge that follows
/// that vertex in counter-clockwise order is chosen.
pub fn segment_exit_edge(tri: [Point; 3], s: Point, t: Point) -> Option<usize> {
    let mut outside = [0usize; 3];
    let mut count = 0;
    for i in 0..3 {
        if orient2d(tri[(i + 1) % 3], tri[(i + 2) % 3], t) == Sign::Negative {
            outside[count] = i;
            count += 1;
        }
    }
    match outside[..count] {
        [] => None,
        [i] => Some(i),
        [i, j] => {
            // Two candidate edges share the vertex that is opposite neither of them.
            let shared = 3 - i - j;
            let apex = tri[shared];
            // Edge `shared + 2` is (apex, next-ccw); edge `shared + 1` is (prev, apex).
            let after = (shared + 2) % 3;
            let before = (shared + 1) % 3;
            match orient2d(s, apex, t) {
                Sign::Negative => Some(before),
                Sign::Zero | Sign::Positive => Some(after),
            }
        }
        _ => unreachable!("a point cannot lie outside all three edges of a ccw triangle"),
    }
}

/// Checks that every point is finite and that no coordinate pair repeats.
pub fn validate_points(points: &[Point]) -> Result<()> {
    let mut seen = HashSet::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        if !p.x.is_finite() || !p.y.is_finite() {
            return Err(Error::NonFinite(i));
        }
        if !seen.insert(p.key()) {
            return Err(Error::DuplicatePoint(i));
        }
    }
    Ok(())
}

pub(crate) fn same_point(a: Point, b: Point) -> bool {
    a.key() == b.key()
}

/// Squared euclidean distance rounded to `f64`; see [`cmp_squared_dist`] for exact ordering.
pub fn squared_dist(a: Point, b: Point) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    dx * dx + dy * dy
}

/// Exact comparison of `|a-b|^2` against `|c-d|^2`.
pub fn cmp_squared_dist(a: Point, b: Point, c: Point, d: Point) -> std::cmp::Ordering {
    let l = squared_dist(a, b);
    let r = squared_dist(c, d);
    // Each rounded square carries a relative error below 4 ulp.
    let tol = 8.0 * f64::EPSILON * l.max(r);
    if (l - r).abs() > tol && l.is_finite() && r.is_finite() && l.max(r) > f64::MIN_POSITIVE * 1e8 {
        return l.partial_cmp(&r).expect("finite");
    }
    exact_squared_dist(a, b).cmp(&exact_squared_dist(c, d))
}

fn exact_squared_dist(a: Point, b: Point) -> BigRational {
    let dx = rational(a.x) - rational(b.x);
    let dy = rational(a.y) - rational(b.y);
    &dx * &dx + &dy * &dy
}
