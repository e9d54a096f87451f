use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

use logstar_delaunay::geometry::{in_circle, orient2d};
use logstar_delaunay::random::rng;
use logstar_delaunay::{Point, Sign};

fn q(v: f64) -> BigRational {
    BigRational::from_float(v).unwrap()
}

fn sign(v: BigRational) -> Sign {
    if v.is_zero() {
        Sign::Zero
    } else if v.is_positive() {
        Sign::Positive
    } else {
        Sign::Negative
    }
}

fn orient_exact(a: Point, b: Point, c: Point) -> Sign {
    let (ax, ay, bx, by, cx, cy) = (q(a.x), q(a.y), q(b.x), q(b.y), q(c.x), q(c.y));
    sign((&bx - &ax) * (&cy - &ay) - (&by - &ay) * (&cx - &ax))
}

fn in_circle_exact(a: Point, b: Point, c: Point, d: Point) -> Sign {
    let row = |p: Point| {
        let x = q(p.x) - q(d.x);
        let y = q(p.y) - q(d.y);
        let w = &x * &x + &y * &y;
        (x, y, w)
    };
    let (ax, ay, aw) = row(a);
    let (bx, by, bw) = row(b);
    let (cx, cy, cw) = row(c);
    let det = &ax * (&by * &cw - &bw * &cy) - &ay * (&bx * &cw - &bw * &cx)
        + &aw * (&bx * &cy - &by * &cx);
    sign(det)
}

fn nudge(v: f64, steps: i64) -> f64 {
    let mut v = v;
    for _ in 0..steps.abs() {
        v = if steps > 0 {
            v.next_up()
        } else {
            v.next_down()
        };
    }
    v
}

/// A quadruple that is exactly or almost degenerate: points on a fine grid
/// along a line or on a circle through integer Pythagorean points, some
/// moved by a few ulps.
fn near_degenerate(r: &mut impl Rng) -> [Point; 4] {
    let scale = 2f64.powi(-r.gen_range(0..40));
    let ox = r.gen_range(-1000..1000) as f64 * scale;
    let oy = r.gen_range(-1000..1000) as f64 * scale;
    let mut pts = if r.gen_bool(0.5) {
        let (dx, dy) = (r.gen_range(-7..8) as f64, r.gen_range(-7..8) as f64);
        [0, 1, 3, r.gen_range(-5..6)]
            .map(|t: i32| Point::new(ox + t as f64 * dx * scale, oy + t as f64 * dy * scale))
    } else {
        let circle = [
            (5, 0),
            (3, 4),
            (0, 5),
            (-4, 3),
            (-5, 0),
            (-3, -4),
            (0, -5),
            (4, -3),
        ];
        let pick: [usize; 4] = std::array::from_fn(|i| (r.gen_range(0..2) + 2 * i) % 8);
        pick.map(|i| {
            let (x, y) = circle[i];
            Point::new(ox + x as f64 * scale, oy + y as f64 * scale)
        })
    };
    for p in pts.iter_mut() {
        if r.gen_bool(0.3) {
            p.x = nudge(p.x, r.gen_range(-2..3));
            p.y = nudge(p.y, r.gen_range(-2..3));
        }
    }
    pts
}

#[test]
fn predicates_match_rational_oracle() {
    let mut r = rng(2024);
    let mut zeros = 0;
    for i in 0..100_000 {
        let [a, b, c, d] = if i % 2 == 0 {
            [(); 4].map(|_| Point::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))
        } else {
            near_degenerate(&mut r)
        };
        let o = orient2d(a, b, c);
        assert_eq!(o, orient_exact(a, b, c), "orient {a:?} {b:?} {c:?}");
        let s = in_circle(a, b, c, d);
        assert_eq!(
            s,
            in_circle_exact(a, b, c, d),
            "in_circle {a:?} {b:?} {c:?} {d:?}"
        );
        zeros += (o == Sign::Zero) as usize + (s == Sign::Zero) as usize;
    }
    // The degenerate half must actually exercise exact zeros.
    assert!(zeros > 5_000, "only {zeros} exact zeros");
}

fn coord() -> impl Strategy<Value = f64> {
    prop_oneof![-1e3..1e3f64, (-64i32..64).prop_map(|v| v as f64 / 8.0),]
}

fn point() -> impl Strategy<Value = Point> {
    (coord(), coord()).prop_map(|(x, y)| Point::new(x, y))
}

proptest! {
    #[test]
    fn orient_is_antisymmetric_and_cyclic(a in point(), b in point(), c in point()) {
        let o = orient2d(a, b, c);
        prop_assert_eq!(orient2d(b, c, a), o);
        prop_assert_eq!(orient2d(c, a, b), o);
        prop_assert_eq!(orient2d(b, a, c), o.reversed());
        prop_assert_eq!(orient2d(a, c, b), o.reversed());
    }

    #[test]
    fn in_circle_is_cyclic_and_flips_with_orientation(
        a in point(), b in point(), c in point(), d in point()
    ) {
        let s = in_circle(a, b, c, d);
        prop_assert_eq!(in_circle(b, c, a, d), s);
        prop_assert_eq!(in_circle(c, a, b, d), s);
        prop_assert_eq!(in_circle(b, a, c, d), s.reversed());
        prop_assert_eq!(s, in_circle_exact(a, b, c, d));
    }

    #[test]
    fn vertices_lie_on_their_circle(a in point(), b in point(), c in point()) {
        prop_assert_eq!(in_circle(a, b, c, a), Sign::Zero);
        prop_assert_eq!(in_circle(a, b, c, c), Sign::Zero);
    }
}
