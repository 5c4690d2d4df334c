mod common;

use std::f64::consts::{PI, SQRT_2};

use approx::assert_relative_eq;
use proptest::prelude::*;
use smallpoly::geometry::{
    canonicalize, diameter, diameter_brute_force, is_convex, pairwise_distances, perimeter, ConvexPolygon,
    GeometryError, Point2,
};

use common::{max_abs_diff, random_convex, rng, triacontadigon, unit_square, unit_triangle};

#[test]
fn perimeter_examples() {
    assert_eq!(perimeter(&unit_square()), 4.0);
    assert_relative_eq!(perimeter(&unit_triangle()), 3.0, max_relative = 1e-15);
    assert!((perimeter(&triacontadigon()) - 3.1403311569546).abs() <= 1e-12);
}

#[test]
fn diameter_examples() {
    let d = diameter(&unit_square());
    assert_relative_eq!(d.length, SQRT_2, max_relative = 1e-15);
    assert!(d.pair == (0, 2) || d.pair == (1, 3), "{:?}", d.pair);
    assert!((diameter(&triacontadigon()).length - 1.0).abs() <= 1e-9);
    assert!((diameter(&unit_triangle()).length - 1.0).abs() <= 1e-15);
}

#[test]
fn convexity_examples() {
    let sq = unit_square();
    assert!(is_convex(sq.vertices()));
    let mut swapped = sq.vertices().to_vec();
    swapped.swap(1, 2);
    assert!(!is_convex(&swapped));
    assert!(is_convex(triacontadigon().vertices()));
    let cw: Vec<Point2> = sq.vertices().iter().rev().copied().collect();
    assert!(is_convex(&cw), "orientation-free test");
    assert!(matches!(ConvexPolygon::new(cw), Err(GeometryError::NotConvex { .. })));
    assert!(!is_convex(&[Point2::new(0.0, 0.0), Point2::new(1.0, 0.0)]));
}

#[test]
fn collinear_vertex_is_tolerated() {
    let p = ConvexPolygon::new(vec![
        Point2::new(0.0, 0.0),
        Point2::new(0.5, 0.0),
        Point2::new(1.0, 0.0),
        Point2::new(0.0, 1.0),
    ]);
    assert!(p.is_ok());
}

#[test]
fn validation_names_the_invariant() {
    assert_eq!(
        ConvexPolygon::new(vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0)]),
        Err(GeometryError::TooFewVertices(2))
    );
    assert!(matches!(
        ConvexPolygon::new(vec![Point2::new(0.0, 0.0), Point2::new(f64::NAN, 0.0), Point2::new(0.0, 1.0)]),
        Err(GeometryError::NonFinite { index: 1 })
    ));
    assert!(matches!(
        ConvexPolygon::new(vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(1.0, 0.0)]),
        Err(GeometryError::CoincidentVertices { .. })
    ));
    let mut bowtie = unit_square().vertices().to_vec();
    bowtie.swap(1, 2);
    assert!(ConvexPolygon::new(bowtie).is_err());
}

#[test]
fn fixture_is_already_canonical() {
    let p = triacontadigon();
    assert_eq!(canonicalize(&p).vertices(), p.vertices());
}

#[test]
fn rotated_fixture_canonicalizes_back() {
    let p = triacontadigon();
    let moved = p.transformed(37f64.to_radians(), Point2::new(0.3, -1.7));
    let back = canonicalize(&moved);
    assert!(max_abs_diff(back.vertices(), p.vertices()) <= 1e-12);
}

#[test]
fn pairwise_distance_examples() {
    let t = pairwise_distances(&unit_triangle());
    for i in 0..3 {
        assert_eq!(t.get(i, i), 0.0);
        for j in 0..3 {
            if i != j {
                assert_relative_eq!(t.get(i, j), 1.0, max_relative = 1e-15);
            }
        }
    }
    let s = pairwise_distances(&unit_square());
    for i in 0..4 {
        for j in 0..4 {
            let d = s.get(i, j);
            assert!(i == j || d == 1.0 || (d - SQRT_2).abs() <= 1e-15);
            assert_eq!(d, s.get(j, i));
        }
    }
    let m = pairwise_distances(&triacontadigon());
    assert_eq!(m.pairs_at_least(m.max() - 1e-6).len(), 32);
}

#[test]
fn distance_matrix_triangle_inequality() {
    let m = pairwise_distances(&triacontadigon());
    let n = m.n();
    let slack = 4.0 * f64::EPSILON * n as f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                assert!(m.get(i, k) <= m.get(i, j) + m.get(j, k) + slack);
            }
        }
    }
}

#[test]
fn regular_polygon_perimeter_is_compensated() {
    for k in 3..=200usize {
        let side = 2.0 * (PI / k as f64).sin();
        let pts = (0..k).map(|i| Point2::unit(2.0 * PI * i as f64 / k as f64)).collect();
        let p = ConvexPolygon::new(pts).unwrap();
        let exact = k as f64 * side;
        assert!(((perimeter(&p) - exact) / exact).abs() <= 1e-14, "k = {k}");
    }
}

#[test]
fn calipers_match_brute_force_on_1000_polygons() {
    let mut r = rng(2024);
    for case in 0..1000 {
        let n = 3 + case % 62;
        let p = random_convex(&mut r, n);
        let fast = diameter(&p);
        let slow = diameter_brute_force(&p);
        assert!(
            (fast.length - slow.length).abs() <= 1e-14 * p.scale(),
            "case {case}: {} vs {}",
            fast.length,
            slow.length
        );
    }
}

#[test]
fn diameter_ties_go_to_the_lowest_pair() {
    let pts = (0..6).map(|i| Point2::unit(PI * i as f64 / 3.0)).collect();
    let hexagon = ConvexPolygon::new(pts).unwrap();
    assert_eq!(diameter(&hexagon).pair, diameter_brute_force(&hexagon).pair);
    assert_eq!(diameter(&unit_square()).pair, (0, 2));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rigid_motion_invariance(seed in any::<u64>(), n in 3usize..40, angle in -PI..PI, dx in -10.0..10.0f64, dy in -10.0..10.0f64) {
        let p = random_convex(&mut rng(seed), n);
        let q = p.transformed(angle, Point2::new(dx, dy));
        let (p0, q0) = (perimeter(&p), perimeter(&q));
        prop_assert!(((p0 - q0) / p0).abs() <= 1e-12);
        let (d0, d1) = (diameter(&p).length, diameter(&q).length);
        prop_assert!(((d0 - d1) / d0).abs() <= 1e-12);
    }

    #[test]
    fn canonicalize_is_idempotent(seed in any::<u64>(), n in 3usize..40) {
        let p = random_convex(&mut rng(seed), n);
        let once = canonicalize(&p);
        let twice = canonicalize(&once);
        prop_assert!(max_abs_diff(once.vertices(), twice.vertices()) <= 1e-12 * p.scale().max(1.0));
        let last = once.vertex(n - 1);
        prop_assert_eq!((last.x, last.y), (0.0, 0.0));
        prop_assert!(once.vertex(0).x > 0.0 && once.vertex(0).y.abs() <= 1e-12 * p.scale().max(1.0));
        prop_assert!((perimeter(&once) - perimeter(&p)).abs() <= 1e-12 * perimeter(&p));
        prop_assert!((diameter(&once).length - diameter(&p).length).abs() <= 1e-12 * diameter(&p).length);
    }
}
