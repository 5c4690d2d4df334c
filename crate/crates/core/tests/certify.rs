mod common;

use std::f64::consts::SQRT_2;

use proptest::prelude::*;
use smallpoly::certify::{
    certified_diameter, certified_distance, certified_perimeter, verify, BoundedValue, VerifyError,
};
use smallpoly::diamgraph::GraphError;
use smallpoly::constructions::{reference_records, regular_small, upper_bound};
use smallpoly::geometry::{diameter, perimeter, ConvexPolygon, Point2};

use common::{random_convex, rng, triacontadigon, unit_square, unit_triangle};

#[test]
fn square() {
    let p = certified_perimeter(&unit_square());
    assert!(p.contains(4.0) && p.width() <= 1e-14);
    let d = certified_diameter(&unit_square());
    assert!(d.contains(SQRT_2) && d.width() <= 1e-15);
}

#[test]
fn triangle_diameter_contains_one() {
    assert!(certified_diameter(&unit_triangle()).contains(1.0));
}

#[test]
fn fixture_enclosures() {
    let p = triacontadigon();
    let per = certified_perimeter(&p);
    assert!(per.width() <= 1e-12, "width {:e}", per.width());
    assert!((per.lo - 3.1403311569546).abs() <= 1e-12 && (per.hi - 3.1403311569546).abs() <= 1e-12);
    assert!(per.contains(perimeter(&p)));
    let d = certified_diameter(&p);
    assert!(d.width() <= 1e-13);
    assert!((d.lo - 1.0).abs() <= 1e-9 && (d.hi - 1.0).abs() <= 1e-9);
    assert!(d.contains(diameter(&p).length));
}

/// The record perimeter is published with 13 and with 15 decimals; the enclosure
/// must be compatible with both.
#[test]
fn fixture_agrees_with_both_printed_values() {
    let per = certified_perimeter(&triacontadigon());
    assert!(per.agrees_with_decimal("3.1403311569546"));
    assert!(per.agrees_with_decimal("3.140331156954614"));
    assert!(per.certified_digits() >= 14);
}

#[test]
fn fixture_report() {
    let r = verify(&triacontadigon()).unwrap();
    assert_eq!(r.n, 32);
    assert!(r.convex);
    assert_eq!(r.graph_topology.cycle, 21);
    assert!(r.unit_diameter());
    assert!(r.failures().is_empty());
    // Bound minus the published record: 3.140331156954753 - 3.140331156954614.
    let published = upper_bound(32).unwrap() - reference_records()[4].perimeter;
    assert!((r.bound_gap - published).abs() <= 1e-14, "{:e} vs {published:e}", r.bound_gap);
    assert!(r.bound_gap > 0.0 && r.bound_gap < 1.5e-13);
    assert!(r.perimeter.hi <= upper_bound(32).unwrap() + 1e-9);
}

#[test]
fn regular_reports() {
    let five = verify(&regular_small(5).unwrap()).unwrap();
    assert!(five.bound_gap.abs() <= 1e-12);
    assert!(five.failures().is_empty());
    // The even regular polygon has only n/2 diameters, so the structure
    // check rejects it; its gap comes from the certified perimeter alone.
    let p32 = regular_small(32).unwrap();
    assert!(matches!(
        verify(&p32),
        Err(VerifyError::Structure(GraphError::EdgeCount { expected: 32, found: 16 }))
    ));
    let gap = upper_bound(32).unwrap() - certified_perimeter(&p32).lo;
    // Unit diameter means circumradius 1/2, so the perimeter is 32 sin(pi/32).
    let expected = upper_bound(32).unwrap() - 32.0 * (std::f64::consts::PI / 32.0).sin();
    assert!((gap - expected).abs() <= 1e-14, "{gap:e} vs {expected:e}");
    assert!((gap - 3.78e-3).abs() < 1e-5);
}

#[test]
fn corrupted_fixture_fails() {
    let p = triacontadigon();
    let mut v = p.vertices().to_vec();
    v[7].x += 1e-2;
    let bad = ConvexPolygon::new(v).unwrap();
    match verify(&bad) {
        Ok(r) => assert!(r.failures().iter().any(|f| f.contains("diameter")), "{:?}", r.failures()),
        Err(e) => assert!(e.to_string().contains("diameter graph")),
    }
}

#[test]
fn interval_basics() {
    let b = BoundedValue::new(1.0, 2.0);
    assert_eq!(b.midpoint(), 1.5);
    assert_eq!(b.width(), 1.0);
    assert_eq!(BoundedValue::new(1.23456, 1.23461).certified_digits(), 4);
    assert_eq!(certified_distance(Point2::new(1.0, 1.0), Point2::new(4.0, 5.0)), BoundedValue::point(5.0));
}

#[test]
#[should_panic(expected = "empty interval")]
fn empty_interval_panics() {
    BoundedValue::new(2.0, 1.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn point_estimates_lie_inside(seed in any::<u64>(), n in 3usize..=64) {
        let p = random_convex(&mut rng(seed), n);
        let d = diameter(&p).length;
        let small = p.scaled(1.0 / d);
        let per = certified_perimeter(&small);
        prop_assert!(per.contains(perimeter(&small)));
        prop_assert!(per.width() <= 1e-12);
        let dia = certified_diameter(&small);
        prop_assert!(dia.contains(diameter(&small).length));
        prop_assert!(dia.width() <= 1e-13);
    }

    #[test]
    fn small_polygons_respect_the_bound(seed in any::<u64>(), n in 3usize..=64) {
        let p = random_convex(&mut rng(seed), n);
        let d = certified_diameter(&p);
        // Shrink by the upper diameter bound so the exact diameter is <= 1.
        let small = p.scaled(1.0 / d.hi.next_up());
        prop_assert!(certified_perimeter(&small).lo <= upper_bound(n).unwrap());
    }
}
