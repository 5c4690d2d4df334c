mod common;

use proptest::prelude::*;
use smallpoly::constructions::{realize, regular_small, star_init};
use smallpoly::diamgraph::{
    check_thrackle, extract, is_thrackle, topology_of, DiameterGraph, GraphError, Topology, DEFAULT_TOL_EDGE,
};
use smallpoly::geometry::{pairwise_distances, ConvexPolygon, Point2};

use common::{triacontadigon, unit_square};

fn mirrored(p: &ConvexPolygon) -> ConvexPolygon {
    ConvexPolygon::new(p.vertices().iter().rev().map(|v| Point2::new(-v.x, v.y)).collect()).unwrap()
}

#[test]
fn fixture_graph() {
    let p = triacontadigon();
    let g = extract(&p, DEFAULT_TOL_EDGE).unwrap();
    assert_eq!(g.edges.len(), 32);
    assert_eq!(g.cycle_len(), 21);
    let t = topology_of(&g);
    assert_eq!((t.n, t.cycle, t.pendants()), (32, 21, 11));
    assert_eq!(t.composition.iter().sum::<usize>(), 11);
    for v in 0..32 {
        if !g.cycle.contains(&v) {
            assert_eq!(g.degree(v), 1);
        }
    }
    assert!(check_thrackle(&g, &p));
}

/// The default edge tolerance sits far inside the gap between the chords and
/// the next-longest vertex pair.
#[test]
fn fixture_chord_gap() {
    let m = pairwise_distances(&triacontadigon());
    let d = m.sorted_distances();
    // Longest first.
    let chords = &d[..32];
    let next = d[32];
    assert!(chords.iter().all(|&x| (x - 1.0).abs() < 1e-12), "chords {chords:?}");
    assert!(1.0 - next > 1e-3, "next-longest distance {next}");
}

#[test]
fn pentagon_is_a_pentagram() {
    let p = regular_small(5).unwrap();
    let g = extract(&p, DEFAULT_TOL_EDGE).unwrap();
    assert_eq!(g.edges.len(), 5);
    assert_eq!(g.cycle_len(), 5);
    assert_eq!(g.pendant_counts(), vec![0; 5]);
    assert_eq!(topology_of(&g), Topology::new(5, 5, vec![0; 5]).unwrap());
    assert!(check_thrackle(&g, &p));
}

#[test]
fn star_32_with_triangle_cycle() {
    let t = Topology::balanced(32, 3).unwrap();
    let r = realize(&star_init(&t).unwrap()).unwrap();
    let g = extract(&r.polygon, DEFAULT_TOL_EDGE).unwrap();
    assert_eq!(g.edges.len(), 32);
    assert_eq!(g.cycle_len(), 3);
    assert_eq!(g.pendant_counts().iter().sum::<usize>(), 29);
    // Oracle: enumerate the unit pairs directly.
    let m = pairwise_distances(&r.polygon);
    let mut unit = Vec::new();
    for i in 0..32 {
        for j in i + 1..32 {
            if (m.get(i, j) - 1.0).abs() <= 1e-9 {
                unit.push((i, j));
            }
        }
    }
    let mut edges = g.edges.clone();
    edges.sort();
    assert_eq!(edges, unit);
}

#[test]
fn quadrilateral_star() {
    let t = Topology::new(4, 3, vec![1, 0, 0]).unwrap();
    let g = extract(&realize(&star_init(&t).unwrap()).unwrap().polygon, DEFAULT_TOL_EDGE).unwrap();
    // Canonical (lexicographically smallest) form of [1,0,0].
    assert_eq!(topology_of(&g), Topology::new(4, 3, vec![0, 0, 1]).unwrap());
    assert!(topology_of(&g).equivalent(&t));
}

#[test]
fn structure_errors_are_distinct() {
    assert_eq!(
        extract(&unit_square(), DEFAULT_TOL_EDGE),
        Err(GraphError::EdgeCount { expected: 4, found: 2 })
    );
    assert_eq!(
        DiameterGraph::from_edges(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]),
        Err(GraphError::EvenCycle { length: 4 })
    );
    assert_eq!(
        DiameterGraph::from_edges(6, vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]),
        Err(GraphError::CycleCount { found: 2 })
    );
    assert_eq!(
        DiameterGraph::from_edges(5, vec![(0, 1), (1, 2), (2, 0), (0, 3), (3, 4)]),
        Err(GraphError::PendantOffCycle { vertex: 4 })
    );
    assert!(matches!(extract(&unit_square(), 0.2), Err(GraphError::InvalidTolerance(_))));
}

#[test]
fn disjoint_parallel_edges_are_not_a_thrackle() {
    let sq = unit_square();
    assert!(!is_thrackle(&[(0, 1), (2, 3)], &sq));
    assert!(is_thrackle(&[(0, 2), (1, 3)], &sq));
}

#[test]
fn topology_ignores_relabeling() {
    let p = triacontadigon();
    let t = topology_of(&extract(&p, DEFAULT_TOL_EDGE).unwrap());
    for k in [1, 5, 17, 31] {
        let q = p.relabeled(k);
        assert_eq!(topology_of(&extract(&q, DEFAULT_TOL_EDGE).unwrap()), t);
    }
    assert_eq!(topology_of(&extract(&mirrored(&p), DEFAULT_TOL_EDGE).unwrap()), t);
}

fn topologies() -> impl Strategy<Value = Topology> {
    (1usize..8, 0usize..14)
        .prop_flat_map(|(half, extra)| {
            let c = 2 * half + 1;
            (Just(c), proptest::collection::vec(0usize..4, c), Just(extra))
        })
        .prop_map(|(c, weights, extra)| {
            // Spread `extra` pendants proportionally to the random weights.
            let total: usize = weights.iter().sum::<usize>().max(1);
            let mut comp: Vec<usize> = weights.iter().map(|w| w * extra / total).collect();
            let missing = extra - comp.iter().sum::<usize>();
            comp[0] += missing;
            Topology::new(c + extra, c, comp).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn star_realizations_round_trip(t in topologies()) {
        let Ok(config) = star_init(&t) else {
            return Err(TestCaseError::reject("no convex star start"));
        };
        let r = realize(&config).unwrap();
        let g = extract(&r.polygon, DEFAULT_TOL_EDGE).unwrap();
        prop_assert_eq!(g.edges.len(), t.n);
        prop_assert_eq!(g.cycle_len() % 2, 1);
        prop_assert!(topology_of(&g).equivalent(&t), "{} vs {}", topology_of(&g), t);
        prop_assert!(check_thrackle(&g, &r.polygon));
    }
}
