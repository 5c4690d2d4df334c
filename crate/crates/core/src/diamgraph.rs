//! Diameter graphs of small polygons.
//!
//! The diameter graph joins every pair of vertices at maximal distance. For the
//! long-perimeter polygons handled here it has exactly `n` edges and consists of
//! one odd cycle with pendant edges hanging off cycle vertices. [`extract`]
//! recovers that structure and rejects anything else with a specific error.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{diameter, pairwise_distances, ConvexPolygon, Point2, TOL_CONVEX};

/// Relative gap below the diameter within which a pair counts as a diameter chord.
pub const DEFAULT_TOL_EDGE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("edge tolerance {0} outside (0, 0.1)")]
    InvalidTolerance(f64),
    #[error("diameter graph has {found} edges, expected one per vertex ({expected})")]
    EdgeCount { expected: usize, found: usize },
    #[error("diameter graph has {found} independent cycles, expected exactly one")]
    CycleCount { found: usize },
    #[error("diameter graph cycle has even length {length}")]
    EvenCycle { length: usize },
    #[error("vertex {vertex} hangs off a vertex that is not on the cycle")]
    PendantOffCycle { vertex: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TopologyError {
    #[error("cycle length {0} must be odd and at least 3")]
    BadCycle(usize),
    #[error("cycle length {cycle} exceeds vertex count {n}")]
    CycleTooLong { n: usize, cycle: usize },
    #[error("composition has {found} entries, expected {expected}")]
    CompositionLength { expected: usize, found: usize },
    #[error("composition sums to {found}, expected n - c = {expected}")]
    CompositionSum { expected: usize, found: usize },
}

/// Combinatorial type of a diameter graph: vertex count, odd cycle length and
/// the number of pendants hanging off each cycle vertex, in cycle order.
///
/// The derived ordering (cycle length, then composition) is the tie-breaking
/// order used when ranking optimizer results.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Topology {
    pub n: usize,
    pub cycle: usize,
    pub composition: Vec<usize>,
}

impl Topology {
    pub fn new(n: usize, cycle: usize, composition: Vec<usize>) -> Result<Self, TopologyError> {
        if cycle < 3 || cycle.is_multiple_of(2) {
            return Err(TopologyError::BadCycle(cycle));
        }
        if cycle > n {
            return Err(TopologyError::CycleTooLong { n, cycle });
        }
        if composition.len() != cycle {
            return Err(TopologyError::CompositionLength {
                expected: cycle,
                found: composition.len(),
            });
        }
        let sum: usize = composition.iter().sum();
        if sum != n - cycle {
            return Err(TopologyError::CompositionSum {
                expected: n - cycle,
                found: sum,
            });
        }
        Ok(Self { n, cycle, composition })
    }

    /// `n - c` pendants spread as evenly as possible, larger counts first.
    pub fn balanced(n: usize, cycle: usize) -> Result<Self, TopologyError> {
        if cycle > n {
            return Err(TopologyError::CycleTooLong { n, cycle });
        }
        if cycle < 3 || cycle.is_multiple_of(2) {
            return Err(TopologyError::BadCycle(cycle));
        }
        let extra = n - cycle;
        // Spread the remainder with a Bresenham step so the larger counts are
        // evenly interleaved along the cycle.
        let composition = (0..cycle)
            .map(|j| (j + 1) * extra / cycle - j * extra / cycle)
            .collect();
        Self::new(n, cycle, composition)
    }

    pub fn pendants(&self) -> usize {
        self.n - self.cycle
    }

    /// Lexicographically smallest composition over all rotations and reflections.
    pub fn canonical(&self) -> Topology {
        Topology {
            n: self.n,
            cycle: self.cycle,
            composition: canonical_composition(&self.composition),
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.composition == canonical_composition(&self.composition)
    }

    /// Same topology up to relabeling of the cycle.
    pub fn equivalent(&self, other: &Topology) -> bool {
        self.n == other.n && self.cycle == other.cycle && self.canonical() == other.canonical()
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, c={}, [", self.n, self.cycle)?;
        for (k, m) in self.composition.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "])")
    }
}

pub fn canonical_composition(composition: &[usize]) -> Vec<usize> {
    let m = composition.len();
    let mut best = composition.to_vec();
    let reversed: Vec<usize> = composition.iter().rev().copied().collect();
    for seq in [composition, reversed.as_slice()] {
        for k in 0..m {
            let candidate: Vec<usize> = (0..m).map(|i| seq[(k + i) % m]).collect();
            if candidate < best {
                best = candidate;
            }
        }
    }
    best
}

/// Diameter graph of a polygon, decomposed into its odd cycle and pendants.
///
/// Vertex labels are polygon indices. `cycle` starts at the smallest cycle
/// vertex and proceeds toward the smaller-indexed of its two cycle neighbors.
/// `pendants[k]` lists the degree-one neighbors of `cycle[k]`, ordered by
/// polygon index.
#[derive(Debug, Clone, PartialEq)]
pub struct DiameterGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub cycle: Vec<usize>,
    pub pendants: Vec<Vec<usize>>,
}

impl DiameterGraph {
    /// Analyse an explicit edge list on `n` vertices.
    pub fn from_edges(n: usize, mut edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        for e in &mut edges {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        edges.dedup();
        if edges.len() != n {
            return Err(GraphError::EdgeCount {
                expected: n,
                found: edges.len(),
            });
        }

        let mut uf = UnionFind::new(n);
        for &(a, b) in &edges {
            uf.union(a, b);
        }
        // With |E| = |V| the cyclomatic number equals the component count.
        let components = uf.components();
        if components != 1 {
            return Err(GraphError::CycleCount { found: components });
        }

        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in &edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }

        // Strip leaves until only the cycle remains.
        let mut degree: Vec<usize> = adjacency.iter().map(Vec::len).collect();
        let mut removed = vec![false; n];
        let mut stack: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
        while let Some(v) = stack.pop() {
            if removed[v] || degree[v] != 1 {
                continue;
            }
            removed[v] = true;
            for &w in &adjacency[v] {
                if !removed[w] {
                    degree[w] -= 1;
                    if degree[w] == 1 {
                        stack.push(w);
                    }
                }
            }
        }
        let on_cycle: Vec<bool> = removed.iter().map(|r| !r).collect();
        let cycle_len = on_cycle.iter().filter(|&&b| b).count();
        if cycle_len % 2 == 0 {
            return Err(GraphError::EvenCycle { length: cycle_len });
        }
        // Any deeper tree has a leaf whose neighbor is off the cycle.
        for v in 0..n {
            if !on_cycle[v] && adjacency[v].len() == 1 && !on_cycle[adjacency[v][0]] {
                return Err(GraphError::PendantOffCycle { vertex: v });
            }
        }

        let start = (0..n).find(|&v| on_cycle[v]).expect("unicyclic graph has a cycle");
        let first = *adjacency[start]
            .iter()
            .find(|&&w| on_cycle[w])
            .expect("cycle vertex has cycle neighbors");
        let mut cycle = vec![start, first];
        while cycle.len() < cycle_len {
            let cur = cycle[cycle.len() - 1];
            let prev = cycle[cycle.len() - 2];
            let next = *adjacency[cur]
                .iter()
                .find(|&&w| on_cycle[w] && w != prev)
                .expect("cycle continues");
            cycle.push(next);
        }
        let pendants = cycle
            .iter()
            .map(|&v| {
                adjacency[v]
                    .iter()
                    .copied()
                    .filter(|&w| !on_cycle[w])
                    .collect()
            })
            .collect();

        Ok(Self {
            n,
            edges,
            cycle,
            pendants,
        })
    }

    pub fn cycle_len(&self) -> usize {
        self.cycle.len()
    }

    /// Pendant counts per cycle vertex, in cycle order.
    pub fn pendant_counts(&self) -> Vec<usize> {
        self.pendants.iter().map(Vec::len).collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.0 == v || e.1 == v).count()
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    fn components(&mut self) -> usize {
        (0..self.parent.len()).filter(|&v| self.find(v) == v).count()
    }
}

/// Diameter graph of `p`: all pairs within relative `tol_edge` of the diameter.
pub fn extract(p: &ConvexPolygon, tol_edge: f64) -> Result<DiameterGraph, GraphError> {
    if !(tol_edge > 0.0 && tol_edge < 0.1) {
        return Err(GraphError::InvalidTolerance(tol_edge));
    }
    let d = diameter(p).length;
    let edges = pairwise_distances(p).pairs_at_least(d * (1.0 - tol_edge));
    DiameterGraph::from_edges(p.len(), edges)
}

/// Canonical topology of a valid diameter graph.
pub fn topology_of(g: &DiameterGraph) -> Topology {
    Topology {
        n: g.n,
        cycle: g.cycle_len(),
        composition: canonical_composition(&g.pendant_counts()),
    }
}

/// Whether the open segments `ab` and `cd` properly cross.
fn segments_cross(a: Point2, b: Point2, c: Point2, d: Point2, tol: f64) -> bool {
    let o1 = (b - a).cross(c - a);
    let o2 = (b - a).cross(d - a);
    let o3 = (d - c).cross(a - c);
    let o4 = (d - c).cross(b - c);
    ((o1 > tol && o2 < -tol) || (o1 < -tol && o2 > tol))
        && ((o3 > tol && o4 < -tol) || (o3 < -tol && o4 > tol))
}

/// Whether every two edges either share an endpoint or cross.
pub fn is_thrackle(edges: &[(usize, usize)], p: &ConvexPolygon) -> bool {
    let v = p.vertices();
    let scale = p.scale();
    let tol = TOL_CONVEX * scale * scale;
    for (k, &(a, b)) in edges.iter().enumerate() {
        for &(c, d) in &edges[k + 1..] {
            if a == c || a == d || b == c || b == d {
                continue;
            }
            if !segments_cross(v[a], v[b], v[c], v[d], tol) {
                return false;
            }
        }
    }
    true
}

pub fn check_thrackle(g: &DiameterGraph, p: &ConvexPolygon) -> bool {
    is_thrackle(&g.edges, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn regular_pentagon() -> ConvexPolygon {
        ConvexPolygon::new((0..5).map(|k| Point2::unit(2.0 * PI * k as f64 / 5.0)).collect()).unwrap()
    }

    #[test]
    fn pentagon_is_a_pentagram() {
        let p = regular_pentagon();
        let g = extract(&p, DEFAULT_TOL_EDGE).unwrap();
        assert_eq!(g.edges, vec![(0, 2), (0, 3), (1, 3), (1, 4), (2, 4)]);
        assert_eq!(g.cycle, vec![0, 2, 4, 1, 3]);
        assert_eq!(topology_of(&g), Topology::new(5, 5, vec![0; 5]).unwrap());
        assert!(check_thrackle(&g, &p));
    }

    #[test]
    fn quadrilateral_with_one_pendant() {
        let g = DiameterGraph::from_edges(4, vec![(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        assert_eq!(g.cycle, vec![0, 1, 2]);
        assert_eq!(g.pendants, vec![vec![], vec![], vec![3]]);
        assert_eq!(topology_of(&g), Topology::new(4, 3, vec![0, 0, 1]).unwrap().canonical());
        assert_eq!(topology_of(&g).composition, vec![0, 0, 1]);
    }

    #[test]
    fn structure_errors_are_distinct() {
        assert_eq!(
            DiameterGraph::from_edges(4, vec![(0, 1), (2, 3)]),
            Err(GraphError::EdgeCount { expected: 4, found: 2 })
        );
        // two triangles
        assert_eq!(
            DiameterGraph::from_edges(6, vec![(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]),
            Err(GraphError::CycleCount { found: 2 })
        );
        assert_eq!(
            DiameterGraph::from_edges(4, vec![(0, 1), (1, 2), (2, 3), (0, 3)]),
            Err(GraphError::EvenCycle { length: 4 })
        );
        // triangle with a path of length two hanging off vertex 0
        assert_eq!(
            DiameterGraph::from_edges(5, vec![(0, 1), (1, 2), (0, 2), (0, 3), (3, 4)]),
            Err(GraphError::PendantOffCycle { vertex: 4 })
        );
    }

    #[test]
    fn tolerance_is_checked() {
        let p = regular_pentagon();
        assert!(matches!(extract(&p, 0.0), Err(GraphError::InvalidTolerance(_))));
        assert!(matches!(extract(&p, 0.2), Err(GraphError::InvalidTolerance(_))));
    }

    #[test]
    fn disjoint_edges_are_not_a_thrackle() {
        let p = ConvexPolygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ])
        .unwrap();
        assert!(!is_thrackle(&[(0, 1), (2, 3)], &p));
        assert!(is_thrackle(&[(0, 2), (1, 3)], &p));
    }

    #[test]
    fn canonical_composition_is_dihedral_minimum() {
        assert_eq!(canonical_composition(&[2, 0, 1]), vec![0, 1, 2]);
        assert_eq!(canonical_composition(&[1, 0, 0]), vec![0, 0, 1]);
        assert_eq!(canonical_composition(&[1, 2, 0, 0, 0]), vec![0, 0, 0, 1, 2]);
        assert_eq!(canonical_composition(&[2, 1, 0, 0, 0]), vec![0, 0, 0, 1, 2]);
    }

    #[test]
    fn balanced_compositions() {
        let t = Topology::balanced(32, 21).unwrap();
        assert_eq!(t.composition.iter().sum::<usize>(), 11);
        assert!(t.composition.iter().all(|&m| m <= 1));
        let t = Topology::balanced(32, 3).unwrap();
        let mut c = t.composition.clone();
        c.sort();
        assert_eq!(c, vec![9, 10, 10]);
        assert!(Topology::balanced(32, 4).is_err());
        assert!(Topology::balanced(5, 7).is_err());
    }
}
