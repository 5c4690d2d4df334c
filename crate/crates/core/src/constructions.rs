//! Closed-form objects: the perimeter upper bound, regular small polygons,
//! the published 32-gon records, and angle configurations built from unit
//! edges for the optimizer.

use std::f64::consts::PI;

use thiserror::Error;

use crate::diamgraph::{DiameterGraph, Topology, TopologyError};
use crate::geometry::{canonicalize, diameter, ConvexPolygon, GeometryError, Point2};
use crate::sum::NeumaierSum;

/// Closure tolerance accepted by [`realize`].
pub const TOL_CLOSURE: f64 = 1e-9;

/// Vertex count of the published record table.
pub const RECORD_N: usize = 32;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstructionError {
    #[error("polygon size {0} is below 3")]
    Domain(usize),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error("cycle does not close: residual {residual:e} exceeds {tolerance:e}")]
    Infeasible { residual: f64, tolerance: f64 },
    #[error("angles do not realize a convex polygon: {0}")]
    Realization(GeometryError),
    #[error("configuration has {found} {what} angles, expected {expected}")]
    AngleCount {
        what: &'static str,
        expected: usize,
        found: usize,
    },
}

/// Perimeter upper bound `2n sin(pi / 2n)` for small n-gons.
pub fn upper_bound(n: usize) -> Result<f64, ConstructionError> {
    if n < 3 {
        return Err(ConstructionError::Domain(n));
    }
    // pi / 2n carried as x + r so that sin is accurate to about half an ulp;
    // this makes the n = 3 value exactly 3.
    const PI_LO: f64 = 1.2246467991473532e-16;
    let m = 2.0 * n as f64;
    let x = PI / m;
    let r = ((-x).mul_add(m, PI) + PI_LO) / m;
    Ok(m * (x.sin() + x.cos() * r))
}

/// Regular n-gon scaled to unit diameter, in canonical pose.
pub fn regular_small(n: usize) -> Result<ConvexPolygon, ConstructionError> {
    if n < 3 {
        return Err(ConstructionError::Domain(n));
    }
    let m = n as f64;
    // Longest chord of the unit-circumradius polygon.
    let chord = if n.is_multiple_of(2) { 2.0 } else { 2.0 * (PI / (2.0 * m)).cos() };
    let vertices = (0..n)
        .map(|k| Point2::unit(2.0 * PI * k as f64 / m) * (1.0 / chord))
        .collect();
    let p = ConvexPolygon::new(vertices).map_err(ConstructionError::Realization)?;
    let p = canonicalize(&p);
    let d = diameter(&p).length;
    Ok(p.scaled(1.0 / d))
}

/// One row of the published table of long-perimeter small 32-gons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceRecord {
    pub cycle: usize,
    pub perimeter: f64,
    pub source: &'static str,
}

/// Published perimeters of small 32-gons, in table order.
pub fn reference_records() -> Vec<ReferenceRecord> {
    vec![
        ReferenceRecord {
            cycle: 3,
            perimeter: 3.140323421103532,
            source: "Tamvakis (1987)",
        },
        ReferenceRecord {
            cycle: 17,
            perimeter: 3.140331085836778,
            source: "Mossinghoff (2006), B32*",
        },
        ReferenceRecord {
            cycle: 23,
            perimeter: 3.140331154141625,
            source: "Bingane (2021), D32*",
        },
        ReferenceRecord {
            cycle: 21,
            perimeter: 3.140331156355381,
            source: "Xue (2021)",
        },
        ReferenceRecord {
            cycle: 21,
            perimeter: 3.140331156954614,
            source: "current record",
        },
    ]
}

/// Optimizer variables: one direction angle per diameter edge.
///
/// Cycle vertex 0 sits at the origin and cycle vertex `j + 1` is cycle vertex
/// `j` plus the unit vector at `cycle_angles[j]`; the last cycle angle closes
/// the cycle. `pendant_angles` are grouped by cycle vertex following
/// `topology.composition`, which here is in this configuration's own cycle
/// labeling (not necessarily canonical).
#[derive(Debug, Clone, PartialEq)]
pub struct AngleConfig {
    pub topology: Topology,
    pub cycle_angles: Vec<f64>,
    pub pendant_angles: Vec<f64>,
}

impl AngleConfig {
    pub fn new(
        topology: Topology,
        cycle_angles: Vec<f64>,
        pendant_angles: Vec<f64>,
    ) -> Result<Self, ConstructionError> {
        if cycle_angles.len() != topology.cycle {
            return Err(ConstructionError::AngleCount {
                what: "cycle",
                expected: topology.cycle,
                found: cycle_angles.len(),
            });
        }
        if pendant_angles.len() != topology.pendants() {
            return Err(ConstructionError::AngleCount {
                what: "pendant",
                expected: topology.pendants(),
                found: pendant_angles.len(),
            });
        }
        Ok(Self {
            topology,
            cycle_angles,
            pendant_angles,
        })
    }

    pub fn n(&self) -> usize {
        self.topology.n
    }

    /// Cycle vertex owning each pendant, in `pendant_angles` order.
    pub fn pendant_owners(&self) -> Vec<usize> {
        self.topology
            .composition
            .iter()
            .enumerate()
            .flat_map(|(j, &m)| std::iter::repeat_n(j, m))
            .collect()
    }

    /// Sum of the cycle's unit vectors; zero for a closed cycle.
    pub fn closure_vector(&self) -> Point2 {
        let mut sx = NeumaierSum::new();
        let mut sy = NeumaierSum::new();
        for &a in &self.cycle_angles {
            let (s, c) = a.sin_cos();
            sx.add(c);
            sy.add(s);
        }
        Point2::new(sx.value(), sy.value())
    }

    pub fn closure_residual(&self) -> f64 {
        self.closure_vector().norm()
    }

    /// Project cycle angles `1..c` back onto the closed-cycle set with
    /// minimum-norm Gauss-Newton steps; the first angle stays put.
    /// Returns the final residual.
    pub fn close_cycle(&mut self) -> f64 {
        let c = self.topology.cycle;
        let mut best = (self.closure_residual(), self.cycle_angles.clone());
        for _ in 0..12 {
            let h = self.closure_vector();
            let (mut a11, mut a12, mut a22) = (0.0, 0.0, 0.0);
            for &a in &self.cycle_angles[1..] {
                let (s, co) = a.sin_cos();
                a11 += s * s;
                a12 -= s * co;
                a22 += co * co;
            }
            let det = a11 * a22 - a12 * a12;
            if !(det.abs() > 1e-300) {
                break;
            }
            let z = Point2::new((a22 * h.x - a12 * h.y) / det, (a11 * h.y - a12 * h.x) / det);
            for j in 1..c {
                let (s, co) = self.cycle_angles[j].sin_cos();
                self.cycle_angles[j] -= -s * z.x + co * z.y;
            }
            let r = self.closure_residual();
            if r < best.0 {
                best = (r, self.cycle_angles.clone());
            } else {
                break;
            }
        }
        self.cycle_angles = best.1;
        best.0
    }

    /// Vertex positions by graph label: cycle vertices `0..c`, then pendants.
    pub fn positions(&self) -> Vec<Point2> {
        let c = self.topology.cycle;
        let mut pos = Vec::with_capacity(self.n());
        let mut cur = Point2::ORIGIN;
        pos.push(cur);
        for &a in &self.cycle_angles[..c - 1] {
            cur = cur + Point2::unit(a);
            pos.push(cur);
        }
        for (owner, &a) in self.pendant_owners().into_iter().zip(&self.pendant_angles) {
            pos.push(pos[owner] + Point2::unit(a));
        }
        pos
    }

    /// Graph edges by graph label: cycle edges in cycle order, then pendants.
    pub fn graph_edges(&self) -> Vec<(usize, usize)> {
        let c = self.topology.cycle;
        let mut edges: Vec<(usize, usize)> = (0..c).map(|j| (j, (j + 1) % c)).collect();
        for (k, owner) in self.pendant_owners().into_iter().enumerate() {
            edges.push((owner, c + k));
        }
        edges
    }
}

/// Reinhardt-star starting point for a topology.
///
/// The cycle edges point along `j * pi (c-1) / c`, which closes exactly for
/// odd `c`. The `m` pendants of a cycle vertex split the fan between its two
/// cycle edges into equal steps, offset half a step from either side.
pub fn star_init(topology: &Topology) -> Result<AngleConfig, ConstructionError> {
    let t = Topology::new(topology.n, topology.cycle, topology.composition.clone())?;
    let c = t.cycle;
    let step = PI * (c - 1) as f64 / c as f64;
    let cycle_angles: Vec<f64> = (0..c)
        .map(|j| (j as f64 * step).rem_euclid(2.0 * PI))
        .collect();
    let mut pendant_angles = Vec::with_capacity(t.pendants());
    for (j, &m) in t.composition.iter().enumerate() {
        let from = cycle_angles[j];
        let to = cycle_angles[(j + c - 1) % c] + PI;
        let width = (to - from).rem_euclid(2.0 * PI);
        for i in 0..m {
            let a = from + (i as f64 + 0.5) * width / m as f64;
            pendant_angles.push(a.rem_euclid(2.0 * PI));
        }
    }
    let config = AngleConfig::new(t, cycle_angles, pendant_angles)?;
    realize(&config)?;
    Ok(config)
}

/// A polygon built from an [`AngleConfig`], with the graph-to-polygon labeling.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    pub polygon: ConvexPolygon,
    /// Polygon index of each graph vertex.
    pub vertex_index: Vec<usize>,
    /// Graph edges as polygon index pairs, in [`AngleConfig::graph_edges`] order.
    pub edges: Vec<(usize, usize)>,
}

/// Counterclockwise order of `points` around their centroid, rotated so that
/// point 0 comes last.
pub fn convex_order(points: &[Point2]) -> Vec<usize> {
    let n = points.len() as f64;
    let centroid = points.iter().fold(Point2::ORIGIN, |acc, &p| acc + p) * (1.0 / n);
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        (points[a] - centroid)
            .angle()
            .total_cmp(&(points[b] - centroid).angle())
    });
    let root = order.iter().position(|&v| v == 0).expect("point 0 present");
    order.rotate_left(root + 1);
    order
}

/// Chain the unit edges into vertex positions and sort them into convex order.
///
/// Cycle vertex 0 is at the origin and is the last polygon vertex.
pub fn realize(config: &AngleConfig) -> Result<Realization, ConstructionError> {
    let residual = config.closure_residual();
    if !(residual <= TOL_CLOSURE) {
        return Err(ConstructionError::Infeasible {
            residual,
            tolerance: TOL_CLOSURE,
        });
    }
    let pos = config.positions();
    let order = convex_order(&pos);
    realize_with_order(config, &pos, &order)
}

pub(crate) fn realize_with_order(
    config: &AngleConfig,
    pos: &[Point2],
    order: &[usize],
) -> Result<Realization, ConstructionError> {
    let polygon = ConvexPolygon::new(order.iter().map(|&v| pos[v]).collect())
        .map_err(ConstructionError::Realization)?;
    let mut vertex_index = vec![0; order.len()];
    for (k, &v) in order.iter().enumerate() {
        vertex_index[v] = k;
    }
    let edges = config
        .graph_edges()
        .into_iter()
        .map(|(a, b)| (vertex_index[a], vertex_index[b]))
        .collect();
    Ok(Realization {
        polygon,
        vertex_index,
        edges,
    })
}

/// Read the edge directions of a polygon's diameter graph back into angles.
///
/// Cycle vertex 0 of the result is `g.cycle[0]`. Pendants of each cycle vertex
/// are listed counterclockwise starting from the direction of its cycle edge.
pub fn measure(p: &ConvexPolygon, g: &DiameterGraph) -> Result<AngleConfig, ConstructionError> {
    let v = p.vertices();
    let c = g.cycle.len();
    let cycle_angles: Vec<f64> = (0..c)
        .map(|j| (v[g.cycle[(j + 1) % c]] - v[g.cycle[j]]).angle())
        .collect();
    let mut pendant_angles = Vec::new();
    for (j, pend) in g.pendants.iter().enumerate() {
        let base = cycle_angles[j];
        let mut angles: Vec<f64> = pend.iter().map(|&w| (v[w] - v[g.cycle[j]]).angle()).collect();
        angles.sort_by(|a, b| {
            (a - base)
                .rem_euclid(2.0 * PI)
                .total_cmp(&(b - base).rem_euclid(2.0 * PI))
        });
        pendant_angles.extend(angles);
    }
    let topology = Topology::new(g.n, c, g.pendant_counts())?;
    AngleConfig::new(topology, cycle_angles, pendant_angles)
}
