//! Planar geometry for small polygons: points, validated convex polygons,
//! perimeter, diameter by rotating calipers, convexity and canonical pose.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::sum::NeumaierSum;

/// Relative tolerance for cross-product sign tests and vertex coincidence.
///
/// Cross products are compared against `TOL_CONVEX * scale^2`, distances
/// against `TOL_CONVEX * scale`, where `scale` is the largest coordinate
/// magnitude of the polygon.
pub const TOL_CONVEX: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("a polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertex {index} has a non-finite coordinate")]
    NonFinite { index: usize },
    #[error("vertices {first} and {second} coincide")]
    CoincidentVertices { first: usize, second: usize },
    #[error("vertices are not in counterclockwise convex position (reflex turn at vertex {index})")]
    NotConvex { index: usize },
    #[error("vertices do not wind exactly once around the polygon (total turning {turns:.6} turns)")]
    NotSimple { turns: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Unit vector with direction angle `theta` (radians).
    pub fn unit(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self { x: c, y: s }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the planar cross product.
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_squared(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    /// Euclidean distance; symmetric bit-for-bit in its arguments.
    pub fn distance(self, other: Point2) -> f64 {
        (other - self).norm()
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, rhs: f64) -> Point2 {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Largest coordinate magnitude; the length scale for tolerance tests.
pub fn coordinate_scale(vertices: &[Point2]) -> f64 {
    vertices
        .iter()
        .fold(0.0_f64, |m, p| m.max(p.x.abs()).max(p.y.abs()))
}

/// Cross products of consecutive edges, `turns[i]` at vertex `i`.
fn turn_crosses(vertices: &[Point2]) -> Vec<f64> {
    let n = vertices.len();
    (0..n)
        .map(|i| {
            let prev = vertices[(i + n - 1) % n];
            let cur = vertices[i];
            let next = vertices[(i + 1) % n];
            (cur - prev).cross(next - cur)
        })
        .collect()
}

/// Total signed turning of the closed vertex sequence, in full turns.
fn total_turns(vertices: &[Point2]) -> f64 {
    let n = vertices.len();
    let mut total = 0.0;
    for i in 0..n {
        let e1 = vertices[i] - vertices[(i + n - 1) % n];
        let e2 = vertices[(i + 1) % n] - vertices[i];
        total += e1.cross(e2).atan2(e1.dot(e2));
    }
    total / (2.0 * PI)
}

fn distinct_count(vertices: &[Point2]) -> usize {
    let mut distinct: Vec<Point2> = Vec::new();
    for p in vertices {
        if !distinct.iter().any(|q| q == p) {
            distinct.push(*p);
        }
    }
    distinct.len()
}

/// Whether the closed sequence is a convex polygon of either orientation.
///
/// All turn cross products must share a sign up to `TOL_CONVEX * scale^2`
/// and the boundary must wind exactly once. Collinear triples count as convex.
pub fn is_convex(vertices: &[Point2]) -> bool {
    if vertices.len() < 3 || vertices.iter().any(|p| !p.is_finite()) {
        return false;
    }
    if distinct_count(vertices) < 3 {
        return false;
    }
    let scale = coordinate_scale(vertices);
    let tol = TOL_CONVEX * scale * scale;
    let crosses = turn_crosses(vertices);
    let ccw = crosses.iter().all(|&c| c >= -tol);
    let cw = crosses.iter().all(|&c| c <= tol);
    if !(ccw || cw) {
        return false;
    }
    let turns = total_turns(vertices);
    (turns.abs() - 1.0).abs() < 1e-6
}

/// Unvalidated vertex sequence, as read from a file.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    pub vertices: Vec<Point2>,
}

impl Polygon {
    pub fn new(vertices: Vec<Point2>) -> Self {
        Self { vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn into_convex(self) -> Result<ConvexPolygon, GeometryError> {
        ConvexPolygon::new(self.vertices)
    }
}

/// Vertices in counterclockwise convex position, `n >= 3`, no coincident
/// vertices. Construction validates; instances are immutable.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point2>,
}

impl ConvexPolygon {
    pub fn new(vertices: Vec<Point2>) -> Result<Self, GeometryError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeometryError::TooFewVertices(n));
        }
        if let Some(index) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(GeometryError::NonFinite { index });
        }
        let scale = coordinate_scale(&vertices);
        let coincide = TOL_CONVEX * scale;
        for i in 0..n {
            for j in i + 1..n {
                if vertices[i].distance(vertices[j]) <= coincide {
                    return Err(GeometryError::CoincidentVertices { first: i, second: j });
                }
            }
        }
        let tol = TOL_CONVEX * scale * scale;
        if let Some(index) = turn_crosses(&vertices).iter().position(|&c| c < -tol) {
            return Err(GeometryError::NotConvex { index });
        }
        let turns = total_turns(&vertices);
        if (turns - 1.0).abs() > 1e-6 {
            return Err(GeometryError::NotSimple { turns });
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vertex(&self, i: usize) -> Point2 {
        self.vertices[i]
    }

    pub fn scale(&self) -> f64 {
        coordinate_scale(&self.vertices)
    }

    pub fn into_polygon(self) -> Polygon {
        Polygon::new(self.vertices)
    }

    /// Same polygon with every coordinate multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> ConvexPolygon {
        assert!(factor > 0.0 && factor.is_finite());
        ConvexPolygon {
            vertices: self.vertices.iter().map(|&p| p * factor).collect(),
        }
    }

    /// Apply a rotation by `angle` followed by a translation.
    pub fn transformed(&self, angle: f64, shift: Point2) -> ConvexPolygon {
        let (s, c) = angle.sin_cos();
        ConvexPolygon {
            vertices: self
                .vertices
                .iter()
                .map(|p| Point2::new(c * p.x - s * p.y + shift.x, s * p.x + c * p.y + shift.y))
                .collect(),
        }
    }

    /// Cyclic relabeling: the new vertex 0 is the old vertex `start`.
    pub fn relabeled(&self, start: usize) -> ConvexPolygon {
        let n = self.len();
        ConvexPolygon {
            vertices: (0..n).map(|k| self.vertices[(start + k) % n]).collect(),
        }
    }
}

/// Sum of edge lengths (wrapping), compensated.
pub fn perimeter(p: &ConvexPolygon) -> f64 {
    let v = p.vertices();
    let n = v.len();
    (0..n)
        .map(|i| v[i].distance(v[(i + 1) % n]))
        .collect::<NeumaierSum>()
        .value()
}

/// Largest vertex-pair distance with one attaining pair `(i, j)`, `i < j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diameter {
    pub length: f64,
    pub pair: (usize, usize),
}

fn ordered(i: usize, j: usize) -> (usize, usize) {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

fn consider(best: &mut Diameter, v: &[Point2], i: usize, j: usize) {
    if i == j {
        return;
    }
    let pair = ordered(i, j);
    let d = v[pair.0].distance(v[pair.1]);
    if d > best.length || (d == best.length && pair < best.pair) {
        *best = Diameter { length: d, pair };
    }
}

/// Diameter by rotating calipers over the antipodal vertex pairs.
///
/// Ties in length resolve to the lexicographically smallest index pair.
pub fn diameter(p: &ConvexPolygon) -> Diameter {
    let v = p.vertices();
    let n = v.len();
    let area2 = |i: usize, j: usize, k: usize| (v[j] - v[i]).cross(v[k] - v[i]);
    let mut best = Diameter {
        length: -1.0,
        pair: (0, 0),
    };
    let mut j = 1;
    let mut steps = 0;
    for i in 0..n {
        let i1 = (i + 1) % n;
        while steps < 3 * n && area2(i, i1, (j + 1) % n) > area2(i, i1, j) {
            j = (j + 1) % n;
            steps += 1;
        }
        let j1 = (j + 1) % n;
        consider(&mut best, v, i, j);
        consider(&mut best, v, i1, j);
        consider(&mut best, v, i, j1);
        consider(&mut best, v, i1, j1);
    }
    best
}

/// O(n^2) maximum over all pairs, with the same tie-breaking as [`diameter`].
pub fn diameter_brute_force(p: &ConvexPolygon) -> Diameter {
    let v = p.vertices();
    let mut best = Diameter {
        length: -1.0,
        pair: (0, 0),
    };
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            consider(&mut best, v, i, j);
        }
    }
    best
}

fn positive_zero(x: f64) -> f64 {
    x + 0.0
}

/// Rigid motion placing vertex `n-1` at the origin and vertex 0 on the
/// positive x-axis, reflecting when needed so the result runs counterclockwise.
pub fn canonical_pose(vertices: &[Point2]) -> Vec<Point2> {
    let n = vertices.len();
    let origin = vertices[n - 1];
    let a = vertices[0] - origin;
    let r = a.norm();
    let (c, s) = (a.x / r, a.y / r);
    let mut out: Vec<Point2> = vertices
        .iter()
        .map(|&p| {
            let q = p - origin;
            Point2::new(positive_zero(q.x * c + q.y * s), positive_zero(q.y * c - q.x * s))
        })
        .collect();
    // The rotation takes vertex 0 onto the axis exactly; drop its rounding.
    out[0] = Point2::new(r, 0.0);
    if signed_area(&out) < 0.0 {
        for p in &mut out {
            p.y = positive_zero(-p.y);
        }
    }
    out
}

pub fn canonicalize(p: &ConvexPolygon) -> ConvexPolygon {
    ConvexPolygon {
        vertices: canonical_pose(p.vertices()),
    }
}

/// Shoelace signed area (positive for counterclockwise order).
pub fn signed_area(vertices: &[Point2]) -> f64 {
    let n = vertices.len();
    0.5 * (0..n)
        .map(|i| vertices[i].cross(vertices[(i + 1) % n]))
        .collect::<NeumaierSum>()
        .value()
}

/// Symmetric matrix of vertex-pair distances with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn max(&self) -> f64 {
        self.entries.iter().copied().fold(0.0, f64::max)
    }

    /// Unordered pairs `(i, j)`, `i < j`, with distance at least `threshold`.
    pub fn pairs_at_least(&self, threshold: f64) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.get(i, j) >= threshold {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Off-diagonal entries, upper triangle, sorted descending.
    pub fn sorted_distances(&self) -> Vec<f64> {
        let mut d: Vec<f64> = (0..self.n)
            .flat_map(|i| (i + 1..self.n).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect();
        d.sort_by(|a, b| b.total_cmp(a));
        d
    }
}

pub fn pairwise_distances(p: &ConvexPolygon) -> DistanceMatrix {
    let v = p.vertices();
    let n = v.len();
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = v[i].distance(v[j]);
            entries[i * n + j] = d;
            entries[j * n + i] = d;
        }
    }
    DistanceMatrix { n, entries }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> ConvexPolygon {
        ConvexPolygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ])
        .unwrap()
    }

    fn triangle() -> ConvexPolygon {
        ConvexPolygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.5, 3f64.sqrt() / 2.0),
        ])
        .unwrap()
    }

    #[test]
    fn square_perimeter_and_diameter() {
        let sq = square();
        assert_eq!(perimeter(&sq), 4.0);
        let d = diameter(&sq);
        assert_eq!(d.length, 2f64.sqrt());
        assert_eq!(d.pair, (0, 2));
    }

    #[test]
    fn triangle_perimeter_and_diameter() {
        let t = triangle();
        assert!((perimeter(&t) - 3.0).abs() < 1e-15);
        assert!((diameter(&t).length - 1.0).abs() < 1e-15);
        let m = pairwise_distances(&t);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!((m.get(i, j) - 1.0).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn square_distance_entries() {
        let m = pairwise_distances(&square());
        let d = m.sorted_distances();
        assert_eq!(d, vec![2f64.sqrt(), 2f64.sqrt(), 1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn convexity_checks() {
        let sq = square();
        assert!(is_convex(sq.vertices()));
        let mut bowtie = sq.vertices().to_vec();
        bowtie.swap(1, 2);
        assert!(!is_convex(&bowtie));
        let mut cw = sq.vertices().to_vec();
        cw.reverse();
        assert!(is_convex(&cw));
        assert!(!is_convex(&[Point2::ORIGIN, Point2::ORIGIN, Point2::new(1.0, 0.0)]));
        assert!(!is_convex(&[Point2::ORIGIN, Point2::new(1.0, 0.0)]));
    }

    #[test]
    fn pentagram_winds_twice() {
        let star: Vec<Point2> = (0..5).map(|k| Point2::unit(4.0 * PI * k as f64 / 5.0)).collect();
        assert!(!is_convex(&star));
        assert!(matches!(
            ConvexPolygon::new(star),
            Err(GeometryError::NotSimple { .. })
        ));
    }

    #[test]
    fn collinear_vertex_allowed() {
        let p = ConvexPolygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(0.5, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
        ]);
        assert!(p.is_ok());
    }

    #[test]
    fn validation_errors() {
        assert_eq!(
            ConvexPolygon::new(vec![Point2::ORIGIN, Point2::new(1.0, 0.0)]),
            Err(GeometryError::TooFewVertices(2))
        );
        assert_eq!(
            ConvexPolygon::new(vec![
                Point2::ORIGIN,
                Point2::new(f64::NAN, 0.0),
                Point2::new(0.0, 1.0)
            ]),
            Err(GeometryError::NonFinite { index: 1 })
        );
        assert!(matches!(
            ConvexPolygon::new(vec![
                Point2::ORIGIN,
                Point2::new(1.0, 0.0),
                Point2::new(1.0, 0.0),
                Point2::new(0.0, 1.0)
            ]),
            Err(GeometryError::CoincidentVertices { first: 1, second: 2 })
        ));
        let mut cw = square().vertices().to_vec();
        cw.reverse();
        assert!(matches!(ConvexPolygon::new(cw), Err(GeometryError::NotConvex { .. })));
    }

    #[test]
    fn canonical_pose_of_square() {
        let c = canonicalize(&square());
        let v = c.vertices();
        assert_eq!(v[3], Point2::ORIGIN);
        assert_eq!(v[0].y, 0.0);
        assert!(v[0].x > 0.0);
        assert_eq!(canonicalize(&c), c);
    }

    #[test]
    fn reflection_restores_ccw() {
        let mut cw = square().vertices().to_vec();
        cw.reverse();
        let v = canonical_pose(&cw);
        assert!(signed_area(&v) > 0.0);
        assert_eq!(v[3], Point2::ORIGIN);
        assert_eq!(v[0].y, 0.0);
    }
}
