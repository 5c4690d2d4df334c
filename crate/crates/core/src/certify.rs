//! Perimeter and diameter enclosures for given floating-point coordinates.
//!
//! Squared distances are evaluated with error-free transformations (exact
//! differences and FMA-based exact products), so the only rounding left is in
//! a short compensated sum whose error is bounded explicitly. The square root
//! is correctly rounded, so widening by one ulp on each side encloses the
//! exact distance. Sums of distances are kept in double-double form with a
//! running bound on the low part.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::constructions::upper_bound;
use crate::diamgraph::{extract, topology_of, GraphError, Topology, DEFAULT_TOL_EDGE};
use crate::geometry::{is_convex, ConvexPolygon, Point2};

/// Unit roundoff of `f64`.
const U: f64 = f64::EPSILON / 2.0;

/// Allowed distance of a certified diameter from 1 for a polygon to count as small.
pub const TOL_UNIT_DIAMETER: f64 = 1e-9;

/// A closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundedValue {
    pub lo: f64,
    pub hi: f64,
}

impl BoundedValue {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn point(v: f64) -> Self {
        Self { lo: v, hi: v }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        self.lo + 0.5 * (self.hi - self.lo)
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    /// Leading significant decimal digits shared by both endpoints.
    pub fn certified_digits(&self) -> u32 {
        let (a, b) = (format!("{:.16e}", self.lo), format!("{:.16e}", self.hi));
        let (ma, ea) = a.split_once('e').expect("exponent");
        let (mb, eb) = b.split_once('e').expect("exponent");
        if ea != eb || self.lo.is_sign_negative() != self.hi.is_sign_negative() {
            return 0;
        }
        ma.chars()
            .zip(mb.chars())
            .take_while(|(x, y)| x == y)
            .filter(|(x, _)| x.is_ascii_digit())
            .count() as u32
    }

    /// Whether a printed decimal (rounded or truncated to its last digit) is
    /// compatible with this enclosure.
    pub fn agrees_with_decimal(&self, printed: &str) -> bool {
        let Ok(value) = printed.trim().parse::<f64>() else {
            return false;
        };
        let decimals = printed
            .trim()
            .split_once('.')
            .map_or(0, |(_, frac)| frac.len()) as i32;
        let step = 10f64.powi(-decimals);
        // Rounded: value +- step/2; truncated: [value, value + step).
        let slack = 4.0 * U * value.abs();
        let lo = value - 0.5 * step - slack;
        let hi = value + step + slack;
        self.hi >= lo && self.lo <= hi
    }
}

impl fmt::Display for BoundedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Enclosure of `(a.x - b.x)^2 + (a.y - b.y)^2`.
fn squared_distance(a: Point2, b: Point2) -> (f64, f64) {
    let mut terms = [0.0; 8];
    let mut rounded = 0.0;
    for (k, (p, q)) in [(a.x, b.x), (a.y, b.y)].into_iter().enumerate() {
        let (h, l) = two_sum(p, -q);
        let (sq, sq_err) = two_prod(h, h);
        let cross = 2.0 * h * l;
        let tail = l * l;
        rounded += cross.abs() + tail;
        terms[4 * k..4 * k + 4].copy_from_slice(&[sq, sq_err, cross, tail]);
    }
    let mut hi = 0.0;
    let mut lo = 0.0;
    let mut magnitude = 0.0;
    for t in terms {
        let (s, e) = two_sum(hi, t);
        hi = s;
        lo += e;
        magnitude += e.abs();
    }
    let (value, last) = two_sum(hi, lo);
    // Rounding of the cross and tail products, of the low-part sum, and of
    // the final addition.
    let err = U * rounded + 8.0 * U * magnitude + last.abs();
    if err == 0.0 {
        return (value, value);
    }
    let lo_bound = (value - err).next_down().max(0.0);
    let hi_bound = (value + err).next_up();
    (lo_bound, hi_bound)
}

/// Enclosure of the Euclidean distance between two points.
pub fn certified_distance(a: Point2, b: Point2) -> BoundedValue {
    let (slo, shi) = squared_distance(a, b);
    let enclose_lo = |s: f64| {
        let r = s.sqrt();
        if r.mul_add(r, -s) == 0.0 {
            r
        } else {
            r.next_down().max(0.0)
        }
    };
    let enclose_hi = |s: f64| {
        let r = s.sqrt();
        if r.mul_add(r, -s) == 0.0 {
            r
        } else {
            r.next_up()
        }
    };
    BoundedValue::new(enclose_lo(slo), enclose_hi(shi))
}

/// Double-double accumulator with a bound on its own rounding error.
struct EnclosedSum {
    hi: f64,
    lo: f64,
    err: f64,
}

impl EnclosedSum {
    fn new() -> Self {
        Self { hi: 0.0, lo: 0.0, err: 0.0 }
    }

    fn add(&mut self, x: f64) {
        let (s, e) = two_sum(self.hi, x);
        self.hi = s;
        let next = self.lo + e;
        self.err += U * next.abs();
        self.lo = next;
    }

    /// Lower bound of the exact sum of the added values.
    fn lower(&self) -> f64 {
        (self.hi + self.lo).next_down() - self.err.next_up()
    }

    fn upper(&self) -> f64 {
        (self.hi + self.lo).next_up() + self.err.next_up()
    }
}

/// Enclosure of the exact perimeter of the given coordinates.
pub fn certified_perimeter(p: &ConvexPolygon) -> BoundedValue {
    let v = p.vertices();
    let n = v.len();
    let mut lo = EnclosedSum::new();
    let mut hi = EnclosedSum::new();
    for i in 0..n {
        let d = certified_distance(v[i], v[(i + 1) % n]);
        lo.add(d.lo);
        hi.add(d.hi);
    }
    BoundedValue::new(lo.lower().next_down(), hi.upper().next_up())
}

/// Enclosure of the exact largest vertex-pair distance.
pub fn certified_diameter(p: &ConvexPolygon) -> BoundedValue {
    let v = p.vertices();
    let mut best = BoundedValue::point(0.0);
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            let d = certified_distance(v[i], v[j]);
            best.lo = best.lo.max(d.lo);
            best.hi = best.hi.max(d.hi);
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("diameter graph check failed: {0}")]
    Structure(#[from] GraphError),
}

/// Everything [`verify`] establishes about a polygon.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub n: usize,
    pub perimeter: BoundedValue,
    pub diameter: BoundedValue,
    pub convex: bool,
    pub graph_topology: Topology,
    /// `upper_bound(n) - perimeter.lo`.
    pub bound_gap: f64,
    pub certified_digits: u32,
}

impl VerificationReport {
    /// Certified diameter within [`TOL_UNIT_DIAMETER`] of 1.
    pub fn unit_diameter(&self) -> bool {
        self.diameter.lo >= 1.0 - TOL_UNIT_DIAMETER && self.diameter.hi <= 1.0 + TOL_UNIT_DIAMETER
    }

    /// Descriptions of failed checks; empty when the polygon passes.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.convex {
            out.push("polygon is not convex".to_string());
        }
        if !self.unit_diameter() {
            out.push(format!(
                "diameter violation: certified diameter {} is not within {:e} of 1",
                self.diameter, TOL_UNIT_DIAMETER
            ));
        }
        out
    }
}

/// Certify perimeter and diameter, test convexity and extract the diameter graph.
pub fn verify(p: &ConvexPolygon) -> Result<VerificationReport, VerifyError> {
    let n = p.len();
    let perimeter = certified_perimeter(p);
    let diameter = certified_diameter(p);
    let g = extract(p, DEFAULT_TOL_EDGE)?;
    let bound = upper_bound(n).expect("polygons have at least 3 vertices");
    Ok(VerificationReport {
        n,
        perimeter,
        diameter,
        convex: is_convex(p.vertices()),
        graph_topology: topology_of(&g),
        bound_gap: bound - perimeter.lo,
        certified_digits: perimeter.certified_digits(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::perimeter;

    fn square() -> ConvexPolygon {
        ConvexPolygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn exact_distances_are_points() {
        let d = certified_distance(Point2::new(0.0, 0.0), Point2::new(3.0, 4.0));
        assert_eq!(d, BoundedValue::point(5.0));
    }

    #[test]
    fn square_enclosures() {
        let p = certified_perimeter(&square());
        assert!(p.contains(4.0) && p.width() <= 1e-14);
        let d = certified_diameter(&square());
        assert!(d.lo <= std::f64::consts::SQRT_2 && std::f64::consts::SQRT_2 <= d.hi);
        assert!(d.width() <= 1e-15);
        assert!(d.lo < d.hi, "sqrt(2) is irrational");
    }

    #[test]
    fn point_estimate_is_inside() {
        let t = ConvexPolygon::new(vec![
            Point2::new(0.1, 0.2),
            Point2::new(0.93, 0.31),
            Point2::new(0.4, 0.77),
        ])
        .unwrap();
        assert!(certified_perimeter(&t).contains(perimeter(&t)));
    }

    #[test]
    fn digits() {
        assert_eq!(BoundedValue::new(1.25, 1.26).certified_digits(), 2);
        assert_eq!(BoundedValue::point(2.5).certified_digits(), 17);
        assert_eq!(BoundedValue::new(0.99, 1.01).certified_digits(), 0);
    }

    #[test]
    fn decimal_agreement() {
        let b = BoundedValue::new(3.140331156954612, 3.140331156954615);
        assert!(b.agrees_with_decimal("3.140331156954614"));
        assert!(b.agrees_with_decimal("3.1403311569546"));
        assert!(!b.agrees_with_decimal("3.140331156954753"));
    }
}
