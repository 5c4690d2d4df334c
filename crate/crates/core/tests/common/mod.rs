#![allow(dead_code)]

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smallpoly::cli::fixtures;
use smallpoly::geometry::{ConvexPolygon, Point2};

pub fn triacontadigon() -> ConvexPolygon {
    fixtures::load("triacontadigon")
        .expect("fixture is shipped")
        .expect("fixture parses")
        .into_convex()
        .expect("fixture is convex")
}

pub fn unit_square() -> ConvexPolygon {
    ConvexPolygon::new(vec![
        Point2::new(0.0, 0.0),
        Point2::new(1.0, 0.0),
        Point2::new(1.0, 1.0),
        Point2::new(0.0, 1.0),
    ])
    .unwrap()
}

pub fn unit_triangle() -> ConvexPolygon {
    ConvexPolygon::new(vec![
        Point2::new(1.0, 0.0),
        Point2::new(0.5, 0.75f64.sqrt()),
        Point2::new(0.0, 0.0),
    ])
    .unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random convex polygon: sorted random angles on a randomly stretched,
/// rotated and shifted ellipse.
pub fn random_convex(rng: &mut ChaCha8Rng, n: usize) -> ConvexPolygon {
    loop {
        let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
        angles.sort_by(f64::total_cmp);
        let (a, b) = (rng.gen_range(0.2..3.0), rng.gen_range(0.2..3.0));
        let tilt = rng.gen_range(0.0..PI);
        let shift = Point2::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let (s, c) = tilt.sin_cos();
        let pts = angles
            .iter()
            .map(|t| {
                let (x, y) = (a * t.cos(), b * t.sin());
                Point2::new(c * x - s * y + shift.x, s * x + c * y + shift.y)
            })
            .collect();
        if let Ok(p) = ConvexPolygon::new(pts) {
            return p;
        }
    }
}

pub fn max_abs_diff(a: &[Point2], b: &[Point2]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(p, q)| (p.x - q.x).abs().max((p.y - q.y).abs()))
        .fold(0.0, f64::max)
}
