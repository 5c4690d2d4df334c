//! Perimeter, rotating-calipers diameter and canonical pose of the record
//! 32-gon, plus a rotated copy brought back to the same pose.

use smallpoly::cli::fixtures;
use smallpoly::geometry::{canonicalize, diameter, pairwise_distances, perimeter, Point2};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = fixtures::load("triacontadigon").expect("shipped fixture")?.into_convex()?;
    let d = diameter(&p);
    println!("perimeter  {:?}", perimeter(&p));
    println!("diameter   {:?} between vertices {:?}", d.length, d.pair);

    let m = pairwise_distances(&p);
    let sorted = m.sorted_distances();
    println!("unit chords {}, next longest distance {:?}", m.pairs_at_least(d.length * (1.0 - 1e-6)).len(), sorted[32]);

    let moved = p.transformed(37f64.to_radians(), Point2::new(2.0, -1.0));
    let back = canonicalize(&moved);
    let err = back
        .vertices()
        .iter()
        .zip(p.vertices())
        .map(|(a, b)| a.distance(*b))
        .fold(0.0, f64::max);
    println!("rotated copy re-canonicalized, max vertex error {err:.2e}");
    Ok(())
}
