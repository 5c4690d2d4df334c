//! Rigorous enclosures of the record polygon's perimeter and diameter.

use smallpoly::certify::verify;
use smallpoly::cli::fixtures;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = fixtures::load("triacontadigon").expect("shipped fixture")?.into_convex()?;
    let r = verify(&p)?;
    println!("perimeter in {} ({} certified digits)", r.perimeter, r.certified_digits);
    println!("diameter  in {}", r.diameter);
    println!("convex {}, topology {}", r.convex, r.graph_topology);
    println!("bound gap {:.4e}", r.bound_gap);
    for printed in ["3.1403311569546", "3.140331156954614"] {
        println!("consistent with {printed}: {}", r.perimeter.agrees_with_decimal(printed));
    }
    Ok(())
}
