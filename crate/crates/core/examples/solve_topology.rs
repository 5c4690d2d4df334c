//! Maximize the perimeter for one topology: the composition read off the
//! record polygon, started from the Reinhardt star.

use smallpoly::cli::fixtures;
use smallpoly::diamgraph::DEFAULT_TOL_EDGE;
use smallpoly::optimizer::solve_from_star;
use smallpoly::{extract, realize, star_init, topology_of, upper_bound, SolveOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let record = fixtures::load("triacontadigon").expect("shipped fixture")?.into_convex()?;
    let topology = topology_of(&extract(&record, DEFAULT_TOL_EDGE)?);
    let start = realize(&star_init(&topology)?)?;
    println!("topology {topology}");
    println!("star start perimeter {:?}", smallpoly::perimeter(&start.polygon));

    let r = solve_from_star(&topology, &SolveOptions::default())?;
    println!("optimized perimeter  {:?} (converged {}, {} iterations)", r.perimeter, r.converged, r.iterations);
    println!("closure residual {:.1e}, distance violation {:.1e}", r.closure_residual, r.max_distance_violation);
    println!("gap to bound {:.3e}", upper_bound(32)? - r.perimeter);
    Ok(())
}
