//! Diameter graphs: the record 32-gon, the regular pentagon and a star start.

use smallpoly::cli::fixtures;
use smallpoly::diamgraph::{check_thrackle, DEFAULT_TOL_EDGE};
use smallpoly::{extract, realize, regular_small, star_init, topology_of, Topology};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let record = fixtures::load("triacontadigon").expect("shipped fixture")?.into_convex()?;
    let star = realize(&star_init(&Topology::balanced(32, 3)?)?)?.polygon;
    for (name, p) in [("record 32-gon", record), ("regular pentagon", regular_small(5)?), ("star c = 3", star)] {
        let g = extract(&p, DEFAULT_TOL_EDGE)?;
        println!("{name}");
        println!("  edges {}, cycle {:?}", g.edges.len(), g.cycle);
        println!("  pendants per cycle vertex {:?}", g.pendant_counts());
        println!("  topology {}, thrackle {}", topology_of(&g), check_thrackle(&g, &p));
    }
    Ok(())
}
