//! Write the record polygon and its diameter chords to an SVG file.

use smallpoly::cli::fixtures;
use smallpoly::cli::svg::emit_svg;
use smallpoly::diamgraph::DEFAULT_TOL_EDGE;
use smallpoly::extract;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = fixtures::load("triacontadigon").expect("shipped fixture")?.into_convex()?;
    let svg = emit_svg(&p, &extract(&p, DEFAULT_TOL_EDGE)?);
    let path = std::env::args().nth(1).unwrap_or_else(|| "triacontadigon.svg".into());
    std::fs::write(&path, svg)?;
    println!("wrote {path}");
    Ok(())
}
