//! Polygon files: the published table rows, JSON documents and two-column
//! text, all round-tripping bit for bit.

use smallpoly::cli::fixtures::TABLE2_SOURCE;
use smallpoly::cli::format::{parse, to_columns, to_json};
use smallpoly::regular_small;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let table = parse(TABLE2_SOURCE)?;
    println!("table rows parsed: {} vertices, first {}", table.len(), table.vertices[0]);

    let heptagon = regular_small(7)?;
    let json = to_json(heptagon.vertices(), Some("regular small 7-gon"));
    print!("{json}");
    assert_eq!(parse(&json)?.vertices, heptagon.vertices());
    assert_eq!(parse(&to_columns(heptagon.vertices(), None))?.vertices, heptagon.vertices());
    println!("both formats round-trip exactly");
    Ok(())
}
