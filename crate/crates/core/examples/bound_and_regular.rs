//! The perimeter bound 2n sin(pi/2n) against regular small polygons: odd n
//! meets it, even n falls short.

use smallpoly::geometry::perimeter;
use smallpoly::{regular_small, upper_bound};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>4}  {:<20}  {:<20}  gap", "n", "bound", "regular");
    for n in [3, 4, 5, 6, 7, 8, 15, 16, 31, 32] {
        let bound = upper_bound(n)?;
        let regular = perimeter(&regular_small(n)?);
        println!("{n:>4}  {bound:<20?}  {regular:<20?}  {:.3e}", bound - regular);
    }
    Ok(())
}
