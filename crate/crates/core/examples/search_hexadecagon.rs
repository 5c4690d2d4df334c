//! Topology search for n = 16: every odd cycle length, screened compositions
//! and random neighbours, solved in parallel.

use std::time::Instant;

use smallpoly::{search, SolveOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let clock = Instant::now();
    let report = search(16, &SolveOptions { seed: 1, ..SolveOptions::default() })?;
    println!("{} topologies in {:.2} s", report.per_topology.len(), clock.elapsed().as_secs_f64());
    for (cycle, (t, r)) in report.best_by_cycle() {
        println!("  c = {cycle:>2}  {:<20?} {t}", r.perimeter);
    }
    println!("best {:?}", report.best.perimeter);
    Ok(())
}
