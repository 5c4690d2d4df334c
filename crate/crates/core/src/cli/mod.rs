//! Command-line driver.
//!
//! [`run`] parses arguments, executes one subcommand and returns the exit
//! status: 0 on success, 1 when a computation or verification fails, 2 for
//! usage errors. Reals are printed in shortest round-trip form unless
//! `--digits` asks for a fixed number of significant digits.

pub mod fixtures;
pub mod format;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::certify::{verify, VerificationReport};
use crate::constructions::{realize, reference_records, regular_small, star_init, upper_bound, RECORD_N};
use crate::diamgraph::{check_thrackle, extract, topology_of, Topology, DEFAULT_TOL_EDGE};
use crate::geometry::{canonicalize, diameter, perimeter, ConvexPolygon, Polygon};
use crate::optimizer::{search, search_cycles, SearchReport, SolveOptions};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

fn failure(e: impl std::fmt::Display) -> CliError {
    CliError::Failure(e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "smallpoly",
    version,
    about = "Construct, optimize and certify small polygons (unit diameter) with long perimeter"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Plain, global = true)]
    format: OutputFormat,
    /// Print reals with this many significant digits instead of shortest round-trip form.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..=17))]
    digits: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Plain,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the perimeter bound 2n sin(pi/2n) for small n-gons.
    Bound { n: usize },
    /// Build a polygon from a closed-form construction.
    #[command(subcommand)]
    Construct(Construct),
    /// Certify perimeter and diameter and check the diameter-graph structure.
    Verify { file: PathBuf },
    /// Print the diameter graph of a polygon.
    Graph { file: PathBuf },
    /// Maximize the perimeter of small n-gons.
    Optimize {
        n: usize,
        /// Only search this odd cycle length.
        #[arg(long)]
        cycle: Option<usize>,
        #[command(flatten)]
        solver: SolverArgs,
        /// Write the best polygon here (.json for the document format).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare the published 32-gon records with freshly optimized values.
    Records {
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Draw a polygon and its diameter graph as SVG.
    Plot {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// List the embedded fixtures, or write one out.
    Fixtures {
        name: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum Construct {
    /// Regular n-gon scaled to unit diameter.
    Regular {
        n: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Reinhardt-star starting polygon for a topology.
    Star {
        n: usize,
        #[arg(long)]
        cycle: usize,
        /// Pendant counts per cycle vertex, comma separated; balanced if omitted.
        #[arg(long, value_delimiter = ',')]
        composition: Option<Vec<usize>>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct SolverArgs {
    /// Candidate compositions per cycle length.
    #[arg(long, default_value_t = 4)]
    restarts: usize,
    #[arg(long, env = "SMALLPOLY_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

impl SolverArgs {
    fn options(&self) -> SolveOptions {
        SolveOptions {
            seed: self.seed,
            restarts: self.restarts,
            jobs: self.jobs,
            ..SolveOptions::default()
        }
    }
}

/// Format reals for plain output.
#[derive(Debug, Clone, Copy)]
struct Printer {
    digits: Option<u32>,
}

impl Printer {
    fn real(&self, x: f64) -> String {
        match self.digits {
            Some(d) => significant(x, d),
            None => format!("{x:?}"),
        }
    }
}

/// `x` rounded to `digits` significant digits, positional unless very large or small.
pub fn significant(x: f64, digits: u32) -> String {
    let digits = digits.clamp(1, 17) as usize;
    if x == 0.0 || !x.is_finite() {
        return format!("{x:.*}", digits - 1);
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..17).contains(&exp) {
        return sci;
    }
    let negative = mantissa.starts_with('-');
    let digits_only: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let point = exp + 1;
    let body = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), digits_only)
    } else if point as usize >= digits_only.len() {
        format!("{}{}", digits_only, "0".repeat(point as usize - digits_only.len()))
    } else {
        let (a, b) = digits_only.split_at(point as usize);
        format!("{a}.{b}")
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// Parse arguments and run one command; returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn emit_json(out: &mut dyn Write, value: &impl Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(failure)?;
    writeln!(out, "{text}").map_err(failure)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Failure(format!("cannot write {}: {e}", path.display())))
}

/// Read a polygon file; names of embedded fixtures work without a file on disk.
fn load(path: &Path) -> Result<Polygon, CliError> {
    if !path.exists() {
        if let Some(name) = path.file_name().and_then(|s| s.to_str()) {
            if let Some(parsed) = fixtures::load(name) {
                return parsed.map_err(failure);
            }
        }
    }
    format::read(path).map_err(failure)
}

fn load_convex(path: &Path) -> Result<ConvexPolygon, CliError> {
    load(path)?
        .into_convex()
        .map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let pr = Printer { digits: cli.digits };
    let json = cli.format == OutputFormat::Json;
    let io = |e: std::io::Error| failure(e);
    match &cli.command {
        Command::Bound { n } => {
            let b = upper_bound(*n).map_err(|e| CliError::Usage(e.to_string()))?;
            if json {
                emit_json(out, &serde_json::json!({ "n": n, "upper_bound": b }))?;
            } else {
                writeln!(out, "{}", significant(b, cli.digits.unwrap_or(16))).map_err(io)?;
            }
        }
        Command::Construct(kind) => {
            let (polygon, label, output) = match kind {
                Construct::Regular { n, output } => {
                    let p = regular_small(*n).map_err(|e| CliError::Usage(e.to_string()))?;
                    (p, format!("regular small {n}-gon"), output)
                }
                Construct::Star {
                    n,
                    cycle,
                    composition,
                    output,
                } => {
                    let topology = match composition {
                        Some(c) => Topology::new(*n, *cycle, c.clone()),
                        None => Topology::balanced(*n, *cycle),
                    }
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                    let config = star_init(&topology).map_err(failure)?;
                    let p = realize(&config).map_err(failure)?.polygon;
                    let d = diameter(&p).length;
                    (canonicalize(&p.scaled(1.0 / d)), format!("star start {topology}"), output)
                }
            };
            let text = match output {
                Some(path) => {
                    write_file(path, &format::serialize_for_path(path, polygon.vertices(), Some(&label)))?;
                    None
                }
                None => Some(format::to_json(polygon.vertices(), Some(&label))),
            };
            if json || text.is_some() {
                if let Some(t) = text {
                    write!(out, "{t}").map_err(io)?;
                }
            } else {
                writeln!(out, "{label}: perimeter {}", pr.real(perimeter(&polygon))).map_err(io)?;
            }
        }
        Command::Verify { file } => {
            let p = load_convex(file)?;
            let report = verify(&p).map_err(|e| CliError::Failure(format!("{}: {e}", file.display())))?;
            let failures = report.failures();
            if json {
                emit_json(
                    out,
                    &serde_json::json!({ "report": report, "unit_diameter": report.unit_diameter(), "failures": failures }),
                )?;
            } else {
                print_report(out, &pr, &report).map_err(io)?;
            }
            if !failures.is_empty() {
                return Err(CliError::Failure(failures.join("; ")));
            }
        }
        Command::Graph { file } => {
            let p = load_convex(file)?;
            let g = extract(&p, DEFAULT_TOL_EDGE).map_err(|e| CliError::Failure(format!("{}: {e}", file.display())))?;
            let topology = topology_of(&g);
            let thrackle = check_thrackle(&g, &p);
            if json {
                emit_json(
                    out,
                    &serde_json::json!({
                        "n": g.n,
                        "edges": g.edges,
                        "cycle": g.cycle,
                        "pendants": g.pendants,
                        "topology": topology,
                        "thrackle": thrackle,
                    }),
                )?;
            } else {
                writeln!(out, "vertices     {}", g.n).map_err(io)?;
                writeln!(out, "diameters    {}", g.edges.len()).map_err(io)?;
                writeln!(out, "cycle length {}", g.cycle_len()).map_err(io)?;
                writeln!(out, "cycle        {:?}", g.cycle).map_err(io)?;
                writeln!(out, "pendants     {:?}", g.pendant_counts()).map_err(io)?;
                writeln!(out, "topology     {topology}").map_err(io)?;
                writeln!(out, "thrackle     {thrackle}").map_err(io)?;
            }
        }
        Command::Optimize {
            n,
            cycle,
            solver,
            output,
        } => {
            let opts = solver.options();
            let clock = Instant::now();
            let report = match cycle {
                Some(c) => {
                    if *c < 3 || c % 2 == 0 || c > n {
                        return Err(CliError::Usage(format!("cycle length must be odd and in 3..={n}, got {c}")));
                    }
                    search_cycles(*n, &[*c], &opts)
                }
                None => search(*n, &opts),
            }
            .map_err(|e| match e {
                crate::optimizer::SolveError::Domain(_) | crate::optimizer::SolveError::Options(_) => {
                    CliError::Usage(e.to_string())
                }
                other => failure(other),
            })?;
            let elapsed = clock.elapsed().as_secs_f64();
            if let Some(path) = output {
                let label = format!("optimized small {n}-gon, perimeter {:?}", report.best.perimeter);
                write_file(path, &format::serialize_for_path(path, report.best.polygon.vertices(), Some(&label)))?;
            }
            print_search(out, &pr, json, &report, elapsed)?;
        }
        Command::Records { solver } => {
            let opts = solver.options();
            let mut cycles: Vec<usize> = reference_records().iter().map(|r| r.cycle).collect();
            cycles.sort_unstable();
            cycles.dedup();
            let report = search_cycles(RECORD_N, &cycles, &opts).map_err(failure)?;
            let best = report.best_by_cycle();
            let rows: Vec<_> = reference_records()
                .into_iter()
                .map(|r| {
                    let computed = best.get(&r.cycle).map(|(_, s)| s.perimeter);
                    (r, computed)
                })
                .collect();
            if json {
                let list: Vec<_> = rows
                    .iter()
                    .map(|(r, c)| {
                        serde_json::json!({
                            "cycle": r.cycle,
                            "published": r.perimeter,
                            "source": r.source,
                            "computed": c,
                        })
                    })
                    .collect();
                emit_json(out, &serde_json::json!({ "n": RECORD_N, "records": list }))?;
            } else {
                writeln!(out, "{:>5}  {:<20}  {:<20}  {:<12}  source", "cycle", "published", "computed", "difference")
                    .map_err(io)?;
                for (r, c) in &rows {
                    let (computed, diff) = match c {
                        Some(v) => (pr.real(*v), format!("{:+.3e}", v - r.perimeter)),
                        None => ("-".to_string(), "-".to_string()),
                    };
                    writeln!(
                        out,
                        "{:>5}  {:<20}  {:<20}  {:<12}  {}",
                        r.cycle,
                        pr.real(r.perimeter),
                        computed,
                        diff,
                        r.source
                    )
                    .map_err(io)?;
                }
                writeln!(out, "bound  {}", pr.real(upper_bound(RECORD_N).expect("n >= 3"))).map_err(io)?;
            }
        }
        Command::Plot { file, output } => {
            let p = load_convex(file)?;
            let g = extract(&p, DEFAULT_TOL_EDGE).map_err(|e| CliError::Failure(format!("{}: {e}", file.display())))?;
            let text = svg::emit_svg(&p, &g);
            write_file(output, &text)?;
            if json {
                emit_json(
                    out,
                    &serde_json::json!({ "output": output, "boundary_segments": p.len(), "chords": g.edges.len() }),
                )?;
            } else {
                writeln!(
                    out,
                    "wrote {} ({} boundary segments, {} diameters)",
                    output.display(),
                    p.len(),
                    g.edges.len()
                )
                .map_err(io)?;
            }
        }
        Command::Fixtures { name, output } => match name {
            None => {
                if json {
                    let list: Vec<_> = fixtures::FIXTURES
                        .iter()
                        .map(|f| serde_json::json!({ "name": f.name, "file": f.file_name, "description": f.description }))
                        .collect();
                    emit_json(out, &list)?;
                } else {
                    for f in fixtures::FIXTURES {
                        writeln!(out, "{:<18} {}", f.name, f.description).map_err(io)?;
                    }
                }
            }
            Some(name) => {
                let f = fixtures::find(name).ok_or_else(|| CliError::Usage(format!("unknown fixture `{name}`")))?;
                match output {
                    Some(path) => write_file(path, f.text)?,
                    None => write!(out, "{}", f.text).map_err(io)?,
                }
            }
        },
    }
    Ok(())
}

fn print_report(out: &mut dyn Write, pr: &Printer, r: &VerificationReport) -> std::io::Result<()> {
    let bound = upper_bound(r.n).expect("n >= 3");
    writeln!(out, "vertices          {}", r.n)?;
    writeln!(out, "perimeter         {}", pr.real(r.perimeter.midpoint()))?;
    writeln!(out, "  enclosure       [{}, {}]", pr.real(r.perimeter.lo), pr.real(r.perimeter.hi))?;
    writeln!(out, "  certified digits {}", r.certified_digits)?;
    writeln!(out, "diameter          [{}, {}]", pr.real(r.diameter.lo), pr.real(r.diameter.hi))?;
    writeln!(out, "convex            {}", r.convex)?;
    writeln!(out, "topology          {}", r.graph_topology)?;
    writeln!(out, "cycle length      {}", r.graph_topology.cycle)?;
    writeln!(out, "upper bound       {}", pr.real(bound))?;
    writeln!(out, "bound gap         {}", pr.real(r.bound_gap))?;
    let failures = r.failures();
    if failures.is_empty() {
        writeln!(out, "status            ok")
    } else {
        writeln!(out, "status            FAILED: {}", failures.join("; "))
    }
}

#[derive(Serialize)]
struct CycleSummary<'a> {
    cycle: usize,
    topology: &'a Topology,
    perimeter: f64,
    converged: bool,
}

fn print_search(
    out: &mut dyn Write,
    pr: &Printer,
    json: bool,
    report: &SearchReport,
    elapsed: f64,
) -> Result<(), CliError> {
    let best = &report.best;
    let topology = extract(&best.polygon, DEFAULT_TOL_EDGE).ok().map(|g| topology_of(&g));
    let bound = upper_bound(report.n).expect("n >= 4");
    let per_cycle: Vec<CycleSummary> = report
        .best_by_cycle()
        .into_iter()
        .map(|(cycle, (t, r))| CycleSummary {
            cycle,
            topology: t,
            perimeter: r.perimeter,
            converged: r.converged,
        })
        .collect();
    if json {
        return emit_json(
            out,
            &serde_json::json!({
                "n": report.n,
                "perimeter": best.perimeter,
                "topology": topology,
                "converged": best.converged,
                "upper_bound": bound,
                "bound_gap": bound - best.perimeter,
                "topologies_tried": report.per_topology.len(),
                "seconds": elapsed,
                "per_cycle": per_cycle,
                "vertices": best.polygon.vertices().iter().map(|p| [p.x, p.y]).collect::<Vec<_>>(),
            }),
        );
    }
    let io = |e: std::io::Error| failure(e);
    writeln!(out, "best perimeter    {}", pr.real(best.perimeter)).map_err(io)?;
    match &topology {
        Some(t) => writeln!(out, "topology          {t}").map_err(io)?,
        None => writeln!(out, "topology          (diameter graph not a full odd cycle with pendants)").map_err(io)?,
    }
    writeln!(out, "converged         {}", best.converged).map_err(io)?;
    writeln!(out, "upper bound       {}", pr.real(bound)).map_err(io)?;
    writeln!(out, "bound gap         {}", pr.real(bound - best.perimeter)).map_err(io)?;
    writeln!(
        out,
        "searched          {} topologies in {:.2} s",
        report.per_topology.len(),
        elapsed
    )
    .map_err(io)?;
    writeln!(out, "per cycle length:").map_err(io)?;
    for s in per_cycle {
        writeln!(
            out,
            "  c={:<3} {}  {}{}",
            s.cycle,
            pr.real(s.perimeter),
            s.topology,
            if s.converged { "" } else { "  (not converged)" }
        )
        .map_err(io)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(significant(3.140331156954753, 16), "3.140331156954753");
        assert_eq!(significant(3.0, 4), "3.000");
        assert_eq!(significant(-0.000123456, 3), "-0.000123");
        assert_eq!(significant(1234.5, 2), "1200");
        assert_eq!(significant(1.5e-9, 2), "1.5e-9");
    }
}
