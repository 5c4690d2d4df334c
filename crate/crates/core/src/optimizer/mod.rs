//! Perimeter maximization over angle configurations.
//!
//! [`solve`] handles one topology: the vertex order is frozen from the start,
//! the two closure equalities and the distance/convexity inequalities go into
//! an augmented Lagrangian, and each subproblem is minimized with dense BFGS.
//! [`search`] screens topologies for every odd cycle length and solves the
//! promising ones on a worker pool.

mod lagrangian;
pub mod quasi_newton;
pub mod screen;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::constructions::{convex_order, realize_with_order, star_init, AngleConfig, ConstructionError};
use crate::diamgraph::Topology;
use crate::geometry::{canonicalize, diameter, perimeter, ConvexPolygon};
use lagrangian::{perimeter_gradient, Augmented, Layout};
use quasi_newton::{minimize, MinimizeOptions};

/// Closure residual a start configuration may have before [`solve`] refuses it.
pub const START_CLOSURE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("start configuration does not close: residual {residual:e} exceeds {tolerance:e}")]
    InfeasibleStart { residual: f64, tolerance: f64 },
    #[error("start configuration has topology {found}, expected {expected}")]
    TopologyMismatch { expected: Topology, found: Topology },
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error("non-finite value in the objective")]
    NonFinite,
    #[error("invalid solver options: {0}")]
    Options(&'static str),
    #[error("search needs at least 4 vertices, got {0}")]
    Domain(usize),
    #[error("no topology produced a feasible polygon")]
    NoResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    /// Budget of inner quasi-Newton iterations per solve.
    pub max_iterations: usize,
    /// Outer multiplier updates per solve.
    pub max_outer: usize,
    pub feasibility_tol: f64,
    pub stationarity_tol: f64,
    pub initial_penalty: f64,
    pub penalty_growth: f64,
    pub max_penalty: f64,
    pub seed: u64,
    /// Screened and randomly perturbed compositions tried per cycle length.
    pub restarts: usize,
    /// Worker threads; 0 uses every available core.
    pub jobs: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            max_iterations: 20_000,
            max_outer: 40,
            feasibility_tol: 1e-10,
            stationarity_tol: 1e-9,
            initial_penalty: 1e3,
            penalty_growth: 10.0,
            max_penalty: 1e10,
            seed: 0,
            restarts: 4,
            jobs: 0,
        }
    }
}

impl SolveOptions {
    pub fn validate(&self) -> Result<(), SolveError> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.feasibility_tol) || !positive(self.stationarity_tol) {
            return Err(SolveError::Options("tolerances must be positive"));
        }
        if !positive(self.initial_penalty) || !(self.penalty_growth > 1.0) {
            return Err(SolveError::Options("penalty must be positive and growing"));
        }
        if self.restarts == 0 {
            return Err(SolveError::Options("restarts must be at least 1"));
        }
        if self.max_iterations == 0 || self.max_outer == 0 {
            return Err(SolveError::Options("iteration limits must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    /// Final angles, before the diameter rescale.
    pub config: AngleConfig,
    /// Unit-diameter polygon in canonical pose.
    pub polygon: ConvexPolygon,
    pub perimeter: f64,
    pub closure_residual: f64,
    /// Largest excess of a vertex distance over 1 before rescaling.
    pub max_distance_violation: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopologyRun {
    pub outcome: Result<SolveResult, SolveError>,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchReport {
    pub n: usize,
    pub best: SolveResult,
    pub per_topology: BTreeMap<Topology, TopologyRun>,
}

impl SearchReport {
    /// Best perimeter found for each cycle length.
    pub fn best_by_cycle(&self) -> BTreeMap<usize, (&Topology, &SolveResult)> {
        let mut out: BTreeMap<usize, (&Topology, &SolveResult)> = BTreeMap::new();
        for (t, run) in &self.per_topology {
            if let Ok(r) = &run.outcome {
                let entry = out.entry(t.cycle).or_insert((t, r));
                if r.perimeter > entry.1.perimeter {
                    *entry = (t, r);
                }
            }
        }
        out
    }
}

/// Perimeter under a fixed vertex order and its gradient over every angle:
/// the `c` cycle angles followed by the pendant angles.
///
/// `order` lists the graph label at each polygon position. The closing cycle
/// angle does not move any vertex, so its component is zero.
pub fn objective_and_gradient(config: &AngleConfig, order: &[usize]) -> Result<(f64, Vec<f64>), SolveError> {
    let layout = Layout::new(config, order.to_vec());
    let x = layout.variables(config);
    let (value, grad) = perimeter_gradient(&layout, &x);
    if !value.is_finite() || grad.iter().any(|g| !g.is_finite()) {
        return Err(SolveError::NonFinite);
    }
    Ok((value, grad))
}

struct Stage {
    x: Vec<f64>,
    iterations: usize,
    converged: bool,
}

fn run_lagrangian(layout: &Layout, x0: Vec<f64>, opts: &SolveOptions) -> Result<Stage, SolveError> {
    let mut al = Augmented::new(layout, opts.initial_penalty);
    al.estimate_closure_multiplier(layout, &x0);
    let mut x = x0;
    let mut iterations = 0;
    let mut previous = f64::INFINITY;
    let mut converged = false;
    for _ in 0..opts.max_outer {
        let budget = opts.max_iterations.saturating_sub(iterations);
        if budget == 0 {
            break;
        }
        let inner = MinimizeOptions {
            max_iterations: budget,
            gradient_tol: 0.1 * opts.stationarity_tol,
            max_step: 0.05,
        };
        let m = minimize(
            |x, g| al.value_and_gradient(layout, x, g),
            &x,
            &inner,
            |old, new| assert!(new <= old, "augmented objective increased"),
        );
        if !m.value.is_finite() {
            return Err(SolveError::NonFinite);
        }
        x = m.x;
        iterations += m.iterations;
        let violation = al.update(layout, &x);
        let worst = violation.worst().max(violation.inequality);
        if worst <= opts.feasibility_tol && m.gradient_norm <= opts.stationarity_tol {
            converged = true;
            break;
        }
        if worst > 0.25 * previous {
            al.rho = (al.rho * opts.penalty_growth).min(opts.max_penalty);
        }
        previous = worst;
    }
    Ok(Stage { x, iterations, converged })
}

/// Maximize the perimeter for `topology` starting from `start`.
///
/// `start` may use any labeling of the topology's cycle. It must close to
/// within [`START_CLOSURE_TOL`]; it is projected onto the closed set before
/// the vertex order is frozen. If the optimum leaves that order, the solve
/// repeats once per order change with the order re-derived.
pub fn solve(topology: &Topology, start: &AngleConfig, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
    opts.validate()?;
    if !start.topology.equivalent(topology) {
        return Err(SolveError::TopologyMismatch {
            expected: topology.clone(),
            found: start.topology.clone(),
        });
    }
    let residual = start.closure_residual();
    if !(residual <= START_CLOSURE_TOL) {
        return Err(SolveError::InfeasibleStart {
            residual,
            tolerance: START_CLOSURE_TOL,
        });
    }

    let mut config = start.clone();
    config.close_cycle();
    let mut iterations = 0;
    let mut converged = false;
    let mut order = convex_order(&config.positions());
    for _ in 0..4 {
        let layout = Layout::new(&config, order.clone());
        let stage = run_lagrangian(&layout, layout.variables(&config), opts)?;
        iterations += stage.iterations;
        converged = stage.converged;
        config = layout.config(&config, &stage.x);
        config.close_cycle();
        let next = convex_order(&config.positions());
        if next == order {
            break;
        }
        order = next;
        converged = false;
    }

    let closure_residual = config.closure_residual();
    let pos = config.positions();
    let raw = realize_with_order(&config, &pos, &order)?.polygon;
    let d = diameter(&raw).length;
    let max_distance_violation = (d - 1.0).max(0.0);
    let polygon = canonicalize(&raw.scaled(1.0 / d));
    let value = perimeter(&polygon);
    if !value.is_finite() {
        return Err(SolveError::NonFinite);
    }
    Ok(SolveResult {
        config,
        perimeter: value,
        polygon,
        closure_residual,
        max_distance_violation,
        iterations,
        converged: converged
            && closure_residual <= opts.feasibility_tol
            && max_distance_violation <= opts.feasibility_tol,
    })
}

/// Solve `topology` from its Reinhardt-star start.
pub fn solve_from_star(topology: &Topology, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
    let start = star_init(topology)?;
    solve(topology, &start, opts)
}

/// Move one pendant between two random cycle vertices, `moves` times.
fn perturb(t: &Topology, moves: usize, rng: &mut ChaCha8Rng) -> Topology {
    let mut comp = t.composition.clone();
    let c = comp.len();
    for _ in 0..moves {
        let from = rng.gen_range(0..c);
        if comp[from] == 0 {
            continue;
        }
        let to = rng.gen_range(0..c);
        comp[from] -= 1;
        comp[to] += 1;
    }
    Topology { n: t.n, cycle: t.cycle, composition: comp }.canonical()
}

/// Topologies tried for one cycle length: the best screened candidates, the
/// balanced composition and random perturbations of the best candidate.
pub fn candidate_topologies(n: usize, c: usize, screened: &[screen::Candidate], opts: &SolveOptions) -> Vec<Topology> {
    let mut out: Vec<Topology> = Vec::new();
    let push = |t: Topology, out: &mut Vec<Topology>| {
        if !out.contains(&t) {
            out.push(t);
        }
    };
    for cand in screened.iter().take(opts.restarts) {
        push(cand.topology.clone(), &mut out);
    }
    let balanced = match Topology::balanced(n, c) {
        Ok(t) => t.canonical(),
        Err(_) => return out,
    };
    push(balanced.clone(), &mut out);
    if c < n {
        let base = out.first().cloned().unwrap_or(balanced);
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ ((n as u64) << 32) ^ c as u64);
        for _ in 0..opts.restarts {
            push(perturb(&base, 1 + rng.gen_range(0..2), &mut rng), &mut out);
        }
    }
    out
}

/// Search the given odd cycle lengths for the longest perimeter `n`-gon.
pub fn search_cycles(n: usize, cycles: &[usize], opts: &SolveOptions) -> Result<SearchReport, SolveError> {
    opts.validate()?;
    if n < 4 {
        return Err(SolveError::Domain(n));
    }
    let cycles: Vec<usize> = cycles
        .iter()
        .copied()
        .filter(|&c| c >= 3 && c % 2 == 1 && c <= n)
        .collect();
    let screened = screen::screen(n, &cycles, opts.restarts, opts.seed);
    let mut jobs: Vec<Topology> = Vec::new();
    for &c in &cycles {
        let list = screened.get(&c).map(Vec::as_slice).unwrap_or(&[]);
        for t in candidate_topologies(n, c, list, opts) {
            if !jobs.contains(&t) {
                jobs.push(t);
            }
        }
    }

    let work = || -> Vec<(Topology, TopologyRun)> {
        jobs.par_iter()
            .map(|t| {
                let clock = Instant::now();
                let outcome = solve_from_star(t, opts);
                (
                    t.clone(),
                    TopologyRun {
                        outcome,
                        elapsed: clock.elapsed(),
                    },
                )
            })
            .collect()
    };
    let runs = if opts.jobs == 0 {
        work()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|_| SolveError::Options("could not start worker pool"))?
            .install(work)
    };

    let per_topology: BTreeMap<Topology, TopologyRun> = runs.into_iter().collect();
    // Iteration in topology order makes ties go to the smaller cycle, then
    // the lexicographically smaller composition.
    let mut best: Option<&SolveResult> = None;
    for run in per_topology.values() {
        if let Ok(r) = &run.outcome {
            if best.is_none_or(|b| r.perimeter > b.perimeter) {
                best = Some(r);
            }
        }
    }
    let best = best.cloned().ok_or(SolveError::NoResult)?;
    Ok(SearchReport { n, best, per_topology })
}

/// Search every odd cycle length `3 <= c <= n`.
pub fn search(n: usize, opts: &SolveOptions) -> Result<SearchReport, SolveError> {
    let cycles: Vec<usize> = (3..=n).step_by(2).collect();
    search_cycles(n, &cycles, opts)
}
