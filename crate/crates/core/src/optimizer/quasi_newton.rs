//! Dense BFGS minimizer with a monotone backtracking line search.
//!
//! Every accepted step satisfies `f(x_new) <= f(x_old)`. Close to a minimum
//! the function values stop resolving progress before the gradient does, so
//! once an Armijo step fails at rounding level the search falls back to
//! accepting non-increasing steps that shrink the gradient norm. When even
//! that stops working the inverse Hessian is rebuilt once from central
//! differences of the gradient, which usually buys the last few digits.

use nalgebra::DMatrix;

#[derive(Debug, Clone, Copy)]
pub struct MinimizeOptions {
    pub max_iterations: usize,
    /// Stop once the largest gradient component is at most this.
    pub gradient_tol: f64,
    /// Largest coordinate change allowed in a single step.
    pub max_step: f64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            max_iterations: 1000,
            gradient_tol: 1e-9,
            max_step: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    GradientTolerance,
    MaxIterations,
    /// No non-increasing step could be found along the search direction.
    Stalled,
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
    pub termination: Termination,
}

/// Iterations without halving the gradient norm before the search counts as stalled.
const STALL_STEPS: usize = 60;

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Inverse Hessian approximation, row-major.
struct InverseHessian {
    dim: usize,
    h: Vec<f64>,
}

impl InverseHessian {
    /// Inverse of the symmetrized finite-difference Hessian, if positive definite.
    fn finite_difference<F>(f: &mut F, x: &[f64], g: &[f64]) -> Option<Self>
    where
        F: FnMut(&[f64], &mut [f64]) -> f64,
    {
        let n = x.len();
        let mut hess = DMatrix::<f64>::zeros(n, n);
        let mut xp = x.to_vec();
        let (mut gp, mut gm) = (vec![0.0; n], vec![0.0; n]);
        let gscale = inf_norm(g).max(1e-3);
        for j in 0..n {
            let h = 1e-5 * x[j].abs().max(1.0) * gscale.min(1.0).sqrt();
            xp[j] = x[j] + h;
            f(&xp, &mut gp);
            xp[j] = x[j] - h;
            f(&xp, &mut gm);
            xp[j] = x[j];
            for i in 0..n {
                hess[(i, j)] = (gp[i] - gm[i]) / (2.0 * h);
            }
        }
        let sym = (&hess + hess.transpose()) * 0.5;
        let inv = sym.cholesky()?.inverse();
        if inv.iter().any(|v| !v.is_finite()) {
            return None;
        }
        Some(Self {
            dim: n,
            h: inv.transpose().iter().copied().collect(),
        })
    }

    fn scaled_identity(dim: usize, gamma: f64) -> Self {
        let mut h = vec![0.0; dim * dim];
        for i in 0..dim {
            h[i * dim + i] = gamma;
        }
        Self { dim, h }
    }

    fn apply(&self, g: &[f64], out: &mut [f64]) {
        for (o, row) in out.iter_mut().zip(self.h.chunks_exact(self.dim)) {
            *o = dot(row, g);
        }
    }

    /// `H <- (I - r s y^T) H (I - r y s^T) + r s s^T`, `r = 1 / y^T s`.
    fn update(&mut self, s: &[f64], y: &[f64]) {
        let n = self.dim;
        let r = 1.0 / dot(s, y);
        let mut hy = vec![0.0; n];
        self.apply(y, &mut hy);
        let yhy = dot(y, &hy);
        let coef = (1.0 + r * yhy) * r;
        for i in 0..n {
            for j in 0..n {
                self.h[i * n + j] += coef * s[i] * s[j] - r * (hy[i] * s[j] + s[i] * hy[j]);
            }
        }
    }
}

/// Minimize `f` from `x0`. `f(x, grad)` returns the value and writes the gradient.
///
/// `on_step(old, new)` sees the objective before and after every accepted step.
pub fn minimize<F, S>(mut f: F, x0: &[f64], opts: &MinimizeOptions, mut on_step: S) -> Minimum
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
    S: FnMut(f64, f64),
{
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut g = vec![0.0; n];
    let mut fx = f(&x, &mut g);
    if n == 0 {
        return Minimum {
            x,
            value: fx,
            gradient_norm: 0.0,
            iterations: 0,
            termination: Termination::GradientTolerance,
        };
    }

    let mut hinv = InverseHessian::scaled_identity(n, 1.0);
    let mut fresh = true;
    let mut p = vec![0.0; n];
    let mut x_new = vec![0.0; n];
    let mut g_new = vec![0.0; n];
    let mut s = vec![0.0; n];
    let mut y = vec![0.0; n];
    let mut iterations = 0;
    let mut termination = Termination::MaxIterations;
    // Iterations since the gradient norm last halved.
    let mut noisy = 0;
    let mut best_gnorm = f64::INFINITY;
    let mut refreshed = false;

    while iterations < opts.max_iterations {
        let gnorm = inf_norm(&g);
        if gnorm <= opts.gradient_tol {
            termination = Termination::GradientTolerance;
            break;
        }
        if gnorm < 0.5 * best_gnorm {
            best_gnorm = gnorm;
            noisy = 0;
        }
        hinv.apply(&g, &mut p);
        p.iter_mut().for_each(|v| *v = -*v);
        let mut slope = dot(&g, &p);
        if !(slope < 0.0) {
            hinv = InverseHessian::scaled_identity(n, 1.0);
            fresh = true;
            for (pi, gi) in p.iter_mut().zip(&g) {
                *pi = -gi;
            }
            slope = dot(&g, &p);
        }

        let mut alpha = 1.0_f64;
        let pmax = inf_norm(&p);
        if pmax * alpha > opts.max_step {
            alpha = opts.max_step / pmax;
        }

        let mut accepted = None;
        let mut relaxed: Option<(f64, f64)> = None;
        for _ in 0..60 {
            for i in 0..n {
                x_new[i] = x[i] + alpha * p[i];
            }
            let f_new = f(&x_new, &mut g_new);
            if f_new.is_finite() {
                if f_new <= fx + 1e-4 * alpha * slope {
                    accepted = Some(f_new);
                    break;
                }
                // Rounding-level change: accept if not worse and the gradient shrinks.
                let noise = 16.0 * f64::EPSILON * fx.abs().max(1.0);
                if f_new <= fx && (fx - f_new) <= noise && relaxed.is_none() {
                    let gn = inf_norm(&g_new);
                    if gn < gnorm {
                        relaxed = Some((alpha, f_new));
                    }
                }
            }
            alpha *= 0.5;
        }
        let step = match (accepted, relaxed) {
            (Some(v), _) => {
                noisy += 1;
                Some(v)
            }
            (None, Some((a, v))) => {
                alpha = a;
                for i in 0..n {
                    x_new[i] = x[i] + alpha * p[i];
                }
                f(&x_new, &mut g_new);
                noisy += 1;
                Some(v)
            }
            (None, None) if !fresh => {
                hinv = InverseHessian::scaled_identity(n, 1.0);
                fresh = true;
                continue;
            }
            (None, None) => {
                noisy = STALL_STEPS;
                None
            }
        };
        if noisy >= STALL_STEPS {
            if refreshed {
                termination = Termination::Stalled;
                break;
            }
            refreshed = true;
            noisy = 0;
            best_gnorm = gnorm;
            if let Some(h) = InverseHessian::finite_difference(&mut f, &x, &g) {
                hinv = h;
                fresh = false;
            }
        }
        let Some(f_new) = step else { continue };

        assert!(f_new <= fx, "line search accepted an increasing step");
        on_step(fx, f_new);
        for i in 0..n {
            s[i] = x_new[i] - x[i];
            y[i] = g_new[i] - g[i];
        }
        let sy = dot(&s, &y);
        if sy > 1e-300 && sy > 1e-12 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
            if fresh {
                let gamma = sy / dot(&y, &y);
                hinv = InverseHessian::scaled_identity(n, gamma);
                fresh = false;
            }
            hinv.update(&s, &y);
        }
        std::mem::swap(&mut x, &mut x_new);
        std::mem::swap(&mut g, &mut g_new);
        fx = f_new;
        iterations += 1;
    }

    Minimum {
        gradient_norm: inf_norm(&g),
        x,
        value: fx,
        iterations,
        termination,
    }
}
