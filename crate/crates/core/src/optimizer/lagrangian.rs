//! Perimeter objective over edge angles and its augmented Lagrangian.
//!
//! Positions are sums of unit vectors along graph paths from cycle vertex 0,
//! so every gradient is a chain rule through those sums. Variables are all
//! angles except the first cycle angle, which fixes the rotation.

use crate::constructions::AngleConfig;
use crate::geometry::Point2;
use crate::sum::NeumaierSum;

#[inline]
fn unit_derivative(theta: f64) -> Point2 {
    let (s, c) = theta.sin_cos();
    Point2::new(-s, c)
}

/// Fixed combinatorics of one solve: topology, frozen vertex order and the
/// constrained vertex pairs, all in graph labels.
#[derive(Debug, Clone)]
pub(crate) struct Layout {
    pub n: usize,
    pub c: usize,
    pub owners: Vec<usize>,
    pub children: Vec<Vec<usize>>,
    /// Graph label at each polygon position.
    pub order: Vec<usize>,
    /// Frozen first cycle angle.
    pub gauge: f64,
    /// Vertex pairs that are not graph edges.
    pub free_pairs: Vec<(usize, usize)>,
}

impl Layout {
    pub fn new(config: &AngleConfig, order: Vec<usize>) -> Self {
        let n = config.n();
        let c = config.topology.cycle;
        let owners = config.pendant_owners();
        let mut children = vec![Vec::new(); c];
        for (k, &o) in owners.iter().enumerate() {
            children[o].push(c + k);
        }
        let mut is_edge = vec![false; n * n];
        for (a, b) in config.graph_edges() {
            is_edge[a * n + b] = true;
            is_edge[b * n + a] = true;
        }
        let free_pairs = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !is_edge[i * n + j])
            .collect();
        Self {
            n,
            c,
            owners,
            children,
            order,
            gauge: config.cycle_angles[0],
            free_pairs,
        }
    }

    pub fn variables(&self, config: &AngleConfig) -> Vec<f64> {
        config.cycle_angles[1..]
            .iter()
            .chain(&config.pendant_angles)
            .copied()
            .collect()
    }

    pub fn cycle_angle(&self, x: &[f64], j: usize) -> f64 {
        if j == 0 {
            self.gauge
        } else {
            x[j - 1]
        }
    }

    pub fn config(&self, template: &AngleConfig, x: &[f64]) -> AngleConfig {
        let mut out = template.clone();
        for j in 0..self.c {
            out.cycle_angles[j] = self.cycle_angle(x, j);
        }
        out.pendant_angles.copy_from_slice(&x[self.c - 1..]);
        out
    }

    pub fn positions(&self, x: &[f64]) -> Vec<Point2> {
        let mut pos = vec![Point2::ORIGIN; self.n];
        for j in 1..self.c {
            pos[j] = pos[j - 1] + Point2::unit(self.cycle_angle(x, j - 1));
        }
        for (k, &o) in self.owners.iter().enumerate() {
            pos[self.c + k] = pos[o] + Point2::unit(x[self.c - 1 + k]);
        }
        pos
    }

    pub fn closure(&self, x: &[f64]) -> Point2 {
        let mut sx = NeumaierSum::new();
        let mut sy = NeumaierSum::new();
        for j in 0..self.c {
            let (s, c) = self.cycle_angle(x, j).sin_cos();
            sx.add(c);
            sy.add(s);
        }
        Point2::new(sx.value(), sy.value())
    }

    /// Perimeter under the frozen order; accumulates `weight * dP/dpos` into `gpos`.
    pub fn perimeter(&self, pos: &[Point2], gpos: &mut [Point2], weight: f64) -> f64 {
        let mut sum = NeumaierSum::new();
        for k in 0..self.n {
            let a = self.order[k];
            let b = self.order[(k + 1) % self.n];
            let e = pos[b] - pos[a];
            let len = e.norm();
            sum.add(len);
            let u = e * (weight / len);
            gpos[b] = gpos[b] + u;
            gpos[a] = gpos[a] - u;
        }
        sum.value()
    }

    /// Gradient with respect to every angle (cycle angles, then pendant
    /// angles) of a function of the positions whose position gradient is `gpos`.
    pub fn chain_all(&self, x: &[f64], gpos: &[Point2]) -> Vec<f64> {
        let c = self.c;
        let mut grad = vec![0.0; self.n];
        for k in 0..self.owners.len() {
            grad[c + k] = gpos[c + k].dot(unit_derivative(x[c - 1 + k]));
        }
        // Cycle angle j moves cycle vertices j+1..c-1 and everything hanging off them.
        let mut suffix = Point2::ORIGIN;
        for j in (1..c).rev() {
            let mut subtree = gpos[j];
            for &w in &self.children[j] {
                subtree = subtree + gpos[w];
            }
            suffix = suffix + subtree;
            grad[j - 1] = suffix.dot(unit_derivative(self.cycle_angle(x, j - 1)));
        }
        grad
    }

    /// Turn cross product at polygon position `k` and its position gradient.
    fn turn(&self, pos: &[Point2], k: usize) -> (f64, [(usize, Point2); 3]) {
        let n = self.n;
        let a = self.order[(k + n - 1) % n];
        let b = self.order[k];
        let c = self.order[(k + 1) % n];
        let e1 = pos[b] - pos[a];
        let e2 = pos[c] - pos[b];
        let cross = e1.cross(e2);
        let d1 = Point2::new(e2.y, -e2.x);
        let d2 = Point2::new(-e1.y, e1.x);
        (cross, [(a, -d1), (b, d1 - d2), (c, d2)])
    }

    pub fn constraint_count(&self) -> usize {
        self.free_pairs.len() + self.n
    }

    /// Inequality constraints `g <= 0`: squared free-pair distances minus one,
    /// then negated turn cross products.
    pub fn inequalities(&self, pos: &[Point2]) -> Vec<f64> {
        let mut g: Vec<f64> = self
            .free_pairs
            .iter()
            .map(|&(i, j)| (pos[i] - pos[j]).norm_squared() - 1.0)
            .collect();
        g.extend((0..self.n).map(|k| -self.turn(pos, k).0));
        g
    }
}

/// Perimeter under a frozen vertex order and its gradient over all angles.
pub(crate) fn perimeter_gradient(layout: &Layout, x: &[f64]) -> (f64, Vec<f64>) {
    let pos = layout.positions(x);
    let mut gpos = vec![Point2::ORIGIN; layout.n];
    let p = layout.perimeter(&pos, &mut gpos, 1.0);
    (p, layout.chain_all(x, &gpos))
}

/// Powell-Hestenes-Rockafellar augmented Lagrangian of `-perimeter`.
#[derive(Debug, Clone)]
pub(crate) struct Augmented {
    pub lambda: Point2,
    pub mu: Vec<f64>,
    pub rho: f64,
}

impl Augmented {
    pub fn new(layout: &Layout, rho: f64) -> Self {
        Self {
            lambda: Point2::ORIGIN,
            mu: vec![0.0; layout.constraint_count()],
            rho,
        }
    }

    /// Least-squares closure multipliers at `x`, ignoring the inequalities.
    pub fn estimate_closure_multiplier(&mut self, layout: &Layout, x: &[f64]) {
        let (_, full) = perimeter_gradient(layout, x);
        let (mut a11, mut a12, mut a22, mut b1, mut b2) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for (j, &g) in full.iter().enumerate().take(layout.c).skip(1) {
            let d = unit_derivative(layout.cycle_angle(x, j));
            // gradient of -P with respect to cycle angle j
            let gj = -g;
            a11 += d.x * d.x;
            a12 += d.x * d.y;
            a22 += d.y * d.y;
            b1 -= d.x * gj;
            b2 -= d.y * gj;
        }
        let det = a11 * a22 - a12 * a12;
        if det.abs() > 1e-300 {
            self.lambda = Point2::new((a22 * b1 - a12 * b2) / det, (a11 * b2 - a12 * b1) / det);
        }
    }

    pub fn value_and_gradient(&self, layout: &Layout, x: &[f64], grad: &mut [f64]) -> f64 {
        let pos = layout.positions(x);
        let mut gpos = vec![Point2::ORIGIN; layout.n];
        let mut value = NeumaierSum::new();
        value.add(-layout.perimeter(&pos, &mut gpos, -1.0));

        let rho = self.rho;
        let nf = layout.free_pairs.len();
        for (idx, &(i, j)) in layout.free_pairs.iter().enumerate() {
            let d = pos[i] - pos[j];
            let g = d.norm_squared() - 1.0;
            let shifted = self.mu[idx] + rho * g;
            if shifted > 0.0 {
                value.add((shifted * shifted - self.mu[idx] * self.mu[idx]) / (2.0 * rho));
                let w = d * (2.0 * shifted);
                gpos[i] = gpos[i] + w;
                gpos[j] = gpos[j] - w;
            } else {
                value.add(-self.mu[idx] * self.mu[idx] / (2.0 * rho));
            }
        }
        for k in 0..layout.n {
            let mu = self.mu[nf + k];
            let (cross, parts) = layout.turn(&pos, k);
            let shifted = mu - rho * cross;
            if shifted > 0.0 {
                value.add((shifted * shifted - mu * mu) / (2.0 * rho));
                for (v, d) in parts {
                    gpos[v] = gpos[v] - d * shifted;
                }
            } else {
                value.add(-mu * mu / (2.0 * rho));
            }
        }

        let full = layout.chain_all(x, &gpos);
        grad[..layout.c - 1].copy_from_slice(&full[1..layout.c]);
        grad[layout.c - 1..].copy_from_slice(&full[layout.c..]);

        let h = layout.closure(x);
        value.add(self.lambda.dot(h) + 0.5 * rho * h.norm_squared());
        let w = self.lambda + h * rho;
        for j in 1..layout.c {
            grad[j - 1] += w.dot(unit_derivative(layout.cycle_angle(x, j)));
        }
        value.value()
    }

    /// First-order multiplier update; returns the constraint violation measured
    /// before the update.
    pub fn update(&mut self, layout: &Layout, x: &[f64]) -> Violation {
        let h = layout.closure(x);
        let pos = layout.positions(x);
        let g = layout.inequalities(&pos);
        let mut inequality = 0.0_f64;
        let mut complementarity = 0.0_f64;
        for (mu, &gi) in self.mu.iter_mut().zip(&g) {
            inequality = inequality.max(gi);
            complementarity = complementarity.max(gi.max(-*mu / self.rho).abs());
            *mu = (*mu + self.rho * gi).max(0.0);
        }
        self.lambda = self.lambda + h * self.rho;
        Violation {
            closure: h.norm(),
            inequality: inequality.max(0.0),
            complementarity,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Violation {
    pub closure: f64,
    pub inequality: f64,
    pub complementarity: f64,
}

impl Violation {
    pub fn worst(&self) -> f64 {
        self.closure.max(self.complementarity)
    }
}
