//! Topology screening.
//!
//! Take the `2n` directed diameters of a polygon whose diameter graph has `n`
//! edges and sort them by direction. Consecutive directions bound `2n` gaps,
//! antipodal gaps have equal width, and the `n` widths sum to `pi`. Each gap
//! spans one boundary edge of length `2 sin(width / 2)` seen from a common
//! diameter endpoint; the sign of a gap records whether that endpoint is the
//! tail or the head of the two diameters. The perimeter is therefore
//! `sum 2 sin(width_k / 2)`, maximal when every width is `pi / n`, and the
//! polygon closes only if `sum_k sign_k (z_{k+1} - z_k) = 0` where `z_k` are the
//! unit directions.
//!
//! With all widths equal the closing defect is `|omega - 1| |sum_k sign_k omega^k|`,
//! `omega = exp(i pi / n)`. The optimal perimeter deficit of a sign pattern grows
//! with the square of this defect, so patterns with the smallest
//! `|sum sign_k omega^k|` are the most promising topologies. Sign changes of the
//! antiperiodic pattern are cycle edges; maximal runs of `+` are the fans of the
//! cycle vertices in angular order, and angular fan `r` belongs to cycle vertex
//! `2r mod c`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diamgraph::Topology;

/// A topology with the closing defect of its equal-gap configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub topology: Topology,
    pub defect: f64,
}

/// Largest `n` handled by the bitmask representation.
pub const MAX_SCREEN_N: usize = 64;

fn bit(bits: u64, k: usize) -> bool {
    (bits >> k) & 1 == 1
}

/// Sign `k` of the antiperiodic extension, `0 <= k < 2n`.
fn doubled_sign(bits: u64, n: usize, k: usize) -> bool {
    if k < n {
        bit(bits, k)
    } else {
        !bit(bits, k - n)
    }
}

/// Number of sign changes of the antiperiodic pattern (the cycle length).
pub fn sign_changes(bits: u64, n: usize) -> usize {
    let mask = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
    let inner = ((bits ^ (bits >> 1)) & (mask >> 1)).count_ones() as usize;
    inner + usize::from(bit(bits, n - 1) == bit(bits, 0))
}

/// `|sum_k sign_k omega^k|` with `omega = exp(i pi / n)`.
pub fn equal_gap_defect(bits: u64, n: usize) -> f64 {
    let (mut re, mut im) = (0.0, 0.0);
    for k in 0..n {
        let (s, c) = (PI * k as f64 / n as f64).sin_cos();
        let sign = if bit(bits, k) { 1.0 } else { -1.0 };
        re += sign * c;
        im += sign * s;
    }
    re.hypot(im)
}

/// Canonical topology of a sign pattern; `None` for cycles shorter than 3.
pub fn pattern_topology(bits: u64, n: usize) -> Option<Topology> {
    let len = 2 * n;
    let mut fans = Vec::new();
    for start in 0..len {
        if doubled_sign(bits, n, start) && !doubled_sign(bits, n, (start + len - 1) % len) {
            let mut m = 0;
            while doubled_sign(bits, n, (start + m) % len) {
                m += 1;
            }
            fans.push(m - 1);
        }
    }
    let c = fans.len();
    if c < 3 {
        return None;
    }
    let mut composition = vec![0; c];
    for (r, &m) in fans.iter().enumerate() {
        composition[(2 * r) % c] = m;
    }
    Topology::new(n, c, composition).ok().map(|t| t.canonical())
}

/// A sign pattern realizing `topology` (inverse of [`pattern_topology`] up to symmetry).
pub fn topology_pattern(topology: &Topology) -> u64 {
    let c = topology.cycle;
    let n = topology.n;
    assert!(n <= MAX_SCREEN_N);
    let fan_len = |r: usize| topology.composition[(2 * r) % c] + 1;
    let half = (c - 1) / 2;
    let mut signs = Vec::with_capacity(2 * n);
    for r in 0..c {
        signs.extend(std::iter::repeat_n(true, fan_len(r)));
        signs.extend(std::iter::repeat_n(false, fan_len((r + c - half) % c)));
    }
    signs
        .iter()
        .take(n)
        .enumerate()
        .fold(0u64, |acc, (k, &s)| if s { acc | (1 << k) } else { acc })
}

pub fn topology_defect(topology: &Topology) -> f64 {
    equal_gap_defect(topology_pattern(topology), topology.n)
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Entry(f64, u64);

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

/// Keeps the `cap` smallest-defect patterns per cycle length.
struct Pools {
    n: usize,
    cap: usize,
    wanted: Vec<bool>,
    heaps: Vec<BinaryHeap<Entry>>,
}

impl Pools {
    fn new(n: usize, per_cycle: usize, cycles: &[usize]) -> Self {
        let mut wanted = vec![false; n + 2];
        for &c in cycles {
            if c <= n {
                wanted[c] = true;
            }
        }
        Self {
            n,
            // Symmetric copies of one pattern share the defect; keep enough
            // entries to see `per_cycle` distinct classes.
            cap: per_cycle * (4 * n + 2),
            wanted,
            heaps: vec![BinaryHeap::new(); n + 2],
        }
    }

    fn offer(&mut self, bits: u64, defect: f64) {
        let c = sign_changes(bits, self.n);
        if !self.wanted[c] {
            return;
        }
        let heap = &mut self.heaps[c];
        if heap.len() < self.cap {
            heap.push(Entry(defect, bits));
        } else if let Some(top) = heap.peek() {
            if defect < top.0 {
                heap.pop();
                heap.push(Entry(defect, bits));
            }
        }
    }

    fn finish(self, per_cycle: usize) -> BTreeMap<usize, Vec<Candidate>> {
        let n = self.n;
        let mut out = BTreeMap::new();
        for (c, heap) in self.heaps.into_iter().enumerate() {
            if !self.wanted[c] {
                continue;
            }
            let mut entries = heap.into_vec();
            for e in &mut entries {
                e.0 = equal_gap_defect(e.1, n);
            }
            entries.sort();
            let mut list: Vec<Candidate> = Vec::new();
            for Entry(defect, bits) in entries {
                if list.len() == per_cycle {
                    break;
                }
                if let Some(topology) = pattern_topology(bits, n) {
                    if !list.iter().any(|cand| cand.topology == topology) {
                        list.push(Candidate { topology, defect });
                    }
                }
            }
            out.insert(c, list);
        }
        out
    }
}

fn powers(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|k| {
            let (s, c) = (PI * k as f64 / n as f64).sin_cos();
            (c, s)
        })
        .collect()
}

fn exhaustive(n: usize, pools: &mut Pools) {
    let w = powers(n);
    // sign 0 is fixed to +; Gray-code walk over the other n - 1 signs,
    // starting from all of them negative.
    let mut bits: u64 = 1;
    let (mut re, mut im) = (w[0].0, w[0].1);
    for (c, s) in &w[1..] {
        re -= c;
        im -= s;
    }
    pools.offer(bits, re.hypot(im));
    for i in 1u64..(1u64 << (n - 1)) {
        let k = i.trailing_zeros() as usize + 1;
        bits ^= 1 << k;
        let sign = if bit(bits, k) { 2.0 } else { -2.0 };
        re += sign * w[k].0;
        im += sign * w[k].1;
        pools.offer(bits, re.hypot(im));
    }
}

fn half_sums(w: &[(f64, f64)], lo: usize, hi: usize, fix_first: bool) -> Vec<(u64, f64, f64)> {
    let m = hi - lo;
    let free = if fix_first { m - 1 } else { m };
    let mut out = Vec::with_capacity(1 << free);
    for mask in 0u64..(1u64 << free) {
        let local = if fix_first { (mask << 1) | 1 } else { mask };
        let (mut re, mut im) = (0.0, 0.0);
        for j in 0..m {
            let sign = if bit(local, j) { 1.0 } else { -1.0 };
            re += sign * w[lo + j].0;
            im += sign * w[lo + j].1;
        }
        out.push((local << lo, re, im));
    }
    out
}

/// All patterns with defect below a radius chosen to yield about `target`
/// patterns, by matching sums of the two halves of the sign vector.
fn meet_in_the_middle(n: usize, target: f64, pools: &mut Pools) {
    let w = powers(n);
    let h = n / 2;
    let left = half_sums(&w, 0, h, true);
    let right = half_sums(&w, h, n, false);
    // Sums are roughly Gaussian with variance n/2 per component.
    let count = 2f64.powi(n as i32 - 1);
    let radius = (target * n as f64 / count).sqrt();
    let cell = |v: f64| (v / radius).floor() as i64;
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (idx, &(_, re, im)) in right.iter().enumerate() {
        grid.entry((cell(re), cell(im))).or_default().push(idx);
    }
    for &(lbits, lre, lim) in &left {
        let (cx, cy) = (cell(-lre), cell(-lim));
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(list) = grid.get(&(cx + dx, cy + dy)) {
                    for &idx in list {
                        let (rbits, rre, rim) = right[idx];
                        let d = (lre + rre).hypot(lim + rim);
                        if d < radius {
                            pools.offer(lbits | rbits, d);
                        }
                    }
                }
            }
        }
    }
}

/// Greedy single-flip descent on the defect from seeded random patterns.
fn descent(n: usize, starts: usize, seed: u64, pools: &mut Pools) {
    let w = powers(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5e_ed0f_d1a3);
    let mask = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
    for _ in 0..starts {
        let mut bits = (rng.gen::<u64>() & mask) | 1;
        loop {
            let current = equal_gap_defect(bits, n);
            pools.offer(bits, current);
            let (mut re, mut im) = (0.0, 0.0);
            for (k, &(c, s)) in w.iter().enumerate() {
                let sign = if bit(bits, k) { 1.0 } else { -1.0 };
                re += sign * c;
                im += sign * s;
            }
            let mut best = (current, 0usize);
            for (k, &(c, s)) in w.iter().enumerate().skip(1) {
                let sign = if bit(bits, k) { -2.0 } else { 2.0 };
                let d = (re + sign * c).hypot(im + sign * s);
                pools.offer(bits ^ (1 << k), d);
                if d < best.0 {
                    best = (d, k);
                }
            }
            if best.1 == 0 {
                break;
            }
            bits ^= 1 << best.1;
        }
    }
}

/// The `per_cycle` most promising topologies for each requested cycle length.
///
/// Small `n` are enumerated exhaustively, `n <= 44` by meet-in-the-middle over
/// the two halves of the sign vector, larger `n` (up to 64) by seeded descent.
pub fn screen(
    n: usize,
    cycles: &[usize],
    per_cycle: usize,
    seed: u64,
) -> BTreeMap<usize, Vec<Candidate>> {
    if !(3..=MAX_SCREEN_N).contains(&n) || per_cycle == 0 {
        return cycles.iter().map(|&c| (c, Vec::new())).collect();
    }
    let mut pools = Pools::new(n, per_cycle, cycles);
    if n <= 24 {
        exhaustive(n, &mut pools);
    } else if n <= 44 {
        meet_in_the_middle(n, 60_000.0, &mut pools);
    } else {
        descent(n, 400 * per_cycle, seed, &mut pools);
    }
    pools.finish(per_cycle)
}
