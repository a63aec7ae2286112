//! Random socket-matching construction of an LDPC parity-check matrix.

use rand::seq::SliceRandom;
use rand::Rng as _;

use super::{DegreeDistributions, LdpcCode};
use crate::error::{invalid, Error, Result};
use crate::rng::{self, Rng};

/// Independent draws tried before giving up on a full-rank matrix.
pub const MAX_ATTEMPTS: u32 = 16;
/// Random partners tried per edge when breaking a double edge or a 4-cycle.
const SWAP_TRIES: usize = 64;

/// Builds a length-`n` code whose node degrees follow `dd` up to integer
/// rounding. Each attempt draws a fresh socket matching, removes double edges
/// and makes one 4-cycle-reduction sweep; the first attempt whose
/// parity-check matrix has full rank is returned.
pub fn build_code(dd: &DegreeDistributions, n: usize, seed: u64) -> Result<LdpcCode> {
    if n < 128 || n % 2 != 0 {
        return Err(invalid(
            "N",
            format!("must be even and at least 128, got {n}"),
        ));
    }
    let var_degrees = variable_degrees(dd, n);
    let edges: usize = var_degrees.iter().sum();
    let check_degrees = check_degrees(dd, edges)?;
    let mut last_rank = 0;
    for attempt in 0..MAX_ATTEMPTS {
        let mut r = rng::stream(seed, u64::from(attempt));
        let rows = draw_graph(&var_degrees, &check_degrees, &mut r)?;
        let code = LdpcCode::from_parity_checks(n, &rows)?;
        if code.num_checks() == rows.len() {
            return Ok(code);
        }
        last_rank = code.num_checks();
    }
    Err(Error::Construction(format!(
        "no full-rank parity-check matrix after {MAX_ATTEMPTS} attempts \
         (last rank {last_rank} of {} checks)",
        check_degrees.len()
    )))
}

/// Degree of every variable node, nodes grouped by degree.
fn variable_degrees(dd: &DegreeDistributions, n: usize) -> Vec<usize> {
    let per_edge = dd.variable_nodes_per_edge();
    let shares: Vec<f64> = dd
        .variable()
        .iter()
        .map(|&(d, f)| n as f64 * (f / d as f64) / per_edge)
        .collect();
    let counts = largest_remainder(&shares, n);
    dd.variable()
        .iter()
        .zip(counts)
        .flat_map(|(&(d, _), c)| std::iter::repeat(d).take(c))
        .collect()
}

/// Apportions `total` among `shares` by the largest-remainder method.
fn largest_remainder(shares: &[f64], total: usize) -> Vec<usize> {
    let mut counts: Vec<usize> = shares.iter().map(|s| s.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..shares.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = shares[a] - shares[a].floor();
        let rb = shares[b] - shares[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    for &i in order.iter().cycle().take(total.saturating_sub(assigned)) {
        counts[i] += 1;
    }
    counts
}

/// Check degrees whose sum is exactly `edges`, with per-degree edge counts as
/// close as possible to `ρ_d · edges`.
fn check_degrees(dd: &DegreeDistributions, edges: usize) -> Result<Vec<usize>> {
    let list = dd.check();
    let targets: Vec<f64> = list
        .iter()
        .map(|&(d, f)| f * edges as f64 / d as f64)
        .collect();
    let base: Vec<i64> = targets.iter().map(|t| t.floor() as i64).collect();
    let residual = edges as i64
        - list
            .iter()
            .zip(&base)
            .map(|(&(d, _), &c)| d as i64 * c)
            .sum::<i64>();

    // Search small corrections a_d ∈ [-3, 3] that close the residual.
    const STEPS: [i64; 7] = [-3, -2, -1, 0, 1, 2, 3];
    let k = list.len();
    let combos = STEPS.len().checked_pow(k as u32).filter(|&c| c <= 1 << 22);
    let combos = combos.ok_or_else(|| invalid("degree distribution", "too many check degrees"))?;
    let mut best: Option<(f64, Vec<i64>)> = None;
    for code in 0..combos {
        let mut c = code;
        let mut counts = base.clone();
        let mut sum = 0;
        for (i, count) in counts.iter_mut().enumerate() {
            *count += STEPS[c % STEPS.len()];
            c /= STEPS.len();
            sum += list[i].0 as i64 * (*count - base[i]);
        }
        if sum != residual || counts.iter().any(|&x| x < 0) {
            continue;
        }
        let cost: f64 = counts
            .iter()
            .zip(&targets)
            .zip(list)
            .map(|((&c, &t), &(d, _))| d as f64 * (c as f64 - t).abs())
            .sum();
        if best.as_ref().map_or(true, |(b, _)| cost < *b) {
            best = Some((cost, counts));
        }
    }
    let (_, counts) = best
        .ok_or_else(|| Error::Construction(format!("check degrees cannot sum to {edges} edges")))?;
    Ok(list
        .iter()
        .zip(counts)
        .flat_map(|(&(d, _), c)| std::iter::repeat(d).take(c as usize))
        .collect())
}

struct Graph {
    var_adj: Vec<Vec<usize>>,
    chk_adj: Vec<Vec<usize>>,
}

impl Graph {
    fn connected(&self, v: usize, c: usize) -> bool {
        self.chk_adj[c].contains(&v)
    }

    fn multiplicity(&self, v: usize, c: usize) -> usize {
        self.chk_adj[c].iter().filter(|&&u| u == v).count()
    }

    /// True if edge `(v, c)` lies on a cycle of length 4.
    fn on_four_cycle(&self, v: usize, c: usize) -> bool {
        self.var_adj[v].iter().filter(|&&c2| c2 != c).any(|&c2| {
            self.chk_adj[c]
                .iter()
                .any(|&u| u != v && self.chk_adj[c2].contains(&u))
        })
    }

    /// Rewires `(v, c), (w, d)` into `(v, d), (w, c)`.
    fn swap(&mut self, (v, c): (usize, usize), (w, d): (usize, usize)) {
        replace_one(&mut self.var_adj[v], c, d);
        replace_one(&mut self.var_adj[w], d, c);
        replace_one(&mut self.chk_adj[c], v, w);
        replace_one(&mut self.chk_adj[d], w, v);
    }

    fn swap_allowed(&self, (v, c): (usize, usize), (w, d): (usize, usize)) -> bool {
        v != w && c != d && !self.connected(v, d) && !self.connected(w, c)
    }
}

fn replace_one(list: &mut [usize], from: usize, to: usize) {
    if let Some(x) = list.iter_mut().find(|x| **x == from) {
        *x = to;
    }
}

fn draw_graph(
    var_degrees: &[usize],
    check_degrees: &[usize],
    r: &mut Rng,
) -> Result<Vec<Vec<usize>>> {
    let n = var_degrees.len();
    let m = check_degrees.len();
    // Shuffle which positions get which degree so systematic columns are not
    // biased towards any degree class.
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(r);
    let mut var_sockets = Vec::new();
    for (i, &d) in var_degrees.iter().enumerate() {
        var_sockets.extend(std::iter::repeat(perm[i]).take(d));
    }
    let mut chk_sockets = Vec::new();
    for (c, &d) in check_degrees.iter().enumerate() {
        chk_sockets.extend(std::iter::repeat(c).take(d));
    }
    chk_sockets.shuffle(r);

    let mut g = Graph {
        var_adj: vec![Vec::new(); n],
        chk_adj: vec![Vec::new(); m],
    };
    let mut edges: Vec<(usize, usize)> = var_sockets.into_iter().zip(chk_sockets).collect();
    for &(v, c) in &edges {
        g.var_adj[v].push(c);
        g.chk_adj[c].push(v);
    }
    let e = edges.len();

    // Double edges.
    for i in 0..e {
        let (v, c) = edges[i];
        if g.multiplicity(v, c) < 2 {
            continue;
        }
        let mut fixed = false;
        for _ in 0..SWAP_TRIES * 4 {
            let j = r.gen_range(0..e);
            let (w, d) = edges[j];
            if g.swap_allowed((v, c), (w, d)) {
                g.swap((v, c), (w, d));
                edges[i] = (v, d);
                edges[j] = (w, c);
                fixed = true;
                break;
            }
        }
        if !fixed {
            return Err(Error::Construction(format!(
                "could not remove double edge ({v}, {c})"
            )));
        }
    }

    // One 4-cycle-reduction sweep.
    for i in 0..e {
        let (v, c) = edges[i];
        if !g.on_four_cycle(v, c) {
            continue;
        }
        for _ in 0..SWAP_TRIES {
            let j = r.gen_range(0..e);
            let (w, d) = edges[j];
            if !g.swap_allowed((v, c), (w, d)) {
                continue;
            }
            g.swap((v, c), (w, d));
            if g.on_four_cycle(v, d) || g.on_four_cycle(w, c) {
                g.swap((v, d), (w, c));
            } else {
                edges[i] = (v, d);
                edges[j] = (w, c);
                break;
            }
        }
    }

    let mut rows = g.chk_adj;
    rows.iter_mut().for_each(|row| row.sort_unstable());
    Ok(rows)
}
