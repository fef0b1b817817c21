//! Counting vertex sets that carry a copy of a pattern, colex families,
//! and the clique and partial-shadow bounds.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::hypergraph::{full_mask, mask_of, members, Hypergraph, MAX_VERTICES};
use crate::par::{self, ExecMode};

/// Guard band for comparing integer counts with real-valued bounds.
pub const BOUND_GUARD: f64 = 1e-9;

/// A simple hypergraph on vertices `1..=n` with edges of any sizes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimpleHypergraph {
    n: usize,
    edges: Vec<u64>,
}

impl SimpleHypergraph {
    pub fn new(n: usize, mut edges: Vec<u64>) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::Malformed(format!("{n} vertices exceeds 64")));
        }
        if edges.iter().any(|&e| e == 0 || e & !full_mask(n) != 0) {
            return Err(Error::Malformed("edge empty or outside the vertex range".into()));
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Malformed("repeated edge".into()));
        }
        Ok(Self { n, edges })
    }

    pub fn from_lists(n: usize, edges: &[Vec<usize>]) -> Result<Self> {
        if edges.iter().flatten().any(|&j| j == 0 || j > n) {
            return Err(Error::Malformed("vertex outside 1..=n".into()));
        }
        Self::new(n, edges.iter().map(|e| mask_of(e)).collect())
    }

    /// Complete `k`-uniform hypergraph on `n` vertices.
    pub fn complete(n: usize, k: usize) -> Self {
        Self { n, edges: k_subsets(n, k).collect() }
    }

    pub fn vertices(&self) -> usize {
        self.n
    }
    pub fn edges(&self) -> &[u64] {
        &self.edges
    }
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_uniform(&self, k: usize) -> bool {
        self.edges.iter().all(|e| e.count_ones() as usize == k)
    }

    /// Subgraph induced on `mask`, relabelled to `1..=|mask|` in increasing order.
    pub fn induced(&self, mask: u64) -> Self {
        let verts: Vec<usize> = members(mask).collect();
        let edges = self
            .edges
            .iter()
            .filter(|&&e| e & !mask == 0)
            .map(|&e| {
                members(e).fold(0u64, |m, j| m | 1u64 << verts.iter().position(|&v| v == j).unwrap())
            })
            .collect();
        Self { n: verts.len(), edges }
    }

    pub fn relabel(&self, perm: &[usize]) -> Self {
        let mut edges: Vec<u64> = self
            .edges
            .iter()
            .map(|&e| members(e).fold(0u64, |m, j| m | 1u64 << (perm[j - 1] - 1)))
            .collect();
        edges.sort_unstable();
        Self { n: self.n, edges }
    }
}

/// All `k`-subsets of `[n]` as bitsets in increasing numeric order, which is
/// colex order.
pub fn k_subsets(n: usize, k: usize) -> impl Iterator<Item = u64> {
    let limit = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut cur: Option<u64> = if k > n {
        None
    } else if k == 0 {
        Some(0)
    } else {
        Some(full_mask(k))
    };
    std::iter::from_fn(move || {
        let c = cur?;
        cur = if c == 0 {
            None
        } else {
            // Gosper's hack
            let low = c & c.wrapping_neg();
            let ripple = c.wrapping_add(low);
            if ripple == 0 {
                None
            } else {
                let next = (((ripple ^ c) >> 2) / low) | ripple;
                (next <= limit && next & !limit == 0).then_some(next)
            }
        };
        Some(c)
    })
}

/// First `count` `k`-sets in colex order.
pub fn colex_family(k: usize, count: usize) -> SimpleHypergraph {
    let edges: Vec<u64> = k_subsets(64, k).take(count).collect();
    let n = edges.iter().fold(0u64, |m, &e| m | e);
    let n = 64 - n.leading_zeros() as usize;
    SimpleHypergraph { n, edges }
}

/// A bijection `σ` (as `sigma[j-1]`, 1-based) from pattern vertices to the
/// host's vertices sending every pattern edge onto a host edge. Colors are
/// ignored.
pub fn find_copy(g: &SimpleHypergraph, h: &Hypergraph) -> Option<Vec<usize>> {
    let r = h.d();
    if g.vertices() != r {
        return None;
    }
    let mut pat: Vec<u64> = h.edges().to_vec();
    pat.sort_unstable();
    pat.dedup();
    let host: HashSet<u64> = g.edges().iter().copied().collect();
    if pat.len() > host.len() {
        return None;
    }
    let deg = |edges: &[u64], j: usize| edges.iter().filter(|&&e| e >> (j - 1) & 1 == 1).count();
    let mut order: Vec<usize> = (1..=r).collect();
    order.sort_by_key(|&j| std::cmp::Reverse(deg(&pat, j)));
    let pos: Vec<usize> = {
        let mut p = vec![0; r];
        for (i, &j) in order.iter().enumerate() {
            p[j - 1] = i;
        }
        p
    };
    // edges to test once the vertex at order position i is placed
    let mut closing: Vec<Vec<u64>> = vec![Vec::new(); r];
    for &e in &pat {
        let last = members(e).map(|j| pos[j - 1]).max().unwrap();
        closing[last].push(e);
    }
    let host_deg: Vec<usize> = (1..=r).map(|j| deg(g.edges(), j)).collect();
    let pat_deg: Vec<usize> = order.iter().map(|&j| deg(&pat, j)).collect();
    let mut sigma = vec![0usize; r];
    let mut used = 0u64;

    fn go(
        i: usize,
        order: &[usize],
        closing: &[Vec<u64>],
        host: &HashSet<u64>,
        host_deg: &[usize],
        pat_deg: &[usize],
        sigma: &mut [usize],
        used: &mut u64,
    ) -> bool {
        if i == order.len() {
            return true;
        }
        let j = order[i];
        for cand in 1..=order.len() {
            if *used >> (cand - 1) & 1 == 1 || host_deg[cand - 1] < pat_deg[i] {
                continue;
            }
            sigma[j - 1] = cand;
            let ok = closing[i].iter().all(|&e| {
                let img = members(e).fold(0u64, |m, v| m | 1u64 << (sigma[v - 1] - 1));
                host.contains(&img)
            });
            if ok {
                *used |= 1u64 << (cand - 1);
                if go(i + 1, order, closing, host, host_deg, pat_deg, sigma, used) {
                    return true;
                }
                *used &= !(1u64 << (cand - 1));
            }
        }
        sigma[j - 1] = 0;
        false
    }

    go(0, &order, &closing, &host, &host_deg, &pat_deg, &mut sigma, &mut used).then_some(sigma)
}

pub fn contains_copy(g: &SimpleHypergraph, h: &Hypergraph) -> Result<bool> {
    if g.vertices() != h.d() {
        return Err(Error::SizeMismatch(format!("{} host vertices for a {}-vertex pattern", g.vertices(), h.d())));
    }
    Ok(find_copy(g, h).is_some())
}

/// Number of `d(h)`-subsets `A` of the host whose induced subgraph contains `h`.
pub fn count_inducing_sets(host: &SimpleHypergraph, h: &Hypergraph, mode: ExecMode) -> u64 {
    let sets: Vec<u64> = k_subsets(host.vertices(), h.d()).collect();
    par::map(mode, &sets, |&a| find_copy(&host.induced(a), h).is_some() as u64).into_iter().sum()
}

/// Cliques `K_d^{(d-1)}` among the first `n` `(d-1)`-sets in colex order.
pub fn kruskal_katona_count(n: usize, d: usize) -> u64 {
    let fam = colex_family(d - 1, n);
    let set: HashSet<u64> = fam.edges().iter().copied().collect();
    k_subsets(fam.vertices(), d)
        .filter(|&a| members(a).all(|j| set.contains(&(a & !(1u64 << (j - 1))))))
        .count() as u64
}

/// Generalized binomial `x(x-1)...(x-k+1)/k!`.
pub fn binom_real(x: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (x - i as f64) / (i + 1) as f64)
}

pub fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Clone, Debug, PartialEq)]
pub struct LovaszBound {
    pub x: f64,
    pub bound: f64,
    /// The raw value `C(x, d)` was negative and was clamped to zero.
    pub clamped: bool,
}

/// Solve `C(x, d-1) = n` for real `x ≥ d-1` and return `C(x, d)`.
pub fn lovasz_bound(n: u64, d: usize) -> LovaszBound {
    let target = n as f64;
    let mut lo = (d - 1) as f64;
    let mut hi = lo + 1.0;
    while binom_real(hi, d - 1) < target {
        hi = lo + 2.0 * (hi - lo);
    }
    while hi - lo > 1e-12 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if binom_real(mid, d - 1) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    let raw = binom_real(x, d);
    LovaszBound { x, bound: raw.max(0.0), clamped: raw < 0.0 }
}

pub fn within_bound(count: u64, bound: f64) -> bool {
    count as f64 <= bound * (1.0 + BOUND_GUARD) + BOUND_GUARD
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShadowReport {
    pub n: usize,
    pub count: u64,
    pub x: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Compare the number of `(d+t)`-sets containing `C_t(K_d^{(d-1)})` in a
/// `(d+t-1)`-uniform host against the real binomial bound.
pub fn partial_shadow_check(host: &SimpleHypergraph, d: usize, t: usize, mode: ExecMode) -> Result<ShadowReport> {
    let k = d + t - 1;
    if !host.is_uniform(k) {
        return Err(Error::UniformityMismatch(k));
    }
    let pattern = Hypergraph::complete_codim1(d).cone(t)?;
    let count = count_inducing_sets(host, &pattern, mode);
    let n = host.num_edges();
    let lb = lovasz_bound(n as u64, d);
    Ok(ShadowReport { n, count, x: lb.x, bound: lb.bound, pass: within_bound(count, lb.bound) })
}
