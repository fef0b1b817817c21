//! Small-scale search for hosts with many pattern-inducing vertex sets:
//! exhaustive enumeration up to isomorphism, or restarted local search.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::extremal::{binom, colex_family, count_inducing_sets, find_copy, k_subsets, SimpleHypergraph};
use crate::hypergraph::{members, Hypergraph};
use crate::par::{self, ExecMode};
use crate::witness::derive_seed;

pub const DEFAULT_RESTARTS: usize = 200;
pub const DEFAULT_WORK_LIMIT: u64 = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Local,
}

impl SearchMode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(SearchMode::Exhaustive),
            "local" => Ok(SearchMode::Local),
            _ => Err(Error::Parse(format!("unknown search mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub mode: SearchMode,
    /// Exhaustive mode: cap on canonical-form computations.
    pub work_limit: u64,
    pub restarts: usize,
    pub seed: u64,
    pub exec: ExecMode,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { mode: SearchMode::Local, work_limit: DEFAULT_WORK_LIMIT, restarts: DEFAULT_RESTARTS, seed: 0, exec: ExecMode::Parallel }
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub best_count: u64,
    pub best_host: SimpleHypergraph,
    /// Exhaustive mode finished: `best_count` is the maximum within the budget.
    pub certified: bool,
    /// Hosts evaluated (exhaustive) or local-search evaluations.
    pub work: u64,
    /// Seeds of the local-search restarts, in order.
    pub seeds: Vec<u64>,
}

/// Vertex classes from iterated degree refinement, as invariant ranks.
fn refine(n: usize, edges: &[u64]) -> Vec<usize> {
    let mut color: Vec<usize> = (1..=n).map(|j| edges.iter().filter(|&&e| e >> (j - 1) & 1 == 1).count()).collect();
    loop {
        let sigs: Vec<(usize, Vec<Vec<usize>>)> = (1..=n)
            .map(|j| {
                let mut inc: Vec<Vec<usize>> = edges
                    .iter()
                    .filter(|&&e| e >> (j - 1) & 1 == 1)
                    .map(|&e| {
                        let mut c: Vec<usize> = members(e).filter(|&v| v != j).map(|v| color[v - 1]).collect();
                        c.sort_unstable();
                        c
                    })
                    .collect();
                inc.sort();
                (color[j - 1], inc)
            })
            .collect();
        let mut distinct = sigs.clone();
        distinct.sort();
        distinct.dedup();
        let next: Vec<usize> = sigs.iter().map(|s| distinct.binary_search(s).unwrap()).collect();
        let before = color.iter().collect::<HashSet<_>>().len();
        color = next;
        if distinct.len() == before {
            return color;
        }
    }
}

/// Canonical form: refine vertices into invariant cells, then take the
/// lexicographically least sorted edge list over all labelings that respect
/// the cell order.
pub fn canonical_form(g: &SimpleHypergraph) -> Vec<u64> {
    let n = g.vertices();
    let color = refine(n, g.edges());
    let mut cells: Vec<Vec<usize>> = Vec::new();
    let mut ranks: Vec<usize> = color.clone();
    ranks.sort_unstable();
    ranks.dedup();
    for r in ranks {
        cells.push((1..=n).filter(|&j| color[j - 1] == r).collect());
    }
    let mut best: Option<Vec<u64>> = None;
    let mut perms: Vec<Vec<usize>> = cells.clone();
    loop {
        let mut label = vec![0usize; n];
        let mut next = 1;
        for cell in &perms {
            for &v in cell {
                label[v - 1] = next;
                next += 1;
            }
        }
        let mut e: Vec<u64> = g.edges().iter().map(|&x| members(x).fold(0u64, |m, v| m | 1u64 << (label[v - 1] - 1))).collect();
        e.sort_unstable();
        if best.as_ref().map_or(true, |b| e < *b) {
            best = Some(e);
        }
        // advance the odometer of per-cell permutations
        let mut i = 0;
        loop {
            if i == perms.len() {
                return best.unwrap_or_default();
            }
            if next_permutation(&mut perms[i]) {
                break;
            }
            perms[i].sort_unstable();
            i += 1;
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn pattern_uniformity(h: &Hypergraph) -> Result<usize> {
    let k = h.edge_size(0);
    if (0..h.num_edges()).any(|e| h.edge_size(e) != k) {
        return Err(Error::Invalid("search needs a uniform pattern".into()));
    }
    Ok(k)
}

/// `M(h, n)` restricted to hosts on at most `vertex_budget` vertices.
pub fn search_m(h: &Hypergraph, n: usize, vertex_budget: usize, cfg: &SearchConfig) -> Result<SearchResult> {
    let k = pattern_uniformity(h)?;
    let slots = binom(vertex_budget as u64, k as u64) as usize;
    if n > slots {
        return Err(Error::Invalid(format!("{n} edges do not fit on {vertex_budget} vertices")));
    }
    match cfg.mode {
        SearchMode::Exhaustive => exhaustive(h, n, vertex_budget, k, cfg),
        SearchMode::Local => local(h, n, vertex_budget, k, cfg),
    }
}

fn better(a: (u64, &[u64]), b: (u64, &[u64])) -> bool {
    a.0 > b.0 || (a.0 == b.0 && a.1 < b.1)
}

fn exhaustive(h: &Hypergraph, n: usize, v: usize, k: usize, cfg: &SearchConfig) -> Result<SearchResult> {
    let all: Vec<u64> = k_subsets(v, k).collect();
    let mut level: Vec<Vec<u64>> = vec![Vec::new()];
    let mut work = 0u64;
    for _ in 0..n {
        let mut next: HashSet<Vec<u64>> = HashSet::new();
        for g in &level {
            for &e in &all {
                if g.binary_search(&e).is_ok() {
                    continue;
                }
                work += 1;
                if work > cfg.work_limit {
                    return Err(Error::WorkLimitExceeded(cfg.work_limit));
                }
                let mut edges = g.clone();
                edges.push(e);
                let host = SimpleHypergraph::new(v, edges).expect("valid host");
                next.insert(canonical_form(&host));
            }
        }
        let mut sorted: Vec<Vec<u64>> = next.into_iter().collect();
        sorted.sort();
        level = sorted;
    }
    let counts = par::map(cfg.exec, &level, |edges| {
        count_inducing_sets(&SimpleHypergraph::new(v, edges.clone()).expect("valid host"), h, ExecMode::Sequential)
    });
    let mut best: Option<(u64, &Vec<u64>)> = None;
    for (c, g) in counts.iter().zip(&level) {
        if best.map_or(true, |b| better((*c, g), (b.0, b.1))) {
            best = Some((*c, g));
        }
    }
    let (best_count, edges) = best.ok_or(Error::Invalid("no hosts".into()))?;
    Ok(SearchResult {
        best_count,
        best_host: SimpleHypergraph::new(v, edges.clone())?,
        certified: true,
        work: work + level.len() as u64,
        seeds: Vec::new(),
    })
}

/// Incremental counter: per r-set qualification cached, recomputed only
/// for r-sets around a swapped edge.
struct Climber<'a> {
    h: &'a Hypergraph,
    v: usize,
    r: usize,
    edges: Vec<u64>,
    qual: HashMap<u64, bool>,
    count: u64,
    evals: u64,
}

impl<'a> Climber<'a> {
    fn new(h: &'a Hypergraph, v: usize, edges: Vec<u64>) -> Self {
        let r = h.d();
        let mut c = Self { h, v, r, edges, qual: HashMap::new(), count: 0, evals: 0 };
        for a in k_subsets(v, r) {
            let q = c.qualifies(a, &c.edges.clone());
            c.count += q as u64;
            c.qual.insert(a, q);
        }
        c
    }

    fn qualifies(&mut self, a: u64, edges: &[u64]) -> bool {
        self.evals += 1;
        let inside: Vec<u64> = edges.iter().copied().filter(|&e| e & !a == 0).collect();
        if inside.len() < self.h.num_edges() {
            return false;
        }
        let host = SimpleHypergraph::new(self.v, inside).expect("valid host").induced(a);
        find_copy(&host, self.h).is_some()
    }

    fn around(&self, e: u64) -> Vec<u64> {
        let rest: Vec<usize> = (1..=self.v).filter(|&j| e >> (j - 1) & 1 == 0).collect();
        let need = self.r.saturating_sub(e.count_ones() as usize);
        k_subsets(rest.len(), need)
            .map(|s| members(s).fold(e, |m, i| m | 1u64 << (rest[i - 1] - 1)))
            .collect()
    }

    /// Count after replacing `out` by `inn`, and the changed qualifications.
    fn try_swap(&mut self, out: u64, inn: u64) -> (u64, Vec<(u64, bool)>) {
        let mut edges: Vec<u64> = self.edges.iter().copied().filter(|&e| e != out).collect();
        edges.push(inn);
        let mut touched: Vec<u64> = self.around(out);
        touched.extend(self.around(inn));
        touched.sort_unstable();
        touched.dedup();
        let mut count = self.count;
        let mut changes = Vec::new();
        for a in touched {
            let q = self.qualifies(a, &edges);
            let old = self.qual[&a];
            if q != old {
                count = count + q as u64 - old as u64;
                changes.push((a, q));
            }
        }
        (count, changes)
    }

    fn apply(&mut self, out: u64, inn: u64, count: u64, changes: Vec<(u64, bool)>) {
        self.edges.retain(|&e| e != out);
        self.edges.push(inn);
        self.edges.sort_unstable();
        for (a, q) in changes {
            self.qual.insert(a, q);
        }
        self.count = count;
    }

    /// First-improvement swaps in random order until none improves.
    fn climb(&mut self, all: &[u64], rng: &mut ChaCha8Rng) {
        loop {
            let present: HashSet<u64> = self.edges.iter().copied().collect();
            let mut moves: Vec<(u64, u64)> = self
                .edges
                .iter()
                .flat_map(|&o| all.iter().filter(|e| !present.contains(e)).map(move |&i| (o, i)))
                .collect();
            moves.shuffle(rng);
            let mut improved = false;
            for (o, i) in moves {
                let (c, ch) = self.try_swap(o, i);
                if c > self.count {
                    self.apply(o, i, c, ch);
                    improved = true;
                    break;
                }
            }
            if !improved {
                return;
            }
        }
    }
}

fn local(h: &Hypergraph, n: usize, v: usize, k: usize, cfg: &SearchConfig) -> Result<SearchResult> {
    let start = colex_family(k, n);
    if start.vertices() > v {
        return Err(Error::Invalid(format!("the colex start needs {} vertices", start.vertices())));
    }
    let all: Vec<u64> = k_subsets(v, k).collect();
    let seeds: Vec<u64> = (0..cfg.restarts.max(1)).map(|i| derive_seed(cfg.seed, i as u64)).collect();
    let runs = par::map(cfg.exec, &seeds, |&s| {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let mut edges = start.edges().to_vec();
        if s != seeds[0] {
            // random restart: scramble the colex start by random swaps
            let swaps = rng.gen_range(1..=n.max(1));
            for _ in 0..swaps {
                let absent: Vec<u64> = all.iter().copied().filter(|e| !edges.contains(e)).collect();
                if absent.is_empty() {
                    break;
                }
                let o = rng.gen_range(0..edges.len());
                edges[o] = *absent.choose(&mut rng).expect("nonempty");
            }
        }
        let mut c = Climber::new(h, v, edges);
        c.climb(&all, &mut rng);
        let canon = canonical_form(&SimpleHypergraph::new(v, c.edges.clone()).expect("valid host"));
        (c.count, canon, c.evals)
    });
    let mut best: Option<&(u64, Vec<u64>, u64)> = None;
    for r in &runs {
        if best.map_or(true, |b| better((r.0, &r.1), (b.0, &b.1))) {
            best = Some(r);
        }
    }
    let best = best.expect("at least one restart");
    Ok(SearchResult {
        best_count: best.0,
        best_host: SimpleHypergraph::new(v, best.1.clone())?,
        certified: false,
        work: runs.iter().map(|r| r.2).sum(),
        seeds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_is_invariant() {
        let g = SimpleHypergraph::from_lists(5, &[vec![1, 2], vec![2, 3], vec![3, 4], vec![1, 5]]).unwrap();
        let c = canonical_form(&g);
        for perm in [[2, 3, 4, 5, 1], [5, 4, 3, 2, 1], [1, 3, 5, 2, 4]] {
            assert_eq!(canonical_form(&g.relabel(&perm)), c);
        }
        let star = SimpleHypergraph::from_lists(5, &[vec![1, 2], vec![1, 3], vec![1, 4], vec![1, 5]]).unwrap();
        assert_ne!(canonical_form(&star), c);
    }

    #[test]
    fn triangle_maximum_with_five_edges() {
        let cfg = SearchConfig { mode: SearchMode::Exhaustive, exec: ExecMode::Sequential, ..Default::default() };
        let r = search_m(&Hypergraph::complete_codim1(3), 5, 6, &cfg).unwrap();
        assert_eq!(r.best_count, 2);
        assert!(r.certified);
        let tight = SearchConfig { work_limit: 10, ..cfg };
        assert_eq!(search_m(&Hypergraph::complete_codim1(3), 5, 6, &tight).unwrap_err(), Error::WorkLimitExceeded(10));
    }

    #[test]
    fn local_search_matches_on_triangles() {
        let cfg = SearchConfig { restarts: 20, exec: ExecMode::Sequential, ..Default::default() };
        let r = search_m(&Hypergraph::complete_codim1(3), 5, 6, &cfg).unwrap();
        assert_eq!(r.best_count, 2);
        assert_eq!(r.seeds.len(), 20);
    }
}
