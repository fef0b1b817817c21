//! Edge-colored multi-hypergraphs, covering weights and the joints constant.
//!
//! Vertices are `1..=d` and an edge is a `u64` bitset with bit `j - 1` set
//! for vertex `j`, so `d` is capped at 64.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::logexpr::LogExpr;
use crate::rational::Rational;

pub const MAX_VERTICES: usize = 64;

/// Vertices of a bitset in increasing order (1-based).
pub fn members(mask: u64) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let j = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(j + 1)
        }
    })
}

pub fn mask_of(vertices: &[usize]) -> u64 {
    vertices.iter().fold(0, |m, &j| m | (1u64 << (j - 1)))
}

pub fn full_mask(d: usize) -> u64 {
    if d == 64 {
        u64::MAX
    } else {
        (1u64 << d) - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    d: usize,
    edges: Vec<u64>,
    colors: Vec<usize>,
    r: usize,
}

impl Hypergraph {
    /// Build a hypergraph from 1-based vertex lists. `colors` defaults to a
    /// single color. Only structure is checked here; the coloring is checked
    /// by [`Hypergraph::validate_uniform_coloring`].
    pub fn new(d: usize, edges: &[Vec<usize>], colors: Option<&[usize]>) -> Result<Self> {
        if d == 0 || d > MAX_VERTICES {
            return Err(Error::Malformed(format!("vertex count {d} outside 1..=64")));
        }
        let mut masks = Vec::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            if e.iter().any(|&j| j == 0 || j > d) {
                return Err(Error::Malformed(format!("edge {i} has a vertex outside 1..={d}")));
            }
            let m = mask_of(e);
            if m.count_ones() as usize != e.len() {
                return Err(Error::Malformed(format!("edge {i} repeats a vertex")));
            }
            if e.is_empty() {
                return Err(Error::Malformed(format!("edge {i} is empty")));
            }
            masks.push(m);
        }
        let colors = match colors {
            Some(c) => {
                if c.len() != edges.len() {
                    return Err(Error::Malformed("one color per edge required".into()));
                }
                if c.iter().any(|&x| x == 0) {
                    return Err(Error::Malformed("colors start at 1".into()));
                }
                c.to_vec()
            }
            None => vec![1; edges.len()],
        };
        Ok(Self::from_masks(d, masks, colors))
    }

    pub fn from_masks(d: usize, edges: Vec<u64>, colors: Vec<usize>) -> Self {
        let r = colors.iter().copied().max().unwrap_or(0);
        Self { d, edges, colors, r }
    }

    /// Single-color hypergraph from bitsets.
    pub fn uncolored(d: usize, edges: Vec<u64>) -> Self {
        let n = edges.len();
        Self::from_masks(d, edges, vec![1; n])
    }

    /// The complete `(d-1)`-uniform hypergraph on `d` vertices, edges listed
    /// as `[d] \ {i}` for `i = d, d-1, ..., 1` (increasing bitset order).
    pub fn complete_codim1(d: usize) -> Self {
        let full = full_mask(d);
        let mut edges: Vec<u64> = (0..d).map(|i| full & !(1u64 << i)).collect();
        edges.sort_unstable();
        Self::uncolored(d, edges)
    }

    pub fn cycle(len: usize) -> Self {
        let edges = (0..len).map(|i| (1u64 << i) | (1u64 << ((i + 1) % len))).collect();
        Self::uncolored(len, edges)
    }

    pub fn d(&self) -> usize {
        self.d
    }
    pub fn edges(&self) -> &[u64] {
        &self.edges
    }
    pub fn edge(&self, i: usize) -> u64 {
        self.edges[i]
    }
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }
    /// Color of edge `i`, in `1..=r`.
    pub fn color(&self, i: usize) -> usize {
        self.colors[i]
    }
    pub fn colors(&self) -> &[usize] {
        &self.colors
    }
    pub fn num_colors(&self) -> usize {
        self.r
    }
    pub fn edge_size(&self, i: usize) -> usize {
        self.edges[i].count_ones() as usize
    }
    pub fn edges_of_color(&self, c: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.colors[i] == c).collect()
    }
    pub fn edge_vertices(&self, i: usize) -> Vec<usize> {
        members(self.edges[i]).collect()
    }
    pub fn degree(&self, j: usize) -> usize {
        self.edges.iter().filter(|&&e| e >> (j - 1) & 1 == 1).count()
    }

    pub fn validate_uniform_coloring(&self) -> Result<UniformityProfile> {
        let mut k = Vec::with_capacity(self.r);
        for c in 1..=self.r {
            let idx = self.edges_of_color(c);
            if idx.is_empty() {
                return Err(Error::EmptyColor(c));
            }
            let size = self.edge_size(idx[0]);
            let mut seen = HashSet::new();
            for &i in &idx {
                if self.edge_size(i) != size {
                    return Err(Error::MixedUniformity(c));
                }
                if !seen.insert(self.edges[i]) {
                    return Err(Error::DuplicateEdge(c));
                }
            }
            if size >= self.d {
                return Err(Error::Malformed(format!("color {c} has edges of size {size} = d")));
            }
            k.push(self.d - size);
        }
        Ok(UniformityProfile { d: self.d, k })
    }

    /// Add `t` new vertices `d+1..=d+t` to every edge.
    pub fn cone(&self, t: usize) -> Result<Self> {
        let d = self.d + t;
        if d > MAX_VERTICES {
            return Err(Error::Malformed(format!("cone would need {d} vertices")));
        }
        let apex = full_mask(d) & !full_mask(self.d);
        let edges = self.edges.iter().map(|&e| e | apex).collect();
        Ok(Self { d, edges, colors: self.colors.clone(), r: self.r })
    }

    /// Apply a vertex relabelling `perm[j-1]` (1-based images).
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let edges = self
            .edges
            .iter()
            .map(|&e| members(e).fold(0u64, |m, j| m | 1u64 << (perm[j - 1] - 1)))
            .collect();
        Self { d: self.d, edges, colors: self.colors.clone(), r: self.r }
    }
}

/// Per color `i`: flat dimension `k_i = d - |e|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformityProfile {
    pub d: usize,
    pub k: Vec<usize>,
}

impl UniformityProfile {
    pub fn edge_size(&self, color: usize) -> usize {
        self.d - self.k[color - 1]
    }
    pub fn dim(&self, color: usize) -> usize {
        self.k[color - 1]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightFunction {
    weights: Vec<Rational>,
}

impl WeightFunction {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| w.is_negative()) {
            return Err(Error::Invalid(format!("negative weight {w}")));
        }
        Ok(Self { weights })
    }

    pub fn uniform(edges: usize, w: Rational) -> Result<Self> {
        Self::new(vec![w; edges])
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }
    pub fn get(&self, i: usize) -> &Rational {
        &self.weights[i]
    }
    pub fn len(&self) -> usize {
        self.weights.len()
    }
    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total(&self) -> Rational {
        self.weights.iter().fold(Rational::zero(), |a, b| a + b)
    }

    fn check_len(&self, h: &Hypergraph) -> Result<()> {
        if self.weights.len() != h.num_edges() {
            return Err(Error::SizeMismatch(format!(
                "{} weights for {} edges",
                self.weights.len(),
                h.num_edges()
            )));
        }
        Ok(())
    }

    /// `w̄_i` for colors `1..=r`.
    pub fn subtotals(&self, h: &Hypergraph) -> Result<Vec<Rational>> {
        self.check_len(h)?;
        let mut s = vec![Rational::zero(); h.num_colors()];
        for (i, w) in self.weights.iter().enumerate() {
            s[h.color(i) - 1] += w;
        }
        Ok(s)
    }

    /// Per-vertex load `Σ_{e∋j} w(e)` for `j = 1..=d`.
    pub fn loads(&self, h: &Hypergraph) -> Result<Vec<Rational>> {
        self.check_len(h)?;
        let mut load = vec![Rational::zero(); h.d()];
        for (i, w) in self.weights.iter().enumerate() {
            for j in members(h.edge(i)) {
                load[j - 1] += w;
            }
        }
        Ok(load)
    }

    pub fn covers(&self, h: &Hypergraph) -> Result<bool> {
        Ok(self.loads(h)?.iter().all(|l| *l >= Rational::one()))
    }
}

/// Joints constant in closed and log form.
#[derive(Clone, Debug)]
pub struct JointsConstant {
    pub log2: LogExpr,
    pub value: f64,
}

fn log_factorial(n: usize) -> LogExpr {
    let mut f = BigInt::one();
    for i in 2..=n {
        f *= i;
    }
    LogExpr::log_of_int(&f)
}

/// The constant `d!^{|w|-1} Π_i (1/k_i!)^{w̄_i} Π_e (w(e)/w̄_i)^{w(e)}`, with
/// zero-weight factors taken as 1.
pub fn constant_c(h: &Hypergraph, w: &WeightFunction) -> Result<JointsConstant> {
    let profile = h.validate_uniform_coloring()?;
    if !w.covers(h)? {
        return Err(Error::NotCovering);
    }
    let sub = w.subtotals(h)?;
    let mut log = log_factorial(h.d()).scale(&(w.total() - Rational::one()));
    let mut per_color: BTreeMap<usize, LogExpr> = BTreeMap::new();
    for c in 1..=h.num_colors() {
        let mut term = log_factorial(profile.dim(c)).scale(&-sub[c - 1].clone());
        for i in h.edges_of_color(c) {
            let we = w.get(i);
            if we.is_zero() {
                continue;
            }
            term = term.add(&LogExpr::log_of_rational(&(we / &sub[c - 1])).scale(we));
        }
        per_color.insert(c, term);
    }
    for t in per_color.values() {
        log = log.add(t);
    }
    let value = log.to_f64().exp2();
    Ok(JointsConstant { log2: log, value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn k3() -> Hypergraph {
        Hypergraph::new(3, &[vec![1, 2], vec![1, 3], vec![2, 3]], None).unwrap()
    }

    #[test]
    fn profiles() {
        assert_eq!(k3().validate_uniform_coloring().unwrap().k, vec![1]);
        let h = Hypergraph::new(6, &[vec![1, 2, 3, 4], vec![1, 2, 5, 6], vec![3, 4, 5, 6]], None).unwrap();
        assert_eq!(h.validate_uniform_coloring().unwrap().k, vec![2]);
        let h = Hypergraph::new(3, &[vec![1, 2], vec![1, 2, 3]], None).unwrap();
        assert_eq!(h.validate_uniform_coloring(), Err(Error::MixedUniformity(1)));
        let h = Hypergraph::new(3, &[vec![1, 2], vec![2, 1]], None).unwrap();
        assert_eq!(h.validate_uniform_coloring(), Err(Error::DuplicateEdge(1)));
        let h = Hypergraph::new(3, &[vec![1, 2], vec![2, 1]], Some(&[1, 2])).unwrap();
        assert!(h.validate_uniform_coloring().is_ok());
        let h = Hypergraph::new(3, &[vec![1, 2]], Some(&[2])).unwrap();
        assert_eq!(h.validate_uniform_coloring(), Err(Error::EmptyColor(1)));
    }

    #[test]
    fn cones() {
        assert_eq!(k3().cone(0).unwrap(), k3());
        let c = k3().cone(1).unwrap();
        assert_eq!(c.d(), 4);
        let want: Vec<u64> = [vec![1, 2, 4], vec![1, 3, 4], vec![2, 3, 4]].iter().map(|e| mask_of(e)).collect();
        assert_eq!(c.edges(), &want[..]);
        let k4 = Hypergraph::complete_codim1(4).cone(1).unwrap();
        assert_eq!(k4.num_edges(), 4);
        assert!(k4.edges().iter().all(|&e| e.count_ones() == 4 && e & (1 << 4) != 0));
    }

    #[test]
    fn weights_and_subtotals() {
        let h = k3();
        let w = WeightFunction::uniform(3, ratio(1, 2)).unwrap();
        assert_eq!(w.subtotals(&h).unwrap(), vec![ratio(3, 2)]);
        assert_eq!(w.total(), ratio(3, 2));
        assert!(w.covers(&h).unwrap());
        assert!(WeightFunction::new(vec![int(-1)]).is_err());
    }

    #[test]
    fn constant_examples() {
        let c = constant_c(&k3(), &WeightFunction::uniform(3, ratio(1, 2)).unwrap()).unwrap();
        assert!((c.value - 2f64.sqrt() / 3.0).abs() < 1e-12);
        let h = Hypergraph::new(4, &[vec![1, 2], vec![3, 4]], Some(&[1, 2])).unwrap();
        let c = constant_c(&h, &WeightFunction::uniform(2, int(1)).unwrap()).unwrap();
        assert!((c.value - 6.0).abs() < 1e-12);
        let bad = WeightFunction::uniform(3, ratio(1, 3)).unwrap();
        assert_eq!(constant_c(&k3(), &bad).unwrap_err(), Error::NotCovering);
    }
}
