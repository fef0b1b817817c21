//! The multiplicity of a joint: maximize `Φ(μ) = Σ_i w̄_i H(q_i(μ))` over
//! distributions `μ` on its witness tuples, where `q_i(μ)` is the law of the
//! color-`i` flat when the edge of color `i` is drawn with probability
//! `w(e)/w̄_i`. `Φ` is concave, so Frank-Wolfe with away steps and exact line
//! search converges and its duality gap certifies the value.

use std::f64::consts::LN_2;

use num_traits::Zero;

use crate::entropy::entropy;
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, WeightFunction};
use crate::rational::to_f64;

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_ITERS: usize = 100_000;

/// Flat members touched by one tuple, with their mixture weight, per color.
struct Objective {
    /// Per color: `w̄_i`.
    wbar: Vec<f64>,
    /// Per color: number of flat members referenced.
    sizes: Vec<usize>,
    /// Per tuple, per color: `(flat slot, weight)` contributions.
    contrib: Vec<Vec<Vec<(usize, f64)>>>,
    /// `Σ_i w̄_i H(e_i)`.
    edge_entropy: f64,
}

impl Objective {
    fn new(h: &Hypergraph, w: &WeightFunction, tuples: &[Vec<usize>]) -> Result<Self> {
        let sub = w.subtotals(h)?;
        let r = h.num_colors();
        let wbar: Vec<f64> = sub.iter().map(to_f64).collect();
        let mut edge_entropy = 0.0;
        let mut slot_maps: Vec<std::collections::HashMap<usize, usize>> = vec![Default::default(); r];
        for c in 1..=r {
            if sub[c - 1].is_zero() {
                continue;
            }
            let probs: Vec<f64> = h.edges_of_color(c).iter().map(|&e| to_f64(&(w.get(e) / &sub[c - 1]))).collect();
            edge_entropy += wbar[c - 1] * entropy(&probs);
        }
        let contrib = tuples
            .iter()
            .map(|t| {
                let mut per = vec![Vec::new(); r];
                for (e, &flat) in t.iter().enumerate() {
                    let c = h.color(e);
                    if sub[c - 1].is_zero() || w.get(e).is_zero() {
                        continue;
                    }
                    let n = slot_maps[c - 1].len();
                    let slot = *slot_maps[c - 1].entry(flat).or_insert(n);
                    per[c - 1].push((slot, to_f64(&(w.get(e) / &sub[c - 1]))));
                }
                per
            })
            .collect();
        let sizes = slot_maps.iter().map(|m| m.len()).collect();
        Ok(Self { wbar, sizes, contrib, edge_entropy })
    }

    fn marginals(&self, mu: &[f64]) -> Vec<Vec<f64>> {
        let mut q: Vec<Vec<f64>> = self.sizes.iter().map(|&n| vec![0.0; n]).collect();
        for (t, &m) in mu.iter().enumerate() {
            if m == 0.0 {
                continue;
            }
            for (c, list) in self.contrib[t].iter().enumerate() {
                for &(slot, a) in list {
                    q[c][slot] += m * a;
                }
            }
        }
        q
    }

    fn value_of(&self, q: &[Vec<f64>]) -> f64 {
        q.iter().zip(&self.wbar).map(|(qc, &w)| if w == 0.0 { 0.0 } else { w * entropy(qc) }).sum()
    }

    /// `∂Φ/∂μ_t` at marginals `q`.
    fn gradient(&self, q: &[Vec<f64>]) -> Vec<f64> {
        let dlog: Vec<Vec<f64>> =
            q.iter().map(|qc| qc.iter().map(|&x| -(x.max(1e-300)).log2() - 1.0 / LN_2).collect()).collect();
        self.contrib
            .iter()
            .map(|per| {
                per.iter()
                    .enumerate()
                    .map(|(c, list)| self.wbar[c] * list.iter().map(|&(slot, a)| a * dlog[c][slot]).sum::<f64>())
                    .sum()
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EtaResult {
    pub eta: f64,
    pub log2_eta: f64,
    /// Certified Frank-Wolfe duality gap at the returned point.
    pub gap: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Optimizing distribution over the tuples.
    pub mu: Vec<f64>,
}

/// Maximize along `mu + γ·dir` for `γ ∈ [0, gmax]` by bisection on the
/// directional derivative.
fn line_search(obj: &Objective, mu: &[f64], dir: &[f64], gmax: f64) -> f64 {
    let deriv = |g: f64| {
        let pt: Vec<f64> = mu.iter().zip(dir).map(|(m, d)| (m + g * d).max(0.0)).collect();
        let grad = obj.gradient(&obj.marginals(&pt));
        grad.iter().zip(dir).map(|(a, b)| a * b).sum::<f64>()
    };
    if deriv(gmax) >= 0.0 {
        return gmax;
    }
    let (mut lo, mut hi) = (0.0, gmax);
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if deriv(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `tuples[t][e]` is the member of color `c(e)`'s family used for edge `e`.
pub fn eta_multiplicity(
    h: &Hypergraph,
    w: &WeightFunction,
    tuples: &[Vec<usize>],
    tol: f64,
    max_iters: usize,
) -> Result<EtaResult> {
    if tuples.is_empty() {
        return Err(Error::EmptyTupleSet);
    }
    if !w.covers(h)? {
        return Err(Error::NotCovering);
    }
    let obj = Objective::new(h, w, tuples)?;
    let n = tuples.len();
    let mut mu = vec![1.0 / n as f64; n];
    let mut gap = f64::INFINITY;
    let mut iterations = 0;
    while iterations < max_iters {
        let q = obj.marginals(&mu);
        let grad = obj.gradient(&q);
        let inner: f64 = grad.iter().zip(&mu).map(|(g, m)| g * m).sum();
        let (fw, gfw) = grad.iter().enumerate().fold((0, f64::MIN), |b, (i, &g)| if g > b.1 { (i, g) } else { b });
        gap = gfw - inner;
        if gap <= tol {
            break;
        }
        iterations += 1;
        // away vertex: worst active atom
        let (aw, gaw) = grad
            .iter()
            .enumerate()
            .filter(|(i, _)| mu[*i] > 0.0)
            .fold((0, f64::MAX), |b, (i, &g)| if g < b.1 { (i, g) } else { b });
        let away_gap = inner - gaw;
        let mut dir = vec![0.0; n];
        let gmax;
        if gap >= away_gap || mu[aw] >= 1.0 {
            for (d, m) in dir.iter_mut().zip(&mu) {
                *d = -m;
            }
            dir[fw] += 1.0;
            gmax = 1.0;
        } else {
            // pairwise step: move mass from the away atom to the FW atom
            dir[fw] = 1.0;
            dir[aw] = -1.0;
            gmax = mu[aw];
        }
        let g = line_search(&obj, &mu, &dir, gmax);
        for (m, d) in mu.iter_mut().zip(&dir) {
            *m = (*m + g * d).max(0.0);
        }
        if g == gmax && dir.iter().filter(|&&d| d < 0.0).count() == 1 {
            mu[aw] = 0.0;
        }
        let s: f64 = mu.iter().sum();
        mu.iter_mut().for_each(|m| *m /= s);
    }
    let value = obj.value_of(&obj.marginals(&mu)) - obj.edge_entropy;
    Ok(EtaResult { eta: value.exp2(), log2_eta: value, gap, iterations, converged: gap <= tol, mu })
}

/// `Φ(μ) - Σ w̄_i H(e_i)` at a given tuple distribution.
pub fn log2_objective(h: &Hypergraph, w: &WeightFunction, tuples: &[Vec<usize>], mu: &[f64]) -> Result<f64> {
    let obj = Objective::new(h, w, tuples)?;
    Ok(obj.value_of(&obj.marginals(mu)) - obj.edge_entropy)
}

/// Closed-form multiplicity of a joint of the complete hyperplane
/// construction: `Π_e (w(e)/w̄_i)^{w(e)} · Π_i C(d, d-k_i)^{w̄_i}`.
pub fn generic_eta_closed_form(h: &Hypergraph, w: &WeightFunction) -> Result<f64> {
    let profile = h.validate_uniform_coloring()?;
    let sub = w.subtotals(h)?;
    let mut log = 0.0;
    for c in 1..=h.num_colors() {
        let wb = to_f64(&sub[c - 1]);
        let binom = crate::extremal::binom(h.d() as u64, profile.edge_size(c) as u64) as f64;
        log += wb * binom.log2();
        for e in h.edges_of_color(c) {
            let we = to_f64(w.get(e));
            if we > 0.0 {
                log += we * (we / wb).log2();
            }
        }
    }
    Ok(log.exp2())
}
