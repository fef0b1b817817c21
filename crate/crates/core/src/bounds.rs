//! Joint-count bounds checked on concrete configurations: the simple bound
//! on `|J|`, the bound on `Σ η(p)`, and the entropic audit behind both.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::Zero;

use crate::config::JointsConfiguration;
use crate::entropy::{entropy, InequalityValues};
use crate::error::{Error, Result};
use crate::eta::{eta_multiplicity, EtaResult};
use crate::field::Field;
use crate::hypergraph::{constant_c, Hypergraph, WeightFunction};
use crate::logexpr::LogExpr;
use crate::par::{self, ExecMode};
use crate::rational::to_f64;
use crate::witness::{derive_seed, enumerate_witness_tuples, WitnessTuple};

/// `log2(C · Π |F_i|^{w̄_i})`, or `None` when the product is zero.
pub fn log_bound<S: Field>(h: &Hypergraph, w: &WeightFunction, config: &JointsConfiguration<S>) -> Result<Option<LogExpr>> {
    config.check_profile(h)?;
    let c = constant_c(h, w)?;
    let sub = w.subtotals(h)?;
    let mut log = c.log2;
    for (i, size) in config.family_sizes().into_iter().enumerate() {
        if Zero::is_zero(&sub[i]) {
            continue;
        }
        if size == 0 {
            return Ok(None);
        }
        log = log.add(&LogExpr::log_of_u64(size as u64).scale(&sub[i]));
    }
    Ok(Some(log))
}

#[derive(Clone, Debug)]
pub struct SimpleBound {
    pub joints: usize,
    pub bound: f64,
    pub log2_bound: Option<LogExpr>,
    pub holds: bool,
    /// `|J| / bound`.
    pub ratio: f64,
}

/// `|J| ≤ C_{H,w} Π |F_i|^{w̄_i}`, decided exactly in log space.
pub fn simple_bound<S: Field>(h: &Hypergraph, w: &WeightFunction, config: &JointsConfiguration<S>) -> Result<SimpleBound> {
    let log = log_bound(h, w, config)?;
    let joints = config.joints.len();
    let (bound, holds) = match &log {
        None => (0.0, joints == 0),
        Some(l) => {
            let holds = joints == 0 || LogExpr::log_of_u64(joints as u64).cmp_value(l) != Ordering::Greater;
            (l.to_f64().exp2(), holds)
        }
    };
    let ratio = if bound > 0.0 { joints as f64 / bound } else { 0.0 };
    Ok(SimpleBound { joints, bound, log2_bound: log, holds, ratio })
}

/// Witness tuples at every joint, computed in parallel with per-joint seeds.
pub fn joint_tuples<S: Field>(
    h: &Hypergraph,
    config: &JointsConfiguration<S>,
    cap: usize,
    trials: usize,
    seed: u64,
    mode: ExecMode,
) -> Result<Vec<Vec<WitnessTuple<S>>>> {
    par::map_range(mode, config.joints.len(), |i| {
        enumerate_witness_tuples(h, &config.joints[i], config, cap, trials, derive_seed(seed, i as u64))
    })
    .into_iter()
    .collect()
}

pub fn tuple_indices<S: Field>(tuples: &[WitnessTuple<S>]) -> Vec<Vec<usize>> {
    tuples.iter().map(|t| t.flats.clone()).collect()
}

#[derive(Clone, Debug)]
pub struct MultiplicityBound {
    pub etas: Vec<EtaResult>,
    pub sum_eta: f64,
    pub bound: f64,
    pub holds: bool,
    pub converged: bool,
    pub max_gap: f64,
}

/// `Σ_p η(p) ≤ C_{H,w} Π |F_i|^{w̄_i}`.
pub fn multiplicity_bound<S: Field>(
    h: &Hypergraph,
    w: &WeightFunction,
    config: &JointsConfiguration<S>,
    tuples: &[Vec<WitnessTuple<S>>],
    tol: f64,
    max_iters: usize,
    mode: ExecMode,
) -> Result<MultiplicityBound> {
    let log = log_bound(h, w, config)?;
    let idx: Vec<Vec<Vec<usize>>> = tuples.iter().map(|t| tuple_indices(t)).collect();
    let etas: Vec<EtaResult> =
        par::map(mode, &idx, |t| eta_multiplicity(h, w, t, tol, max_iters)).into_iter().collect::<Result<_>>()?;
    let sum_eta: f64 = etas.iter().map(|e| e.eta).sum();
    let bound = log.as_ref().map(|l| l.to_f64().exp2()).unwrap_or(0.0);
    let holds = sum_eta <= bound * (1.0 + crate::entropy::SLACK_TOL) + crate::entropy::SLACK_TOL;
    let converged = etas.iter().all(|e| e.converged);
    let max_gap = etas.iter().map(|e| e.gap).fold(0.0, f64::max);
    Ok(MultiplicityBound { etas, sum_eta, bound, holds, converged, max_gap })
}

/// Entropic audit at a chosen law: `p ~ p_dist`, then a tuple of `T_p` from
/// `tuple_dists[p]`, then `e_i` with probability `w(e)/w̄_i`. Returns
/// `lhs = H(p) + Σ w̄_i (H(F|p) - H(e_i))` and
/// `rhs = Σ w̄_i H(F) + log2 C`.
pub fn geometric_shearer_audit(
    h: &Hypergraph,
    w: &WeightFunction,
    p_dist: &[f64],
    tuples: &[Vec<Vec<usize>>],
    tuple_dists: &[Vec<f64>],
) -> Result<InequalityValues> {
    if p_dist.len() != tuples.len() || tuple_dists.len() != tuples.len() {
        return Err(Error::SizeMismatch("one tuple law per joint".into()));
    }
    let c = constant_c(h, w)?;
    let sub = w.subtotals(h)?;
    let hp = entropy(p_dist);
    let mut lhs = hp;
    let mut rhs = c.log2.to_f64();
    for col in 1..=h.num_colors() {
        if Zero::is_zero(&sub[col - 1]) {
            continue;
        }
        let wb = to_f64(&sub[col - 1]);
        let edges = h.edges_of_color(col);
        let pi: Vec<f64> = edges.iter().map(|&e| to_f64(&(w.get(e) / &sub[col - 1]))).collect();
        let mut joint: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (p, (ts, nu)) in tuples.iter().zip(tuple_dists).enumerate() {
            for (t, &prob) in ts.iter().zip(nu) {
                for (&e, &a) in edges.iter().zip(&pi) {
                    *joint.entry((p, t[e])).or_insert(0.0) += p_dist[p] * prob * a;
                }
            }
        }
        let mut marg: BTreeMap<usize, f64> = BTreeMap::new();
        for (&(_, f), &v) in &joint {
            *marg.entry(f).or_insert(0.0) += v;
        }
        let h_pf = entropy(&joint.values().copied().collect::<Vec<_>>());
        let h_f = entropy(&marg.values().copied().collect::<Vec<_>>());
        lhs += wb * (h_pf - hp - entropy(&pi));
        rhs += wb * h_f;
    }
    Ok(InequalityValues::new(lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{generic_hyperplanes, generically_induced};
    use crate::extremal::SimpleHypergraph;
    use crate::field::Gf61;
    use crate::rational::ratio;

    #[test]
    fn k4_triangles() {
        let h = Hypergraph::complete_codim1(3);
        let w = WeightFunction::uniform(3, ratio(1, 2)).unwrap();
        let fam = generic_hyperplanes::<Gf61>(4, 3, 0).unwrap();
        let cfg = generically_induced(&SimpleHypergraph::complete(4, 2), &h, &fam).unwrap();
        assert_eq!(cfg.joints.len(), 4);
        assert_eq!(cfg.family_sizes(), vec![6]);
        let b = simple_bound(&h, &w, &cfg).unwrap();
        assert!(b.holds);
        // bound = sqrt2/3 * 6^{3/2}
        assert!((b.bound - 2f64.sqrt() / 3.0 * 6f64.powf(1.5)).abs() < 1e-9);
        let tuples = joint_tuples(&h, &cfg, 1000, 8, 0, ExecMode::Sequential).unwrap();
        assert!(tuples.iter().all(|t| t.len() == 6));
        let m = multiplicity_bound(&h, &w, &cfg, &tuples, 1e-9, 100_000, ExecMode::Parallel).unwrap();
        assert!(m.holds && m.converged);
        for e in &m.etas {
            assert!((e.eta - 1.0).abs() < 1e-6);
        }
    }
}
