//! γ-set assembly, the Loomis-Whitney step, parameter counting, and
//! empirical checks of the structural properties of `B_{p,F}(α, n)`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::ledger::{BasisLedger, Handicap};
use super::poly::exponents_of_degree;
use super::VanishingSetup;
use crate::error::{Error, Result};
use crate::extremal::binom;
use crate::field::Field;
use crate::hypergraph::{Hypergraph, WeightFunction};
use crate::par::ExecMode;
use crate::rational::to_f64;

/// `π^{(e)}`: the coordinates outside `e`, ascending.
pub fn project_off(edge: u64, gamma: &[u32]) -> Vec<u32> {
    gamma.iter().enumerate().filter(|(j, _)| edge >> j & 1 == 0).map(|(_, &g)| g).collect()
}

/// All `γ ∈ Z≥0^d`, `|γ| ≤ n`, with `π^{(e)}(γ) ∈ G_{p,e}` for every edge.
/// Output is grouped by degree, decreasing lex within a degree.
pub fn assemble_g_p(h: &Hypergraph, per_edge: &[Vec<Vec<u32>>], n: usize) -> Vec<Vec<u32>> {
    assert_eq!(per_edge.len(), h.num_edges(), "one set per edge");
    if per_edge.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    let sets: Vec<HashSet<&[u32]>> = per_edge.iter().map(|g| g.iter().map(Vec::as_slice).collect()).collect();
    let mut out = Vec::new();
    for r in 0..=n as u32 {
        for gamma in exponents_of_degree(h.d(), r) {
            if (0..h.num_edges()).all(|e| sets[e].contains(project_off(h.edge(e), &gamma).as_slice())) {
                out.push(gamma);
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LwStep {
    /// `|G_p| / (n+1)^d`.
    pub lhs: f64,
    /// `Π_e (|G_{p,e}| / (n+1)^{d-|e|})^{w(e)/(|w|-1)}`.
    pub rhs: f64,
    pub slack: f64,
}

/// Compare the two sides in log space; `slack = rhs - lhs`.
pub fn lw_step_check(h: &Hypergraph, w: &WeightFunction, g_p: usize, g_pe: &[usize], n: usize) -> Result<LwStep> {
    if g_pe.len() != h.num_edges() || w.len() != h.num_edges() {
        return Err(Error::SizeMismatch("one size and one weight per edge".into()));
    }
    if !w.covers(h)? {
        return Err(Error::NotCovering);
    }
    let excess = to_f64(&w.total()) - 1.0;
    if excess <= 0.0 {
        return Err(Error::Invalid("total weight must exceed 1".into()));
    }
    let d = h.d() as f64;
    let ln1 = ((n + 1) as f64).ln();
    let lhs_log = if g_p == 0 { f64::NEG_INFINITY } else { (g_p as f64).ln() - d * ln1 };
    let mut rhs_log = 0.0;
    for (e, &size) in g_pe.iter().enumerate() {
        let s = to_f64(w.get(e)) / excess;
        if s == 0.0 {
            continue;
        }
        if size == 0 {
            rhs_log = f64::NEG_INFINITY;
            break;
        }
        rhs_log += s * ((size as f64).ln() - (h.d() - h.edge_size(e)) as f64 * ln1);
    }
    let (lhs, rhs) = (lhs_log.exp(), rhs_log.exp());
    Ok(LwStep { lhs, rhs, slack: rhs - lhs })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamCounting {
    pub sizes: Vec<usize>,
    pub sum: u128,
    /// `C(n + d, d)`.
    pub target: u128,
    pub slack: i128,
}

/// Assemble every `G_p` and compare `Σ_p |G_p|` with `C(n+d, d)`. All
/// ledgers must share one handicap, one preassigned order and one `n`.
pub fn param_counting_check<S: Field>(
    setup: &VanishingSetup<S>,
    ledgers: &[BasisLedger],
    n: usize,
) -> Result<(ParamCounting, Vec<Vec<Vec<u32>>>)> {
    let consistent = ledgers.iter().all(|l| {
        l.order_digest == setup.order_digest && l.n == n && l.handicap_digest == ledgers[0].handicap_digest
    });
    if !consistent {
        return Err(Error::InconsistentLedgers);
    }
    let mut sets = Vec::with_capacity(setup.num_joints());
    for p in 0..setup.num_joints() {
        sets.push(assemble_g_p(&setup.h, &setup.edge_gsets(ledgers, p)?, n));
    }
    let sizes: Vec<usize> = sets.iter().map(Vec::len).collect();
    let sum: u128 = sizes.iter().map(|&s| s as u128).sum();
    let target = binom((n + setup.d()) as u64, setup.d() as u64) as u128;
    Ok((ParamCounting { sizes, sum, target, slack: sum as i128 - target as i128 }, sets))
}

/// Everything one engine pass produces at a fixed handicap.
#[derive(Clone, Debug)]
pub struct EngineRun {
    pub n: usize,
    pub alpha: Handicap,
    pub ledgers: Vec<BasisLedger>,
    pub param: ParamCounting,
    pub lw: Vec<LwStep>,
    /// `(total, target)` per flat.
    pub flat_sums: Vec<(usize, usize)>,
}

pub fn run_engine<S: Field>(
    setup: &VanishingSetup<S>,
    w: &WeightFunction,
    alpha: &Handicap,
    n: usize,
    mode: ExecMode,
) -> Result<EngineRun> {
    let ledgers = setup.build_ledgers(alpha, n, mode)?;
    let (param, _) = param_counting_check(setup, &ledgers, n)?;
    let mut lw = Vec::with_capacity(setup.num_joints());
    for p in 0..setup.num_joints() {
        let sizes: Vec<usize> = setup.edge_gsets(&ledgers, p)?.iter().map(Vec::len).collect();
        lw.push(lw_step_check(&setup.h, w, param.sizes[p], &sizes, n)?);
    }
    let flat_sums = ledgers.iter().take(setup.flats.len()).map(|l| (l.total(), l.target())).collect();
    Ok(EngineRun { n, alpha: alpha.clone(), ledgers, param, lw, flat_sums })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    /// Pairs `(p, F)` meeting the hypothesis.
    pub checked: usize,
    pub violations: usize,
}

/// For every `(p, F)` with `α¹_p - α¹_q ≤ α²_p - α²_q` for all `q` on `F`,
/// check `B(α¹) ≤ B(α²)`.
pub fn monotonicity_check<S: Field>(
    setup: &VanishingSetup<S>,
    a1: &Handicap,
    a2: &Handicap,
    n: usize,
    mode: ExecMode,
) -> Result<MonotonicityReport> {
    let l1 = setup.build_ledgers(a1, n, mode)?;
    let l2 = setup.build_ledgers(a2, n, mode)?;
    let mut rep = MonotonicityReport::default();
    for f in 0..setup.flats.len() {
        for &p in &setup.on_flat[f] {
            let hyp = setup.on_flat[f].iter().all(|&q| a1.get(p) - a1.get(q) <= a2.get(p) - a2.get(q));
            if hyp {
                rep.checked += 1;
                if l1[f].b(p) > l2[f].b(p) {
                    rep.violations += 1;
                }
            }
        }
    }
    Ok(rep)
}

/// `B(α + c) = B(α)` for every flat and joint, and the selected γ-sets agree.
pub fn shift_invariance_check<S: Field>(
    setup: &VanishingSetup<S>,
    alpha: &Handicap,
    c: i64,
    n: usize,
    mode: ExecMode,
) -> Result<bool> {
    let l1 = setup.build_ledgers(alpha, n, mode)?;
    let l2 = setup.build_ledgers(&alpha.shifted(c), n, mode)?;
    Ok(l1.iter().zip(&l2).all(|(a, b)| a.counts == b.counts && a.gsets == b.gsets))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LipschitzReport {
    pub checked: usize,
    /// Violations of `|ΔB| ≤ C(n, k-1) Σ|Δ|` on 1-flats, where it is exact.
    pub violations_k1: usize,
    /// Smallest `c` with `|ΔB| ≤ (C(n,k-1) + c n^{k-2}) Σ|Δ|` on flats of dimension at least 2.
    pub calibrated_c: f64,
}

pub fn lipschitz_check<S: Field>(
    setup: &VanishingSetup<S>,
    a1: &Handicap,
    a2: &Handicap,
    n: usize,
    mode: ExecMode,
) -> Result<LipschitzReport> {
    let l1 = setup.build_ledgers(a1, n, mode)?;
    let l2 = setup.build_ledgers(a2, n, mode)?;
    let mut rep = LipschitzReport::default();
    for f in 0..setup.flats.len() {
        let k = setup.flats[f].dim();
        for &p in &setup.on_flat[f] {
            let spread: i64 = setup.on_flat[f]
                .iter()
                .map(|&q| ((a1.get(q) - a1.get(p)) - (a2.get(q) - a2.get(p))).abs())
                .sum();
            let diff = (l1[f].b(p).unwrap_or(0) as i64 - l2[f].b(p).unwrap_or(0) as i64).abs();
            rep.checked += 1;
            let lead = if k == 0 { 0 } else { binom(n as u64, (k - 1) as u64) as i64 };
            if k <= 1 {
                if diff > lead * spread {
                    rep.violations_k1 += 1;
                }
            } else if spread > 0 {
                let c = (diff as f64 - (lead * spread) as f64) / ((n as f64).powi(k as i32 - 2) * spread as f64);
                rep.calibrated_c = rep.calibrated_c.max(c);
            }
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainSweep {
    pub flat: usize,
    pub joint: usize,
    /// `B_{p,F}` with `α_p = -g` and every other joint at 0, for `g = 0..=max_gap`.
    pub values: Vec<usize>,
    /// Smallest gap from which `B` stays 0 through the sweep.
    pub threshold: Option<usize>,
    /// Once zero, the count never returned above zero.
    pub stays_zero: bool,
}

pub fn bounded_domain_sweep<S: Field>(
    setup: &VanishingSetup<S>,
    flat: usize,
    joint: usize,
    n: usize,
    max_gap: usize,
) -> Result<DomainSweep> {
    if !setup.on_flat[flat].contains(&joint) {
        return Err(Error::ChartMissing(joint));
    }
    let mut values = Vec::with_capacity(max_gap + 1);
    for g in 0..=max_gap {
        let mut a = Handicap::zero(setup.num_joints());
        a.0[joint] = -(g as i64);
        values.push(setup.ledger_for(flat, &a, n)?.b(joint).unwrap_or(0));
    }
    let first_zero = values.iter().position(|&v| v == 0);
    let stays_zero = first_zero.map(|z| values[z..].iter().all(|&v| v == 0)).unwrap_or(true);
    let threshold = (0..values.len()).find(|&g| values[g..].iter().all(|&v| v == 0));
    Ok(DomainSweep { flat, joint, values, threshold, stays_zero })
}
