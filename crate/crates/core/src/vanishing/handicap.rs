//! The handicap adjustment dynamic, key-inequality certificates and their audit.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::ledger::Handicap;
use super::{hash64, VanishingSetup};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::hypergraph::{members, Hypergraph, WeightFunction};
use crate::par::ExecMode;
use crate::rational::{format_rational, parse_rational, to_f64};

pub const DEFAULT_C0: f64 = 1.0;
/// Length of the state-hash ring used for cycle detection.
pub const CYCLE_RING: usize = 1024;
pub const DEFAULT_ADDITIVE_TOL: f64 = 0.1;
pub const DEFAULT_FACTOR: f64 = 0.8;
pub const DEFAULT_ROUNDS: usize = 200;

/// `c0 / ln n`.
pub fn default_delta(n: usize) -> f64 {
    DEFAULT_C0 / (n as f64).ln()
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: usize,
    pub alpha: Vec<i64>,
    pub w_prime: Vec<f64>,
    pub s: Vec<usize>,
    pub max_gap: f64,
    /// Joints decremented after this round (empty on the last one).
    pub block: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    Converged,
    MaxRounds,
    Cycle { period: usize },
}

impl Termination {
    pub fn as_str(&self) -> String {
        match self {
            Termination::Converged => "converged".into(),
            Termination::MaxRounds => "max-rounds".into(),
            Termination::Cycle { period } => format!("cycle:{period}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct HandicapOutcome {
    pub n: usize,
    pub delta: f64,
    pub alpha: Handicap,
    /// `B_{p,F}` per joint and flat at the returned state.
    pub counts: Vec<HashMap<usize, usize>>,
    pub min_products: Vec<f64>,
    pub w_prime: Vec<f64>,
    pub lambda: f64,
    pub termination: Termination,
    /// Round whose state is returned.
    pub returned_round: usize,
    pub trace: Vec<RoundRecord>,
}

impl HandicapOutcome {
    pub fn converged(&self) -> bool {
        self.termination == Termination::Converged
    }

    /// `b_{p,F} = B_{p,F} / n^{dim F}`.
    pub fn b<S: Field>(&self, setup: &VanishingSetup<S>, p: usize, f: usize) -> f64 {
        let c = self.counts[p].get(&f).copied().unwrap_or(0);
        c as f64 / (self.n as f64).powi(setup.flats[f].dim() as i32)
    }
}

fn sigma(h: &Hypergraph, w: &WeightFunction) -> Result<Vec<f64>> {
    if !w.covers(h)? {
        return Err(Error::NotCovering);
    }
    let excess = to_f64(&w.total()) - 1.0;
    if excess <= 0.0 {
        return Err(Error::Invalid("total weight must exceed 1".into()));
    }
    Ok(w.weights().iter().map(|x| to_f64(x) / excess).collect())
}

/// `min over T_p of Π_e value(F_{p,e})^{σ(e)}`, with `0^0 = 1`.
fn min_product(tuples: &[Vec<usize>], sigma: &[f64], value: impl Fn(usize) -> f64) -> f64 {
    tuples
        .iter()
        .map(|t| {
            t.iter()
                .zip(sigma)
                .map(|(&f, &s)| if s == 0.0 { 1.0 } else { value(f).powf(s) })
                .product::<f64>()
        })
        .fold(f64::INFINITY, f64::min)
}

struct State {
    counts: Vec<HashMap<usize, usize>>,
    products: Vec<f64>,
    w_prime: Vec<f64>,
    s: Vec<usize>,
}

fn evaluate<S: Field>(
    setup: &VanishingSetup<S>,
    sig: &[f64],
    big_w: &[f64],
    alpha: &Handicap,
    n: usize,
    mode: ExecMode,
) -> Result<State> {
    let ledgers = setup.build_ledgers(alpha, n, mode)?;
    let counts = setup.b_counts(&ledgers);
    let nf = n as f64;
    let mut products = Vec::with_capacity(setup.num_joints());
    for p in 0..setup.num_joints() {
        let tuples: Vec<Vec<usize>> = setup.tuples[p].iter().map(|t| t.flats.clone()).collect();
        products.push(min_product(&tuples, sig, |f| {
            counts[p].get(&f).copied().unwrap_or(0) as f64 / nf.powi(setup.flats[f].dim() as i32)
        }));
    }
    let w_prime = products.iter().zip(big_w).map(|(x, w)| x / w).collect();
    let s = counts.iter().map(|m| m.values().sum()).collect();
    Ok(State { counts, products, w_prime, s })
}

/// Decrement the handicap of the top block of joints (by `(W', S)`
/// descending) above the largest adjacent `W'` gap, until every gap is at
/// most `delta`, a state repeats, or `max_rounds` is reached. Without
/// convergence the round with the smallest largest-gap is returned.
pub fn handicap_iteration<S: Field>(
    setup: &VanishingSetup<S>,
    w: &WeightFunction,
    big_w: &[f64],
    n: usize,
    delta: f64,
    max_rounds: usize,
    mode: ExecMode,
) -> Result<HandicapOutcome> {
    let jn = setup.num_joints();
    if big_w.len() != jn {
        return Err(Error::SizeMismatch(format!("{} point weights for {} joints", big_w.len(), jn)));
    }
    let target = 1.0 / factorial(setup.d());
    let total: f64 = big_w.iter().sum();
    if big_w.iter().any(|&x| !(x > 0.0)) || (total - target).abs() > 1e-9 * target.max(1.0) {
        return Err(Error::Invalid("point weights must be positive and sum to 1/d!".into()));
    }
    if !setup.is_connected() {
        return Err(Error::NotConnected);
    }
    let sig = sigma(&setup.h, w)?;
    let mut alpha = Handicap::zero(jn);
    let mut ring: VecDeque<u64> = VecDeque::with_capacity(CYCLE_RING);
    let mut trace: Vec<RoundRecord> = Vec::new();
    let mut best: Option<(f64, usize, Handicap, State)> = None;
    let mut termination = Termination::MaxRounds;
    for round in 0..max_rounds.max(1) {
        let key = alpha.normalized().digest();
        if let Some(pos) = ring.iter().rposition(|&k| k == key) {
            termination = Termination::Cycle { period: ring.len() - pos };
            break;
        }
        if ring.len() == CYCLE_RING {
            ring.pop_front();
        }
        ring.push_back(key);

        let st = evaluate(setup, &sig, big_w, &alpha, n, mode)?;
        let mut order: Vec<usize> = (0..jn).collect();
        order.sort_by(|&a, &b| {
            st.w_prime[b].total_cmp(&st.w_prime[a]).then(st.s[b].cmp(&st.s[a])).then(a.cmp(&b))
        });
        let gaps: Vec<f64> = order.windows(2).map(|x| st.w_prime[x[0]] - st.w_prime[x[1]]).collect();
        let (cut, max_gap) = gaps
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |acc, (i, &g)| if g > acc.1 { (i + 1, g) } else { acc });
        let done = max_gap <= delta;
        let block: Vec<usize> = if done { Vec::new() } else { order[..cut].to_vec() };
        trace.push(RoundRecord {
            round,
            alpha: alpha.0.clone(),
            w_prime: st.w_prime.clone(),
            s: st.s.clone(),
            max_gap,
            block: block.clone(),
        });
        if best.as_ref().map_or(true, |b| max_gap < b.0) {
            best = Some((max_gap, round, alpha.clone(), st));
        }
        if done {
            termination = Termination::Converged;
            break;
        }
        for p in block {
            alpha.0[p] -= 1;
        }
    }
    let (_, returned_round, alpha, st) = best.expect("at least one round");
    let lambda = st.w_prime.iter().sum::<f64>() / jn.max(1) as f64;
    Ok(HandicapOutcome {
        n,
        delta,
        alpha,
        counts: st.counts,
        min_products: st.products,
        w_prime: st.w_prime,
        lambda,
        termination,
        returned_round,
        trace,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertFlat {
    pub key: String,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BEntry {
    pub joint: usize,
    pub flat: usize,
    pub count: u64,
    pub value: f64,
}

/// Self-contained record of `b`, `W` and `λ` together with the pattern,
/// weights and `T_p` needed to audit it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KeyInequalityCertificate {
    pub d: usize,
    pub n: usize,
    pub edges: Vec<Vec<usize>>,
    pub colors: Vec<usize>,
    pub weights: Vec<String>,
    pub joints: Vec<String>,
    pub flats: Vec<CertFlat>,
    /// `tuples[p]` lists `T_p` as flat indices per edge.
    pub tuples: Vec<Vec<Vec<usize>>>,
    pub b: Vec<BEntry>,
    #[serde(rename = "W")]
    pub point_weights: Vec<f64>,
    pub lambda: f64,
    pub alpha: Vec<i64>,
    pub delta: f64,
    pub termination: String,
    pub rounds: usize,
    pub trace: Vec<RoundRecord>,
}

impl KeyInequalityCertificate {
    pub fn from_outcome<S: Field>(
        setup: &VanishingSetup<S>,
        w: &WeightFunction,
        big_w: &[f64],
        out: &HandicapOutcome,
    ) -> Self {
        let h = &setup.h;
        let mut b = Vec::new();
        for p in 0..setup.num_joints() {
            for &f in &setup.through[p] {
                let count = out.counts[p].get(&f).copied().unwrap_or(0) as u64;
                b.push(BEntry { joint: p, flat: f, count, value: out.b(setup, p, f) });
            }
        }
        Self {
            d: h.d(),
            n: out.n,
            edges: (0..h.num_edges()).map(|e| members(h.edge(e)).collect()).collect(),
            colors: h.colors().to_vec(),
            weights: w.weights().iter().map(format_rational).collect(),
            joints: setup.encodings.clone(),
            flats: setup.flats.iter().map(|f| CertFlat { key: f.encode(), dim: f.dim() }).collect(),
            tuples: setup.tuples.iter().map(|ts| ts.iter().map(|t| t.flats.clone()).collect()).collect(),
            b,
            point_weights: big_w.to_vec(),
            lambda: out.lambda,
            alpha: out.alpha.0.clone(),
            delta: out.delta,
            termination: out.termination.as_str(),
            rounds: out.trace.len(),
            trace: out.trace.clone(),
        }
    }

    pub fn pattern(&self) -> Result<(Hypergraph, WeightFunction)> {
        let h = Hypergraph::new(self.d, &self.edges, Some(&self.colors))?;
        let w = WeightFunction::new(self.weights.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?)?;
        Ok((h, w))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub pass: bool,
    pub worst_slack: f64,
    pub worst_index: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KeyAudit {
    /// `min over T_p of Π_e b^{w(e)/(|w|-1)} ≥ factor · W(p)`.
    pub cond1: ConditionCheck,
    /// `Σ_{p ∈ F} b_{p,F} ≤ 1/(dim F)! + tolerance` over used flats.
    pub cond2: ConditionCheck,
    pub products: Vec<f64>,
    pub flat_sums: Vec<f64>,
    /// `max_p |(product_p / W(p)) / λ - 1|`, the distance from exact equalization.
    pub equalization_error: f64,
    /// `max_F (Σ b_{p,F} - 1/(dim F)!)^+`.
    pub flat_excess: f64,
    pub tolerance: f64,
    pub factor: f64,
}

impl KeyAudit {
    pub fn pass(&self) -> bool {
        self.cond1.pass && self.cond2.pass
    }
}

fn worst(slacks: impl Iterator<Item = (usize, f64)>) -> ConditionCheck {
    let mut w: Option<(usize, f64)> = None;
    for (i, s) in slacks {
        if w.map_or(true, |(_, b)| s < b) {
            w = Some((i, s));
        }
    }
    match w {
        Some((i, s)) => ConditionCheck { pass: s >= 0.0, worst_slack: s, worst_index: Some(i) },
        None => ConditionCheck { pass: true, worst_slack: 0.0, worst_index: None },
    }
}

pub fn key_inequality_audit(
    h: &Hypergraph,
    w: &WeightFunction,
    cert: &KeyInequalityCertificate,
    tolerance: f64,
    factor: f64,
) -> Result<KeyAudit> {
    let jn = cert.joints.len();
    if cert.tuples.len() != jn || cert.point_weights.len() != jn {
        return Err(Error::SizeMismatch("certificate tables disagree on the joint count".into()));
    }
    if cert.tuples.iter().flatten().any(|t| t.len() != h.num_edges()) {
        return Err(Error::SizeMismatch("tuple length differs from the edge count".into()));
    }
    let sig = sigma(h, w)?;
    let mut b: HashMap<(usize, usize), f64> = HashMap::new();
    for e in &cert.b {
        b.insert((e.joint, e.flat), e.value);
    }
    let products: Vec<f64> = (0..jn)
        .map(|p| min_product(&cert.tuples[p], &sig, |f| b.get(&(p, f)).copied().unwrap_or(0.0)))
        .map(|x| if x.is_finite() { x } else { 0.0 })
        .collect();
    let cond1 = worst((0..jn).map(|p| (p, products[p] - factor * cert.point_weights[p])));

    let mut used = vec![false; cert.flats.len()];
    for f in cert.tuples.iter().flatten().flatten() {
        used[*f] = true;
    }
    let mut flat_sums = vec![0.0; cert.flats.len()];
    for e in &cert.b {
        flat_sums[e.flat] += e.value;
    }
    let cap = |f: usize| 1.0 / factorial(cert.flats[f].dim);
    let cond2 = worst((0..cert.flats.len()).filter(|&f| used[f]).map(|f| (f, cap(f) + tolerance - flat_sums[f])));
    let flat_excess = (0..cert.flats.len()).filter(|&f| used[f]).map(|f| (flat_sums[f] - cap(f)).max(0.0)).fold(0.0, f64::max);

    let ratios: Vec<f64> = (0..jn).map(|p| products[p] / cert.point_weights[p]).collect();
    let lambda = ratios.iter().sum::<f64>() / jn.max(1) as f64;
    let equalization_error =
        if lambda > 0.0 { ratios.iter().map(|r| (r / lambda - 1.0).abs()).fold(0.0, f64::max) } else { 0.0 };
    Ok(KeyAudit { cond1, cond2, products, flat_sums, equalization_error, flat_excess, tolerance, factor })
}

/// Stable digest of a handicap state, exposed for trace comparisons.
pub fn state_digest(alpha: &Handicap) -> u64 {
    hash64(&format!("{:?}", alpha.normalized().0))
}
