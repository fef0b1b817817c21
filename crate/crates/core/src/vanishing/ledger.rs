//! Handicaps, the priority order and per-flat basis ledgers.

use serde::{Deserialize, Serialize};

use super::poly::{functional_table, Chart, MonomialIndex};
use super::{hash64, sha256_hex};
use crate::error::{Error, Result};
use crate::extremal::binom;
use crate::field::Field;
use crate::flat::Flat;
use crate::linalg::EchelonStore;

/// One integer per joint, indexed by preassigned rank. Only differences
/// matter.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Handicap(pub Vec<i64>);

impl Handicap {
    pub fn zero(joints: usize) -> Self {
        Handicap(vec![0; joints])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, p: usize) -> i64 {
        self.0[p]
    }

    pub fn shifted(&self, c: i64) -> Self {
        Handicap(self.0.iter().map(|a| a + c).collect())
    }

    /// Shift so the minimum is zero; equal for handicaps that differ by a constant.
    pub fn normalized(&self) -> Self {
        let m = self.0.iter().copied().min().unwrap_or(0);
        self.shifted(-m)
    }

    pub fn digest(&self) -> u64 {
        hash64(&format!("{:?}", self.0))
    }
}

/// `(r - α_p, rank of p)`, compared lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PriorityKey {
    pub level: i64,
    pub rank: usize,
}

impl PriorityKey {
    pub fn new(alpha: &Handicap, p: usize, r: usize) -> Self {
        PriorityKey { level: r as i64 - alpha.get(p), rank: p }
    }
}

/// Where a joint's chart on a flat came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChartSource {
    /// `A_p ∘ ι^{(e)}` for the edge with this index.
    Witness(usize),
    /// The flat's canonical direction basis.
    Canonical,
}

/// A joint on the flat together with its chart.
#[derive(Clone, Debug)]
pub struct JointChart<S: Field> {
    pub joint: usize,
    pub chart: Option<Chart<S>>,
    pub source: ChartSource,
}

/// Outcome of the greedy elimination on one flat.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisLedger {
    pub flat_key: String,
    pub flat_index: usize,
    pub dim: usize,
    pub n: usize,
    /// Joints on the flat, in preassigned order.
    pub joints: Vec<usize>,
    pub sources: Vec<ChartSource>,
    /// `counts[i][r] = B^r_{p,F}` for `p = joints[i]`.
    pub counts: Vec<Vec<usize>>,
    /// Selected orders `γ ∈ Z≥0^k` for each joint, in selection order.
    pub gsets: Vec<Vec<Vec<u32>>>,
    pub rank: usize,
    pub handicap_digest: u64,
    pub order_digest: u64,
}

impl BasisLedger {
    pub fn local(&self, joint: usize) -> Option<usize> {
        self.joints.binary_search(&joint).ok()
    }

    pub fn b_local(&self, i: usize) -> usize {
        self.counts[i].iter().sum()
    }

    /// `B_{p,F}` for a global joint index.
    pub fn b(&self, joint: usize) -> Option<usize> {
        self.local(joint).map(|i| self.b_local(i))
    }

    pub fn total(&self) -> usize {
        (0..self.joints.len()).map(|i| self.b_local(i)).sum()
    }

    /// `C(n + k, k)`.
    pub fn target(&self) -> usize {
        binom((self.n + self.dim) as u64, self.dim as u64) as usize
    }

    pub fn digest(&self) -> String {
        sha256_hex(serde_json::to_string(self).expect("ledger serializes").as_bytes())
    }
}

/// Walk `(p, r)` pairs in priority order and, within a pair, `|γ| = r` in
/// decreasing lex order; keep each functional that raises the rank.
pub fn compute_b_counts<S: Field>(
    flat: &Flat<S>,
    flat_index: usize,
    on_flat: &[JointChart<S>],
    alpha: &Handicap,
    n: usize,
    order_digest: u64,
) -> Result<BasisLedger> {
    let k = flat.dim();
    let index = MonomialIndex::new(k, n);
    let mut tables = Vec::with_capacity(on_flat.len());
    for jc in on_flat {
        let chart = jc.chart.as_ref().ok_or(Error::ChartMissing(jc.joint))?;
        if !chart.is_valid_for(flat) {
            return Err(Error::ChartMissing(jc.joint));
        }
        tables.push(functional_table(flat, chart, &index)?);
    }
    let mut order: Vec<usize> = (0..on_flat.len()).collect();
    order.sort_by_key(|&i| on_flat[i].joint);
    let mut pairs: Vec<(PriorityKey, usize, usize)> = order
        .iter()
        .flat_map(|&i| (0..=n).map(move |r| (i, r)))
        .map(|(i, r)| (PriorityKey::new(alpha, on_flat[i].joint, r), i, r))
        .collect();
    pairs.sort();

    let mut store = EchelonStore::new(index.len());
    let mut counts = vec![vec![0usize; n + 1]; on_flat.len()];
    let mut gsets: Vec<Vec<Vec<u32>>> = vec![Vec::new(); on_flat.len()];
    'outer: for (_, i, r) in pairs {
        for g in index.degree_range(r) {
            if store.is_full() {
                break 'outer;
            }
            if store.insert(tables[i][g].clone()) {
                counts[i][r] += 1;
                gsets[i].push(index.monomial(g).to_vec());
            }
        }
    }
    let rank = store.rank();
    Ok(BasisLedger {
        flat_key: flat.encode(),
        flat_index,
        dim: k,
        n,
        joints: order.iter().map(|&i| on_flat[i].joint).collect(),
        sources: order.iter().map(|&i| on_flat[i].source).collect(),
        counts: order.iter().map(|&i| counts[i].clone()).collect(),
        gsets: order.iter().map(|&i| gsets[i].clone()).collect(),
        rank,
        handicap_digest: alpha.digest(),
        order_digest,
    })
}
