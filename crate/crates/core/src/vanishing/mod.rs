//! Polynomial-method machinery: derivative functionals on flats, greedy
//! priority-order bases, the counts `B_{p,F}(α, n)`, the γ-sets and the
//! handicap dynamic.
//!
//! All elimination runs over the configuration's field; the default is
//! GF(2^61 - 1).

pub mod handicap;
pub mod ledger;
pub mod lemmas;
pub mod poly;

use std::collections::HashMap;

use sha2::{Digest, Sha256};

pub use handicap::{
    default_delta, handicap_iteration, key_inequality_audit, ConditionCheck, HandicapOutcome, KeyAudit,
    KeyInequalityCertificate, RoundRecord, Termination,
};
pub use ledger::{compute_b_counts, BasisLedger, ChartSource, Handicap, JointChart, PriorityKey};
pub use lemmas::{
    assemble_g_p, bounded_domain_sweep, lipschitz_check, lw_step_check, monotonicity_check, param_counting_check,
    run_engine, shift_invariance_check, DomainSweep, EngineRun, LipschitzReport, LwStep, MonotonicityReport,
    ParamCounting,
};
pub use poly::{exponents_of_degree, field_binom, functional_row, functional_table, hasse_derivative, Chart, MonomialIndex, Poly};

use crate::bounds::joint_tuples;
use crate::config::JointsConfiguration;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::flat::{encode_point, Flat};
use crate::hypergraph::Hypergraph;
use crate::par::{self, ExecMode};
use crate::witness::Witness;

pub(crate) fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub(crate) fn hash64(s: &str) -> u64 {
    let h = Sha256::digest(s.as_bytes());
    u64::from_le_bytes(h[..8].try_into().expect("8 bytes"))
}

/// A member of `T_p` with flats given as indices into [`VanishingSetup::flats`].
#[derive(Clone, Debug)]
pub struct JointTuple<S: Field> {
    pub flats: Vec<usize>,
    pub witness: Witness<S>,
}

/// Joints in preassigned order, the distinct flats through them, and every
/// joint's witness tuples. `chosen[p]` is the tuple whose witness charts
/// feed the γ-sets.
#[derive(Clone, Debug)]
pub struct VanishingSetup<S: Field> {
    pub h: Hypergraph,
    pub joints: Vec<Vec<S>>,
    pub encodings: Vec<String>,
    pub flats: Vec<Flat<S>>,
    pub on_flat: Vec<Vec<usize>>,
    pub through: Vec<Vec<usize>>,
    pub tuples: Vec<Vec<JointTuple<S>>>,
    pub chosen: Vec<usize>,
    pub order_digest: u64,
}

impl<S: Field> VanishingSetup<S> {
    /// Sort joints by canonical encoding, merge geometrically equal flats and
    /// enumerate witness tuples. A point without a tuple is `ChartMissing`.
    pub fn prepare(
        h: &Hypergraph,
        config: &JointsConfiguration<S>,
        cap: usize,
        trials: usize,
        seed: u64,
        mode: ExecMode,
    ) -> Result<Self> {
        config.check_profile(h)?;
        let mut sorted = config.clone();
        sorted.normalize_joints();
        let joints = sorted.joints.clone();
        let encodings: Vec<String> = joints.iter().map(|p| encode_point(p)).collect();
        let raw = joint_tuples(h, &sorted, cap, trials, seed, mode)?;

        let mut keyed: Vec<(String, Flat<S>)> = Vec::new();
        let mut seen: HashMap<Flat<S>, ()> = HashMap::new();
        for fam in &sorted.families {
            for f in fam {
                if seen.insert(f.clone(), ()).is_none() && joints.iter().any(|p| f.contains(p)) {
                    keyed.push((f.encode(), f.clone()));
                }
            }
        }
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        let flats: Vec<Flat<S>> = keyed.into_iter().map(|k| k.1).collect();
        let position: HashMap<&Flat<S>, usize> = flats.iter().enumerate().map(|(i, f)| (f, i)).collect();
        let on_flat: Vec<Vec<usize>> =
            flats.iter().map(|f| (0..joints.len()).filter(|&p| f.contains(&joints[p])).collect()).collect();
        let mut through = vec![Vec::new(); joints.len()];
        for (fi, ps) in on_flat.iter().enumerate() {
            for &p in ps {
                through[p].push(fi);
            }
        }
        let mut tuples = Vec::with_capacity(joints.len());
        for (p, list) in raw.into_iter().enumerate() {
            if list.is_empty() {
                return Err(Error::ChartMissing(p));
            }
            tuples.push(
                list.into_iter()
                    .map(|t| JointTuple {
                        flats: t
                            .flats
                            .iter()
                            .enumerate()
                            .map(|(e, &i)| position[&sorted.family(h.color(e))[i]])
                            .collect(),
                        witness: t.witness,
                    })
                    .collect(),
            );
        }
        let order_digest = hash64(&encodings.join(";"));
        Ok(Self { h: h.clone(), chosen: vec![0; joints.len()], joints, encodings, flats, on_flat, through, tuples, order_digest })
    }

    pub fn d(&self) -> usize {
        self.h.d()
    }

    pub fn num_joints(&self) -> usize {
        self.joints.len()
    }

    pub fn chosen_tuple(&self, p: usize) -> &JointTuple<S> {
        &self.tuples[p][self.chosen[p]]
    }

    /// Flats appearing in some tuple of `T_p`.
    pub fn used_by(&self, p: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.tuples[p].iter().flat_map(|t| t.flats.iter().copied()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Whether every bipartition of the joints is crossed by a flat used on both sides.
    pub fn is_connected(&self) -> bool {
        let n = self.num_joints();
        if n == 0 {
            return true;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        let mut users: Vec<Vec<usize>> = vec![Vec::new(); self.flats.len()];
        for p in 0..n {
            for f in self.used_by(p) {
                users[f].push(p);
            }
        }
        for us in users {
            for w in us.windows(2) {
                let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                parent[a] = b;
            }
        }
        let root = find(&mut parent, 0);
        (0..n).all(|p| find(&mut parent, p) == root)
    }

    fn chart_for(&self, p: usize, f: usize, source: ChartSource) -> Chart<S> {
        match source {
            ChartSource::Witness(e) => Chart::from_witness(&self.chosen_tuple(p).witness, self.h.edge(e)),
            ChartSource::Canonical => Chart::canonical(&self.flats[f], &self.joints[p]),
        }
    }

    fn default_source(&self, p: usize, f: usize) -> ChartSource {
        match self.chosen_tuple(p).flats.iter().position(|&x| x == f) {
            Some(e) => ChartSource::Witness(e),
            None => ChartSource::Canonical,
        }
    }

    fn charts_on(&self, f: usize, overrides: &[(usize, ChartSource)]) -> Vec<JointChart<S>> {
        self.on_flat[f]
            .iter()
            .map(|&p| {
                let source =
                    overrides.iter().find(|o| o.0 == p).map(|o| o.1).unwrap_or_else(|| self.default_source(p, f));
                JointChart { joint: p, chart: Some(self.chart_for(p, f, source)), source }
            })
            .collect()
    }

    /// Ledger for one flat with default charts.
    pub fn ledger_for(&self, f: usize, alpha: &Handicap, n: usize) -> Result<BasisLedger> {
        compute_b_counts(&self.flats[f], f, &self.charts_on(f, &[]), alpha, n, self.order_digest)
    }

    /// One ledger per flat (index = flat index), followed by extra ledgers
    /// for joints whose chosen tuple places one flat on several edges.
    pub fn build_ledgers(&self, alpha: &Handicap, n: usize, mode: ExecMode) -> Result<Vec<BasisLedger>> {
        if alpha.len() != self.num_joints() {
            return Err(Error::SizeMismatch(format!("{} handicap entries for {} joints", alpha.len(), self.num_joints())));
        }
        let mut jobs: Vec<(usize, Vec<(usize, ChartSource)>)> = (0..self.flats.len()).map(|f| (f, Vec::new())).collect();
        for p in 0..self.num_joints() {
            let t = self.chosen_tuple(p);
            for (e, &f) in t.flats.iter().enumerate() {
                if t.flats[..e].contains(&f) {
                    jobs.push((f, vec![(p, ChartSource::Witness(e))]));
                }
            }
        }
        par::map(mode, &jobs, |(f, ov)| {
            compute_b_counts(&self.flats[*f], *f, &self.charts_on(*f, ov), alpha, n, self.order_digest)
        })
        .into_iter()
        .collect()
    }

    /// Per-edge γ-sets `G_{p,e}` for joint `p`, read from ledgers whose chart
    /// for `p` is `A_{p,e}`.
    pub fn edge_gsets(&self, ledgers: &[BasisLedger], p: usize) -> Result<Vec<Vec<Vec<u32>>>> {
        let t = self.chosen_tuple(p);
        t.flats
            .iter()
            .enumerate()
            .map(|(e, &f)| {
                ledgers
                    .iter()
                    .filter(|l| l.flat_index == f)
                    .find_map(|l| l.local(p).filter(|&i| l.sources[i] == ChartSource::Witness(e)).map(|i| l.gsets[i].clone()))
                    .ok_or(Error::ChartMissing(p))
            })
            .collect()
    }

    /// `B_{p,F}` for every flat through every joint, from default ledgers.
    pub fn b_counts(&self, ledgers: &[BasisLedger]) -> Vec<HashMap<usize, usize>> {
        let mut out = vec![HashMap::new(); self.num_joints()];
        for l in ledgers.iter().take(self.flats.len()) {
            for (i, &p) in l.joints.iter().enumerate() {
                out[p].insert(l.flat_index, l.b_local(i));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{generic_hyperplanes, generically_induced};
    use crate::extremal::SimpleHypergraph;
    use crate::field::Gf61;

    pub(crate) fn k3_setup(m: usize) -> VanishingSetup<Gf61> {
        let h = Hypergraph::complete_codim1(3);
        let host = SimpleHypergraph::complete(m, 2);
        let fam = generic_hyperplanes::<Gf61>(m, 3, 7).unwrap();
        let cfg = generically_induced(&host, &h, &fam).unwrap();
        VanishingSetup::prepare(&h, &cfg, 1000, 8, 3, ExecMode::Sequential).unwrap()
    }

    #[test]
    fn k3_setup_shape() {
        let s = k3_setup(4);
        assert_eq!(s.num_joints(), 4);
        assert_eq!(s.flats.len(), 6);
        assert!(s.on_flat.iter().all(|v| v.len() == 2));
        assert!(s.tuples.iter().all(|t| t.len() == 6));
        assert!(s.is_connected());
        let leds = s.build_ledgers(&Handicap::zero(4), 3, ExecMode::Sequential).unwrap();
        assert_eq!(leds.len(), 6);
        assert!(leds.iter().all(|l| l.total() == 4));
        for p in 0..4 {
            let g = s.edge_gsets(&leds, p).unwrap();
            assert_eq!(g.len(), 3);
        }
    }
}
