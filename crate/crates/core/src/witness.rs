//! Witnesses for H-joints: deciding whether an invertible affine map sends
//! the coordinate subspaces `span{e_j : j ∉ e}` onto given flats through `p`.
//!
//! Such a map exists iff one can choose independent `v_j ∈ W_j`, where `W_j`
//! is the common direction space of the flats whose edge misses `j`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::JointsConfiguration;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::flat::{encode_point, intersect_flats, Flat};
use crate::hypergraph::Hypergraph;
use crate::linalg::{determinant, identity, nullspace, rank, Matrix};
use crate::par::{self, ExecMode};

/// Largest `d` for which the exhaustive subset test is offered.
pub const EXACT_MAX_D: usize = 12;

pub const DEFAULT_TRIALS: usize = 8;

/// Mix a base seed with an index so parallel work stays reproducible.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The affine map `x ↦ p + Σ x_j v_j`. `vectors[j-1]` is `v_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness<S: Field> {
    pub point: Vec<S>,
    pub vectors: Matrix<S>,
}

impl<S: Field> Witness<S> {
    /// Columns `v_j` for `j ∉ e`, ascending: the chart of `F_{p,e}`.
    pub fn chart_columns(&self, edge: u64) -> Matrix<S> {
        (1..=self.vectors.len()).filter(|j| edge >> (j - 1) & 1 == 0).map(|j| self.vectors[j - 1].clone()).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum WitnessOutcome<S: Field> {
    Witness(Witness<S>),
    /// No independent choice was found. `false_negative_bound` bounds the
    /// probability that one exists anyway; it is 0 when some `W_j` is zero.
    NoWitness { false_negative_bound: f64 },
}

impl<S: Field> WitnessOutcome<S> {
    pub fn is_witness(&self) -> bool {
        matches!(self, WitnessOutcome::Witness(_))
    }
}

fn validate<S: Field>(h: &Hypergraph, p: &[S], flats: &[Flat<S>]) -> Result<()> {
    let d = h.d();
    if flats.len() != h.num_edges() || p.len() != d {
        return Err(Error::SizeMismatch(format!("{} flats for {} edges", flats.len(), h.num_edges())));
    }
    for (e, f) in flats.iter().enumerate() {
        if f.ambient() != d || f.dim() != d - h.edge_size(e) {
            return Err(Error::DimensionMismatch(e));
        }
        if !f.contains(p) {
            return Err(Error::PointNotOnFlat(e));
        }
    }
    Ok(())
}

/// Bases of `W_1..W_d`.
pub fn transversal_spaces<S: Field>(h: &Hypergraph, flats: &[Flat<S>]) -> Vec<Matrix<S>> {
    let d = h.d();
    (1..=d)
        .map(|j| {
            let mut normals = Vec::new();
            for (e, f) in flats.iter().enumerate() {
                if h.edge(e) >> (j - 1) & 1 == 0 {
                    normals.extend(nullspace(f.directions(), d));
                }
            }
            if normals.is_empty() {
                identity(d)
            } else {
                nullspace(&normals, d)
            }
        })
        .collect()
}

/// Randomized witness search: draw `v_j` uniformly from `W_j` and test the
/// determinant, up to `trials` times.
pub fn witness_check<S: Field, R: Rng + ?Sized>(
    h: &Hypergraph,
    p: &[S],
    flats: &[Flat<S>],
    trials: usize,
    rng: &mut R,
) -> Result<WitnessOutcome<S>> {
    validate(h, p, flats)?;
    let d = h.d();
    let spaces = transversal_spaces(h, flats);
    if spaces.iter().any(|w| w.is_empty()) {
        return Ok(WitnessOutcome::NoWitness { false_negative_bound: 0.0 });
    }
    for _ in 0..trials {
        let vectors: Matrix<S> = spaces
            .iter()
            .map(|basis| {
                let mut v = vec![S::zero(); d];
                for b in basis {
                    let c = S::random(rng);
                    for (x, y) in v.iter_mut().zip(b) {
                        *x = x.clone() + c.clone() * y.clone();
                    }
                }
                v
            })
            .collect();
        if !determinant(&vectors).is_zero() {
            return Ok(WitnessOutcome::Witness(Witness { point: p.to_vec(), vectors }));
        }
    }
    let per_trial = (d as f64 / S::sample_set_size()).min(1.0);
    Ok(WitnessOutcome::NoWitness { false_negative_bound: per_trial.powi(trials as i32) })
}

/// Deterministic decision by the subset condition: independent `v_j ∈ W_j`
/// exist iff `dim Σ_{j∈J} W_j ≥ |J|` for every nonempty `J ⊆ [d]`.
pub fn witness_exists_exact<S: Field>(h: &Hypergraph, p: &[S], flats: &[Flat<S>]) -> Result<bool> {
    validate(h, p, flats)?;
    let d = h.d();
    if d > EXACT_MAX_D {
        return Err(Error::Invalid(format!("exact witness test limited to d <= {EXACT_MAX_D}")));
    }
    let spaces = transversal_spaces(h, flats);
    Ok((1u64..1 << d).all(|mask| {
        let rows: Matrix<S> = (0..d).filter(|j| mask >> j & 1 == 1).flat_map(|j| spaces[j].iter().cloned()).collect();
        rank(&rows) >= mask.count_ones() as usize
    }))
}

/// One member of `T_p`: a flat index (into the edge's color family) per edge.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessTuple<S: Field> {
    pub flats: Vec<usize>,
    pub witness: Witness<S>,
}

/// All tuples `(F_e)` through `p` that admit a witness.
pub fn enumerate_witness_tuples<S: Field>(
    h: &Hypergraph,
    p: &[S],
    config: &JointsConfiguration<S>,
    cap: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<WitnessTuple<S>>> {
    let choices: Vec<Vec<usize>> = (0..h.num_edges())
        .map(|e| {
            let k = h.d() - h.edge_size(e);
            config
                .flats_through(h.color(e), p)
                .into_iter()
                .filter(|&i| config.family(h.color(e))[i].dim() == k)
                .collect()
        })
        .collect();
    if choices.iter().any(Vec::is_empty) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; choices.len()];
    let mut counter = 0u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let pick: Vec<usize> = idx.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
        // the same flat member cannot serve two edges of one color
        let clash = (0..pick.len()).any(|a| (0..a).any(|b| h.color(a) == h.color(b) && pick[a] == pick[b]));
        if !clash {
            let flats: Vec<Flat<S>> =
                pick.iter().enumerate().map(|(e, &i)| config.family(h.color(e))[i].clone()).collect();
            let mut local = ChaCha8Rng::seed_from_u64(derive_seed(rng.gen(), counter));
            if let WitnessOutcome::Witness(w) = witness_check(h, p, &flats, trials, &mut local)? {
                if out.len() == cap {
                    return Err(Error::CapExceeded(cap));
                }
                out.push(WitnessTuple { flats: pick, witness: w });
            }
        }
        counter += 1;
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Ok(out);
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Whether `p` is a joint, by searching for one witness tuple.
pub fn is_joint<S: Field>(
    h: &Hypergraph,
    p: &[S],
    config: &JointsConfiguration<S>,
    trials: usize,
    seed: u64,
) -> Result<bool> {
    match enumerate_witness_tuples(h, p, config, 1, trials, seed) {
        Ok(t) => Ok(!t.is_empty()),
        Err(Error::CapExceeded(_)) => Ok(true),
        Err(e) => Err(e),
    }
}

/// Points of intersection of one flat per edge, collected as joint
/// candidates. Stops with `BudgetExceeded` after `budget` tuples.
pub fn candidate_points<S: Field>(h: &Hypergraph, config: &JointsConfiguration<S>, budget: usize) -> Result<Vec<Vec<S>>> {
    let sizes: Vec<usize> = (0..h.num_edges()).map(|e| config.family(h.color(e)).len()).collect();
    if sizes.iter().any(|&s| s == 0) {
        return Ok(Vec::new());
    }
    let mut idx = vec![0usize; sizes.len()];
    let mut seen = std::collections::BTreeMap::new();
    let mut used = 0usize;
    loop {
        used += 1;
        if used > budget {
            return Err(Error::BudgetExceeded(budget));
        }
        let flats: Vec<Flat<S>> = idx.iter().enumerate().map(|(e, &i)| config.family(h.color(e))[i].clone()).collect();
        if let Some(x) = intersect_flats(&flats) {
            if x.dim() == 0 {
                seen.entry(encode_point(x.basepoint())).or_insert_with(|| x.basepoint().to_vec());
            }
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Ok(seen.into_values().collect());
            }
            idx[pos] += 1;
            if idx[pos] < sizes[pos] {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// The candidates that are joints, sorted by canonical encoding.
pub fn detect_joints<S: Field>(
    h: &Hypergraph,
    config: &JointsConfiguration<S>,
    candidates: Option<&[Vec<S>]>,
    budget: usize,
    trials: usize,
    seed: u64,
    mode: ExecMode,
) -> Result<Vec<Vec<S>>> {
    let generated;
    let cands = match candidates {
        Some(c) => c,
        None => {
            generated = candidate_points(h, config, budget)?;
            &generated
        }
    };
    let verdicts = par::map_range(mode, cands.len(), |i| is_joint(h, &cands[i], config, trials, derive_seed(seed, i as u64)));
    let mut out: Vec<(String, Vec<S>)> = Vec::new();
    for (p, v) in cands.iter().zip(verdicts) {
        if v? {
            out.push((encode_point(p), p.clone()));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.dedup_by(|a, b| a.0 == b.0);
    Ok(out.into_iter().map(|x| x.1).collect())
}
