//! Joints configurations and the three builders: hyperplane-induced,
//! projected, and axis-parallel.

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::extremal::{find_copy, SimpleHypergraph};
use crate::field::Field;
use crate::flat::{encode_point, Flat};
use crate::hypergraph::{full_mask, members, Hypergraph};
use crate::linalg::{mat_vec, Matrix};
use crate::par::{self, ExecMode};
use crate::witness::{witness_check, WitnessOutcome};

/// Retry cap for degenerate random projections.
pub const PROJECTION_RETRIES: usize = 16;

/// Randomized witness trials used when asserting constructed joints.
pub const ASSERT_TRIALS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConfigKind {
    Generic,
    Projected,
    AxisParallel,
    Custom,
}

impl ConfigKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ConfigKind::Generic => "generic",
            ConfigKind::Projected => "projected",
            ConfigKind::AxisParallel => "axis",
            ConfigKind::Custom => "custom",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "generic" => Ok(ConfigKind::Generic),
            "projected" => Ok(ConfigKind::Projected),
            "axis" | "axis-parallel" => Ok(ConfigKind::AxisParallel),
            "custom" => Ok(ConfigKind::Custom),
            _ => Err(Error::Parse(format!("unknown configuration kind {s:?}"))),
        }
    }
}

/// Point set `J` and one flat multiset per color. Repeated flats in a family
/// are distinct members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointsConfiguration<S: Field> {
    pub d: usize,
    pub kind: ConfigKind,
    pub families: Vec<Vec<Flat<S>>>,
    pub joints: Vec<Vec<S>>,
    /// Host edge behind each flat, for hyperplane-induced configurations.
    pub flat_labels: Option<Vec<Vec<u64>>>,
    /// Host vertex set behind each joint, for hyperplane-induced configurations.
    pub joint_labels: Option<Vec<u64>>,
}

impl<S: Field> JointsConfiguration<S> {
    pub fn new(d: usize, families: Vec<Vec<Flat<S>>>, joints: Vec<Vec<S>>) -> Self {
        Self { d, kind: ConfigKind::Custom, families, joints, flat_labels: None, joint_labels: None }
    }

    pub fn family(&self, color: usize) -> &[Flat<S>] {
        &self.families[color - 1]
    }

    pub fn family_sizes(&self) -> Vec<usize> {
        self.families.iter().map(Vec::len).collect()
    }

    /// Indices of the flats of `color` passing through `p`.
    pub fn flats_through(&self, color: usize, p: &[S]) -> Vec<usize> {
        self.family(color).iter().enumerate().filter(|(_, f)| f.contains(p)).map(|(i, _)| i).collect()
    }

    /// Check that every flat of color `i` has dimension `k_i`.
    pub fn check_profile(&self, h: &Hypergraph) -> Result<()> {
        let profile = h.validate_uniform_coloring()?;
        if self.families.len() != h.num_colors() {
            return Err(Error::SizeMismatch(format!(
                "{} flat families for {} colors",
                self.families.len(),
                h.num_colors()
            )));
        }
        for c in 1..=h.num_colors() {
            let e = h.edges_of_color(c)[0];
            if self.family(c).iter().any(|f| f.dim() != profile.dim(c) || f.ambient() != self.d) {
                return Err(Error::DimensionMismatch(e));
            }
        }
        Ok(())
    }

    /// Joints sorted and deduplicated by canonical point encoding.
    pub fn normalize_joints(&mut self) {
        let mut keyed: Vec<(String, Vec<S>, Option<u64>)> = self
            .joints
            .drain(..)
            .enumerate()
            .map(|(i, p)| (encode_point(&p), p, self.joint_labels.as_ref().map(|l| l[i])))
            .collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        keyed.dedup_by(|a, b| a.0 == b.0);
        if self.joint_labels.is_some() {
            self.joint_labels = Some(keyed.iter().map(|k| k.2.unwrap()).collect());
        }
        self.joints = keyed.into_iter().map(|k| k.1).collect();
    }
}

/// `m` hyperplanes in `F^D` on the moment curve: `H_i = {x : Σ_k x_k t_i^k = t_i^D}`.
/// The `D` hyperplanes indexed by `A` meet in the coefficient vector of the
/// monic polynomial with roots `{t_a : a ∈ A}`, which lies on `H_j` exactly
/// when `j ∈ A`.
#[derive(Clone, Debug)]
pub struct HyperplaneFamily<S: Field> {
    pub dim: usize,
    pub params: Vec<S>,
    pub normals: Matrix<S>,
    pub offsets: Vec<S>,
}

fn distinct_params<S: Field>(m: usize, seed: u64) -> Vec<S> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(m);
    let spread = 4 * m as i64 + 4;
    while out.len() < m {
        let t = match S::order() {
            Some(_) => S::random(&mut rng),
            None => S::from_i64(rng.gen_range(-spread..=spread)),
        };
        if seen.insert(t.clone()) {
            out.push(t);
        }
    }
    out
}

pub fn generic_hyperplanes<S: Field>(m: usize, dim: usize, seed: u64) -> Result<HyperplaneFamily<S>> {
    if dim == 0 || m < dim {
        return Err(Error::Invalid(format!("need m >= D >= 1, got m={m}, D={dim}")));
    }
    if let Some(q) = S::order() {
        if q <= m as u64 {
            return Err(Error::FieldTooSmall { needed: m });
        }
    }
    let params: Vec<S> = distinct_params(m, seed);
    let mut normals = Vec::with_capacity(m);
    let mut offsets = Vec::with_capacity(m);
    for t in &params {
        let mut row = Vec::with_capacity(dim);
        let mut pw = S::one();
        for _ in 0..dim {
            row.push(pw.clone());
            pw = pw * t.clone();
        }
        normals.push(row);
        offsets.push(pw);
    }
    Ok(HyperplaneFamily { dim, params, normals, offsets })
}

impl<S: Field> HyperplaneFamily<S> {
    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    /// `∩_{j ∈ mask} H_j` for a mask over hyperplane labels `1..=m`.
    pub fn flat_for(&self, mask: u64) -> Flat<S> {
        let idx: Vec<usize> = members(mask).map(|j| j - 1).collect();
        let n: Matrix<S> = idx.iter().map(|&i| self.normals[i].clone()).collect();
        let c: Vec<S> = idx.iter().map(|&i| self.offsets[i].clone()).collect();
        Flat::from_equations(&n, &c, self.dim).expect("hyperplanes in general position meet")
    }

    /// The common point of `D` hyperplanes: coefficients of `t^D - Π (t - t_a)`.
    pub fn point_for(&self, mask: u64) -> Vec<S> {
        // poly holds coefficients of Π (t - t_a), lowest degree first
        let mut poly = vec![S::one()];
        for a in members(mask) {
            let ta = self.params[a - 1].clone();
            let mut next = vec![S::zero(); poly.len() + 1];
            for (k, c) in poly.iter().enumerate() {
                next[k + 1] = next[k + 1].clone() + c.clone();
                next[k] = next[k].clone() - c.clone() * ta.clone();
            }
            poly = next;
        }
        poly.truncate(self.dim);
        poly.into_iter().map(|c| -c).collect()
    }

    /// Exhaustive certificate: every `D`-subset of normals has full rank and
    /// every point lies on exactly its own hyperplanes.
    pub fn verify_general_position(&self) -> bool {
        let m = self.len();
        if m > 20 {
            return true;
        }
        crate::extremal::k_subsets(m, self.dim).all(|a| {
            let n: Matrix<S> = members(a).map(|j| self.normals[j - 1].clone()).collect();
            if crate::linalg::rank(&n) != self.dim {
                return false;
            }
            let p = self.point_for(a);
            (1..=m).all(|j| {
                let on = crate::linalg::dot(&self.normals[j - 1], &p) == self.offsets[j - 1];
                on == (a >> (j - 1) & 1 == 1)
            })
        })
    }
}

fn check_host_sizes(host: &SimpleHypergraph, sizes: &HashSet<usize>) -> Result<()> {
    if let Some(e) = host.edges().iter().find(|e| !sizes.contains(&(e.count_ones() as usize))) {
        return Err(Error::SizeMismatch(format!("host edge of size {} matches no pattern color", e.count_ones())));
    }
    Ok(())
}

struct Upstairs<S: Field> {
    families: Vec<Vec<Flat<S>>>,
    flat_labels: Vec<Vec<u64>>,
    joints: Vec<Vec<S>>,
    joint_labels: Vec<u64>,
    /// Per joint, per pattern edge: index of its flat in the edge's family.
    tuples: Vec<Vec<usize>>,
}

/// Families indexed by pattern color; each flat is `∩_{j∈e} H_j` over host
/// edges `e` of the color's size. Joints are the points of `D`-sets whose
/// induced host subgraph contains a copy of `pattern`.
fn build_upstairs<S: Field>(
    host: &SimpleHypergraph,
    h: &Hypergraph,
    pattern: &Hypergraph,
    family: &HyperplaneFamily<S>,
    mode: ExecMode,
) -> Result<Upstairs<S>> {
    let profile = h.validate_uniform_coloring()?;
    let d_up = pattern.d();
    if family.dim != d_up {
        return Err(Error::SizeMismatch(format!("hyperplanes live in dimension {}, need {d_up}", family.dim)));
    }
    if family.len() < host.vertices() {
        return Err(Error::SizeMismatch(format!("{} hyperplanes for {} host vertices", family.len(), host.vertices())));
    }
    let up_size = |c: usize| profile.edge_size(c) + (d_up - h.d());
    let sizes: HashSet<usize> = (1..=h.num_colors()).map(up_size).collect();
    check_host_sizes(host, &sizes)?;
    let mut families = Vec::new();
    let mut flat_labels = Vec::new();
    let mut flat_index: Vec<HashMap<u64, usize>> = Vec::new();
    for c in 1..=h.num_colors() {
        let labels: Vec<u64> =
            host.edges().iter().copied().filter(|e| e.count_ones() as usize == up_size(c)).collect();
        let flats = par::map(mode, &labels, |&e| family.flat_for(e));
        flat_index.push(labels.iter().enumerate().map(|(i, &e)| (e, i)).collect());
        families.push(flats);
        flat_labels.push(labels);
    }
    let sets: Vec<u64> = crate::extremal::k_subsets(host.vertices(), d_up).collect();
    let found: Vec<Option<(u64, Vec<usize>)>> = par::map(mode, &sets, |&a| {
        let sub = host.induced(a);
        let verts: Vec<usize> = members(a).collect();
        find_copy(&sub, pattern).map(|sigma| {
            let tuple = (0..pattern.num_edges())
                .map(|i| {
                    let img = members(pattern.edge(i)).fold(0u64, |m, j| m | 1u64 << (verts[sigma[j - 1] - 1] - 1));
                    flat_index[pattern.color(i) - 1][&img]
                })
                .collect();
            (a, tuple)
        })
    });
    let mut joints = Vec::new();
    let mut joint_labels = Vec::new();
    let mut tuples = Vec::new();
    for (a, t) in found.into_iter().flatten() {
        joints.push(family.point_for(a));
        joint_labels.push(a);
        tuples.push(t);
    }
    Ok(Upstairs { families, flat_labels, joints, joint_labels, tuples })
}

fn assert_witnesses<S: Field>(
    h: &Hypergraph,
    families: &[Vec<Flat<S>>],
    joints: &[Vec<S>],
    tuples: &[Vec<usize>],
    seed: u64,
    mode: ExecMode,
) -> Result<bool> {
    let ok = par::map_range(mode, joints.len(), |i| {
        let flats: Vec<Flat<S>> =
            tuples[i].iter().enumerate().map(|(e, &f)| families[h.color(e) - 1][f].clone()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(crate::witness::derive_seed(seed, i as u64));
        matches!(witness_check(h, &joints[i], &flats, ASSERT_TRIALS, &mut rng), Ok(WitnessOutcome::Witness(_)))
    });
    Ok(ok.into_iter().all(|b| b))
}

/// Configuration induced by hyperplanes in general position and a host.
pub fn generically_induced<S: Field>(
    host: &SimpleHypergraph,
    h: &Hypergraph,
    family: &HyperplaneFamily<S>,
) -> Result<JointsConfiguration<S>> {
    let mode = par::default_mode();
    let up = build_upstairs(host, h, h, family, mode)?;
    if !assert_witnesses(h, &up.families, &up.joints, &up.tuples, 0, mode)? {
        return Err(Error::GenericityFailure(0));
    }
    let mut cfg = JointsConfiguration {
        d: h.d(),
        kind: ConfigKind::Generic,
        families: up.families,
        joints: up.joints,
        flat_labels: Some(up.flat_labels),
        joint_labels: Some(up.joint_labels),
    };
    cfg.normalize_joints();
    Ok(cfg)
}

/// Push an upstairs configuration through `pi` (a `d × (d+t)` matrix) and
/// check it stayed generic. Returns `None` on any degeneracy.
fn project_with<S: Field>(
    up: &Upstairs<S>,
    h: &Hypergraph,
    pi: &Matrix<S>,
    seed: u64,
    mode: ExecMode,
) -> Result<Option<JointsConfiguration<S>>> {
    let d = h.d();
    let zero = vec![S::zero(); d];
    let mut families = Vec::new();
    for (c, fam) in up.families.iter().enumerate() {
        let k = h.validate_uniform_coloring()?.dim(c + 1);
        let imgs = par::map(mode, fam, |f| f.map_affine(pi, &zero));
        if imgs.iter().any(|f| f.dim() != k) {
            return Ok(None);
        }
        let distinct: HashSet<&Flat<S>> = imgs.iter().collect();
        if distinct.len() != imgs.len() {
            return Ok(None);
        }
        families.push(imgs);
    }
    let joints: Vec<Vec<S>> = up.joints.iter().map(|p| mat_vec(pi, p)).collect();
    let distinct: HashSet<&Vec<S>> = joints.iter().collect();
    if distinct.len() != joints.len() {
        return Ok(None);
    }
    if !assert_witnesses(h, &families, &joints, &up.tuples, seed, mode)? {
        return Ok(None);
    }
    let mut cfg = JointsConfiguration {
        d,
        kind: ConfigKind::Projected,
        families,
        joints,
        flat_labels: Some(up.flat_labels.clone()),
        joint_labels: Some(up.joint_labels.clone()),
    };
    cfg.normalize_joints();
    Ok(Some(cfg))
}

/// Projected configuration with an explicit projection matrix.
pub fn projected_with_matrix<S: Field>(
    host: &SimpleHypergraph,
    h: &Hypergraph,
    t: usize,
    family: &HyperplaneFamily<S>,
    pi: &Matrix<S>,
) -> Result<JointsConfiguration<S>> {
    let mode = par::default_mode();
    let cone = h.cone(t)?;
    let up = build_upstairs(host, h, &cone, family, mode)?;
    if pi.len() != h.d() || pi.iter().any(|r| r.len() != h.d() + t) {
        return Err(Error::SizeMismatch("projection must be d x (d+t)".into()));
    }
    project_with(&up, h, pi, 0, mode)?.ok_or(Error::GenericityFailure(1))
}

/// Configuration from hyperplanes in `F^{d+t}` and a random projection to
/// `F^d`, resampled on degeneracy. `t = 0` uses the identity.
pub fn projected_generically_induced<S: Field>(
    host: &SimpleHypergraph,
    h: &Hypergraph,
    t: usize,
    family: &HyperplaneFamily<S>,
    projection_seed: u64,
) -> Result<JointsConfiguration<S>> {
    let mode = par::default_mode();
    let cone = h.cone(t)?;
    let up = build_upstairs(host, h, &cone, family, mode)?;
    let d = h.d();
    for attempt in 0..PROJECTION_RETRIES {
        let pi: Matrix<S> = if t == 0 {
            crate::linalg::identity(d)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(crate::witness::derive_seed(projection_seed, attempt as u64));
            (0..d).map(|_| (0..d + t).map(|_| S::random(&mut rng)).collect()).collect()
        };
        if let Some(cfg) = project_with(&up, h, &pi, projection_seed, mode)? {
            return Ok(cfg);
        }
        if t == 0 {
            break;
        }
    }
    Err(Error::GenericityFailure(PROJECTION_RETRIES))
}

/// Axis-parallel configuration from nonnegative integer tables.
///
/// `tables[i]` lists `f_i` over `S^{I_i}` in lexicographic order (first
/// coordinate of `I_i` varies slowest). The ground set `S` is `0..s`.
#[derive(Clone, Debug)]
pub struct AxisInstance {
    pub d: usize,
    pub s: usize,
    pub subsets: Vec<Vec<usize>>,
    pub tables: Vec<Vec<i64>>,
}

impl AxisInstance {
    /// Pattern hypergraph: one edge `I_i` per function, each with its own color.
    pub fn pattern(&self) -> Result<Hypergraph> {
        let colors: Vec<usize> = (1..=self.subsets.len()).collect();
        Hypergraph::new(self.d, &self.subsets, Some(&colors))
    }

    /// Index of the entry of `f_i` at the projection of `x ∈ S^d`.
    pub fn table_index(&self, i: usize, x: &[usize]) -> usize {
        self.subsets[i].iter().fold(0, |acc, &j| acc * self.s + x[j - 1])
    }

    /// All `x ∈ S^d` with `Π f_i(x_{I_i}) > 0`, in lexicographic order.
    pub fn support(&self) -> Vec<Vec<usize>> {
        let total = self.s.pow(self.d as u32);
        (0..total)
            .map(|mut code| {
                let mut x = vec![0; self.d];
                for j in (0..self.d).rev() {
                    x[j] = code % self.s;
                    code /= self.s;
                }
                x
            })
            .filter(|x| (0..self.subsets.len()).all(|i| self.tables[i][self.table_index(i, x)] > 0))
            .collect()
    }
}

pub fn axis_parallel_from_functions<S: Field>(inst: &AxisInstance) -> Result<JointsConfiguration<S>> {
    let d = inst.d;
    if inst.subsets.len() != inst.tables.len() {
        return Err(Error::SizeMismatch("one table per subset".into()));
    }
    if let Some(q) = S::order() {
        if q < inst.s as u64 {
            return Err(Error::FieldTooSmall { needed: inst.s - 1 });
        }
    }
    let covered = inst.subsets.iter().flatten().fold(0u64, |m, &j| m | 1u64 << (j - 1));
    if covered != full_mask(d) {
        return Err(Error::Invalid("every coordinate must lie in some subset".into()));
    }
    let mut families = Vec::new();
    for (sub, table) in inst.subsets.iter().zip(&inst.tables) {
        let want = inst.s.pow(sub.len() as u32);
        if table.len() != want {
            return Err(Error::SizeMismatch(format!("table has {} entries, need {want}", table.len())));
        }
        if let Some(&v) = table.iter().find(|&&v| v < 0) {
            return Err(Error::NegativeValue(v));
        }
        let dirs: Matrix<S> = (1..=d)
            .filter(|j| !sub.contains(j))
            .map(|j| (1..=d).map(|c| if c == j { S::one() } else { S::zero() }).collect())
            .collect();
        let mut fam = Vec::new();
        for (code, &copies) in table.iter().enumerate() {
            let mut base = vec![S::zero(); d];
            let mut rest = code;
            for &j in sub.iter().rev() {
                base[j - 1] = S::from_i64((rest % inst.s) as i64);
                rest /= inst.s;
            }
            let f = Flat::new(base, dirs.clone());
            for _ in 0..copies {
                fam.push(f.clone());
            }
        }
        families.push(fam);
    }
    let joints = inst
        .support()
        .into_iter()
        .map(|x| x.into_iter().map(|v| S::from_i64(v as i64)).collect())
        .collect();
    let mut cfg = JointsConfiguration { d, kind: ConfigKind::AxisParallel, families, joints, flat_labels: None, joint_labels: None };
    cfg.normalize_joints();
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Gf, Gf61};
    use crate::rational::Rational;

    #[test]
    fn moment_curve_points() {
        let fam: HyperplaneFamily<Rational> = generic_hyperplanes(4, 3, 0).unwrap();
        assert!(fam.verify_general_position());
        let pts: HashSet<Vec<Rational>> = crate::extremal::k_subsets(4, 3).map(|a| fam.point_for(a)).collect();
        assert_eq!(pts.len(), 4);
        for a in crate::extremal::k_subsets(4, 3) {
            assert!(fam.flat_for(a).contains(&fam.point_for(a)));
            assert_eq!(fam.flat_for(a).dim(), 0);
        }
        let single: HyperplaneFamily<Gf61> = generic_hyperplanes(3, 3, 5).unwrap();
        assert!(single.verify_general_position());
    }

    #[test]
    fn small_field_guard() {
        let fam = generic_hyperplanes::<Gf<7>>(5, 3, 1).unwrap();
        assert!(fam.verify_general_position());
        assert_eq!(generic_hyperplanes::<Gf<5>>(5, 3, 1).unwrap_err(), Error::FieldTooSmall { needed: 5 });
    }

    #[test]
    fn axis_grid() {
        let inst = AxisInstance { d: 2, s: 2, subsets: vec![vec![1], vec![2]], tables: vec![vec![1, 1], vec![1, 1]] };
        let cfg: JointsConfiguration<Rational> = axis_parallel_from_functions(&inst).unwrap();
        assert_eq!(cfg.joints.len(), 4);
        assert_eq!(cfg.family_sizes(), vec![2, 2]);
        let inst = AxisInstance { d: 2, s: 2, subsets: vec![vec![1], vec![2]], tables: vec![vec![2, 0], vec![1, 1]] };
        let cfg: JointsConfiguration<Rational> = axis_parallel_from_functions(&inst).unwrap();
        assert_eq!(cfg.family(1).len(), 2);
        assert_eq!(cfg.family(1)[0], cfg.family(1)[1]);
        assert_eq!(cfg.joints.len(), 2);
        let bad = AxisInstance { d: 2, s: 2, subsets: vec![vec![1], vec![2]], tables: vec![vec![-1, 0], vec![1, 1]] };
        assert_eq!(axis_parallel_from_functions::<Rational>(&bad).unwrap_err(), Error::NegativeValue(-1));
    }
}
