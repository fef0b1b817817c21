//! The acceptance battery. Each criterion returns its check records; the
//! `acceptance` test target and the `suite` subcommand both drive it.

use std::time::Instant;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::bounds::{
    geometric_shearer_audit, joint_tuples, multiplicity_bound, simple_bound, tuple_indices, SimpleBound,
};
use crate::config::{
    axis_parallel_from_functions, generic_hyperplanes, generically_induced, projected_generically_induced, AxisInstance,
    JointsConfiguration,
};
use crate::cover::{max_packing, rho_star, verify_cover};
use crate::entropy::{
    holder_check, loomis_whitney_check, shearer_check, subsets_pattern, tensor_power_trend, FiniteDistribution,
};
use crate::error::{Error, Result};
use crate::eta::{generic_eta_closed_form, DEFAULT_MAX_ITERS, DEFAULT_TOL};
use crate::extremal::{
    binom, count_inducing_sets, k_subsets, kruskal_katona_count, partial_shadow_check, SimpleHypergraph,
};
use crate::field::{Field, Gf61};
use crate::hypergraph::{constant_c, members, Hypergraph, WeightFunction};
use crate::par::ExecMode;
use crate::rational::{format_rational, ratio, Rational};
use crate::report::{inputs_digest, CheckRecord, Status, VerificationReport};
use crate::search::{search_m, SearchConfig, SearchMode, DEFAULT_RESTARTS, DEFAULT_WORK_LIMIT};
use crate::vanishing::{
    bounded_domain_sweep, default_delta, handicap_iteration, key_inequality_audit, lipschitz_check, monotonicity_check,
    run_engine, shift_invariance_check, Handicap, KeyInequalityCertificate, VanishingSetup,
};
use crate::vanishing::handicap::{Termination, DEFAULT_ADDITIVE_TOL, DEFAULT_FACTOR, DEFAULT_ROUNDS};
use crate::witness::{derive_seed, detect_joints, DEFAULT_TRIALS};

pub const SLACK_GUARD: f64 = 1e-9;

const TITLES: [&str; 11] = [
    "fractional cover exactness",
    "joints constant",
    "geometry matches combinatorics",
    "simple joints bound",
    "multiplicity bound",
    "geometric Shearer audit",
    "entropy inequalities",
    "Kruskal-Katona and partial shadow",
    "vanishing-engine lemmas",
    "handicap dynamic and key-inequality audit",
    "strict partial-shadow instance (stretch)",
];

pub const NUM_CRITERIA: usize = TITLES.len();

#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    pub mode: ExecMode,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { seed: 0, mode: ExecMode::Parallel }
    }
}

#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub id: usize,
    pub title: &'static str,
    pub stretch: bool,
    pub checks: Vec<CheckRecord>,
    pub seconds: f64,
}

impl CriterionOutcome {
    /// `FAIL` dominates, then `UNCONVERGED`, then `PASS`. A stretch item
    /// never reports `FAIL`.
    pub fn status(&self) -> Status {
        let has = |s: Status| self.checks.iter().any(|c| c.status == s);
        if has(Status::Fail) {
            Status::Fail
        } else if has(Status::Unconverged) {
            Status::Unconverged
        } else if self.stretch && has(Status::Info) {
            Status::Info
        } else {
            Status::Pass
        }
    }

    pub fn passed(&self) -> bool {
        self.status() != Status::Fail
    }
}

pub fn title(id: usize) -> Option<&'static str> {
    TITLES.get(id.wrapping_sub(1)).copied()
}

pub fn run_criterion(id: usize, opts: &SuiteOptions) -> Result<CriterionOutcome> {
    let title = title(id).ok_or_else(|| Error::Invalid(format!("no criterion {id}")))?;
    let seed = derive_seed(opts.seed, id as u64);
    let start = Instant::now();
    let res = match id {
        1 => c1_rho_star(),
        2 => c2_constant(),
        3 => c3_agreement(seed, opts.mode),
        4 => c4_simple_bound(seed),
        5 => c5_multiplicity(seed, opts.mode),
        6 => c6_geometric_shearer(seed, opts.mode),
        7 => c7_entropy(seed),
        8 => c8_shadow(seed, opts.mode),
        9 => c9_vanishing(seed, opts.mode),
        10 => c10_handicap(seed, opts.mode),
        _ => c11_strict(seed, opts.mode),
    };
    let mut checks = match res {
        Ok(c) => c,
        Err(e) => vec![CheckRecord::flag(format!("c{id}.error"), false, e.to_string())],
    };
    let stretch = id == 11;
    if stretch {
        for c in &mut checks {
            if c.status == Status::Fail {
                c.status = Status::Info;
                c.detail = Some(format!("stretch item, downgraded from FAIL: {}", c.detail.clone().unwrap_or_default()));
            }
        }
    }
    Ok(CriterionOutcome { id, title, stretch, checks, seconds: start.elapsed().as_secs_f64() })
}

/// Run the listed criteria in order (all of them when `ids` is empty).
pub fn run_suite(opts: &SuiteOptions, ids: &[usize]) -> Result<Vec<CriterionOutcome>> {
    let all: Vec<usize> = (1..=NUM_CRITERIA).collect();
    let ids = if ids.is_empty() { &all[..] } else { ids };
    ids.iter().map(|&id| run_criterion(id, opts)).collect()
}

pub fn suite_report(outcomes: &[CriterionOutcome], opts: &SuiteOptions) -> VerificationReport {
    let ids: Vec<u8> = outcomes.iter().map(|o| o.id as u8).collect();
    let mut r = VerificationReport::new("suite", inputs_digest(&[&ids, &opts.seed.to_le_bytes()]));
    r.seeds.push(opts.seed);
    for o in outcomes {
        for c in &o.checks {
            r.push(c.clone());
        }
    }
    r.timing.wall_seconds = outcomes.iter().map(|o| o.seconds).sum();
    r
}

fn k3() -> Hypergraph {
    Hypergraph::complete_codim1(3)
}

fn half_weights(edges: usize) -> WeightFunction {
    WeightFunction::uniform(edges, ratio(1, 2)).expect("positive weights")
}

fn generic_k3<S: Field>(m: usize, seed: u64) -> Result<JointsConfiguration<S>> {
    let fam = generic_hyperplanes::<S>(m, 3, seed)?;
    generically_induced(&SimpleHypergraph::complete(m, 2), &k3(), &fam)
}

/// A record that fails unless `lhs < rhs` strictly.
fn strict_less(name: impl Into<String>, lhs: f64, rhs: f64) -> CheckRecord {
    let rec = CheckRecord::from_slack(name, lhs, rhs, rhs - lhs, 0.0);
    if rhs - lhs > 0.0 {
        rec
    } else {
        rec.with_status(Status::Fail).with_detail("no strict decrease")
    }
}

fn c1_rho_star() -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    let mut cases: Vec<(String, Hypergraph, Rational)> =
        (3..=6).map(|d| (format!("K{d}"), Hypergraph::complete_codim1(d), ratio(d as i64, d as i64 - 1))).collect();
    cases.push(("C5".into(), Hypergraph::cycle(5), ratio(5, 2)));
    for (name, h, expect) in cases {
        let sol = rho_star(&h)?;
        let (dual, _) = max_packing(&h)?;
        verify_cover(&h, &sol.weights)?;
        let ok = sol.value == expect && dual == sol.value && sol.weights.total() == sol.value;
        out.push(CheckRecord::flag(
            format!("c1.rho_star.{name}"),
            ok,
            format!(
                "primal {} dual {} expected {}",
                format_rational(&sol.value),
                format_rational(&dual),
                format_rational(&expect)
            ),
        ));
    }
    Ok(out)
}

fn c2_constant() -> Result<Vec<CheckRecord>> {
    let target = 2f64.sqrt() / 3.0;
    let c = constant_c(&k3(), &half_weights(3))?;
    let err = (c.value - target).abs() / target;
    let mut out =
        vec![CheckRecord::from_slack("c2.constant.K3", c.value, target, 1e-12 - err, 0.0).with_detail(c.log2.to_text())];

    // K_3 plus a zero-weight copy of {1,2} in a second color
    let h = Hypergraph::new(3, &[vec![1, 2], vec![1, 3], vec![2, 3], vec![1, 2]], Some(&[1, 1, 1, 2]))?;
    let w = WeightFunction::new(vec![ratio(1, 2), ratio(1, 2), ratio(1, 2), <Rational as Zero>::zero()])?;
    let cz = constant_c(&h, &w)?;
    let errz = (cz.value - target).abs() / target;
    out.push(
        CheckRecord::from_slack("c2.constant.zero-weight", cz.value, target, 1e-12 - errz, 0.0)
            .with_detail("4-edge variant, the zero-weight edge contributes 1"),
    );
    // two disjoint edges on d = 4, one per color: 24 · (1/2)(1/2) = 6
    let h2 = Hypergraph::new(4, &[vec![1, 2], vec![3, 4]], Some(&[1, 2]))?;
    let c2 = constant_c(&h2, &WeightFunction::uniform(2, ratio(1, 1))?)?;
    out.push(CheckRecord::from_slack("c2.constant.disjoint", c2.value, 6.0, 1e-12 - (c2.value - 6.0).abs() / 6.0, 0.0));
    Ok(out)
}

fn random_host(rng: &mut ChaCha8Rng, v: usize, k: usize, p: f64) -> Result<SimpleHypergraph> {
    loop {
        let edges: Vec<u64> = k_subsets(v, k).filter(|_| rng.gen_bool(p)).collect();
        if !edges.is_empty() {
            return SimpleHypergraph::new(v, edges);
        }
    }
}

fn c3_agreement(seed: u64, mode: ExecMode) -> Result<Vec<CheckRecord>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = Vec::new();
    let mut total = 0u64;
    for i in 0..20u64 {
        let v = rng.gen_range(5..=7);
        let (h, k) = if i % 2 == 0 { (k3(), 2) } else { (Hypergraph::complete_codim1(4), 3) };
        let host = random_host(&mut rng, v, k, 0.6)?;
        let fam = generic_hyperplanes::<Gf61>(v, h.d(), derive_seed(seed, 100 + i))?;
        let cfg = generically_induced(&host, &h, &fam)?;
        let found = if k == 2 {
            detect_joints(&h, &cfg, None, 1_000_000, DEFAULT_TRIALS, derive_seed(seed, i), mode)?
        } else {
            let cands: Vec<Vec<Gf61>> = k_subsets(v, h.d()).map(|a| fam.point_for(a)).collect();
            detect_joints(&h, &cfg, Some(&cands), 0, DEFAULT_TRIALS, derive_seed(seed, i), mode)?
        };
        let count = count_inducing_sets(&host, &h, mode);
        total += count;
        if found.len() as u64 != count || cfg.joints.len() as u64 != count {
            mismatches.push(format!("host {i}: geometric {} combinatorial {count}", found.len()));
        }
    }
    let detail = if mismatches.is_empty() { format!("20 hosts, {total} joints in all") } else { mismatches.join("; ") };
    Ok(vec![CheckRecord::flag("c3.detect-vs-count", mismatches.is_empty(), detail)])
}

fn bound_record(name: &str, joints: usize, b: &SimpleBound) -> CheckRecord {
    let slack = b.bound - joints as f64;
    let mut rec = CheckRecord::from_slack(name, joints as f64, b.bound, slack, SLACK_GUARD * b.bound.max(1.0));
    if !b.holds {
        rec = rec.with_status(Status::Fail).with_detail("exact log comparison failed");
    }
    rec
}

fn c4_simple_bound(seed: u64) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    let h = k3();
    let w = half_weights(3);
    let mut ratios = Vec::new();
    for m in 4..=10 {
        let cfg = generic_k3::<Gf61>(m, derive_seed(seed, m as u64))?;
        let b = simple_bound(&h, &w, &cfg)?;
        let expect = binom(m as u64, 3) as usize;
        let mut rec = bound_record(&format!("c4.generic-K3.m{m}"), cfg.joints.len(), &b);
        if cfg.joints.len() != expect {
            rec = rec.with_status(Status::Fail).with_detail(format!("expected {expect} joints"));
        }
        out.push(rec);
        ratios.push(b.ratio);
    }
    let mono = ratios.windows(2).all(|r| r[1] >= r[0] * (1.0 - 1e-12));
    out.push(CheckRecord::flag(
        "c4.ratio-monotone",
        mono,
        format!("ratios {}", ratios.iter().map(|r| format!("{r:.6}")).collect::<Vec<_>>().join(" ")),
    ));
    // same counts over the rationals
    let mut agree = true;
    for m in 4..=6 {
        agree &= generic_k3::<Rational>(m, derive_seed(seed, m as u64))?.joints.len() == binom(m as u64, 3) as usize;
    }
    out.push(CheckRecord::flag("c4.rational-cross-check", agree, "m = 4..6 over Q"));

    // joints of 2-flats in F^6
    let h6 = Hypergraph::new(6, &[vec![1, 2, 3, 4], vec![1, 2, 5, 6], vec![3, 4, 5, 6]], None)?;
    let fam = generic_hyperplanes::<Gf61>(7, 6, derive_seed(seed, 60))?;
    let cfg = generically_induced(&SimpleHypergraph::complete(7, 4), &h6, &fam)?;
    let b = simple_bound(&h6, &half_weights(3), &cfg)?;
    out.push(bound_record("c4.two-flats-F6", cfg.joints.len(), &b));

    // the 5-cycle pattern, 3-flats in F^5
    let c5 = Hypergraph::cycle(5);
    let fam = generic_hyperplanes::<Gf61>(6, 5, derive_seed(seed, 50))?;
    let cfg = generically_induced(&SimpleHypergraph::complete(6, 2), &c5, &fam)?;
    let b = simple_bound(&c5, &half_weights(5), &cfg)?;
    out.push(bound_record("c4.five-cycle", cfg.joints.len(), &b));

    for t in 0..=2 {
        let fam = generic_hyperplanes::<Gf61>(6, 3 + t, derive_seed(seed, 70 + t as u64))?;
        let cfg = projected_generically_induced(&SimpleHypergraph::complete(6, 2 + t), &h, t, &fam, derive_seed(seed, 80))?;
        let b = simple_bound(&h, &w, &cfg)?;
        out.push(bound_record(&format!("c4.projected.t{t}"), cfg.joints.len(), &b));
    }
    Ok(out)
}

fn c5_multiplicity(seed: u64, mode: ExecMode) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    let h = k3();
    let w = half_weights(3);
    let closed = generic_eta_closed_form(&h, &w)?;
    for m in 4..=7 {
        let cfg = generic_k3::<Gf61>(m, derive_seed(seed, m as u64))?;
        let tuples = joint_tuples(&h, &cfg, 10_000, DEFAULT_TRIALS, seed, mode)?;
        let mb = multiplicity_bound(&h, &w, &cfg, &tuples, DEFAULT_TOL, DEFAULT_MAX_ITERS, mode)?;
        let mut rec = CheckRecord::from_slack(
            format!("c5.sum-eta.m{m}"),
            mb.sum_eta,
            mb.bound,
            mb.bound - mb.sum_eta,
            SLACK_GUARD * mb.bound.max(1.0),
        );
        if !mb.holds {
            rec = rec.with_status(Status::Fail);
        }
        out.push(rec);
        out.push(CheckRecord::flag(
            format!("c5.frank-wolfe-gap.m{m}"),
            mb.converged && mb.max_gap <= DEFAULT_TOL,
            format!("max gap {:.3e}", mb.max_gap),
        ));
        let dev = mb.etas.iter().map(|e| (e.eta - closed).abs()).fold(0.0, f64::max);
        out.push(CheckRecord::from_slack(format!("c5.closed-form.m{m}"), dev, 1e-6, 1e-6 - dev, 0.0));
    }

    // simple joints: an axis-parallel K_3 instance, one color per edge
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let subsets = vec![vec![1, 2], vec![1, 3], vec![2, 3]];
    let s = 3;
    let tables: Vec<Vec<i64>> = (0..3).map(|_| (0..s * s).map(|_| rng.gen_range(0..=1)).collect()).collect();
    let inst = AxisInstance { d: 3, s, subsets: subsets.clone(), tables };
    let hp = inst.pattern()?;
    let cfg = axis_parallel_from_functions::<Gf61>(&inst)?;
    let tuples = joint_tuples(&hp, &cfg, 10_000, DEFAULT_TRIALS, seed, mode)?;
    let mb = multiplicity_bound(&hp, &w, &cfg, &tuples, DEFAULT_TOL, DEFAULT_MAX_ITERS, mode)?;
    let simple = tuples.iter().all(|t| t.len() == 1);
    let dev = mb.etas.iter().map(|e| (e.eta - 1.0).abs()).fold(0.0, f64::max);
    out.push(
        CheckRecord::from_slack("c5.simple-joints-eta", dev, 1e-9, 1e-9 - dev, 0.0)
            .with_detail(format!("{} joints, all simple: {simple}", cfg.joints.len())),
    );
    if !simple {
        out.push(CheckRecord::flag("c5.simple-joints-tuples", false, "some joint has several tuples"));
    }
    Ok(out)
}

fn random_simplex(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| if rng.gen_bool(0.15) { 0.0 } else { -rng.gen::<f64>().max(1e-300).ln() }).collect();
    if v.iter().all(|&x| x == 0.0) {
        v[rng.gen_range(0..n)] = 1.0;
    }
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    v
}

fn c6_geometric_shearer(seed: u64, mode: ExecMode) -> Result<Vec<CheckRecord>> {
    let h = k3();
    let w = half_weights(3);
    let cfg = generic_k3::<Gf61>(6, seed)?;
    let tuples = joint_tuples(&h, &cfg, 10_000, DEFAULT_TRIALS, seed, mode)?;
    let idx: Vec<Vec<Vec<usize>>> = tuples.iter().map(|t| tuple_indices(t)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    let mut worst_vals = (0.0, 0.0);
    for _ in 0..200 {
        let p = random_simplex(&mut rng, idx.len());
        let nu: Vec<Vec<f64>> = idx.iter().map(|t| random_simplex(&mut rng, t.len())).collect();
        let v = geometric_shearer_audit(&h, &w, &p, &idx, &nu)?;
        if v.slack < worst {
            worst = v.slack;
            worst_vals = (v.lhs, v.rhs);
        }
    }
    let mut out = vec![CheckRecord::from_slack("c6.random-laws", worst_vals.0, worst_vals.1, worst, SLACK_GUARD)
        .with_detail("worst of 200 random (p, tuple) laws")];

    let mb = multiplicity_bound(&h, &w, &cfg, &tuples, DEFAULT_TOL, DEFAULT_MAX_ITERS, mode)?;
    let p: Vec<f64> = mb.etas.iter().map(|e| e.eta / mb.sum_eta).collect();
    let nu: Vec<Vec<f64>> = mb.etas.iter().map(|e| e.mu.clone()).collect();
    let v = geometric_shearer_audit(&h, &w, &p, &idx, &nu)?;
    out.push(CheckRecord::from_slack("c6.eta-optimal", v.lhs, v.rhs, v.slack, SLACK_GUARD));
    let target = mb.sum_eta.log2();
    let dev = (v.lhs - target).abs();
    out.push(
        CheckRecord::from_slack("c6.eta-optimal-lhs", v.lhs, target, SLACK_GUARD - dev, 0.0)
            .with_detail("lhs equals log2 of the multiplicity sum"),
    );
    Ok(out)
}

/// Random subsets of `[d]` covering every coordinate, with covering weights
/// that are at most 1.
fn random_cover(rng: &mut ChaCha8Rng, d: usize) -> (Vec<Vec<usize>>, Vec<Rational>) {
    loop {
        let count = rng.gen_range(2..=4);
        let subsets: Vec<Vec<usize>> = (0..count)
            .map(|_| {
                let mask = rng.gen_range(1..(1u64 << d));
                members(mask).collect()
            })
            .collect();
        let degree = |j: usize| subsets.iter().filter(|s| s.contains(&j)).count();
        let min_deg = (1..=d).map(degree).min().unwrap_or(0);
        if min_deg == 0 {
            continue;
        }
        // optimal cover of the pattern when its edges are distinct, uniform otherwise
        let mut distinct = subsets.clone();
        distinct.sort();
        distinct.dedup();
        if distinct.len() == subsets.len() && rng.gen_bool(0.5) {
            if let Ok(sol) = subsets_pattern(d, &subsets).and_then(|h| rho_star(&h)) {
                return (subsets, sol.weights.weights().to_vec());
            }
        }
        let w = ratio(1, min_deg as i64);
        return (subsets, vec![w; count]);
    }
}

fn grid(d: usize, s: usize) -> Vec<Vec<usize>> {
    (0..s.pow(d as u32))
        .map(|mut c| {
            let mut x = vec![0; d];
            for slot in x.iter_mut().rev() {
                *slot = c % s;
                c /= s;
            }
            x
        })
        .collect()
}

fn c7_entropy(seed: u64) -> Result<Vec<CheckRecord>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    let mut worst = f64::INFINITY;
    for _ in 0..1000 {
        let d = rng.gen_range(1..=4);
        let (subsets, weights) = random_cover(&mut rng, d);
        let s = rng.gen_range(2..=3);
        let mut atoms = grid(d, s);
        atoms.retain(|_| rng.gen_bool(0.6));
        if atoms.is_empty() {
            atoms.push(vec![0; d]);
        }
        let probs = random_simplex(&mut rng, atoms.len());
        let joint = FiniteDistribution::new(atoms, probs)?;
        worst = worst.min(shearer_check(&subsets, &weights, &joint)?);
    }
    out.push(CheckRecord::from_slack("c7.shearer", f64::NAN, f64::NAN, worst, SLACK_GUARD).with_detail("1000 laws, d <= 4"));

    let mut worst_rel = f64::INFINITY;
    let mut fails = 0;
    for _ in 0..1000 {
        let d = rng.gen_range(1..=3);
        let (subsets, weights) = random_cover(&mut rng, d);
        let s: usize = rng.gen_range(2..=3);
        let tables = subsets.iter().map(|sub| (0..s.pow(sub.len() as u32)).map(|_| rng.gen_range(0..=4)).collect()).collect();
        let inst = AxisInstance { d, s, subsets, tables };
        let v = holder_check(&inst, &weights)?;
        if v.slack < -SLACK_GUARD * v.rhs {
            fails += 1;
        }
        if v.rhs > 0.0 {
            worst_rel = worst_rel.min(v.slack / v.rhs);
        }
    }
    out.push(
        CheckRecord::from_slack("c7.holder", f64::NAN, f64::NAN, worst_rel, SLACK_GUARD)
            .with_detail(format!("1000 integer instances, relative slack, {fails} violations")),
    );

    let mut worst_lw = f64::INFINITY;
    for _ in 0..500 {
        let d = rng.gen_range(2..=4);
        let (subsets, weights) = random_cover(&mut rng, d);
        let s = rng.gen_range(2..=4);
        let mut t = grid(d, s);
        t.retain(|_| rng.gen_bool(0.4));
        if t.is_empty() {
            t.push(vec![0; d]);
        }
        let v = loomis_whitney_check(&t, &subsets, &weights)?;
        worst_lw = worst_lw.min(v.slack);
    }
    out.push(CheckRecord::from_slack("c7.loomis-whitney", f64::NAN, f64::NAN, worst_lw, SLACK_GUARD).with_detail("500 random sets"));

    let mut trend_ok = 0;
    let mut notes = Vec::new();
    for i in 0..10u64 {
        let mut r = ChaCha8Rng::seed_from_u64(derive_seed(seed, 1000 + i));
        let subsets = vec![vec![1, 2], vec![1, 3], vec![2, 3]];
        let tables = (0..3).map(|_| (0..4).map(|_| r.gen_range(0..=3)).collect()).collect();
        let inst = AxisInstance { d: 3, s: 2, subsets, tables };
        let t = tensor_power_trend(&inst, &[ratio(1, 2), ratio(1, 2), ratio(1, 2)], 3)?;
        if t.nonincreasing && t.tensored_holds {
            trend_ok += 1;
        } else {
            notes.push(format!("instance {i}: roots {:?}", t.rooted_bounds));
        }
    }
    out.push(CheckRecord::flag(
        "c7.tensor-power",
        trend_ok == 10,
        if notes.is_empty() { "10 instances, n = 1..3".into() } else { notes.join("; ") },
    ));
    Ok(out)
}

fn c8_shadow(seed: u64, mode: ExecMode) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    let kk_ok: Vec<bool> =
        (3..=10u64).map(|x| kruskal_katona_count(binom(x, 2) as usize, 3) == binom(x, 3)).collect();
    out.push(CheckRecord::flag("c8.kruskal-katona", kk_ok.iter().all(|&b| b), "x = 3..10"));

    let pairs: Vec<u64> = k_subsets(6, 2).collect();
    let mut hosts = 0;
    let mut fails = Vec::new();
    for n in 0..=5 {
        for sel in k_subsets(pairs.len(), n) {
            let edges: Vec<u64> = members(sel).map(|i| pairs[i - 1]).collect();
            let r = partial_shadow_check(&SimpleHypergraph::new(6, edges)?, 3, 0, mode)?;
            hosts += 1;
            if !r.pass {
                fails.push(format!("n={} count={} bound={}", r.n, r.count, r.bound));
            }
        }
    }
    out.push(CheckRecord::flag(
        "c8.shadow-exhaustive",
        fails.is_empty(),
        format!("{hosts} graphs on 6 vertices with at most 5 edges; {}", fails.join(", ")),
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    let mut failed = 0;
    for _ in 0..200 {
        let v = rng.gen_range(4..=8);
        let all: Vec<u64> = k_subsets(v, 3).collect();
        let n = rng.gen_range(1..=12.min(all.len()));
        let mut pick = all.clone();
        for i in 0..n {
            let j = rng.gen_range(i..pick.len());
            pick.swap(i, j);
        }
        pick.truncate(n);
        let r = partial_shadow_check(&SimpleHypergraph::new(v, pick)?, 3, 1, mode)?;
        worst = worst.min((r.bound - r.count as f64) / r.bound.max(1.0));
        failed += usize::from(!r.pass);
    }
    let mut rec = CheckRecord::from_slack("c8.shadow-random-t1", f64::NAN, f64::NAN, worst, SLACK_GUARD)
        .with_detail(format!("200 random 3-uniform hosts, relative slack, {failed} failures"));
    if failed > 0 {
        rec = rec.with_status(Status::Fail);
    }
    out.push(rec);

    let mut same = true;
    for n in 1..=12 {
        let a = partial_shadow_check(&crate::extremal::colex_family(2, n), 3, 0, mode)?;
        let b = partial_shadow_check(&crate::extremal::colex_family(3, n), 3, 1, mode)?;
        same &= a.bound == b.bound && a.x == b.x;
    }
    out.push(CheckRecord::flag("c8.bound-independent-of-t", same, "n = 1..12, t = 0 and 1"));
    Ok(out)
}

fn random_handicap(rng: &mut ChaCha8Rng, joints: usize, n: usize) -> Handicap {
    let r = n as i64 + 1;
    Handicap((0..joints).map(|_| rng.gen_range(-r..=r)).collect())
}

#[derive(Default)]
struct LemmaTally {
    runs: usize,
    flat_sum_bad: usize,
    param_worst: i128,
    lw_worst: f64,
    mono_checked: usize,
    mono_bad: usize,
    shift_bad: usize,
    lip_checked: usize,
    lip_bad: usize,
    lip_c: f64,
    digest_bad: usize,
    sweeps: usize,
    sweep_bad: usize,
}

fn c9_vanishing(seed: u64, mode: ExecMode) -> Result<Vec<CheckRecord>> {
    let h = k3();
    let w = half_weights(3);
    let mut out = Vec::new();
    for m in [4usize, 5] {
        let cfg = generic_k3::<Gf61>(m, derive_seed(seed, m as u64))?;
        let setup = VanishingSetup::prepare(&h, &cfg, 10_000, DEFAULT_TRIALS, seed, mode)?;
        let jn = setup.num_joints();
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 200 + m as u64));
        let mut t = LemmaTally { param_worst: i128::MAX, lw_worst: f64::INFINITY, ..Default::default() };
        for n in 2..=6 {
            for _ in 0..50 {
                let a = random_handicap(&mut rng, jn, n);
                let run = run_engine(&setup, &w, &a, n, mode)?;
                t.runs += 1;
                t.flat_sum_bad += run.flat_sums.iter().filter(|(s, target)| s != target).count();
                t.param_worst = t.param_worst.min(run.param.slack);
                t.lw_worst = run.lw.iter().map(|x| x.slack).fold(t.lw_worst, f64::min);

                let again = setup.build_ledgers(&a, n, mode)?;
                if again.iter().zip(&run.ledgers).any(|(x, y)| x.digest() != y.digest()) {
                    t.digest_bad += 1;
                }
                if !shift_invariance_check(&setup, &a, rng.gen_range(-5..=5), n, mode)? {
                    t.shift_bad += 1;
                }
                // raise one joint: the monotonicity hypothesis holds for it
                let mut a2 = a.clone();
                a2.0[rng.gen_range(0..jn)] += rng.gen_range(0..=3);
                let mono = monotonicity_check(&setup, &a, &a2, n, mode)?;
                t.mono_checked += mono.checked;
                t.mono_bad += mono.violations;

                let b = random_handicap(&mut rng, jn, n);
                let lip = lipschitz_check(&setup, &a, &b, n, mode)?;
                t.lip_checked += lip.checked;
                t.lip_bad += lip.violations_k1;
                t.lip_c = t.lip_c.max(lip.calibrated_c);
            }
            for f in 0..setup.flats.len() {
                for &p in &setup.on_flat[f] {
                    let sweep = bounded_domain_sweep(&setup, f, p, n, n + 3)?;
                    t.sweeps += 1;
                    // B must reach 0 inside the sweep and stay there
                    if sweep.threshold.is_none() || !sweep.stays_zero {
                        t.sweep_bad += 1;
                    }
                }
            }
        }
        let tag = |s: &str| format!("c9.{s}.m{m}");
        out.push(CheckRecord::flag(
            tag("sum-of-conditions"),
            t.flat_sum_bad == 0,
            format!("{} runs, {} flats off C(n+k,k)", t.runs, t.flat_sum_bad),
        ));
        out.push(CheckRecord::flag(
            tag("monotonicity"),
            t.mono_bad == 0 && t.mono_checked > 0,
            format!("{} pairs checked, {} violations", t.mono_checked, t.mono_bad),
        ));
        out.push(CheckRecord::flag(tag("shift-invariance"), t.shift_bad == 0, format!("{} mismatches", t.shift_bad)));
        out.push(CheckRecord::flag(
            tag("lipschitz-k1"),
            t.lip_bad == 0,
            format!("{} pairs checked, {} violations; calibrated c = {}", t.lip_checked, t.lip_bad, t.lip_c),
        ));
        out.push(CheckRecord::flag(
            tag("bounded-domain"),
            t.sweep_bad == 0,
            format!("{} sweeps, {} without a zero tail", t.sweeps, t.sweep_bad),
        ));
        out.push(
            CheckRecord::from_slack(tag("param-counting"), f64::NAN, f64::NAN, t.param_worst as f64, 0.0)
                .with_detail("worst sum |G_p| - C(n+d,d)"),
        );
        out.push(CheckRecord::from_slack(tag("lw-step"), f64::NAN, f64::NAN, t.lw_worst, SLACK_GUARD));
        out.push(CheckRecord::flag(tag("determinism"), t.digest_bad == 0, "ledger digests on rebuild"));
    }
    Ok(out)
}

fn c10_handicap(seed: u64, mode: ExecMode) -> Result<Vec<CheckRecord>> {
    let h = k3();
    let w = half_weights(3);
    let cfg = generic_k3::<Gf61>(4, seed)?;
    let setup = VanishingSetup::prepare(&h, &cfg, 10_000, DEFAULT_TRIALS, seed, mode)?;
    let jn = setup.num_joints();
    let big_w = vec![1.0 / (6.0 * jn as f64); jn];
    let mut out = Vec::new();
    let mut audits = Vec::new();
    for n in [24usize, 48] {
        let delta = default_delta(n);
        let res = handicap_iteration(&setup, &w, &big_w, n, delta, DEFAULT_ROUNDS, mode)?;
        let cert = KeyInequalityCertificate::from_outcome(&setup, &w, &big_w, &res);
        let trace = serde_json::to_value(&res.trace).unwrap_or(serde_json::Value::Null);
        let status = match res.termination {
            Termination::MaxRounds => Status::Unconverged,
            _ => Status::Pass,
        };
        out.push(
            CheckRecord::flag(
                format!("c10.dynamic.n{n}"),
                true,
                format!("{} after {} rounds, delta {delta:.4}", res.termination.as_str(), res.trace.len()),
            )
            .with_status(status)
            .with_certificate(json!({ "alpha": res.alpha.0, "trace": trace })),
        );
        let audit = key_inequality_audit(&h, &w, &cert, DEFAULT_ADDITIVE_TOL, DEFAULT_FACTOR)?;
        out.push(CheckRecord::from_slack(
            format!("c10.condition1.n{n}"),
            f64::NAN,
            f64::NAN,
            audit.cond1.worst_slack,
            0.0,
        ));
        out.push(CheckRecord::from_slack(
            format!("c10.condition2.n{n}"),
            f64::NAN,
            f64::NAN,
            audit.cond2.worst_slack,
            0.0,
        ));
        audits.push(audit);
    }
    out.push(
        strict_less("c10.flat-excess-shrinks", audits[1].flat_excess, audits[0].flat_excess)
            .with_detail("max over flats of (sum b - 1/k!)^+, n = 48 against n = 24"),
    );
    out.push(
        strict_less("c10.equalization-shrinks", audits[1].equalization_error, audits[0].equalization_error)
            .with_detail("max over joints of |ratio/lambda - 1|, n = 48 against n = 24"),
    );
    Ok(out)
}

fn c11_strict(seed: u64, mode: ExecMode) -> Result<Vec<CheckRecord>> {
    let pattern = Hypergraph::complete_codim1(4).cone(1)?;
    let colex = kruskal_katona_count(12, 4);
    let cfg = SearchConfig { mode: SearchMode::Local, work_limit: DEFAULT_WORK_LIMIT, restarts: DEFAULT_RESTARTS, seed, exec: mode };
    let res = search_m(&pattern, 12, 6, &cfg)?;
    let edges: Vec<Vec<usize>> = res.best_host.edges().iter().map(|&e| members(e).collect()).collect();
    Ok(vec![
        CheckRecord::flag("c11.colex-count", colex == 5, format!("colex family of 12 triples gives {colex}")),
        CheckRecord::from_slack("c11.local-search", res.best_count as f64, colex as f64, res.best_count as f64 - colex as f64 - 1.0, 0.0)
            .with_detail(format!("best count {} with 12 edges, {} evaluations", res.best_count, res.work))
            .with_certificate(json!({ "vertices": res.best_host.vertices(), "edges": edges })),
    ])
}
