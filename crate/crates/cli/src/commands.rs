//! One function per subcommand, each returning a report.

use std::path::Path;

use anyhow::{bail, Context, Result};
use hjoints::bounds::{geometric_shearer_audit, joint_tuples, multiplicity_bound, simple_bound, tuple_indices};
use hjoints::config::{axis_parallel_from_functions, generic_hyperplanes, generically_induced, projected_generically_induced, JointsConfiguration};
use hjoints::cover::{max_packing, verify_cover};
use hjoints::entropy::{holder_check, loomis_whitney_check, shearer_check, tensor_power_trend, FiniteDistribution, SLACK_TOL};
use hjoints::eta::{eta_multiplicity, DEFAULT_MAX_ITERS};
use hjoints::extremal::{count_inducing_sets, kruskal_katona_count, lovasz_bound, partial_shadow_check, within_bound};
use hjoints::field::{Field, Gf61};
use hjoints::hypergraph::{constant_c, Hypergraph, WeightFunction};
use hjoints::io;
use hjoints::par::{default_mode, ExecMode};
use hjoints::rational::{format_rational, Rational};
use hjoints::report::{inputs_digest, CheckRecord, Status, VerificationReport};
use hjoints::search::{search_m, SearchConfig, SearchMode};
use hjoints::suite::{run_suite, suite_report, SuiteOptions, NUM_CRITERIA, SLACK_GUARD};
use hjoints::vanishing::{
    default_delta, handicap_iteration, key_inequality_audit, run_engine, Handicap, KeyInequalityCertificate, Termination,
    VanishingSetup,
};
use hjoints::witness::{derive_seed, detect_joints, DEFAULT_TRIALS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::files::{self, AnyConfig, HolderInstance, LwInstance, ShearerInstance};
use crate::{Common, FieldArg, Geo, Outcome};

const TUPLE_CAP: usize = 100_000;

fn report(command: &str, parts: &[&[u8]], seed: Option<u64>) -> VerificationReport {
    let mut r = VerificationReport::new(command, inputs_digest(parts));
    r.seeds.extend(seed);
    r
}

fn write_or_return(mut r: VerificationReport, doc: String, out: Option<&Path>) -> Result<Outcome> {
    match out {
        Some(p) => {
            std::fs::write(p, &doc).with_context(|| format!("writing {}", p.display()))?;
            r.push(CheckRecord::info("output", p.display().to_string()));
            Ok(r.into())
        }
        None => Ok(Outcome { report: r, document: Some(doc) }),
    }
}

/// The given weights, or the optimal fractional cover.
fn weights_or_cover(h: &Hypergraph, path: Option<&Path>) -> Result<(WeightFunction, Vec<u8>)> {
    match path {
        Some(p) => {
            let w = files::weights(p)?;
            if w.value.len() != h.num_edges() {
                bail!("{} weights for {} edges", w.value.len(), h.num_edges());
            }
            Ok((w.value, w.bytes))
        }
        None => Ok((hjoints::cover::rho_star(h)?.weights, Vec::new())),
    }
}

fn weight_texts(w: &WeightFunction) -> Vec<String> {
    w.weights().iter().map(format_rational).collect()
}

pub fn rho_star(path: &Path) -> Result<Outcome> {
    let h = files::pattern(path)?;
    let sol = hjoints::cover::rho_star(&h.value)?;
    let (dual, y) = max_packing(&h.value)?;
    let slacks = verify_cover(&h.value, &sol.weights)?;
    let mut r = report("rho-star", &[&h.bytes], None);
    r.push(
        CheckRecord::flag("rho-star.duality", sol.value == dual, format!("value {}", format_rational(&sol.value)))
            .with_certificate(json!({
                "value": format_rational(&sol.value),
                "weights": weight_texts(&sol.weights),
                "packing": y.iter().map(format_rational).collect::<Vec<_>>(),
                "tight_vertices": sol.tight_vertices,
            })),
    );
    let worst = slacks.iter().min().cloned().unwrap_or_default();
    r.push(CheckRecord::flag("rho-star.covering", slacks.iter().all(|s| *s >= Rational::default()), format!("min vertex slack {}", format_rational(&worst))));
    Ok(r.into())
}

pub fn constant(path: &Path, w: Option<&Path>) -> Result<Outcome> {
    let h = files::pattern(path)?;
    let (w, wb) = weights_or_cover(&h.value, w)?;
    let c = constant_c(&h.value, &w)?;
    let mut r = report("constant", &[&h.bytes, &wb], None);
    r.push(
        CheckRecord::info("constant", format!("C = {:.15e}, log2 C = {}", c.value, c.log2.to_text()))
            .with_status(Status::Pass)
            .with_certificate(json!({ "value": c.value, "log2": c.log2.to_text(), "weights": weight_texts(&w) })),
    );
    Ok(r.into())
}

pub fn cone(path: &Path, t: usize, out: Option<&Path>) -> Result<Outcome> {
    let h = files::pattern(path)?;
    let c = h.value.cone(t)?;
    let mut r = report("cone", &[&h.bytes, &t.to_le_bytes()], None);
    r.push(CheckRecord::info("cone", format!("{} edges on {} vertices", c.num_edges(), c.d())).with_status(Status::Pass));
    write_or_return(r, io::hypergraph_to_text(&c), out)
}

fn build_typed<S: Field>(host: &Path, pattern: &Path, t: usize, seed: u64) -> Result<(JointsConfiguration<S>, Vec<u8>)> {
    let g = files::host(host)?;
    let h = files::pattern(pattern)?;
    let fam = generic_hyperplanes::<S>(g.value.vertices(), h.value.d() + t, seed)?;
    let cfg = if t == 0 {
        generically_induced(&g.value, &h.value, &fam)?
    } else {
        projected_generically_induced(&g.value, &h.value, t, &fam, derive_seed(seed, 1))?
    };
    Ok((cfg, [g.bytes, h.bytes].concat()))
}

pub fn build_config(
    host: Option<&Path>,
    pattern: Option<&Path>,
    t: usize,
    axis: Option<&Path>,
    field: FieldArg,
    out: Option<&Path>,
    seed: u64,
) -> Result<Outcome> {
    let (text, bytes, summary) = if let Some(a) = axis {
        let inst = files::json::<HolderInstance>(a)?;
        let ax = inst.value.axis()?;
        match field {
            FieldArg::Gf61 => {
                let c = axis_parallel_from_functions::<Gf61>(&ax)?;
                (io::config_to_text(&c), inst.bytes, summarize(&c))
            }
            FieldArg::Rational => {
                let c = axis_parallel_from_functions::<Rational>(&ax)?;
                (io::config_to_text(&c), inst.bytes, summarize(&c))
            }
        }
    } else {
        let (host, pattern) = (host.expect("clap requires host"), pattern.expect("clap requires pattern"));
        match field {
            FieldArg::Gf61 => {
                let (c, b) = build_typed::<Gf61>(host, pattern, t, seed)?;
                (io::config_to_text(&c), b, summarize(&c))
            }
            FieldArg::Rational => {
                let (c, b) = build_typed::<Rational>(host, pattern, t, seed)?;
                (io::config_to_text(&c), b, summarize(&c))
            }
        }
    };
    let mut r = report("build-config", &[&bytes, &t.to_le_bytes()], Some(seed));
    r.push(CheckRecord::info("build-config", summary).with_status(Status::Pass));
    write_or_return(r, text, out)
}

fn summarize<S: Field>(c: &JointsConfiguration<S>) -> String {
    format!("{} configuration over {}: {} joints, family sizes {:?}", c.kind.as_str(), S::name(), c.joints.len(), c.family_sizes())
}

/// Pattern, weights and configuration with the field resolved.
struct GeoInputs {
    h: Hypergraph,
    w: WeightFunction,
    cfg: AnyConfig,
    bytes: Vec<u8>,
}

fn geo_inputs(g: &Geo) -> Result<GeoInputs> {
    let h = files::pattern(&g.pattern)?;
    let (w, wb) = weights_or_cover(&h.value, g.w.as_deref())?;
    let cfg = files::config(&g.config)?;
    Ok(GeoInputs { h: h.value, w, cfg: cfg.value, bytes: [h.bytes, wb, cfg.bytes].concat() })
}

macro_rules! with_config {
    ($cfg:expr, $c:ident => $body:expr) => {
        match $cfg {
            AnyConfig::Gf61($c) => $body,
            AnyConfig::Rational($c) => $body,
        }
    };
}

fn mode() -> ExecMode {
    default_mode()
}

pub fn detect(config: &Path, pattern: &Path, budget: usize, trials: usize, c: &Common) -> Result<Outcome> {
    let h = files::pattern(pattern)?;
    let cfg = files::config(config)?;
    let mut r = report("detect", &[&h.bytes, &cfg.bytes], Some(c.seed));
    let (found, stored) = with_config!(&cfg.value, k => {
        let f = detect_joints(&h.value, k, None, budget, trials, c.seed, mode())?;
        let mut stored = k.clone();
        stored.normalize_joints();
        let same = f.len() == stored.joints.len() && f.iter().zip(&stored.joints).all(|(a, b)| a == b);
        (f.len(), if same { None } else { Some(stored.joints.len()) })
    });
    match stored {
        None => r.push(CheckRecord::flag("detect.agrees", true, format!("{found} joints"))),
        Some(s) => r.push(CheckRecord::flag("detect.agrees", false, format!("detected {found}, file lists {s}"))),
    }
    Ok(r.into())
}

fn eta_typed<S: Field>(g: &GeoInputs, cfg: &JointsConfiguration<S>, tol: f64, max_iters: usize, seed: u64, r: &mut VerificationReport) -> Result<()> {
    let tuples = joint_tuples(&g.h, cfg, TUPLE_CAP, DEFAULT_TRIALS, seed, mode())?;
    for (p, t) in tuples.iter().enumerate() {
        if t.is_empty() {
            r.push(CheckRecord::flag(format!("eta.joint{p}"), false, "no witness tuple"));
            continue;
        }
        let e = eta_multiplicity(&g.h, &g.w, &tuple_indices(t), tol, max_iters)?;
        let rec = CheckRecord::from_slack(format!("eta.joint{p}"), e.eta, 1.0, e.eta - 1.0, SLACK_GUARD)
            .with_detail(format!("eta {:.9} over {} tuples, gap {:.2e}, {} iterations", e.eta, t.len(), e.gap, e.iterations));
        r.push(if e.converged { rec } else { rec.with_status(Status::Unconverged) });
    }
    Ok(())
}

pub fn eta(geo: &Geo, tol: f64, max_iters: usize, c: &Common) -> Result<Outcome> {
    let g = geo_inputs(geo)?;
    let mut r = report("eta", &[&g.bytes], Some(c.seed));
    with_config!(&g.cfg, k => eta_typed(&g, k, tol, max_iters, c.seed, &mut r))?;
    Ok(r.into())
}

pub fn shearer(path: &Path) -> Result<Outcome> {
    let inst = files::json::<ShearerInstance>(path)?;
    let law = FiniteDistribution::new(inst.value.atoms.clone(), inst.value.probs.clone())?;
    let slack = shearer_check(&inst.value.subsets, &inst.value.weights()?, &law)?;
    let mut r = report("shearer", &[&inst.bytes], None);
    r.push(CheckRecord::from_slack("shearer", law.entropy(), law.entropy() + slack, slack, SLACK_TOL));
    Ok(r.into())
}

pub fn holder(path: &Path, tensor: usize) -> Result<Outcome> {
    let inst = files::json::<HolderInstance>(path)?;
    let ax = inst.value.axis()?;
    let w = inst.value.weights()?;
    let v = holder_check(&ax, &w)?;
    let mut r = report("holder", &[&inst.bytes, &tensor.to_le_bytes()], None);
    r.push(CheckRecord::from_slack("holder", v.lhs, v.rhs, v.slack, SLACK_TOL * v.rhs.abs().max(1.0)));
    if tensor > 0 {
        let t = tensor_power_trend(&ax, &w, tensor)?;
        r.push(
            CheckRecord::flag("holder.tensor-trend", t.nonincreasing && t.tensored_holds, format!("rooted bounds {:?}", t.rooted_bounds))
                .with_certificate(json!({ "constant": t.constant, "lhs": t.lhs, "rooted_bounds": t.rooted_bounds, "clean_bound": t.clean_bound })),
        );
    }
    Ok(r.into())
}

pub fn lw(path: &Path) -> Result<Outcome> {
    let inst = files::json::<LwInstance>(path)?;
    let v = loomis_whitney_check(&inst.value.points, &inst.value.subsets, &inst.value.weights()?)?;
    let mut r = report("lw", &[&inst.bytes], None);
    r.push(CheckRecord::from_slack("lw", v.lhs, v.rhs, v.slack, SLACK_TOL * v.rhs.abs().max(1.0)));
    Ok(r.into())
}

fn simplex(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..n).map(|_| -rng.gen_range(f64::EPSILON..1.0f64).ln()).collect();
    let s: f64 = v.iter().sum();
    v.iter().map(|x| x / s).collect()
}

fn geo_shearer_typed<S: Field>(g: &GeoInputs, cfg: &JointsConfiguration<S>, samples: usize, seed: u64, r: &mut VerificationReport) -> Result<()> {
    let tuples = joint_tuples(&g.h, cfg, TUPLE_CAP, DEFAULT_TRIALS, seed, mode())?;
    if tuples.iter().any(Vec::is_empty) {
        bail!("a listed joint has no witness tuple");
    }
    let idx: Vec<Vec<Vec<usize>>> = tuples.iter().map(|t| tuple_indices(t)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: Option<hjoints::entropy::InequalityValues> = None;
    for _ in 0..samples {
        let p = simplex(&mut rng, idx.len());
        let nu: Vec<Vec<f64>> = idx.iter().map(|t| simplex(&mut rng, t.len())).collect();
        let v = geometric_shearer_audit(&g.h, &g.w, &p, &idx, &nu)?;
        if worst.as_ref().map_or(true, |b| v.slack < b.slack) {
            worst = Some(v);
        }
    }
    if let Some(v) = worst {
        r.push(CheckRecord::from_slack("geo-shearer.random", v.lhs, v.rhs, v.slack, SLACK_GUARD).with_detail(format!("worst of {samples} laws")));
    }
    let mb = multiplicity_bound(&g.h, &g.w, cfg, &tuples, hjoints::eta::DEFAULT_TOL, DEFAULT_MAX_ITERS, mode())?;
    let p: Vec<f64> = mb.etas.iter().map(|e| e.eta / mb.sum_eta).collect();
    let nu: Vec<Vec<f64>> = mb.etas.iter().map(|e| e.mu.clone()).collect();
    let v = geometric_shearer_audit(&g.h, &g.w, &p, &idx, &nu)?;
    r.push(
        CheckRecord::from_slack("geo-shearer.eta-optimal", v.lhs, v.rhs, v.slack, SLACK_GUARD)
            .with_detail(format!("lhs {:.12} against log2 sum eta {:.12}", v.lhs, mb.sum_eta.log2())),
    );
    Ok(())
}

pub fn geo_shearer(geo: &Geo, samples: usize, c: &Common) -> Result<Outcome> {
    let g = geo_inputs(geo)?;
    let mut r = report("geo-shearer", &[&g.bytes, &samples.to_le_bytes()], Some(c.seed));
    with_config!(&g.cfg, k => geo_shearer_typed(&g, k, samples, c.seed, &mut r))?;
    Ok(r.into())
}

pub fn mcount(host: &Path, pattern: &Path, _c: &Common) -> Result<Outcome> {
    let g = files::host(host)?;
    let h = files::pattern(pattern)?;
    let n = count_inducing_sets(&g.value, &h.value, mode());
    let mut r = report("mcount", &[&g.bytes, &h.bytes], None);
    r.push(
        CheckRecord::info("mcount", format!("{n} of the {}-vertex sets contain the pattern", h.value.d()))
            .with_status(Status::Pass)
            .with_certificate(json!({ "count": n, "host_edges": g.value.num_edges() })),
    );
    Ok(r.into())
}

pub fn kk(n: usize, d: usize) -> Result<Outcome> {
    if d < 2 || n == 0 {
        bail!("need d >= 2 and n >= 1");
    }
    let count = kruskal_katona_count(n, d);
    let lb = lovasz_bound(n as u64, d);
    let mut r = report("kk", &[&n.to_le_bytes(), &d.to_le_bytes()], None);
    let rec = CheckRecord::from_slack("kk", count as f64, lb.bound, lb.bound - count as f64, 0.0)
        .with_detail(format!("colex count {count}, x = {:.9}", lb.x));
    r.push(if within_bound(count, lb.bound) { rec.with_status(Status::Pass) } else { rec.with_status(Status::Fail) });
    Ok(r.into())
}

pub fn shadow_check(host: &Path, d: usize, t: usize, _c: &Common) -> Result<Outcome> {
    let g = files::host(host)?;
    let s = partial_shadow_check(&g.value, d, t, mode())?;
    let mut r = report("shadow-check", &[&g.bytes, &d.to_le_bytes(), &t.to_le_bytes()], None);
    let rec = CheckRecord::from_slack("shadow-check", s.count as f64, s.bound, s.bound - s.count as f64, 0.0)
        .with_detail(format!("{} edges, x = {:.9}", s.n, s.x));
    r.push(rec.with_status(if s.pass { Status::Pass } else { Status::Fail }));
    Ok(r.into())
}

#[allow(clippy::too_many_arguments)]
pub fn search(pattern: &Path, n: usize, vertices: usize, mode_s: &str, restarts: usize, work_limit: u64, out: Option<&Path>, c: &Common) -> Result<Outcome> {
    let h = files::pattern(pattern)?;
    let cfg = SearchConfig { mode: SearchMode::parse(mode_s)?, work_limit, restarts, seed: c.seed, exec: mode() };
    let res = search_m(&h.value, n, vertices, &cfg)?;
    let mut r = report("search-m", &[&h.bytes, &n.to_le_bytes(), &vertices.to_le_bytes(), mode_s.as_bytes()], Some(c.seed));
    r.seeds.extend(res.seeds.iter().copied());
    r.push(
        CheckRecord::info(
            "search-m",
            format!("best count {} ({}), {} evaluations", res.best_count, if res.certified { "certified" } else { "heuristic" }, res.work),
        )
        .with_status(Status::Pass)
        .with_certificate(json!({ "count": res.best_count, "certified": res.certified })),
    );
    write_or_return(r, io::host_to_text(&res.best_host), out)
}

fn parse_alpha(s: Option<&str>, joints: usize) -> Result<Handicap> {
    match s {
        None => Ok(Handicap::zero(joints)),
        Some(s) => {
            let v: Vec<i64> = s.split(',').map(|x| x.trim().parse()).collect::<std::result::Result<_, _>>().context("parsing --alpha")?;
            if v.len() != joints {
                bail!("--alpha has {} entries for {joints} joints", v.len());
            }
            Ok(Handicap(v))
        }
    }
}

fn vanishing_typed<S: Field>(g: &GeoInputs, cfg: &JointsConfiguration<S>, n: usize, alpha: Option<&str>, seed: u64, r: &mut VerificationReport) -> Result<()> {
    let setup = VanishingSetup::prepare(&g.h, cfg, TUPLE_CAP, DEFAULT_TRIALS, seed, mode())?;
    let a = parse_alpha(alpha, setup.num_joints())?;
    let run = run_engine(&setup, &g.w, &a, n, mode())?;
    let bad = run.flat_sums.iter().filter(|(s, t)| s != t).count();
    r.push(CheckRecord::flag("vanishing.flat-sums", bad == 0, format!("{} flats, {bad} off target", run.flat_sums.len())));
    let p = &run.param;
    r.push(CheckRecord::from_slack("vanishing.param-counting", p.sum as f64, p.target as f64, p.slack as f64, 0.0).with_detail("sum |G_p| against C(n+d, d)"));
    let worst = run.lw.iter().map(|x| x.slack).fold(f64::INFINITY, f64::min);
    r.push(CheckRecord::from_slack("vanishing.lw-step", f64::NAN, f64::NAN, worst, SLACK_GUARD).with_detail("worst joint"));
    Ok(())
}

pub fn vanishing(geo: &Geo, n: usize, alpha: Option<&str>, c: &Common) -> Result<Outcome> {
    let g = geo_inputs(geo)?;
    let mut r = report("vanishing", &[&g.bytes, &n.to_le_bytes(), alpha.unwrap_or("").as_bytes()], Some(c.seed));
    with_config!(&g.cfg, k => vanishing_typed(&g, k, n, alpha, c.seed, &mut r))?;
    Ok(r.into())
}

fn handicap_typed<S: Field>(g: &GeoInputs, cfg: &JointsConfiguration<S>, n: usize, delta: f64, rounds: usize, seed: u64, r: &mut VerificationReport) -> Result<String> {
    let setup = VanishingSetup::prepare(&g.h, cfg, TUPLE_CAP, DEFAULT_TRIALS, seed, mode())?;
    let jn = setup.num_joints();
    let fact: f64 = (1..=setup.d()).map(|i| i as f64).product();
    let big_w = vec![1.0 / (fact * jn as f64); jn];
    let res = handicap_iteration(&setup, &g.w, &big_w, n, delta, rounds, mode())?;
    let cert = KeyInequalityCertificate::from_outcome(&setup, &g.w, &big_w, &res);
    let status = if res.termination == Termination::MaxRounds { Status::Unconverged } else { Status::Pass };
    r.push(
        CheckRecord::flag("handicap-run", true, format!("{} after {} rounds, delta {delta:.4}", res.termination.as_str(), res.trace.len()))
            .with_status(status),
    );
    Ok(io::certificate_to_text(&cert))
}

pub fn handicap_run(geo: &Geo, n: usize, delta: Option<f64>, rounds: usize, out: Option<&Path>, c: &Common) -> Result<Outcome> {
    if n < 2 {
        bail!("--n must be at least 2");
    }
    let g = geo_inputs(geo)?;
    let delta = delta.unwrap_or_else(|| default_delta(n));
    let mut r = report("handicap-run", &[&g.bytes, &n.to_le_bytes(), &rounds.to_le_bytes()], Some(c.seed));
    let doc = with_config!(&g.cfg, k => handicap_typed(&g, k, n, delta, rounds, c.seed, &mut r))?;
    write_or_return(r, doc, out)
}

pub fn key_audit(path: &Path, tolerance: f64, factor: f64) -> Result<Outcome> {
    let cert = files::certificate(path)?;
    let (h, w) = cert.value.pattern()?;
    let a = key_inequality_audit(&h, &w, &cert.value, tolerance, factor)?;
    let mut r = report("key-audit", &[&cert.bytes, &tolerance.to_le_bytes(), &factor.to_le_bytes()], None);
    r.push(CheckRecord::from_slack("key-audit.condition1", f64::NAN, f64::NAN, a.cond1.worst_slack, 0.0).with_detail(format!("factor {factor}")));
    r.push(CheckRecord::from_slack("key-audit.condition2", f64::NAN, f64::NAN, a.cond2.worst_slack, 0.0).with_detail(format!("tolerance {tolerance}")));
    r.push(CheckRecord::info("key-audit.distance", format!("equalization error {:.4e}, flat excess {:.4e}", a.equalization_error, a.flat_excess)));
    Ok(r.into())
}

pub fn verify_simple(geo: &Geo, _c: &Common) -> Result<Outcome> {
    let g = geo_inputs(geo)?;
    let b = with_config!(&g.cfg, k => simple_bound(&g.h, &g.w, k)?);
    let mut r = report("verify-simple-bound", &[&g.bytes], None);
    let rec = CheckRecord::from_slack("simple-bound", b.joints as f64, b.bound, b.bound - b.joints as f64, SLACK_GUARD * b.bound.max(1.0))
        .with_detail(format!("|J| = {}, ratio {:.6}", b.joints, b.ratio));
    r.push(if b.holds { rec } else { rec.with_status(Status::Fail) });
    Ok(r.into())
}

fn mult_typed<S: Field>(g: &GeoInputs, cfg: &JointsConfiguration<S>, tol: f64, seed: u64, r: &mut VerificationReport) -> Result<()> {
    let tuples = joint_tuples(&g.h, cfg, TUPLE_CAP, DEFAULT_TRIALS, seed, mode())?;
    if tuples.iter().any(Vec::is_empty) {
        bail!("a listed joint has no witness tuple");
    }
    let m = multiplicity_bound(&g.h, &g.w, cfg, &tuples, tol, DEFAULT_MAX_ITERS, mode())?;
    let rec = CheckRecord::from_slack("mult-bound", m.sum_eta, m.bound, m.bound - m.sum_eta, SLACK_TOL * m.bound.max(1.0))
        .with_detail(format!("sum eta {:.9}, max gap {:.2e}", m.sum_eta, m.max_gap));
    let rec = if !m.holds {
        rec.with_status(Status::Fail)
    } else if !m.converged {
        rec.with_status(Status::Unconverged)
    } else {
        rec
    };
    r.push(rec);
    Ok(())
}

pub fn verify_mult(geo: &Geo, tol: f64, c: &Common) -> Result<Outcome> {
    let g = geo_inputs(geo)?;
    let mut r = report("verify-mult-bound", &[&g.bytes], Some(c.seed));
    with_config!(&g.cfg, k => mult_typed(&g, k, tol, c.seed, &mut r))?;
    Ok(r.into())
}

pub fn suite(criteria: Option<&str>, c: &Common) -> Result<Outcome> {
    let ids: Vec<usize> = match criteria {
        None => Vec::new(),
        Some(s) => s.split(',').map(|x| x.trim().parse()).collect::<std::result::Result<_, _>>().context("parsing --criteria")?,
    };
    if let Some(bad) = ids.iter().find(|&&i| i == 0 || i > NUM_CRITERIA) {
        bail!("no criterion {bad}; ids run from 1 to {NUM_CRITERIA}");
    }
    let opts = SuiteOptions { seed: c.seed, mode: mode() };
    let outcomes = run_suite(&opts, &ids)?;
    for o in &outcomes {
        eprintln!("criterion {:>2}  {:<11}  {}  {:.2}s", o.id, o.status().as_str(), o.title, o.seconds);
    }
    Ok(suite_report(&outcomes, &opts).into())
}
