//! Shannon entropy and the discrete inequalities built on it: uniform bound,
//! the Jensen step, Shearer, generalized Hölder and Loomis-Whitney.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::config::AxisInstance;
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, WeightFunction};
use crate::rational::{to_f64, Rational};

/// Tolerance on `Σ p = 1`.
pub const PROB_TOL: f64 = 1e-12;

/// Inequality slack tolerance.
pub const SLACK_TOL: f64 = 1e-9;

/// Entropy in bits; zero-probability atoms are skipped.
pub fn entropy(probs: &[f64]) -> f64 {
    probs.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum()
}

/// A finite distribution over atoms of type `A`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteDistribution<A> {
    pub atoms: Vec<A>,
    pub probs: Vec<f64>,
}

impl<A: Clone + Ord> FiniteDistribution<A> {
    pub fn new(atoms: Vec<A>, probs: Vec<f64>) -> Result<Self> {
        if atoms.len() != probs.len() {
            return Err(Error::SizeMismatch("one probability per atom".into()));
        }
        if probs.iter().any(|&p| !(p >= 0.0)) {
            return Err(Error::Invalid("negative or NaN probability".into()));
        }
        let s: f64 = probs.iter().sum();
        if (s - 1.0).abs() > PROB_TOL * probs.len().max(1) as f64 {
            return Err(Error::Invalid(format!("probabilities sum to {s}")));
        }
        Ok(Self { atoms, probs })
    }

    pub fn uniform(atoms: Vec<A>) -> Self {
        let n = atoms.len();
        Self { atoms, probs: vec![1.0 / n as f64; n] }
    }

    pub fn entropy(&self) -> f64 {
        entropy(&self.probs)
    }

    /// Push forward through `f`, merging atoms with equal images.
    pub fn map<B: Clone + Ord, F: Fn(&A) -> B>(&self, f: F) -> FiniteDistribution<B> {
        let mut acc: BTreeMap<B, f64> = BTreeMap::new();
        for (a, &p) in self.atoms.iter().zip(&self.probs) {
            *acc.entry(f(a)).or_insert(0.0) += p;
        }
        let (atoms, probs) = acc.into_iter().unzip();
        FiniteDistribution { atoms, probs }
    }

    /// Atoms with positive probability.
    pub fn pruned(&self) -> Self {
        let (atoms, probs) = self.atoms.iter().zip(&self.probs).filter(|(_, &p)| p > 0.0).map(|(a, &p)| (a.clone(), p)).unzip();
        Self { atoms, probs }
    }
}

/// `H(X | Y)` for a distribution over pairs `(x, y)`, as `H(X,Y) - H(Y)`.
pub fn conditional_entropy<X: Clone + Ord, Y: Clone + Ord>(joint: &FiniteDistribution<(X, Y)>) -> f64 {
    joint.entropy() - joint.map(|(_, y)| y.clone()).entropy()
}

#[derive(Clone, Debug, PartialEq)]
pub struct UniformBound {
    pub slack: f64,
    pub equality: bool,
}

/// `log2 |supp X| - H(X)` on the pruned support.
pub fn uniform_bound_check<A: Clone + Ord>(x: &FiniteDistribution<A>) -> UniformBound {
    let p = x.pruned();
    let slack = (p.probs.len() as f64).log2() - p.entropy();
    let max = p.probs.iter().cloned().fold(f64::MIN, f64::max);
    let min = p.probs.iter().cloned().fold(f64::MAX, f64::min);
    UniformBound { slack, equality: max - min < PROB_TOL }
}

#[derive(Clone, Debug, PartialEq)]
pub enum JensenGap {
    Finite(f64),
    /// Some `x_{s,t} = 0` carries positive probability, so the left side is infinite.
    Infinite,
}

/// `E[-log2 x_{s,t}] - (H(t | s) - log2 A)` for a joint law on index pairs.
pub fn jensen_bound_check(x: &[Vec<f64>], a: f64, joint: &FiniteDistribution<(usize, usize)>) -> Result<JensenGap> {
    if x.iter().any(|row| row.iter().any(|&v| v < 0.0)) {
        return Err(Error::Invalid("negative entry".into()));
    }
    if x.iter().any(|row| row.iter().sum::<f64>() > a * (1.0 + PROB_TOL)) {
        return Err(Error::RowSumExceedsA);
    }
    let mut lhs = 0.0;
    for (&(s, t), &p) in joint.atoms.iter().zip(&joint.probs) {
        if p <= 0.0 {
            continue;
        }
        if x[s][t] == 0.0 {
            return Ok(JensenGap::Infinite);
        }
        lhs -= p * x[s][t].log2();
    }
    let rhs = conditional_entropy(&joint.map(|&(s, t)| (t, s))) - a.log2();
    Ok(JensenGap::Finite(lhs - rhs))
}

/// Weights on coordinate subsets, with exact covering test.
fn check_cover(d: usize, subsets: &[Vec<usize>], weights: &[Rational]) -> Result<()> {
    if subsets.len() != weights.len() {
        return Err(Error::SizeMismatch("one weight per subset".into()));
    }
    for j in 1..=d {
        let load = subsets
            .iter()
            .zip(weights)
            .filter(|(s, _)| s.contains(&j))
            .fold(Rational::zero(), |acc, (_, w)| acc + w);
        if load < Rational::one() {
            return Err(Error::NotCovering);
        }
    }
    Ok(())
}

/// `Σ w_i H(X_{I_i}) - H(X_1..X_d)` for a law on `d`-tuples.
pub fn shearer_check(subsets: &[Vec<usize>], weights: &[Rational], joint: &FiniteDistribution<Vec<usize>>) -> Result<f64> {
    let d = joint.atoms.first().map(Vec::len).unwrap_or(0);
    check_cover(d, subsets, weights)?;
    let lhs = joint.entropy();
    let rhs: f64 = subsets
        .iter()
        .zip(weights)
        .map(|(s, w)| to_f64(w) * joint.map(|x| s.iter().map(|&j| x[j - 1]).collect::<Vec<_>>()).entropy())
        .sum();
    Ok(rhs - lhs)
}

#[derive(Clone, Debug, PartialEq)]
pub struct InequalityValues {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

impl InequalityValues {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        Self { lhs, rhs, slack: rhs - lhs }
    }

    /// Relative test `slack ≥ -tol · rhs`.
    pub fn holds_relative(&self, tol: f64) -> bool {
        self.slack >= -tol * self.rhs.abs().max(1.0)
    }
}

fn pow_w(x: f64, w: f64) -> f64 {
    if w == 0.0 {
        1.0
    } else {
        x.powf(w)
    }
}

/// `Σ_{x∈S^d} Π f_i(x_{I_i})^{w_i}` against `Π (Σ f_i)^{w_i}`.
pub fn holder_check(inst: &AxisInstance, weights: &[Rational]) -> Result<InequalityValues> {
    check_cover(inst.d, &inst.subsets, weights)?;
    let w: Vec<f64> = weights.iter().map(to_f64).collect();
    let total = inst.s.pow(inst.d as u32);
    let mut x = vec![0usize; inst.d];
    let mut lhs = 0.0;
    for _ in 0..total {
        lhs += (0..inst.subsets.len())
            .map(|i| pow_w(inst.tables[i][inst.table_index(i, &x)] as f64, w[i]))
            .product::<f64>();
        for j in (0..inst.d).rev() {
            x[j] += 1;
            if x[j] < inst.s {
                break;
            }
            x[j] = 0;
        }
    }
    let rhs = inst.tables.iter().zip(&w).map(|(t, &wi)| pow_w(t.iter().sum::<i64>() as f64, wi)).product();
    Ok(InequalityValues::new(lhs, rhs))
}

/// `|T|` against `Π |π_i(T)|^{w_i}`.
pub fn loomis_whitney_check(t: &[Vec<usize>], subsets: &[Vec<usize>], weights: &[Rational]) -> Result<InequalityValues> {
    let d = t.first().map(Vec::len).unwrap_or(0);
    check_cover(d, subsets, weights)?;
    let distinct: BTreeSet<&Vec<usize>> = t.iter().collect();
    let rhs = subsets
        .iter()
        .zip(weights)
        .map(|(s, w)| {
            let proj: BTreeSet<Vec<usize>> = t.iter().map(|x| s.iter().map(|&j| x[j - 1]).collect()).collect();
            pow_w(proj.len() as f64, to_f64(w))
        })
        .product();
    Ok(InequalityValues::new(distinct.len() as f64, rhs))
}

/// `n`-th tensor power of an axis instance: ground set `S^n`, with
/// `f^{(n)}(q) = Π_k f(q^{(k)})`.
pub fn tensor_power(inst: &AxisInstance, n: usize) -> AxisInstance {
    let s = inst.s;
    let sn = s.pow(n as u32);
    let tables = inst
        .subsets
        .iter()
        .zip(&inst.tables)
        .map(|(sub, table)| {
            let len = sn.pow(sub.len() as u32);
            (0..len)
                .map(|code| {
                    // digits of `code` in base s^n, one per coordinate of I_i
                    let mut coords = vec![0usize; sub.len()];
                    let mut c = code;
                    for slot in coords.iter_mut().rev() {
                        *slot = c % sn;
                        c /= sn;
                    }
                    (0..n)
                        .map(|k| {
                            let idx = coords.iter().fold(0, |acc, &q| acc * s + (q / s.pow(k as u32)) % s);
                            table[idx]
                        })
                        .product::<i64>()
                })
                .collect()
        })
        .collect();
    AxisInstance { d: inst.d, s: sn, subsets: inst.subsets.clone(), tables }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TensorTrend {
    pub constant: f64,
    /// Per power `n`: the tensored left side and `(C · rhs_n)^{1/n}`.
    pub lhs: Vec<f64>,
    pub rooted_bounds: Vec<f64>,
    pub clean_bound: f64,
    pub nonincreasing: bool,
    pub approaching: bool,
    pub tensored_holds: bool,
}

/// Build `f^{(n)}` explicitly for `n = 1..=max_n` and follow the rooted
/// weakened bound toward the clean one.
pub fn tensor_power_trend(inst: &AxisInstance, weights: &[Rational], max_n: usize) -> Result<TensorTrend> {
    let h = inst.pattern()?;
    let w = WeightFunction::new(weights.to_vec())?;
    let c = crate::hypergraph::constant_c(&h, &w)?.value;
    let mut lhs = Vec::new();
    let mut roots = Vec::new();
    let mut tensored_holds = true;
    let mut clean = 0.0;
    for n in 1..=max_n {
        let t = tensor_power(inst, n);
        let v = holder_check(&t, weights)?;
        if n == 1 {
            clean = v.rhs;
        }
        tensored_holds &= v.lhs <= c * v.rhs * (1.0 + SLACK_TOL);
        lhs.push(v.lhs);
        roots.push((c * v.rhs).powf(1.0 / n as f64));
    }
    let nonincreasing = roots.windows(2).all(|w| w[1] <= w[0] * (1.0 + SLACK_TOL));
    let approaching = roots.windows(2).all(|w| (w[1] - clean).abs() <= (w[0] - clean).abs() * (1.0 + SLACK_TOL) + SLACK_TOL);
    Ok(TensorTrend { constant: c, lhs, rooted_bounds: roots, clean_bound: clean, nonincreasing, approaching, tensored_holds })
}

/// Pattern hypergraph of a Shearer or Hölder instance.
pub fn subsets_pattern(d: usize, subsets: &[Vec<usize>]) -> Result<Hypergraph> {
    let colors: Vec<usize> = (1..=subsets.len()).collect();
    Hypergraph::new(d, subsets, Some(&colors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn basic_entropies() {
        assert!((entropy(&[0.25; 4]) - 2.0).abs() < 1e-15);
        assert_eq!(entropy(&[1.0, 0.0]), 0.0);
        let joint = FiniteDistribution::new(
            vec![(0, 0), (0, 1), (1, 0), (1, 1)],
            vec![0.5 * 0.25, 0.5 * 0.75, 0.5 * 0.25, 0.5 * 0.75],
        )
        .unwrap();
        let hx = joint.map(|(x, _)| *x).entropy();
        assert!((conditional_entropy(&joint) - hx).abs() < 1e-12);
    }

    #[test]
    fn uniform_bound_cases() {
        let b = uniform_bound_check(&FiniteDistribution::new(vec![0, 1], vec![0.25, 0.75]).unwrap());
        assert!((b.slack - 0.188_721_875_540_867).abs() < 1e-12);
        let pm = FiniteDistribution::new((0..8).collect(), (0..8).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect()).unwrap();
        let b = uniform_bound_check(&pm);
        assert_eq!(b.slack, 0.0);
        assert!(b.equality);
    }

    #[test]
    fn jensen_cases() {
        let x = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        let u = FiniteDistribution::uniform(vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
        match jensen_bound_check(&x, 2.0, &u).unwrap() {
            JensenGap::Finite(g) => assert!(g.abs() < 1e-12),
            JensenGap::Infinite => panic!(),
        }
        let z = vec![vec![0.0, 2.0], vec![1.0, 1.0]];
        assert_eq!(jensen_bound_check(&z, 2.0, &u).unwrap(), JensenGap::Infinite);
        assert_eq!(jensen_bound_check(&z, 1.0, &u).unwrap_err(), Error::RowSumExceedsA);
    }

    #[test]
    fn shearer_and_holder_examples() {
        let same = FiniteDistribution::new(vec![vec![0, 0], vec![1, 1]], vec![0.5, 0.5]).unwrap();
        let s = shearer_check(&[vec![1], vec![2]], &[int(1), int(1)], &same).unwrap();
        assert!((s - 1.0).abs() < 1e-12);
        assert_eq!(shearer_check(&[vec![1]], &[int(1)], &same).unwrap_err(), Error::NotCovering);
        let inst = AxisInstance { d: 2, s: 3, subsets: vec![vec![1], vec![2]], tables: vec![vec![1, 2, 3], vec![4, 0, 1]] };
        let v = holder_check(&inst, &[int(1), int(1)]).unwrap();
        assert_eq!(v.lhs, v.rhs);
        let diag: Vec<Vec<usize>> = (0..5).map(|i| vec![i, i]).collect();
        let v = loomis_whitney_check(&diag, &[vec![1], vec![2]], &[int(1), int(1)]).unwrap();
        assert_eq!((v.lhs, v.rhs), (5.0, 25.0));
    }

    #[test]
    fn tensor_powers_multiply() {
        let inst = AxisInstance {
            d: 3,
            s: 2,
            subsets: vec![vec![1, 2], vec![2, 3], vec![1, 3]],
            tables: vec![vec![1, 2, 0, 3], vec![2, 1, 1, 1], vec![1, 0, 2, 1]],
        };
        let w = vec![crate::rational::ratio(1, 2); 3];
        let t = tensor_power_trend(&inst, &w, 3).unwrap();
        assert!((t.lhs[1] - t.lhs[0].powi(2)).abs() < 1e-9 * t.lhs[1]);
        assert!((t.lhs[2] - t.lhs[0].powi(3)).abs() < 1e-9 * t.lhs[2]);
        assert!(t.tensored_holds && t.approaching);
    }
}
