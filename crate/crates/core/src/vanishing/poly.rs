//! Multivariate polynomials, Hasse derivatives, charts on flats and the
//! derivative functionals `g ↦ H^γ(g∘A)(0)`.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::flat::Flat;
use crate::linalg::{rank, Matrix};
use crate::witness::Witness;

/// `C(a, b)` reduced in the field via Pascal's rule, so it is correct in
/// every characteristic.
pub fn field_binom<S: Field>(a: u32, b: u32) -> S {
    if b > a {
        return S::zero();
    }
    let b = b.min(a - b) as usize;
    let mut row = vec![S::zero(); b + 1];
    row[0] = S::one();
    for i in 1..=a as usize {
        for j in (1..=b.min(i)).rev() {
            row[j] = row[j].clone() + row[j - 1].clone();
        }
    }
    row[b].clone()
}

/// Sparse polynomial in `nvars` variables. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<S: Field> {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, S>,
}

impl<S: Field> Poly<S> {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, S)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: S) {
        assert_eq!(exps.len(), self.nvars, "exponent length");
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn coeff(&self, exps: &[u32]) -> S {
        self.terms.get(exps).cloned().unwrap_or_else(S::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &S)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn eval(&self, x: &[S]) -> S {
        self.terms.iter().fold(S::zero(), |acc, (e, c)| {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    t = t * xi.clone();
                }
            }
            acc + t
        })
    }
}

/// Hasse derivative: `x^β ↦ C(β, γ) x^{β-γ}`, zero when some `β_j < γ_j`.
pub fn hasse_derivative<S: Field>(poly: &Poly<S>, gamma: &[u32]) -> Poly<S> {
    assert_eq!(gamma.len(), poly.nvars, "order length");
    let mut out = Poly::zero(poly.nvars);
    for (beta, c) in poly.terms() {
        if beta.iter().zip(gamma).any(|(b, g)| b < g) {
            continue;
        }
        let mut coeff = c.clone();
        for (&b, &g) in beta.iter().zip(gamma) {
            coeff = coeff * field_binom::<S>(b, g);
        }
        out.add_term(beta.iter().zip(gamma).map(|(b, g)| b - g).collect(), coeff);
    }
    out
}

/// Exponent vectors of `k` variables with total degree at most `n`, grouped
/// by degree and in decreasing lexicographic order within each degree.
#[derive(Clone, Debug)]
pub struct MonomialIndex {
    k: usize,
    n: usize,
    monos: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    degree_start: Vec<usize>,
}

fn push_desc(k: usize, r: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if prefix.len() + 1 == k {
        prefix.push(r);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in (0..=r).rev() {
        prefix.push(first);
        push_desc(k, r - first, prefix, out);
        prefix.pop();
    }
}

/// All `γ ∈ Z≥0^k` with `|γ| = r`, in decreasing lexicographic order.
pub fn exponents_of_degree(k: usize, r: u32) -> Vec<Vec<u32>> {
    if k == 0 {
        return if r == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    push_desc(k, r, &mut Vec::new(), &mut out);
    out
}

impl MonomialIndex {
    pub fn new(k: usize, n: usize) -> Self {
        let mut monos = Vec::new();
        let mut degree_start = Vec::with_capacity(n + 2);
        for r in 0..=n as u32 {
            degree_start.push(monos.len());
            monos.extend(exponents_of_degree(k, r));
        }
        degree_start.push(monos.len());
        let index = monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        Self { k, n, monos, index, degree_start }
    }

    pub fn vars(&self) -> usize {
        self.k
    }
    pub fn max_degree(&self) -> usize {
        self.n
    }
    pub fn len(&self) -> usize {
        self.monos.len()
    }
    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }
    pub fn monomial(&self, i: usize) -> &[u32] {
        &self.monos[i]
    }
    pub fn position(&self, exps: &[u32]) -> Option<usize> {
        self.index.get(exps).copied()
    }

    /// Index range of the degree-`r` exponents (decreasing lex order).
    pub fn degree_range(&self, r: usize) -> std::ops::Range<usize> {
        self.degree_start[r]..self.degree_start[r + 1]
    }
}

/// Bijective affine map `u ↦ point + Σ_l u_l columns[l]` onto a flat.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart<S: Field> {
    pub point: Vec<S>,
    pub columns: Matrix<S>,
}

impl<S: Field> Chart<S> {
    /// The flat's own direction basis, moved to `p`.
    pub fn canonical(flat: &Flat<S>, p: &[S]) -> Self {
        Self { point: p.to_vec(), columns: flat.directions().clone() }
    }

    /// `A_p ∘ ι^{(e)}`: the witness columns `v_j`, `j ∉ e`, ascending.
    pub fn from_witness(w: &Witness<S>, edge: u64) -> Self {
        Self { point: w.point.clone(), columns: w.chart_columns(edge) }
    }

    /// Image equals `flat` and the map is injective.
    pub fn is_valid_for(&self, flat: &Flat<S>) -> bool {
        self.columns.len() == flat.dim()
            && flat.contains(&self.point)
            && self.columns.iter().all(|c| flat.contains_direction(c))
            && rank(&self.columns) == flat.dim()
    }

    /// `(y_p, T)` with `y = y_p + T u` in the flat's canonical coordinates.
    fn reference_form(&self, flat: &Flat<S>) -> (Vec<S>, Matrix<S>) {
        let yp = flat.coordinates(&self.point).expect("chart point on flat");
        let piv = flat.pivots();
        let t = (0..piv.len()).map(|l| self.columns.iter().map(|c| c[piv[l]].clone()).collect()).collect();
        (yp, t)
    }
}

/// Rows of every functional `g ↦ H^γ(g∘A)(0)`, `|γ| ≤ n`, on polynomials
/// of degree at most `n` on `flat` in its canonical coordinates. Row `i`
/// belongs to `index.monomial(i)`; column `j` is the coefficient of
/// `y^{index.monomial(j)}`.
pub fn functional_table<S: Field>(flat: &Flat<S>, chart: &Chart<S>, index: &MonomialIndex) -> Result<Matrix<S>> {
    if !chart.is_valid_for(flat) {
        return Err(Error::Invalid("chart does not parametrize the flat".into()));
    }
    let k = flat.dim();
    let len = index.len();
    let (yp, t) = chart.reference_form(flat);
    // expansions[b] holds the u-coefficients of Π_l (y_p,l + (T u)_l)^{β_l}
    let mut expansions: Vec<Vec<S>> = Vec::with_capacity(len);
    for b in 0..len {
        let beta = index.monomial(b);
        let Some(l) = beta.iter().position(|&x| x > 0) else {
            let mut one = vec![S::zero(); len];
            one[0] = S::one();
            expansions.push(one);
            continue;
        };
        let mut parent_exp = beta.to_vec();
        parent_exp[l] -= 1;
        let parent = &expansions[index.position(&parent_exp).expect("parent monomial")];
        let mut next = vec![S::zero(); len];
        for (g, a) in parent.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            next[g] = next[g].clone() + a.clone() * yp[l].clone();
            let gamma = index.monomial(g);
            for j in 0..k {
                if t[l][j].is_zero() {
                    continue;
                }
                let mut up = gamma.to_vec();
                up[j] += 1;
                if let Some(pos) = index.position(&up) {
                    next[pos] = next[pos].clone() + a.clone() * t[l][j].clone();
                }
            }
        }
        expansions.push(next);
    }
    Ok((0..len).map(|g| expansions.iter().map(|e| e[g].clone()).collect()).collect())
}

/// The single functional row for `γ`.
pub fn functional_row<S: Field>(flat: &Flat<S>, chart: &Chart<S>, gamma: &[u32], n: usize) -> Result<Vec<S>> {
    if gamma.iter().sum::<u32>() as usize > n {
        return Err(Error::DegreeOverflow(n));
    }
    if gamma.len() != flat.dim() {
        return Err(Error::SizeMismatch(format!("order has {} entries for a {}-flat", gamma.len(), flat.dim())));
    }
    let index = MonomialIndex::new(flat.dim(), n);
    let table = functional_table(flat, chart, &index)?;
    Ok(table[index.position(gamma).expect("order within degree")].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Gf, Gf61};
    use crate::rational::{int, Rational};

    #[test]
    fn binomials_in_small_characteristic() {
        assert_eq!(field_binom::<Gf<7>>(7, 3), Gf::<7>::zero());
        assert_eq!(field_binom::<Gf<7>>(8, 1), Gf::<7>::from_i64(1));
        assert_eq!(field_binom::<Rational>(10, 4), int(210));
        assert_eq!(field_binom::<Rational>(3, 5), int(0));
    }

    #[test]
    fn hasse_on_cubes() {
        let x3 = Poly::from_terms(1, [(vec![3], int(1))]);
        assert_eq!(hasse_derivative(&x3, &[0]), x3);
        assert_eq!(hasse_derivative(&x3, &[1]), Poly::from_terms(1, [(vec![2], int(3))]));
        assert_eq!(hasse_derivative(&x3, &[2]), Poly::from_terms(1, [(vec![1], int(3))]));
        assert!(hasse_derivative(&x3, &[4]).is_zero());
    }

    #[test]
    fn degree_order_is_decreasing_lex() {
        assert_eq!(exponents_of_degree(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        let idx = MonomialIndex::new(3, 4);
        assert_eq!(idx.len(), 35);
        assert_eq!(idx.degree_range(1), 1..4);
    }

    #[test]
    fn identity_chart_selects_coefficients() {
        let o = vec![Gf61::zero(); 2];
        let plane = Flat::new(o.clone(), crate::linalg::identity(2));
        let chart = Chart::canonical(&plane, &o);
        let idx = MonomialIndex::new(2, 3);
        let table = functional_table(&plane, &chart, &idx).unwrap();
        for (i, row) in table.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                assert_eq!(x.is_zero(), i != j);
            }
        }
        assert_eq!(functional_row(&plane, &chart, &[2, 2], 3).unwrap_err(), Error::DegreeOverflow(3));
    }
}
