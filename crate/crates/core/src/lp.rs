//! Dense two-phase simplex over exact rationals with Bland's rule.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rel: Relation,
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Rational, x: Vec<Rational> },
    Infeasible,
    Unbounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    obj: Vec<Rational>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        &self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (x, p) in self.obj.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Run Bland-rule iterations over columns `< allowed`. Returns `false`
    /// when the objective is unbounded below.
    fn optimize(&mut self, allowed: usize) -> bool {
        loop {
            let Some(c) = (0..allowed).find(|&j| self.obj[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < br || (ratio == br && self.basis[i] < self.basis[bi]) {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }
}

/// Optimize `c·x` subject to `constraints` and `x ≥ 0`.
pub fn solve(sense: Sense, c: &[Rational], constraints: &[Constraint]) -> LpOutcome {
    let n = c.len();
    let m = constraints.len();
    // normalise to nonnegative right-hand sides
    let cons: Vec<Constraint> = constraints
        .iter()
        .map(|k| {
            assert_eq!(k.coeffs.len(), n, "constraint width");
            if k.rhs.is_negative() {
                let rel = match k.rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                Constraint { coeffs: k.coeffs.iter().map(|x| -x).collect(), rel, rhs: -k.rhs.clone() }
            } else {
                k.clone()
            }
        })
        .collect();
    let n_slack = cons.iter().filter(|k| k.rel != Relation::Eq).count();
    let n_art = cons.iter().filter(|k| k.rel != Relation::Le).count();
    let width = n + n_slack + n_art;
    let art_start = n + n_slack;
    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let (mut s, mut a) = (n, art_start);
    for k in &cons {
        let mut row = vec![Rational::zero(); width + 1];
        row[..n].clone_from_slice(&k.coeffs);
        row[width] = k.rhs.clone();
        match k.rel {
            Relation::Le => {
                row[s] = Rational::one();
                basis.push(s);
                s += 1;
            }
            Relation::Ge => {
                row[s] = -Rational::one();
                s += 1;
                row[a] = Rational::one();
                basis.push(a);
                a += 1;
            }
            Relation::Eq => {
                row[a] = Rational::one();
                basis.push(a);
                a += 1;
            }
        }
        rows.push(row);
    }
    // phase one: minimise the sum of artificials
    let mut obj = vec![Rational::zero(); width + 1];
    for j in art_start..width {
        obj[j] = Rational::one();
    }
    let mut t = Tableau { rows, obj, basis, width };
    for i in 0..m {
        if t.basis[i] >= art_start {
            let row = t.rows[i].clone();
            for (x, v) in t.obj.iter_mut().zip(&row) {
                *x -= v;
            }
        }
    }
    t.optimize(width);
    if !t.obj[width].is_zero() {
        return LpOutcome::Infeasible;
    }
    // drive remaining artificials out of the basis, dropping redundant rows
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= art_start {
            if let Some(j) = (0..art_start).find(|&j| !t.rows[i][j].is_zero()) {
                t.pivot(i, j);
                i += 1;
            } else {
                t.rows.remove(i);
                t.basis.remove(i);
            }
        } else {
            i += 1;
        }
    }
    // phase two
    let sign = match sense {
        Sense::Minimize => Rational::one(),
        Sense::Maximize => -Rational::one(),
    };
    let mut obj = vec![Rational::zero(); width + 1];
    for j in 0..n {
        obj[j] = &c[j] * &sign;
    }
    for (i, &b) in t.basis.iter().enumerate() {
        if !obj[b].is_zero() {
            let f = obj[b].clone();
            for (x, v) in obj.iter_mut().zip(&t.rows[i]) {
                *x -= &f * v;
            }
        }
    }
    t.obj = obj;
    if !t.optimize(art_start) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n {
            x[b] = t.rhs(i).clone();
        }
    }
    let value = x.iter().zip(c).fold(Rational::zero(), |acc, (xi, ci)| acc + xi * ci);
    LpOutcome::Optimal { value, x }
}
