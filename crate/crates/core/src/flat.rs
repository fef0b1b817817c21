//! Affine subspaces in canonical form.
//!
//! A flat stores its direction space as a reduced row echelon basis and a
//! basepoint that is zero at every pivot column. Two flats are equal exactly
//! when these canonical forms coincide.

use crate::field::Field;
use crate::linalg::{dot, mat_vec, nullspace, rref, solve_affine, sub_vec, Matrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Flat<S: Field> {
    basepoint: Vec<S>,
    directions: Matrix<S>,
    pivots: Vec<usize>,
}

impl<S: Field> Flat<S> {
    /// Canonicalize `basepoint + span(directions)`. Dependent direction rows
    /// are allowed and dropped.
    pub fn new(basepoint: Vec<S>, directions: Matrix<S>) -> Self {
        let d = basepoint.len();
        let mut dirs: Matrix<S> = directions.into_iter().filter(|r| r.len() == d).collect();
        let pivots = rref(&mut dirs);
        let mut b = basepoint;
        for (row, &c) in dirs.iter().zip(&pivots) {
            if !b[c].is_zero() {
                let f = b[c].clone();
                for (x, y) in b.iter_mut().zip(row) {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
        }
        Self { basepoint: b, directions: dirs, pivots }
    }

    pub fn point(p: Vec<S>) -> Self {
        Self::new(p, Vec::new())
    }

    pub fn ambient(&self) -> usize {
        self.basepoint.len()
    }
    pub fn dim(&self) -> usize {
        self.directions.len()
    }
    pub fn basepoint(&self) -> &[S] {
        &self.basepoint
    }
    pub fn directions(&self) -> &Matrix<S> {
        &self.directions
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of `p` in the canonical chart `y ↦ b + Σ y_l dir_l`,
    /// or `None` when `p` is off the flat.
    pub fn coordinates(&self, p: &[S]) -> Option<Vec<S>> {
        let y: Vec<S> = self.pivots.iter().map(|&c| p[c].clone() - self.basepoint[c].clone()).collect();
        let mut q = self.basepoint.clone();
        for (yl, row) in y.iter().zip(&self.directions) {
            for (x, v) in q.iter_mut().zip(row) {
                *x = x.clone() + yl.clone() * v.clone();
            }
        }
        (q.as_slice() == p).then_some(y)
    }

    pub fn contains(&self, p: &[S]) -> bool {
        p.len() == self.ambient() && self.coordinates(p).is_some()
    }

    /// Whether direction vector `v` lies in the direction space.
    pub fn contains_direction(&self, v: &[S]) -> bool {
        let mut r = v.to_vec();
        for (row, &c) in self.directions.iter().zip(&self.pivots) {
            if !r[c].is_zero() {
                let f = r[c].clone();
                for (x, y) in r.iter_mut().zip(row) {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
        }
        r.iter().all(|x| x.is_zero())
    }

    /// Normals `N` and offsets `c` with `F = {x : N x = c}`.
    pub fn equations(&self) -> (Matrix<S>, Vec<S>) {
        let normals = nullspace(&self.directions, self.ambient());
        let offsets = normals.iter().map(|n| dot(n, &self.basepoint)).collect();
        (normals, offsets)
    }

    pub fn from_equations(normals: &[Vec<S>], offsets: &[S], d: usize) -> Option<Self> {
        solve_affine(normals, offsets, d).map(|(x, dirs)| Self::new(x, dirs))
    }

    /// Image under `x ↦ m x + t`. The ambient dimension becomes `m.len()`.
    pub fn map_affine(&self, m: &[Vec<S>], t: &[S]) -> Self {
        let b: Vec<S> = mat_vec(m, &self.basepoint).into_iter().zip(t).map(|(x, y)| x + y.clone()).collect();
        let dirs = self.directions.iter().map(|dir| mat_vec(m, dir)).collect();
        Self::new(b, dirs)
    }

    /// Deterministic text key for sorting.
    pub fn encode(&self) -> String {
        let mut s = encode_point(&self.basepoint);
        for row in &self.directions {
            s.push('|');
            s.push_str(&encode_point(row));
        }
        s
    }
}

pub fn encode_point<S: Field>(p: &[S]) -> String {
    p.iter().map(|x| x.to_text()).collect::<Vec<_>>().join(",")
}

/// Common intersection of the flats, or `None` when it is empty.
pub fn intersect_flats<S: Field>(flats: &[Flat<S>]) -> Option<Flat<S>> {
    let d = flats.first()?.ambient();
    let mut normals = Vec::new();
    let mut offsets = Vec::new();
    for f in flats {
        let (n, c) = f.equations();
        normals.extend(n);
        offsets.extend(c);
    }
    Flat::from_equations(&normals, &offsets, d)
}

/// Difference `p - q` as a helper for direction checks.
pub fn displacement<S: Field>(p: &[S], q: &[S]) -> Vec<S> {
    sub_vec(p, q)
}
