//! Dense exact linear algebra over any [`Field`]. Matrices are row-major
//! `Vec<Vec<S>>`; vectors are `Vec<S>`.

use crate::field::Field;

pub type Matrix<S> = Vec<Vec<S>>;

/// Reduce `m` in place to reduced row echelon form, drop zero rows, and
/// return the pivot column of each remaining row.
pub fn rref<S: Field>(m: &mut Matrix<S>) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let v = m[r][j].clone();
                    m[i][j] = m[i][j].clone() - f.clone() * v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    pivots
}

pub fn rank<S: Field>(m: &[Vec<S>]) -> usize {
    let mut a = m.to_vec();
    rref(&mut a).len()
}

/// Basis of `{x : m x = 0}` for a matrix with `cols` columns.
pub fn nullspace<S: Field>(m: &[Vec<S>], cols: usize) -> Matrix<S> {
    let mut a = m.to_vec();
    let pivots = rref(&mut a);
    let mut is_pivot = vec![None; cols];
    for (row, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(row);
    }
    let mut basis = Vec::new();
    for free in 0..cols {
        if is_pivot[free].is_some() {
            continue;
        }
        let mut v = vec![S::zero(); cols];
        v[free] = S::one();
        for (row, &c) in pivots.iter().enumerate() {
            v[c] = -a[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

pub fn determinant<S: Field>(m: &[Vec<S>]) -> S {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = S::one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return S::zero();
        };
        if pr != c {
            a.swap(pr, c);
            det = -det;
        }
        det = det * a[c][c].clone();
        let inv = a[c][c].inv().expect("nonzero pivot");
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone() * inv.clone();
            for j in c..n {
                let v = a[c][j].clone();
                a[i][j] = a[i][j].clone() - f.clone() * v;
            }
        }
    }
    det
}

/// Solve `a x = b`. Returns a particular solution and a nullspace basis, or
/// `None` when the system is inconsistent.
pub fn solve_affine<S: Field>(a: &[Vec<S>], b: &[S], cols: usize) -> Option<(Vec<S>, Matrix<S>)> {
    let mut aug: Matrix<S> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![S::zero(); cols];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = aug[row][cols].clone();
    }
    Some((x, nullspace(a, cols)))
}

pub fn mat_vec<S: Field>(m: &[Vec<S>], v: &[S]) -> Vec<S> {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn dot<S: Field>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn sub_vec<S: Field>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn add_vec<S: Field>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn scale_vec<S: Field>(a: &[S], s: &S) -> Vec<S> {
    a.iter().map(|x| x.clone() * s.clone()).collect()
}

pub fn transpose<S: Field>(m: &[Vec<S>]) -> Matrix<S> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_mul<S: Field>(a: &[Vec<S>], b: &[Vec<S>]) -> Matrix<S> {
    let bt = transpose(b);
    a.iter().map(|row| bt.iter().map(|col| dot(row, col)).collect()).collect()
}

pub fn identity<S: Field>(n: usize) -> Matrix<S> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect())
        .collect()
}

/// Intersection of two row spaces in `S^cols`, returned as a basis.
pub fn subspace_intersection<S: Field>(u: &[Vec<S>], v: &[Vec<S>], cols: usize) -> Matrix<S> {
    let mut ann = nullspace(u, cols);
    ann.extend(nullspace(v, cols));
    let mut out = nullspace(&ann, cols);
    rref(&mut out);
    out
}

/// Incrementally maintained row echelon store. Each stored row is zero at
/// the pivots of all rows stored before it, so reduction is one pass.
#[derive(Clone, Debug)]
pub struct EchelonStore<S> {
    cols: usize,
    rows: Vec<(usize, Vec<S>)>,
}

impl<S: Field> EchelonStore<S> {
    pub fn new(cols: usize) -> Self {
        Self { cols, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.cols
    }

    /// Reduce `row` against the store; keep it and return `true` when it
    /// is independent of what is already stored.
    pub fn insert(&mut self, mut row: Vec<S>) -> bool {
        for (p, r) in &self.rows {
            if row[*p].is_zero() {
                continue;
            }
            let f = row[*p].clone();
            for (x, y) in row.iter_mut().zip(r) {
                if !y.is_zero() {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
        }
        let Some(p) = row.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = row[p].inv().expect("nonzero");
        for x in row.iter_mut() {
            *x = x.clone() * inv.clone();
        }
        self.rows.push((p, row));
        true
    }
}
