//! Fractional edge covers.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, WeightFunction};
use crate::lp::{solve, Constraint, LpOutcome, Relation, Sense};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq)]
pub struct CoverSolution {
    pub value: Rational,
    pub weights: WeightFunction,
    /// Vertices (1-based) whose load is exactly 1.
    pub tight_vertices: Vec<usize>,
}

fn isolated(h: &Hypergraph) -> Option<usize> {
    (1..=h.d()).find(|&j| h.degree(j) == 0)
}

/// Minimum total weight of a fractional edge cover.
pub fn rho_star(h: &Hypergraph) -> Result<CoverSolution> {
    if let Some(j) = isolated(h) {
        return Err(Error::IsolatedVertex(j));
    }
    let cons: Vec<Constraint> = (1..=h.d())
        .map(|j| Constraint {
            coeffs: h
                .edges()
                .iter()
                .map(|&e| if e >> (j - 1) & 1 == 1 { Rational::one() } else { Rational::zero() })
                .collect(),
            rel: Relation::Ge,
            rhs: Rational::one(),
        })
        .collect();
    let c = vec![Rational::one(); h.num_edges()];
    match solve(Sense::Minimize, &c, &cons) {
        LpOutcome::Optimal { value, x } => {
            let weights = WeightFunction::new(x)?;
            let tight_vertices = weights
                .loads(h)?
                .iter()
                .enumerate()
                .filter(|(_, l)| l.is_one())
                .map(|(j, _)| j + 1)
                .collect();
            Ok(CoverSolution { value, weights, tight_vertices })
        }
        // every vertex lies in an edge, so the all-ones weight is feasible
        // and the objective is bounded below by zero
        _ => unreachable!("cover LP is feasible and bounded"),
    }
}

/// Maximum fractional vertex packing: `max Σ y_j` with `Σ_{j∈e} y_j ≤ 1`.
/// Solved as its own LP so it can audit [`rho_star`] by duality.
pub fn max_packing(h: &Hypergraph) -> Result<(Rational, Vec<Rational>)> {
    if let Some(j) = isolated(h) {
        return Err(Error::IsolatedVertex(j));
    }
    let cons: Vec<Constraint> = h
        .edges()
        .iter()
        .map(|&e| Constraint {
            coeffs: (1..=h.d())
                .map(|j| if e >> (j - 1) & 1 == 1 { Rational::one() } else { Rational::zero() })
                .collect(),
            rel: Relation::Le,
            rhs: Rational::one(),
        })
        .collect();
    let c = vec![Rational::one(); h.d()];
    match solve(Sense::Maximize, &c, &cons) {
        LpOutcome::Optimal { value, x } => Ok((value, x)),
        _ => unreachable!("packing LP is feasible and bounded without isolated vertices"),
    }
}

/// `Σ_{e∋j} w(e) - 1` for each vertex.
pub fn verify_cover(h: &Hypergraph, w: &WeightFunction) -> Result<Vec<Rational>> {
    Ok(w.loads(h)?.into_iter().map(|l| l - Rational::one()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn small_covers() {
        let h = Hypergraph::new(2, &[vec![1, 2]], None).unwrap();
        let s = rho_star(&h).unwrap();
        assert_eq!(s.value, int(1));
        assert_eq!(s.weights.weights(), &[int(1)]);
        let s = rho_star(&Hypergraph::cycle(5)).unwrap();
        assert_eq!(s.value, ratio(5, 2));
        assert_eq!(max_packing(&Hypergraph::cycle(5)).unwrap().0, ratio(5, 2));
        let h = Hypergraph::new(3, &[vec![1, 2]], None).unwrap();
        assert_eq!(rho_star(&h), Err(Error::IsolatedVertex(3)));
    }

    #[test]
    fn slacks() {
        let h = Hypergraph::new(4, &[vec![1, 2], vec![3, 4]], None).unwrap();
        let w = WeightFunction::new(vec![int(1), ratio(1, 2)]).unwrap();
        assert_eq!(verify_cover(&h, &w).unwrap(), vec![int(0), int(0), ratio(-1, 2), ratio(-1, 2)]);
    }
}
