use std::collections::HashMap;
use std::hash::Hash;

use log::warn;

use crate::connectives::ResidualTriplet;
use crate::error::{Error, Result};
use crate::relations::RelationMatrix;
use crate::scalar::Scalar;

/// Crisp equivalence `S(u, v) = 1` iff `u` and `v` carry the same label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionRelation {
    classes: Vec<usize>,
    n_classes: usize,
}

impl DecisionRelation {
    /// Class ids are assigned in order of first appearance.
    pub fn from_labels<L: Eq + Hash + Clone>(labels: &[L]) -> Self {
        let mut ids: HashMap<L, usize> = HashMap::new();
        let classes = labels
            .iter()
            .map(|l| {
                let next = ids.len();
                *ids.entry(l.clone()).or_insert(next)
            })
            .collect();
        DecisionRelation {
            classes,
            n_classes: ids.len(),
        }
    }

    pub fn from_class_ids(ids: &[usize]) -> Self {
        Self::from_labels(ids)
    }

    pub fn n(&self) -> usize {
        self.classes.len()
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    #[inline]
    pub fn class_of(&self, u: usize) -> usize {
        self.classes[u]
    }

    pub fn classes(&self) -> &[usize] {
        &self.classes
    }

    #[inline]
    pub fn same(&self, u: usize, v: usize) -> bool {
        self.classes[u] == self.classes[v]
    }
}

/// A pruned constraint `T(β_u, β_v) ≤ bound` with `u < v` and `bound < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairBound<S> {
    pub u: usize,
    pub v: usize,
    pub bound: S,
    /// `φ(bound)`, the right-hand side offset in `α_u + α_v ≤ 1 + φ(bound)`.
    pub phi_bound: S,
}

/// `M(u, v) = I(R(u,v), S(u,v))` together with `M_φ = φ ∘ M`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundMatrix<S> {
    n: usize,
    values: Vec<S>,
    phi_values: Vec<S>,
}

impl<S: Scalar> BoundMatrix<S> {
    /// Wraps precomputed bounds (row-major).
    pub fn from_values(n: usize, values: Vec<S>, triplet: &ResidualTriplet<S>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                actual: values.len(),
            });
        }
        if let Some(bad) = values.iter().find(|v| !v.is_degree()) {
            return Err(Error::Domain {
                what: "bound",
                value: bad.to_f64_lossy(),
            });
        }
        let iso = triplet.isomorphism();
        let phi_values = values.iter().map(|&m| iso.apply(m)).collect();
        Ok(BoundMatrix {
            n,
            values,
            phi_values,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> S {
        self.values[u * self.n + v]
    }

    #[inline]
    pub fn phi(&self, u: usize, v: usize) -> S {
        self.phi_values[u * self.n + v]
    }

    /// Bound applying to the unordered pair: `min(M(u,v), M(v,u))`.
    #[inline]
    pub fn pair(&self, u: usize, v: usize) -> S {
        self.get(u, v).min(self.get(v, u))
    }

    pub fn is_symmetric(&self, tol: S) -> bool {
        (0..self.n).all(|u| (0..u).all(|v| (self.get(u, v) - self.get(v, u)).abs() <= tol))
    }

    /// Constraints that are not implied by the box `[0,1]`.
    ///
    /// Pairs with bound 1 (same class or unrelated instances) are dropped.
    pub fn pair_bounds(&self) -> Vec<PairBound<S>> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                let bound = self.pair(u, v);
                if bound < S::one() {
                    out.push(PairBound {
                        u,
                        v,
                        bound,
                        phi_bound: self.phi(u, v).min(self.phi(v, u)),
                    });
                }
            }
        }
        out
    }
}

/// Builds `M(u, v) = I(R(u,v), S(u,v))`: 1 within a class, `N(R(u,v))` across classes.
///
/// Logs a warning when `rel` is not symmetric, since the multi-class problem
/// assumes a T-equivalence.
pub fn build_bounds<S: Scalar>(
    rel: &RelationMatrix<S>,
    decision: &DecisionRelation,
    triplet: &ResidualTriplet<S>,
    tol: S,
) -> Result<BoundMatrix<S>> {
    let n = rel.n();
    if decision.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: decision.n(),
        });
    }
    triplet.require_residuated()?;
    let mut asym = S::zero();
    let mut values = Vec::with_capacity(n * n);
    for u in 0..n {
        for v in 0..n {
            asym = asym.max((rel.get(u, v) - rel.get(v, u)).abs());
            let s = if decision.same(u, v) {
                S::one()
            } else {
                S::zero()
            };
            values.push(triplet.i(rel.get(u, v), s));
        }
    }
    if asym > tol {
        warn!("relation is not symmetric (max asymmetry {asym}); multi-class bounds assume a T-equivalence");
    }
    BoundMatrix::from_values(n, values, triplet)
}
