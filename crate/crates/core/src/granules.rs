//! Fuzzy sets, fuzzy granules and the rough approximations built from them.
//!
//! A plus granule `R⁺_λ(u)` has membership `T(R(v,u), λ)` at `v`; a minus
//! granule `R⁻_λ(u)` uses the inverse relation, `T(R(u,v), λ)`. A fuzzy set is
//! granularly representable (GR) when it is the union of the plus granules of
//! its own memberships, equivalently `T(R(v,u), A(u)) ≤ A(v)` for all pairs.

use crate::connectives::ResidualTriplet;
use crate::error::{Error, Result};
use crate::relations::RelationMatrix;
use crate::scalar::Scalar;

/// Membership vector over the universe; every entry lies in `[0,1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzySet<S> {
    memberships: Vec<S>,
}

impl<S: Scalar> FuzzySet<S> {
    pub fn new(memberships: Vec<S>) -> Result<Self> {
        if let Some(bad) = memberships.iter().find(|m| !m.is_degree()) {
            return Err(Error::Domain {
                what: "membership",
                value: bad.to_f64_lossy(),
            });
        }
        Ok(FuzzySet { memberships })
    }

    pub fn constant(n: usize, value: S) -> Result<Self> {
        Self::new(vec![value; n])
    }

    /// Crisp set with membership 1 on `members`.
    pub fn crisp(members: &[bool]) -> Self {
        FuzzySet {
            memberships: members
                .iter()
                .map(|&m| if m { S::one() } else { S::zero() })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.memberships.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memberships.is_empty()
    }

    #[inline]
    pub fn get(&self, u: usize) -> S {
        self.memberships[u]
    }

    pub fn as_slice(&self) -> &[S] {
        &self.memberships
    }

    pub fn into_vec(self) -> Vec<S> {
        self.memberships
    }

    pub fn iter(&self) -> impl Iterator<Item = S> + '_ {
        self.memberships.iter().copied()
    }

    /// Fuzzy complement `coA(u) = N(A(u))`.
    pub fn complement(&self, triplet: &ResidualTriplet<S>) -> Self {
        FuzzySet {
            memberships: self.iter().map(|m| triplet.n(m)).collect(),
        }
    }

    /// Entrywise `self ≤ other + tol`.
    pub fn is_subset_of(&self, other: &Self, tol: S) -> bool {
        self.len() == other.len() && self.iter().zip(other.iter()).all(|(a, b)| a <= b + tol)
    }

    pub fn max_abs_diff(&self, other: &Self) -> S {
        self.iter()
            .zip(other.iter())
            .fold(S::zero(), |m, (a, b)| m.max((a - b).abs()))
    }

    /// `α`-level set `{u : A(u) ≥ α}`.
    pub fn level_set(&self, alpha: S) -> Vec<usize> {
        (0..self.len()).filter(|&u| self.get(u) >= alpha).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// Granule w.r.t. `R`: membership `T(R(v, center), λ)`.
    Plus,
    /// Granule w.r.t. `R⁻¹`: membership `T(R(center, v), λ)`.
    Minus,
}

/// A parametric fuzzy set centred on an instance.
#[derive(Debug, Clone, Copy)]
pub struct Granule<'a, S> {
    pub center: usize,
    pub lambda: S,
    pub orientation: Orientation,
    pub relation: &'a RelationMatrix<S>,
    pub triplet: &'a ResidualTriplet<S>,
}

impl<'a, S: Scalar> Granule<'a, S> {
    pub fn new(
        center: usize,
        lambda: S,
        orientation: Orientation,
        relation: &'a RelationMatrix<S>,
        triplet: &'a ResidualTriplet<S>,
    ) -> Result<Self> {
        if center >= relation.n() {
            return Err(Error::IndexOutOfRange {
                index: center,
                len: relation.n(),
            });
        }
        if !lambda.is_degree() {
            return Err(Error::Domain {
                what: "granule parameter",
                value: lambda.to_f64_lossy(),
            });
        }
        Ok(Granule {
            center,
            lambda,
            orientation,
            relation,
            triplet,
        })
    }

    pub fn plus(
        center: usize,
        lambda: S,
        relation: &'a RelationMatrix<S>,
        triplet: &'a ResidualTriplet<S>,
    ) -> Result<Self> {
        Self::new(center, lambda, Orientation::Plus, relation, triplet)
    }

    pub fn minus(
        center: usize,
        lambda: S,
        relation: &'a RelationMatrix<S>,
        triplet: &'a ResidualTriplet<S>,
    ) -> Result<Self> {
        Self::new(center, lambda, Orientation::Minus, relation, triplet)
    }

    pub fn membership(&self, v: usize) -> Result<S> {
        let n = self.relation.n();
        if v >= n {
            return Err(Error::IndexOutOfRange { index: v, len: n });
        }
        Ok(self.membership_unchecked(v))
    }

    #[inline]
    fn membership_unchecked(&self, v: usize) -> S {
        let r = match self.orientation {
            Orientation::Plus => self.relation.get(v, self.center),
            Orientation::Minus => self.relation.get(self.center, v),
        };
        self.triplet.t(r, self.lambda)
    }

    /// Materialized membership vector.
    pub fn to_fuzzy_set(&self) -> FuzzySet<S> {
        FuzzySet {
            memberships: (0..self.relation.n())
                .map(|v| self.membership_unchecked(v))
                .collect(),
        }
    }

    /// Instances with membership at least `alpha`.
    pub fn level_set(&self, alpha: S) -> Result<Vec<usize>> {
        if !(alpha > S::zero() && alpha <= S::one()) {
            return Err(Error::InvalidParameter(format!(
                "level {alpha} must lie in (0, 1]"
            )));
        }
        Ok((0..self.relation.n())
            .filter(|&v| self.membership_unchecked(v) >= alpha)
            .collect())
    }
}

/// Outcome of the granular-representability check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepresentabilityReport<S> {
    /// `max_{u,v} T(R(v,u), A(u)) − A(v)`, floored at 0.
    pub max_violation: S,
    /// `(u, v)` attaining the violation.
    pub worst_pair: Option<(usize, usize)>,
    pub representable: bool,
}

fn check_len<S: Scalar>(a: &FuzzySet<S>, rel: &RelationMatrix<S>) -> Result<()> {
    if a.len() != rel.n() {
        return Err(Error::DimensionMismatch {
            expected: rel.n(),
            actual: a.len(),
        });
    }
    Ok(())
}

pub fn is_granularly_representable<S: Scalar>(
    a: &FuzzySet<S>,
    rel: &RelationMatrix<S>,
    triplet: &ResidualTriplet<S>,
    tol: S,
) -> Result<RepresentabilityReport<S>> {
    check_len(a, rel)?;
    let n = a.len();
    let mut worst = S::zero();
    let mut worst_pair = None;
    for u in 0..n {
        let au = a.get(u);
        for v in 0..n {
            let excess = triplet.t(rel.get(v, u), au) - a.get(v);
            if excess > worst {
                worst = excess;
                worst_pair = Some((u, v));
            }
        }
    }
    Ok(RepresentabilityReport {
        max_violation: worst,
        worst_pair,
        representable: worst <= tol,
    })
}

/// Lower approximation `min_v I(R(v,u), A(v))`: the largest GR set inside `A`.
pub fn lower_approximation<S: Scalar>(
    a: &FuzzySet<S>,
    rel: &RelationMatrix<S>,
    triplet: &ResidualTriplet<S>,
) -> Result<FuzzySet<S>> {
    check_len(a, rel)?;
    let n = a.len();
    let memberships = (0..n)
        .map(|u| {
            (0..n)
                .map(|v| triplet.i(rel.get(v, u), a.get(v)))
                .fold(S::one(), S::min)
        })
        .collect();
    Ok(FuzzySet { memberships })
}

/// Upper approximation `max_v T(R(u,v), A(v))`: the smallest GR set containing `A`.
pub fn upper_approximation<S: Scalar>(
    a: &FuzzySet<S>,
    rel: &RelationMatrix<S>,
    triplet: &ResidualTriplet<S>,
) -> Result<FuzzySet<S>> {
    check_len(a, rel)?;
    let n = a.len();
    let memberships = (0..n)
        .map(|u| {
            rel.row(u)
                .iter()
                .zip(a.iter())
                .map(|(&r, av)| triplet.t(r, av))
                .fold(S::zero(), S::max)
        })
        .collect();
    Ok(FuzzySet { memberships })
}

/// `max_w T(A(w), B(w))`; two fuzzy sets are T-disjoint when this is 0.
pub fn max_overlap<S: Scalar>(a: &FuzzySet<S>, b: &FuzzySet<S>, triplet: &ResidualTriplet<S>) -> S {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| triplet.t(x, y))
        .fold(S::zero(), S::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disjointness<S> {
    pub disjoint: bool,
    /// `N(R(v,u)) − T(λ₁, λ₂)`; nonnegative iff disjoint.
    pub margin: S,
}

fn same_relation<S: Scalar>(a: &Granule<'_, S>, b: &Granule<'_, S>) -> Result<()> {
    if std::ptr::eq(a.relation, b.relation) || a.relation == b.relation {
        Ok(())
    } else {
        Err(Error::InvalidParameter(
            "granules are defined over different relations".into(),
        ))
    }
}

/// Closed-form T-disjointness of a plus granule `R⁺_{λ₁}(u)` and a minus granule `R⁻_{λ₂}(v)`.
///
/// Requires a T-preorder relation and a residuated triplet.
pub fn are_t_disjoint<S: Scalar>(
    plus: &Granule<'_, S>,
    minus: &Granule<'_, S>,
    tol: S,
) -> Result<Disjointness<S>> {
    if plus.orientation != Orientation::Plus || minus.orientation != Orientation::Minus {
        return Err(Error::OrientationMismatch(
            "expected a plus granule and a minus granule",
        ));
    }
    same_relation(plus, minus)?;
    plus.triplet.require_residuated()?;
    let t = plus.triplet;
    let bound = t.n(plus.relation.get(minus.center, plus.center));
    let margin = bound - t.t(plus.lambda, minus.lambda);
    Ok(Disjointness {
        disjoint: margin >= -tol,
        margin,
    })
}

/// Both directions of the adjacency relation between a plus and a minus granule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Adjacency {
    /// The minus granule is adjacent to the plus granule: `λ₁ = I(λ₂, N(R(v,u)))`.
    pub minus_to_plus: bool,
    /// The plus granule is adjacent to the minus granule: `λ₂ = I(λ₁, N(R(v,u)))`.
    pub plus_to_minus: bool,
}

impl Adjacency {
    pub fn symmetric(&self) -> bool {
        self.minus_to_plus && self.plus_to_minus
    }
}

pub fn adjacency<S: Scalar>(
    plus: &Granule<'_, S>,
    minus: &Granule<'_, S>,
    tol: S,
) -> Result<Adjacency> {
    if plus.orientation != Orientation::Plus || minus.orientation != Orientation::Minus {
        return Err(Error::OrientationMismatch(
            "expected a plus granule and a minus granule",
        ));
    }
    same_relation(plus, minus)?;
    plus.triplet.require_residuated()?;
    let t = plus.triplet;
    let nr = t.n(plus.relation.get(minus.center, plus.center));
    Ok(Adjacency {
        minus_to_plus: (plus.lambda - t.i(minus.lambda, nr)).abs() <= tol,
        plus_to_minus: (minus.lambda - t.i(plus.lambda, nr)).abs() <= tol,
    })
}

/// Whether `from` is adjacent to `to`; the two granules must have opposite orientations.
pub fn is_adjacent<S: Scalar>(from: &Granule<'_, S>, to: &Granule<'_, S>, tol: S) -> Result<bool> {
    match (from.orientation, to.orientation) {
        (Orientation::Minus, Orientation::Plus) => Ok(adjacency(to, from, tol)?.minus_to_plus),
        (Orientation::Plus, Orientation::Minus) => Ok(adjacency(from, to, tol)?.plus_to_minus),
        _ => Err(Error::OrientationMismatch(
            "adjacency needs opposite orientations",
        )),
    }
}
