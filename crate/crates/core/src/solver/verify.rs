//! Post-hoc certificates for solutions: feasibility and tightness.

use crate::connectives::ResidualTriplet;
use crate::error::{Error, Result};
use crate::granules::{is_adjacent, is_granularly_representable, FuzzySet, Granule};
use crate::relations::RelationMatrix;
use crate::scalar::Scalar;

use super::bounds::BoundMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintReport<S> {
    /// `max_{u≠v} T(β_u, β_v) − M(u, v)`, floored at 0.
    pub max_violation: S,
    /// Ordered pair attaining a positive violation.
    pub worst_pair: Option<(usize, usize)>,
}

impl<S: Scalar> ConstraintReport<S> {
    pub fn feasible(&self, tol: S) -> bool {
        self.max_violation <= tol
    }
}

pub fn verify_constraints<S: Scalar>(
    beta: &FuzzySet<S>,
    bounds: &BoundMatrix<S>,
    triplet: &ResidualTriplet<S>,
) -> Result<ConstraintReport<S>> {
    check_len(beta.len(), bounds.n())?;
    let mut report = ConstraintReport {
        max_violation: S::zero(),
        worst_pair: None,
    };
    let n = bounds.n();
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let excess = triplet.t(beta.get(u), beta.get(v)) - bounds.get(u, v);
            if excess > report.max_violation {
                report.max_violation = excess;
                report.worst_pair = Some((u, v));
            }
        }
    }
    Ok(report)
}

fn check_len(actual: usize, expected: usize) -> Result<()> {
    if actual != expected {
        Err(Error::DimensionMismatch { expected, actual })
    } else {
        Ok(())
    }
}

/// Tightness of one instance: how far `β_u` is from its largest feasible value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TightEntry<S> {
    /// Partner `v` minimizing `I(β_v, M(u,v)) − β_u` among pairs with `M < 1`.
    pub partner: Option<usize>,
    /// `I(β_v, M(u,v)) − β_u` at the partner; `1 − β_u` without a partner.
    pub gap: S,
    /// `β_u < 1`, so a tight partner must exist.
    pub required: bool,
    /// No room at the partner and `T(β_u, β_v) = M(u, v)`.
    pub tight: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TightnessReport<S> {
    pub entries: Vec<TightEntry<S>>,
}

impl<S: Scalar> TightnessReport<S> {
    /// Instances with `β_u < 1` that could be raised without breaking a constraint.
    pub fn failures(&self) -> Vec<usize> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.required && !e.tight)
            .map(|(u, _)| u)
            .collect()
    }

    pub fn certified(&self) -> bool {
        self.entries.iter().all(|e| !e.required || e.tight)
    }

    pub fn max_required_gap(&self) -> S {
        self.entries
            .iter()
            .filter(|e| e.required)
            .fold(S::zero(), |m, e| m.max(e.gap))
    }
}

/// Multi-class tight-partner check.
///
/// By residuation the largest value of `β_u` compatible with `β_v` is
/// `I(β_v, M(u,v))`, so `β_u < 1` is locally optimal only if some partner
/// leaves no room: `I(β_v, M(u,v)) − β_u ≤ tol`, with the constraint itself
/// binding, `T(β_u, β_v) = M(u, v)`.
pub fn verify_tightness<S: Scalar>(
    beta: &FuzzySet<S>,
    bounds: &BoundMatrix<S>,
    triplet: &ResidualTriplet<S>,
    tol: S,
) -> Result<TightnessReport<S>> {
    check_len(beta.len(), bounds.n())?;
    triplet.require_residuated()?;
    let n = bounds.n();
    let entries = (0..n)
        .map(|u| {
            let bu = beta.get(u);
            let mut best: Option<(usize, S)> = None;
            for v in (0..n).filter(|&v| v != u && bounds.pair(u, v) < S::one()) {
                let room = triplet.i(beta.get(v), bounds.pair(u, v)) - bu;
                if best.map_or(true, |(_, g)| room < g) {
                    best = Some((v, room));
                }
            }
            let binding = |v: usize| (triplet.t(bu, beta.get(v)) - bounds.pair(u, v)).abs() <= tol;
            match best {
                Some((v, gap)) => TightEntry {
                    partner: Some(v),
                    gap,
                    required: bu < S::one() - tol,
                    tight: gap <= tol && binding(v),
                },
                None => TightEntry {
                    partner: None,
                    gap: S::one() - bu,
                    required: bu < S::one() - tol,
                    tight: false,
                },
            }
        })
        .collect();
    Ok(TightnessReport { entries })
}

/// Position of an estimate relative to the crisp target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryPart {
    /// `Â(u) < A(u)`.
    Below,
    /// `Â(u) = A(u)`.
    Equal,
    /// `Â(u) > A(u)`.
    Above,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinaryTightnessReport<S> {
    pub parts: Vec<BinaryPart>,
    /// Instances above the target whose value is not the supremum over the
    /// lower-or-equal part: `Â(u) ≠ max_{v ∈ U⁻ ∪ U⁰} T(R(u,v), Â(v))`.
    pub upper_failures: Vec<usize>,
    /// Instances below the target whose value is not the infimum over the
    /// upper-or-equal part: `Â(u) ≠ min_{v ∈ U⁺ ∪ U⁰} I(R(v,u), Â(v))`.
    pub lower_failures: Vec<usize>,
    /// Instances with no adjacent opposite-class granule.
    pub adjacency_failures: Vec<usize>,
    /// Granular representability violation of `Â`.
    pub representability_violation: S,
    /// Largest deviation seen in the upper/lower characterizations.
    pub max_gap: S,
}

impl<S: Scalar> BinaryTightnessReport<S> {
    pub fn certified(&self, tol: S) -> bool {
        self.upper_failures.is_empty()
            && self.lower_failures.is_empty()
            && self.adjacency_failures.is_empty()
            && self.representability_violation <= tol
    }
}

/// Characterizations of a granular approximation `Â` of a crisp set `A`.
///
/// * every `u` with `Â(u) > A(u)` satisfies `Â(u) = max_{v ∈ U⁻∪U⁰} T(R(u,v), Â(v))`;
/// * every `u` with `Â(u) < A(u)` satisfies `Â(u) = min_{v ∈ U⁺∪U⁰} I(R(v,u), Â(v))`;
/// * every `u ∈ A` has some `v ∉ A` whose minus granule `R⁻_{N(Â(v))}(v)` is
///   adjacent to `R⁺_{Â(u)}(u)`, and symmetrically for `u ∉ A`.
pub fn verify_binary_tightness<S: Scalar>(
    estimate: &FuzzySet<S>,
    members: &[bool],
    rel: &RelationMatrix<S>,
    triplet: &ResidualTriplet<S>,
    tol: S,
) -> Result<BinaryTightnessReport<S>> {
    let n = rel.n();
    check_len(estimate.len(), n)?;
    check_len(members.len(), n)?;
    triplet.require_residuated()?;
    let crisp = |u: usize| if members[u] { S::one() } else { S::zero() };
    let parts: Vec<BinaryPart> = (0..n)
        .map(|u| {
            let d = estimate.get(u) - crisp(u);
            if d < -tol {
                BinaryPart::Below
            } else if d > tol {
                BinaryPart::Above
            } else {
                BinaryPart::Equal
            }
        })
        .collect();

    let mut upper_failures = Vec::new();
    let mut lower_failures = Vec::new();
    let mut max_gap = S::zero();
    for u in 0..n {
        let au = estimate.get(u);
        match parts[u] {
            BinaryPart::Above => {
                let sup = (0..n)
                    .filter(|&v| parts[v] != BinaryPart::Above)
                    .map(|v| triplet.t(rel.get(u, v), estimate.get(v)))
                    .fold(None, |m: Option<S>, x| Some(m.map_or(x, |m| m.max(x))));
                let gap = sup.map_or(S::infinity(), |s| (au - s).abs());
                max_gap = max_gap.max(gap);
                if !(gap <= tol) {
                    upper_failures.push(u);
                }
            }
            BinaryPart::Below => {
                let inf = (0..n)
                    .filter(|&v| parts[v] != BinaryPart::Below)
                    .map(|v| triplet.i(rel.get(v, u), estimate.get(v)))
                    .fold(None, |m: Option<S>, x| Some(m.map_or(x, |m| m.min(x))));
                let gap = inf.map_or(S::infinity(), |s| (au - s).abs());
                max_gap = max_gap.max(gap);
                if !(gap <= tol) {
                    lower_failures.push(u);
                }
            }
            BinaryPart::Equal => {}
        }
    }

    let mut adjacency_failures = Vec::new();
    let has_both = members.iter().any(|&m| m) && members.iter().any(|&m| !m);
    if has_both {
        for u in 0..n {
            let own = estimate.get(u);
            let found = if members[u] {
                let plus = Granule::plus(u, own, rel, triplet)?;
                let mut ok = false;
                for v in (0..n).filter(|&v| !members[v]) {
                    let minus = Granule::minus(v, triplet.n(estimate.get(v)), rel, triplet)?;
                    if is_adjacent(&minus, &plus, tol)? {
                        ok = true;
                        break;
                    }
                }
                ok
            } else {
                let minus = Granule::minus(u, triplet.n(own), rel, triplet)?;
                let mut ok = false;
                for v in (0..n).filter(|&v| members[v]) {
                    let plus = Granule::plus(v, estimate.get(v), rel, triplet)?;
                    if is_adjacent(&plus, &minus, tol)? {
                        ok = true;
                        break;
                    }
                }
                ok
            };
            if !found {
                adjacency_failures.push(u);
            }
        }
    }

    let gr = is_granularly_representable(estimate, rel, triplet, tol)?;
    Ok(BinaryTightnessReport {
        parts,
        upper_failures,
        lower_failures,
        adjacency_failures,
        representability_violation: gr.max_violation,
        max_gap,
    })
}
