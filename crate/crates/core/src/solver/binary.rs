//! Two-class granular approximation of a crisp set.
//!
//! For IMTL triplets and symmetric, duality preserving losses, the best
//! representable approximation `Â` of a crisp set `A` is recovered from the
//! reduced problem over `β_u = Â(u)` (`u ∈ A`) and `β_u = N(Â(u))` (`u ∉ A`)
//! whose only constraints are `T(β_u, β_v) ≤ N(R(v,u))` for `u ∈ A, v ∉ A`.

use crate::connectives::ResidualTriplet;
use crate::error::{Error, Result};
use crate::granules::FuzzySet;
use crate::relations::RelationMatrix;
use crate::scalar::Scalar;

use super::bounds::{BoundMatrix, DecisionRelation};
use super::loss::{Loss, LossKind};
use super::verify::{verify_binary_tightness, BinaryPart};
use super::{solve_lp, solve_qp, ApproximationResult, PartitionTag, SolveOptions};

/// Bounds of the reduced two-class problem; symmetric by construction even
/// when `rel` is only a T-preorder.
pub fn binary_bounds<S: Scalar>(
    members: &[bool],
    rel: &RelationMatrix<S>,
    triplet: &ResidualTriplet<S>,
) -> Result<BoundMatrix<S>> {
    let n = rel.n();
    if members.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: members.len(),
        });
    }
    triplet.require_residuated()?;
    let mut values = vec![S::one(); n * n];
    for u in (0..n).filter(|&u| members[u]) {
        for v in (0..n).filter(|&v| !members[v]) {
            let m = triplet.n(rel.get(v, u));
            values[u * n + v] = m;
            values[v * n + u] = m;
        }
    }
    BoundMatrix::from_values(n, values, triplet)
}

/// Solves the two-class problem with `positive` as the crisp set `A`.
///
/// Requires at most two classes, a Łukasiewicz-isomorphic triplet and a
/// symmetric ∨-type loss scaled by the triplet's isomorphism. The absolute
/// error (or the median loss) dispatches to the linear program, the squared
/// error to the quadratic program.
pub fn solve_binary<S: Scalar>(
    decision: &DecisionRelation,
    positive: usize,
    rel: &RelationMatrix<S>,
    triplet: &ResidualTriplet<S>,
    loss: &Loss<S>,
    opts: &SolveOptions<S>,
) -> Result<ApproximationResult<S>> {
    if decision.n_classes() > 2 {
        return Err(Error::InvalidParameter(format!(
            "binary approximation needs two classes, got {}",
            decision.n_classes()
        )));
    }
    if decision.n() != rel.n() {
        return Err(Error::DimensionMismatch {
            expected: rel.n(),
            actual: decision.n(),
        });
    }
    triplet.require_residuated()?;
    if !triplet.is_imtl() {
        return Err(Error::Unsupported(format!(
            "binary reduction needs an IMTL triplet, got {}",
            triplet.kind()
        )));
    }
    if !loss.is_v_type() || !loss.is_symmetric() {
        return Err(Error::Unsupported(format!(
            "binary reduction needs a symmetric ∨-type loss, got {}",
            loss.name()
        )));
    }
    if loss.isomorphism().name() != triplet.isomorphism().name() {
        return Err(Error::Unsupported(format!(
            "loss is scaled by {} but the triplet uses {}",
            loss.isomorphism().name(),
            triplet.isomorphism().name()
        )));
    }

    let members: Vec<bool> = (0..decision.n())
        .map(|u| decision.class_of(u) == positive)
        .collect();
    let bounds = binary_bounds(&members, rel, triplet)?;
    let mut result = match loss.kind() {
        LossKind::Mse => solve_qp(&bounds, triplet, opts)?,
        LossKind::Mae | LossKind::Quantile(_) => solve_lp(&bounds, triplet, opts)?,
    };
    result.loss = result.beta.iter().map(|b| loss.eval(S::one(), b)).sum();

    let estimate = FuzzySet::new(
        (0..decision.n())
            .map(|u| {
                let b = result.beta.get(u);
                if members[u] {
                    b
                } else {
                    triplet.n(b)
                }
            })
            .collect(),
    )?;
    let report = verify_binary_tightness(&estimate, &members, rel, triplet, opts.tolerances.feas)?;
    result.partition = report
        .parts
        .iter()
        .map(|p| match p {
            BinaryPart::Below => PartitionTag::Below,
            BinaryPart::Equal => PartitionTag::Equal,
            BinaryPart::Above => PartitionTag::Above,
        })
        .collect();
    result.estimate = Some(estimate);
    Ok(result)
}
