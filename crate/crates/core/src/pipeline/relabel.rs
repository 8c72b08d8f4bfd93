use crate::connectives::ResidualTriplet;
use crate::error::{Error, Result};
use crate::relations::RelationMatrix;
use crate::scalar::Scalar;
use crate::solver::ApproximationResult;

use super::LabeledDataset;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelabelStatus {
    /// `β_u` is strictly below the threshold.
    Relabel,
    /// `β_u` equals the threshold within tolerance.
    Ambiguous,
}

impl RelabelStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RelabelStatus::Relabel => "relabel",
            RelabelStatus::Ambiguous => "ambiguous",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Relabel<S> {
    pub index: usize,
    pub id: String,
    pub from: String,
    /// Competing class, `None` when the dataset has a single class.
    pub to: Option<String>,
    pub beta: S,
    /// `max_{v ∈ to} T(R(u, v), β_v)`.
    pub support: S,
    pub status: RelabelStatus,
}

/// Instances whose consistency degree falls below `threshold`.
///
/// The suggested class maximizes `max_{v ∈ c} T(R(u, v), β_v)` over the
/// classes `c` other than the current label; ties go to the class that
/// appears first. Degrees within `tol` of the threshold are returned with
/// [`RelabelStatus::Ambiguous`].
pub fn suggest_relabels<S: Scalar>(
    dataset: &LabeledDataset<S>,
    relation: &RelationMatrix<S>,
    result: &ApproximationResult<S>,
    triplet: &ResidualTriplet<S>,
    threshold: S,
    tol: S,
) -> Result<Vec<Relabel<S>>> {
    let n = dataset.n();
    if relation.n() != n || result.beta.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: result.beta.len().min(relation.n()),
        });
    }
    if !(threshold > S::zero() && threshold <= S::one()) {
        return Err(Error::InvalidParameter(format!(
            "relabel threshold {threshold} must lie in (0, 1]"
        )));
    }
    let decision = dataset.decision();
    let k = decision.n_classes();
    let mut out = Vec::new();
    for u in 0..n {
        let beta = result.beta.get(u);
        let status = if (beta - threshold).abs() <= tol {
            RelabelStatus::Ambiguous
        } else if beta < threshold {
            RelabelStatus::Relabel
        } else {
            continue;
        };
        let own = decision.class_of(u);
        let mut support = vec![S::neg_infinity(); k];
        for v in 0..n {
            let c = decision.class_of(v);
            if c != own {
                support[c] = support[c].max(triplet.t(relation.get(u, v), result.beta.get(v)));
            }
        }
        let mut best: Option<usize> = None;
        for c in (0..k).filter(|&c| c != own) {
            if best.map_or(true, |b| support[c] > support[b]) {
                best = Some(c);
            }
        }
        out.push(Relabel {
            index: u,
            id: dataset.ids()[u].clone(),
            from: dataset.labels()[u].clone(),
            to: best.map(|c| dataset.classes()[c].clone()),
            beta,
            support: best.map_or(S::zero(), |c| support[c]),
            status,
        });
    }
    Ok(out)
}
