//! Dataset level workflow: relation construction, multi-class approximation,
//! relabeling suggestions and granule geometry.

mod geometry;
mod relabel;

use std::collections::HashSet;

use log::warn;

use crate::connectives::ResidualTriplet;
use crate::error::{Error, Result};
use crate::relations::{AttributeTable, Mahalanobis, Metric, RelationKernel, RelationMatrix};
use crate::scalar::Scalar;
use crate::solver::{
    build_bounds, solve_lp, solve_qp, ApproximationResult, BoundMatrix, DecisionRelation, LossKind,
    SolveOptions,
};

pub use geometry::{
    export_geometry, granule_shape, sample_geometry, shape_tag, GeometrySample, GranuleGeometry,
    Shape,
};
pub use relabel::{suggest_relabels, Relabel, RelabelStatus};

/// Instances with numeric attributes, string ids and crisp class labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset<S> {
    ids: Vec<String>,
    table: AttributeTable<S>,
    labels: Vec<String>,
    classes: Vec<String>,
    decision: DecisionRelation,
}

impl<S: Scalar> LabeledDataset<S> {
    pub fn new(ids: Vec<String>, table: AttributeTable<S>, labels: Vec<String>) -> Result<Self> {
        let n = table.n_instances();
        if ids.len() != n || labels.len() != n {
            return Err(Error::InvalidDataset(format!(
                "{n} instances but {} ids and {} labels",
                ids.len(),
                labels.len()
            )));
        }
        let mut seen = HashSet::new();
        for id in &ids {
            if !seen.insert(id.as_str()) {
                return Err(Error::InvalidDataset(format!(
                    "duplicate instance id `{id}`"
                )));
            }
        }
        if let Some(u) = labels.iter().position(|l| l.is_empty()) {
            return Err(Error::InvalidDataset(format!(
                "instance `{}` has an empty label",
                ids[u]
            )));
        }
        let decision = DecisionRelation::from_labels(&labels);
        let mut classes = vec![String::new(); decision.n_classes()];
        for (u, l) in labels.iter().enumerate() {
            classes[decision.class_of(u)] = l.clone();
        }
        Ok(LabeledDataset {
            ids,
            table,
            labels,
            classes,
            decision,
        })
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn table(&self) -> &AttributeTable<S> {
        &self.table
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Class names in order of first appearance.
    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn decision(&self) -> &DecisionRelation {
        &self.decision
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MetricSpec<S> {
    Euclidean,
    Manhattan,
    /// Row-major `Σ`.
    Mahalanobis(Vec<S>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum RelationFamily<S> {
    TriangularSimilarity {
        gamma: S,
    },
    TriangularDominance {
        gamma: S,
    },
    /// `max(1 − d/a, 0)`; with `scale` every attribute is first mapped to
    /// `(x − min)/range`.
    Metric {
        metric: MetricSpec<S>,
        a: S,
        scale: bool,
    },
}

impl<S: Scalar> RelationFamily<S> {
    pub fn name(&self) -> &'static str {
        match self {
            RelationFamily::TriangularSimilarity { .. } => "similarity",
            RelationFamily::TriangularDominance { .. } => "dominance",
            RelationFamily::Metric { .. } => "metric",
        }
    }

    /// Evaluable kernel on raw attribute values.
    ///
    /// Min-max scaling is folded into the metric (weights for Manhattan,
    /// `D⁻¹ Σ D⁻¹` for Mahalanobis, `D⁻²` for Euclidean, with `D` the diagonal
    /// of ranges) so that the kernel and the exported geometry both live in
    /// the original coordinates.
    pub fn kernel(&self, table: &AttributeTable<S>) -> Result<RelationKernel<S>> {
        match self {
            RelationFamily::TriangularSimilarity { gamma } => {
                RelationKernel::triangular_similarity(table, *gamma)
            }
            RelationFamily::TriangularDominance { gamma } => {
                RelationKernel::triangular_dominance(table, *gamma)
            }
            RelationFamily::Metric { metric, a, scale } => {
                let d = table.n_attributes();
                let inv: Vec<S> = table
                    .ranges()
                    .iter()
                    .enumerate()
                    .map(|(q, &r)| {
                        if r > S::zero() {
                            S::one() / r
                        } else {
                            warn!(
                                "attribute `{}` is constant and is left unscaled",
                                table.names()[q]
                            );
                            S::one()
                        }
                    })
                    .collect();
                let metric = match (metric, scale) {
                    (MetricSpec::Euclidean, false) => Metric::Euclidean,
                    (MetricSpec::Euclidean, true) => {
                        let mut sigma = vec![S::zero(); d * d];
                        for q in 0..d {
                            sigma[q * d + q] = inv[q] * inv[q];
                        }
                        Metric::Mahalanobis(Mahalanobis::new(d, sigma)?)
                    }
                    (MetricSpec::Manhattan, false) => Metric::Manhattan(None),
                    (MetricSpec::Manhattan, true) => Metric::Manhattan(Some(inv)),
                    (MetricSpec::Mahalanobis(sigma), scale) => {
                        if sigma.len() != d * d {
                            return Err(Error::DimensionMismatch {
                                expected: d * d,
                                actual: sigma.len(),
                            });
                        }
                        let mut s = sigma.clone();
                        if *scale {
                            for i in 0..d {
                                for j in 0..d {
                                    s[i * d + j] = s[i * d + j] * inv[i] * inv[j];
                                }
                            }
                        }
                        Metric::Mahalanobis(Mahalanobis::new(d, s)?)
                    }
                };
                RelationKernel::metric(metric, *a)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct PipelineConfig<S> {
    pub relation: RelationFamily<S>,
    pub triplet: ResidualTriplet<S>,
    /// `Mae` (linear program) or `Mse` (quadratic program), scaled by the triplet's isomorphism.
    pub loss: LossKind<S>,
    pub options: SolveOptions<S>,
    /// Level of the granule level sets exported as geometry.
    pub alpha_level: S,
    pub relabel_threshold: S,
}

impl<S: Scalar> PipelineConfig<S> {
    pub fn new(
        relation: RelationFamily<S>,
        triplet: ResidualTriplet<S>,
        loss: LossKind<S>,
    ) -> Self {
        PipelineConfig {
            relation,
            triplet,
            loss,
            options: SolveOptions::default(),
            alpha_level: S::lit(0.5),
            relabel_threshold: S::lit(0.5),
        }
    }

    /// Checks that do not need data: parameter ranges and the triplet–loss pairing.
    pub fn validate(&self) -> Result<()> {
        self.triplet.require_residuated()?;
        if !self.triplet.is_lukasiewicz_isomorphic() {
            return Err(Error::Unsupported(format!(
                "multi-class approximation needs a Łukasiewicz-isomorphic triplet, got {}",
                self.triplet.kind()
            )));
        }
        if matches!(self.loss, LossKind::Quantile(_)) {
            return Err(Error::Unsupported(
                "multi-class approximation supports the mae and mse losses only".into(),
            ));
        }
        match &self.relation {
            RelationFamily::TriangularSimilarity { gamma }
            | RelationFamily::TriangularDominance { gamma } => positive("gamma", *gamma)?,
            RelationFamily::Metric { a, .. } => positive("a", *a)?,
        }
        if matches!(self.relation, RelationFamily::TriangularDominance { .. })
            && !self.options.experimental_asymmetric
        {
            return Err(Error::Unsupported(
                "the dominance relation is not symmetric; multi-class approximation with it \
                 needs the experimental_asymmetric option"
                    .into(),
            ));
        }
        if !(self.alpha_level > S::zero() && self.alpha_level < S::one()) {
            return Err(Error::InvalidParameter(format!(
                "alpha level {} must lie in (0, 1)",
                self.alpha_level
            )));
        }
        if !(self.relabel_threshold > S::zero() && self.relabel_threshold <= S::one()) {
            return Err(Error::InvalidParameter(format!(
                "relabel threshold {} must lie in (0, 1]",
                self.relabel_threshold
            )));
        }
        Ok(())
    }
}

fn positive<S: Scalar>(name: &str, v: S) -> Result<()> {
    if v > S::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

/// Everything produced by one approximation run.
#[derive(Debug, Clone)]
pub struct ApproximationRun<S> {
    pub kernel: RelationKernel<S>,
    pub relation: RelationMatrix<S>,
    pub bounds: BoundMatrix<S>,
    pub result: ApproximationResult<S>,
}

/// Builds the relation and the bound matrix and solves the multi-class problem.
pub fn run_approximation<S: Scalar>(
    dataset: &LabeledDataset<S>,
    config: &PipelineConfig<S>,
) -> Result<ApproximationRun<S>> {
    config.validate()?;
    let kernel = config.relation.kernel(dataset.table())?;
    let relation = kernel.matrix(dataset.table())?;
    let bounds = build_bounds(
        &relation,
        dataset.decision(),
        &config.triplet,
        config.options.tolerances.rel,
    )?;
    let result = match config.loss {
        LossKind::Mae => solve_lp(&bounds, &config.triplet, &config.options)?,
        LossKind::Mse => solve_qp(&bounds, &config.triplet, &config.options)?,
        LossKind::Quantile(_) => unreachable!("rejected by validate"),
    };
    Ok(ApproximationRun {
        kernel,
        relation,
        bounds,
        result,
    })
}
