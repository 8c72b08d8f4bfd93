//! Analytic `α`-level sets of the granules `x ↦ T(R(x, u), β_u)` in attribute space.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::connectives::ResidualTriplet;
use crate::error::{Error, Result};
use crate::relations::{Metric, RelationKernel};
use crate::scalar::Scalar;

use crate::granules::FuzzySet;

use super::{LabeledDataset, PipelineConfig};

#[derive(Debug, Clone, PartialEq)]
pub enum Shape<S> {
    /// `|x_q − c_q| ≤ half_widths[q]`; infinite for constant attributes.
    Box { half_widths: Vec<S> },
    /// `x_q ≥ c_q − offsets[q]`.
    Orthant { offsets: Vec<S> },
    /// Euclidean ball.
    Ball { radius: S },
    /// `Σ_k ((x − c)·axes[k] / semi_axes[k])² ≤ 1`, largest semi-axis first.
    Ellipsoid {
        semi_axes: Vec<S>,
        axes: Vec<Vec<S>>,
        /// Direction of the major axis in degrees, `[0, 180)`; two attributes only.
        rotation_deg: Option<S>,
    },
}

impl<S: Scalar> Shape<S> {
    /// Tag used in exported records.
    pub fn tag(&self) -> &'static str {
        match self {
            Shape::Box { half_widths } => match half_widths.len() {
                1 => "interval",
                2 => "rectangle",
                _ => "box",
            },
            Shape::Orthant { offsets } => match offsets.len() {
                1 => "half-line",
                2 => "quarter-plane",
                _ => "orthant",
            },
            Shape::Ball { .. } => "ball",
            Shape::Ellipsoid { semi_axes, .. } => {
                if semi_axes.len() == 2 {
                    "ellipse"
                } else {
                    "ellipsoid"
                }
            }
        }
    }

    pub fn contains(&self, center: &[S], x: &[S]) -> bool {
        let d = || center.iter().zip(x).map(|(&c, &xi)| xi - c);
        match self {
            Shape::Box { half_widths } => d().zip(half_widths).all(|(di, &h)| di.abs() <= h),
            Shape::Orthant { offsets } => d().zip(offsets).all(|(di, &o)| di >= -o),
            Shape::Ball { radius } => d().map(|di| di * di).sum::<S>().sqrt() <= *radius,
            Shape::Ellipsoid {
                semi_axes, axes, ..
            } => {
                let q: S = semi_axes
                    .iter()
                    .zip(axes)
                    .map(|(&s, axis)| {
                        let p: S = d().zip(axis).map(|(di, &a)| di * a).sum();
                        (p / s) * (p / s)
                    })
                    .sum();
                q <= S::one()
            }
        }
    }

    /// Axis-aligned bounds; unbounded sides are cut at `center ± extent[q]`.
    pub fn bounding_box(&self, center: &[S], extent: &[S]) -> Vec<(S, S)> {
        let clip = |h: S, q: usize| if h.is_finite() { h } else { extent[q] };
        match self {
            Shape::Box { half_widths } => half_widths
                .iter()
                .enumerate()
                .map(|(q, &h)| (center[q] - clip(h, q), center[q] + clip(h, q)))
                .collect(),
            Shape::Orthant { offsets } => offsets
                .iter()
                .enumerate()
                .map(|(q, &o)| (center[q] - clip(o, q), center[q] + extent[q]))
                .collect(),
            Shape::Ball { radius } => center.iter().map(|&c| (c - *radius, c + *radius)).collect(),
            Shape::Ellipsoid {
                semi_axes, axes, ..
            } => (0..center.len())
                .map(|q| {
                    let h: S = semi_axes
                        .iter()
                        .zip(axes)
                        .map(|(&s, axis)| (s * axis[q]).abs())
                        .sum();
                    (center[q] - h, center[q] + h)
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GranuleGeometry<S> {
    pub index: usize,
    pub id: String,
    pub class: String,
    pub beta: S,
    pub alpha_level: S,
    pub center: Vec<S>,
    /// Shape tag of the relation family, also for non-drawable records.
    pub tag: &'static str,
    /// Relation degree `c` with `T(c, β) = α_level`; the level set is `{x : R(x, u) ≥ c}`.
    pub relation_level: S,
    /// `None` when the level set is empty or degenerate.
    pub shape: Option<Shape<S>>,
}

impl<S: Scalar> GranuleGeometry<S> {
    pub fn drawable(&self) -> bool {
        self.shape.is_some()
    }

    pub fn contains(&self, x: &[S]) -> bool {
        self.shape
            .as_ref()
            .is_some_and(|s| s.contains(&self.center, x))
    }
}

/// Level set of one granule centred at `center` with parameter `lambda`.
///
/// Returns the relation level `c` and the shape. The triplet must be
/// Łukasiewicz-isomorphic, where `T(r, λ) ≥ α` reduces to
/// `r ≥ φ⁻¹(1 + φ(α) − φ(λ))`.
pub fn granule_shape<S: Scalar>(
    kernel: &RelationKernel<S>,
    lambda: S,
    alpha_level: S,
    triplet: &ResidualTriplet<S>,
) -> Result<(S, Option<Shape<S>>)> {
    if !triplet.is_lukasiewicz_isomorphic() {
        return Err(Error::Unsupported(format!(
            "analytic level sets need a Łukasiewicz-isomorphic triplet, got {}",
            triplet.kind()
        )));
    }
    if !(alpha_level > S::zero() && alpha_level < S::one()) {
        return Err(Error::InvalidParameter(format!(
            "alpha level {alpha_level} must lie in (0, 1)"
        )));
    }
    let phi = triplet.isomorphism();
    let arg = S::one() + phi.apply(alpha_level) - phi.apply(lambda);
    let c = if arg <= S::one() {
        phi.invert(arg.max(S::zero()))
    } else {
        S::one()
    };
    let spread = S::one() - c;
    let shape = match kernel {
        RelationKernel::TriangularSimilarity { gamma, ranges } => {
            (lambda > alpha_level).then(|| Shape::Box {
                half_widths: widths(ranges, *gamma, spread),
            })
        }
        // At λ = α the set {x ≥ u} is still a proper quarter-plane.
        RelationKernel::TriangularDominance { gamma, ranges } => {
            (lambda >= alpha_level).then(|| Shape::Orthant {
                offsets: widths(ranges, *gamma, spread),
            })
        }
        RelationKernel::Metric { metric, a } => {
            let radius = *a * spread;
            match metric {
                Metric::Euclidean => (lambda > alpha_level).then_some(Shape::Ball { radius }),
                Metric::Mahalanobis(m) => (lambda > alpha_level).then(|| {
                    let (values, vectors) = m.eigen();
                    let semi_axes: Vec<S> = values.iter().map(|&e| radius / e.sqrt()).collect();
                    let rotation_deg = (m.dim() == 2).then(|| {
                        let deg = vectors[0][1].atan2(vectors[0][0]).to_degrees();
                        let half_turn = S::lit(180.0);
                        let r = deg - (deg / half_turn).floor() * half_turn;
                        if r >= half_turn {
                            S::zero()
                        } else {
                            r
                        }
                    });
                    Shape::Ellipsoid {
                        semi_axes,
                        axes: vectors,
                        rotation_deg,
                    }
                }),
                Metric::Manhattan(_) => {
                    return Err(Error::Unsupported(
                        "level sets of the Manhattan metric relation are not exported".into(),
                    ))
                }
            }
        }
    };
    Ok((c, shape))
}

fn widths<S: Scalar>(ranges: &[S], gamma: S, spread: S) -> Vec<S> {
    ranges
        .iter()
        .map(|&r| {
            if r > S::zero() {
                r * spread / gamma
            } else {
                S::infinity()
            }
        })
        .collect()
}

/// Shape tag produced by `kernel` over `dim` attributes.
pub fn shape_tag<S: Scalar>(kernel: &RelationKernel<S>, dim: usize) -> &'static str {
    match (kernel, dim) {
        (RelationKernel::TriangularSimilarity { .. }, 1) => "interval",
        (RelationKernel::TriangularSimilarity { .. }, 2) => "rectangle",
        (RelationKernel::TriangularSimilarity { .. }, _) => "box",
        (RelationKernel::TriangularDominance { .. }, 1) => "half-line",
        (RelationKernel::TriangularDominance { .. }, 2) => "quarter-plane",
        (RelationKernel::TriangularDominance { .. }, _) => "orthant",
        (
            RelationKernel::Metric {
                metric: Metric::Euclidean,
                ..
            },
            _,
        ) => "ball",
        (
            RelationKernel::Metric {
                metric: Metric::Mahalanobis(_),
                ..
            },
            2,
        ) => "ellipse",
        (
            RelationKernel::Metric {
                metric: Metric::Mahalanobis(_),
                ..
            },
            _,
        ) => "ellipsoid",
        (
            RelationKernel::Metric {
                metric: Metric::Manhattan(_),
                ..
            },
            _,
        ) => "diamond",
    }
}

/// One record per instance, in dataset order, for the granules `R⁺_{β_u}(u)`.
pub fn export_geometry<S: Scalar>(
    dataset: &LabeledDataset<S>,
    kernel: &RelationKernel<S>,
    beta: &FuzzySet<S>,
    config: &PipelineConfig<S>,
) -> Result<Vec<GranuleGeometry<S>>> {
    if beta.len() != dataset.n() {
        return Err(Error::DimensionMismatch {
            expected: dataset.n(),
            actual: beta.len(),
        });
    }
    let tag = shape_tag(kernel, dataset.table().n_attributes());
    (0..dataset.n())
        .map(|u| {
            let (relation_level, shape) =
                granule_shape(kernel, beta.get(u), config.alpha_level, &config.triplet)?;
            Ok(GranuleGeometry {
                index: u,
                id: dataset.ids()[u].clone(),
                class: dataset.labels()[u].clone(),
                beta: beta.get(u),
                alpha_level: config.alpha_level,
                center: dataset.table().row(u).to_vec(),
                tag,
                relation_level,
                shape,
            })
        })
        .collect()
}

/// Extremes of granule membership over random points inside and outside a level set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometrySample<S> {
    pub inside: usize,
    pub outside: usize,
    /// Smallest membership among inside points.
    pub inside_min: S,
    /// Largest membership among outside points.
    pub outside_max: S,
}

impl<S: Scalar> GeometrySample<S> {
    pub fn passes(&self, alpha_level: S, tol: S) -> bool {
        self.inside_min >= alpha_level - tol && self.outside_max < alpha_level + tol
    }
}

/// Draws `count` points inside the level set (rejection from its bounding box)
/// and `count` outside it (rejection from the box doubled about its centre) and
/// evaluates the granule membership through `kernel`. Unbounded sides use the
/// attribute range as extent. Returns `None` for non-drawable records.
pub fn sample_geometry<S: Scalar>(
    geometry: &GranuleGeometry<S>,
    kernel: &RelationKernel<S>,
    triplet: &ResidualTriplet<S>,
    extent: &[S],
    count: usize,
    seed: u64,
) -> Option<GeometrySample<S>> {
    let shape = geometry.shape.as_ref()?;
    let center = &geometry.center;
    let bbox = shape.bounding_box(center, extent);
    let doubled: Vec<(S, S)> = bbox
        .iter()
        .map(|&(lo, hi)| {
            let (mid, half) = ((lo + hi) / S::lit(2.0), (hi - lo) / S::lit(2.0));
            (mid - S::lit(2.0) * half, mid + S::lit(2.0) * half)
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |b: &[(S, S)]| -> Vec<S> {
        b.iter()
            .map(|&(lo, hi)| lo + (hi - lo) * S::lit(rng.gen::<f64>()))
            .collect()
    };
    let membership = |x: &[S]| triplet.t(kernel.degree(x, center), geometry.beta);
    let mut out = GeometrySample {
        inside: 0,
        outside: 0,
        inside_min: S::one(),
        outside_max: S::zero(),
    };
    let budget = count * 10_000;
    for _ in 0..budget {
        if out.inside >= count {
            break;
        }
        let x = draw(&bbox);
        if shape.contains(center, &x) {
            out.inside += 1;
            out.inside_min = out.inside_min.min(membership(&x));
        }
    }
    for _ in 0..budget {
        if out.outside >= count {
            break;
        }
        let x = draw(&doubled);
        if !shape.contains(center, &x) {
            out.outside += 1;
            out.outside_max = out.outside_max.max(membership(&x));
        }
    }
    Some(out)
}
