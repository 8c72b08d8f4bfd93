//! Fuzzy relations over a finite universe described by numeric attributes.
//!
//! Builders materialize dense `n × n` matrices from a [`RelationKernel`],
//! which can also evaluate the relation between arbitrary attribute vectors
//! (used when sampling granule memberships off the data points).

use log::warn;
use nalgebra::{DMatrix, SymmetricEigen};

use crate::connectives::{ResidualTriplet, TNormKind};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Instances described by named numeric attributes, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributeTable<S> {
    names: Vec<String>,
    n: usize,
    values: Vec<S>,
    mins: Vec<S>,
    ranges: Vec<S>,
}

impl<S: Scalar> AttributeTable<S> {
    pub fn new(names: Vec<String>, rows: Vec<Vec<S>>) -> Result<Self> {
        let d = names.len();
        if d == 0 {
            return Err(Error::InvalidDataset("no attributes".into()));
        }
        if rows.is_empty() {
            return Err(Error::InvalidDataset("no instances".into()));
        }
        let n = rows.len();
        let mut values = Vec::with_capacity(n * d);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    actual: row.len(),
                });
            }
            if let Some(bad) = row.iter().find(|v| !v.is_finite()) {
                return Err(Error::InvalidDataset(format!(
                    "non-finite attribute value {bad} in instance {i}"
                )));
            }
            values.extend(row);
        }
        let mut mins = vec![S::infinity(); d];
        let mut maxs = vec![S::neg_infinity(); d];
        for row in values.chunks_exact(d) {
            for (q, &v) in row.iter().enumerate() {
                mins[q] = mins[q].min(v);
                maxs[q] = maxs[q].max(v);
            }
        }
        let ranges = mins.iter().zip(&maxs).map(|(&lo, &hi)| hi - lo).collect();
        Ok(AttributeTable {
            names,
            n,
            values,
            mins,
            ranges,
        })
    }

    pub fn n_instances(&self) -> usize {
        self.n
    }

    pub fn n_attributes(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn row(&self, i: usize) -> &[S] {
        let d = self.n_attributes();
        &self.values[i * d..(i + 1) * d]
    }

    pub fn value(&self, i: usize, q: usize) -> S {
        self.values[i * self.n_attributes() + q]
    }

    /// `max − min` of attribute `q`.
    pub fn range(&self, q: usize) -> S {
        self.ranges[q]
    }

    pub fn ranges(&self) -> &[S] {
        &self.ranges
    }

    pub fn min(&self, q: usize) -> S {
        self.mins[q]
    }

    pub fn constant_attributes(&self) -> Vec<usize> {
        (0..self.n_attributes())
            .filter(|&q| self.ranges[q] == S::zero())
            .collect()
    }
}

/// Properties a relation claims to have.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RelationProperties {
    pub reflexive: bool,
    pub symmetric: bool,
    /// T-transitivity with respect to the given base t-norm.
    pub transitive: Option<TNormKind>,
}

impl RelationProperties {
    pub const NONE: RelationProperties = RelationProperties {
        reflexive: false,
        symmetric: false,
        transitive: None,
    };

    pub fn lukasiewicz_preorder() -> Self {
        RelationProperties {
            reflexive: true,
            symmetric: false,
            transitive: Some(TNormKind::Lukasiewicz),
        }
    }

    pub fn lukasiewicz_equivalence() -> Self {
        RelationProperties {
            reflexive: true,
            symmetric: true,
            transitive: Some(TNormKind::Lukasiewicz),
        }
    }
}

/// Dense `n × n` fuzzy relation with entries in `[0,1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationMatrix<S> {
    n: usize,
    values: Vec<S>,
    declared: RelationProperties,
}

impl<S: Scalar> RelationMatrix<S> {
    /// Wraps row-major values after checking shape and range.
    pub fn from_values(n: usize, values: Vec<S>, declared: RelationProperties) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                actual: values.len(),
            });
        }
        if let Some(bad) = values.iter().find(|v| !v.is_degree()) {
            return Err(Error::Domain {
                what: "relation degree",
                value: bad.to_f64_lossy(),
            });
        }
        Ok(RelationMatrix {
            n,
            values,
            declared,
        })
    }

    pub fn from_fn(
        n: usize,
        declared: RelationProperties,
        mut f: impl FnMut(usize, usize) -> S,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(n * n);
        for u in 0..n {
            for v in 0..n {
                values.push(f(u, v));
            }
        }
        Self::from_values(n, values, declared)
    }

    /// Crisp equality relation.
    pub fn identity(n: usize) -> Self {
        let mut values = vec![S::zero(); n * n];
        for u in 0..n {
            values[u * n + u] = S::one();
        }
        RelationMatrix {
            n,
            values,
            declared: RelationProperties {
                reflexive: true,
                symmetric: true,
                transitive: Some(TNormKind::Minimum),
            },
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `R(u, v)`.
    #[inline]
    pub fn get(&self, u: usize, v: usize) -> S {
        self.values[u * self.n + v]
    }

    pub fn row(&self, u: usize) -> &[S] {
        &self.values[u * self.n..(u + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[S] {
        &self.values
    }

    pub fn declared(&self) -> RelationProperties {
        self.declared
    }

    /// The inverse relation `R⁻¹(u, v) = R(v, u)`.
    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut values = vec![S::zero(); n * n];
        for u in 0..n {
            for v in 0..n {
                values[v * n + u] = self.values[u * n + v];
            }
        }
        RelationMatrix {
            n,
            values,
            declared: self.declared,
        }
    }
}

/// Symmetric positive-definite matrix defining `d(u,v) = √((u−v)ᵀ Σ (u−v))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mahalanobis<S> {
    dim: usize,
    sigma: Vec<S>,
}

impl<S: Scalar> Mahalanobis<S> {
    /// Validates `sigma` (row-major `dim × dim`) by symmetry and Cholesky factorization.
    pub fn new(dim: usize, sigma: Vec<S>) -> Result<Self> {
        if dim == 0 || sigma.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: sigma.len(),
            });
        }
        if sigma.iter().any(|v| !v.is_finite()) {
            return Err(Error::NotPositiveDefinite);
        }
        let scale = sigma.iter().fold(S::zero(), |m, v| m.max(v.abs()));
        let tol = S::epsilon().sqrt() * scale.max(S::one());
        for i in 0..dim {
            for j in 0..i {
                if (sigma[i * dim + j] - sigma[j * dim + i]).abs() > tol {
                    return Err(Error::NotPositiveDefinite);
                }
            }
        }
        let m = DMatrix::from_row_slice(
            dim,
            dim,
            &sigma.iter().map(|v| v.to_f64_lossy()).collect::<Vec<_>>(),
        );
        if m.cholesky().is_none() {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(Mahalanobis { dim, sigma })
    }

    pub fn identity(dim: usize) -> Self {
        let mut sigma = vec![S::zero(); dim * dim];
        for i in 0..dim {
            sigma[i * dim + i] = S::one();
        }
        Mahalanobis { dim, sigma }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sigma(&self) -> &[S] {
        &self.sigma
    }

    pub fn distance(&self, u: &[S], v: &[S]) -> S {
        debug_assert_eq!(u.len(), self.dim);
        let d = self.dim;
        let mut acc = S::zero();
        for i in 0..d {
            let di = u[i] - v[i];
            if di == S::zero() {
                continue;
            }
            let mut row = S::zero();
            for j in 0..d {
                row = row + self.sigma[i * d + j] * (u[j] - v[j]);
            }
            acc = acc + di * row;
        }
        acc.max(S::zero()).sqrt()
    }

    /// Eigenvalues in ascending order with unit eigenvectors (`vectors[k]` pairs with `values[k]`).
    pub fn eigen(&self) -> (Vec<S>, Vec<Vec<S>>) {
        let m = DMatrix::from_row_slice(
            self.dim,
            self.dim,
            &self
                .sigma
                .iter()
                .map(|v| v.to_f64_lossy())
                .collect::<Vec<_>>(),
        );
        let eig = SymmetricEigen::new(m);
        let mut order: Vec<usize> = (0..self.dim).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| S::lit(eig.eigenvalues[k])).collect();
        let vectors = order
            .iter()
            .map(|&k| {
                let col = eig.eigenvectors.column(k);
                // canonical sign: first nonzero component positive
                let flip = col
                    .iter()
                    .find(|c| c.abs() > 1e-12)
                    .is_some_and(|&c| c < 0.0);
                col.iter()
                    .map(|&c| S::lit(if flip { -c } else { c }))
                    .collect()
            })
            .collect();
        (values, vectors)
    }
}

/// Distance functions usable with [`metric_relation`].
#[derive(Debug, Clone, PartialEq)]
pub enum Metric<S> {
    Euclidean,
    /// Sum of absolute differences, optionally weighted per attribute.
    Manhattan(Option<Vec<S>>),
    Mahalanobis(Mahalanobis<S>),
}

impl<S: Scalar> Metric<S> {
    pub fn distance(&self, u: &[S], v: &[S]) -> S {
        match self {
            Metric::Euclidean => u
                .iter()
                .zip(v)
                .map(|(&a, &b)| (a - b) * (a - b))
                .fold(S::zero(), |s, x| s + x)
                .sqrt(),
            Metric::Manhattan(weights) => match weights {
                None => u
                    .iter()
                    .zip(v)
                    .fold(S::zero(), |s, (&a, &b)| s + (a - b).abs()),
                Some(w) => u
                    .iter()
                    .zip(v)
                    .zip(w)
                    .fold(S::zero(), |s, ((&a, &b), &wq)| s + wq * (a - b).abs()),
            },
            Metric::Mahalanobis(m) => m.distance(u, v),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Metric::Euclidean => "euclidean",
            Metric::Manhattan(_) => "manhattan",
            Metric::Mahalanobis(_) => "mahalanobis",
        }
    }
}

/// Validates `sigma` and returns the Mahalanobis metric.
pub fn mahalanobis<S: Scalar>(dim: usize, sigma: Vec<S>) -> Result<Metric<S>> {
    Ok(Metric::Mahalanobis(Mahalanobis::new(dim, sigma)?))
}

/// Pointwise definition of a relation family; evaluates `R(u, v)` for any attribute vectors.
#[derive(Debug, Clone, PartialEq)]
pub enum RelationKernel<S> {
    /// Per attribute `max(min(1 − γ (v_q − u_q)/range_q, 1), 0)`, min-aggregated.
    TriangularDominance { gamma: S, ranges: Vec<S> },
    /// Per attribute `max(1 − γ |u_q − v_q|/range_q, 0)`, min-aggregated.
    TriangularSimilarity { gamma: S, ranges: Vec<S> },
    /// `max(1 − d(u,v)/a, 0)`.
    Metric { metric: Metric<S>, a: S },
}

fn check_positive<S: Scalar>(name: &str, value: S) -> Result<()> {
    if value > S::zero() && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be positive and finite, got {value}"
        )))
    }
}

fn warn_constant<S: Scalar>(table: &AttributeTable<S>) {
    for q in table.constant_attributes() {
        warn!(
            "attribute `{}` is constant; its per-attribute relation is identically 1",
            table.names()[q]
        );
    }
}

impl<S: Scalar> RelationKernel<S> {
    pub fn triangular_dominance(table: &AttributeTable<S>, gamma: S) -> Result<Self> {
        check_positive("gamma", gamma)?;
        warn_constant(table);
        Ok(RelationKernel::TriangularDominance {
            gamma,
            ranges: table.ranges().to_vec(),
        })
    }

    pub fn triangular_similarity(table: &AttributeTable<S>, gamma: S) -> Result<Self> {
        check_positive("gamma", gamma)?;
        warn_constant(table);
        Ok(RelationKernel::TriangularSimilarity {
            gamma,
            ranges: table.ranges().to_vec(),
        })
    }

    pub fn metric(metric: Metric<S>, a: S) -> Result<Self> {
        check_positive("a", a)?;
        Ok(RelationKernel::Metric { metric, a })
    }

    /// `R(u, v)`.
    pub fn degree(&self, u: &[S], v: &[S]) -> S {
        let one = S::one();
        let zero = S::zero();
        match self {
            RelationKernel::TriangularDominance { gamma, ranges } => {
                let mut r = one;
                for ((&uq, &vq), &range) in u.iter().zip(v).zip(ranges) {
                    if range == zero {
                        continue;
                    }
                    let rq = (one - *gamma * (vq - uq) / range).min(one).max(zero);
                    r = r.min(rq);
                }
                r
            }
            RelationKernel::TriangularSimilarity { gamma, ranges } => {
                let mut r = one;
                for ((&uq, &vq), &range) in u.iter().zip(v).zip(ranges) {
                    if range == zero {
                        continue;
                    }
                    let rq = (one - *gamma * (uq - vq).abs() / range).max(zero);
                    r = r.min(rq);
                }
                r
            }
            RelationKernel::Metric { metric, a } => {
                (one - metric.distance(u, v) / *a).max(zero).min(one)
            }
        }
    }

    pub fn declared_properties(&self) -> RelationProperties {
        match self {
            RelationKernel::TriangularDominance { .. } => {
                RelationProperties::lukasiewicz_preorder()
            }
            _ => RelationProperties::lukasiewicz_equivalence(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        !matches!(self, RelationKernel::TriangularDominance { .. })
    }

    /// Materializes the relation over all pairs of the table.
    pub fn matrix(&self, table: &AttributeTable<S>) -> Result<RelationMatrix<S>> {
        let n = table.n_instances();
        if let RelationKernel::Metric { metric, .. } = self {
            if let Metric::Mahalanobis(m) = metric {
                if m.dim() != table.n_attributes() {
                    return Err(Error::DimensionMismatch {
                        expected: table.n_attributes(),
                        actual: m.dim(),
                    });
                }
            }
            for u in 0..n {
                for v in 0..n {
                    let d = metric.distance(table.row(u), table.row(v));
                    if !d.is_finite() {
                        return Err(Error::InvalidParameter(format!(
                            "non-finite distance between instances {u} and {v}"
                        )));
                    }
                }
            }
        }
        RelationMatrix::from_fn(n, self.declared_properties(), |u, v| {
            self.degree(table.row(u), table.row(v))
        })
    }
}

/// Triangular dominance relation (a Łukasiewicz preorder).
pub fn triangular_dominance<S: Scalar>(
    table: &AttributeTable<S>,
    gamma: S,
) -> Result<RelationMatrix<S>> {
    RelationKernel::triangular_dominance(table, gamma)?.matrix(table)
}

/// Triangular similarity relation (a Łukasiewicz equivalence).
pub fn triangular_similarity<S: Scalar>(
    table: &AttributeTable<S>,
    gamma: S,
) -> Result<RelationMatrix<S>> {
    RelationKernel::triangular_similarity(table, gamma)?.matrix(table)
}

/// Metric-based relation `max(1 − d(u,v)/a, 0)` (a Łukasiewicz equivalence).
pub fn metric_relation<S: Scalar>(
    table: &AttributeTable<S>,
    metric: Metric<S>,
    a: S,
) -> Result<RelationMatrix<S>> {
    RelationKernel::metric(metric, a)?.matrix(table)
}

/// Largest violations of reflexivity, symmetry and T-transitivity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropertyReport<S> {
    pub reflexivity: S,
    pub symmetry: S,
    pub transitivity: S,
    /// Triple `(u, v, w)` attaining the transitivity violation.
    pub worst_triple: Option<(usize, usize, usize)>,
}

impl<S: Scalar> PropertyReport<S> {
    pub fn is_reflexive(&self, tol: S) -> bool {
        self.reflexivity <= tol
    }

    pub fn is_symmetric(&self, tol: S) -> bool {
        self.symmetry <= tol
    }

    pub fn is_transitive(&self, tol: S) -> bool {
        self.transitivity <= tol
    }

    /// Whether every declared property holds within `tol`.
    pub fn satisfies(&self, declared: RelationProperties, tol: S) -> bool {
        (!declared.reflexive || self.is_reflexive(tol))
            && (!declared.symmetric || self.is_symmetric(tol))
            && (declared.transitive.is_none() || self.is_transitive(tol))
    }
}

/// Exhaustive scan of reflexivity, symmetry and transitivity w.r.t. `triplet`.
pub fn check_properties<S: Scalar>(
    rel: &RelationMatrix<S>,
    triplet: &ResidualTriplet<S>,
) -> PropertyReport<S> {
    let n = rel.n();
    let zero = S::zero();
    let mut reflexivity = zero;
    let mut symmetry = zero;
    let mut transitivity = zero;
    let mut worst_triple = None;
    for u in 0..n {
        reflexivity = reflexivity.max((S::one() - rel.get(u, u)).abs());
        for v in 0..n {
            symmetry = symmetry.max((rel.get(u, v) - rel.get(v, u)).abs());
            let ruv = rel.get(u, v);
            if ruv == zero {
                continue;
            }
            let row_v = rel.row(v);
            let row_u = rel.row(u);
            for w in 0..n {
                let excess = triplet.t(ruv, row_v[w]) - row_u[w];
                if excess > transitivity {
                    transitivity = excess;
                    worst_triple = Some((u, v, w));
                }
            }
        }
    }
    PropertyReport {
        reflexivity,
        symmetry,
        transitivity,
        worst_triple,
    }
}
