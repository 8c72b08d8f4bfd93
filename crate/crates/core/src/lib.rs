//! Multi-class granular approximation over fuzzy relations.
//!
//! The crate is organised bottom-up:
//!
//! * [`connectives`]: t-norms, residual implicators, negators and their
//!   isomorphic transforms, with grid checks of the algebraic laws;
//! * [`relations`]: fuzzy relations built from numeric attributes;
//! * [`granules`]: fuzzy granules, rough approximations, disjointness and adjacency;
//! * [`solver`]: the approximation problems, LP/QP solvers, a brute-force
//!   reference and solution certificates;
//! * [`pipeline`]: dataset level workflow, relabeling suggestions and level-set geometry.
//!
//! Every numeric type is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the crate root fix the scalar to `f64`.

pub mod connectives;
pub mod error;
pub mod granules;
pub mod pipeline;
pub mod relations;
pub mod scalar;
pub mod solver;
pub mod tolerance;

pub use connectives::{verify_laws, Isomorphism, Law, LawReport, ResidualTriplet, TNormKind};
pub use error::{Error, Result};
pub use granules::{FuzzySet, Granule, Orientation};
pub use relations::{AttributeTable, Mahalanobis, Metric, RelationKernel, RelationMatrix};
pub use scalar::Scalar;
pub use solver::{
    ApproximationResult, BoundMatrix, DecisionRelation, Loss, LossKind, SolveOptions,
};
pub use tolerance::Tolerances;

pub type Triplet = ResidualTriplet<f64>;
pub type Iso = Isomorphism<f64>;
pub type Relation = RelationMatrix<f64>;
pub type Attributes = AttributeTable<f64>;
pub type Set = FuzzySet<f64>;
pub type Bounds = BoundMatrix<f64>;
pub type Approximation = ApproximationResult<f64>;
pub type Options = SolveOptions<f64>;
pub type Dataset = pipeline::LabeledDataset<f64>;
