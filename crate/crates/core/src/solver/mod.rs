//! Granular approximation problems and their solvers.
//!
//! The multi-class problem looks for own-class memberships `β` minimizing
//! `Σ L(1, β_u)` subject to `T(β_u, β_v) ≤ M(u, v)`. For triplets isomorphic to
//! Łukasiewicz the substitution `α = φ(β)` turns the constraints into
//! `α_u + α_v ≤ 1 + φ(M(u, v))`, which is a linear program for the scaled
//! absolute error and a convex quadratic program for the scaled squared error.

mod active_set;
mod binary;
mod bounds;
mod bruteforce;
mod feasible;
mod loss;
mod simplex;
mod verify;

use log::warn;

use crate::connectives::ResidualTriplet;
use crate::error::{Error, Result};
use crate::granules::FuzzySet;
use crate::scalar::Scalar;
use crate::tolerance::Tolerances;

pub use active_set::KktResidual;
pub use binary::{binary_bounds, solve_binary};
pub use bounds::{build_bounds, BoundMatrix, DecisionRelation, PairBound};
pub use bruteforce::{
    bruteforce_granular, solve_bruteforce, GranularSolution, MAX_BRUTEFORCE_NODES,
};
pub use feasible::{feasible_solution, FeasibleStart};
pub use loss::{Loss, LossKind};
pub use verify::{
    verify_binary_tightness, verify_constraints, verify_tightness, BinaryPart,
    BinaryTightnessReport, ConstraintReport, TightEntry, TightnessReport,
};

use active_set::SparseConstraint;
use simplex::PackingLp;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Lp,
    Qp,
    BruteForce,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Lp => "lp",
            Method::Qp => "qp",
            Method::BruteForce => "bruteforce",
        }
    }
}

/// Per-instance tag in the result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PartitionTag {
    /// Some partner constraint is binding.
    Tight,
    /// No binding partner; only allowed at `β_u = 1`.
    Slack,
    /// Binary mode, `Â(u) < A(u)`.
    Below,
    /// Binary mode, `Â(u) = A(u)`.
    Equal,
    /// Binary mode, `Â(u) > A(u)`.
    Above,
}

impl PartitionTag {
    pub fn as_str(self) -> &'static str {
        match self {
            PartitionTag::Tight => "tight",
            PartitionTag::Slack => "slack",
            PartitionTag::Below => "U-",
            PartitionTag::Equal => "U0",
            PartitionTag::Above => "U+",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "tight" => PartitionTag::Tight,
            "slack" => PartitionTag::Slack,
            "U-" => PartitionTag::Below,
            "U0" => PartitionTag::Equal,
            "U+" => PartitionTag::Above,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics<S> {
    pub constraints: ConstraintReport<S>,
    pub tightness: TightnessReport<S>,
    /// Quadratic program only, in the `½‖α − 1‖²` scaling.
    pub kkt: Option<KktResidual<S>>,
    pub iterations: usize,
}

impl<S: Scalar> Diagnostics<S> {
    pub fn max_violation(&self) -> S {
        self.constraints.max_violation
    }

    /// Partner whose constraint binds `β_u`, if any.
    pub fn tight_partner(&self, u: usize) -> Option<usize> {
        let e = &self.tightness.entries[u];
        e.partner.filter(|_| e.tight)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproximationResult<S> {
    /// Own-class membership of every instance.
    pub beta: FuzzySet<S>,
    /// `α_u = φ(β_u)`.
    pub alpha: Vec<S>,
    /// Value of the solved program: `Σ α` for the linear program (maximized),
    /// `Σ (1 − α)²` for the quadratic program, the loss for brute force.
    pub objective: S,
    /// `Σ L(1, β_u)` for the loss associated with the method.
    pub loss: S,
    pub partition: Vec<PartitionTag>,
    pub diagnostics: Diagnostics<S>,
    /// Binary mode: the approximation `Â` of the positive class.
    pub estimate: Option<FuzzySet<S>>,
    pub method: Method,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions<S> {
    pub tolerances: Tolerances<S>,
    /// Accept asymmetric bound matrices (relations that are only T-preorders).
    /// No optimality guarantees are claimed in that case.
    pub experimental_asymmetric: bool,
}

impl<S: Scalar> Default for SolveOptions<S> {
    fn default() -> Self {
        SolveOptions {
            tolerances: Tolerances::default(),
            experimental_asymmetric: false,
        }
    }
}

fn require_lukasiewicz<S: Scalar>(triplet: &ResidualTriplet<S>) -> Result<()> {
    triplet.require_residuated()?;
    if !triplet.is_lukasiewicz_isomorphic() {
        return Err(Error::Unsupported(format!(
            "linear and quadratic programs need a Łukasiewicz-isomorphic triplet, got {}",
            triplet.kind()
        )));
    }
    Ok(())
}

fn require_symmetric<S: Scalar>(bounds: &BoundMatrix<S>, opts: &SolveOptions<S>) -> Result<()> {
    if bounds.is_symmetric(opts.tolerances.rel) {
        return Ok(());
    }
    if opts.experimental_asymmetric {
        warn!("solving with an asymmetric bound matrix (experimental)");
        Ok(())
    } else {
        Err(Error::Unsupported(
            "asymmetric bounds need the experimental_asymmetric option".into(),
        ))
    }
}

/// Maximizes `Σ α_u` over `α_u + α_v ≤ 1 + M_φ(u,v)`, `0 ≤ α ≤ 1`.
pub fn solve_lp<S: Scalar>(
    bounds: &BoundMatrix<S>,
    triplet: &ResidualTriplet<S>,
    opts: &SolveOptions<S>,
) -> Result<ApproximationResult<S>> {
    require_lukasiewicz(triplet)?;
    require_symmetric(bounds, opts)?;
    let n = bounds.n();
    let lp = PackingLp {
        weights: vec![S::one(); n],
        upper: vec![S::one(); n],
        rows: bounds
            .pair_bounds()
            .into_iter()
            .map(|p| (p.u, p.v, S::one() + p.phi_bound))
            .collect(),
    };
    let sol = lp.solve()?;
    let objective = sol.x.iter().copied().sum();
    let loss = sol.x.iter().map(|&a| S::one() - a).sum();
    finish(
        bounds,
        triplet,
        opts,
        sol.x,
        objective,
        loss,
        None,
        sol.iterations,
        Method::Lp,
    )
}

/// Minimizes `Σ (1 − α_u)²` over `α_u + α_v ≤ 1 + M_φ(u,v)`, `0 ≤ α ≤ 1`.
pub fn solve_qp<S: Scalar>(
    bounds: &BoundMatrix<S>,
    triplet: &ResidualTriplet<S>,
    opts: &SolveOptions<S>,
) -> Result<ApproximationResult<S>> {
    require_lukasiewicz(triplet)?;
    require_symmetric(bounds, opts)?;
    let n = bounds.n();
    let mut cons: Vec<SparseConstraint<S>> = bounds
        .pair_bounds()
        .into_iter()
        .map(|p| SparseConstraint::pair(p.u, p.v, -S::one(), -(S::one() + p.phi_bound)))
        .collect();
    for u in 0..n {
        cons.push(SparseConstraint::single(u, S::one(), S::zero()));
        cons.push(SparseConstraint::single(u, -S::one(), -S::one()));
    }
    let target = vec![S::one(); n];
    let sol = active_set::project(&target, &cons)?;
    let kkt = active_set::kkt_residual(&target, &cons, &sol);
    if kkt.max() > opts.tolerances.kkt {
        warn!(
            "quadratic program KKT residual {} exceeds tolerance",
            kkt.max()
        );
    }
    let alpha: Vec<S> = sol
        .x
        .iter()
        .map(|a| a.max(S::zero()).min(S::one()))
        .collect();
    let objective: S = alpha.iter().map(|&a| (S::one() - a) * (S::one() - a)).sum();
    finish(
        bounds,
        triplet,
        opts,
        alpha,
        objective,
        objective,
        Some(kkt),
        sol.iterations,
        Method::Qp,
    )
}

#[allow(clippy::too_many_arguments)]
fn finish<S: Scalar>(
    bounds: &BoundMatrix<S>,
    triplet: &ResidualTriplet<S>,
    opts: &SolveOptions<S>,
    alpha: Vec<S>,
    objective: S,
    loss: S,
    kkt: Option<KktResidual<S>>,
    iterations: usize,
    method: Method,
) -> Result<ApproximationResult<S>> {
    let iso = triplet.isomorphism();
    let beta = FuzzySet::new(
        alpha
            .iter()
            .map(|&a| iso.invert(a).max(S::zero()).min(S::one()))
            .collect(),
    )?;
    let constraints = verify_constraints(&beta, bounds, triplet)?;
    if !constraints.feasible(opts.tolerances.feas) {
        return Err(Error::Infeasible(format!(
            "{} solution violates a constraint by {}",
            method.name(),
            constraints.max_violation
        )));
    }
    let tightness = verify_tightness(&beta, bounds, triplet, opts.tolerances.feas)?;
    let partition = tightness
        .entries
        .iter()
        .map(|e| {
            if e.tight {
                PartitionTag::Tight
            } else {
                PartitionTag::Slack
            }
        })
        .collect();
    Ok(ApproximationResult {
        beta,
        alpha,
        objective,
        loss,
        partition,
        diagnostics: Diagnostics {
            constraints,
            tightness,
            kkt,
            iterations,
        },
        estimate: None,
        method,
    })
}
