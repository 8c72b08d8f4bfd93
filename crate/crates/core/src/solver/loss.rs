//! Loss functions, optionally scaled by an isomorphism: `L_φ(y, ŷ) = L(φ(y), φ(ŷ))`.

use crate::connectives::{Isomorphism, ResidualTriplet};
use crate::error::{Error, Result};
use crate::scalar::{unit_grid, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LossKind<S> {
    /// `p`-quantile (pinball) loss.
    Quantile(S),
    /// Squared error.
    Mse,
    /// Absolute error; the quantile loss at `p = ½` up to a factor of 2.
    Mae,
}

#[derive(Debug, Clone)]
pub struct Loss<S> {
    kind: LossKind<S>,
    iso: Isomorphism<S>,
}

impl<S: Scalar> Loss<S> {
    pub fn new(kind: LossKind<S>, iso: Isomorphism<S>) -> Result<Self> {
        if let LossKind::Quantile(p) = kind {
            if !p.is_degree() {
                return Err(Error::InvalidParameter(format!(
                    "quantile level {p} must lie in [0, 1]"
                )));
            }
        }
        Ok(Loss { kind, iso })
    }

    pub fn mae() -> Self {
        Loss {
            kind: LossKind::Mae,
            iso: Isomorphism::identity(),
        }
    }

    pub fn mse() -> Self {
        Loss {
            kind: LossKind::Mse,
            iso: Isomorphism::identity(),
        }
    }

    pub fn quantile(p: S) -> Result<Self> {
        Self::new(LossKind::Quantile(p), Isomorphism::identity())
    }

    /// The loss scaled by the isomorphism of `triplet`.
    pub fn scaled_for(kind: LossKind<S>, triplet: &ResidualTriplet<S>) -> Result<Self> {
        Self::new(kind, triplet.isomorphism().clone())
    }

    pub fn kind(&self) -> LossKind<S> {
        self.kind
    }

    pub fn isomorphism(&self) -> &Isomorphism<S> {
        &self.iso
    }

    pub fn name(&self) -> String {
        let base = match self.kind {
            LossKind::Quantile(p) => format!("quantile({p})"),
            LossKind::Mse => "mse".into(),
            LossKind::Mae => "mae".into(),
        };
        if self.iso.is_identity() {
            base
        } else {
            format!("{base}∘{}", self.iso.name())
        }
    }

    pub fn eval(&self, y: S, y_hat: S) -> S {
        let (a, b) = (self.iso.apply(y), self.iso.apply(y_hat));
        let diff = a - b;
        match self.kind {
            LossKind::Mse => diff * diff,
            LossKind::Mae => diff.abs(),
            LossKind::Quantile(p) => {
                if diff > S::zero() {
                    p * diff
                } else {
                    (S::one() - p) * diff.abs()
                }
            }
        }
    }

    /// `L(y, ŷ) = L(ŷ, y)` for every pair of degrees.
    pub fn is_symmetric(&self) -> bool {
        match self.kind {
            LossKind::Mse | LossKind::Mae => true,
            LossKind::Quantile(p) => p == S::lit(0.5),
        }
    }

    /// Analytic ∨-type classification.
    pub fn is_v_type(&self) -> bool {
        match self.kind {
            LossKind::Mse | LossKind::Mae => true,
            LossKind::Quantile(p) => p > S::zero() && p < S::one(),
        }
    }

    /// Grid check of the ∨-type conditions: zero on the diagonal, strictly
    /// increasing away from it in either argument.
    pub fn satisfies_v_type_on_grid(&self, step: S) -> bool {
        let grid = unit_grid(step);
        for (k, &a) in grid.iter().enumerate() {
            if self.eval(a, a) != S::zero() {
                return false;
            }
            for w in grid[k..].windows(2) {
                if !(self.eval(w[1], a) > self.eval(w[0], a))
                    || !(self.eval(a, w[1]) > self.eval(a, w[0]))
                {
                    return false;
                }
            }
            for w in grid[..=k].windows(2) {
                if !(self.eval(w[0], a) > self.eval(w[1], a))
                    || !(self.eval(a, w[0]) > self.eval(a, w[1]))
                {
                    return false;
                }
            }
        }
        true
    }

    /// `max |L(y, ŷ) − L(N(ŷ), N(y))|` over the grid.
    pub fn duality_violation(&self, triplet: &ResidualTriplet<S>, step: S) -> S {
        let grid = unit_grid(step);
        let mut worst = S::zero();
        for &y in &grid {
            for &yh in &grid {
                let dual = self.eval(triplet.n(yh), triplet.n(y));
                worst = worst.max((self.eval(y, yh) - dual).abs());
            }
        }
        worst
    }
}
