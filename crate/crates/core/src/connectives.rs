//! Residual triplets `(T, I, N)`: t-norms, their residual implicators and the
//! induced negators, optionally transported along an order isomorphism `φ`.
//!
//! A triplet with isomorphism `φ` evaluates
//!
//! ```text
//! T_φ(x, y) = φ⁻¹(T(φ(x), φ(y)))
//! I_φ(x, y) = φ⁻¹(I(φ(x), φ(y)))
//! N_φ(x)    = I_φ(x, 0)
//! ```
//!
//! [`verify_laws`] evaluates the algebraic laws of a triplet on a full grid
//! and reports the largest violation of each.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{unit_grid, Scalar};
use crate::tolerance::Tolerances;

/// The supported base t-norms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TNormKind {
    Minimum,
    Product,
    Lukasiewicz,
    Drastic,
    NilpotentMinimum,
}

impl TNormKind {
    pub const ALL: [TNormKind; 5] = [
        TNormKind::Minimum,
        TNormKind::Product,
        TNormKind::Lukasiewicz,
        TNormKind::Drastic,
        TNormKind::NilpotentMinimum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TNormKind::Minimum => "minimum",
            TNormKind::Product => "product",
            TNormKind::Lukasiewicz => "lukasiewicz",
            TNormKind::Drastic => "drastic",
            TNormKind::NilpotentMinimum => "nilpotent_minimum",
        }
    }

    /// Left-continuous kinds form a residuated pair with their implicator.
    pub fn is_left_continuous(self) -> bool {
        !matches!(self, TNormKind::Drastic)
    }

    pub fn is_continuous(self) -> bool {
        matches!(
            self,
            TNormKind::Minimum | TNormKind::Product | TNormKind::Lukasiewicz
        )
    }

    /// Kinds whose induced negator is involutive.
    pub fn is_imtl(self) -> bool {
        matches!(self, TNormKind::Lukasiewicz | TNormKind::NilpotentMinimum)
    }

    /// Base t-norm on untransformed arguments.
    pub fn t_norm<S: Scalar>(self, x: S, y: S) -> S {
        let one = S::one();
        let zero = S::zero();
        match self {
            TNormKind::Minimum => x.min(y),
            TNormKind::Product => x * y,
            TNormKind::Lukasiewicz => {
                // keeps the neutral element exact: T(x, 1) = x
                let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
                if hi == one {
                    return lo;
                }
                // residues of x + y = 1 are zeroed; a root isomorphism would inflate them
                let s = lo - (one - hi);
                if s > boundary_slack::<S>() {
                    s
                } else {
                    zero
                }
            }
            TNormKind::Drastic => {
                if x.max(y) == one {
                    x.min(y)
                } else {
                    zero
                }
            }
            TNormKind::NilpotentMinimum => {
                // sums within rounding of 1 sit on the boundary, where the value is 0
                if x + y > one + boundary_slack::<S>() {
                    x.min(y)
                } else {
                    zero
                }
            }
        }
    }

    /// Base residual implicator on untransformed arguments.
    pub fn implicator<S: Scalar>(self, x: S, y: S) -> S {
        let one = S::one();
        if x <= y && self != TNormKind::Drastic {
            return one;
        }
        if self == TNormKind::NilpotentMinimum && x <= y + boundary_slack::<S>() {
            return one;
        }
        match self {
            TNormKind::Minimum => y,
            TNormKind::Product => y / x,
            TNormKind::Lukasiewicz => (one - x + y).min(one),
            TNormKind::Drastic => {
                if x == one {
                    y
                } else {
                    one
                }
            }
            TNormKind::NilpotentMinimum => (one - x).max(y),
        }
    }
}

fn boundary_slack<S: Scalar>() -> S {
    S::epsilon() * S::lit(8.0)
}

impl fmt::Display for TNormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TNormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace(['-', ' '], "_");
        let kind = match key.as_str() {
            "minimum" | "min" | "godel" | "goedel" => TNormKind::Minimum,
            "product" | "prod" | "goguen" => TNormKind::Product,
            "lukasiewicz" | "luk" => TNormKind::Lukasiewicz,
            "drastic" => TNormKind::Drastic,
            "nilpotent_minimum" | "nilpotentminimum" | "nm" => TNormKind::NilpotentMinimum,
            _ => {
                return Err(Error::InvalidParameter(format!("unknown t-norm `{s}`")));
            }
        };
        Ok(kind)
    }
}

type Map<S> = Arc<dyn Fn(S) -> S + Send + Sync>;

/// Monotone bijection `φ: [0,1] → [0,1]` together with its inverse.
#[derive(Clone)]
pub struct Isomorphism<S> {
    name: String,
    forward: Map<S>,
    inverse: Map<S>,
    identity: bool,
}

impl<S> fmt::Debug for Isomorphism<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Isomorphism")
            .field("name", &self.name)
            .finish()
    }
}

impl<S: Scalar> Isomorphism<S> {
    pub fn identity() -> Self {
        Isomorphism {
            name: "identity".to_owned(),
            forward: Arc::new(|x| x),
            inverse: Arc::new(|x| x),
            identity: true,
        }
    }

    /// `φ(x) = x^p` for `p > 0`.
    pub fn power(exponent: S) -> Result<Self> {
        if !(exponent > S::zero()) || !exponent.is_finite() {
            return Err(Error::InvalidIsomorphism {
                name: format!("power({exponent})"),
                reason: "exponent must be positive and finite".into(),
            });
        }
        if exponent == S::one() {
            return Ok(Self::identity());
        }
        let name = if exponent == S::lit(2.0) {
            "square".to_owned()
        } else if exponent == S::lit(0.5) {
            "sqrt".to_owned()
        } else {
            format!("power({exponent})")
        };
        let inv = S::one() / exponent;
        let (forward, inverse): (Map<S>, Map<S>) = if exponent == S::lit(2.0) {
            (Arc::new(|x: S| x * x), Arc::new(|x: S| x.sqrt()))
        } else if exponent == S::lit(0.5) {
            (Arc::new(|x: S| x.sqrt()), Arc::new(|x: S| x * x))
        } else {
            (
                Arc::new(move |x: S| x.powf(exponent)),
                Arc::new(move |x: S| x.powf(inv)),
            )
        };
        Ok(Isomorphism {
            name,
            forward,
            inverse,
            identity: false,
        })
    }

    pub fn square() -> Self {
        Self::power(S::lit(2.0)).expect("valid exponent")
    }

    pub fn sqrt() -> Self {
        Self::power(S::lit(0.5)).expect("valid exponent")
    }

    /// Looks up a named isomorphism: `identity`, `square` or `sqrt`.
    pub fn from_name(name: &str) -> Result<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "identity" | "id" | "" => Ok(Self::identity()),
            "square" => Ok(Self::square()),
            "sqrt" => Ok(Self::sqrt()),
            other => Err(Error::InvalidIsomorphism {
                name: other.to_owned(),
                reason: "unknown isomorphism name".into(),
            }),
        }
    }

    /// Wraps user-supplied maps after validating them on a 1001-point grid.
    pub fn custom<F, G>(name: impl Into<String>, forward: F, inverse: G, tol: S) -> Result<Self>
    where
        F: Fn(S) -> S + Send + Sync + 'static,
        G: Fn(S) -> S + Send + Sync + 'static,
    {
        let iso = Isomorphism {
            name: name.into(),
            forward: Arc::new(forward),
            inverse: Arc::new(inverse),
            identity: false,
        };
        iso.validate(S::lit(1e-3), tol)?;
        Ok(iso)
    }

    /// Checks boundary values, strict monotonicity and the inverse round trip on a grid.
    pub fn validate(&self, step: S, tol: S) -> Result<()> {
        let fail = |reason: String| Error::InvalidIsomorphism {
            name: self.name.clone(),
            reason,
        };
        if (self.apply(S::zero())).abs() > tol || (self.apply(S::one()) - S::one()).abs() > tol {
            return Err(fail("must fix 0 and 1".into()));
        }
        let grid = unit_grid(step);
        let mut prev: Option<S> = None;
        for &x in &grid {
            let fx = self.apply(x);
            if !fx.is_finite() || !fx.is_degree() {
                return Err(fail(format!("φ({x}) = {fx} leaves [0,1]")));
            }
            if let Some(p) = prev {
                if fx <= p {
                    return Err(fail(format!("not strictly increasing at {x}")));
                }
            }
            prev = Some(fx);
            let back = self.invert(fx);
            if (back - x).abs() > tol {
                return Err(fail(format!(
                    "inverse round trip off by {} at {x}",
                    (back - x).abs()
                )));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_identity(&self) -> bool {
        self.identity
    }

    #[inline]
    pub fn apply(&self, x: S) -> S {
        if self.identity {
            x
        } else {
            (self.forward)(x)
        }
    }

    #[inline]
    pub fn invert(&self, x: S) -> S {
        if self.identity {
            x
        } else {
            (self.inverse)(x)
        }
    }
}

/// A residual triplet generated by a base t-norm and an isomorphism.
///
/// Triplets are immutable; evaluation is pure and may be shared across threads.
#[derive(Debug, Clone)]
pub struct ResidualTriplet<S> {
    kind: TNormKind,
    iso: Isomorphism<S>,
}

fn check_degree<S: Scalar>(what: &'static str, x: S) -> Result<()> {
    if x.is_degree() {
        Ok(())
    } else {
        Err(Error::Domain {
            what,
            value: x.to_f64_lossy(),
        })
    }
}

impl<S: Scalar> ResidualTriplet<S> {
    pub fn new(kind: TNormKind) -> Self {
        ResidualTriplet {
            kind,
            iso: Isomorphism::identity(),
        }
    }

    pub fn with_isomorphism(kind: TNormKind, iso: Isomorphism<S>) -> Self {
        ResidualTriplet { kind, iso }
    }

    pub fn lukasiewicz() -> Self {
        Self::new(TNormKind::Lukasiewicz)
    }

    /// Builds a triplet from configuration names, e.g. `("lukasiewicz", "square")`.
    pub fn from_names(kind: &str, iso: &str) -> Result<Self> {
        Ok(Self::with_isomorphism(
            kind.parse()?,
            Isomorphism::from_name(iso)?,
        ))
    }

    pub fn kind(&self) -> TNormKind {
        self.kind
    }

    pub fn isomorphism(&self) -> &Isomorphism<S> {
        &self.iso
    }

    pub fn is_imtl(&self) -> bool {
        self.kind.is_imtl()
    }

    pub fn is_lukasiewicz_isomorphic(&self) -> bool {
        self.kind == TNormKind::Lukasiewicz
    }

    /// Fails for triplets without the residuation property.
    pub fn require_residuated(&self) -> Result<()> {
        if self.kind.is_left_continuous() {
            Ok(())
        } else {
            Err(Error::NonResiduated(self.kind))
        }
    }

    pub fn t_norm(&self, x: S, y: S) -> Result<S> {
        check_degree("x", x)?;
        check_degree("y", y)?;
        Ok(self.t(x, y))
    }

    pub fn implicator(&self, x: S, y: S) -> Result<S> {
        check_degree("x", x)?;
        check_degree("y", y)?;
        Ok(self.i(x, y))
    }

    pub fn negator(&self, x: S) -> Result<S> {
        check_degree("x", x)?;
        Ok(self.n(x))
    }

    /// Unchecked t-norm for arguments already known to be degrees.
    #[inline]
    pub fn t(&self, x: S, y: S) -> S {
        debug_assert!(x.is_degree() && y.is_degree(), "t({x}, {y})");
        if self.iso.identity {
            self.kind.t_norm(x, y)
        } else {
            self.iso
                .invert(self.kind.t_norm(self.iso.apply(x), self.iso.apply(y)))
        }
    }

    /// Unchecked implicator.
    #[inline]
    pub fn i(&self, x: S, y: S) -> S {
        debug_assert!(x.is_degree() && y.is_degree(), "i({x}, {y})");
        if self.iso.identity {
            self.kind.implicator(x, y)
        } else {
            self.iso
                .invert(self.kind.implicator(self.iso.apply(x), self.iso.apply(y)))
        }
    }

    /// Unchecked induced negator `N(x) = I(x, 0)`.
    #[inline]
    pub fn n(&self, x: S) -> S {
        self.i(x, S::zero())
    }
}

/// Laws evaluated by [`verify_laws`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Law {
    /// (1a) `T(x,y) ≤ x` and `T(x,y) ≤ y`.
    TNormBelowArguments,
    /// (1b) `I(x,y) ≥ y`.
    ImplicatorAboveConsequent,
    /// (1c) `T(x, I(x,y)) ≤ y`.
    ModusPonens,
    /// (1d) `x ≤ y ⇔ I(x,y) = 1`.
    Ordering,
    /// (1e) `T(x, I(y,z)) ≤ I(I(x,y), z)`.
    TNormOfImplication,
    /// (1f) `I(T(x,y), z) = I(x, I(y,z))`.
    Exportation,
    /// (1g) `T(x, N(y)) ≤ N(I(x,y))`.
    NegatedImplication,
    /// (1h) `N(T(x,y)) = I(x, N(y))`.
    NegatedConjunction,
    /// `T(x,y) ≤ z ⇔ x ≤ I(y,z)`.
    Residuation,
    /// `N(N(x)) = x`.
    Involution,
    /// `I(N(x), N(y)) = I(y, x)`.
    Contraposition,
    /// `max(x,y) = I(I(x,y),y) = I(I(y,x),x)`.
    MaxDefinability,
}

impl Law {
    pub fn label(self) -> &'static str {
        match self {
            Law::TNormBelowArguments => "t-norm below arguments",
            Law::ImplicatorAboveConsequent => "implicator above consequent",
            Law::ModusPonens => "modus ponens",
            Law::Ordering => "ordering property",
            Law::TNormOfImplication => "t-norm of implication",
            Law::Exportation => "exportation",
            Law::NegatedImplication => "negated implication",
            Law::NegatedConjunction => "negated conjunction",
            Law::Residuation => "residuation",
            Law::Involution => "involution",
            Law::Contraposition => "contraposition",
            Law::MaxDefinability => "strong max-definability",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LawCheck<S> {
    pub law: Law,
    /// `None` when the law does not apply to the triplet.
    pub max_violation: Option<S>,
    /// Grid point attaining the maximum violation.
    pub witness: Option<[S; 3]>,
}

impl<S: Scalar> LawCheck<S> {
    pub fn applicable(&self) -> bool {
        self.max_violation.is_some()
    }

    pub fn passed(&self, tol: S) -> bool {
        self.max_violation.map_or(true, |v| v <= tol)
    }
}

#[derive(Debug, Clone)]
pub struct LawReport<S> {
    pub kind: TNormKind,
    pub isomorphism: String,
    pub grid_step: S,
    pub tolerance: S,
    pub checks: Vec<LawCheck<S>>,
}

impl<S: Scalar> LawReport<S> {
    pub fn get(&self, law: Law) -> Option<&LawCheck<S>> {
        self.checks.iter().find(|c| c.law == law)
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed(self.tolerance))
    }

    pub fn max_violation(&self) -> S {
        self.checks
            .iter()
            .filter_map(|c| c.max_violation)
            .fold(S::zero(), S::max)
    }
}

#[derive(Clone, Copy)]
struct Acc<S> {
    worst: S,
    at: Option<[S; 3]>,
}

impl<S: Scalar> Acc<S> {
    fn new() -> Self {
        Acc {
            worst: S::zero(),
            at: None,
        }
    }

    fn push(&mut self, v: S, at: [S; 3]) {
        if v > self.worst || v.is_nan() {
            self.worst = if v.is_nan() { S::infinity() } else { v };
            self.at = Some(at);
        }
    }
}

/// Evaluates every applicable law over the grid `{0, step, …, 1}³`.
///
/// Residuation-derived laws are reported as not applicable for the drastic
/// t-norm. Involution, contraposition and max-definability are evaluated for
/// the IMTL kinds.
pub fn verify_laws<S: Scalar>(
    triplet: &ResidualTriplet<S>,
    grid_step: S,
    tol: &Tolerances<S>,
) -> Result<LawReport<S>> {
    if !(grid_step > S::zero() && grid_step <= S::lit(0.1)) {
        return Err(Error::InvalidParameter(format!(
            "grid step {grid_step} must lie in (0, 0.1]"
        )));
    }
    let eps = tol.law;
    let grid = unit_grid(grid_step);
    let residuated = triplet.kind().is_left_continuous();
    let imtl = triplet.is_imtl();
    let zero = S::zero();
    let one = S::one();

    let mut a = Acc::new();
    let mut b = Acc::new();
    let mut c = Acc::new();
    let mut d = Acc::new();
    let mut e = Acc::new();
    let mut f = Acc::new();
    let mut g = Acc::new();
    let mut h = Acc::new();
    let mut res = Acc::new();
    let mut inv = Acc::new();
    let mut contra = Acc::new();
    let mut maxdef = Acc::new();

    let (t, i, n) = (
        |x, y| triplet.t(x, y),
        |x, y| triplet.i(x, y),
        |x| triplet.n(x),
    );

    for &x in &grid {
        if imtl {
            inv.push((n(n(x)) - x).abs(), [x, zero, zero]);
        }
        for &y in &grid {
            let txy = t(x, y);
            let ixy = i(x, y);
            a.push((txy - x).max(txy - y).max(zero), [x, y, zero]);
            b.push((y - ixy).max(zero), [x, y, zero]);
            if residuated {
                c.push((t(x, ixy) - y).max(zero), [x, y, zero]);
                let ord = if x <= y {
                    (one - ixy).abs()
                } else if ixy >= one - eps {
                    one
                } else {
                    zero
                };
                d.push(ord, [x, y, zero]);
                g.push((t(x, n(y)) - n(ixy)).max(zero), [x, y, zero]);
                h.push((n(txy) - i(x, n(y))).abs(), [x, y, zero]);
            }
            if imtl {
                contra.push((i(n(x), n(y)) - i(y, x)).abs(), [x, y, zero]);
                let m = x.max(y);
                let v1 = (m - i(ixy, y)).abs();
                let v2 = (m - i(i(y, x), x)).abs();
                maxdef.push(v1.max(v2), [x, y, zero]);
            }
            if !residuated {
                continue;
            }
            for &z in &grid {
                let iyz = i(y, z);
                e.push((t(x, iyz) - i(ixy, z)).max(zero), [x, y, z]);
                f.push((i(txy, z) - i(x, iyz)).abs(), [x, y, z]);
                // graded residuation: each side, when it holds, bounds the other
                let mut r = zero;
                if txy <= z + eps {
                    r = r.max(x - iyz);
                }
                if x <= iyz + eps {
                    r = r.max(txy - z);
                }
                res.push(r, [x, y, z]);
            }
        }
    }

    let mk = |law, acc: Acc<S>, applicable: bool| LawCheck {
        law,
        max_violation: applicable.then_some(acc.worst),
        witness: if applicable { acc.at } else { None },
    };
    let checks = vec![
        mk(Law::TNormBelowArguments, a, true),
        mk(Law::ImplicatorAboveConsequent, b, true),
        mk(Law::ModusPonens, c, residuated),
        mk(Law::Ordering, d, residuated),
        mk(Law::TNormOfImplication, e, residuated),
        mk(Law::Exportation, f, residuated),
        mk(Law::NegatedImplication, g, residuated),
        mk(Law::NegatedConjunction, h, residuated),
        mk(Law::Residuation, res, residuated),
        mk(Law::Involution, inv, imtl),
        mk(Law::Contraposition, contra, imtl),
        mk(Law::MaxDefinability, maxdef, imtl),
    ];
    Ok(LawReport {
        kind: triplet.kind(),
        isomorphism: triplet.isomorphism().name().to_owned(),
        grid_step,
        tolerance: eps,
        checks,
    })
}
