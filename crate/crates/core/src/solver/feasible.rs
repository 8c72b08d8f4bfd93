use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::connectives::ResidualTriplet;
use crate::error::{Error, Result};
use crate::granules::FuzzySet;
use crate::scalar::Scalar;

use super::bounds::BoundMatrix;

/// Value assigned to the first instance of the ordering.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FeasibleStart<S> {
    One,
    Value(S),
    /// Uniform draw from `[0, 1]` with a fixed seed.
    Seeded(u64),
}

/// Greedy feasible point: `β_{u₁}` from `start`, then
/// `β_{uᵢ} = min_{j<i} I(β_{uⱼ}, M(uⱼ, uᵢ))`.
///
/// Residuation gives `T(β_{uⱼ}, β_{uᵢ}) ≤ M(uⱼ, uᵢ)` for every earlier `j`. The
/// pair minimum of `M` is used so that asymmetric bounds are covered in both
/// directions. A final pass nudges values down by one ulp where floating point
/// rounding would otherwise leave a positive residue.
pub fn feasible_solution<S: Scalar>(
    bounds: &BoundMatrix<S>,
    triplet: &ResidualTriplet<S>,
    ordering: &[usize],
    start: FeasibleStart<S>,
) -> Result<FuzzySet<S>> {
    triplet.require_residuated()?;
    let n = bounds.n();
    if ordering.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: ordering.len(),
        });
    }
    let mut seen = vec![false; n];
    for &u in ordering {
        if u >= n {
            return Err(Error::IndexOutOfRange { index: u, len: n });
        }
        if std::mem::replace(&mut seen[u], true) {
            return Err(Error::InvalidParameter(format!(
                "ordering repeats instance {u}"
            )));
        }
    }
    let first = match start {
        FeasibleStart::One => S::one(),
        FeasibleStart::Value(v) if v.is_degree() => v,
        FeasibleStart::Value(v) => {
            return Err(Error::Domain {
                what: "starting value",
                value: v.to_f64_lossy(),
            })
        }
        FeasibleStart::Seeded(seed) => S::lit(ChaCha8Rng::seed_from_u64(seed).gen::<f64>()),
    };

    let mut beta = vec![S::zero(); n];
    for (i, &ui) in ordering.iter().enumerate() {
        let mut value = if i == 0 { first } else { S::one() };
        for &uj in &ordering[..i] {
            value = value.min(triplet.i(beta[uj], bounds.pair(uj, ui)));
        }
        for &uj in &ordering[..i] {
            let m = bounds.pair(uj, ui);
            value = repair(triplet, beta[uj], value, m);
        }
        beta[ui] = value;
    }
    FuzzySet::new(beta)
}

/// Largest `y ≤ value` with `T(x, y) ≤ m`, assuming `value` is already within rounding of it.
fn repair<S: Scalar>(triplet: &ResidualTriplet<S>, x: S, value: S, m: S) -> S {
    let ok = |y: S| triplet.t(x, y) <= m;
    let mut y = value;
    for _ in 0..64 {
        if y <= S::zero() || ok(y) {
            return y.max(S::zero());
        }
        y = y.step_down();
    }
    let (mut lo, mut hi) = (S::zero(), y);
    if !ok(lo) {
        return lo;
    }
    for _ in 0..200 {
        let mid = (lo + hi) / S::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}
