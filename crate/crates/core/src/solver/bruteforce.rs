//! Exhaustive grid search, used as a reference on tiny universes.

use crate::connectives::ResidualTriplet;
use crate::error::{Error, Result};
use crate::granules::FuzzySet;
use crate::relations::RelationMatrix;
use crate::scalar::{unit_grid, Scalar};

use super::bounds::BoundMatrix;
use super::loss::Loss;
use super::{finish, ApproximationResult, Method, SolveOptions};

/// Upper limit on enumerated grid nodes.
pub const MAX_BRUTEFORCE_NODES: f64 = 2e8;

fn guard(n: usize, grid_len: usize, free: usize) -> Result<()> {
    let nodes = (grid_len as f64).powi(free as i32);
    if nodes > MAX_BRUTEFORCE_NODES {
        return Err(Error::SizeGuard {
            n,
            points: grid_len,
        });
    }
    Ok(())
}

/// Minimizes `Σ L(1, β_u)` over grid points satisfying `T(β_u, β_v) ≤ M(u, v) + tol`.
///
/// `tol` is `opts.tolerances.rel`, which absorbs rounding in `T` at grid points
/// lying exactly on a constraint. Since `L(1, ·)` is non-increasing, the last
/// coordinate is set to its largest feasible grid value instead of enumerated.
pub fn solve_bruteforce<S: Scalar>(
    bounds: &BoundMatrix<S>,
    triplet: &ResidualTriplet<S>,
    loss: &Loss<S>,
    grid_step: S,
    opts: &SolveOptions<S>,
) -> Result<ApproximationResult<S>> {
    triplet.require_residuated()?;
    if !(grid_step > S::zero() && grid_step <= S::one()) {
        return Err(Error::InvalidParameter(format!(
            "grid step {grid_step} must lie in (0, 1]"
        )));
    }
    let n = bounds.n();
    let grid = unit_grid(grid_step);
    guard(n, grid.len(), n.saturating_sub(1))?;
    let tol = opts.tolerances.rel;
    let costs: Vec<S> = grid.iter().map(|&g| loss.eval(S::one(), g)).collect();

    let mut search = Search {
        bounds,
        triplet,
        grid: &grid,
        costs: &costs,
        tol,
        current: vec![0usize; n],
        best: None,
    };
    if n > 0 {
        search.descend(0, S::zero());
    }
    let (idx, best) = search
        .best
        .ok_or_else(|| Error::Infeasible("no feasible grid point".into()))?;
    let beta: Vec<S> = idx.iter().map(|&k| grid[k]).collect();
    let iso = triplet.isomorphism();
    let alpha = beta.iter().map(|&b| iso.apply(b)).collect();
    finish(
        bounds,
        triplet,
        opts,
        alpha,
        best,
        best,
        None,
        0,
        Method::BruteForce,
    )
}

struct Search<'a, S> {
    bounds: &'a BoundMatrix<S>,
    triplet: &'a ResidualTriplet<S>,
    grid: &'a [S],
    costs: &'a [S],
    tol: S,
    current: Vec<usize>,
    best: Option<(Vec<usize>, S)>,
}

impl<S: Scalar> Search<'_, S> {
    fn fits(&self, i: usize, value: S) -> bool {
        (0..i).all(|j| {
            self.triplet.t(self.grid[self.current[j]], value) <= self.bounds.pair(j, i) + self.tol
        })
    }

    fn descend(&mut self, i: usize, partial: S) {
        let n = self.current.len();
        if let Some((_, b)) = &self.best {
            if partial >= *b {
                return;
            }
        }
        if i + 1 == n {
            // Feasible values form a down-set; take the largest.
            if !self.fits(i, self.grid[0]) {
                return;
            }
            let (mut lo, mut hi) = (0usize, self.grid.len());
            while hi - lo > 1 {
                let mid = (lo + hi) / 2;
                if self.fits(i, self.grid[mid]) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let total = partial + self.costs[lo];
            if self.best.as_ref().map_or(true, |(_, b)| total < *b) {
                self.current[i] = lo;
                self.best = Some((self.current.clone(), total));
            }
            return;
        }
        for k in 0..self.grid.len() {
            if !self.fits(i, self.grid[k]) {
                break;
            }
            self.current[i] = k;
            self.descend(i + 1, partial + self.costs[k]);
        }
    }
}

/// Grid solution of the general problem.
#[derive(Debug, Clone, PartialEq)]
pub struct GranularSolution<S> {
    pub estimate: FuzzySet<S>,
    pub loss: S,
}

/// Minimizes `Σ L(A(u), Â(u))` over grid sets `Â` that are granularly
/// representable: `T(R(v,u), Â(u)) ≤ Â(v) + tol` for all `u, v`.
pub fn bruteforce_granular<S: Scalar>(
    target: &FuzzySet<S>,
    rel: &RelationMatrix<S>,
    triplet: &ResidualTriplet<S>,
    loss: &Loss<S>,
    grid_step: S,
    tol: S,
) -> Result<GranularSolution<S>> {
    triplet.require_residuated()?;
    let n = rel.n();
    if target.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: target.len(),
        });
    }
    if !(grid_step > S::zero() && grid_step <= S::one()) {
        return Err(Error::InvalidParameter(format!(
            "grid step {grid_step} must lie in (0, 1]"
        )));
    }
    let grid = unit_grid(grid_step);
    guard(n, grid.len(), n)?;
    let costs: Vec<Vec<S>> = (0..n)
        .map(|u| grid.iter().map(|&g| loss.eval(target.get(u), g)).collect())
        .collect();

    struct Gr<'a, S> {
        rel: &'a RelationMatrix<S>,
        triplet: &'a ResidualTriplet<S>,
        grid: &'a [S],
        costs: &'a [Vec<S>],
        tol: S,
        current: Vec<usize>,
        best: Option<(Vec<usize>, S)>,
    }

    impl<S: Scalar> Gr<'_, S> {
        fn fits(&self, i: usize, value: S) -> bool {
            (0..i).all(|j| {
                let vj = self.grid[self.current[j]];
                self.triplet.t(self.rel.get(j, i), value) <= vj + self.tol
                    && self.triplet.t(self.rel.get(i, j), vj) <= value + self.tol
            })
        }

        fn descend(&mut self, i: usize, partial: S) {
            if let Some((_, b)) = &self.best {
                if partial >= *b {
                    return;
                }
            }
            if i == self.current.len() {
                self.best = Some((self.current.clone(), partial));
                return;
            }
            for k in 0..self.grid.len() {
                if self.fits(i, self.grid[k]) {
                    self.current[i] = k;
                    self.descend(i + 1, partial + self.costs[i][k]);
                }
            }
        }
    }

    let mut search = Gr {
        rel,
        triplet,
        grid: &grid,
        costs: &costs,
        tol,
        current: vec![0; n],
        best: None,
    };
    search.descend(0, S::zero());
    let (idx, best) = search
        .best
        .ok_or_else(|| Error::Infeasible("no representable grid point".into()))?;
    Ok(GranularSolution {
        estimate: FuzzySet::new(idx.iter().map(|&k| grid[k]).collect())?,
        loss: best,
    })
}
