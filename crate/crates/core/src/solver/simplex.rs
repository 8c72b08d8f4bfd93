//! Dense revised simplex for pairwise packing programs
//!
//! ```text
//! maximize  Σ c_u x_u
//! s.t.      x_u + x_v ≤ b_k      for every row k = (u, v)
//!           0 ≤ x_u ≤ ub_u
//! ```
//!
//! with `c, b, ub ≥ 0`. The primal is solved through its dual
//!
//! ```text
//! minimize  Σ b_k y_k + Σ ub_u z_u
//! s.t.      Σ_{k ∋ u} y_k + z_u − s_u = c_u,   y, z, s ≥ 0
//! ```
//!
//! which has the trivially feasible basis `{z_u}`. At dual optimality the
//! simplex multipliers are an optimal primal point.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub(crate) struct PackingLp<S> {
    pub weights: Vec<S>,
    pub upper: Vec<S>,
    pub rows: Vec<(usize, usize, S)>,
}

#[derive(Debug, Clone)]
pub(crate) struct LpSolution<S> {
    pub x: Vec<S>,
    pub iterations: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Column {
    Row(usize),
    Upper(usize),
    Surplus(usize),
}

const REFACTOR_EVERY: usize = 64;

impl<S: Scalar> PackingLp<S> {
    fn n(&self) -> usize {
        self.weights.len()
    }

    fn column_index(&self, col: Column) -> usize {
        let (m, n) = (self.rows.len(), self.n());
        match col {
            Column::Row(k) => k,
            Column::Upper(u) => m + u,
            Column::Surplus(u) => m + n + u,
        }
    }

    fn column(&self, j: usize) -> Column {
        let (m, n) = (self.rows.len(), self.n());
        if j < m {
            Column::Row(j)
        } else if j < m + n {
            Column::Upper(j - m)
        } else {
            Column::Surplus(j - m - n)
        }
    }

    fn cost(&self, col: Column) -> S {
        match col {
            Column::Row(k) => self.rows[k].2,
            Column::Upper(u) => self.upper[u],
            Column::Surplus(_) => S::zero(),
        }
    }

    /// Sparse entries of a dual column.
    fn entries(&self, col: Column) -> ([(usize, S); 2], usize) {
        let one = S::one();
        match col {
            Column::Row(k) => {
                let (u, v, _) = self.rows[k];
                ([(u, one), (v, one)], 2)
            }
            Column::Upper(u) => ([(u, one), (0, S::zero())], 1),
            Column::Surplus(u) => ([(u, -one), (0, S::zero())], 1),
        }
    }

    fn validate(&self) -> Result<()> {
        let n = self.n();
        if self.upper.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: self.upper.len(),
            });
        }
        let nonneg = |x: &S| x.is_finite() && *x >= S::zero();
        if !self.weights.iter().all(nonneg) || !self.upper.iter().all(nonneg) {
            return Err(Error::Solver(
                "weights and upper bounds must be finite and nonnegative".into(),
            ));
        }
        for &(u, v, b) in &self.rows {
            if u >= n || v >= n || u == v {
                return Err(Error::Solver(format!("malformed row ({u}, {v})")));
            }
            if !nonneg(&b) {
                return Err(Error::Infeasible(format!(
                    "row ({u}, {v}) has negative right-hand side {b}"
                )));
            }
        }
        Ok(())
    }

    pub fn solve(&self) -> Result<LpSolution<S>> {
        self.validate()?;
        let n = self.n();
        let m = self.rows.len();
        if n == 0 {
            return Ok(LpSolution {
                x: Vec::new(),
                iterations: 0,
            });
        }
        let total = m + 2 * n;
        let tol = S::epsilon() * S::lit(1e4);

        let mut basis: Vec<usize> = (0..n)
            .map(|u| self.column_index(Column::Upper(u)))
            .collect();
        let mut in_basis = vec![false; total];
        for &j in &basis {
            in_basis[j] = true;
        }
        let mut binv = identity::<S>(n);
        let mut xb = self.weights.clone();

        let max_iter = 50 * (total + n) + 1000;
        let mut stall = 0usize;
        let mut objective = self.dual_objective(&basis, &xb);
        for iter in 0..max_iter {
            if iter > 0 && iter % REFACTOR_EVERY == 0 {
                binv = self.refactor(&basis)?;
                xb = mat_vec(&binv, &self.weights);
                for x in xb.iter_mut() {
                    if *x < S::zero() {
                        *x = S::zero();
                    }
                }
            }
            let pi = self.multipliers(&basis, &binv);
            let bland = stall > n;

            let mut entering: Option<(usize, S)> = None;
            for j in 0..total {
                if in_basis[j] {
                    continue;
                }
                let col = self.column(j);
                let (entries, len) = self.entries(col);
                let mut rc = self.cost(col);
                for &(i, a) in &entries[..len] {
                    rc = rc - a * pi[i];
                }
                if rc < -tol {
                    let better = match entering {
                        None => true,
                        Some((_, best)) => !bland && rc < best,
                    };
                    if better {
                        entering = Some((j, rc));
                    }
                    if bland {
                        break;
                    }
                }
            }
            let Some((j, _)) = entering else {
                let x = pi
                    .iter()
                    .zip(&self.upper)
                    .map(|(&p, &ub)| p.max(S::zero()).min(ub))
                    .collect();
                return Ok(LpSolution {
                    x,
                    iterations: iter,
                });
            };

            let (entries, len) = self.entries(self.column(j));
            let mut w = vec![S::zero(); n];
            for (r, wr) in w.iter_mut().enumerate() {
                for &(i, a) in &entries[..len] {
                    *wr = *wr + binv[r][i] * a;
                }
            }

            let mut leave: Option<(usize, S)> = None;
            for r in 0..n {
                if w[r] > tol {
                    let ratio = xb[r].max(S::zero()) / w[r];
                    let replace = match leave {
                        None => true,
                        Some((best_r, best)) => {
                            ratio < best - tol
                                || ((ratio - best).abs() <= tol && basis[r] < basis[best_r])
                        }
                    };
                    if replace {
                        leave = Some((r, ratio));
                    }
                }
            }
            let Some((r, theta)) = leave else {
                return Err(Error::Infeasible(
                    "packing program has no feasible point".into(),
                ));
            };

            for i in 0..n {
                if i != r {
                    xb[i] = (xb[i] - theta * w[i]).max(S::zero());
                }
            }
            xb[r] = theta;
            let piv = w[r];
            let row_r: Vec<S> = binv[r].iter().map(|&x| x / piv).collect();
            for (i, row) in binv.iter_mut().enumerate() {
                if i == r {
                    continue;
                }
                let f = w[i];
                if f != S::zero() {
                    for (x, &y) in row.iter_mut().zip(&row_r) {
                        *x = *x - f * y;
                    }
                }
            }
            binv[r] = row_r;
            in_basis[basis[r]] = false;
            in_basis[j] = true;
            basis[r] = j;

            let next = self.dual_objective(&basis, &xb);
            if next < objective - tol {
                stall = 0;
            } else {
                stall += 1;
            }
            objective = next;
        }
        Err(Error::Solver(format!(
            "simplex did not converge within {max_iter} iterations"
        )))
    }

    fn dual_objective(&self, basis: &[usize], xb: &[S]) -> S {
        basis
            .iter()
            .zip(xb)
            .map(|(&j, &x)| self.cost(self.column(j)) * x)
            .sum()
    }

    fn multipliers(&self, basis: &[usize], binv: &[Vec<S>]) -> Vec<S> {
        let n = self.n();
        let mut pi = vec![S::zero(); n];
        for (r, &j) in basis.iter().enumerate() {
            let c = self.cost(self.column(j));
            if c != S::zero() {
                for (p, &b) in pi.iter_mut().zip(&binv[r]) {
                    *p = *p + c * b;
                }
            }
        }
        pi
    }

    /// Recomputes `B⁻¹` from scratch by Gauss-Jordan elimination with partial pivoting.
    fn refactor(&self, basis: &[usize]) -> Result<Vec<Vec<S>>> {
        let n = self.n();
        let mut a = vec![vec![S::zero(); n]; n];
        for (r, &j) in basis.iter().enumerate() {
            let (entries, len) = self.entries(self.column(j));
            for &(i, v) in &entries[..len] {
                a[i][r] = v;
            }
        }
        let mut inv = identity::<S>(n);
        for c in 0..n {
            let p = (c..n)
                .max_by(|&x, &y| a[x][c].abs().partial_cmp(&a[y][c].abs()).unwrap())
                .unwrap();
            if a[p][c].abs() <= S::epsilon() {
                return Err(Error::Solver("singular simplex basis".into()));
            }
            a.swap(c, p);
            inv.swap(c, p);
            let d = a[c][c];
            for k in 0..n {
                a[c][k] = a[c][k] / d;
                inv[c][k] = inv[c][k] / d;
            }
            for i in 0..n {
                if i != c && a[i][c] != S::zero() {
                    let f = a[i][c];
                    for k in 0..n {
                        a[i][k] = a[i][k] - f * a[c][k];
                        inv[i][k] = inv[i][k] - f * inv[c][k];
                    }
                }
            }
        }
        Ok(inv)
    }
}

fn identity<S: Scalar>(n: usize) -> Vec<Vec<S>> {
    (0..n)
        .map(|i| {
            let mut row = vec![S::zero(); n];
            row[i] = S::one();
            row
        })
        .collect()
}

fn mat_vec<S: Scalar>(a: &[Vec<S>], x: &[S]) -> Vec<S> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(&p, &q)| p * q).sum())
        .collect()
}
