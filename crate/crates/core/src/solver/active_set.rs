//! Dual active-set method (Goldfarb–Idnani) for projections onto a polytope
//!
//! ```text
//! minimize  ½ ‖x − t‖²
//! s.t.      n_kᵀ x ≥ b_k
//! ```
//!
//! Constraint normals are sparse with at most two entries. With an identity
//! Hessian the factor `J` starts as the identity and is kept orthogonal;
//! `R` is the upper triangular factor of `Jᵀ N_active`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy)]
pub(crate) struct SparseConstraint<S> {
    pub idx: [usize; 2],
    pub coef: [S; 2],
    pub len: usize,
    pub rhs: S,
}

impl<S: Scalar> SparseConstraint<S> {
    pub fn single(i: usize, c: S, rhs: S) -> Self {
        SparseConstraint {
            idx: [i, 0],
            coef: [c, S::zero()],
            len: 1,
            rhs,
        }
    }

    pub fn pair(i: usize, j: usize, c: S, rhs: S) -> Self {
        SparseConstraint {
            idx: [i, j],
            coef: [c, c],
            len: 2,
            rhs,
        }
    }

    fn terms(&self) -> impl Iterator<Item = (usize, S)> + '_ {
        self.idx[..self.len]
            .iter()
            .copied()
            .zip(self.coef[..self.len].iter().copied())
    }

    fn dot(&self, x: &[S]) -> S {
        self.terms().map(|(i, c)| c * x[i]).sum()
    }

    fn norm(&self) -> S {
        self.terms().map(|(_, c)| c * c).sum::<S>().sqrt()
    }

    fn slack(&self, x: &[S]) -> S {
        self.dot(x) - self.rhs
    }
}

#[derive(Debug, Clone)]
pub(crate) struct QpSolution<S> {
    pub x: Vec<S>,
    /// Multiplier per constraint (zero for inactive ones).
    pub multipliers: Vec<S>,
    pub iterations: usize,
}

/// KKT residual components of a candidate solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KktResidual<S> {
    pub stationarity: S,
    pub primal: S,
    pub dual: S,
    pub complementarity: S,
}

impl<S: Scalar> KktResidual<S> {
    pub fn max(&self) -> S {
        self.stationarity
            .max(self.primal)
            .max(self.dual)
            .max(self.complementarity)
    }
}

pub(crate) fn kkt_residual<S: Scalar>(
    target: &[S],
    cons: &[SparseConstraint<S>],
    sol: &QpSolution<S>,
) -> KktResidual<S> {
    let mut grad: Vec<S> = sol.x.iter().zip(target).map(|(&x, &t)| x - t).collect();
    let mut primal = S::zero();
    let mut dual = S::zero();
    let mut comp = S::zero();
    for (c, &u) in cons.iter().zip(&sol.multipliers) {
        for (i, a) in c.terms() {
            grad[i] = grad[i] - a * u;
        }
        let s = c.slack(&sol.x);
        primal = primal.max(-s);
        dual = dual.max(-u);
        comp = comp.max((u * s).abs());
    }
    KktResidual {
        stationarity: grad.iter().fold(S::zero(), |m, g| m.max(g.abs())),
        primal,
        dual,
        complementarity: comp,
    }
}

struct State<S> {
    n: usize,
    /// `J` stored row-major.
    j: Vec<Vec<S>>,
    /// Upper triangular `R`, only the leading `q × q` block is meaningful.
    r: Vec<Vec<S>>,
    active: Vec<usize>,
    u: Vec<S>,
}

impl<S: Scalar> State<S> {
    fn q(&self) -> usize {
        self.active.len()
    }

    /// `d = Jᵀ n_p`.
    fn d(&self, c: &SparseConstraint<S>) -> Vec<S> {
        let mut d = vec![S::zero(); self.n];
        for (i, a) in c.terms() {
            for (dk, &jk) in d.iter_mut().zip(&self.j[i]) {
                *dk = *dk + a * jk;
            }
        }
        d
    }

    /// Primal step direction `z = J₂ d₂`.
    fn z(&self, d: &[S]) -> Vec<S> {
        let q = self.q();
        self.j
            .iter()
            .map(|row| (q..self.n).map(|k| row[k] * d[k]).sum())
            .collect()
    }

    /// Dual step direction `r = R⁻¹ d₁`.
    fn r_dir(&self, d: &[S]) -> Vec<S> {
        let q = self.q();
        let mut out = vec![S::zero(); q];
        for i in (0..q).rev() {
            let mut s = d[i];
            for k in (i + 1)..q {
                s = s - self.r[i][k] * out[k];
            }
            out[i] = s / self.r[i][i];
        }
        out
    }

    fn rotate_j(&mut self, a: usize, b: usize, c: S, s: S) {
        for row in self.j.iter_mut() {
            let (x, y) = (row[a], row[b]);
            row[a] = c * x + s * y;
            row[b] = -s * x + c * y;
        }
    }

    fn add(&mut self, p: usize, mut d: Vec<S>, up: S) {
        let q = self.q();
        for i in ((q + 1)..self.n).rev() {
            let (a, b) = (d[i - 1], d[i]);
            if b == S::zero() {
                continue;
            }
            let h = a.hypot(b);
            let (c, s) = (a / h, b / h);
            d[i - 1] = h;
            d[i] = S::zero();
            self.rotate_j(i - 1, i, c, s);
        }
        for i in 0..=q {
            self.r[i][q] = d[i];
        }
        self.active.push(p);
        self.u.push(up);
    }

    fn drop(&mut self, l: usize) {
        let q = self.q();
        for row in self.r.iter_mut().take(q) {
            row.remove(l);
            row.push(S::zero());
        }
        self.active.remove(l);
        self.u.remove(l);
        for k in l..(q - 1) {
            let (a, b) = (self.r[k][k], self.r[k + 1][k]);
            if b == S::zero() {
                continue;
            }
            let h = a.hypot(b);
            let (c, s) = (a / h, b / h);
            for col in k..(q - 1) {
                let (x, y) = (self.r[k][col], self.r[k + 1][col]);
                self.r[k][col] = c * x + s * y;
                self.r[k + 1][col] = -s * x + c * y;
            }
            self.r[k + 1][k] = S::zero();
            self.rotate_j(k, k + 1, c, s);
        }
        for row in self.r.iter_mut() {
            row[q - 1] = S::zero();
        }
    }
}

/// Solves the projection problem starting from the unconstrained optimum `x = t`.
pub(crate) fn project<S: Scalar>(
    target: &[S],
    cons: &[SparseConstraint<S>],
) -> Result<QpSolution<S>> {
    let n = target.len();
    let tol = S::epsilon() * S::lit(1e3);
    let mut st = State {
        n,
        j: (0..n)
            .map(|i| {
                let mut row = vec![S::zero(); n];
                row[i] = S::one();
                row
            })
            .collect(),
        r: vec![vec![S::zero(); n]; n],
        active: Vec::new(),
        u: Vec::new(),
    };
    let mut x = target.to_vec();
    let max_iter = 20 * (cons.len() + n) + 100;
    let mut iterations = 0usize;

    loop {
        // Step 1: most violated constraint, scaled by its norm.
        let mut pick: Option<(usize, S)> = None;
        for (k, c) in cons.iter().enumerate() {
            if st.active.contains(&k) {
                continue;
            }
            let s = c.slack(&x) / c.norm();
            if s < -tol && pick.map_or(true, |(_, best)| s < best) {
                pick = Some((k, s));
            }
        }
        let Some((p, _)) = pick else { break };
        let cp = &cons[p];
        let mut up = S::zero();

        // Step 2: move towards feasibility of p, dropping blocking constraints.
        loop {
            iterations += 1;
            if iterations > max_iter {
                return Err(Error::Solver(format!(
                    "active-set method did not converge within {max_iter} iterations"
                )));
            }
            let d = st.d(cp);
            let z = st.z(&d);
            let r = st.r_dir(&d);

            let mut t1: Option<(usize, S)> = None;
            for (k, (&rk, &uk)) in r.iter().zip(&st.u).enumerate() {
                if rk > tol {
                    let ratio = uk / rk;
                    if t1.map_or(true, |(_, best)| ratio < best) {
                        t1 = Some((k, ratio));
                    }
                }
            }
            let zn: S = cp.terms().map(|(i, a)| a * z[i]).sum();
            let t2 = if z.iter().any(|v| v.abs() > tol) && zn > tol {
                Some(-cp.slack(&x) / zn)
            } else {
                None
            };

            match (t1, t2) {
                (None, None) => {
                    return Err(Error::Infeasible(
                        "quadratic program constraints are inconsistent".into(),
                    ));
                }
                (Some((l, t)), None) => {
                    for (uk, &rk) in st.u.iter_mut().zip(&r) {
                        *uk = *uk - t * rk;
                    }
                    up = up + t;
                    st.drop(l);
                }
                (t1, Some(t2v)) => {
                    let (t, block) = match t1 {
                        Some((l, t1v)) if t1v < t2v => (t1v, Some(l)),
                        _ => (t2v, None),
                    };
                    for (xi, &zi) in x.iter_mut().zip(&z) {
                        *xi = *xi + t * zi;
                    }
                    for (uk, &rk) in st.u.iter_mut().zip(&r) {
                        *uk = *uk - t * rk;
                    }
                    up = up + t;
                    match block {
                        None => {
                            st.add(p, d, up);
                            break;
                        }
                        Some(l) => st.drop(l),
                    }
                }
            }
        }
    }

    let mut multipliers = vec![S::zero(); cons.len()];
    for (&k, &uk) in st.active.iter().zip(&st.u) {
        multipliers[k] = uk.max(S::zero());
    }
    Ok(QpSolution {
        x,
        multipliers,
        iterations,
    })
}
