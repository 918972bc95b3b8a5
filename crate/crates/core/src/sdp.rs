//! Dense primal-dual interior-point solver for equality-constrained
//! semidefinite programs over complex Hermitian matrices:
//!
//! ```text
//!   minimize    Tr(C X)
//!   subject to  Tr(A_i X) = b_i,   i = 1..m
//!               X ⪰ 0
//! ```
//!
//! The complex problem is embedded in real symmetric matrices of twice the
//! size via `Z -> [Re Z, -Im Z; Im Z, Re Z]`. Under that map traces double,
//! so the real data are halved and objective values carry over unchanged.
//! Iterations follow the HKM search direction with a Mehrotra
//! predictor-corrector; the step to the boundary of the PSD cone is computed
//! exactly from an eigenvalue problem and damped by 0.99.

use std::fmt::Write as _;

use nalgebra::{Cholesky, DVector, Dyn};

use crate::error::{Error, Result};
use crate::linalg::{complexify, ensure_square, hermitian_asymmetry, realify, CMat, RMat};

pub const DEFAULT_TOL: f64 = 1e-7;
pub const DEFAULT_MAX_ITER: usize = 100;
const STEP_DAMPING: f64 = 0.99;
const DIVERGENCE: f64 = 1e12;

#[derive(Debug, Clone, PartialEq)]
pub struct SdpProblem {
    pub objective: CMat,
    pub constraints: Vec<(CMat, f64)>,
}

impl SdpProblem {
    pub fn dim(&self) -> usize {
        self.objective.nrows()
    }

    pub fn validate(&self) -> Result<()> {
        let n = ensure_square(&self.objective, "objective")?;
        if n == 0 {
            return Err(Error::InvalidParameter("empty SDP".into()));
        }
        if self.constraints.is_empty() {
            return Err(Error::InvalidParameter("SDP needs at least one constraint".into()));
        }
        let asym = hermitian_asymmetry(&self.objective);
        if asym > 1e-12 * (1.0 + self.objective.norm()) {
            return Err(Error::NonHermitian(asym));
        }
        for (a, b) in &self.constraints {
            if a.shape() != (n, n) {
                return Err(Error::DimensionMismatch(format!(
                    "constraint matrix is {}x{}, objective is {n}x{n}",
                    a.nrows(),
                    a.ncols()
                )));
            }
            let asym = hermitian_asymmetry(a);
            if asym > 1e-12 * (1.0 + a.norm()) {
                return Err(Error::NonHermitian(asym));
            }
            if !b.is_finite() {
                return Err(Error::InvalidParameter("non-finite right-hand side".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdpStatus {
    Optimal,
    MaxIter,
    Infeasible,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub iter: usize,
    pub primal: f64,
    pub dual: f64,
    pub rel_gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub mu: f64,
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub x_matrix: CMat,
    /// Dual multipliers, one per constraint.
    pub y: Vec<f64>,
    pub primal_value: f64,
    pub dual_value: f64,
    pub iterations: usize,
    pub status: SdpStatus,
    pub trace: Vec<IterationRecord>,
}

impl SdpSolution {
    /// Per-iteration convergence log as CSV.
    pub fn trace_csv(&self) -> String {
        let mut s = String::from("iter,primal,dual,rel_gap,primal_residual,dual_residual,mu\n");
        for r in &self.trace {
            let _ = writeln!(
                s,
                "{},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}",
                r.iter, r.primal, r.dual, r.rel_gap, r.primal_residual, r.dual_residual, r.mu
            );
        }
        s
    }
}

/// Real symmetric data of the embedded problem.
struct RealSdp {
    c: RMat,
    a: Vec<RMat>,
    b: DVector<f64>,
}

impl RealSdp {
    fn from_complex(p: &SdpProblem) -> Self {
        RealSdp {
            c: realify(&p.objective) * 0.5,
            a: p.constraints.iter().map(|(a, _)| realify(a) * 0.5).collect(),
            b: DVector::from_iterator(p.constraints.len(), p.constraints.iter().map(|(_, b)| *b)),
        }
    }

    fn op(&self, x: &RMat) -> DVector<f64> {
        DVector::from_iterator(self.a.len(), self.a.iter().map(|a| a.dot(x)))
    }

    fn adjoint(&self, y: &DVector<f64>) -> RMat {
        let n = self.c.nrows();
        let mut out = RMat::zeros(n, n);
        for (a, yi) in self.a.iter().zip(y.iter()) {
            out += a * *yi;
        }
        out
    }
}

fn sym(m: &RMat) -> RMat {
    (m + m.transpose()) * 0.5
}

/// Largest `alpha` with `x + alpha * dx ⪰ 0`, given the Cholesky factor of `x`.
fn max_step(chol: &Cholesky<f64, Dyn>, dx: &RMat) -> f64 {
    let l = chol.l();
    let Some(w) = l.solve_lower_triangular(dx) else {
        return 0.0;
    };
    let Some(z) = l.solve_lower_triangular(&w.transpose()) else {
        return 0.0;
    };
    let lmin = sym(&z).symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min);
    if lmin >= 0.0 {
        f64::INFINITY
    } else {
        -1.0 / lmin
    }
}

struct Direction {
    dx: RMat,
    dy: DVector<f64>,
    ds: RMat,
}

pub fn solve(problem: &SdpProblem, tol: f64, max_iter: usize) -> Result<SdpSolution> {
    problem.validate()?;
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance {tol} must be positive")));
    }
    let data = RealSdp::from_complex(problem);
    let n = data.c.nrows();
    let m = data.a.len();
    let nf = n as f64;

    let norm_c = data.c.norm();
    let norm_b = data.b.norm();
    let a_norms: Vec<f64> = data.a.iter().map(|a| a.norm()).collect();

    // Starting point scaled from the data (SDPT3-style).
    let xi = a_norms
        .iter()
        .zip(data.b.iter())
        .map(|(na, b)| nf * (1.0 + b.abs()) / (1.0 + na))
        .fold(10f64.max(nf.sqrt()), f64::max);
    let eta = a_norms.iter().cloned().fold(10f64.max(nf.sqrt()).max(norm_c), f64::max);
    let mut x = RMat::identity(n, n) * xi;
    let mut s = RMat::identity(n, n) * eta;
    let mut y = DVector::<f64>::zeros(m);

    let mut trace = Vec::new();
    let mut best: Option<(f64, RMat, DVector<f64>)> = None;
    let mut status = SdpStatus::MaxIter;
    let mut iterations = 0;

    for iter in 0..=max_iter {
        let rp = &data.b - data.op(&x);
        let rd = &data.c - &s - data.adjoint(&y);
        let pobj = data.c.dot(&x);
        let dobj = data.b.dot(&y);
        let mu = x.dot(&s) / nf;
        let rel_gap = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());
        let pinf = rp.norm() / (1.0 + norm_b);
        let dinf = rd.norm() / (1.0 + norm_c);
        trace.push(IterationRecord {
            iter,
            primal: pobj,
            dual: dobj,
            rel_gap,
            primal_residual: pinf,
            dual_residual: dinf,
            mu,
        });
        iterations = iter;
        let merit = rel_gap.max(pinf).max(dinf);
        if best.as_ref().map_or(true, |(b, _, _)| merit < *b) {
            best = Some((merit, x.clone(), y.clone()));
        }
        if rel_gap < tol && pinf < tol && dinf < tol {
            status = SdpStatus::Optimal;
            break;
        }
        if !merit.is_finite() || x.norm() > DIVERGENCE * (1.0 + xi) || s.norm() > DIVERGENCE * (1.0 + eta) {
            status = SdpStatus::Infeasible;
            break;
        }
        if iter == max_iter {
            break;
        }

        let (Some(chol_x), Some(chol_s)) = (x.clone().cholesky(), s.clone().cholesky()) else {
            // lost definiteness to rounding; keep the best iterate
            break;
        };
        let s_inv = sym(&chol_s.inverse());

        // Schur complement M_ij = Tr(A_i X A_j S^-1).
        let g: Vec<RMat> = data.a.iter().map(|a| &x * a * &s_inv).collect();
        let mut schur = RMat::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                schur[(i, j)] = data.a[i].dot(&g[j].transpose());
            }
        }
        let schur = sym(&schur);
        let Some(schur_chol) = schur.clone().cholesky() else {
            return Err(Error::Infeasible("constraint matrices are linearly dependent".into()));
        };

        let x_rd_sinv = &x * &rd * &s_inv;
        let a_sinv = data.op(&s_inv);
        let a_x_rd_sinv = data.op(&x_rd_sinv);

        let direction = |sigma_mu: f64, corr: Option<&RMat>| -> Direction {
            let mut rhs = &data.b - &a_sinv * sigma_mu + &a_x_rd_sinv;
            if let Some(c) = corr {
                rhs += data.op(c);
            }
            let dy = schur_chol.solve(&rhs);
            let ds = &rd - data.adjoint(&dy);
            let mut dx = &s_inv * sigma_mu - &x - &x * &ds * &s_inv;
            if let Some(c) = corr {
                dx -= c;
            }
            Direction { dx: sym(&dx), dy, ds }
        };
        let steps = |d: &Direction| -> (f64, f64) {
            let ap = (STEP_DAMPING * max_step(&chol_x, &d.dx)).min(1.0);
            let ad = (STEP_DAMPING * max_step(&chol_s, &d.ds)).min(1.0);
            (ap, ad)
        };

        // predictor
        let pred = direction(0.0, None);
        let (ap, ad) = steps(&pred);
        let mu_aff = (&x + &pred.dx * ap).dot(&(&s + &pred.ds * ad)) / nf;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

        // corrector with the second-order term
        let corr_term = &pred.dx * &pred.ds * &s_inv;
        let dir = direction(sigma * mu, Some(&corr_term));
        let (ap, ad) = steps(&dir);

        x += &dir.dx * ap;
        x = sym(&x);
        y += &dir.dy * ad;
        s += &dir.ds * ad;
        s = sym(&s);
    }

    if status != SdpStatus::Optimal {
        if let Some((_, bx, by)) = best {
            x = bx;
            y = by;
        }
    }
    let x_matrix = complexify(&x);
    let primal_value = problem.objective.iter().zip(x_matrix.iter()).map(|(c, z)| (c.conj() * z).re).sum();
    let dual_value = data.b.dot(&y);
    Ok(SdpSolution {
        x_matrix,
        y: y.iter().cloned().collect(),
        primal_value,
        dual_value,
        iterations,
        status,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eigen_desc, C64};

    fn herm(n: usize, salt: f64) -> CMat {
        let a = CMat::from_fn(n, n, |i, j| {
            C64::new(((i * 3 + j) as f64 + salt).sin(), ((i + 5 * j) as f64 * 0.3 + salt).cos())
        });
        (&a + a.adjoint()) * C64::new(0.5, 0.0)
    }

    fn trace_constraint(n: usize, rhs: f64) -> (CMat, f64) {
        (CMat::identity(n, n), rhs)
    }

    #[test]
    fn min_eigenvalue_of_complex_objective() {
        let c = herm(6, 0.4);
        let p = SdpProblem {
            objective: c.clone(),
            constraints: vec![trace_constraint(6, 1.0)],
        };
        let sol = solve(&p, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert_eq!(sol.status, SdpStatus::Optimal);
        let (vals, vecs) = hermitian_eigen_desc(&c);
        let lmin = *vals.last().unwrap();
        assert!((sol.primal_value - lmin).abs() < 1e-6, "{} vs {}", sol.primal_value, lmin);
        assert!((sol.dual_value - lmin).abs() < 1e-6);
        // the complex optimum is the projector onto the bottom eigenvector
        let u = vecs.column(5);
        let proj = &u * u.adjoint();
        assert!((&sol.x_matrix - proj).norm() < 1e-3);
    }

    #[test]
    fn scalar_problem() {
        let p = SdpProblem {
            objective: CMat::from_element(1, 1, C64::new(3.0, 0.0)),
            constraints: vec![(CMat::from_element(1, 1, C64::new(1.0, 0.0)), 2.0)],
        };
        let sol = solve(&p, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert_eq!(sol.status, SdpStatus::Optimal);
        assert!((sol.primal_value - 6.0).abs() < 1e-6);
    }

    #[test]
    fn identity_objective_equals_trace() {
        let p = SdpProblem {
            objective: CMat::identity(5, 5),
            constraints: vec![trace_constraint(5, 3.0)],
        };
        let sol = solve(&p, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert!((sol.primal_value - 3.0).abs() < 1e-6);
    }

    #[test]
    fn solution_properties_with_two_constraints() {
        let n = 7;
        let c = herm(n, 1.3);
        let mut a1 = CMat::identity(n, n);
        a1[(n - 1, n - 1)] = C64::new(0.0, 0.0);
        let mut a2 = CMat::zeros(n, n);
        a2[(n - 1, n - 1)] = C64::new(1.0, 0.0);
        let tol = 1e-8;
        let p = SdpProblem {
            objective: c,
            constraints: vec![(a1.clone(), 2.0), (a2.clone(), 1.0)],
        };
        let sol = solve(&p, tol, DEFAULT_MAX_ITER).unwrap();
        assert_eq!(sol.status, SdpStatus::Optimal);
        assert!(sol.primal_value >= sol.dual_value - 1e-6);
        assert!(sol.dual_value <= sol.primal_value + 1e-8);
        for (a, b) in &p.constraints {
            assert!(((a * &sol.x_matrix).trace().re - b).abs() < 10.0 * tol);
        }
        let (vals, _) = hermitian_eigen_desc(&sol.x_matrix);
        assert!(*vals.last().unwrap() >= -1e-8);
        let csv = sol.trace_csv();
        assert_eq!(csv.lines().count(), sol.trace.len() + 1);
    }

    #[test]
    fn value_invariant_under_unitary_congruence() {
        let n = 5;
        let c = herm(n, 2.2);
        let a1 = herm(n, 0.1) * C64::new(0.1, 0.0) + CMat::identity(n, n);
        let base = SdpProblem {
            objective: c.clone(),
            constraints: vec![(a1.clone(), 1.5)],
        };
        // unitary from the eigenvectors of an unrelated Hermitian matrix
        let (_, u) = hermitian_eigen_desc(&herm(n, 7.7));
        let rot = |m: &CMat| u.adjoint() * m * &u;
        let rotated = SdpProblem {
            objective: rot(&c),
            constraints: vec![(rot(&a1), 1.5)],
        };
        let tol = 1e-8;
        let s1 = solve(&base, tol, DEFAULT_MAX_ITER).unwrap();
        let s2 = solve(&rotated, tol, DEFAULT_MAX_ITER).unwrap();
        assert!((s1.primal_value - s2.primal_value).abs() < 10.0 * tol * (1.0 + s1.primal_value.abs()));
    }

    #[test]
    fn rejects_malformed_problems() {
        let mut c = CMat::identity(2, 2);
        c[(0, 1)] = C64::new(1.0, 0.0);
        let p = SdpProblem {
            objective: c,
            constraints: vec![trace_constraint(2, 1.0)],
        };
        assert!(matches!(solve(&p, 1e-7, 10), Err(Error::NonHermitian(_))));
        let p = SdpProblem {
            objective: CMat::identity(2, 2),
            constraints: vec![trace_constraint(3, 1.0)],
        };
        assert!(matches!(solve(&p, 1e-7, 10), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn max_iter_returns_best_iterate() {
        let p = SdpProblem {
            objective: herm(6, 0.9),
            constraints: vec![trace_constraint(6, 1.0)],
        };
        let sol = solve(&p, 1e-12, 2).unwrap();
        assert_eq!(sol.status, SdpStatus::MaxIter);
        assert_eq!(sol.x_matrix.shape(), (6, 6));
    }

    #[test]
    fn infeasible_problem_is_flagged() {
        // Tr(X) = -1 has no PSD solution
        let p = SdpProblem {
            objective: CMat::identity(3, 3),
            constraints: vec![trace_constraint(3, -1.0)],
        };
        let sol = solve(&p, 1e-8, 200).unwrap();
        assert_ne!(sol.status, SdpStatus::Optimal);
    }
}
