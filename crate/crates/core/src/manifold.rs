//! Conjugate-gradient descent on the complex circle manifold
//! `{p in C^n : |p_i| = 1}`.
//!
//! Tangent vectors at `p` satisfy `Re(xi_i conj(p_i)) = 0`; the retraction
//! normalizes `p + xi` entry by entry, and vector transport is projection
//! onto the new tangent space.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::{kron, unvec, vec_of, CMat, CVec, C64};

const UNIT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct CirclePoint {
    entries: CVec,
}

impl CirclePoint {
    /// Fails unless every entry is unit-modulus within `1e-9`.
    pub fn new(entries: CVec) -> Result<Self> {
        if let Some(bad) = entries.iter().map(|z| (z.norm() - 1.0).abs()).find(|d| *d >= UNIT_TOL) {
            return Err(Error::InvalidParameter(format!(
                "point is off the complex circle by {bad:e}"
            )));
        }
        Ok(CirclePoint { entries })
    }

    pub fn from_phases(phases: &[f64]) -> Self {
        CirclePoint {
            entries: CVec::from_iterator(phases.len(), phases.iter().map(|&t| C64::from_polar(1.0, t))),
        }
    }

    /// Keeps only the phase of each entry; zeros map to `1`.
    pub fn from_phases_of(v: &CVec) -> Self {
        CirclePoint {
            entries: v.map(|z| if z.norm() > 0.0 { z / z.norm() } else { C64::new(1.0, 0.0) }),
        }
    }

    pub fn entries(&self) -> &CVec {
        &self.entries
    }

    pub fn into_entries(self) -> CVec {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    pub entries: CVec,
}

impl TangentVector {
    pub fn zeros(n: usize) -> Self {
        TangentVector { entries: CVec::zeros(n) }
    }

    /// Largest `|Re(xi_i conj(p_i))|`.
    pub fn normal_component(&self, base: &CirclePoint) -> f64 {
        self.entries
            .iter()
            .zip(base.entries.iter())
            .map(|(x, p)| (x * p.conj()).re.abs())
            .fold(0.0, f64::max)
    }

    pub fn norm(&self) -> f64 {
        self.entries.norm()
    }

    /// Real inner product `Re<a, b>`, the Riemannian metric.
    pub fn inner(&self, other: &TangentVector) -> f64 {
        self.entries.dotc(&other.entries).re
    }
}

/// Linear map `Q` of a quadratic objective.
#[derive(Debug, Clone, PartialEq)]
pub enum LinearMap {
    Dense(CMat),
    /// `p -> vec(unvec(p) F)` with `unvec(p)` having `rows` rows, which is
    /// `F^T kron I_rows` without forming the Kronecker product.
    RightFactor { factor: CMat, rows: usize },
}

impl LinearMap {
    pub fn nrows(&self) -> usize {
        match self {
            LinearMap::Dense(q) => q.nrows(),
            LinearMap::RightFactor { factor, rows } => rows * factor.ncols(),
        }
    }

    pub fn ncols(&self) -> usize {
        match self {
            LinearMap::Dense(q) => q.ncols(),
            LinearMap::RightFactor { factor, rows } => rows * factor.nrows(),
        }
    }

    pub fn apply(&self, p: &CVec) -> CVec {
        match self {
            LinearMap::Dense(q) => q * p,
            LinearMap::RightFactor { factor, rows } => {
                let m = unvec(p, *rows, factor.nrows()) * factor;
                vec_of(&m)
            }
        }
    }

    pub fn apply_adjoint(&self, r: &CVec) -> CVec {
        match self {
            LinearMap::Dense(q) => q.ad_mul(r),
            LinearMap::RightFactor { factor, rows } => {
                let m = unvec(r, *rows, factor.ncols()) * factor.adjoint();
                vec_of(&m)
            }
        }
    }

    pub fn to_matrix(&self) -> CMat {
        match self {
            LinearMap::Dense(q) => q.clone(),
            LinearMap::RightFactor { factor, rows } => kron(&factor.transpose(), &CMat::identity(*rows, *rows)),
        }
    }
}

/// `f(p) = ||Q p||^2 - 2 Re<Q p, b> + c`.
///
/// Built from two targets with weight `rho` this equals
/// `rho ||Q p - b_1||^2 + (1 - rho) ||Q p - b_2||^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticObjective {
    pub map: LinearMap,
    pub target: CVec,
    pub constant: f64,
}

impl QuadraticObjective {
    pub fn new(map: LinearMap, target: CVec, constant: f64) -> Result<Self> {
        if map.nrows() != target.len() {
            return Err(Error::DimensionMismatch(format!(
                "Q has {} rows but target has length {}",
                map.nrows(),
                target.len()
            )));
        }
        Ok(QuadraticObjective { map, target, constant })
    }

    pub fn weighted(map: LinearMap, b_opt: &CVec, b_rad: &CVec, rho: f64) -> Result<Self> {
        if b_opt.len() != b_rad.len() {
            return Err(Error::DimensionMismatch("targets differ in length".into()));
        }
        let target = b_opt * C64::new(rho, 0.0) + b_rad * C64::new(1.0 - rho, 0.0);
        let constant = rho * b_opt.norm_squared() + (1.0 - rho) * b_rad.norm_squared();
        Self::new(map, target, constant)
    }

    pub fn q_matrix(&self) -> CMat {
        self.map.to_matrix()
    }

    pub fn dim(&self) -> usize {
        self.map.ncols()
    }

    fn check(&self, p: &CVec) -> Result<()> {
        if p.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "point has length {}, objective expects {}",
                p.len(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// Evaluates at any ambient vector, not only points on the manifold.
    pub fn value_at(&self, p: &CVec) -> f64 {
        let qp = self.map.apply(p);
        qp.norm_squared() - 2.0 * self.target.dotc(&qp).re + self.constant
    }

    pub fn value(&self, p: &CirclePoint) -> f64 {
        self.value_at(&p.entries)
    }

    fn gradient_at(&self, p: &CVec) -> CVec {
        let residual = self.map.apply(p) - &self.target;
        self.map.apply_adjoint(&residual) * C64::new(2.0, 0.0)
    }
}

/// `2 Q^H (Q p - b)`; the descent direction is its negative.
pub fn euclidean_gradient(objective: &QuadraticObjective, p: &CirclePoint) -> Result<CVec> {
    objective.check(&p.entries)?;
    Ok(objective.gradient_at(&p.entries))
}

pub fn project_tangent(base: &CirclePoint, ambient: &CVec) -> TangentVector {
    let entries = CVec::from_iterator(
        ambient.len(),
        ambient
            .iter()
            .zip(base.entries.iter())
            .map(|(z, p)| z - p * (z * p.conj()).re),
    );
    TangentVector { entries }
}

pub fn retract(base: &CirclePoint, step: &TangentVector) -> Result<CirclePoint> {
    let mut entries = &base.entries + &step.entries;
    for (i, z) in entries.iter_mut().enumerate() {
        let r = z.norm();
        if r < 1e-14 {
            return Err(Error::DegenerateRetraction(i));
        }
        *z /= r;
    }
    Ok(CirclePoint { entries })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgOptions {
    /// Stop once the Riemannian gradient norm drops below this.
    pub tol: f64,
    pub max_iter: usize,
    /// Armijo sufficient-decrease constant.
    pub armijo: f64,
    pub shrink: f64,
    /// Largest per-entry displacement of the first trial step.
    pub max_initial_step: f64,
}

impl Default for CgOptions {
    fn default() -> Self {
        CgOptions {
            tol: 1e-6,
            max_iter: 500,
            armijo: 1e-4,
            shrink: 0.5,
            max_initial_step: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgRecord {
    pub iter: usize,
    pub objective: f64,
    pub grad_norm: f64,
    /// Accepted step length; zero on the initial record.
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CgResult {
    pub point: CirclePoint,
    pub objective: f64,
    pub iterations: usize,
    pub grad_norm: f64,
    /// False when `max_iter` ran out or the line search stalled.
    pub converged: bool,
    pub trace: Vec<CgRecord>,
}

impl CgResult {
    pub fn trace_csv(&self) -> String {
        let mut s = String::from("iter,objective,grad_norm,step\n");
        for r in &self.trace {
            let _ = writeln!(s, "{},{:.12e},{:.12e},{:.12e}", r.iter, r.objective, r.grad_norm, r.step);
        }
        s
    }
}

fn max_abs(v: &TangentVector) -> f64 {
    v.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Polak-Ribiere-plus conjugate gradient with Armijo backtracking.
///
/// The first trial step of each line search is a Barzilai-Borwein estimate
/// (twice the previous accepted step when the estimate is unusable), capped
/// so no entry moves by more than `max_initial_step`.
pub fn riemannian_cg(objective: &QuadraticObjective, start: &CirclePoint, options: &CgOptions) -> Result<CgResult> {
    objective.check(&start.entries)?;
    let n = start.len();
    let mut p = start.clone();
    let mut f = objective.value(&p);
    let mut grad = project_tangent(&p, &objective.gradient_at(&p.entries));
    let mut gnorm = grad.norm();
    let mut dir = TangentVector {
        entries: -&grad.entries,
    };
    let mut trace = vec![CgRecord {
        iter: 0,
        objective: f,
        grad_norm: gnorm,
        step: 0.0,
    }];
    let mut alpha_prev = 1.0;
    let mut bb: Option<f64> = None;
    let mut converged = gnorm < options.tol;
    let mut iterations = 0;
    let mut since_reset = 0;

    while !converged && iterations < options.max_iter {
        let mut slope = grad.inner(&dir);
        if slope >= 0.0 {
            dir = TangentVector {
                entries: -&grad.entries,
            };
            slope = -gnorm * gnorm;
            since_reset = 0;
        }
        let mut alpha = bb.unwrap_or(2.0 * alpha_prev);
        let reach = max_abs(&dir);
        if alpha * reach > options.max_initial_step {
            alpha = options.max_initial_step / reach;
        }
        let mut accepted = None;
        while alpha * reach > 1e-16 {
            let step = TangentVector {
                entries: &dir.entries * C64::new(alpha, 0.0),
            };
            let cand = retract(&p, &step)?;
            let fc = objective.value(&cand);
            if fc <= f + options.armijo * alpha * slope {
                accepted = Some((cand, fc));
                break;
            }
            alpha *= options.shrink;
        }
        let Some((p_new, f_new)) = accepted else {
            // no decrease representable at this precision
            break;
        };
        iterations += 1;
        since_reset += 1;

        let grad_new = project_tangent(&p_new, &objective.gradient_at(&p_new.entries));
        let grad_old_t = project_tangent(&p_new, &grad.entries);
        let dir_t = project_tangent(&p_new, &dir.entries);
        let s = &dir_t.entries * C64::new(alpha, 0.0);
        let y = &grad_new.entries - &grad_old_t.entries;
        let sy = s.dotc(&y).re;
        bb = (sy > 0.0).then(|| s.norm_squared() / sy);

        let beta = if since_reset >= n {
            since_reset = 0;
            0.0
        } else {
            (grad_new.entries.dotc(&y).re / (gnorm * gnorm)).max(0.0)
        };
        dir = TangentVector {
            entries: -&grad_new.entries + &dir_t.entries * C64::new(beta, 0.0),
        };

        p = p_new;
        f = f_new;
        grad = grad_new;
        gnorm = grad.norm();
        alpha_prev = alpha;
        trace.push(CgRecord {
            iter: iterations,
            objective: f,
            grad_norm: gnorm,
            step: alpha,
        });
        converged = gnorm < options.tol;
    }

    Ok(CgResult {
        point: p,
        objective: f,
        iterations,
        grad_norm: gnorm,
        converged,
        trace,
    })
}
