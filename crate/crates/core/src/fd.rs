//! Full-digital trade-off beamformer.
//!
//! Solves
//!
//! ```text
//!   minimize  rho ||F - F_opt||_F^2 + (1 - rho) ||F - F_rad||_F^2
//!   s.t.      ||F||_F^2 = N_s
//! ```
//!
//! either by semidefinite relaxation of the homogenized QCQP with
//! dominant-eigenvector extraction, or exactly: since the stacked operator
//! `A = [sqrt(rho) I; sqrt(1 - rho) I]` satisfies `A^H A = I`, the objective
//! on the power sphere is affine in `Re<F, M>` with
//! `M = rho F_opt + (1 - rho) F_rad`, so `F = sqrt(N_s) M / ||M||_F`.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{fix_phase, frob_sq, hermitian_eigen_desc, kron, unvec, vec_of, CMat, CVec, C64, ONE};
use crate::sdp::{self, SdpProblem, SdpStatus};
use crate::seeding::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeoffConfig {
    pub rho: f64,
    pub n_streams: usize,
}

impl TradeoffConfig {
    pub fn new(rho: f64, n_streams: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho) {
            return Err(Error::InvalidParameter(format!("rho = {rho} outside [0, 1]")));
        }
        if n_streams == 0 {
            return Err(Error::InvalidParameter("need at least one stream".into()));
        }
        Ok(TradeoffConfig { rho, n_streams })
    }
}

/// How the `N_t`-power radar beamformer is brought to the `N_s` power budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RadarScaling {
    /// Rescale to `||F_rad||_F^2 = N_s`, the same power as `F_opt`.
    #[default]
    PowerMatched,
    /// Keep the unit-modulus entries as they are.
    Unscaled,
}

/// Maps the `N_t x K` radar beamformer onto `N_t x N_s`.
///
/// For `K != N_s` the columns are mixed by a semi-unitary `K x N_s` slice of
/// the unitary DFT: the first `N_s` columns when `K > N_s`, the first `K`
/// rows when `K < N_s` (which leaves `F F^H` unchanged).
pub fn align_radar_target(f_rad: &CMat, n_streams: usize, scaling: RadarScaling) -> Result<CMat> {
    let k = f_rad.ncols();
    if k == 0 || n_streams == 0 {
        return Err(Error::DimensionMismatch("empty radar target".into()));
    }
    let mixed = if k == n_streams {
        f_rad.clone()
    } else {
        let size = k.max(n_streams);
        let dft = |r: usize, c: usize| {
            C64::from_polar(
                1.0 / (size as f64).sqrt(),
                -2.0 * std::f64::consts::PI * (r * c) as f64 / size as f64,
            )
        };
        let u = CMat::from_fn(k, n_streams, dft);
        f_rad * u
    };
    match scaling {
        RadarScaling::Unscaled => Ok(mixed),
        RadarScaling::PowerMatched => {
            let norm = frob_sq(&mixed).sqrt();
            if norm == 0.0 {
                return Err(Error::DegenerateTarget);
            }
            Ok(mixed * C64::new((n_streams as f64).sqrt() / norm, 0.0))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StackedTargets {
    /// `2 N_t x N_t`.
    pub a_matrix: CMat,
    /// `2 N_t x N_s`.
    pub b_matrix: CMat,
}

impl StackedTargets {
    pub fn objective(&self, f: &CMat) -> f64 {
        frob_sq(&(&self.a_matrix * f - &self.b_matrix))
    }
}

fn check_targets(f_opt: &CMat, f_rad: &CMat, config: &TradeoffConfig) -> Result<()> {
    if f_opt.shape() != f_rad.shape() {
        return Err(Error::DimensionMismatch(format!(
            "F_opt is {:?} but radar target is {:?}",
            f_opt.shape(),
            f_rad.shape()
        )));
    }
    if f_opt.ncols() != config.n_streams {
        return Err(Error::DimensionMismatch(format!(
            "targets have {} columns, expected {} streams",
            f_opt.ncols(),
            config.n_streams
        )));
    }
    Ok(())
}

pub fn stack_targets(f_opt: &CMat, f_rad: &CMat, config: &TradeoffConfig) -> Result<StackedTargets> {
    check_targets(f_opt, f_rad, config)?;
    let nt = f_opt.nrows();
    let ns = config.n_streams;
    let (wc, wr) = (config.rho.sqrt(), (1.0 - config.rho).sqrt());
    let mut a = CMat::zeros(2 * nt, nt);
    a.view_mut((0, 0), (nt, nt)).fill_diagonal(C64::new(wc, 0.0));
    a.view_mut((nt, 0), (nt, nt)).fill_diagonal(C64::new(wr, 0.0));
    let mut b = CMat::zeros(2 * nt, ns);
    b.view_mut((0, 0), (nt, ns)).copy_from(&(f_opt * C64::new(wc, 0.0)));
    b.view_mut((nt, 0), (nt, ns)).copy_from(&(f_rad * C64::new(wr, 0.0)));
    Ok(StackedTargets { a_matrix: a, b_matrix: b })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdMethod {
    Sdr,
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FdBeamformer {
    /// `N_t x N_s`, scaled to `||F||_F^2 = N_s`.
    pub matrix: CMat,
    /// `||A F - B||_F^2`.
    pub objective: f64,
    pub method: FdMethod,
}

impl FdBeamformer {
    /// `(||F - F_opt||_F, ||F - F_rad||_F)`.
    pub fn residuals(&self, f_opt: &CMat, f_rad: &CMat) -> (f64, f64) {
        (frob_sq(&(&self.matrix - f_opt)).sqrt(), frob_sq(&(&self.matrix - f_rad)).sqrt())
    }
}

pub fn closed_form_solution(f_opt: &CMat, f_rad: &CMat, config: &TradeoffConfig) -> Result<FdBeamformer> {
    let targets = stack_targets(f_opt, f_rad, config)?;
    let m = f_opt * C64::new(config.rho, 0.0) + f_rad * C64::new(1.0 - config.rho, 0.0);
    let norm = frob_sq(&m).sqrt();
    if norm < 1e-12 {
        return Err(Error::DegenerateTarget);
    }
    let matrix = m * C64::new((config.n_streams as f64).sqrt() / norm, 0.0);
    Ok(FdBeamformer {
        objective: targets.objective(&matrix),
        matrix,
        method: FdMethod::ClosedForm,
    })
}

/// Homogenized QCQP data over `X = [vec F; t][vec F; t]^H`.
#[derive(Debug, Clone, PartialEq)]
pub struct QcqpForm {
    pub c_matrix: CMat,
    pub a1: CMat,
    pub a2: CMat,
    pub n_streams: usize,
    pub n_tx: usize,
    pub targets: StackedTargets,
}

impl QcqpForm {
    pub fn dim(&self) -> usize {
        self.c_matrix.nrows()
    }

    /// `z^H C z` for `z = [vec F; t]`.
    pub fn quadratic(&self, f: &CMat, t: C64) -> f64 {
        let z = lift(f, t);
        z.dotc(&(&self.c_matrix * &z)).re
    }

    pub fn as_sdp(&self) -> SdpProblem {
        SdpProblem {
            objective: self.c_matrix.clone(),
            constraints: vec![(self.a1.clone(), self.n_streams as f64), (self.a2.clone(), 1.0)],
        }
    }
}

fn lift(f: &CMat, t: C64) -> CVec {
    let v = vec_of(f);
    let mut z = CVec::zeros(v.len() + 1);
    z.rows_mut(0, v.len()).copy_from(&v);
    z[v.len()] = t;
    z
}

pub fn homogenize(targets: &StackedTargets, n_streams: usize) -> Result<QcqpForm> {
    let nt = targets.a_matrix.ncols();
    if targets.b_matrix.ncols() != n_streams || targets.b_matrix.nrows() != targets.a_matrix.nrows() {
        return Err(Error::DimensionMismatch("stacked targets do not match the stream count".into()));
    }
    let big_a = kron(&CMat::identity(n_streams, n_streams), &targets.a_matrix);
    let vb = vec_of(&targets.b_matrix);
    let dim = nt * n_streams + 1;
    let mut c = CMat::zeros(dim, dim);
    c.view_mut((0, 0), (dim - 1, dim - 1)).copy_from(&(big_a.adjoint() * &big_a));
    let cross = -(big_a.adjoint() * &vb);
    c.view_mut((0, dim - 1), (dim - 1, 1)).copy_from(&cross);
    c.view_mut((dim - 1, 0), (1, dim - 1)).copy_from(&cross.adjoint());
    c[(dim - 1, dim - 1)] = C64::new(vb.norm_squared(), 0.0);

    let mut a1 = CMat::zeros(dim, dim);
    a1.view_mut((0, 0), (dim - 1, dim - 1)).fill_diagonal(ONE);
    let mut a2 = CMat::zeros(dim, dim);
    a2[(dim - 1, dim - 1)] = ONE;
    Ok(QcqpForm {
        c_matrix: c,
        a1,
        a2,
        n_streams,
        n_tx: nt,
        targets: targets.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdrOptions {
    pub sdp_tol: f64,
    pub max_iter: usize,
    /// Number of Gaussian randomization draws; zero keeps pure eigenvector extraction.
    pub randomizations: usize,
    pub seed: u64,
}

impl Default for SdrOptions {
    fn default() -> Self {
        SdrOptions {
            sdp_tol: sdp::DEFAULT_TOL,
            max_iter: sdp::DEFAULT_MAX_ITER,
            randomizations: 0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SdrOutcome {
    pub beamformer: FdBeamformer,
    /// Lower bound from the SDP dual objective.
    pub sdp_dual: f64,
    pub sdp_primal: f64,
    pub sdp_status: SdpStatus,
    pub sdp_iterations: usize,
    /// `lambda_1 / lambda_2` of the relaxed solution; large means near rank one.
    pub eigen_ratio: f64,
    pub degenerate_extraction: bool,
}

/// Turns a lifted vector into a feasible beamformer.
fn extract(form: &QcqpForm, z: &CVec) -> (CMat, bool) {
    let len = form.n_tx * form.n_streams;
    let t = z[len];
    let mut v: Vec<C64> = z.rows(0, len).iter().cloned().collect();
    let degenerate = t.norm() < 1e-8;
    if degenerate {
        fix_phase(&mut v);
    } else {
        let unphase = t.conj() / t.norm();
        for e in v.iter_mut() {
            *e *= unphase;
        }
    }
    let f = unvec(&CVec::from_vec(v), form.n_tx, form.n_streams);
    let norm = frob_sq(&f).sqrt();
    let f = if norm > 0.0 {
        f * C64::new((form.n_streams as f64).sqrt() / norm, 0.0)
    } else {
        f
    };
    (f, degenerate)
}

pub fn solve_sdr(form: &QcqpForm, options: &SdrOptions) -> Result<SdrOutcome> {
    let sol = sdp::solve(&form.as_sdp(), options.sdp_tol, options.max_iter)?;
    if sol.status == SdpStatus::Infeasible {
        return Err(Error::Infeasible("relaxed beamforming SDP diverged".into()));
    }
    let (vals, vecs) = hermitian_eigen_desc(&sol.x_matrix);
    let lead = vals[0].max(0.0);
    let eigen_ratio = if vals.len() > 1 && vals[1] > 0.0 { lead / vals[1] } else { f64::INFINITY };
    let z = vecs.column(0) * C64::new(lead.sqrt(), 0.0);
    let (mut best, degenerate) = extract(form, &z.into_owned());
    let mut best_obj = form.targets.objective(&best);

    if options.randomizations > 0 {
        // xi ~ CN(0, X) through the eigen-factorization of X
        let mut rng = rng_from_seed(options.seed);
        let dim = form.dim();
        let scales: Vec<f64> = vals.iter().map(|l| l.max(0.0).sqrt()).collect();
        for _ in 0..options.randomizations {
            let w = CVec::from_fn(dim, |i, _| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                C64::new(re, im) * (scales[i] / 2f64.sqrt())
            });
            let xi = &vecs * w;
            let (cand, _) = extract(form, &xi);
            let obj = form.targets.objective(&cand);
            if obj < best_obj {
                best = cand;
                best_obj = obj;
            }
            let _ = rng.random::<u8>();
        }
    }
    Ok(SdrOutcome {
        beamformer: FdBeamformer {
            matrix: best,
            objective: best_obj,
            method: FdMethod::Sdr,
        },
        sdp_dual: sol.dual_value,
        sdp_primal: sol.primal_value,
        sdp_status: sol.status,
        sdp_iterations: sol.iterations,
        eigen_ratio,
        degenerate_extraction: degenerate,
    })
}

/// Stack, homogenize, relax and extract in one call.
pub fn sdr_beamformer(
    f_opt: &CMat,
    f_rad: &CMat,
    config: &TradeoffConfig,
    options: &SdrOptions,
) -> Result<SdrOutcome> {
    let targets = stack_targets(f_opt, f_rad, config)?;
    let form = homogenize(&targets, config.n_streams)?;
    solve_sdr(&form, options)
}
