//! Hybrid analog-digital precoder `F = F_RF F_BB` by alternating minimization.
//!
//! The digital step is the least-squares solution `F_BB = A^+ B` over the
//! stacked operator `A = [sqrt(rho) F_RF; sqrt(1 - rho) F_RF]`. The analog
//! step runs conjugate gradient on the complex circle over
//! `p = vec(F_RF)`, using `vec(F_RF F_BB) = (F_BB^T kron I) vec(F_RF)`.

use rand::Rng;

use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::linalg::{frob_sq, kron, pinv, unvec, vec_of, CMat, SortedSvd, C64};
use crate::manifold::{riemannian_cg, CgOptions, CgResult, CirclePoint, LinearMap, QuadraticObjective};
use crate::seeding::rng_from_seed;

const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum AnalogInit {
    /// I.i.d. uniform phases drawn from the given seed.
    Random(u64),
    /// Explicit starting point; phases of the entries are used.
    Given(CMat),
}

#[derive(Debug, Clone, PartialEq)]
pub struct HybridConfig {
    pub n_rf: usize,
    pub rho: f64,
    pub n_streams: usize,
    /// Outer iteration cap.
    pub outer_max: usize,
    /// Relative objective decrease below which the outer loop stops.
    pub outer_tol: f64,
    pub cg: CgOptions,
    pub init: AnalogInit,
}

impl HybridConfig {
    pub fn new(n_rf: usize, rho: f64, n_streams: usize, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho) {
            return Err(Error::InvalidParameter(format!("rho = {rho} outside [0, 1]")));
        }
        if n_rf == 0 || n_streams == 0 {
            return Err(Error::InvalidParameter("need at least one RF chain and one stream".into()));
        }
        Ok(HybridConfig {
            n_rf,
            rho,
            n_streams,
            outer_max: 50,
            outer_tol: 1e-5,
            cg: CgOptions::default(),
            init: AnalogInit::Random(seed),
        })
    }

    fn validate(&self, n_tx: usize) -> Result<()> {
        if self.n_rf > n_tx {
            return Err(Error::InvalidParameter(format!(
                "{} RF chains exceed {} antennas",
                self.n_rf, n_tx
            )));
        }
        if !(0.0..=1.0).contains(&self.rho) {
            return Err(Error::InvalidParameter(format!("rho = {} outside [0, 1]", self.rho)));
        }
        if self.outer_max == 0 {
            return Err(Error::InvalidParameter("outer_max must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HybridBeamformer {
    /// `N_t x N_RF`, unit-modulus entries.
    pub f_rf: CMat,
    /// `N_RF x N_s`, scaled so that `||F_RF F_BB||_F^2 = N_s`.
    pub f_bb: CMat,
    /// Objective after every digital and analog step, before the final scaling.
    pub objective_trace: Vec<f64>,
    pub outer_iterations: usize,
    pub converged: bool,
}

impl HybridBeamformer {
    pub fn precoder(&self) -> CMat {
        &self.f_rf * &self.f_bb
    }
}

/// `rho ||F_RF F_BB - F_opt||_F^2 + (1 - rho) ||F_RF F_BB - F_rad||_F^2`.
pub fn hybrid_objective(f_rf: &CMat, f_bb: &CMat, f_opt: &CMat, f_rad: &CMat, rho: f64) -> f64 {
    let f = f_rf * f_bb;
    rho * frob_sq(&(&f - f_opt)) + (1.0 - rho) * frob_sq(&(&f - f_rad))
}

fn check_targets(n_tx: usize, f_opt: &CMat, f_rad: &CMat) -> Result<()> {
    if f_opt.shape() != f_rad.shape() || f_opt.nrows() != n_tx {
        return Err(Error::DimensionMismatch(format!(
            "targets {:?} and {:?} do not match {} antennas",
            f_opt.shape(),
            f_rad.shape(),
            n_tx
        )));
    }
    Ok(())
}

pub fn digital_step(f_rf: &CMat, f_opt: &CMat, f_rad: &CMat, rho: f64) -> Result<CMat> {
    let (nt, nrf) = f_rf.shape();
    check_targets(nt, f_opt, f_rad)?;
    if SortedSvd::new(f_rf).rank(RANK_TOL) < nrf {
        return Err(Error::RankDeficientAnalog);
    }
    let ns = f_opt.ncols();
    let (wc, wr) = (C64::new(rho.sqrt(), 0.0), C64::new((1.0 - rho).sqrt(), 0.0));
    let mut a = CMat::zeros(2 * nt, nrf);
    a.view_mut((0, 0), (nt, nrf)).copy_from(&(f_rf * wc));
    a.view_mut((nt, 0), (nt, nrf)).copy_from(&(f_rf * wr));
    let mut b = CMat::zeros(2 * nt, ns);
    b.view_mut((0, 0), (nt, ns)).copy_from(&(f_opt * wc));
    b.view_mut((nt, 0), (nt, ns)).copy_from(&(f_rad * wr));
    Ok(pinv(&a, 1e-12) * b)
}

/// The linear map `vec(F_RF) -> vec(F_RF F_BB)` for `N_t` antennas.
pub fn analog_operator(f_bb: &CMat, n_tx: usize) -> CMat {
    kron(&f_bb.transpose(), &CMat::identity(n_tx, n_tx))
}

pub fn analog_step(
    f_bb: &CMat,
    f_opt: &CMat,
    f_rad: &CMat,
    rho: f64,
    f_rf_init: &CMat,
    options: &CgOptions,
) -> Result<(CMat, CgResult)> {
    let (nt, nrf) = f_rf_init.shape();
    check_targets(nt, f_opt, f_rad)?;
    if f_bb.nrows() != nrf || f_bb.ncols() != f_opt.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "digital part is {:?}, expected {}x{}",
            f_bb.shape(),
            nrf,
            f_opt.ncols()
        )));
    }
    let map = LinearMap::RightFactor {
        factor: f_bb.clone(),
        rows: nt,
    };
    let objective = QuadraticObjective::weighted(map, &vec_of(f_opt), &vec_of(f_rad), rho)?;
    let start = CirclePoint::from_phases_of(&vec_of(f_rf_init));
    let result = riemannian_cg(&objective, &start, options)?;
    Ok((unvec(result.point.entries(), nt, nrf), result))
}

/// Phases of the top `n_rf` right singular vectors of the channel.
pub fn svd_phase_init(channel: &Channel, n_rf: usize) -> Result<CMat> {
    let svd = SortedSvd::new(&channel.matrix);
    if n_rf > svd.v.ncols() {
        return Err(Error::InvalidParameter(format!(
            "{n_rf} RF chains but only {} singular vectors",
            svd.v.ncols()
        )));
    }
    Ok(svd.v.columns(0, n_rf).map(|z| if z.norm() > 0.0 { z / z.norm() } else { C64::new(1.0, 0.0) }))
}

fn initial_analog(init: &AnalogInit, nt: usize, nrf: usize) -> Result<CMat> {
    match init {
        AnalogInit::Random(seed) => {
            let mut rng = rng_from_seed(*seed);
            Ok(CMat::from_fn(nt, nrf, |_, _| {
                C64::from_polar(1.0, rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
            }))
        }
        AnalogInit::Given(m) => {
            if m.shape() != (nt, nrf) {
                return Err(Error::DimensionMismatch(format!(
                    "initial analog matrix is {:?}, expected {nt}x{nrf}",
                    m.shape()
                )));
            }
            Ok(m.map(|z| if z.norm() > 0.0 { z / z.norm() } else { C64::new(1.0, 0.0) }))
        }
    }
}

pub fn alternating_minimize(config: &HybridConfig, f_opt: &CMat, f_rad: &CMat) -> Result<HybridBeamformer> {
    let nt = f_opt.nrows();
    config.validate(nt)?;
    check_targets(nt, f_opt, f_rad)?;
    if f_opt.ncols() != config.n_streams {
        return Err(Error::DimensionMismatch(format!(
            "targets have {} columns, expected {} streams",
            f_opt.ncols(),
            config.n_streams
        )));
    }
    let rho = config.rho;
    let mut f_rf = initial_analog(&config.init, nt, config.n_rf)?;
    let mut f_bb = digital_step(&f_rf, f_opt, f_rad, rho)?;
    let mut current = hybrid_objective(&f_rf, &f_bb, f_opt, f_rad, rho);
    let mut trace = vec![current];
    let mut converged = false;
    let mut outer = 0;

    while outer < config.outer_max {
        outer += 1;
        let before = current;
        let (rf_new, _) = analog_step(&f_bb, f_opt, f_rad, rho, &f_rf, &config.cg)?;
        let after_analog = hybrid_objective(&rf_new, &f_bb, f_opt, f_rad, rho);
        if after_analog <= current {
            f_rf = rf_new;
            current = after_analog;
        }
        trace.push(current);

        let bb_new = digital_step(&f_rf, f_opt, f_rad, rho)?;
        let after_digital = hybrid_objective(&f_rf, &bb_new, f_opt, f_rad, rho);
        // the exact minimizer can lose to the incumbent only by rounding
        if after_digital <= current {
            f_bb = bb_new;
            current = after_digital;
        }
        trace.push(current);

        if before - current <= config.outer_tol * before.abs().max(f64::MIN_POSITIVE) {
            converged = true;
            break;
        }
    }

    let power = frob_sq(&(&f_rf * &f_bb)).sqrt();
    if power < 1e-300 {
        return Err(Error::DegenerateTarget);
    }
    let f_bb = f_bb * C64::new((config.n_streams as f64).sqrt() / power, 0.0);
    Ok(HybridBeamformer {
        f_rf,
        f_bb,
        objective_trace: trace,
        outer_iterations: outer,
        converged,
    })
}
