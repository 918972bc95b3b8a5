//! Spectral efficiency, energy efficiency and beampattern fidelity.
//!
//! Rates are in bits/s/Hz (base-2 logarithms).

use crate::array::Beampattern;
use crate::channel::{optimal_beamformers, Channel};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen_desc, CMat, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub rx_power: f64,
    pub noise_variance: f64,
}

impl LinkBudget {
    pub fn new(rx_power: f64, noise_variance: f64) -> Result<Self> {
        if !(rx_power > 0.0 && noise_variance > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "powers must be positive, got p = {rx_power}, noise = {noise_variance}"
            )));
        }
        Ok(LinkBudget {
            rx_power,
            noise_variance,
        })
    }

    /// Unit noise variance and `p = 10^(snr_db / 10)`.
    pub fn from_snr_db(snr_db: f64) -> Result<Self> {
        Self::new(10f64.powf(snr_db / 10.0), 1.0)
    }

    pub fn snr(&self) -> f64 {
        self.rx_power / self.noise_variance
    }
}

/// Per-component transmitter power draw in watts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerModel {
    pub p_bb: f64,
    pub p_rf: f64,
    pub p_pa: f64,
    pub p_ps: f64,
}

impl Default for PowerModel {
    fn default() -> Self {
        PowerModel {
            p_bb: 10.0,
            p_rf: 0.3,
            p_pa: 0.1,
            p_ps: 0.01,
        }
    }
}

impl PowerModel {
    pub fn validate(&self) -> Result<()> {
        let all = [self.p_bb, self.p_rf, self.p_pa, self.p_ps];
        if all.iter().any(|p| !(*p >= 0.0)) {
            return Err(Error::InvalidParameter(format!("negative component power in {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Architecture {
    FullDigital,
    Hybrid,
}

/// `log2 det(M)` for Hermitian positive definite `M`.
fn log2_det_hpd(m: &CMat) -> f64 {
    match m.clone().cholesky() {
        Some(ch) => 2.0 * ch.l_dirty().diagonal().iter().map(|z| z.re.ln()).sum::<f64>() / std::f64::consts::LN_2,
        None => {
            let (vals, _) = hermitian_eigen_desc(m);
            vals.iter().map(|v| v.max(f64::MIN_POSITIVE).log2()).sum()
        }
    }
}

fn effective(channel: &CMat, combiner: &CMat, precoder: &CMat) -> Result<CMat> {
    let (nr, nt) = channel.shape();
    if combiner.ncols() != nr || precoder.nrows() != nt || combiner.nrows() != precoder.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "combiner {:?}, channel {:?}, precoder {:?}",
            combiner.shape(),
            channel.shape(),
            precoder.shape()
        )));
    }
    Ok(combiner * channel * precoder)
}

fn covariance_plus_identity(g: &CMat, scale: f64) -> CMat {
    let n = g.nrows();
    CMat::identity(n, n) + (g * g.adjoint()) * C64::new(scale, 0.0)
}

/// `log2 det(I + (p / sigma^2) W H F F^H H^H W^H)`.
pub fn spectral_efficiency(channel: &CMat, combiner: &CMat, precoder: &CMat, budget: &LinkBudget) -> Result<f64> {
    let g = effective(channel, combiner, precoder)?;
    Ok(log2_det_hpd(&covariance_plus_identity(&g, budget.snr())))
}

/// Rate when beamformers were designed on `designed` but the link is `actual`.
///
/// The unknown part `W (H_actual - H_designed) F` is treated as
/// Gaussian interference:
/// `log2 det(I + snr (G G^H + E E^H)) - log2 det(I + snr E E^H)`.
pub fn spectral_efficiency_mismatched(
    designed: &CMat,
    actual: &CMat,
    combiner: &CMat,
    precoder: &CMat,
    budget: &LinkBudget,
) -> Result<f64> {
    if designed.shape() != actual.shape() {
        return Err(Error::DimensionMismatch(format!(
            "designed channel {:?} vs actual {:?}",
            designed.shape(),
            actual.shape()
        )));
    }
    let g = effective(designed, combiner, precoder)?;
    let e = effective(&(actual - designed), combiner, precoder)?;
    let snr = C64::new(budget.snr(), 0.0);
    let n = g.nrows();
    let interference = CMat::identity(n, n) + (&e * e.adjoint()) * snr;
    let total = &interference + (&g * g.adjoint()) * snr;
    Ok((log2_det_hpd(&total) - log2_det_hpd(&interference)).max(0.0))
}

/// Rate of the SVD-optimal precoder and combiner.
pub fn spectral_efficiency_upper(channel: &Channel, n_streams: usize, budget: &LinkBudget) -> Result<f64> {
    let pair = optimal_beamformers(channel, n_streams)?;
    spectral_efficiency(&channel.matrix, &pair.w_opt, &pair.f_opt, budget)
}

pub fn power_sum(architecture: Architecture, n_tx: usize, n_rf: usize, model: &PowerModel) -> Result<f64> {
    model.validate()?;
    if n_tx == 0 || n_rf == 0 {
        return Err(Error::InvalidParameter("antenna and RF chain counts must be positive".into()));
    }
    let (nt, nrf) = (n_tx as f64, n_rf as f64);
    Ok(match architecture {
        Architecture::Hybrid => model.p_bb + nrf * model.p_rf + nt * model.p_pa + nrf * nt * model.p_ps,
        Architecture::FullDigital => model.p_bb + nt * model.p_rf + nt * model.p_pa + nt * model.p_ps,
    })
}

pub fn energy_efficiency(rate: f64, total_power: f64) -> Result<f64> {
    if !(total_power > 0.0) {
        return Err(Error::ZeroPower);
    }
    Ok(rate / total_power)
}

/// Mean squared difference of the two patterns, each divided by its own peak.
pub fn beampattern_mse(achieved: &Beampattern, desired: &Beampattern) -> Result<f64> {
    if achieved.grid.len() != desired.grid.len()
        || achieved.grid.iter().zip(&desired.grid).any(|(a, b)| (a - b).abs() > 1e-12)
    {
        return Err(Error::GridMismatch);
    }
    if achieved.grid.is_empty() {
        return Ok(0.0);
    }
    let (a, d) = (achieved.normalized(), desired.normalized());
    Ok(a.iter().zip(&d).map(|(x, y)| (x - y) * (x - y)).sum::<f64>() / a.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{generate_channel, perturb, ChannelConfig};
    use crate::linalg::frob_sq;
    use crate::seeding::rng_from_seed;
    use rand_distr::{Distribution, StandardNormal};

    fn small_channel(seed: u64) -> Channel {
        let cfg = ChannelConfig {
            n_tx: 12,
            n_rx: 6,
            n_paths: 4,
            ..ChannelConfig::default()
        };
        generate_channel(&cfg, seed).unwrap()
    }

    fn random_precoder(nt: usize, ns: usize, seed: u64) -> CMat {
        let mut rng = rng_from_seed(seed);
        let m = CMat::from_fn(nt, ns, |_, _| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            C64::new(re, im)
        });
        let n = frob_sq(&m).sqrt();
        m * C64::new((ns as f64).sqrt() / n, 0.0)
    }

    #[test]
    fn zero_precoder_gives_zero_rate() {
        let h = small_channel(1);
        let pair = optimal_beamformers(&h, 2).unwrap();
        let b = LinkBudget::from_snr_db(10.0).unwrap();
        let r = spectral_efficiency(&h.matrix, &pair.w_opt, &CMat::zeros(12, 2), &b).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn optimal_pair_matches_singular_value_formula() {
        let h = small_channel(2);
        let pair = optimal_beamformers(&h, 3).unwrap();
        let b = LinkBudget::new(0.7, 0.2).unwrap();
        let r = spectral_efficiency(&h.matrix, &pair.w_opt, &pair.f_opt, &b).unwrap();
        let oracle: f64 = pair.singular_values[..3].iter().map(|s| (1.0 + b.snr() * s * s).log2()).sum();
        assert!((r - oracle).abs() < 1e-10);
        assert!((spectral_efficiency_upper(&h, 3, &b).unwrap() - oracle).abs() < 1e-10);
    }

    #[test]
    fn high_snr_slope_is_stream_count() {
        let h = small_channel(3);
        let pair = optimal_beamformers(&h, 2).unwrap();
        let r1 = spectral_efficiency(&h.matrix, &pair.w_opt, &pair.f_opt, &LinkBudget::new(1e4, 1.0).unwrap()).unwrap();
        let r2 = spectral_efficiency(&h.matrix, &pair.w_opt, &pair.f_opt, &LinkBudget::new(2e4, 1.0).unwrap()).unwrap();
        assert!(((r2 - r1) - 2.0).abs() < 0.1);
    }

    #[test]
    fn random_precoders_stay_below_upper_bound() {
        let h = small_channel(4);
        let pair = optimal_beamformers(&h, 2).unwrap();
        let b = LinkBudget::from_snr_db(5.0).unwrap();
        let up = spectral_efficiency_upper(&h, 2, &b).unwrap();
        for s in 0..200 {
            let f = random_precoder(12, 2, 50 + s);
            assert!(spectral_efficiency(&h.matrix, &pair.w_opt, &f, &b).unwrap() <= up + 1e-9);
        }
    }

    #[test]
    fn rank_one_upper_bound_and_phase_invariance() {
        let a = crate::array::steering_vector(0.5, 0.2, 8);
        let r = crate::array::steering_vector(0.5, -0.7, 4);
        let h = Channel::from_matrix(&r * a.adjoint());
        let b = LinkBudget::new(0.01, 1.0).unwrap();
        let s1 = (4.0f64 * 8.0).sqrt();
        let up = spectral_efficiency_upper(&h, 1, &b).unwrap();
        assert!((up - (1.0 + 0.01 * s1 * s1).log2()).abs() < 1e-10);
        let rotated = Channel::from_matrix(&h.matrix * C64::from_polar(1.0, 1.1));
        assert!((spectral_efficiency_upper(&rotated, 1, &b).unwrap() - up).abs() < 1e-10);
    }

    #[test]
    fn rate_is_monotone_in_snr() {
        let h = small_channel(5);
        let pair = optimal_beamformers(&h, 2).unwrap();
        let f = random_precoder(12, 2, 9);
        let mut last = 0.0;
        for db in (-40..=20).step_by(5) {
            let r = spectral_efficiency(&h.matrix, &pair.w_opt, &f, &LinkBudget::from_snr_db(db as f64).unwrap()).unwrap();
            assert!(r >= last);
            last = r;
        }
    }

    #[test]
    fn mismatch_strictly_lowers_rate() {
        let h = small_channel(6);
        let pair = optimal_beamformers(&h, 2).unwrap();
        let b = LinkBudget::from_snr_db(-10.0).unwrap();
        let clean = spectral_efficiency(&h.matrix, &pair.w_opt, &pair.f_opt, &b).unwrap();
        let same = spectral_efficiency_mismatched(&h.matrix, &h.matrix, &pair.w_opt, &pair.f_opt, &b).unwrap();
        assert!((clean - same).abs() < 1e-12);
        let hd = perturb(&h, 0.5, 77).unwrap();
        let tv = spectral_efficiency_mismatched(&h.matrix, &hd.matrix, &pair.w_opt, &pair.f_opt, &b).unwrap();
        assert!(tv < clean);
    }

    #[test]
    fn power_sums() {
        let m = PowerModel::default();
        assert!((power_sum(Architecture::Hybrid, 81, 3, &m).unwrap() - 21.43).abs() < 1e-12);
        assert!((power_sum(Architecture::FullDigital, 81, 3, &m).unwrap() - 43.21).abs() < 1e-12);
        let zero = PowerModel {
            p_bb: 0.0,
            p_rf: 0.0,
            p_pa: 0.0,
            p_ps: 0.0,
        };
        assert_eq!(power_sum(Architecture::Hybrid, 81, 3, &zero).unwrap(), 0.0);
    }

    #[test]
    fn energy_efficiency_examples() {
        assert!((energy_efficiency(10.0, 21.43).unwrap() - 0.466635557629491).abs() < 1e-12);
        assert_eq!(energy_efficiency(0.0, 5.0).unwrap(), 0.0);
        assert_eq!(energy_efficiency(3.0, 4.0).unwrap(), 2.0 * energy_efficiency(3.0, 8.0).unwrap());
        assert!(matches!(energy_efficiency(1.0, 0.0), Err(Error::ZeroPower)));
    }

    #[test]
    fn mse_examples() {
        let p = Beampattern {
            grid: vec![0.0, 0.1, 0.2],
            power: vec![1.0, 4.0, 2.0],
        };
        let scaled = Beampattern {
            grid: p.grid.clone(),
            power: p.power.iter().map(|x| 3.0 * x).collect(),
        };
        assert_eq!(beampattern_mse(&p, &p).unwrap(), 0.0);
        assert!(beampattern_mse(&p, &scaled).unwrap() < 1e-30);
        let other = Beampattern {
            grid: vec![0.0, 0.1],
            power: vec![1.0, 1.0],
        };
        assert!(matches!(beampattern_mse(&p, &other), Err(Error::GridMismatch)));
    }
}
