//! Uniform linear array response, subarray radar beamformer synthesis and
//! transmit beampattern evaluation.
//!
//! Angles are measured from the array boresight, which is identified with the
//! vehicle's initial driving direction (`+y`). A waypoint displaced by
//! `(dx, dy)` is therefore seen at `atan(dx / dy)`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::Aoi;
use crate::linalg::{cis, ensure_square, hermitian_asymmetry, CMat, CVec, C64, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArrayConfig {
    pub n_antennas: usize,
    /// Element spacing in wavelengths.
    pub spacing: f64,
}

impl ArrayConfig {
    pub fn new(n_antennas: usize, spacing: f64) -> Result<Self> {
        if n_antennas == 0 || !(spacing > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "array needs >= 1 antenna and positive spacing (got {n_antennas}, {spacing})"
            )));
        }
        Ok(ArrayConfig { n_antennas, spacing })
    }

    pub fn half_wavelength(n_antennas: usize) -> Self {
        ArrayConfig {
            n_antennas,
            spacing: 0.5,
        }
    }
}

/// Radar range equation parameters.
///
/// Only the fourth-power scaling of range with transmit power matters for
/// antenna allocation; the absolute values feed [`RadarLinkBudget::max_range`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadarLinkBudget {
    pub antenna_gain: f64,
    pub wavelength: f64,
    pub rcs: f64,
    pub min_detectable_power: f64,
    pub per_antenna_power: f64,
}

impl RadarLinkBudget {
    pub fn omega(&self) -> f64 {
        (self.antenna_gain.powi(2) * self.wavelength.powi(2) * self.rcs
            / ((4.0 * PI).powi(3) * self.min_detectable_power))
            .powf(0.25)
    }

    /// Maximum detection range of a beam formed by `n_antennas` elements.
    pub fn max_range(&self, n_antennas: usize) -> f64 {
        self.omega() * (n_antennas as f64 * self.per_antenna_power).powf(0.25)
    }

    /// Smallest subarray whose maximum range reaches `distance`.
    pub fn antennas_for_range(&self, distance: f64) -> usize {
        let p = (distance / self.omega()).powi(4) / self.per_antenna_power;
        (p - 1e-9).ceil().max(1.0) as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadarBeamformer {
    /// Block-diagonal `N_t x K` matrix; column `k` holds subarray `k`'s steering vector.
    pub matrix: CMat,
    pub pointing_angles: Vec<f64>,
    pub subarray_sizes: Vec<usize>,
}

impl RadarBeamformer {
    pub fn covariance(&self) -> CMat {
        &self.matrix * self.matrix.adjoint()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Beampattern {
    pub grid: Vec<f64>,
    pub power: Vec<f64>,
}

impl Beampattern {
    /// Local maxima as `(grid index, power)`, strongest first.
    pub fn peaks(&self) -> Vec<(usize, f64)> {
        let p = &self.power;
        let n = p.len();
        let mut out = Vec::new();
        for i in 0..n {
            let left = if i == 0 { f64::NEG_INFINITY } else { p[i - 1] };
            let right = if i + 1 == n { f64::NEG_INFINITY } else { p[i + 1] };
            if p[i] > left && p[i] >= right {
                out.push((i, p[i]));
            }
        }
        out.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
        out
    }

    pub fn normalized(&self) -> Vec<f64> {
        let max = self.power.iter().cloned().fold(0.0, f64::max);
        if max <= 0.0 {
            return vec![0.0; self.power.len()];
        }
        self.power.iter().map(|p| p / max).collect()
    }
}

pub fn steering_vector(spacing: f64, angle: f64, length: usize) -> CVec {
    let step = 2.0 * PI * spacing * angle.sin();
    CVec::from_iterator(length, (0..length).map(|i| cis(step * i as f64)))
}

pub fn pointing_angles(aoi: &Aoi) -> Result<Vec<f64>> {
    aoi.waypoints
        .iter()
        .enumerate()
        .map(|(k, w)| {
            if w.dy != 0.0 {
                Ok((w.dx / w.dy).atan())
            } else if w.dx != 0.0 {
                Ok(FRAC_PI_2.copysign(w.dx))
            } else {
                Err(Error::DegenerateWaypoint(k))
            }
        })
        .collect()
}

pub fn sensing_distances(aoi: &Aoi) -> Vec<f64> {
    aoi.waypoints
        .iter()
        .map(|w| w.dx.hypot(w.dy) + w.radius)
        .collect()
}

/// Splits `total` antennas across subarrays in proportion to `distance^4`.
///
/// Subarrays whose share falls below one element are pinned at one and the
/// rest is re-apportioned; the integer split uses largest remainders with
/// ties going to the lower index.
pub fn allocate_antennas(distances: &[f64], total: usize) -> Result<Vec<usize>> {
    if distances.iter().any(|d| !(*d > 0.0)) {
        return Err(Error::InvalidParameter("sensing distances must be positive".into()));
    }
    let weights: Vec<f64> = distances.iter().map(|d| d.powi(4)).collect();
    apportion(&weights, total)
}

/// Largest-remainder apportionment with a floor of one seat per entry.
pub fn apportion(weights: &[f64], total: usize) -> Result<Vec<usize>> {
    let k = weights.len();
    if k == 0 {
        return Err(Error::InvalidParameter("no subarrays to allocate".into()));
    }
    if total < k {
        return Err(Error::InsufficientAntennas { total, needed: k });
    }
    let mut pinned = vec![false; k];
    loop {
        let free_total = (total - pinned.iter().filter(|&&p| p).count()) as f64;
        let free_weight: f64 = weights
            .iter()
            .zip(&pinned)
            .filter(|(_, &p)| !p)
            .map(|(w, _)| *w)
            .sum();
        let quotas: Vec<f64> = weights
            .iter()
            .zip(&pinned)
            .map(|(w, &p)| if p { 1.0 } else { free_total * w / free_weight })
            .collect();
        let newly: Vec<usize> = (0..k).filter(|&i| !pinned[i] && quotas[i] < 1.0).collect();
        if !newly.is_empty() {
            for i in newly {
                pinned[i] = true;
            }
            continue;
        }
        let mut seats: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
        let assigned: usize = seats.iter().sum();
        let mut order: Vec<usize> = (0..k).filter(|&i| !pinned[i]).collect();
        order.sort_by(|&a, &b| {
            let ra = quotas[a] - quotas[a].floor();
            let rb = quotas[b] - quotas[b].floor();
            rb.partial_cmp(&ra).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b))
        });
        for &i in order.iter().take(total - assigned) {
            seats[i] += 1;
        }
        return Ok(seats);
    }
}

pub fn synthesize_radar_beamformer(
    angles: &[f64],
    sizes: &[usize],
    config: &ArrayConfig,
) -> Result<RadarBeamformer> {
    if angles.len() != sizes.len() || angles.is_empty() {
        return Err(Error::DimensionMismatch(format!(
            "{} pointing angles vs {} subarray sizes",
            angles.len(),
            sizes.len()
        )));
    }
    let sum: usize = sizes.iter().sum();
    if sum != config.n_antennas || sizes.contains(&0) {
        return Err(Error::DimensionMismatch(format!(
            "subarray sizes {sizes:?} do not partition {} antennas",
            config.n_antennas
        )));
    }
    let mut matrix = CMat::from_element(config.n_antennas, angles.len(), ZERO);
    let mut offset = 0;
    for (k, (&theta, &len)) in angles.iter().zip(sizes).enumerate() {
        let v = steering_vector(config.spacing, theta, len);
        matrix.view_mut((offset, k), (len, 1)).copy_from(&v);
        offset += len;
    }
    Ok(RadarBeamformer {
        matrix,
        pointing_angles: angles.to_vec(),
        subarray_sizes: sizes.to_vec(),
    })
}

/// Uniform grid over [-90, 90] degrees with the given step (degrees).
pub fn angle_grid(step_deg: f64) -> Vec<f64> {
    let n = (180.0 / step_deg).round() as usize;
    (0..=n)
        .map(|i| (-90.0 + 180.0 * i as f64 / n as f64).to_radians())
        .collect()
}

pub fn default_grid() -> Vec<f64> {
    angle_grid(0.1)
}

/// `P(theta) = a(theta)^H R a(theta)` on each grid angle.
pub fn beampattern(covariance: &CMat, config: &ArrayConfig, grid: &[f64]) -> Result<Beampattern> {
    let n = ensure_square(covariance, "covariance")?;
    if n != config.n_antennas {
        return Err(Error::DimensionMismatch(format!(
            "covariance is {n}x{n} but the array has {} antennas",
            config.n_antennas
        )));
    }
    let scale = covariance.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    let asym = hermitian_asymmetry(covariance);
    if asym > 1e-9 * scale {
        return Err(Error::NonHermitian(asym));
    }
    let min_eig = covariance
        .clone()
        .symmetric_eigenvalues()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if min_eig < -1e-9 * scale {
        return Err(Error::NotPsd(min_eig));
    }
    let power = grid
        .iter()
        .map(|&theta| {
            let a = steering_vector(config.spacing, theta, n);
            let ra = covariance * &a;
            let p: C64 = a.dotc(&ra);
            p.re.max(0.0)
        })
        .collect();
    Ok(Beampattern {
        grid: grid.to_vec(),
        power,
    })
}
