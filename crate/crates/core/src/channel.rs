//! Saleh-Valenzuela mmWave channel, SVD-optimal precoder/combiner and
//! additive time-varying perturbation.
//!
//! The channel is the bare sum of `L` rank-one path terms with no
//! `sqrt(N_t N_r / L)` normalization; SNR sweeps are sweeps of `p / sigma_n^2`
//! against this unnormalized matrix.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::array::steering_vector;
use crate::error::{Error, Result};
use crate::linalg::{CMat, SortedSvd, C64};
use crate::seeding::rng_from_seed;

/// Relative singular-value threshold used for numerical rank.
pub const RANK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    pub n_tx: usize,
    pub n_rx: usize,
    pub n_paths: usize,
    pub gain_variance: f64,
    /// Angle-of-departure/arrival support in radians.
    pub angle_range: (f64, f64),
    pub spacing: f64,
}

impl ChannelConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_tx == 0 || self.n_rx == 0 || self.n_paths == 0 {
            return Err(Error::InvalidParameter("channel dimensions must be >= 1".into()));
        }
        if !(self.gain_variance > 0.0) {
            return Err(Error::InvalidParameter("path gain variance must be positive".into()));
        }
        if !(self.angle_range.0 <= self.angle_range.1) || !(self.spacing > 0.0) {
            return Err(Error::InvalidParameter("bad angle range or spacing".into()));
        }
        Ok(())
    }
}

impl Default for ChannelConfig {
    fn default() -> Self {
        ChannelConfig {
            n_tx: 81,
            n_rx: 16,
            n_paths: 10,
            gain_variance: 1.0,
            angle_range: (-FRAC_PI_2, FRAC_PI_2),
            spacing: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Path {
    pub gain: C64,
    pub aod: f64,
    pub aoa: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    /// `N_r x N_t`.
    pub matrix: CMat,
    /// Present only while the matrix is an exact sum of path terms.
    pub paths: Option<Vec<Path>>,
}

impl Channel {
    pub fn from_paths(n_tx: usize, n_rx: usize, spacing: f64, paths: Vec<Path>) -> Self {
        let mut matrix = CMat::zeros(n_rx, n_tx);
        for p in &paths {
            let ar = steering_vector(spacing, p.aoa, n_rx);
            let at = steering_vector(spacing, p.aod, n_tx);
            matrix += (ar * at.adjoint()) * p.gain;
        }
        Channel {
            matrix,
            paths: Some(paths),
        }
    }

    pub fn from_matrix(matrix: CMat) -> Self {
        Channel { matrix, paths: None }
    }

    pub fn n_tx(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn n_rx(&self) -> usize {
        self.matrix.nrows()
    }
}

fn complex_gaussian<R: Rng>(rng: &mut R, variance: f64) -> C64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(s * re, s * im)
}

pub fn generate_channel(config: &ChannelConfig, seed: u64) -> Result<Channel> {
    config.validate()?;
    let mut rng = rng_from_seed(seed);
    let (lo, hi) = config.angle_range;
    let paths = (0..config.n_paths)
        .map(|_| {
            let gain = complex_gaussian(&mut rng, config.gain_variance);
            let aod = lo + (hi - lo) * rng.random::<f64>();
            let aoa = lo + (hi - lo) * rng.random::<f64>();
            Path { gain, aod, aoa }
        })
        .collect();
    Ok(Channel::from_paths(config.n_tx, config.n_rx, config.spacing, paths))
}

/// `H_d = H + H_e` with i.i.d. `CN(0, sigma_e^2)` entries in `H_e`.
///
/// The error draws depend only on `seed`, so the same seed at two levels of
/// `sigma_e` produces proportional perturbations.
pub fn perturb(channel: &Channel, sigma_e: f64, seed: u64) -> Result<Channel> {
    if !(sigma_e >= 0.0) {
        return Err(Error::InvalidParameter(format!("sigma_e = {sigma_e} must be >= 0")));
    }
    if sigma_e == 0.0 {
        return Ok(channel.clone());
    }
    let mut rng = rng_from_seed(seed);
    let (r, c) = channel.matrix.shape();
    let mut matrix = channel.matrix.clone();
    // column-major fill order
    for j in 0..c {
        for i in 0..r {
            matrix[(i, j)] += complex_gaussian(&mut rng, 1.0) * sigma_e;
        }
    }
    Ok(Channel::from_matrix(matrix))
}

/// SVD-derived optimal precoder (`N_t x N_s`) and combiner (`N_s x N_r`).
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalPair {
    pub f_opt: CMat,
    pub w_opt: CMat,
    /// All singular values of the channel, descending.
    pub singular_values: Vec<f64>,
}

pub fn optimal_beamformers(channel: &Channel, n_streams: usize) -> Result<OptimalPair> {
    if n_streams == 0 {
        return Err(Error::InvalidParameter("need at least one stream".into()));
    }
    let svd = SortedSvd::new(&channel.matrix);
    let rank = svd.rank(RANK_TOL);
    if n_streams > rank {
        return Err(Error::RankDeficient {
            rank,
            streams: n_streams,
        });
    }
    let f_opt = svd.v.columns(0, n_streams).into_owned();
    let w_opt = svd.u.columns(0, n_streams).adjoint();
    Ok(OptimalPair {
        f_opt,
        w_opt,
        singular_values: svd.singular_values,
    })
}

/// Plain-text matrix: a `rows cols` header line, then one line per row of
/// whitespace-separated `re,im` pairs. Values print in shortest round-trip
/// form so a write/read cycle is bit-exact.
pub fn write_matrix(m: &CMat) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} {}", m.nrows(), m.ncols());
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|j| format!("{:e},{:e}", m[(i, j)].re, m[(i, j)].im))
            .collect();
        let _ = writeln!(s, "{}", row.join(" "));
    }
    s
}

pub fn read_matrix(text: &str) -> Result<CMat> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header `{header}`"))))
        .collect::<Result<_>>()?;
    if dims.len() != 2 {
        return Err(Error::Parse(format!("bad header `{header}`")));
    }
    let (rows, cols) = (dims[0], dims[1]);
    let mut m = CMat::zeros(rows, cols);
    for i in 0..rows {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("missing row {i}")))?;
        let entries: Vec<&str> = line.split_whitespace().collect();
        if entries.len() != cols {
            return Err(Error::Parse(format!("row {i} has {} entries, expected {cols}", entries.len())));
        }
        for (j, tok) in entries.iter().enumerate() {
            let (re, im) = tok
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("entry `{tok}` is not re,im")))?;
            let re: f64 = re.parse().map_err(|_| Error::Parse(format!("bad number `{re}`")))?;
            let im: f64 = im.parse().map_err(|_| Error::Parse(format!("bad number `{im}`")))?;
            m[(i, j)] = C64::new(re, im);
        }
    }
    if lines.next().is_some() {
        return Err(Error::Parse("trailing rows after matrix".into()));
    }
    Ok(m)
}
