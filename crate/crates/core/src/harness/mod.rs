//! Experiment orchestration: scenario in, CSV tables out.
//!
//! Every random draw is keyed by `(master_seed, stream, realization)`, and
//! realizations are reduced in index order, so a table does not depend on
//! the number of worker threads.

mod config;

use std::path::{Path, PathBuf};

use rayon::prelude::*;

pub use config::{
    ArrayBlock, ChannelBlock, InitChoice, KinematicsBlock, PowerBlock, ScalingChoice, ScenarioConfig, SolverBlock,
    SolverMethod, SweepBlock, DEFAULTS,
};

use crate::array::{
    allocate_antennas, angle_grid, apportion, beampattern, pointing_angles, sensing_distances,
    synthesize_radar_beamformer, ArrayConfig, RadarBeamformer,
};
use crate::channel::{generate_channel, optimal_beamformers, perturb, Channel, ChannelConfig, OptimalPair};
use crate::error::{Error, Result};
use crate::fd::{align_radar_target, closed_form_solution, sdr_beamformer, RadarScaling, SdrOptions, TradeoffConfig};
use crate::hybrid::{alternating_minimize, svd_phase_init, AnalogInit, HybridBeamformer, HybridConfig};
use crate::kinematics::{predict_aoi, predict_trajectory, Aoi, ControlInput, Trajectory, VehicleGeometry, VehicleState, Waypoint};
use crate::linalg::CMat;
use crate::manifold::CgOptions;
use crate::metrics::{
    energy_efficiency, power_sum, spectral_efficiency_mismatched, Architecture, LinkBudget,
    PowerModel,
};
use crate::seeding::{derive_seed, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Aoi,
    Beampattern,
    SeSweep,
    EeSweep,
    TvSweep,
}

impl Experiment {
    pub const ALL: [Experiment; 5] = [
        Experiment::Aoi,
        Experiment::Beampattern,
        Experiment::SeSweep,
        Experiment::EeSweep,
        Experiment::TvSweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Aoi => "aoi",
            Experiment::Beampattern => "beampattern",
            Experiment::SeSweep => "se-sweep",
            Experiment::EeSweep => "ee-sweep",
            Experiment::TvSweep => "tv-sweep",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.name() == name)
    }

    pub fn file_name(self) -> String {
        format!("{}.csv", self.name().replace('-', "_"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(u64),
    Real(f64),
    Empty,
}

/// Twelve significant digits, shortest form.
pub fn format_real(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    format!("{rounded:?}")
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Real(x) => format_real(*x),
            Cell::Empty => String::new(),
        }
    }
}

fn text(s: &str) -> Cell {
    Cell::Text(s.to_string())
}

fn opt_real(x: Option<f64>) -> Cell {
    x.map_or(Cell::Empty, Cell::Real)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).map_err(|e| Error::Io(e.to_string()))?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))
                .map_err(|e| Error::Io(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()?)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Allocation {
    /// Subarray sizes proportional to the fourth power of sensing distance.
    Vba,
    /// Equal subarray sizes.
    Uniform,
}

/// Everything that does not depend on the channel draw.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub trajectory: Trajectory,
    pub aoi: Aoi,
    pub array: ArrayConfig,
    pub channel: ChannelConfig,
    pub radar: RadarBeamformer,
    pub uniform: RadarBeamformer,
    /// `N_t x N_s` radar targets after alignment and scaling.
    pub radar_target: CMat,
    pub uniform_target: CMat,
}

/// One channel realization with its SVD-optimal pair.
#[derive(Debug, Clone)]
pub struct Link {
    pub index: u64,
    pub channel: Channel,
    pub pair: OptimalPair,
}

fn trajectory_and_aoi(config: &ScenarioConfig) -> Result<(Trajectory, Aoi)> {
    let k = &config.kinematics;
    let state = VehicleState::new(k.x, k.y, k.speed, k.heading_deg.to_radians());
    let input = ControlInput {
        accel: k.accel,
        steer: k.steer_deg.to_radians(),
    };
    let geometry = VehicleGeometry::new(k.wheelbase, k.safety_radius)?;
    let trajectory = predict_trajectory(&state, &input, &geometry, k.horizon, k.stages)?;
    let aoi = match &k.waypoints {
        Some(points) => Aoi {
            waypoints: points
                .iter()
                .map(|[dx, dy]| Waypoint {
                    dx: *dx,
                    dy: *dy,
                    radius: k.safety_radius,
                })
                .collect(),
        },
        None => predict_aoi(&trajectory, &geometry)?,
    };
    Ok((trajectory, aoi))
}

/// Same pointing angles as the proposed design with the antennas split evenly.
pub fn benchmark_uniform(config: &ScenarioConfig) -> Result<RadarBeamformer> {
    let (_, aoi) = trajectory_and_aoi(config)?;
    let array = ArrayConfig::new(config.array.n_tx, config.array.spacing)?;
    uniform_for(&pointing_angles(&aoi)?, &array)
}

fn uniform_for(angles: &[f64], array: &ArrayConfig) -> Result<RadarBeamformer> {
    let sizes = apportion(&vec![1.0; angles.len()], array.n_antennas)?;
    synthesize_radar_beamformer(angles, &sizes, array)
}

impl Scenario {
    pub fn prepare(config: &ScenarioConfig) -> Result<Self> {
        config.validate()?;
        let (trajectory, aoi) = trajectory_and_aoi(config)?;
        let array = ArrayConfig::new(config.array.n_tx, config.array.spacing)?;
        let c = &config.channel;
        let channel = ChannelConfig {
            n_tx: config.array.n_tx,
            n_rx: c.n_rx,
            n_paths: c.n_paths,
            gain_variance: c.gain_variance,
            angle_range: (c.angle_min_deg.to_radians(), c.angle_max_deg.to_radians()),
            spacing: config.array.spacing,
        };
        channel.validate()?;
        let angles = pointing_angles(&aoi)?;
        let sizes = allocate_antennas(&sensing_distances(&aoi), array.n_antennas)?;
        let radar = synthesize_radar_beamformer(&angles, &sizes, &array)?;
        let uniform = uniform_for(&angles, &array)?;
        let scaling = match config.solver.radar_scaling {
            ScalingChoice::PowerMatched => RadarScaling::PowerMatched,
            ScalingChoice::Unscaled => RadarScaling::Unscaled,
        };
        let ns = config.solver.n_streams;
        let radar_target = align_radar_target(&radar.matrix, ns, scaling)?;
        let uniform_target = align_radar_target(&uniform.matrix, ns, scaling)?;
        Ok(Scenario {
            config: config.clone(),
            trajectory,
            aoi,
            array,
            channel,
            radar,
            uniform,
            radar_target,
            uniform_target,
        })
    }

    fn master(&self) -> u64 {
        self.config.sweep.master_seed
    }

    pub fn link(&self, index: u64) -> Result<Link> {
        let channel = generate_channel(&self.channel, derive_seed(self.master(), Stream::Channel, index))?;
        let pair = optimal_beamformers(&channel, self.config.solver.n_streams)?;
        Ok(Link { index, channel, pair })
    }

    pub fn target(&self, allocation: Allocation) -> &CMat {
        match allocation {
            Allocation::Vba => &self.radar_target,
            Allocation::Uniform => &self.uniform_target,
        }
    }

    pub fn full_digital(&self, link: &Link, allocation: Allocation, rho: f64) -> Result<CMat> {
        let s = &self.config.solver;
        let tradeoff = TradeoffConfig::new(rho, s.n_streams)?;
        let target = self.target(allocation);
        match s.method {
            SolverMethod::ClosedForm => Ok(closed_form_solution(&link.pair.f_opt, target, &tradeoff)?.matrix),
            SolverMethod::Sdr => {
                let opts = SdrOptions {
                    sdp_tol: s.sdp_tol,
                    max_iter: s.sdp_max_iter,
                    randomizations: s.randomizations,
                    seed: derive_seed(self.master(), Stream::Oracle, link.index),
                };
                Ok(sdr_beamformer(&link.pair.f_opt, target, &tradeoff, &opts)?.beamformer.matrix)
            }
        }
    }

    pub fn hybrid(&self, link: &Link, allocation: Allocation, rho: f64) -> Result<HybridBeamformer> {
        let s = &self.config.solver;
        let mut cfg = HybridConfig::new(
            s.n_rf,
            rho,
            s.n_streams,
            derive_seed(self.master(), Stream::AnalogInit, link.index),
        )?;
        cfg.outer_max = s.outer_max;
        cfg.outer_tol = s.outer_tol;
        cfg.cg = CgOptions {
            tol: s.cg_tol,
            max_iter: s.cg_max_iter,
            ..CgOptions::default()
        };
        if s.hybrid_init == InitChoice::Svd {
            cfg.init = AnalogInit::Given(svd_phase_init(&link.channel, s.n_rf)?);
        }
        alternating_minimize(&cfg, &link.pair.f_opt, self.target(allocation))
    }

    /// Precoder for a named series.
    pub fn design(&self, link: &Link, series: Series, rho: f64) -> Result<CMat> {
        match series {
            Series::Optimal => Ok(link.pair.f_opt.clone()),
            Series::RadarTarget => Ok(self.radar_target.clone()),
            Series::FullDigital => self.full_digital(link, Allocation::Vba, rho),
            Series::Hybrid => Ok(self.hybrid(link, Allocation::Vba, rho)?.precoder()),
            Series::UniformFullDigital => self.full_digital(link, Allocation::Uniform, rho),
            Series::UniformHybrid => Ok(self.hybrid(link, Allocation::Uniform, rho)?.precoder()),
        }
    }

    fn budgets(&self) -> Result<Vec<LinkBudget>> {
        self.config.sweep.snr_db.iter().map(|&db| LinkBudget::from_snr_db(db)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Series {
    Optimal,
    RadarTarget,
    FullDigital,
    Hybrid,
    UniformFullDigital,
    UniformHybrid,
}

impl Series {
    pub fn name(self) -> &'static str {
        match self {
            Series::Optimal => "optimal",
            Series::RadarTarget => "radar-target",
            Series::FullDigital => "full-digital",
            Series::Hybrid => "hybrid",
            Series::UniformFullDigital => "uniform-full-digital",
            Series::UniformHybrid => "uniform-hybrid",
        }
    }

    /// Whether the design depends on the trade-off weight.
    pub fn uses_rho(self) -> bool {
        !matches!(self, Series::Optimal | Series::RadarTarget)
    }
}

/// Runs `f` for every realization and returns the results in index order.
fn per_realization<T: Send>(n: usize, f: impl Fn(u64) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    let out: Vec<Result<T>> = (0..n as u64).into_par_iter().map(&f).collect();
    out.into_iter().collect()
}

/// Column means of equal-length rows, summed in row order.
fn column_means(rows: &[Vec<f64>]) -> Vec<f64> {
    let width = rows.first().map_or(0, Vec::len);
    let mut acc = vec![0.0; width];
    for r in rows {
        for (a, v) in acc.iter_mut().zip(r) {
            *a += v;
        }
    }
    let n = rows.len().max(1) as f64;
    acc.into_iter().map(|a| a / n).collect()
}

/// One averaged point of a spectral-efficiency sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SePoint {
    pub series: Series,
    pub rho: Option<f64>,
    pub sigma_e: Option<f64>,
    pub snr_db: f64,
    pub mean: f64,
}

/// Averaged spectral efficiency for each `(series, rho)` design at every SNR,
/// optionally under channel mismatch `sigma_e`.
pub fn spectral_sweep(
    scenario: &Scenario,
    designs: &[(Series, Option<f64>)],
    sigma_e: &[Option<f64>],
) -> Result<Vec<SePoint>> {
    let budgets = scenario.budgets()?;
    let master = scenario.master();
    let rho_default = scenario.config.solver.rho;
    let rows = per_realization(scenario.config.sweep.realizations, |i| {
        let link = scenario.link(i)?;
        let precoders = designs
            .iter()
            .map(|&(s, rho)| scenario.design(&link, s, rho.unwrap_or(rho_default)))
            .collect::<Result<Vec<_>>>()?;
        let mut values = Vec::with_capacity(sigma_e.len() * designs.len() * budgets.len());
        for level in sigma_e {
            let actual = match level {
                Some(s) if *s > 0.0 => perturb(&link.channel, *s, derive_seed(master, Stream::Perturbation, i))?,
                _ => link.channel.clone(),
            };
            for f in &precoders {
                for b in &budgets {
                    values.push(spectral_efficiency_mismatched(
                        &link.channel.matrix,
                        &actual.matrix,
                        &link.pair.w_opt,
                        f,
                        b,
                    )?);
                }
            }
        }
        Ok(values)
    })?;
    let means = column_means(&rows);
    let mut out = Vec::with_capacity(means.len());
    let mut it = means.into_iter();
    for &level in sigma_e {
        for &(series, rho) in designs {
            for &snr_db in &scenario.config.sweep.snr_db {
                out.push(SePoint {
                    series,
                    rho,
                    sigma_e: level,
                    snr_db,
                    mean: it.next().expect("one mean per point"),
                });
            }
        }
    }
    Ok(out)
}

fn sweep_rhos(config: &ScenarioConfig) -> Vec<f64> {
    let mut r = config.sweep.rho.clone();
    r.push(config.solver.rho);
    r.sort_by(f64::total_cmp);
    r.dedup();
    r
}

pub fn se_sweep(scenario: &Scenario) -> Result<Vec<SePoint>> {
    let mut designs = vec![(Series::Optimal, None), (Series::RadarTarget, None)];
    for rho in sweep_rhos(&scenario.config) {
        for s in [
            Series::FullDigital,
            Series::Hybrid,
            Series::UniformFullDigital,
            Series::UniformHybrid,
        ] {
            designs.push((s, Some(rho)));
        }
    }
    spectral_sweep(scenario, &designs, &[None])
}

pub fn tv_sweep(scenario: &Scenario) -> Result<Vec<SePoint>> {
    let rho = Some(scenario.config.solver.rho);
    let designs = [
        (Series::Optimal, None),
        (Series::FullDigital, rho),
        (Series::Hybrid, rho),
        (Series::UniformFullDigital, rho),
        (Series::UniformHybrid, rho),
    ];
    let levels: Vec<Option<f64>> = scenario.config.sweep.sigma_e.iter().map(|&s| Some(s)).collect();
    spectral_sweep(scenario, &designs, &levels)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EePoint {
    pub series: Series,
    pub snr_db: f64,
    pub se: f64,
    pub power: f64,
    pub ee: f64,
}

pub fn ee_sweep(scenario: &Scenario) -> Result<Vec<EePoint>> {
    let rho = Some(scenario.config.solver.rho);
    let se = spectral_sweep(scenario, &[(Series::FullDigital, rho), (Series::Hybrid, rho)], &[None])?;
    let p = &scenario.config.power;
    let model = PowerModel {
        p_bb: p.p_bb,
        p_rf: p.p_rf,
        p_pa: p.p_pa,
        p_ps: p.p_ps,
    };
    let nt = scenario.array.n_antennas;
    let nrf = scenario.config.solver.n_rf;
    se.into_iter()
        .map(|pt| {
            let arch = if pt.series == Series::Hybrid {
                Architecture::Hybrid
            } else {
                Architecture::FullDigital
            };
            let power = power_sum(arch, nt, nrf, &model)?;
            Ok(EePoint {
                series: pt.series,
                snr_db: pt.snr_db,
                se: pt.mean,
                power,
                ee: energy_efficiency(pt.mean, power)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatternSeries {
    pub series: &'static str,
    pub rho: Option<f64>,
    pub pattern: crate::array::Beampattern,
}

/// Radar target, uniform benchmark and full-digital designs on the first
/// channel realization for each configured weight.
pub fn beampatterns(scenario: &Scenario) -> Result<Vec<PatternSeries>> {
    let grid = angle_grid(scenario.config.array.grid_step_deg);
    let pattern_of = |f: &CMat| beampattern(&(f * f.adjoint()), &scenario.array, &grid);
    let mut out = vec![
        PatternSeries {
            series: "radar-target",
            rho: None,
            pattern: pattern_of(&scenario.radar_target)?,
        },
        PatternSeries {
            series: "uniform-benchmark",
            rho: None,
            pattern: pattern_of(&scenario.uniform_target)?,
        },
    ];
    let link = scenario.link(0)?;
    let rhos = &scenario.config.sweep.beampattern_rho;
    let designs = rhos
        .par_iter()
        .map(|&rho| scenario.full_digital(&link, Allocation::Vba, rho))
        .collect::<Vec<_>>();
    for (&rho, f) in rhos.iter().zip(designs) {
        out.push(PatternSeries {
            series: "full-digital",
            rho: Some(rho),
            pattern: pattern_of(&f?)?,
        });
    }
    Ok(out)
}

fn aoi_table(scenario: &Scenario) -> Result<Table> {
    let header = vec![
        "kind", "index", "t", "x", "y", "heading_deg", "speed", "pointing_deg", "distance", "antennas", "antennas_uniform",
    ];
    let mut rows = Vec::new();
    for (i, (t, s)) in scenario.trajectory.samples.iter().enumerate() {
        rows.push(vec![
            text("trajectory"),
            Cell::Int(i as u64),
            Cell::Real(*t),
            Cell::Real(s.x),
            Cell::Real(s.y),
            Cell::Real(s.heading.to_degrees()),
            Cell::Real(s.v),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
        ]);
    }
    let origin = scenario.trajectory.samples[0].1;
    let angles = pointing_angles(&scenario.aoi)?;
    let distances = sensing_distances(&scenario.aoi);
    for (k, w) in scenario.aoi.waypoints.iter().enumerate() {
        rows.push(vec![
            text("aoi"),
            Cell::Int(k as u64 + 1),
            Cell::Empty,
            Cell::Real(origin.x + w.dx),
            Cell::Real(origin.y + w.dy),
            Cell::Empty,
            Cell::Empty,
            Cell::Real(angles[k].to_degrees()),
            Cell::Real(distances[k]),
            Cell::Int(scenario.radar.subarray_sizes[k] as u64),
            Cell::Int(scenario.uniform.subarray_sizes[k] as u64),
        ]);
    }
    Ok(Table { header, rows })
}

fn pattern_table(series: &[PatternSeries]) -> Table {
    let header = vec!["series", "rho", "theta_deg", "power_linear", "power_db"];
    let mut rows = Vec::new();
    for s in series {
        for (theta, p) in s.pattern.grid.iter().zip(&s.pattern.power) {
            rows.push(vec![
                text(s.series),
                opt_real(s.rho),
                Cell::Real(theta.to_degrees()),
                Cell::Real(*p),
                Cell::Real(10.0 * p.max(1e-300).log10()),
            ]);
        }
    }
    Table { header, rows }
}

fn se_table(points: &[SePoint], scenario: &Scenario, with_sigma: bool) -> Table {
    let mut header = vec!["series", "rho"];
    if with_sigma {
        header.push("sigma_e");
    }
    header.extend(["snr_db", "se_mean", "realizations", "master_seed"]);
    let rows = points
        .iter()
        .map(|p| {
            let mut r = vec![text(p.series.name()), opt_real(p.rho)];
            if with_sigma {
                r.push(opt_real(p.sigma_e));
            }
            r.extend([
                Cell::Real(p.snr_db),
                Cell::Real(p.mean),
                Cell::Int(scenario.config.sweep.realizations as u64),
                Cell::Int(scenario.master()),
            ]);
            r
        })
        .collect();
    Table { header, rows }
}

fn ee_table(points: &[EePoint], scenario: &Scenario) -> Table {
    let header = vec!["series", "rho", "snr_db", "se_mean", "power_w", "ee", "realizations", "master_seed"];
    let rows = points
        .iter()
        .map(|p| {
            vec![
                text(p.series.name()),
                Cell::Real(scenario.config.solver.rho),
                Cell::Real(p.snr_db),
                Cell::Real(p.se),
                Cell::Real(p.power),
                Cell::Real(p.ee),
                Cell::Int(scenario.config.sweep.realizations as u64),
                Cell::Int(scenario.master()),
            ]
        })
        .collect();
    Table { header, rows }
}

/// Runs one experiment and returns its table.
pub fn run(experiment: Experiment, config: &ScenarioConfig) -> Result<Table> {
    let wrap = |e: Error| e.in_experiment(experiment.name());
    let scenario = Scenario::prepare(config).map_err(wrap)?;
    match experiment {
        Experiment::Aoi => aoi_table(&scenario),
        Experiment::Beampattern => beampatterns(&scenario).map(|s| pattern_table(&s)),
        Experiment::SeSweep => se_sweep(&scenario).map(|p| se_table(&p, &scenario, false)),
        Experiment::EeSweep => ee_sweep(&scenario).map(|p| ee_table(&p, &scenario)),
        Experiment::TvSweep => tv_sweep(&scenario).map(|p| se_table(&p, &scenario, true)),
    }
    .map_err(wrap)
}

/// Runs an experiment and writes `<out_dir>/<name>.csv`.
pub fn run_to_dir(experiment: Experiment, config: &ScenarioConfig, out_dir: &Path) -> Result<PathBuf> {
    let table = run(experiment, config)?;
    std::fs::create_dir_all(out_dir)?;
    let path = out_dir.join(experiment.file_name());
    table.write(&path)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ScenarioConfig {
        let mut c = ScenarioConfig::default();
        c.array.n_tx = 16;
        c.channel.n_rx = 8;
        c.channel.n_paths = 6;
        c.sweep.realizations = 3;
        c.sweep.snr_db = vec![-10.0, 0.0];
        c.sweep.rho = vec![0.5];
        c.sweep.sigma_e = vec![0.0, 0.5];
        c.array.grid_step_deg = 1.0;
        c
    }

    #[test]
    fn real_formatting() {
        assert_eq!(format_real(0.5), "0.5");
        assert_eq!(format_real(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_real(-40.0), "-40.0");
        assert_eq!(format_real(1.23456789012345e-20), "1.23456789012e-20");
    }

    #[test]
    fn experiment_names_round_trip() {
        for e in Experiment::ALL {
            assert_eq!(Experiment::from_name(e.name()), Some(e));
        }
        assert_eq!(Experiment::SeSweep.file_name(), "se_sweep.csv");
    }

    #[test]
    fn benchmark_uniform_splits_evenly() {
        let b = benchmark_uniform(&ScenarioConfig::default()).unwrap();
        assert_eq!(b.subarray_sizes, vec![27, 27, 27]);
    }

    #[test]
    fn tables_have_fixed_shapes() {
        let c = small();
        let aoi = run(Experiment::Aoi, &c).unwrap();
        assert_eq!(aoi.rows.len(), 3 + 1 + 3);
        let se = run(Experiment::SeSweep, &c).unwrap();
        assert_eq!(se.rows.len(), (2 + 4) * 2);
        let tv = run(Experiment::TvSweep, &c).unwrap();
        assert_eq!(tv.rows.len(), 2 * 5 * 2);
        let ee = run(Experiment::EeSweep, &c).unwrap();
        assert_eq!(ee.rows.len(), 2 * 2);
        let bp = run(Experiment::Beampattern, &c).unwrap();
        assert_eq!(bp.rows.len(), 5 * 181);
    }

    #[test]
    fn seed_changes_values_not_shape() {
        let a = small();
        let mut b = small();
        b.sweep.master_seed += 1;
        let (ta, tb) = (run(Experiment::SeSweep, &a).unwrap(), run(Experiment::SeSweep, &b).unwrap());
        assert_eq!(ta.header, tb.header);
        assert_eq!(ta.rows.len(), tb.rows.len());
        assert_ne!(ta.to_csv().unwrap(), tb.to_csv().unwrap());
    }

    #[test]
    fn errors_carry_experiment_name() {
        let mut c = small();
        c.solver.n_streams = 9;
        c.solver.n_rf = 9;
        let err = run(Experiment::SeSweep, &c).unwrap_err();
        assert!(err.to_string().starts_with("se-sweep"), "{err}");
    }
}
