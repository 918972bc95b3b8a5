//! Scenario configuration: a sectioned TOML file layered over embedded defaults.

use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use crate::error::{Error, Result};

pub const DEFAULTS: &str = include_str!("defaults.toml");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KinematicsBlock {
    pub x: f64,
    pub y: f64,
    pub speed: f64,
    pub heading_deg: f64,
    pub accel: f64,
    pub steer_deg: f64,
    pub wheelbase: f64,
    pub safety_radius: f64,
    pub horizon: f64,
    pub stages: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub waypoints: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrayBlock {
    pub n_tx: usize,
    pub spacing: f64,
    pub grid_step_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelBlock {
    pub n_rx: usize,
    pub n_paths: usize,
    pub gain_variance: f64,
    pub angle_min_deg: f64,
    pub angle_max_deg: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverMethod {
    ClosedForm,
    Sdr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScalingChoice {
    PowerMatched,
    Unscaled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitChoice {
    Random,
    Svd,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverBlock {
    pub rho: f64,
    pub n_streams: usize,
    pub method: SolverMethod,
    pub radar_scaling: ScalingChoice,
    pub n_rf: usize,
    pub outer_max: usize,
    pub outer_tol: f64,
    pub cg_tol: f64,
    pub cg_max_iter: usize,
    pub hybrid_init: InitChoice,
    pub sdp_tol: f64,
    pub sdp_max_iter: usize,
    pub randomizations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    pub master_seed: u64,
    pub realizations: usize,
    pub snr_db: Vec<f64>,
    pub rho: Vec<f64>,
    pub sigma_e: Vec<f64>,
    pub beampattern_rho: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerBlock {
    pub p_bb: f64,
    pub p_rf: f64,
    pub p_pa: f64,
    pub p_ps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub kinematics: KinematicsBlock,
    pub array: ArrayBlock,
    pub channel: ChannelBlock,
    pub solver: SolverBlock,
    pub sweep: SweepBlock,
    pub power: PowerBlock,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        toml::from_str(DEFAULTS).expect("embedded defaults parse")
    }
}

fn merge(base: &mut Table, over: Table) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(Value::Table(b)), Value::Table(o)) => merge(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

fn field_err(field: &str, why: impl std::fmt::Display) -> Error {
    Error::Config(format!("{field}: {why}"))
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(field_err(field, format!("must be positive, got {v}")))
    }
}

fn unit_interval(field: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(field_err(field, format!("must lie in [0, 1], got {v}")))
    }
}

impl ScenarioConfig {
    /// Parses a scenario file; absent keys fall back to the defaults except
    /// `sweep.master_seed`, which the file must set.
    pub fn from_toml(text: &str) -> Result<Self> {
        let mut base: Table = DEFAULTS.parse().expect("embedded defaults parse");
        if let Some(Value::Table(sweep)) = base.get_mut("sweep") {
            sweep.remove("master_seed");
        }
        let user: Table = text.parse().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        merge(&mut base, user);
        let cfg: ScenarioConfig = Value::Table(base)
            .try_into()
            .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let k = &self.kinematics;
        positive("kinematics.wheelbase", k.wheelbase)?;
        positive("kinematics.safety_radius", k.safety_radius)?;
        positive("kinematics.horizon", k.horizon)?;
        if k.speed < 0.0 {
            return Err(field_err("kinematics.speed", "must be non-negative"));
        }
        if !(k.steer_deg.abs() < 90.0) {
            return Err(field_err("kinematics.steer_deg", "must lie strictly inside (-90, 90)"));
        }
        if k.stages == 0 {
            return Err(field_err("kinematics.stages", "must be at least 1"));
        }
        if let Some(w) = &k.waypoints {
            if w.is_empty() {
                return Err(field_err("kinematics.waypoints", "must not be empty when given"));
            }
        }
        let a = &self.array;
        positive("array.spacing", a.spacing)?;
        positive("array.grid_step_deg", a.grid_step_deg)?;
        if a.n_tx == 0 {
            return Err(field_err("array.n_tx", "must be at least 1"));
        }
        let c = &self.channel;
        positive("channel.gain_variance", c.gain_variance)?;
        if c.n_rx == 0 || c.n_paths == 0 {
            return Err(field_err("channel.n_rx/n_paths", "must be at least 1"));
        }
        if !(c.angle_min_deg < c.angle_max_deg) {
            return Err(field_err("channel.angle_min_deg", "must be below angle_max_deg"));
        }
        let s = &self.solver;
        unit_interval("solver.rho", s.rho)?;
        if s.n_streams == 0 || s.n_streams > a.n_tx.min(c.n_rx) {
            return Err(field_err("solver.n_streams", "must be between 1 and min(n_tx, n_rx)"));
        }
        if s.n_rf < s.n_streams || s.n_rf > a.n_tx {
            return Err(field_err("solver.n_rf", "must satisfy n_streams <= n_rf <= n_tx"));
        }
        if s.outer_max == 0 || s.cg_max_iter == 0 || s.sdp_max_iter == 0 {
            return Err(field_err("solver", "iteration caps must be positive"));
        }
        positive("solver.outer_tol", s.outer_tol)?;
        positive("solver.cg_tol", s.cg_tol)?;
        positive("solver.sdp_tol", s.sdp_tol)?;
        let w = &self.sweep;
        if w.realizations == 0 {
            return Err(field_err("sweep.realizations", "must be at least 1"));
        }
        if w.snr_db.is_empty() || w.snr_db.iter().any(|v| !v.is_finite()) {
            return Err(field_err("sweep.snr_db", "needs finite values"));
        }
        for &r in w.rho.iter().chain(&w.beampattern_rho) {
            unit_interval("sweep.rho", r)?;
        }
        if w.sigma_e.iter().any(|v| !(*v >= 0.0)) {
            return Err(field_err("sweep.sigma_e", "values must be non-negative"));
        }
        let p = &self.power;
        if [p.p_bb, p.p_rf, p.p_pa, p.p_ps].iter().any(|v| !(*v >= 0.0)) {
            return Err(field_err("power", "component powers must be non-negative"));
        }
        Ok(())
    }
}
