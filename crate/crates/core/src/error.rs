use thiserror::Error;

/// Errors raised by the beamforming pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("steering angle {0} rad is not strictly inside (-pi/2, pi/2)")]
    InvalidSteer(f64),
    #[error("stage count must be at least 1")]
    ZeroStages,
    #[error("trajectory needs at least two samples")]
    EmptyTrajectory,
    #[error("waypoint {0} coincides with the vehicle origin")]
    DegenerateWaypoint(usize),
    #[error("{total} antennas cannot cover {needed} subarrays")]
    InsufficientAntennas { total: usize, needed: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not Hermitian (asymmetry {0:.3e})")]
    NonHermitian(f64),
    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),
    #[error("channel has numerical rank {rank}, fewer than the {streams} requested streams")]
    RankDeficient { rank: usize, streams: usize },
    #[error("analog beamformer is rank deficient")]
    RankDeficientAnalog,
    #[error("weighted target vanishes; closed form undefined")]
    DegenerateTarget,
    #[error("retraction hit a zero entry at index {0}")]
    DegenerateRetraction(usize),
    #[error("semidefinite program appears infeasible: {0}")]
    Infeasible(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("total power must be positive")]
    ZeroPower,
    #[error("beampattern grids differ")]
    GridMismatch,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("{experiment}: {source}")]
    Experiment { experiment: String, source: Box<Error> },
}

impl Error {
    pub fn in_experiment(self, experiment: &str) -> Error {
        Error::Experiment {
            experiment: experiment.to_string(),
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
