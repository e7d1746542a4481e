use std::path::PathBuf;

use thiserror::Error;

/// Which part of a time step an error came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Init,
    Rk(usize),
    Filter(usize),
    Diagnostics,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Stage::Init => write!(f, "init"),
            Stage::Rk(s) => write!(f, "rk stage {s}"),
            Stage::Filter(s) => write!(f, "oe filter (stage {s})"),
            Stage::Diagnostics => write!(f, "diagnostics"),
        }
    }
}

#[derive(Debug, Error)]
pub enum MhdError {
    #[error("non-positive density {rho:e}")]
    NonPositiveDensity { rho: f64 },

    #[error("negative thermal pressure {pres:e}")]
    NegativePressure { pres: f64 },

    #[error("inadmissible state in cell ({i}, {j}) during {stage}: {source}")]
    NonFiniteResidual {
        i: usize,
        j: usize,
        stage: Stage,
        #[source]
        source: Box<MhdError>,
    },

    #[error("inadmissible state in cell ({i}, {j}) during {stage}: {source}")]
    InadmissibleState {
        i: usize,
        j: usize,
        stage: Stage,
        #[source]
        source: Box<MhdError>,
    },

    #[error("non-finite wave speed while computing the time step")]
    NonFiniteSpeed,

    #[error("inadmissible initial data at ({x}, {y}): {source}")]
    InadmissibleInitialData {
        x: f64,
        y: f64,
        #[source]
        source: Box<MhdError>,
    },

    #[error("error norms must be positive, got {0:e}")]
    NonPositiveError(f64),

    #[error("unknown case `{0}` (expected one of vortex, orszag_tang, rotor, blast, loop, shock_cloud)")]
    UnknownCase(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl MhdError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        MhdError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = MhdError> = std::result::Result<T, E>;
