use thiserror::Error;

use crate::lattice::{Color, Pauli};

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown device `{0}` (expected one of falcon27, hummingbird65, eagle127)")]
    UnknownDevice(String),

    #[error("patch dimensions must be positive, got {rows}x{cols}")]
    InvalidPatch { rows: usize, cols: usize },

    #[error("schedule is empty")]
    EmptySchedule,

    #[error("schedule measures no links of this layout")]
    NoLinksScheduled,

    #[error("round {round} repeats color {color} within one layer")]
    ColorRepeatedInLayer { round: usize, color: Color },

    #[error("{code} schedule needs at least {min} rounds, got {got}")]
    TooFewRounds { code: &'static str, min: usize, got: usize },

    #[error("round {round}: basis {basis} is not valid for the {code} code")]
    InvalidBasis { round: usize, basis: String, code: &'static str },

    #[error("link basis {0:?} cannot be used here")]
    UnsupportedBasis(Pauli),

    #[error("record index {index} out of range ({num_records} records)")]
    RecordOutOfRange { index: usize, num_records: usize },

    #[error("dense simulation supports at most {max} qubits, circuit has {got}")]
    TooManyQubits { max: usize, got: usize },

    #[error("probability {value} for {what} is outside [0, 1]")]
    ProbabilityOutOfRange { what: String, value: f64 },

    #[error("invalid depolarizing strength {0} (must lie in [0, 3/4])")]
    InvalidDepolarizing(f64),

    #[error("invalid duration {value} for {what}")]
    InvalidDuration { what: String, value: f64 },

    #[error("calibration has no qubits")]
    EmptyCalibration,

    #[error("report has no plaquette rates")]
    EmptyReport,

    #[error("at least one shot is required")]
    NoShots,

    #[error("p list is empty")]
    EmptySweep,

    #[error("malformed shot table: {0}")]
    ShotFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
