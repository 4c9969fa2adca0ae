//! Simulation of the honeycomb Floquet code and the Floquet Color code on
//! heavy-hex device layouts: lattice construction, syndrome-extraction
//! circuits, circuit-level noise, stabilizer simulation and detection-rate
//! analysis.

pub mod analysis;
pub mod calibration;
pub mod circuit;
pub mod codes;
pub mod error;
pub mod lattice;
pub mod noise;
pub mod pauli;
pub mod simulator;

pub use analysis::{aggregate_bars, detection_rates, sweep, DetectionReport, Experiment};
pub use circuit::{schedule_rounds, Circuit, Instruction};
pub use codes::{verify_detectors, CodeKind, Detector, RoundBasis, RoundSpec};
pub use error::{Error, Result};
pub use lattice::{build_layout, build_patch, Color, Layout, Pauli};
pub use noise::{apply_noise, idle_extrapolation, NoiseModel};
pub use simulator::{dense_oracle_run, run_shot, run_shots, ShotTable};
