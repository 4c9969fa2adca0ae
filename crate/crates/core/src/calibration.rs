//! Device calibration snapshots and their summary error statistics.
//!
//! A snapshot is a JSON document:
//!
//! ```json
//! {
//!   "device": "ibm_example",
//!   "meas_duration": 4.0,
//!   "quantum_volume": 64,
//!   "qubits": [{"prob_meas1_prep0": 0.01, "meas_error": 0.02, "p_id": 0.0003, "t_id": 0.035}],
//!   "couplings": [{"qubits": [0, 1], "cx_error": 0.01, "duration": 0.4}]
//! }
//! ```
//!
//! Durations share one arbitrary unit. `quantum_volume` is optional and
//! unknown keys are ignored.

#![allow(clippy::approx_constant)]

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::QubitId;
use crate::noise::{check_probability, idle_extrapolation, NoiseModel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QubitCalibration {
    pub prob_meas1_prep0: f64,
    pub meas_error: f64,
    pub p_id: f64,
    pub t_id: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingCalibration {
    pub qubits: [QubitId; 2],
    pub cx_error: f64,
    pub duration: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceCalibration {
    pub device: String,
    pub qubits: Vec<QubitCalibration>,
    pub couplings: Vec<CouplingCalibration>,
    pub meas_duration: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantum_volume: Option<u32>,
}

fn check_duration(what: String, value: f64, allow_zero: bool) -> Result<()> {
    let ok = value.is_finite() && (value > 0.0 || (allow_zero && value == 0.0));
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidDuration { what, value })
    }
}

impl DeviceCalibration {
    pub fn validate(&self) -> Result<()> {
        for (k, q) in self.qubits.iter().enumerate() {
            check_probability(&format!("qubit {k} prob_meas1_prep0"), q.prob_meas1_prep0)?;
            check_probability(&format!("qubit {k} meas_error"), q.meas_error)?;
            check_probability(&format!("qubit {k} p_id"), q.p_id)?;
            check_duration(format!("qubit {k} t_id"), q.t_id, false)?;
        }
        for c in &self.couplings {
            let [a, b] = c.qubits;
            check_probability(&format!("coupling {a}-{b} cx_error"), c.cx_error)?;
            check_duration(format!("coupling {a}-{b} duration"), c.duration, false)?;
        }
        check_duration("meas_duration".into(), self.meas_duration, true)
    }

    pub fn from_json(text: &str) -> Result<DeviceCalibration> {
        let cal: DeviceCalibration = serde_json::from_str(text)?;
        cal.validate()?;
        Ok(cal)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Measurement time plus the longest CX on the device.
    pub fn idle_duration(&self) -> f64 {
        self.meas_duration + self.couplings.iter().map(|c| c.duration).fold(0.0, f64::max)
    }

    /// Per-qubit idle error over [`idle_duration`](Self::idle_duration).
    pub fn idle_errors(&self) -> Result<Vec<f64>> {
        let t = self.idle_duration();
        self.qubits.iter().map(|q| idle_extrapolation(q.p_id, q.t_id, t)).collect()
    }

    /// Prep errors, measurement errors, CX errors, then idle errors.
    pub fn error_multiset(&self) -> Result<Vec<f64>> {
        let mut out: Vec<f64> = self.qubits.iter().map(|q| q.prob_meas1_prep0).collect();
        out.extend(self.qubits.iter().map(|q| q.meas_error));
        out.extend(self.couplings.iter().map(|c| c.cx_error));
        out.extend(self.idle_errors()?);
        Ok(out)
    }
}

pub fn load_calibration(path: impl AsRef<Path>) -> Result<DeviceCalibration> {
    DeviceCalibration::from_json(&std::fs::read_to_string(path)?)
}

pub fn save_calibration(cal: &DeviceCalibration, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, cal.to_json()?)?;
    Ok(())
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Mean and population standard deviation of the error multiset.
pub fn mean_error(cal: &DeviceCalibration) -> Result<(f64, f64)> {
    if cal.qubits.is_empty() {
        return Err(Error::EmptyCalibration);
    }
    cal.validate()?;
    let xs = cal.error_multiset()?;
    let m = mean(&xs);
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64;
    Ok((m, var.sqrt()))
}

/// Per-category means as a noise model. A device without couplings gets
/// `p_cx = 0`.
pub fn calibration_noise_model(cal: &DeviceCalibration) -> Result<NoiseModel> {
    if cal.qubits.is_empty() {
        return Err(Error::EmptyCalibration);
    }
    cal.validate()?;
    let prep: Vec<f64> = cal.qubits.iter().map(|q| q.prob_meas1_prep0).collect();
    let meas: Vec<f64> = cal.qubits.iter().map(|q| q.meas_error).collect();
    let cx: Vec<f64> = cal.couplings.iter().map(|c| c.cx_error).collect();
    Ok(NoiseModel {
        p_prep: mean(&prep),
        p_meas: mean(&meas),
        p_cx: if cx.is_empty() { 0.0 } else { mean(&cx) },
        p_idle: mean(&cal.idle_errors()?),
    })
}

/// Published `(device, ⟨p⟩ %, σ %, quantum volume)` summaries for the
/// snapshots used in the honeycomb hardware runs. The raw snapshots are not
/// available, so these are documentation only.
pub const HONEYCOMB_DEVICE_REFERENCES: &[(&str, f64, f64, Option<u32>)] = &[
    ("ibm_hanoi", 1.32, 1.39, Some(64)),
    ("ibm_auckland", 1.50, 1.71, Some(64)),
    ("ibmq_kolkata", 1.76, 3.14, Some(128)),
    ("ibm_peekskill", 1.81, 2.37, None),
    ("ibmq_montreal", 2.26, 2.09, Some(128)),
    ("ibmq_mumbai", 3.00, 1.73, Some(128)),
    ("ibmq_brooklyn", 3.02, 3.33, Some(32)),
    ("ibmq_washington", 3.13, 5.39, Some(64)),
    ("ibmq_toronto", 4.72, 6.37, Some(32)),
];

/// As [`HONEYCOMB_DEVICE_REFERENCES`], for the Color-code hardware runs.
pub const COLOR_DEVICE_REFERENCES: &[(&str, f64, f64, Option<u32>)] = &[
    ("ibm_hanoi", 1.40, 1.63, Some(64)),
    ("ibmq_kolkata", 1.47, 1.80, Some(128)),
    ("ibm_auckland", 1.82, 3.36, Some(64)),
    ("ibm_peekskill", 2.16, 3.06, None),
    ("ibmq_montreal", 2.26, 2.09, Some(128)),
    ("ibmq_mumbai", 2.38, 2.04, Some(128)),
    ("ibmq_brooklyn", 2.78, 2.96, Some(32)),
    ("ibm_washington", 3.10, 4.78, Some(64)),
    ("ibmq_montreal", 4.36, 7.82, Some(128)),
];
