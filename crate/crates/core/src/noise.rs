//! Circuit-level Pauli noise.

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Instruction};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NoiseModel {
    pub p_prep: f64,
    pub p_meas: f64,
    pub p_cx: f64,
    pub p_idle: f64,
}

impl NoiseModel {
    pub fn uniform(p: f64) -> NoiseModel {
        NoiseModel { p_prep: p, p_meas: p, p_cx: p, p_idle: p }
    }

    pub fn noiseless() -> NoiseModel {
        NoiseModel::default()
    }

    pub fn validate(&self) -> Result<()> {
        for (what, value) in
            [("p_prep", self.p_prep), ("p_meas", self.p_meas), ("p_cx", self.p_cx), ("p_idle", self.p_idle)]
        {
            check_probability(what, value)?;
        }
        Ok(())
    }

    /// Set when all four fields agree.
    pub fn as_uniform(&self) -> Option<f64> {
        let p = self.p_prep;
        (self.p_meas == p && self.p_cx == p && self.p_idle == p).then_some(p)
    }
}

pub(crate) fn check_probability(what: &str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::ProbabilityOutOfRange { what: what.to_string(), value })
    }
}

/// Inserts noise channels around the circuit's instructions:
/// an X flip after each reset and before each measurement, a two-qubit
/// depolarizing channel after each CX, and a one-qubit depolarizing channel
/// on each qubit named by an idle window. Channels are inserted even when
/// their probability is zero.
pub fn apply_noise(circuit: &Circuit, model: &NoiseModel) -> Result<Circuit> {
    model.validate()?;
    let mut out = Vec::with_capacity(circuit.instructions.len() * 2);
    for inst in &circuit.instructions {
        match inst {
            Instruction::PrepZ(q) => {
                out.push(inst.clone());
                out.push(Instruction::XError { qubit: *q, p: model.p_prep });
            }
            Instruction::MeasureZ { qubit, .. } => {
                out.push(Instruction::XError { qubit: *qubit, p: model.p_meas });
                out.push(inst.clone());
            }
            Instruction::Cx(a, b) => {
                out.push(inst.clone());
                out.push(Instruction::Depolarize2 { a: *a, b: *b, p: model.p_cx });
            }
            Instruction::IdleWindow(qs) => {
                out.push(inst.clone());
                out.extend(qs.iter().map(|&q| Instruction::Depolarize1 { qubit: q, p: model.p_idle }));
            }
            _ => out.push(inst.clone()),
        }
    }
    Ok(Circuit { instructions: out, ..circuit.clone() })
}

/// Removes every noise channel.
pub fn strip_noise(circuit: &Circuit) -> Circuit {
    let instructions = circuit.instructions.iter().filter(|i| !i.is_channel()).cloned().collect();
    Circuit { instructions, ..circuit.clone() }
}

/// Error probability of an identity over time `t`, given probability
/// `p_id` over `t_id`, treating the idle as a depolarizing channel:
/// `p(t) = 3/4 (1 - (1 - 4 p_id / 3)^(t / t_id))`.
pub fn idle_extrapolation(p_id: f64, t_id: f64, t: f64) -> Result<f64> {
    if !(0.0..=0.75).contains(&p_id) {
        return Err(Error::InvalidDepolarizing(p_id));
    }
    if !(t_id > 0.0 && t_id.is_finite()) {
        return Err(Error::InvalidDuration { what: "t_id".into(), value: t_id });
    }
    if t.is_nan() || t < 0.0 {
        return Err(Error::InvalidDuration { what: "t".into(), value: t });
    }
    Ok(0.75 * (1.0 - (1.0 - 4.0 * p_id / 3.0).powf(t / t_id)))
}
