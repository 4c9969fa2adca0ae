//! Circuit representation and the builders that turn a round schedule into
//! layered link-measurement circuits.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::codes::{RoundBasis, RoundSpec};
use crate::error::{Error, Result};
use crate::lattice::{Layout, Link, LinkId, Pauli, QubitId};

/// Rounds per scheduled layer.
pub const ROUNDS_PER_LAYER: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Instruction {
    PrepZ(QubitId),
    H(QubitId),
    S(QubitId),
    Sdg(QubitId),
    X(QubitId),
    Cx(QubitId, QubitId),
    MeasureZ {
        qubit: QubitId,
        record: usize,
    },
    LayerBoundary,
    /// Noise hook: qubits idling over this window.
    IdleWindow(Vec<QubitId>),
    XError {
        qubit: QubitId,
        p: f64,
    },
    Depolarize1 {
        qubit: QubitId,
        p: f64,
    },
    Depolarize2 {
        a: QubitId,
        b: QubitId,
        p: f64,
    },
}

impl Instruction {
    pub fn is_channel(&self) -> bool {
        matches!(self, Instruction::XError { .. } | Instruction::Depolarize1 { .. } | Instruction::Depolarize2 { .. })
    }

    fn write_text(&self, out: &mut String) {
        let _ = match self {
            Instruction::PrepZ(q) => write!(out, "R {q}"),
            Instruction::H(q) => write!(out, "H {q}"),
            Instruction::S(q) => write!(out, "S {q}"),
            Instruction::Sdg(q) => write!(out, "SDG {q}"),
            Instruction::X(q) => write!(out, "X {q}"),
            Instruction::Cx(a, b) => write!(out, "CX {a} {b}"),
            Instruction::MeasureZ { qubit, record } => write!(out, "MZ {qubit} #{record}"),
            Instruction::LayerBoundary => write!(out, "LAYER"),
            Instruction::IdleWindow(qs) => {
                out.push_str("IDLE");
                for q in qs {
                    let _ = write!(out, " {q}");
                }
                Ok(())
            }
            Instruction::XError { qubit, p } => write!(out, "X_ERROR({p}) {qubit}"),
            Instruction::Depolarize1 { qubit, p } => write!(out, "DEPOLARIZE1({p}) {qubit}"),
            Instruction::Depolarize2 { a, b, p } => write!(out, "DEPOLARIZE2({p}) {a} {b}"),
        };
    }
}

/// Where a measurement record came from. `round` is 0-based, `instance`
/// counts measurements of the link's auxiliary qubit starting at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordTag {
    pub round: usize,
    pub link: LinkId,
    pub instance: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub layout_name: String,
    pub instructions: Vec<Instruction>,
    pub num_records: usize,
    /// One tag per record for scheduled circuits; empty for hand-built ones.
    pub tags: Vec<RecordTag>,
}

impl Circuit {
    /// Wraps a hand-written instruction list. Measurement records are
    /// renumbered in program order.
    pub fn from_instructions(name: impl Into<String>, mut instructions: Vec<Instruction>) -> Circuit {
        let mut next = 0;
        for inst in &mut instructions {
            if let Instruction::MeasureZ { record, .. } = inst {
                *record = next;
                next += 1;
            }
        }
        Circuit { layout_name: name.into(), instructions, num_records: next, tags: Vec::new() }
    }

    /// Every qubit touched by an instruction, ascending.
    pub fn qubits(&self) -> Vec<QubitId> {
        let mut set = BTreeSet::new();
        for inst in &self.instructions {
            match inst {
                Instruction::PrepZ(q)
                | Instruction::H(q)
                | Instruction::S(q)
                | Instruction::Sdg(q)
                | Instruction::X(q)
                | Instruction::MeasureZ { qubit: q, .. }
                | Instruction::XError { qubit: q, .. }
                | Instruction::Depolarize1 { qubit: q, .. } => {
                    set.insert(*q);
                }
                Instruction::Cx(a, b) | Instruction::Depolarize2 { a, b, .. } => {
                    set.insert(*a);
                    set.insert(*b);
                }
                Instruction::IdleWindow(qs) => set.extend(qs.iter().copied()),
                Instruction::LayerBoundary => {}
            }
        }
        set.into_iter().collect()
    }

    pub fn num_layers(&self) -> usize {
        self.instructions.iter().filter(|i| matches!(i, Instruction::LayerBoundary)).count()
    }

    pub fn count(&self, pred: impl Fn(&Instruction) -> bool) -> usize {
        self.instructions.iter().filter(|i| pred(i)).count()
    }

    /// Line-oriented text form; record tags are trailing comments.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for inst in &self.instructions {
            inst.write_text(&mut out);
            if let Instruction::MeasureZ { record, .. } = inst {
                if let Some(tag) = self.tags.get(*record) {
                    let _ = write!(out, "  # round={} link={} instance={}", tag.round, tag.link, tag.instance);
                }
            }
            out.push('\n');
        }
        out
    }
}

fn basis_change(basis: Pauli, q: QubitId, out: &mut Vec<Instruction>) {
    match basis {
        Pauli::X => out.push(Instruction::H(q)),
        Pauli::Y => {
            out.push(Instruction::Sdg(q));
            out.push(Instruction::H(q));
        }
        Pauli::Z => {}
    }
}

fn basis_unchange(basis: Pauli, q: QubitId, out: &mut Vec<Instruction>) {
    match basis {
        Pauli::X => out.push(Instruction::H(q)),
        Pauli::Y => {
            out.push(Instruction::H(q));
            out.push(Instruction::S(q));
        }
        Pauli::Z => {}
    }
}

/// Measures `σ^basis ⊗ σ^basis` on the link endpoints through its auxiliary
/// qubit. Without `reset_aux` the auxiliary keeps its previous outcome and
/// the recorded bit is the running XOR of all parities measured on it.
pub fn link_measurement_subcircuit(link: &Link, basis: Pauli, reset_aux: bool) -> Vec<Instruction> {
    let mut out = Vec::with_capacity(10);
    let [a, b] = link.endpoints;
    if reset_aux {
        out.push(Instruction::PrepZ(link.aux));
    }
    basis_change(basis, a, &mut out);
    basis_change(basis, b, &mut out);
    out.push(Instruction::Cx(a, link.aux));
    out.push(Instruction::Cx(b, link.aux));
    basis_unchange(basis, a, &mut out);
    basis_unchange(basis, b, &mut out);
    out.push(Instruction::MeasureZ { qubit: link.aux, record: 0 });
    out
}

/// One scheduled link measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlannedMeasurement {
    pub link: LinkId,
    pub basis: Pauli,
    pub record: usize,
    pub instance: usize,
}

/// Record numbering shared by the circuit builder and detector construction:
/// records are assigned round by round, ascending link id within a round.
#[derive(Debug, Clone)]
pub struct MeasurementPlan {
    pub rounds: Vec<Vec<PlannedMeasurement>>,
    pub num_records: usize,
}

impl MeasurementPlan {
    pub fn new(layout: &Layout, rounds: &[RoundSpec]) -> Result<MeasurementPlan> {
        if rounds.is_empty() {
            return Err(Error::EmptySchedule);
        }
        for (layer, chunk) in rounds.chunks(ROUNDS_PER_LAYER).enumerate() {
            let mut seen = BTreeSet::new();
            for (k, spec) in chunk.iter().enumerate() {
                if !seen.insert(spec.color) {
                    return Err(Error::ColorRepeatedInLayer { round: layer * ROUNDS_PER_LAYER + k, color: spec.color });
                }
            }
        }
        let mut instances = vec![0usize; layout.links.len()];
        let mut next = 0;
        let mut planned = Vec::with_capacity(rounds.len());
        for spec in rounds {
            let mut this_round = Vec::new();
            for link in layout.links_of_color(spec.color) {
                let basis = match spec.basis {
                    RoundBasis::Native => link.pauli_type,
                    RoundBasis::X => Pauli::X,
                    RoundBasis::Y => Pauli::Y,
                    RoundBasis::Z => Pauli::Z,
                };
                instances[link.id] += 1;
                this_round.push(PlannedMeasurement {
                    link: link.id,
                    basis,
                    record: next,
                    instance: instances[link.id],
                });
                next += 1;
            }
            planned.push(this_round);
        }
        if next == 0 {
            return Err(Error::NoLinksScheduled);
        }
        Ok(MeasurementPlan { rounds: planned, num_records: next })
    }

    /// Record of the `instance`-th measurement of `link`, if scheduled.
    pub fn record_of(&self, link: LinkId, instance: usize) -> Option<usize> {
        self.rounds.iter().flatten().find(|m| m.link == link && m.instance == instance).map(|m| m.record)
    }
}

/// Emits the full measurement circuit for a schedule. Every three rounds
/// form a layer: an idle window over all active qubits opens the layer, the
/// link subcircuits follow, and the auxiliary measurements of the layer are
/// deferred to its end, preceded by an idle window over the qubits that are
/// not being measured.
pub fn schedule_rounds(layout: &Layout, rounds: &[RoundSpec], reset_aux: bool) -> Result<Circuit> {
    let plan = MeasurementPlan::new(layout, rounds)?;
    let active = layout.active_qubits();
    let mut instructions = Vec::new();
    let mut tags = Vec::with_capacity(plan.num_records);

    for (layer, chunk) in plan.rounds.chunks(ROUNDS_PER_LAYER).enumerate() {
        instructions.push(Instruction::IdleWindow(active.clone()));
        let mut pending = Vec::new();
        for (k, round) in chunk.iter().enumerate() {
            for m in round {
                let link = layout.link(m.link);
                let mut sub = link_measurement_subcircuit(link, m.basis, reset_aux);
                let measure = sub.pop();
                debug_assert!(matches!(measure, Some(Instruction::MeasureZ { .. })));
                instructions.extend(sub);
                pending.push((
                    link.aux,
                    m.record,
                    RecordTag { round: layer * ROUNDS_PER_LAYER + k, link: m.link, instance: m.instance },
                ));
            }
        }
        let measured: BTreeSet<QubitId> = pending.iter().map(|p| p.0).collect();
        instructions.push(Instruction::IdleWindow(active.iter().copied().filter(|q| !measured.contains(q)).collect()));
        for (aux, record, tag) in pending {
            debug_assert_eq!(record, tags.len());
            instructions.push(Instruction::MeasureZ { qubit: aux, record });
            tags.push(tag);
        }
        instructions.push(Instruction::LayerBoundary);
    }

    Ok(Circuit { layout_name: layout.name.clone(), instructions, num_records: plan.num_records, tags })
}
