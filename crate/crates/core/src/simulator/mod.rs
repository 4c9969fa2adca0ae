//! Monte-Carlo execution of noisy Clifford circuits.
//!
//! Every shot owns one random stream. Shot `k` of a run with base seed `s`
//! is seeded with [`shot_seed`]`(s, k)`, the `k`-th output of a SplitMix64
//! sequence started at `s`; that 64-bit value seeds a ChaCha8 generator.
//! Measurement coins and channel draws come from that generator in program
//! order, so results do not depend on thread count or scheduling. Channels
//! with probability 0 draw nothing.

pub mod dense;
mod shots;
pub mod tableau;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::circuit::{Circuit, Instruction};
use crate::error::{Error, Result};
use crate::lattice::QubitId;

pub use dense::{StateVector, MAX_DENSE_QUBITS};
pub use shots::ShotTable;
pub use tableau::Tableau;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of shot `shot` in a run with `base_seed`.
pub fn shot_seed(base_seed: u64, shot: u64) -> u64 {
    splitmix64(base_seed.wrapping_add(GOLDEN_GAMMA.wrapping_mul(shot.wrapping_add(1))))
}

/// Reads bit `index` of a packed record row.
#[inline]
pub fn bit(words: &[u64], index: usize) -> bool {
    words[index / 64] >> (index % 64) & 1 == 1
}

#[inline]
fn set_bit(words: &mut [u64], index: usize, value: bool) {
    if value {
        words[index / 64] |= 1 << (index % 64);
    }
}

/// Instruction with qubits renumbered densely.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Op {
    Reset(usize),
    H(usize),
    S(usize),
    Sdg(usize),
    X(usize),
    Cx(usize, usize),
    Measure(usize, usize),
    XError(usize, f64),
    Depolarize1(usize, f64),
    Depolarize2(usize, usize, f64),
}

/// A circuit lowered for execution.
#[derive(Debug, Clone)]
pub struct Program {
    pub(crate) ops: Vec<Op>,
    pub(crate) num_qubits: usize,
    pub(crate) num_records: usize,
    pub(crate) name: String,
}

impl Program {
    fn build(circuit: &Circuit, keep_channels: bool) -> Program {
        let qubits = circuit.qubits();
        let index = |q: QubitId| qubits.binary_search(&q).expect("qubit listed");
        let mut ops = Vec::with_capacity(circuit.instructions.len());
        for inst in &circuit.instructions {
            let op = match *inst {
                Instruction::PrepZ(q) => Op::Reset(index(q)),
                Instruction::H(q) => Op::H(index(q)),
                Instruction::S(q) => Op::S(index(q)),
                Instruction::Sdg(q) => Op::Sdg(index(q)),
                Instruction::X(q) => Op::X(index(q)),
                Instruction::Cx(a, b) => Op::Cx(index(a), index(b)),
                Instruction::MeasureZ { qubit, record } => Op::Measure(index(qubit), record),
                Instruction::LayerBoundary | Instruction::IdleWindow(_) => continue,
                Instruction::XError { qubit, p } if keep_channels => Op::XError(index(qubit), p),
                Instruction::Depolarize1 { qubit, p } if keep_channels => Op::Depolarize1(index(qubit), p),
                Instruction::Depolarize2 { a, b, p } if keep_channels => Op::Depolarize2(index(a), index(b), p),
                Instruction::XError { .. } | Instruction::Depolarize1 { .. } | Instruction::Depolarize2 { .. } => {
                    continue
                }
            };
            ops.push(op);
        }
        Program { ops, num_qubits: qubits.len(), num_records: circuit.num_records, name: circuit.layout_name.clone() }
    }

    pub fn compile(circuit: &Circuit) -> Program {
        Program::build(circuit, true)
    }

    /// Drops every noise channel.
    pub fn compile_noiseless(circuit: &Circuit) -> Program {
        Program::build(circuit, false)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_records(&self) -> usize {
        self.num_records
    }
}

/// Pauli as (x, z) bits; index 0 is the identity.
const PAULIS: [(bool, bool); 4] = [(false, false), (true, false), (true, true), (false, true)];

trait Backend {
    fn reset(&mut self, q: usize, rng: &mut ChaCha8Rng);
    fn h(&mut self, q: usize);
    fn s(&mut self, q: usize);
    fn sdg(&mut self, q: usize);
    fn pauli(&mut self, q: usize, x: bool, z: bool);
    fn cx(&mut self, c: usize, t: usize);
    fn measure(&mut self, q: usize, rng: &mut ChaCha8Rng) -> bool;
}

impl Backend for Tableau {
    fn reset(&mut self, q: usize, rng: &mut ChaCha8Rng) {
        Tableau::reset(self, q, rng)
    }
    fn h(&mut self, q: usize) {
        Tableau::h(self, q)
    }
    fn s(&mut self, q: usize) {
        Tableau::s(self, q)
    }
    fn sdg(&mut self, q: usize) {
        Tableau::sdg(self, q)
    }
    fn pauli(&mut self, q: usize, x: bool, z: bool) {
        Tableau::pauli(self, q, x, z)
    }
    fn cx(&mut self, c: usize, t: usize) {
        Tableau::cx(self, c, t)
    }
    fn measure(&mut self, q: usize, rng: &mut ChaCha8Rng) -> bool {
        Tableau::measure(self, q, rng).0
    }
}

impl Backend for StateVector {
    fn reset(&mut self, q: usize, rng: &mut ChaCha8Rng) {
        StateVector::reset(self, q, rng)
    }
    fn h(&mut self, q: usize) {
        StateVector::h(self, q)
    }
    fn s(&mut self, q: usize) {
        StateVector::s(self, q)
    }
    fn sdg(&mut self, q: usize) {
        StateVector::sdg(self, q)
    }
    fn pauli(&mut self, q: usize, x: bool, z: bool) {
        match (x, z) {
            (true, false) => self.x(q),
            (true, true) => self.y(q),
            (false, true) => self.z(q),
            (false, false) => {}
        }
    }
    fn cx(&mut self, c: usize, t: usize) {
        StateVector::cx(self, c, t)
    }
    fn measure(&mut self, q: usize, rng: &mut ChaCha8Rng) -> bool {
        StateVector::measure(self, q, rng)
    }
}

fn execute<B: Backend>(program: &Program, state: &mut B, seed: u64, out: &mut [u64]) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for op in &program.ops {
        match *op {
            Op::Reset(q) => state.reset(q, &mut rng),
            Op::H(q) => state.h(q),
            Op::S(q) => state.s(q),
            Op::Sdg(q) => state.sdg(q),
            Op::X(q) => state.pauli(q, true, false),
            Op::Cx(a, b) => state.cx(a, b),
            Op::Measure(q, record) => {
                let v = state.measure(q, &mut rng);
                set_bit(out, record, v);
            }
            Op::XError(q, p) => {
                if p > 0.0 && rng.gen::<f64>() < p {
                    state.pauli(q, true, false);
                }
            }
            Op::Depolarize1(q, p) => {
                if p > 0.0 && rng.gen::<f64>() < p {
                    let (x, z) = PAULIS[rng.gen_range(1..4)];
                    state.pauli(q, x, z);
                }
            }
            Op::Depolarize2(a, b, p) => {
                if p > 0.0 && rng.gen::<f64>() < p {
                    let k = rng.gen_range(1..16usize);
                    let (xa, za) = PAULIS[k & 3];
                    let (xb, zb) = PAULIS[k >> 2];
                    state.pauli(a, xa, za);
                    state.pauli(b, xb, zb);
                }
            }
        }
    }
}

fn record_words(num_records: usize) -> usize {
    num_records.div_ceil(64).max(1)
}

/// One tableau shot; returns the packed record row.
pub fn run_program(program: &Program, seed: u64) -> Vec<u64> {
    let mut out = vec![0; record_words(program.num_records)];
    let mut t = Tableau::new(program.num_qubits);
    execute(program, &mut t, seed, &mut out);
    out
}

/// Runs one shot of `circuit` on the tableau engine from |0…0⟩.
pub fn run_shot(circuit: &Circuit, seed: u64) -> Vec<bool> {
    let program = Program::compile(circuit);
    let words = run_program(&program, seed);
    (0..program.num_records).map(|r| bit(&words, r)).collect()
}

fn run_parallel<F>(program: &Program, n_shots: usize, base_seed: u64, f: F) -> ShotTable
where
    F: Fn(&Program, u64, &mut [u64]) + Sync,
{
    let words = record_words(program.num_records);
    let mut bits = vec![0u64; words * n_shots];
    bits.par_chunks_mut(words).enumerate().for_each(|(k, row)| {
        f(program, shot_seed(base_seed, k as u64), row);
    });
    ShotTable::from_words(n_shots, program.num_records, bits, base_seed, program.name.clone())
}

pub fn run_program_shots(program: &Program, n_shots: usize, base_seed: u64) -> Result<ShotTable> {
    if n_shots == 0 {
        return Err(Error::NoShots);
    }
    Ok(run_parallel(program, n_shots, base_seed, |p, seed, row| {
        let mut t = Tableau::new(p.num_qubits);
        execute(p, &mut t, seed, row);
    }))
}

/// Runs `n_shots` tableau shots in parallel; shot `k` uses
/// `shot_seed(base_seed, k)`.
pub fn run_shots(circuit: &Circuit, n_shots: usize, base_seed: u64) -> Result<ShotTable> {
    run_program_shots(&Program::compile(circuit), n_shots, base_seed)
}

/// Same contract as [`run_shots`], executed on a dense state vector.
pub fn dense_oracle_run(circuit: &Circuit, n_shots: usize, base_seed: u64) -> Result<ShotTable> {
    let program = Program::compile(circuit);
    if program.num_qubits > MAX_DENSE_QUBITS {
        return Err(Error::TooManyQubits { max: MAX_DENSE_QUBITS, got: program.num_qubits });
    }
    if n_shots == 0 {
        return Err(Error::NoShots);
    }
    Ok(run_parallel(&program, n_shots, base_seed, |p, seed, row| {
        let mut s = StateVector::new(p.num_qubits);
        execute(p, &mut s, seed, row);
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Instruction::*;

    #[test]
    fn prep_then_measure_is_zero() {
        let c = Circuit::from_instructions("t", vec![PrepZ(0), MeasureZ { qubit: 0, record: 0 }]);
        for seed in 0..20 {
            assert_eq!(run_shot(&c, seed), vec![false]);
        }
    }

    #[test]
    fn hadamard_is_a_fair_coin() {
        let c = Circuit::from_instructions("t", vec![H(0), MeasureZ { qubit: 0, record: 0 }]);
        let table = run_shots(&c, 10_000, 11).unwrap();
        let ones = (0..table.shots()).filter(|&s| table.get(s, 0)).count() as f64 / 1e4;
        assert!((ones - 0.5).abs() <= 0.015, "{ones}");
    }

    #[test]
    fn zz_parity_of_01_is_one() {
        let c =
            Circuit::from_instructions("t", vec![X(2), PrepZ(1), Cx(0, 1), Cx(2, 1), MeasureZ { qubit: 1, record: 0 }]);
        assert_eq!(run_shot(&c, 3), vec![true]);
    }

    #[test]
    fn single_shot_matches_run_shot() {
        let c = Circuit::from_instructions(
            "t",
            vec![H(0), Cx(0, 1), MeasureZ { qubit: 0, record: 0 }, MeasureZ { qubit: 1, record: 0 }],
        );
        let table = run_shots(&c, 1, 42).unwrap();
        let single = run_shot(&c, shot_seed(42, 0));
        assert_eq!(table.row_bits(0), single);
    }

    #[test]
    fn shot_seeds_differ() {
        let seeds: std::collections::BTreeSet<u64> = (0..1000).map(|k| shot_seed(7, k)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_ne!(shot_seed(7, 0), shot_seed(8, 0));
    }

    #[test]
    fn dense_rejects_large_circuits() {
        let c = Circuit::from_instructions("t", (0..20).map(H).collect());
        assert!(matches!(dense_oracle_run(&c, 1, 0), Err(Error::TooManyQubits { .. })));
    }

    #[test]
    fn zero_shots_rejected() {
        let c = Circuit::from_instructions("t", vec![H(0)]);
        assert!(matches!(run_shots(&c, 0, 0), Err(Error::NoShots)));
    }
}
