use floquet_core::circuit::{link_measurement_subcircuit, Circuit, Instruction};
use floquet_core::codes::CodeKind;
use floquet_core::noise::{apply_noise, NoiseModel};
use floquet_core::simulator::{run_shots, shot_seed, StateVector, Tableau};
use floquet_core::{build_layout, build_patch, run_shot, schedule_rounds};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
enum Op {
    H(usize),
    S(usize),
    Sdg(usize),
    X(usize),
    Cx(usize, usize),
    Measure(usize),
    Reset(usize),
}

fn arb_op(n: usize) -> impl Strategy<Value = Op> {
    prop_oneof![
        (0..n).prop_map(Op::H),
        (0..n).prop_map(Op::S),
        (0..n).prop_map(Op::Sdg),
        (0..n).prop_map(Op::X),
        (0..n, 0..n).prop_filter("distinct", |(a, b)| a != b).prop_map(|(a, b)| Op::Cx(a, b)),
        (0..n).prop_map(Op::Measure),
        (0..n).prop_map(Op::Reset),
    ]
}

fn apply_tableau(t: &mut Tableau, op: &Op, rng: &mut ChaCha8Rng) -> Option<(bool, bool)> {
    match *op {
        Op::H(q) => t.h(q),
        Op::S(q) => t.s(q),
        Op::Sdg(q) => t.sdg(q),
        Op::X(q) => t.x(q),
        Op::Cx(a, b) => t.cx(a, b),
        Op::Measure(q) => return Some(t.measure(q, rng)),
        Op::Reset(q) => t.reset(q, rng),
    }
    None
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn tableau_stays_valid(ops in prop::collection::vec(arb_op(9), 1000), seed in any::<u64>()) {
        let mut t = Tableau::new(9);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for op in &ops {
            apply_tableau(&mut t, op, &mut rng);
            prop_assert!(t.is_valid(), "after {op:?}");
        }
    }

    /// Runs a random circuit on both engines, steering the state vector onto
    /// the tableau's outcome at every measurement.
    #[test]
    fn tableau_agrees_with_state_vector(ops in prop::collection::vec(arb_op(5), 1..200), seed in any::<u64>()) {
        let mut t = Tableau::new(5);
        let mut sv = StateVector::new(5);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for op in &ops {
            match *op {
                Op::H(q) => sv.h(q),
                Op::S(q) => sv.s(q),
                Op::Sdg(q) => sv.sdg(q),
                Op::X(q) => sv.x(q),
                Op::Cx(a, b) => sv.cx(a, b),
                Op::Measure(q) | Op::Reset(q) => {
                    let p1 = sv.prob_one(q);
                    let mut t2 = t.clone();
                    let (outcome, random) = t2.measure(q, &mut rng);
                    if random {
                        prop_assert!((p1 - 0.5).abs() < 1e-9, "p1 = {p1}");
                    } else {
                        prop_assert!((p1 - if outcome { 1.0 } else { 0.0 }).abs() < 1e-9, "p1 = {p1}");
                    }
                    t = t2;
                    sv.project(q, outcome);
                    if let Op::Reset(_) = op {
                        if outcome {
                            t.x(q);
                            sv.x(q);
                        }
                    }
                    continue;
                }
            }
            apply_tableau(&mut t, op, &mut rng);
        }
    }
}

#[test]
fn repeated_measurement_repeats() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let mut t = Tableau::new(4);
        t.h(0);
        t.cx(0, 1);
        t.h(2);
        t.s(2);
        t.cx(2, 3);
        for q in 0..4 {
            let (a, _) = t.measure(q, &mut rng);
            let (b, random) = t.measure(q, &mut rng);
            assert_eq!(a, b);
            assert!(!random);
        }
    }
}

#[test]
fn zero_noise_reproduces_noiseless_shots() {
    let layout = build_layout("falcon27").unwrap();
    let schedule = CodeKind::Color.schedule(10).unwrap();
    let circuit = schedule_rounds(&layout, &schedule, false).unwrap();
    let noisy = apply_noise(&circuit, &NoiseModel::noiseless()).unwrap();
    let a = run_shots(&circuit, 200, 99).unwrap();
    let b = run_shots(&noisy, 200, 99).unwrap();
    assert_eq!(a, b);
}

#[test]
fn shots_independent_of_thread_count() {
    let layout = build_layout("hummingbird65").unwrap();
    let schedule = CodeKind::Honeycomb.schedule(7).unwrap();
    let circuit = apply_noise(&schedule_rounds(&layout, &schedule, true).unwrap(), &NoiseModel::uniform(0.03)).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_shots(&circuit, 300, 1234).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one, run(8));
    for k in [0usize, 17, 299] {
        assert_eq!(one.row_bits(k), run_shot(&circuit, shot_seed(1234, k as u64)));
    }
}

#[test]
fn link_subcircuits_measure_parity() {
    // |01⟩ on the endpoints: ZZ = -1, XX and YY random.
    let layout = build_patch(1, 1).unwrap();
    for link in &layout.links {
        for basis in [floquet_core::Pauli::X, floquet_core::Pauli::Y, floquet_core::Pauli::Z] {
            let mut insts = vec![Instruction::X(link.endpoints[1])];
            insts.extend(link_measurement_subcircuit(link, basis, true));
            let c = Circuit::from_instructions("t", insts);
            let ones: usize = (0..400).filter(|&s| run_shot(&c, s)[0]).count();
            match basis {
                floquet_core::Pauli::Z => assert_eq!(ones, 400),
                _ => assert!((140..=260).contains(&ones), "{basis:?}: {ones}"),
            }
        }
    }
}
