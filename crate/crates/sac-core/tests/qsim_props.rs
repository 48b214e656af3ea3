//! Simulator invariants: norm preservation under random gate programs,
//! oracle involution, phase kickback, and the Hadamard sandwich that
//! exposes the Walsh spectrum.

use proptest::prelude::*;
use sac_core::qsim::{zero_state, GateOp, QState};
use sac_core::{all_functions, random_function, BooleanFunction};

fn gate_strategy(q: usize) -> impl Strategy<Value = GateOp> {
    let single = (1..=q).prop_flat_map(|qubit| {
        prop_oneof![
            Just(GateOp::H(qubit)),
            Just(GateOp::X(qubit)),
            Just(GateOp::Z(qubit)),
        ]
    });
    if q < 2 {
        return single.boxed();
    }
    let pair = (1..=q, 1..=q)
        .prop_filter("distinct operands", |(c, t)| c != t)
        .prop_flat_map(|(control, target)| {
            prop_oneof![
                Just(GateOp::Cz { control, target }),
                Just(GateOp::Cnot { control, target }),
            ]
        });
    prop_oneof![3 => single, 2 => pair].boxed()
}

fn program_strategy() -> impl Strategy<Value = (usize, Vec<GateOp>)> {
    (1usize..=6).prop_flat_map(|q| {
        prop::collection::vec(gate_strategy(q), 0..60).prop_map(move |gates| (q, gates))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn random_gate_programs_preserve_the_norm((q, gates) in program_strategy()) {
        let mut state = zero_state(q).unwrap();
        for gate in gates {
            state.apply(gate).unwrap();
        }
        prop_assert!((state.norm_sqr() - 1.0).abs() <= 1e-10);
    }
}

proptest! {
    #[test]
    fn bit_oracle_applied_twice_is_the_identity(
        (q, gates) in program_strategy(),
        table_seed in any::<u64>(),
    ) {
        // The oracle permutes basis states, so its square restores the
        // amplitudes bit for bit, from any starting state.
        prop_assume!(q >= 2);
        let n = q - 1;
        let mut rng = sac_core::qsim::derive_stream(table_seed, 0);
        let f = random_function(n, &mut rng).unwrap();

        let mut state = zero_state(q).unwrap();
        for gate in gates {
            state.apply(gate).unwrap();
        }
        let inputs: Vec<usize> = (1..=n).collect();
        let before = state.amplitudes().to_vec();
        state.apply_bit_oracle(&f, &inputs, q).unwrap();
        state.apply_bit_oracle(&f, &inputs, q).unwrap();
        prop_assert_eq!(before, state.amplitudes().to_vec());
    }
}

/// Uniform inputs, |-> target, one bit oracle application.
fn kicked_state(f: &BooleanFunction) -> QState {
    let n = f.n();
    let mut state = zero_state(n + 1).unwrap();
    state.apply(GateOp::X(n + 1)).unwrap();
    state.apply(GateOp::H(n + 1)).unwrap();
    for qubit in 1..=n {
        state.apply(GateOp::H(qubit)).unwrap();
    }
    let inputs: Vec<usize> = (1..=n).collect();
    state.apply_bit_oracle(f, &inputs, n + 1).unwrap();
    state
}

#[test]
fn phase_kickback_signs_every_input_branch() {
    for n in 1..=3 {
        let scale = 1.0 / ((1u64 << n) as f64).sqrt();
        for f in all_functions(n).unwrap() {
            let state = kicked_state(&f);
            let amps = state.amplitudes();
            for x in 0..f.domain_size() {
                let expected = scale * f.character(x) as f64 * std::f64::consts::FRAC_1_SQRT_2;
                let zero_branch = amps[x << 1];
                let one_branch = amps[(x << 1) | 1];
                assert!((zero_branch.re - expected).abs() <= 1e-12, "x = {x}");
                assert!((one_branch.re + expected).abs() <= 1e-12, "x = {x}");
                assert!(zero_branch.im == 0.0 && one_branch.im == 0.0);
            }
        }
    }
}

#[test]
fn hadamard_sandwich_reads_out_the_walsh_spectrum() {
    for f in all_functions(3).unwrap() {
        let spectrum = f.walsh_spectrum();
        let mut state = zero_state(3).unwrap();
        for qubit in 1..=3 {
            state.apply(GateOp::H(qubit)).unwrap();
        }
        state.apply_phase_oracle(&f, &[1, 2, 3]).unwrap();
        for qubit in 1..=3 {
            state.apply(GateOp::H(qubit)).unwrap();
        }
        for (w, amp) in state.amplitudes().iter().enumerate() {
            assert!(
                (amp.re - spectrum.coeff(w)).abs() <= 1e-12 && amp.im == 0.0,
                "f = {}, w = {w}: amp = {amp}, coeff = {}",
                f.to_bits_string(),
                spectrum.coeff(w)
            );
        }
    }
}
