//! Dense state-vector simulator.
//!
//! Amplitudes live in one contiguous vector indexed by basis state, with
//! qubit 1 as the most significant bit. That matches the truth-table index
//! convention in `boolfn`, so a function oracle over input qubits 1..n with
//! target n+1 reads its input directly from the upper index bits.
//!
//! Measurement never collapses the stored state: every circuit here
//! measures once at the end, so sampling just draws i.i.d. outcomes from
//! the marginal distribution of the requested qubits.

use crate::boolfn::BooleanFunction;
use crate::error::{Error, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::FRAC_1_SQRT_2;

/// Dense representation caps out here (2^26 amplitudes, 1 GiB).
pub const MAX_QUBITS: usize = 26;

/// Norm drift beyond this after a gate is treated as an internal error.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// The project-wide PRNG, recorded in every report. Shot batches for
/// direction i draw from stream i of the master seed (`derive_stream`),
/// so reports are reproducible regardless of scheduling.
pub const RNG_ALGORITHM: &str = "chacha8(seed_from_u64, stream = direction index)";

/// The stream-i generator for a master seed.
pub fn derive_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A single gate. Qubit indices are 1-based; qubit 1 is the index MSB.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GateOp {
    H(usize),
    X(usize),
    Z(usize),
    Cz { control: usize, target: usize },
    Cnot { control: usize, target: usize },
}

impl GateOp {
    fn operands(&self) -> (usize, Option<usize>) {
        match *self {
            GateOp::H(q) | GateOp::X(q) | GateOp::Z(q) => (q, None),
            GateOp::Cz { control, target } | GateOp::Cnot { control, target } => {
                (control, Some(target))
            }
        }
    }
}

/// State vector over `q` qubits.
#[derive(Debug, Clone)]
pub struct QState {
    q: usize,
    amps: Vec<Complex64>,
}

/// All qubits in |0>.
pub fn zero_state(q: usize) -> Result<QState> {
    if !(1..=MAX_QUBITS).contains(&q) {
        return Err(Error::SizeLimit {
            what: "state vectors",
            n: q,
            min: 1,
            max: MAX_QUBITS,
        });
    }
    let mut amps = vec![Complex64::ZERO; 1 << q];
    amps[0] = Complex64::ONE;
    Ok(QState { q, amps })
}

impl QState {
    pub fn qubit_count(&self) -> usize {
        self.q
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_qubit(&self, qubit: usize) -> Result<usize> {
        if qubit < 1 || qubit > self.q {
            return Err(Error::InvalidArgument(format!(
                "qubit {qubit} outside 1..={}",
                self.q
            )));
        }
        Ok(1 << (self.q - qubit))
    }

    /// Applies one gate in place.
    pub fn apply(&mut self, gate: GateOp) -> Result<()> {
        let (first, second) = gate.operands();
        if second == Some(first) {
            return Err(Error::InvalidArgument(format!(
                "control and target coincide in {gate:?}"
            )));
        }
        match gate {
            GateOp::H(qubit) => {
                let mask = self.check_qubit(qubit)?;
                for k in 0..self.amps.len() {
                    if k & mask == 0 {
                        let a = self.amps[k];
                        let b = self.amps[k | mask];
                        self.amps[k] = (a + b) * FRAC_1_SQRT_2;
                        self.amps[k | mask] = (a - b) * FRAC_1_SQRT_2;
                    }
                }
            }
            GateOp::X(qubit) => {
                let mask = self.check_qubit(qubit)?;
                for k in 0..self.amps.len() {
                    if k & mask == 0 {
                        self.amps.swap(k, k | mask);
                    }
                }
            }
            GateOp::Z(qubit) => {
                let mask = self.check_qubit(qubit)?;
                for k in 0..self.amps.len() {
                    if k & mask != 0 {
                        self.amps[k] = -self.amps[k];
                    }
                }
            }
            GateOp::Cz { control, target } => {
                let cmask = self.check_qubit(control)?;
                let tmask = self.check_qubit(target)?;
                let both = cmask | tmask;
                for k in 0..self.amps.len() {
                    if k & both == both {
                        self.amps[k] = -self.amps[k];
                    }
                }
            }
            GateOp::Cnot { control, target } => {
                let cmask = self.check_qubit(control)?;
                let tmask = self.check_qubit(target)?;
                for k in 0..self.amps.len() {
                    if k & cmask != 0 && k & tmask == 0 {
                        self.amps.swap(k, k | tmask);
                    }
                }
            }
        }
        Ok(())
    }

    fn oracle_masks(&self, f: &BooleanFunction, inputs: &[usize]) -> Result<Vec<usize>> {
        if inputs.len() != f.n() {
            return Err(Error::InvalidArgument(format!(
                "oracle for an n = {} function wired to {} input qubits",
                f.n(),
                inputs.len()
            )));
        }
        let masks = inputs
            .iter()
            .map(|&qubit| self.check_qubit(qubit))
            .collect::<Result<Vec<usize>>>()?;
        for (pos, mask) in masks.iter().enumerate() {
            if masks[..pos].contains(mask) {
                return Err(Error::InvalidArgument(
                    "oracle input qubits must be distinct".into(),
                ));
            }
        }
        Ok(masks)
    }

    /// Reads the function input encoded in basis index `k` by the wiring
    /// `masks` (first input qubit = most significant function variable).
    fn gather_input(k: usize, masks: &[usize]) -> usize {
        masks
            .iter()
            .fold(0usize, |x, &mask| (x << 1) | usize::from(k & mask != 0))
    }

    /// XOR-oracle: |x>|t> -> |x>|t XOR F(x)>. A pure basis permutation.
    pub fn apply_bit_oracle(
        &mut self,
        f: &BooleanFunction,
        inputs: &[usize],
        target: usize,
    ) -> Result<()> {
        let masks = self.oracle_masks(f, inputs)?;
        let tmask = self.check_qubit(target)?;
        if masks.contains(&tmask) {
            return Err(Error::InvalidArgument(
                "oracle target collides with an input qubit".into(),
            ));
        }
        for k in 0..self.amps.len() {
            if k & tmask == 0 && f.value(Self::gather_input(k, &masks)) {
                self.amps.swap(k, k | tmask);
            }
        }
        Ok(())
    }

    /// Diagonal oracle: multiplies the |x> branch by (-1)^F(x). Equivalent
    /// to the bit oracle with the target held in |->, without the ancilla.
    pub fn apply_phase_oracle(&mut self, f: &BooleanFunction, inputs: &[usize]) -> Result<()> {
        let masks = self.oracle_masks(f, inputs)?;
        for k in 0..self.amps.len() {
            if f.value(Self::gather_input(k, &masks)) {
                self.amps[k] = -self.amps[k];
            }
        }
        Ok(())
    }

    /// Marginal distribution of the listed qubits, first listed qubit as
    /// the most significant outcome bit. Errors if the state norm has
    /// drifted beyond tolerance; results are renormalization-free.
    pub fn probabilities(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        if qubits.is_empty() {
            return Err(Error::InvalidArgument(
                "at least one qubit must be measured".into(),
            ));
        }
        let masks = qubits
            .iter()
            .map(|&qubit| self.check_qubit(qubit))
            .collect::<Result<Vec<usize>>>()?;
        for (pos, mask) in masks.iter().enumerate() {
            if masks[..pos].contains(mask) {
                return Err(Error::InvalidArgument(
                    "measured qubits must be distinct".into(),
                ));
            }
        }

        let mut out = vec![0.0; 1 << masks.len()];
        let mut total = 0.0;
        for (k, amp) in self.amps.iter().enumerate() {
            let p = amp.norm_sqr();
            total += p;
            out[Self::gather_input(k, &masks)] += p;
        }
        if (total - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Invariant(format!(
                "state norm drifted to {total:.12}"
            )));
        }
        Ok(out)
    }

    /// Draws `shots` outcomes from the marginal of `qubits` using the
    /// project PRNG seeded with `seed` (stream 0). The state is unchanged.
    pub fn sample(&self, qubits: &[usize], shots: u64, seed: u64) -> Result<Vec<u64>> {
        let probs = self.probabilities(qubits)?;
        sample_distribution(&probs, shots, &mut derive_stream(seed, 0))
    }

    /// As `sample`, with a caller-managed generator (for stream splitting).
    pub fn sample_with_rng<R: Rng + ?Sized>(
        &self,
        qubits: &[usize],
        shots: u64,
        rng: &mut R,
    ) -> Result<Vec<u64>> {
        let probs = self.probabilities(qubits)?;
        sample_distribution(&probs, shots, rng)
    }
}

/// Multinomial sampling by inverse CDF. Deterministic given the generator.
pub fn sample_distribution<R: Rng + ?Sized>(
    probs: &[f64],
    shots: u64,
    rng: &mut R,
) -> Result<Vec<u64>> {
    if shots == 0 {
        return Err(Error::InvalidConfig("shots must be >= 1".into()));
    }
    let mut cumulative = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for &p in probs {
        acc += p;
        cumulative.push(acc);
    }
    // The last bucket absorbs any rounding shortfall so u < 1 always lands.
    if let Some(last) = cumulative.last_mut() {
        *last = last.max(1.0);
    }
    let mut counts = vec![0u64; probs.len()];
    for _ in 0..shots {
        let u: f64 = rng.random();
        let idx = cumulative.partition_point(|&c| c <= u);
        counts[idx.min(probs.len() - 1)] += 1;
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::{parse_function, FunctionSource};
    use approx::assert_abs_diff_eq;

    fn from_bits(bits: &str) -> BooleanFunction {
        parse_function(&FunctionSource::Bits {
            bits: bits.into(),
            n: None,
        })
        .unwrap()
    }

    fn real_amps(state: &QState) -> Vec<f64> {
        state
            .amplitudes()
            .iter()
            .map(|a| {
                assert!(a.im.abs() < 1e-12);
                a.re
            })
            .collect()
    }

    #[test]
    fn zero_state_shape() {
        let s1 = zero_state(1).unwrap();
        assert_eq!(real_amps(&s1), vec![1.0, 0.0]);
        let s3 = zero_state(3).unwrap();
        assert_eq!(s3.amplitudes().len(), 8);
        assert_eq!(s3.amplitudes()[0], Complex64::ONE);
        assert_abs_diff_eq!(s3.norm_sqr(), 1.0, epsilon = 1e-15);
        assert!(zero_state(0).is_err());
        assert!(zero_state(27).is_err());
    }

    #[test]
    fn hadamard_makes_plus_state() {
        let mut s = zero_state(1).unwrap();
        s.apply(GateOp::H(1)).unwrap();
        let amps = real_amps(&s);
        assert_abs_diff_eq!(amps[0], FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(amps[1], FRAC_1_SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn x_then_h_makes_minus_state() {
        let mut s = zero_state(1).unwrap();
        s.apply(GateOp::X(1)).unwrap();
        s.apply(GateOp::H(1)).unwrap();
        let amps = real_amps(&s);
        assert_abs_diff_eq!(amps[0], FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(amps[1], -FRAC_1_SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn cz_turns_minus_into_plus_when_control_is_one() {
        // Control |1> on qubit 1, target |-> on qubit 2.
        let mut s = zero_state(2).unwrap();
        s.apply(GateOp::X(1)).unwrap();
        s.apply(GateOp::X(2)).unwrap();
        s.apply(GateOp::H(2)).unwrap();
        s.apply(GateOp::Cz {
            control: 1,
            target: 2,
        })
        .unwrap();
        let amps = real_amps(&s);
        // |1> tensor |+>: equal positive amplitudes on indices 10 and 11.
        assert_abs_diff_eq!(amps[0b10], FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(amps[0b11], FRAC_1_SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn cnot_flips_target_conditionally() {
        let mut s = zero_state(2).unwrap();
        s.apply(GateOp::X(1)).unwrap();
        s.apply(GateOp::Cnot {
            control: 1,
            target: 2,
        })
        .unwrap();
        assert_eq!(real_amps(&s)[0b11], 1.0);
    }

    #[test]
    fn gate_operand_validation() {
        let mut s = zero_state(2).unwrap();
        assert!(s.apply(GateOp::H(0)).is_err());
        assert!(s.apply(GateOp::H(3)).is_err());
        assert!(s
            .apply(GateOp::Cz {
                control: 1,
                target: 1
            })
            .is_err());
    }

    #[test]
    fn bit_oracle_writes_function_value() {
        // AND on |11>|0>: target flips to 1.
        let and = from_bits("0001");
        let mut s = zero_state(3).unwrap();
        s.apply(GateOp::X(1)).unwrap();
        s.apply(GateOp::X(2)).unwrap();
        s.apply_bit_oracle(&and, &[1, 2], 3).unwrap();
        assert_eq!(real_amps(&s)[0b111], 1.0);
    }

    #[test]
    fn constant_zero_oracle_is_identity() {
        let zero = BooleanFunction::constant(2, false).unwrap();
        let mut s = zero_state(3).unwrap();
        s.apply(GateOp::H(1)).unwrap();
        s.apply(GateOp::H(2)).unwrap();
        let before = s.amplitudes().to_vec();
        s.apply_bit_oracle(&zero, &[1, 2], 3).unwrap();
        assert_eq!(s.amplitudes(), &before[..]);
    }

    #[test]
    fn bit_oracle_with_minus_target_kicks_phase() {
        // F = x1 on uniform inputs, target |->: x1 = 1 branches negate.
        let x1 = from_bits("0011");
        let mut s = zero_state(3).unwrap();
        s.apply(GateOp::H(1)).unwrap();
        s.apply(GateOp::H(2)).unwrap();
        s.apply(GateOp::X(3)).unwrap();
        s.apply(GateOp::H(3)).unwrap();
        s.apply_bit_oracle(&x1, &[1, 2], 3).unwrap();
        let amps = real_amps(&s);
        for (k, amp) in amps.iter().enumerate() {
            let x1_bit = k & 0b100 != 0;
            let target_bit = k & 0b001 != 0;
            let mut expect = 0.5 * FRAC_1_SQRT_2;
            if target_bit {
                expect = -expect;
            }
            if x1_bit {
                expect = -expect;
            }
            assert_abs_diff_eq!(*amp, expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn bit_oracle_validates_wiring() {
        let and = from_bits("0001");
        let mut s = zero_state(3).unwrap();
        assert!(s.apply_bit_oracle(&and, &[1], 3).is_err());
        assert!(s.apply_bit_oracle(&and, &[1, 1], 3).is_err());
        assert!(s.apply_bit_oracle(&and, &[1, 2], 2).is_err());
        assert!(s.apply_bit_oracle(&and, &[1, 2], 4).is_err());
    }

    #[test]
    fn phase_oracle_matches_kicked_bit_oracle() {
        let f = from_bits("0110");
        let mut with_ancilla = zero_state(3).unwrap();
        with_ancilla.apply(GateOp::H(1)).unwrap();
        with_ancilla.apply(GateOp::H(2)).unwrap();
        with_ancilla.apply(GateOp::X(3)).unwrap();
        with_ancilla.apply(GateOp::H(3)).unwrap();
        with_ancilla.apply_bit_oracle(&f, &[1, 2], 3).unwrap();

        let mut diagonal = zero_state(2).unwrap();
        diagonal.apply(GateOp::H(1)).unwrap();
        diagonal.apply(GateOp::H(2)).unwrap();
        diagonal.apply_phase_oracle(&f, &[1, 2]).unwrap();

        // Input-register amplitudes agree after factoring out |->.
        let kicked = real_amps(&with_ancilla);
        let plain = real_amps(&diagonal);
        for x in 0..4 {
            assert_abs_diff_eq!(kicked[x << 1] * 2.0_f64.sqrt(), plain[x], epsilon = 1e-12);
        }
    }

    #[test]
    fn probabilities_marginalize() {
        let s = zero_state(2).unwrap();
        assert_eq!(
            s.probabilities(&[1, 2]).unwrap(),
            vec![1.0, 0.0, 0.0, 0.0]
        );

        let mut plus = zero_state(1).unwrap();
        plus.apply(GateOp::H(1)).unwrap();
        let dist = plus.probabilities(&[1]).unwrap();
        assert_abs_diff_eq!(dist[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(dist[1], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn probabilities_validate_inputs() {
        let s = zero_state(2).unwrap();
        assert!(s.probabilities(&[]).is_err());
        assert!(s.probabilities(&[1, 1]).is_err());
        assert!(s.probabilities(&[3]).is_err());
    }

    #[test]
    fn sampling_is_deterministic_and_counts_shots() {
        let s = zero_state(2).unwrap();
        assert_eq!(s.sample(&[1, 2], 100, 7).unwrap(), vec![100, 0, 0, 0]);

        let mut plus = zero_state(1).unwrap();
        plus.apply(GateOp::H(1)).unwrap();
        let first = plus.sample(&[1], 100_000, 42).unwrap();
        let second = plus.sample(&[1], 100_000, 42).unwrap();
        assert_eq!(first, second);
        assert_eq!(first[0] + first[1], 100_000);
        // 5 sigma of Binomial(1e5, 0.5).
        assert!((first[0] as f64 - 50_000.0).abs() < 791.0, "{first:?}");

        assert_ne!(first, plus.sample(&[1], 100_000, 43).unwrap());
        assert!(plus.sample(&[1], 0, 42).is_err());
    }

    #[test]
    fn streams_of_one_seed_are_independent_but_reproducible() {
        let probs = [0.5, 0.5];
        let a0 = sample_distribution(&probs, 1000, &mut derive_stream(9, 0)).unwrap();
        let a1 = sample_distribution(&probs, 1000, &mut derive_stream(9, 1)).unwrap();
        let b0 = sample_distribution(&probs, 1000, &mut derive_stream(9, 0)).unwrap();
        assert_eq!(a0, b0);
        assert_ne!(a0, a1);
    }
}
