//! The three simulable avalanche-test circuits.
//!
//! All three run on n input qubits (1..n) plus one target qubit (n+1) held
//! in |-> so every function oracle acts by phase kickback:
//!
//! - single-qubit probe ("qsac"): Hadamard sandwich around the oracle,
//!   then CZ from input qubit i onto the target; the target-qubit
//!   distribution splits the squared Walsh mass on coordinate i.
//! - direct (Deutsch-Jozsa on the derivative): the oracle pair
//!   U_F X_i U_F X_i imprints the derivative's phase; the all-zeros
//!   outcome probability is the squared normalized autocorrelation.
//! - 3-fold Forrelation of (g, h, g) with g the derivative and h the
//!   n-input NOR applied as a diagonal phase; the all-zeros amplitude is
//!   the Forrelation sum itself, which equals 1 exactly when g is balanced.
//!
//! Circuits are explicit step lists so the complexity audit can count what
//! was actually constructed rather than trusting a formula.

use crate::boolfn::BooleanFunction;
use crate::error::{Error, Result};
use crate::qsim::{derive_stream, sample_distribution, zero_state, GateOp, QState, MAX_QUBITS};
use serde::Serialize;
use std::f64::consts::FRAC_1_SQRT_2;

/// Brute-force Forrelation cost is 8^n; capped here.
pub const MAX_BRUTEFORCE_VARS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CircuitKind {
    Qsac,
    Direct,
    Forrelation,
}

impl std::fmt::Display for CircuitKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            CircuitKind::Qsac => "qsac",
            CircuitKind::Direct => "direct",
            CircuitKind::Forrelation => "forrelation",
        };
        f.write_str(name)
    }
}

/// One circuit step. Oracles stay abstract (the simulator applies them as
/// basis permutations / diagonals), everything else is a concrete gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Step {
    Gate(GateOp),
    /// The function oracle U_F over inputs 1..n with target n+1.
    FunctionOracle,
    /// The NOR oracle as a diagonal phase over the input register.
    NorPhaseOracle,
}

/// An avalanche-test circuit for one coordinate, as an explicit step list.
#[derive(Debug, Clone)]
pub struct Circuit {
    n: usize,
    kind: CircuitKind,
    coordinate: usize,
    steps: Vec<Step>,
}

fn check_layout(n: usize, i: usize) -> Result<()> {
    if n + 1 > MAX_QUBITS {
        return Err(Error::SizeLimit {
            what: "simulated circuits",
            n,
            min: 1,
            max: MAX_QUBITS - 1,
        });
    }
    if i < 1 || i > n {
        return Err(Error::InvalidArgument(format!(
            "coordinate {i} outside 1..={n}"
        )));
    }
    Ok(())
}

impl Circuit {
    /// Target preparation |0> -> |->, counted as two gates everywhere.
    fn target_prep(n: usize, steps: &mut Vec<Step>) {
        steps.push(Step::Gate(GateOp::X(n + 1)));
        steps.push(Step::Gate(GateOp::H(n + 1)));
    }

    fn input_hadamards(n: usize, steps: &mut Vec<Step>) {
        steps.extend((1..=n).map(|q| Step::Gate(GateOp::H(q))));
    }

    /// The derivative oracle U_g expanded as U_F X_i U_F X_i: the two X
    /// gates relabel |x> to |x xor e_i> around the second call, so the
    /// branch picks up f(x) f(x xor e_i).
    fn derivative_oracle(i: usize, steps: &mut Vec<Step>) {
        steps.push(Step::FunctionOracle);
        steps.push(Step::Gate(GateOp::X(i)));
        steps.push(Step::FunctionOracle);
        steps.push(Step::Gate(GateOp::X(i)));
    }

    /// Single-qubit probe for coordinate i: 1 oracle call, 2n+4 gates.
    pub fn qsac(n: usize, i: usize) -> Result<Self> {
        check_layout(n, i)?;
        let mut steps = Vec::with_capacity(2 * n + 5);
        Self::target_prep(n, &mut steps);
        Self::input_hadamards(n, &mut steps);
        steps.push(Step::FunctionOracle);
        Self::input_hadamards(n, &mut steps);
        steps.push(Step::Gate(GateOp::Cz {
            control: i,
            target: n + 1,
        }));
        steps.push(Step::Gate(GateOp::H(n + 1)));
        Ok(Circuit {
            n,
            kind: CircuitKind::Qsac,
            coordinate: i,
            steps,
        })
    }

    /// Deutsch-Jozsa on the derivative: 2 oracle calls, 2n+4 gates.
    pub fn direct(n: usize, i: usize) -> Result<Self> {
        check_layout(n, i)?;
        let mut steps = Vec::with_capacity(2 * n + 6);
        Self::target_prep(n, &mut steps);
        Self::input_hadamards(n, &mut steps);
        Self::derivative_oracle(i, &mut steps);
        Self::input_hadamards(n, &mut steps);
        Ok(Circuit {
            n,
            kind: CircuitKind::Direct,
            coordinate: i,
            steps,
        })
    }

    /// 3-fold Forrelation of (derivative, NOR, derivative): 5 oracle calls
    /// (2 + 1 + 2), 4n+6 gates.
    pub fn forrelation(n: usize, i: usize) -> Result<Self> {
        check_layout(n, i)?;
        let mut steps = Vec::with_capacity(4 * n + 11);
        Self::target_prep(n, &mut steps);
        Self::input_hadamards(n, &mut steps);
        Self::derivative_oracle(i, &mut steps);
        Self::input_hadamards(n, &mut steps);
        steps.push(Step::NorPhaseOracle);
        Self::input_hadamards(n, &mut steps);
        Self::derivative_oracle(i, &mut steps);
        Self::input_hadamards(n, &mut steps);
        Ok(Circuit {
            n,
            kind: CircuitKind::Forrelation,
            coordinate: i,
            steps,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> CircuitKind {
        self.kind
    }

    pub fn coordinate(&self) -> usize {
        self.coordinate
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn qubit_count(&self) -> usize {
        self.n + 1
    }

    /// Oracle applications in the step list (U_F and U_h alike).
    pub fn oracle_calls(&self) -> u64 {
        self.steps
            .iter()
            .filter(|s| matches!(s, Step::FunctionOracle | Step::NorPhaseOracle))
            .count() as u64
    }

    /// Non-oracle gates in the step list. Measurement is not a gate.
    pub fn gate_count(&self) -> u64 {
        self.steps
            .iter()
            .filter(|s| matches!(s, Step::Gate(_)))
            .count() as u64
    }

    /// The qubits whose final marginal constitutes the circuit's outcome.
    pub fn measured_qubits(&self) -> Vec<usize> {
        match self.kind {
            CircuitKind::Qsac => vec![self.n + 1],
            CircuitKind::Direct | CircuitKind::Forrelation => (1..=self.n).collect(),
        }
    }

    /// Executes the step list on |0...0> and returns the final state.
    pub fn run(&self, f: &BooleanFunction) -> Result<QState> {
        if f.n() != self.n {
            return Err(Error::InvalidArgument(format!(
                "circuit over n = {} run with an n = {} function",
                self.n,
                f.n()
            )));
        }
        let inputs: Vec<usize> = (1..=self.n).collect();
        let target = self.n + 1;
        let mut state = zero_state(self.n + 1)?;
        for step in &self.steps {
            match step {
                Step::Gate(gate) => state.apply(*gate)?,
                Step::FunctionOracle => state.apply_bit_oracle(f, &inputs, target)?,
                Step::NorPhaseOracle => {
                    state.apply_phase_oracle(&nor_function(self.n)?, &inputs)?
                }
            }
        }
        Ok(state)
    }

    /// Runs the circuit and packages the exact outcome distribution.
    pub fn evaluate(&self, f: &BooleanFunction) -> Result<CircuitResult> {
        let state = self.run(f)?;
        let measured = self.measured_qubits();
        let exact = state.probabilities(&measured)?;
        let zero_amplitude = match self.kind {
            CircuitKind::Forrelation => Some(input_zero_amplitude(&state)?),
            _ => None,
        };
        Ok(CircuitResult {
            algorithm: self.kind,
            coordinate: self.coordinate,
            measured_qubits: measured.len(),
            exact,
            zero_amplitude,
            oracle_calls: self.oracle_calls(),
            gate_count: self.gate_count(),
            counts: None,
        })
    }
}

/// Signed amplitude of |0...0> on the input register when the target is
/// left in |->: the (0_n, 0) and (0_n, 1) entries hold +amp/sqrt(2) and
/// -amp/sqrt(2).
fn input_zero_amplitude(state: &QState) -> Result<f64> {
    let a0 = state.amplitudes()[0];
    let a1 = state.amplitudes()[1];
    let amp = (a0 - a1) * FRAC_1_SQRT_2;
    if amp.im.abs() > 1e-12 {
        return Err(Error::Invariant(format!(
            "real circuit produced complex amplitude {amp}"
        )));
    }
    Ok(amp.re)
}

/// Sampled counts attached to a circuit result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleRecord {
    pub shots: u64,
    pub seed: u64,
    pub counts: Vec<u64>,
}

/// Outcome of one circuit evaluation for one coordinate.
#[derive(Debug, Clone, Serialize)]
pub struct CircuitResult {
    pub algorithm: CircuitKind,
    /// The probed coordinate i in 1..=n.
    pub coordinate: usize,
    /// Width of the measured register in qubits.
    pub measured_qubits: usize,
    /// Exact outcome distribution over the measured register.
    pub exact: Vec<f64>,
    /// Forrelation only: the signed amplitude of the all-zeros outcome
    /// (its square is `exact[0]`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zero_amplitude: Option<f64>,
    pub oracle_calls: u64,
    pub gate_count: u64,
    /// Present after `with_counts`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counts: Option<SampleRecord>,
}

impl CircuitResult {
    /// Attaches seeded shot counts drawn from the exact distribution.
    pub fn with_counts(mut self, shots: u64, seed: u64) -> Result<Self> {
        let counts = sample_distribution(&self.exact, shots, &mut derive_stream(seed, 0))?;
        self.counts = Some(SampleRecord { shots, seed, counts });
        Ok(self)
    }
}

/// One iteration of the single-qubit probe: exact target distribution
/// (Pr[0] is the squared Walsh mass with w_i = 1).
pub fn qsac_iteration(f: &BooleanFunction, i: usize) -> Result<CircuitResult> {
    Circuit::qsac(f.n(), i)?.evaluate(f)
}

/// One iteration of the derivative Deutsch-Jozsa test: exact input-register
/// distribution (Pr[0_n] is the squared normalized autocorrelation).
pub fn direct_iteration(f: &BooleanFunction, i: usize) -> Result<CircuitResult> {
    Circuit::direct(f.n(), i)?.evaluate(f)
}

/// One iteration of the 3-fold Forrelation test; `zero_amplitude` carries
/// the signed Forrelation value.
pub fn forrelation_iteration(f: &BooleanFunction, i: usize) -> Result<CircuitResult> {
    Circuit::forrelation(f.n(), i)?.evaluate(f)
}

/// The n-input NOR: true exactly on the all-zeros input.
pub fn nor_function(n: usize) -> Result<BooleanFunction> {
    let mut table = vec![false; 1usize << n.min(crate::boolfn::MAX_VARS)];
    table[0] = true;
    BooleanFunction::from_table(n, table)
}

/// 3-fold Forrelation by direct summation over all input triples:
/// 2^{-2n} sum of f1(x1) (-1)^{x1.x2} f2(x2) (-1)^{x2.x3} f3(x3),
/// in character form. O(8^n); refuses n > 6.
pub fn forrelation_bruteforce(
    f1: &BooleanFunction,
    f2: &BooleanFunction,
    f3: &BooleanFunction,
) -> Result<f64> {
    let n = f1.n();
    if f2.n() != n || f3.n() != n {
        return Err(Error::InvalidArgument(format!(
            "forrelation needs equal variable counts, got {}, {}, {}",
            f1.n(),
            f2.n(),
            f3.n()
        )));
    }
    if n > MAX_BRUTEFORCE_VARS {
        return Err(Error::SizeLimit {
            what: "brute-force forrelation",
            n,
            min: 1,
            max: MAX_BRUTEFORCE_VARS,
        });
    }
    let size = 1usize << n;
    let parity = |a: usize, b: usize| -> i64 {
        if (a & b).count_ones().is_multiple_of(2) {
            1
        } else {
            -1
        }
    };
    let mut sum: i64 = 0;
    for x1 in 0..size {
        for x2 in 0..size {
            let head = f1.character(x1) * parity(x1, x2) * f2.character(x2);
            for x3 in 0..size {
                sum += head * parity(x2, x3) * f3.character(x3);
            }
        }
    }
    // Exact: |sum| <= 8^n <= 2^18 and the denominator is a power of two.
    Ok(sum as f64 / (size as f64 * size as f64))
}
