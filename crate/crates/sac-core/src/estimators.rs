//! Seeded statistical estimation of the avalanche distance.
//!
//! Four estimators share one report shape:
//!
//! - `classical`: Monte-Carlo over the derivative's autocorrelation sum,
//!   per direction, with an exhaustive sweep mode for ground truth.
//! - `qsac`: shot samples of the single-qubit probe; the target-qubit mean
//!   X_i maps to a bias magnitude 2^n |1 - 2 X_i|.
//! - `direct` / `forrelation`: shot samples of the n-qubit circuits; the
//!   all-zeros frequency maps back through the square root.
//!
//! Exact mode replaces sample means with the circuit's exact outcome
//! probabilities. Those are integer multiples of 4^-n, so they are snapped
//! to that grid before the algebra; the estimates then reproduce the
//! integer autocorrelations exactly instead of carrying simulator roundoff.
//!
//! Sampling runs one PRNG stream per direction, derived from the master
//! seed, so reports are reproducible under any scheduling and any subset
//! of directions recomputes identically.

use crate::boolfn::{direction_bits, unit_direction, BooleanFunction};
use crate::circuits::{direct_iteration, forrelation_iteration, qsac_iteration, CircuitResult};
use crate::error::{Error, Result};
use crate::qsim::{derive_stream, sample_distribution, RNG_ALGORITHM};
use rand::Rng;
use serde::Serialize;

/// Exact-mode "never lands on all zeros" threshold for the direct test.
pub const DIRECT_ZERO_TOLERANCE: f64 = 1e-12;
/// Exact-mode "certainly all zeros" threshold for the Forrelation test.
pub const FORRELATION_ONE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Classical,
    Qsac,
    Direct,
    Forrelation,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Algorithm::Classical => "classical",
            Algorithm::Qsac => "qsac",
            Algorithm::Direct => "direct",
            Algorithm::Forrelation => "forrelation",
        };
        f.write_str(name)
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(Algorithm::Classical),
            "qsac" => Ok(Algorithm::Qsac),
            "direct" => Ok(Algorithm::Direct),
            "forrelation" => Ok(Algorithm::Forrelation),
            other => Err(Error::InvalidConfig(format!(
                "unknown algorithm {other:?} (expected classical, qsac, direct, forrelation)"
            ))),
        }
    }
}

/// How many samples to spend per direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ShotPlan {
    /// A fixed count.
    Explicit(u64),
    /// Planned from a margin of error via `plan_samples` at the config's
    /// delta, using the variant matching the algorithm.
    FromMargin { t: f64 },
    /// No sampling: use exact circuit probabilities / the full domain.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    pub shots: ShotPlan,
    /// Interval confidence is 1 - delta.
    pub delta: f64,
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn exact(algorithm: Algorithm) -> Self {
        ExperimentConfig {
            algorithm,
            shots: ShotPlan::Exact,
            delta: 0.05,
            seed: 0,
        }
    }

    pub fn explicit(algorithm: Algorithm, shots: u64, delta: f64, seed: u64) -> Self {
        ExperimentConfig {
            algorithm,
            shots: ShotPlan::Explicit(shots),
            delta,
            seed,
        }
    }

    pub fn planned(algorithm: Algorithm, t: f64, delta: f64, seed: u64) -> Self {
        ExperimentConfig {
            algorithm,
            shots: ShotPlan::FromMargin { t },
            delta,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "delta must lie in (0, 1), got {}",
                self.delta
            )));
        }
        match self.shots {
            ShotPlan::Explicit(0) => Err(Error::InvalidConfig("shots must be >= 1".into())),
            ShotPlan::FromMargin { t } if !(t > 0.0 && t.is_finite()) => Err(
                Error::InvalidConfig(format!("margin of error must be positive, got {t}")),
            ),
            _ => Ok(()),
        }
    }

    /// Samples per direction, or None in exact mode.
    pub fn resolved_shots(&self, n: usize) -> Result<Option<u64>> {
        self.validate()?;
        match self.shots {
            ShotPlan::Exact => Ok(None),
            ShotPlan::Explicit(m) => Ok(Some(m)),
            ShotPlan::FromMargin { t } => {
                Ok(Some(plan_samples(t, self.delta, self.algorithm.into(), n)?))
            }
        }
    }
}

/// Which sample-size formula applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PlanVariant {
    /// Single-qubit outcome per run (qsac probe, autocorrelation sketch):
    /// m = (1/2t^2) ln(2/delta), independent of n.
    SingleQubit,
    /// Classical per-direction sampling: m = (2^n/t^2) ln(2/delta). This
    /// keeps the published formula verbatim; it stems from a range-(b-a)
    /// exponent rather than the standard squared-range Hoeffding bound,
    /// which is why it is 2^(n+1) times the single-qubit count rather
    /// than 2^(2n+1). Intervals elsewhere use the squared-range form.
    Classical,
    /// n-qubit outcome per run (direct, forrelation):
    /// m = ((2^n - 1)/2t^2) ln(2/delta).
    NQubit,
}

impl From<Algorithm> for PlanVariant {
    fn from(algorithm: Algorithm) -> Self {
        match algorithm {
            Algorithm::Classical => PlanVariant::Classical,
            Algorithm::Qsac => PlanVariant::SingleQubit,
            Algorithm::Direct | Algorithm::Forrelation => PlanVariant::NQubit,
        }
    }
}

impl std::fmt::Display for PlanVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            PlanVariant::SingleQubit => "qsac/autocorrelation",
            PlanVariant::Classical => "classical",
            PlanVariant::NQubit => "direct/forrelation",
        };
        f.write_str(name)
    }
}

/// Smallest m guaranteeing margin t at confidence 1 - delta under the
/// variant's formula. Natural logarithm throughout.
pub fn plan_samples(t: f64, delta: f64, variant: PlanVariant, n: usize) -> Result<u64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "margin of error must be positive, got {t}"
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    if n > 64 {
        return Err(Error::InvalidConfig(format!(
            "sample planning capped at n = 64, got {n}"
        )));
    }
    let ln_term = (2.0 / delta).ln();
    let m = match variant {
        PlanVariant::SingleQubit => ln_term / (2.0 * t * t),
        PlanVariant::Classical => 2f64.powi(n as i32) * ln_term / (t * t),
        PlanVariant::NQubit => (2f64.powi(n as i32) - 1.0) * ln_term / (2.0 * t * t),
    };
    if !m.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "planned sample count overflows (t = {t}, n = {n})"
        )));
    }
    Ok(m.ceil().max(1.0) as u64)
}

/// Two-sided Hoeffding interval around a sample mean of m values confined
/// to a range of width `range_width`: mean +/- range*sqrt(ln(2/delta)/2m).
pub fn confidence_interval(mean: f64, m: u64, delta: f64, range_width: f64) -> Result<(f64, f64)> {
    if m == 0 {
        return Err(Error::InvalidConfig("sample count must be >= 1".into()));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    if !(range_width > 0.0 && range_width.is_finite()) || !mean.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "invalid interval inputs (mean = {mean}, range = {range_width})"
        )));
    }
    let t = range_width * ((2.0 / delta).ln() / (2.0 * m as f64)).sqrt();
    Ok((mean - t, mean + t))
}

/// A closed interval, kept as a struct so reports serialize field-by-field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    fn point(v: f64) -> Self {
        Interval { lo: v, hi: v }
    }

    fn from_pair((lo, hi): (f64, f64)) -> Self {
        Interval { lo, hi }
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    /// Intersection with [floor, ceil], for mapping through functions only
    /// defined on the feasible range.
    fn clamped(&self, floor: f64, ceil: f64) -> Interval {
        Interval {
            lo: self.lo.max(floor).min(ceil),
            hi: self.hi.min(ceil).max(floor),
        }
    }
}

/// Per-direction estimation record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionRecord {
    pub coordinate: usize,
    pub direction: String,
    /// The sampled quantity on its native scale: the autocorrelation mean
    /// s for classical, the target-qubit mean X_i for qsac, the all-zeros
    /// frequency for direct/forrelation.
    pub sample_mean: f64,
    /// Forrelation only: the signed Forrelation value (exact mode) or its
    /// principal square root estimate (sampled mode).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub forrelation_value: Option<f64>,
    /// Bias-scale estimate for this direction. Signed for classical,
    /// non-negative for the quantum estimators (they estimate magnitudes).
    pub epsilon_a: f64,
    /// Hoeffding interval on the native scale of `sample_mean` (for
    /// classical, on the bias scale epsilon_a = 2^n s directly).
    pub interval: Interval,
    /// `interval` propagated through the epsilon_a map, restricted to the
    /// feasible native range.
    pub epsilon_a_interval: Interval,
}

/// One estimation run: per-direction records plus the aggregate distance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport {
    pub algorithm: Algorithm,
    pub n: usize,
    /// True when exact circuit probabilities replaced sampling.
    pub exact_mode: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shots_per_direction: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rng: Option<&'static str>,
    pub delta: f64,
    /// What `sample_mean` and `interval` measure.
    pub quantity: &'static str,
    pub directions: Vec<DirectionRecord>,
    /// Half the sum of |epsilon_a|: the estimated avalanche distance.
    pub epsilon_estimate: f64,
    /// Per-direction epsilon intervals summed (the propagated, not
    /// jointly-calibrated, error bar).
    pub epsilon_interval: Interval,
    /// Total oracle calls consumed across all directions.
    pub oracle_calls: u64,
    /// Whether the run is consistent with the function satisfying the
    /// avalanche criterion; the rule per algorithm is documented on the
    /// estimator functions.
    pub sac_consistent: bool,
}

/// Round an exact-simulation probability (or signed amplitude) onto the
/// 4^-n grid all circuit outcomes live on. Drift beyond float roundoff is
/// an internal error; n too large for the grid passes through unchanged.
fn snap_to_grid(value: f64, n: usize) -> Result<f64> {
    if 2 * n > 48 {
        return Ok(value);
    }
    let scale = (1u64 << (2 * n)) as f64;
    let snapped = (value * scale).round() / scale;
    if (snapped - value).abs() > 1e-9 {
        return Err(Error::Invariant(format!(
            "simulated value {value} sits {:.3e} off the 4^-{n} grid",
            (snapped - value).abs()
        )));
    }
    Ok(snapped)
}

fn aggregate(directions: &[DirectionRecord]) -> (f64, Interval) {
    let epsilon = 0.5 * directions.iter().map(|d| d.epsilon_a.abs()).sum::<f64>();
    let lo = 0.5 * directions.iter().map(|d| d.epsilon_a_interval.lo).sum::<f64>();
    let hi = 0.5 * directions.iter().map(|d| d.epsilon_a_interval.hi).sum::<f64>();
    (epsilon, Interval { lo, hi })
}

/// Image of a signed-bias interval under |.|.
fn abs_image(interval: Interval) -> Interval {
    let (a, b) = (interval.lo.abs(), interval.hi.abs());
    Interval {
        lo: if interval.contains(0.0) { 0.0 } else { a.min(b) },
        hi: a.max(b),
    }
}

/// Monte-Carlo estimation of each weight-1 autocorrelation: per direction,
/// s averages f(x) f(x + a) over m uniform draws and 2^n s estimates the
/// bias. Exact mode sweeps the whole domain instead of sampling (and then
/// reproduces the integer autocorrelations exactly).
///
/// SAC consistency: exact - the distance is zero; sampled - every
/// direction's bias interval contains 0.
pub fn classical_estimate(f: &BooleanFunction, cfg: &ExperimentConfig) -> Result<EstimateReport> {
    require_algorithm(cfg, Algorithm::Classical)?;
    let n = f.n();
    let size = f.domain_size();
    let shots = cfg.resolved_shots(n)?;

    let mut directions = Vec::with_capacity(n);
    for i in 1..=n {
        let a = unit_direction(n, i);
        let record = match shots {
            None => {
                // Full sweep: the mean over all x is the true value.
                let sum: i64 = (0..size).map(|x| f.character(x) * f.character(x ^ a)).sum();
                let epsilon_a = sum as f64;
                DirectionRecord {
                    coordinate: i,
                    direction: direction_bits(n, a),
                    sample_mean: sum as f64 / size as f64,
                    forrelation_value: None,
                    epsilon_a,
                    interval: Interval::point(epsilon_a),
                    epsilon_a_interval: Interval::point(epsilon_a.abs()),
                }
            }
            Some(m) => {
                let mut rng = derive_stream(cfg.seed, i as u64);
                let mut acc: i64 = 0;
                for _ in 0..m {
                    let x = rng.random_range(0..size);
                    acc += f.character(x) * f.character(x ^ a);
                }
                let s = acc as f64 / m as f64;
                let epsilon_a = size as f64 * s;
                // One sample of f(x)f(x+a) spans [-1, 1]; scaled by 2^n the
                // range width is 2^(n+1).
                let interval = Interval::from_pair(confidence_interval(
                    epsilon_a,
                    m,
                    cfg.delta,
                    2.0 * size as f64,
                )?);
                DirectionRecord {
                    coordinate: i,
                    direction: direction_bits(n, a),
                    sample_mean: s,
                    forrelation_value: None,
                    epsilon_a,
                    interval,
                    epsilon_a_interval: abs_image(
                        interval.clamped(-(size as f64), size as f64),
                    ),
                }
            }
        };
        directions.push(record);
    }

    let samples_per_direction = shots.unwrap_or(size as u64);
    let (epsilon_estimate, epsilon_interval) = aggregate(&directions);
    let sac_consistent = match shots {
        None => epsilon_estimate == 0.0,
        Some(_) => directions.iter().all(|d| d.interval.contains(0.0)),
    };
    Ok(EstimateReport {
        algorithm: Algorithm::Classical,
        n,
        exact_mode: shots.is_none(),
        shots_per_direction: Some(samples_per_direction),
        seed: shots.map(|_| cfg.seed),
        rng: shots.map(|_| RNG_ALGORITHM),
        delta: cfg.delta,
        quantity: "per-direction bias 2^n s; interval on the bias scale (sample range 2^(n+1))",
        directions,
        epsilon_estimate,
        epsilon_interval,
        oracle_calls: 2 * samples_per_direction * n as u64,
        sac_consistent,
    })
}

/// Shot-based estimation through the single-qubit probe: X_i is the mean
/// target outcome over m shots for coordinate i, and 2^n |1 - 2 X_i|
/// estimates |f-breve(e_i)|. Exact mode substitutes the exact outcome
/// probability for X_i.
///
/// SAC consistency: exact - the distance is zero; sampled - every interval
/// on p_i contains 1/2.
pub fn qsac_estimate(f: &BooleanFunction, cfg: &ExperimentConfig) -> Result<EstimateReport> {
    require_algorithm(cfg, Algorithm::Qsac)?;
    quantum_estimate(f, cfg, qsac_iteration, QuantumReadout::TargetMean)
}

/// Shot-based estimation through the derivative Deutsch-Jozsa circuit:
/// the all-zeros frequency estimates (f-breve(e_i)/2^n)^2, so its square
/// root scaled by 2^n estimates |f-breve(e_i)|.
///
/// SAC consistency: exact - every Pr[all zeros] <= 1e-12; sampled - the
/// all-zeros outcome was never observed.
pub fn direct_estimate(f: &BooleanFunction, cfg: &ExperimentConfig) -> Result<EstimateReport> {
    require_algorithm(cfg, Algorithm::Direct)?;
    quantum_estimate(f, cfg, direct_iteration, QuantumReadout::ZerosSqrt)
}

/// Shot-based estimation through the 3-fold Forrelation circuit. In exact
/// mode the signed all-zeros amplitude Phi gives |f-breve(e_i)| =
/// 2^n sqrt((1 - Phi)/2) exactly. Sampled mode only observes Phi^2 and
/// takes the principal (positive) square root, which is faithful near SAC
/// (Phi near +1) but cannot distinguish Phi = -1 from Phi = +1 with a
/// certainty outcome; exact mode resolves the sign.
///
/// SAC consistency: exact - every Phi >= 1 - 1e-9; sampled - every
/// observed outcome was all zeros.
pub fn forrelation_estimate(f: &BooleanFunction, cfg: &ExperimentConfig) -> Result<EstimateReport> {
    require_algorithm(cfg, Algorithm::Forrelation)?;
    quantum_estimate(f, cfg, forrelation_iteration, QuantumReadout::ForrelationRoot)
}

/// Runs the estimator matching `cfg.algorithm`.
pub fn run_estimate(f: &BooleanFunction, cfg: &ExperimentConfig) -> Result<EstimateReport> {
    match cfg.algorithm {
        Algorithm::Classical => classical_estimate(f, cfg),
        Algorithm::Qsac => qsac_estimate(f, cfg),
        Algorithm::Direct => direct_estimate(f, cfg),
        Algorithm::Forrelation => forrelation_estimate(f, cfg),
    }
}

fn require_algorithm(cfg: &ExperimentConfig, expected: Algorithm) -> Result<()> {
    if cfg.algorithm != expected {
        return Err(Error::InvalidConfig(format!(
            "configuration is for {}, estimator is {}",
            cfg.algorithm, expected
        )));
    }
    Ok(())
}

/// How a quantum circuit's measured distribution maps to epsilon_a.
#[derive(Clone, Copy)]
enum QuantumReadout {
    /// qsac: mean of the target bit; epsilon_a = 2^n |1 - 2 X|.
    TargetMean,
    /// direct: all-zeros probability; epsilon_a = 2^n sqrt(p0).
    ZerosSqrt,
    /// forrelation: signed amplitude Phi; epsilon_a = 2^n sqrt((1-Phi)/2).
    ForrelationRoot,
}

fn quantum_estimate(
    f: &BooleanFunction,
    cfg: &ExperimentConfig,
    iteration: fn(&BooleanFunction, usize) -> Result<CircuitResult>,
    readout: QuantumReadout,
) -> Result<EstimateReport> {
    let n = f.n();
    let size = f.domain_size() as f64;
    let shots = cfg.resolved_shots(n)?;

    let mut directions = Vec::with_capacity(n);
    let mut oracle_calls = 0u64;
    let mut all_zero_counts_empty = true;
    let mut all_outcomes_zero = true;
    for i in 1..=n {
        let result = iteration(f, i)?;
        let executions = shots.unwrap_or(1);
        oracle_calls += result.oracle_calls * executions;

        let record = match shots {
            None => {
                let (mean, forrelation_value, epsilon_a) = match readout {
                    QuantumReadout::TargetMean => {
                        let p1 = snap_to_grid(result.exact[1], n)?;
                        (p1, None, size * (1.0 - 2.0 * p1).abs())
                    }
                    QuantumReadout::ZerosSqrt => {
                        let p0 = snap_to_grid(result.exact[0], n)?;
                        (p0, None, size * p0.sqrt())
                    }
                    QuantumReadout::ForrelationRoot => {
                        let phi = snap_to_grid(
                            result.zero_amplitude.expect("forrelation amplitude"),
                            n,
                        )?;
                        let g_zero_sq = ((1.0 - phi) / 2.0).max(0.0);
                        (phi * phi, Some(phi), size * g_zero_sq.sqrt())
                    }
                };
                DirectionRecord {
                    coordinate: i,
                    direction: direction_bits(n, unit_direction(n, i)),
                    sample_mean: mean,
                    forrelation_value,
                    epsilon_a,
                    interval: Interval::point(mean),
                    epsilon_a_interval: Interval::point(epsilon_a),
                }
            }
            Some(m) => {
                let mut rng = derive_stream(cfg.seed, i as u64);
                let counts = sample_distribution(&result.exact, m, &mut rng)?;
                if counts[0] != 0 {
                    all_zero_counts_empty = false;
                }
                if counts[0] != m {
                    all_outcomes_zero = false;
                }
                let (mean, forrelation_value, epsilon_a) = match readout {
                    QuantumReadout::TargetMean => {
                        let x = counts[1] as f64 / m as f64;
                        (x, None, size * (1.0 - 2.0 * x).abs())
                    }
                    QuantumReadout::ZerosSqrt => {
                        let p0 = counts[0] as f64 / m as f64;
                        (p0, None, size * p0.sqrt())
                    }
                    QuantumReadout::ForrelationRoot => {
                        let p0 = counts[0] as f64 / m as f64;
                        let phi = p0.sqrt();
                        let g_zero_sq = ((1.0 - phi) / 2.0).max(0.0);
                        (p0, Some(phi), size * g_zero_sq.sqrt())
                    }
                };
                let interval =
                    Interval::from_pair(confidence_interval(mean, m, cfg.delta, 1.0)?);
                let feasible = interval.clamped(0.0, 1.0);
                let epsilon_a_interval = match readout {
                    QuantumReadout::TargetMean => {
                        let at = |x: f64| size * (1.0 - 2.0 * x).abs();
                        let (a, b) = (at(feasible.lo), at(feasible.hi));
                        Interval {
                            lo: if feasible.contains(0.5) { 0.0 } else { a.min(b) },
                            hi: a.max(b),
                        }
                    }
                    QuantumReadout::ZerosSqrt => Interval {
                        lo: size * feasible.lo.sqrt(),
                        hi: size * feasible.hi.sqrt(),
                    },
                    QuantumReadout::ForrelationRoot => {
                        // epsilon_a falls as p0 rises.
                        let at = |p0: f64| {
                            let phi = p0.sqrt();
                            size * (((1.0 - phi) / 2.0).max(0.0)).sqrt()
                        };
                        Interval {
                            lo: at(feasible.hi),
                            hi: at(feasible.lo),
                        }
                    }
                };
                DirectionRecord {
                    coordinate: i,
                    direction: direction_bits(n, unit_direction(n, i)),
                    sample_mean: mean,
                    forrelation_value,
                    epsilon_a,
                    interval,
                    epsilon_a_interval,
                }
            }
        };
        directions.push(record);
    }

    let (epsilon_estimate, epsilon_interval) = aggregate(&directions);
    let algorithm = cfg.algorithm;
    let sac_consistent = match (shots, readout) {
        (None, QuantumReadout::TargetMean) => epsilon_estimate == 0.0,
        (None, QuantumReadout::ZerosSqrt) => directions
            .iter()
            .all(|d| d.sample_mean <= DIRECT_ZERO_TOLERANCE),
        (None, QuantumReadout::ForrelationRoot) => directions
            .iter()
            .all(|d| d.forrelation_value.unwrap_or(0.0) >= 1.0 - FORRELATION_ONE_TOLERANCE),
        (Some(_), QuantumReadout::TargetMean) => {
            directions.iter().all(|d| d.interval.contains(0.5))
        }
        (Some(_), QuantumReadout::ZerosSqrt) => all_zero_counts_empty,
        (Some(_), QuantumReadout::ForrelationRoot) => all_outcomes_zero,
    };

    Ok(EstimateReport {
        algorithm,
        n,
        exact_mode: shots.is_none(),
        shots_per_direction: shots,
        seed: shots.map(|_| cfg.seed),
        rng: shots.map(|_| RNG_ALGORITHM),
        delta: cfg.delta,
        quantity: match readout {
            QuantumReadout::TargetMean => {
                "target-qubit mean X_i; interval on the outcome probability (range 1)"
            }
            QuantumReadout::ZerosSqrt | QuantumReadout::ForrelationRoot => {
                "all-zeros outcome frequency; interval on that probability (range 1)"
            }
        },
        directions,
        epsilon_estimate,
        epsilon_interval,
        oracle_calls,
        sac_consistent,
    })
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

    fn from_anf(expr: &str) -> BooleanFunction {
        parse_function(&FunctionSource::Anf {
            expr: expr.into(),
            n: None,
        })
        .unwrap()
    }

    #[test]
    fn plan_samples_frozen_values() {
        assert_eq!(
            plan_samples(0.05, 0.05, PlanVariant::SingleQubit, 2).unwrap(),
            738
        );
        assert_eq!(
            plan_samples(0.05, 0.05, PlanVariant::SingleQubit, 20).unwrap(),
            738
        );
        assert_eq!(plan_samples(0.1, 0.1, PlanVariant::SingleQubit, 4).unwrap(), 150);
        assert_eq!(plan_samples(1.0, 0.05, PlanVariant::Classical, 4).unwrap(), 60);
        assert_eq!(
            plan_samples(0.05, 0.05, PlanVariant::Classical, 8).unwrap(),
            377_742
        );
        assert_eq!(plan_samples(0.05, 0.05, PlanVariant::NQubit, 3).unwrap(), 5165);
    }

    #[test]
    fn plan_samples_rejects_bad_parameters() {
        assert!(plan_samples(0.0, 0.05, PlanVariant::SingleQubit, 2).is_err());
        assert!(plan_samples(-0.1, 0.05, PlanVariant::SingleQubit, 2).is_err());
        assert!(plan_samples(0.05, 0.0, PlanVariant::SingleQubit, 2).is_err());
        assert!(plan_samples(0.05, 1.0, PlanVariant::SingleQubit, 2).is_err());
    }

    #[test]
    fn confidence_interval_inverts_the_planner() {
        let (lo, hi) = confidence_interval(0.5, 738, 0.05, 1.0).unwrap();
        assert_abs_diff_eq!(hi - lo, 0.1, epsilon = 2e-4);

        let (lo2, hi2) = confidence_interval(0.5, 1476, 0.05, 1.0).unwrap();
        assert_abs_diff_eq!((hi - lo) / (hi2 - lo2), 2f64.sqrt(), epsilon = 1e-12);

        let (lo3, hi3) = confidence_interval(0.5, 738, 0.05, 2.0).unwrap();
        assert_abs_diff_eq!(hi3 - lo3, 2.0 * (hi - lo), epsilon = 1e-12);

        assert!(confidence_interval(0.5, 0, 0.05, 1.0).is_err());
        assert!(confidence_interval(0.5, 10, 2.0, 1.0).is_err());
    }

    #[test]
    fn exhaustive_classical_reproduces_the_exact_distance() {
        for bits in ["0011", "0001", "01100101", "0110100110010110"] {
            let f = from_bits(bits);
            let report =
                classical_estimate(&f, &ExperimentConfig::exact(Algorithm::Classical)).unwrap();
            assert_eq!(
                report.epsilon_estimate,
                f.sac_report().epsilon_exact as f64,
                "{bits}"
            );
            assert_eq!(report.shots_per_direction, Some(f.domain_size() as u64));
            assert!(report.exact_mode);
        }
    }

    #[test]
    fn classical_keeps_direction_signs() {
        let x1 = from_bits("0011");
        let report =
            classical_estimate(&x1, &ExperimentConfig::exact(Algorithm::Classical)).unwrap();
        assert_eq!(report.directions[0].epsilon_a, -4.0);
        assert_eq!(report.directions[1].epsilon_a, 4.0);
        assert_eq!(report.epsilon_estimate, 4.0);
        assert_eq!(report.oracle_calls, 2 * 4 * 2);
    }

    #[test]
    fn classical_constant_integrand_is_exact_at_any_m() {
        // For F = x1 and direction (1,0) every draw contributes -1.
        let x1 = from_bits("0011");
        let cfg = ExperimentConfig::explicit(Algorithm::Classical, 37, 0.05, 123);
        let report = classical_estimate(&x1, &cfg).unwrap();
        assert_eq!(report.directions[0].sample_mean, -1.0);
        assert_eq!(report.directions[0].epsilon_a, -4.0);
    }

    #[test]
    fn exact_qsac_reproduces_the_exact_distance() {
        for bits in ["0011", "0001", "01100101", "0110100110010110"] {
            let f = from_bits(bits);
            let report = qsac_estimate(&f, &ExperimentConfig::exact(Algorithm::Qsac)).unwrap();
            assert_eq!(
                report.epsilon_estimate,
                f.sac_report().epsilon_exact as f64,
                "{bits}"
            );
        }
    }

    #[test]
    fn exact_qsac_direction_values() {
        let x1 = from_bits("0011");
        let report = qsac_estimate(&x1, &ExperimentConfig::exact(Algorithm::Qsac)).unwrap();
        // i = 1: target reads 0 with certainty; i = 2: 1 with certainty.
        assert_eq!(report.directions[0].sample_mean, 0.0);
        assert_eq!(report.directions[0].epsilon_a, 4.0);
        assert_eq!(report.directions[1].sample_mean, 1.0);
        assert_eq!(report.directions[1].epsilon_a, 4.0);
        assert_eq!(report.oracle_calls, 2);
    }

    #[test]
    fn sampled_qsac_concentrates_on_a_sac_function() {
        let bent = from_anf("x1*x2 + x3*x4");
        let cfg = ExperimentConfig::planned(Algorithm::Qsac, 0.05, 0.05, 7);
        let report = qsac_estimate(&bent, &cfg).unwrap();
        assert_eq!(report.shots_per_direction, Some(738));
        for d in &report.directions {
            assert!((d.sample_mean - 0.5).abs() <= 0.2, "{d:?}");
            assert!(d.interval.contains(0.5), "{d:?}");
        }
        assert!(report.sac_consistent);
        assert_eq!(report.oracle_calls, 738 * 4);
        assert_eq!(report.rng, Some(crate::qsim::RNG_ALGORITHM));
    }

    #[test]
    fn exact_direct_and_forrelation_reproduce_the_exact_distance() {
        for bits in ["0011", "0001", "01100101"] {
            let f = from_bits(bits);
            let expected = f.sac_report().epsilon_exact as f64;
            let direct =
                direct_estimate(&f, &ExperimentConfig::exact(Algorithm::Direct)).unwrap();
            assert_eq!(direct.epsilon_estimate, expected, "direct {bits}");
            let forrelation =
                forrelation_estimate(&f, &ExperimentConfig::exact(Algorithm::Forrelation))
                    .unwrap();
            assert_eq!(forrelation.epsilon_estimate, expected, "forrelation {bits}");
        }
    }

    #[test]
    fn direct_sampled_never_sees_zeros_on_a_sac_function() {
        let bent = from_anf("x1*x2 + x3*x4");
        let cfg = ExperimentConfig::explicit(Algorithm::Direct, 10_000, 0.05, 3);
        let report = direct_estimate(&bent, &cfg).unwrap();
        for d in &report.directions {
            assert_eq!(d.sample_mean, 0.0);
            assert_eq!(d.epsilon_a, 0.0);
        }
        assert!(report.sac_consistent);
        assert_eq!(report.oracle_calls, 2 * 10_000 * 4);
    }

    #[test]
    fn forrelation_exact_flags_negative_phi_as_inconsistent() {
        // F = x1: both derivatives are constant, Phi = -1 on each
        // coordinate. Pr[all zeros] is 1, but the signed amplitude says
        // the derivative is maximally unbalanced.
        let x1 = from_bits("0011");
        let report =
            forrelation_estimate(&x1, &ExperimentConfig::exact(Algorithm::Forrelation)).unwrap();
        assert_eq!(report.directions[0].forrelation_value, Some(-1.0));
        assert_eq!(report.directions[0].sample_mean, 1.0);
        assert_eq!(report.epsilon_estimate, 4.0);
        assert!(!report.sac_consistent);
    }

    #[test]
    fn reports_are_deterministic_given_the_seed() {
        let f = from_bits("01100101");
        let cfg = ExperimentConfig::explicit(Algorithm::Qsac, 500, 0.1, 99);
        let a = qsac_estimate(&f, &cfg).unwrap();
        let b = qsac_estimate(&f, &cfg).unwrap();
        assert_eq!(a, b);
        let c = qsac_estimate(
            &f,
            &ExperimentConfig::explicit(Algorithm::Qsac, 500, 0.1, 100),
        )
        .unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn config_validation() {
        let f = from_bits("0110");
        let wrong = ExperimentConfig::exact(Algorithm::Qsac);
        assert!(classical_estimate(&f, &wrong).is_err());
        assert!(qsac_estimate(&f, &ExperimentConfig::explicit(Algorithm::Qsac, 0, 0.05, 0)).is_err());
        assert!(
            qsac_estimate(&f, &ExperimentConfig::explicit(Algorithm::Qsac, 10, 1.5, 0)).is_err()
        );
        assert!(
            qsac_estimate(&f, &ExperimentConfig::planned(Algorithm::Qsac, -0.05, 0.05, 0))
                .is_err()
        );
    }

    #[test]
    fn run_estimate_dispatches_on_the_config() {
        let f = from_bits("0110");
        let report = run_estimate(&f, &ExperimentConfig::exact(Algorithm::Direct)).unwrap();
        assert_eq!(report.algorithm, Algorithm::Direct);
    }

    #[test]
    fn algorithm_parsing_round_trips() {
        for name in ["classical", "qsac", "direct", "forrelation"] {
            let parsed: Algorithm = name.parse().unwrap();
            assert_eq!(parsed.to_string(), name);
        }
        assert!("quantum".parse::<Algorithm>().is_err());
    }
}
