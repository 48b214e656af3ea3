//! Boolean functions as explicit truth tables, with exact spectral analysis.
//!
//! A function on n variables is stored as its full table of 2^n bits. The
//! index convention is fixed project-wide: `x = (x1, ..., xn)` maps to the
//! table index with `x1` as the most significant bit, so variable i lines up
//! with qubit i in the simulator. All spectra are dyadic rationals and are
//! computed through exact integer transforms.

mod anf;
mod transform;

pub use transform::fwht;

use crate::error::{Error, Result};
use serde::Serialize;

/// Smallest variable count accepted from external sources.
pub const MIN_PARSE_VARS: usize = 2;
/// Exact-spectrum ceiling: tables and transforms up to 2^24 entries.
pub const MAX_VARS: usize = 24;
/// Exhaustive enumeration over all 2^(2^n) functions is capped here.
pub const MAX_ENUM_VARS: usize = 3;

/// Truth table of an n-variable Boolean function.
///
/// Immutable after construction; all operations are pure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanFunction {
    n: usize,
    table: Vec<bool>,
}

/// The table index holding F(x1, ..., xn): x1 is the most significant bit.
/// Weight-1 direction for coordinate i (1-based) is `1 << (n - i)`.
pub fn unit_direction(n: usize, i: usize) -> usize {
    assert!(i >= 1 && i <= n, "coordinate {i} outside 1..={n}");
    1 << (n - i)
}

/// Renders a domain point or direction as its bit string (x1 first).
pub fn direction_bits(n: usize, a: usize) -> String {
    (1..=n)
        .map(|i| {
            if a & unit_direction(n, i) != 0 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

impl BooleanFunction {
    /// Wraps an explicit truth table. `table[idx]` is F at the point whose
    /// bits spell `idx` with x1 as MSB.
    ///
    /// Accepts 1 <= n <= 24: single-variable tables are valid internally
    /// (the NOR reduction uses them); external parsers impose n >= 2.
    pub fn from_table(n: usize, table: Vec<bool>) -> Result<Self> {
        if !(1..=MAX_VARS).contains(&n) {
            return Err(Error::SizeLimit {
                what: "truth tables",
                n,
                min: 1,
                max: MAX_VARS,
            });
        }
        if table.len() != 1 << n {
            return Err(Error::InvalidArgument(format!(
                "table for n = {n} must have {} entries, got {}",
                1usize << n,
                table.len()
            )));
        }
        Ok(BooleanFunction { n, table })
    }

    pub fn constant(n: usize, value: bool) -> Result<Self> {
        Self::from_table(n, vec![value; 1 << n.min(MAX_VARS)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Domain size 2^n.
    pub fn domain_size(&self) -> usize {
        self.table.len()
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    /// F at table index `idx` (see the index convention on `unit_direction`).
    pub fn value(&self, idx: usize) -> bool {
        self.table[idx]
    }

    /// Character form (-1)^F: +1 where F = 0, -1 where F = 1.
    pub fn character(&self, idx: usize) -> i64 {
        if self.table[idx] {
            -1
        } else {
            1
        }
    }

    /// Number of inputs where F = 1.
    pub fn weight(&self) -> u64 {
        self.table.iter().filter(|&&b| b).count() as u64
    }

    /// 2^n - 2 wt(F): the excess of +1 over -1 in the character form,
    /// equal to the plain sum of f(x) over the domain.
    pub fn bias(&self) -> i64 {
        (self.domain_size() as i64) - 2 * self.weight() as i64
    }

    /// The derivative in direction `c`: G(x) = F(x XOR c) XOR F(x).
    ///
    /// `c` may have any weight; `c = 0` gives the constant-0 function.
    pub fn derivative(&self, c: usize) -> Result<Self> {
        if c >= self.domain_size() {
            return Err(Error::InvalidArgument(format!(
                "direction {c:#b} outside the domain of an n = {} function",
                self.n
            )));
        }
        let table = (0..self.domain_size())
            .map(|x| self.table[x ^ c] ^ self.table[x])
            .collect();
        Self::from_table(self.n, table)
    }

    /// Walsh-Hadamard spectrum: coefficient at index w is
    /// 2^-n * sum over x of f(x) (-1)^(w.x), with f the character form.
    pub fn walsh_spectrum(&self) -> FourierSpectrum {
        let mut buf: Vec<i64> = (0..self.domain_size()).map(|x| self.character(x)).collect();
        fwht(&mut buf);
        // 2^-n is a power of two, so the division is exact in f64 for n <= 24.
        let scale = 1.0 / self.domain_size() as f64;
        FourierSpectrum {
            n: self.n,
            coeffs: buf.into_iter().map(|w| w as f64 * scale).collect(),
        }
    }

    /// Autocorrelation at every shift, via transform-square-transform:
    /// the squared Walsh coefficients are transformed back, which evaluates
    /// 2^n * sum over u of fhat(u)^2 (-1)^(u.a) without a 4^n loop.
    pub fn autocorrelation_spectrum(&self) -> AutocorrSpectrum {
        let mut buf: Vec<i64> = (0..self.domain_size()).map(|x| self.character(x)).collect();
        fwht(&mut buf);
        for v in &mut buf {
            *v *= *v;
        }
        // Squares are <= 4^n <= 2^48 and non-negative, so the second
        // transform's intermediates stay within i64.
        fwht(&mut buf);
        let size = self.domain_size() as i64;
        let coeffs = buf
            .into_iter()
            .map(|v| {
                debug_assert_eq!(v % size, 0);
                v / size
            })
            .collect();
        AutocorrSpectrum {
            n: self.n,
            coeffs,
        }
    }

    /// Autocorrelation straight from the defining sum, O(4^n). Kept as an
    /// independent cross-check for the transform route; prefer
    /// `autocorrelation_spectrum` for real work.
    pub fn autocorrelation_direct(&self) -> AutocorrSpectrum {
        let coeffs = (0..self.domain_size())
            .map(|a| {
                (0..self.domain_size())
                    .map(|x| self.character(x) * self.character(x ^ a))
                    .sum()
            })
            .collect();
        AutocorrSpectrum {
            n: self.n,
            coeffs,
        }
    }

    /// Per-direction avalanche summary: the n weight-1 autocorrelations,
    /// the distance bound epsilon = half their absolute sum, and the
    /// verdict (all zero = strict avalanche criterion holds).
    pub fn sac_report(&self) -> SacReport {
        let autocorr = self.autocorrelation_spectrum();
        let directional: Vec<DirectionalAutocorrelation> = (1..=self.n)
            .map(|i| {
                let direction = unit_direction(self.n, i);
                DirectionalAutocorrelation {
                    coordinate: i,
                    direction: direction_bits(self.n, direction),
                    value: autocorr.coeff(direction),
                }
            })
            .collect();
        // Each value is even, so the half-sum is an exact integer.
        let abs_sum: u64 = directional.iter().map(|d| d.value.unsigned_abs()).sum();
        let epsilon_exact = abs_sum / 2;
        SacReport {
            n: self.n,
            is_sac: epsilon_exact == 0,
            epsilon_exact,
            directional,
        }
    }

    pub fn to_bits_string(&self) -> String {
        self.table
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }

    /// Hex form of the table, 4 bits per digit, MSB-first. Defined whenever
    /// the table length is a multiple of 4 (always true for n >= 2).
    pub fn to_hex_string(&self) -> Option<String> {
        if !self.domain_size().is_multiple_of(4) {
            return None;
        }
        Some(
            self.table
                .chunks(4)
                .map(|chunk| {
                    let nibble = chunk
                        .iter()
                        .fold(0u32, |acc, &b| (acc << 1) | u32::from(b));
                    char::from_digit(nibble, 16).unwrap()
                })
                .collect(),
        )
    }
}

/// How a function arrives from the outside world.
#[derive(Debug, Clone)]
pub enum FunctionSource {
    /// Truth-table bits, length 2^n, index order as in `unit_direction`.
    Bits { bits: String, n: Option<usize> },
    /// Truth-table hex digits, 4 bits per digit, MSB-first.
    Hex { digits: String, n: Option<usize> },
    /// Algebraic normal form over x1..xn with `+` (XOR), `*` (AND), `1`.
    Anf { expr: String, n: Option<usize> },
    /// Two-line table file: `n=<k>` then bits or 0x-prefixed hex.
    TableFile { text: String },
}

/// Parses any supported source into a function, enforcing 2 <= n <= 24.
pub fn parse_function(source: &FunctionSource) -> Result<BooleanFunction> {
    match source {
        FunctionSource::Bits { bits, n } => parse_bits(bits, *n, 1),
        FunctionSource::Hex { digits, n } => parse_hex(digits, *n, 1),
        FunctionSource::Anf { expr, n } => parse_anf(expr, *n),
        FunctionSource::TableFile { text } => parse_table_file(text),
    }
}

fn check_parse_bounds(n: usize) -> Result<()> {
    if !(MIN_PARSE_VARS..=MAX_VARS).contains(&n) {
        return Err(Error::SizeLimit {
            what: "function parsing",
            n,
            min: MIN_PARSE_VARS,
            max: MAX_VARS,
        });
    }
    Ok(())
}

fn infer_n(table_len: usize, declared: Option<usize>, line: usize) -> Result<usize> {
    let n = match declared {
        Some(n) => {
            check_parse_bounds(n)?;
            n
        }
        None => {
            if !table_len.is_power_of_two() {
                return Err(Error::parse(
                    line,
                    1,
                    format!("table length {table_len} is not a power of two"),
                ));
            }
            let n = table_len.trailing_zeros() as usize;
            check_parse_bounds(n)?;
            n
        }
    };
    if table_len != 1 << n {
        return Err(Error::parse(
            line,
            1,
            format!(
                "table length {table_len} does not match n = {n} (expected {})",
                1usize << n
            ),
        ));
    }
    Ok(n)
}

fn parse_bits(bits: &str, declared: Option<usize>, line: usize) -> Result<BooleanFunction> {
    let mut table = Vec::with_capacity(bits.len());
    for (idx, ch) in bits.chars().enumerate() {
        match ch {
            '0' => table.push(false),
            '1' => table.push(true),
            other => {
                return Err(Error::parse(
                    line,
                    idx + 1,
                    format!("expected '0' or '1', found {other:?}"),
                ));
            }
        }
    }
    let n = infer_n(table.len(), declared, line)?;
    BooleanFunction::from_table(n, table)
}

fn parse_hex(digits: &str, declared: Option<usize>, line: usize) -> Result<BooleanFunction> {
    parse_hex_at(digits, declared, line, 1)
}

fn parse_hex_at(
    digits: &str,
    declared: Option<usize>,
    line: usize,
    start_column: usize,
) -> Result<BooleanFunction> {
    let mut table = Vec::with_capacity(digits.len() * 4);
    for (idx, ch) in digits.chars().enumerate() {
        let nibble = ch.to_digit(16).ok_or_else(|| {
            Error::parse(
                line,
                start_column + idx,
                format!("expected a hex digit, found {ch:?}"),
            )
        })?;
        for bit in (0..4).rev() {
            table.push(nibble & (1 << bit) != 0);
        }
    }
    let n = infer_n(table.len(), declared, line)?;
    BooleanFunction::from_table(n, table)
}

fn parse_anf(expr: &str, declared: Option<usize>) -> Result<BooleanFunction> {
    let parsed = anf::parse_expression(expr)?;
    // Without a declared n the variable span decides, floored at the
    // 2-variable parse minimum so expressions like "x1" stay parseable.
    let n = match declared {
        Some(n) => {
            check_parse_bounds(n)?;
            if parsed.max_var() > n {
                return Err(Error::InvalidArgument(format!(
                    "expression uses x{} but n = {n} was declared",
                    parsed.max_var()
                )));
            }
            n
        }
        None => {
            let n = parsed.max_var().max(MIN_PARSE_VARS);
            check_parse_bounds(n)?;
            n
        }
    };
    BooleanFunction::from_table(n, parsed.truth_table(n))
}

/// Parses the two-line table file format: `n=<k>` then either 2^k bits or
/// `0x` followed by 2^k/4 hex digits. Blank trailing lines are tolerated.
pub fn parse_table_file(text: &str) -> Result<BooleanFunction> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::parse(1, 1, "empty input, expected 'n=<count>'"))?
        .trim();
    let n: usize = header
        .strip_prefix("n=")
        .ok_or_else(|| Error::parse(1, 1, format!("expected 'n=<count>', found {header:?}")))?
        .trim()
        .parse()
        .map_err(|_| Error::parse(1, 3, format!("invalid variable count in {header:?}")))?;
    check_parse_bounds(n)?;

    let body = lines
        .next()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .ok_or_else(|| Error::parse(2, 1, "missing truth-table line"))?;
    for (extra_idx, extra) in lines.enumerate() {
        if !extra.trim().is_empty() {
            return Err(Error::parse(
                3 + extra_idx,
                1,
                "unexpected content after the truth table",
            ));
        }
    }

    if let Some(hex) = body.strip_prefix("0x") {
        parse_hex_at(hex, Some(n), 2, 3)
    } else {
        parse_bits(body, Some(n), 2)
    }
}

/// Walsh-Hadamard spectrum of a function's character form.
///
/// Coefficients are exact multiples of 2^-n represented in f64, which is
/// lossless up to n = 24.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSpectrum {
    n: usize,
    coeffs: Vec<f64>,
}

impl FourierSpectrum {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient at index w (same bit convention as the truth table).
    pub fn coeff(&self, w: usize) -> f64 {
        self.coeffs[w]
    }

    /// Sum of squared coefficients; equals 1 for any genuine spectrum.
    pub fn parseval_sum(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// Splits the squared mass on coordinate i: (sum over w with w_i = 0,
    /// sum over w with w_i = 1). Both halves equal 1/2 for every i exactly
    /// when the function satisfies the avalanche criterion.
    pub fn spectral_halves(&self, i: usize) -> Result<(f64, f64)> {
        if i < 1 || i > self.n {
            return Err(Error::InvalidArgument(format!(
                "coordinate {i} outside 1..={}",
                self.n
            )));
        }
        let mask = unit_direction(self.n, i);
        let mut zero_half = 0.0;
        let mut one_half = 0.0;
        for (w, c) in self.coeffs.iter().enumerate() {
            if w & mask == 0 {
                zero_half += c * c;
            } else {
                one_half += c * c;
            }
        }
        Ok((zero_half, one_half))
    }

    /// Inverts the transform back to the truth table. Round-trips exactly
    /// because the coefficients are dyadic with an in-range denominator.
    pub fn reconstruct(&self) -> Result<BooleanFunction> {
        let size = self.coeffs.len() as f64;
        let mut buf: Vec<i64> = self.coeffs.iter().map(|c| (c * size).round() as i64).collect();
        fwht(&mut buf);
        let table = buf
            .iter()
            .map(|&v| match v / self.coeffs.len() as i64 {
                1 => Ok(false),
                -1 => Ok(true),
                other => Err(Error::Invariant(format!(
                    "reconstructed character value {other} is not +/-1"
                ))),
            })
            .collect::<Result<Vec<bool>>>()?;
        BooleanFunction::from_table(self.n, table)
    }
}

/// Autocorrelation spectrum: entry at index a is the sum over x of
/// f(x) f(x XOR a), an even integer in [-2^n, 2^n].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutocorrSpectrum {
    n: usize,
    coeffs: Vec<i64>,
}

impl AutocorrSpectrum {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, a: usize) -> i64 {
        self.coeffs[a]
    }

    /// Autocorrelation at the weight-1 direction of coordinate i.
    pub fn weight_one(&self, i: usize) -> i64 {
        self.coeffs[unit_direction(self.n, i)]
    }
}

/// Weight-1 autocorrelation of one coordinate, with the direction rendered
/// as a bit string for reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DirectionalAutocorrelation {
    pub coordinate: usize,
    pub direction: String,
    pub value: i64,
}

/// Exact avalanche verdict for one function.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SacReport {
    pub n: usize,
    pub is_sac: bool,
    /// Half the absolute sum of weight-1 autocorrelations: an upper bound
    /// on the Hamming distance to the nearest function with the property.
    pub epsilon_exact: u64,
    pub directional: Vec<DirectionalAutocorrelation>,
}

/// Enumerates every n-variable function in a fixed order (table read as a
/// little-endian integer counting up). Refuses n > 3.
pub fn all_functions(n: usize) -> Result<impl Iterator<Item = BooleanFunction>> {
    if !(1..=MAX_ENUM_VARS).contains(&n) {
        return Err(Error::SizeLimit {
            what: "exhaustive function enumeration",
            n,
            min: 1,
            max: MAX_ENUM_VARS,
        });
    }
    let size = 1usize << n;
    Ok((0u64..1 << size).map(move |code| {
        let table = (0..size).map(|idx| code & (1 << idx) != 0).collect();
        BooleanFunction { n, table }
    }))
}

/// Draws a uniformly random truth table on n variables.
pub fn random_function<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Result<BooleanFunction> {
    if !(1..=MAX_VARS).contains(&n) {
        return Err(Error::SizeLimit {
            what: "random truth tables",
            n,
            min: 1,
            max: MAX_VARS,
        });
    }
    let table = (0..1usize << n).map(|_| rng.random::<bool>()).collect();
    BooleanFunction::from_table(n, table)
}

/// One function whose measured distance to the avalanche set exceeds its
/// reported bound. Existence would falsify the bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistanceBoundViolation {
    pub bits: String,
    pub epsilon_exact: u64,
    pub nearest_distance: u64,
}

/// Outcome of the exhaustive distance-bound audit at small n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistanceBoundAudit {
    pub n: usize,
    pub functions_checked: usize,
    pub sac_functions: usize,
    /// True iff every function's distance to the nearest SAC function is
    /// at most its epsilon_exact.
    pub bound_holds: bool,
    pub violations: Vec<DistanceBoundViolation>,
}

/// Checks, for every n-variable function, that the Hamming distance to the
/// nearest function satisfying the avalanche criterion is bounded by
/// epsilon_exact. Decides empirically by brute force; any violation is
/// reported rather than silently ignored.
pub fn audit_distance_bound(n: usize) -> Result<DistanceBoundAudit> {
    let functions: Vec<BooleanFunction> = all_functions(n)?.collect();
    let codes: Vec<u64> = functions
        .iter()
        .map(|f| {
            f.table
                .iter()
                .enumerate()
                .fold(0u64, |acc, (idx, &b)| acc | (u64::from(b) << idx))
        })
        .collect();
    let sac_codes: Vec<u64> = functions
        .iter()
        .zip(&codes)
        .filter(|(f, _)| f.sac_report().is_sac)
        .map(|(_, &code)| code)
        .collect();
    if sac_codes.is_empty() {
        return Err(Error::Invariant(format!(
            "no function on {n} variables satisfies the avalanche criterion"
        )));
    }

    let mut violations = Vec::new();
    for (f, &code) in functions.iter().zip(&codes) {
        let nearest = sac_codes
            .iter()
            .map(|&sac| (code ^ sac).count_ones() as u64)
            .min()
            .expect("non-empty SAC set");
        let epsilon = f.sac_report().epsilon_exact;
        if nearest > epsilon {
            violations.push(DistanceBoundViolation {
                bits: f.to_bits_string(),
                epsilon_exact: epsilon,
                nearest_distance: nearest,
            });
        }
    }

    Ok(DistanceBoundAudit {
        n,
        functions_checked: functions.len(),
        sac_functions: sac_codes.len(),
        bound_holds: violations.is_empty(),
        violations,
    })
}
