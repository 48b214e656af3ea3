//! Payload types and rendering for the four commands.
//!
//! Every run produces one payload, rendered to the selected format:
//! text (aligned tables), csv (analyze/estimate flatten to key,value
//! rows; plan/table stay rectangular), or json (pretty-printed, one
//! field per line, so the timestamp can be filtered line-wise when
//! comparing reruns).

use crate::Format;
use sac_core::estimators::{DirectionRecord, EstimateReport};
use sac_core::{BooleanFunction, ComplexityRow};
use serde::Serialize;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Provenance block embedded in analyze/estimate reports. Rerunning the
/// same manifest reproduces the payload byte for byte apart from
/// `timestamp_unix`, which always renders on a line of its own.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: &'static str,
    pub source_kind: &'static str,
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub function_hex: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algorithm: Option<String>,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exhaustive: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rng: Option<&'static str>,
    pub version: &'static str,
    pub timestamp_unix: u64,
}

impl RunManifest {
    fn text_block(&self) -> String {
        let mut out = String::new();
        line(&mut out, "command", &self.command);
        line(&mut out, "source_kind", &self.source_kind);
        line(&mut out, "source", &self.source);
        opt_line(&mut out, "function_hex", &self.function_hex);
        opt_line(&mut out, "algorithm", &self.algorithm);
        line(&mut out, "n", &self.n);
        opt_line(&mut out, "t", &self.t);
        opt_line(&mut out, "delta", &self.delta);
        opt_line(&mut out, "shots", &self.shots);
        opt_line(&mut out, "exhaustive", &self.exhaustive);
        opt_line(&mut out, "seed", &self.seed);
        opt_line(&mut out, "rng", &self.rng);
        line(&mut out, "version", &self.version);
        line(&mut out, "timestamp_unix", &self.timestamp_unix);
        out
    }

    fn kv_rows(&self, out: &mut String) {
        kv(out, "manifest.command", &self.command);
        kv(out, "manifest.source_kind", &self.source_kind);
        kv(out, "manifest.source", &self.source);
        opt_kv(out, "manifest.function_hex", &self.function_hex);
        opt_kv(out, "manifest.algorithm", &self.algorithm);
        kv(out, "manifest.n", &self.n);
        opt_kv(out, "manifest.t", &self.t);
        opt_kv(out, "manifest.delta", &self.delta);
        opt_kv(out, "manifest.shots", &self.shots);
        opt_kv(out, "manifest.exhaustive", &self.exhaustive);
        opt_kv(out, "manifest.seed", &self.seed);
        opt_kv(out, "manifest.rng", &self.rng);
        kv(out, "manifest.version", &self.version);
        kv(out, "manifest.timestamp_unix", &self.timestamp_unix);
    }
}

/// Parameter echo for plan/table output, which embeds no timestamp so
/// rendering stays byte-stable for fixed parameters.
#[derive(Debug, Clone, Serialize)]
pub struct ParamManifest {
    pub command: &'static str,
    pub n: usize,
    pub t: f64,
    pub delta: f64,
    pub version: &'static str,
}

#[derive(Debug, Serialize)]
struct AnalyzeDirection {
    coordinate: usize,
    direction: String,
    autocorrelation: i64,
    half_zero: f64,
    half_one: f64,
}

#[derive(Debug, Serialize)]
struct AnalyzeAggregate {
    n: usize,
    weight: u64,
    bias: i64,
    epsilon_exact: u64,
}

#[derive(Debug, Serialize)]
pub struct AnalyzePayload {
    manifest: RunManifest,
    per_direction: Vec<AnalyzeDirection>,
    aggregate: AnalyzeAggregate,
    /// Exact analysis carries no statistical intervals.
    intervals: (),
    verdict: AnalyzeVerdict,
}

#[derive(Debug, Serialize)]
struct AnalyzeVerdict {
    is_sac: bool,
}

impl AnalyzePayload {
    pub fn new(manifest: RunManifest, f: &BooleanFunction) -> Self {
        let report = f.sac_report();
        let spectrum = f.walsh_spectrum();
        let per_direction = report
            .directional
            .iter()
            .map(|d| {
                let (half_zero, half_one) = spectrum
                    .spectral_halves(d.coordinate)
                    .expect("report coordinates are within arity");
                AnalyzeDirection {
                    coordinate: d.coordinate,
                    direction: d.direction.clone(),
                    autocorrelation: d.value,
                    half_zero,
                    half_one,
                }
            })
            .collect();
        AnalyzePayload {
            manifest,
            per_direction,
            aggregate: AnalyzeAggregate {
                n: f.n(),
                weight: f.weight(),
                bias: f.bias(),
                epsilon_exact: report.epsilon_exact,
            },
            intervals: (),
            verdict: AnalyzeVerdict {
                is_sac: report.is_sac,
            },
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => to_json(self),
            Format::Text => {
                let mut out = self.manifest.text_block();
                out.push('\n');
                let rows: Vec<Vec<String>> = self
                    .per_direction
                    .iter()
                    .map(|d| {
                        vec![
                            d.coordinate.to_string(),
                            d.direction.clone(),
                            d.autocorrelation.to_string(),
                            d.half_zero.to_string(),
                            d.half_one.to_string(),
                        ]
                    })
                    .collect();
                out.push_str(&aligned_table(
                    &["i", "direction", "autocorrelation", "sum[w_i=0]", "sum[w_i=1]"],
                    &rows,
                ));
                out.push('\n');
                line(&mut out, "weight", &self.aggregate.weight);
                line(&mut out, "bias", &self.aggregate.bias);
                line(&mut out, "epsilon_exact", &self.aggregate.epsilon_exact);
                line(
                    &mut out,
                    "verdict",
                    &if self.verdict.is_sac { "SAC" } else { "not SAC" },
                );
                out
            }
            Format::Csv => {
                let mut out = String::from("key,value\n");
                self.manifest.kv_rows(&mut out);
                for d in &self.per_direction {
                    let p = format!("per_direction.{}", d.coordinate);
                    kv(&mut out, &format!("{p}.direction"), &d.direction);
                    kv(&mut out, &format!("{p}.autocorrelation"), &d.autocorrelation);
                    kv(&mut out, &format!("{p}.half_zero"), &d.half_zero);
                    kv(&mut out, &format!("{p}.half_one"), &d.half_one);
                }
                kv(&mut out, "aggregate.weight", &self.aggregate.weight);
                kv(&mut out, "aggregate.bias", &self.aggregate.bias);
                kv(&mut out, "aggregate.epsilon_exact", &self.aggregate.epsilon_exact);
                kv(&mut out, "verdict.is_sac", &self.verdict.is_sac);
                out
            }
        }
    }
}

#[derive(Debug, Serialize)]
struct EstimateAggregate {
    algorithm: sac_core::Algorithm,
    n: usize,
    exact_mode: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    shots_per_direction: Option<u64>,
    epsilon_estimate: f64,
    oracle_calls: u64,
}

#[derive(Debug, Serialize)]
struct EstimateIntervals {
    delta: f64,
    confidence: f64,
    quantity: &'static str,
    epsilon: sac_core::estimators::Interval,
}

#[derive(Debug, Serialize)]
struct EstimateVerdict {
    sac_consistent: bool,
}

#[derive(Debug, Serialize)]
pub struct EstimatePayload {
    manifest: RunManifest,
    per_direction: Vec<DirectionRecord>,
    aggregate: EstimateAggregate,
    intervals: EstimateIntervals,
    verdict: EstimateVerdict,
}

impl EstimatePayload {
    pub fn new(manifest: RunManifest, report: EstimateReport) -> Self {
        EstimatePayload {
            manifest,
            aggregate: EstimateAggregate {
                algorithm: report.algorithm,
                n: report.n,
                exact_mode: report.exact_mode,
                shots_per_direction: report.shots_per_direction,
                epsilon_estimate: report.epsilon_estimate,
                oracle_calls: report.oracle_calls,
            },
            intervals: EstimateIntervals {
                delta: report.delta,
                confidence: 1.0 - report.delta,
                quantity: report.quantity,
                epsilon: report.epsilon_interval,
            },
            verdict: EstimateVerdict {
                sac_consistent: report.sac_consistent,
            },
            per_direction: report.directions,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => to_json(self),
            Format::Text => {
                let mut out = self.manifest.text_block();
                out.push('\n');
                line(&mut out, "quantity", &self.intervals.quantity);
                let with_phi = self.per_direction.iter().any(|d| d.forrelation_value.is_some());
                let mut header = vec![
                    "i",
                    "direction",
                    "sample_mean",
                    "epsilon_a",
                    "interval",
                    "epsilon_a_interval",
                ];
                if with_phi {
                    header.push("phi");
                }
                let rows: Vec<Vec<String>> = self
                    .per_direction
                    .iter()
                    .map(|d| {
                        let mut row = vec![
                            d.coordinate.to_string(),
                            d.direction.clone(),
                            d.sample_mean.to_string(),
                            d.epsilon_a.to_string(),
                            format!("[{}, {}]", d.interval.lo, d.interval.hi),
                            format!("[{}, {}]", d.epsilon_a_interval.lo, d.epsilon_a_interval.hi),
                        ];
                        if with_phi {
                            row.push(
                                d.forrelation_value.map(|v| v.to_string()).unwrap_or_default(),
                            );
                        }
                        row
                    })
                    .collect();
                out.push_str(&aligned_table(&header, &rows));
                out.push('\n');
                line(&mut out, "epsilon_estimate", &self.aggregate.epsilon_estimate);
                line(
                    &mut out,
                    "epsilon_interval",
                    &format!("[{}, {}]", self.intervals.epsilon.lo, self.intervals.epsilon.hi),
                );
                line(&mut out, "confidence", &self.intervals.confidence);
                line(&mut out, "oracle_calls", &self.aggregate.oracle_calls);
                line(&mut out, "sac_consistent", &self.verdict.sac_consistent);
                out
            }
            Format::Csv => {
                let mut out = String::from("key,value\n");
                self.manifest.kv_rows(&mut out);
                for d in &self.per_direction {
                    let p = format!("per_direction.{}", d.coordinate);
                    kv(&mut out, &format!("{p}.direction"), &d.direction);
                    kv(&mut out, &format!("{p}.sample_mean"), &d.sample_mean);
                    opt_kv(&mut out, &format!("{p}.phi"), &d.forrelation_value);
                    kv(&mut out, &format!("{p}.epsilon_a"), &d.epsilon_a);
                    kv(&mut out, &format!("{p}.interval_lo"), &d.interval.lo);
                    kv(&mut out, &format!("{p}.interval_hi"), &d.interval.hi);
                    kv(&mut out, &format!("{p}.epsilon_a_lo"), &d.epsilon_a_interval.lo);
                    kv(&mut out, &format!("{p}.epsilon_a_hi"), &d.epsilon_a_interval.hi);
                }
                kv(&mut out, "aggregate.epsilon_estimate", &self.aggregate.epsilon_estimate);
                kv(&mut out, "aggregate.oracle_calls", &self.aggregate.oracle_calls);
                kv(&mut out, "intervals.delta", &self.intervals.delta);
                kv(&mut out, "intervals.confidence", &self.intervals.confidence);
                kv(&mut out, "intervals.epsilon_lo", &self.intervals.epsilon.lo);
                kv(&mut out, "intervals.epsilon_hi", &self.intervals.epsilon.hi);
                kv(&mut out, "verdict.sac_consistent", &self.verdict.sac_consistent);
                out
            }
        }
    }
}

#[derive(Debug, Serialize)]
pub struct PlanRow {
    pub variant: &'static str,
    pub formula: &'static str,
    pub samples: u64,
    pub n_independent: bool,
}

#[derive(Debug, Serialize)]
pub struct PlanPayload {
    pub manifest: ParamManifest,
    pub rows: Vec<PlanRow>,
    pub note: &'static str,
}

impl PlanPayload {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => to_json(self),
            Format::Text => {
                let mut out = format!(
                    "samples per direction at margin t = {}, uncertainty delta = {}, n = {}\n\n",
                    self.manifest.t, self.manifest.delta, self.manifest.n
                );
                let rows: Vec<Vec<String>> = self
                    .rows
                    .iter()
                    .map(|r| {
                        vec![r.variant.to_string(), r.formula.to_string(), r.samples.to_string()]
                    })
                    .collect();
                out.push_str(&aligned_table(&["variant", "formula", "samples"], &rows));
                out.push('\n');
                line(&mut out, "note", &self.note);
                out
            }
            Format::Csv => {
                let mut out = String::from("variant,formula,samples,n_independent\n");
                for r in &self.rows {
                    out.push_str(&format!(
                        "{},{},{},{}\n",
                        csv_field(r.variant),
                        csv_field(r.formula),
                        r.samples,
                        r.n_independent
                    ));
                }
                out
            }
        }
    }
}

#[derive(Debug, Serialize)]
pub struct TablePayload {
    pub manifest: ParamManifest,
    pub convention: &'static str,
    pub rows: Vec<ComplexityRow>,
}

impl TablePayload {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => to_json(self),
            Format::Text => {
                let mut out = format!(
                    "cost table at n = {}, t = {}, delta = {}\n",
                    self.manifest.n, self.manifest.t, self.manifest.delta
                );
                line(&mut out, "convention", &self.convention);
                out.push('\n');
                let rows: Vec<Vec<String>> = self
                    .rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.algorithm.to_string(),
                            r.query_symbolic.to_string(),
                            r.query_calls.to_string(),
                            r.sample_symbolic.to_string(),
                            r.samples.to_string(),
                            r.qubits_symbolic.to_string(),
                            r.qubits.map(|q| q.to_string()).unwrap_or_else(|| "-".into()),
                            r.per_iteration.symbolic.to_string(),
                            r.note.unwrap_or_default().to_string(),
                        ]
                    })
                    .collect();
                out.push_str(&aligned_table(
                    &[
                        "algorithm",
                        "query",
                        "calls",
                        "samples",
                        "m",
                        "qubits",
                        "at_n",
                        "per_iteration",
                        "note",
                    ],
                    &rows,
                ));
                out
            }
            Format::Csv => {
                let mut out = String::from(
                    "algorithm,query,query_calls,samples_formula,samples,qubits,qubits_at_n,oracle_calls_per_iteration,gates_per_iteration,note\n",
                );
                for r in &self.rows {
                    out.push_str(&format!(
                        "{},{},{},{},{},{},{},{},{},{}\n",
                        csv_field(&r.algorithm.to_string()),
                        csv_field(r.query_symbolic),
                        r.query_calls,
                        csv_field(r.sample_symbolic),
                        r.samples,
                        csv_field(r.qubits_symbolic),
                        r.qubits.map(|q| q.to_string()).unwrap_or_default(),
                        r.per_iteration.oracle_calls,
                        r.per_iteration.gates.map(|g| g.to_string()).unwrap_or_default(),
                        csv_field(r.note.unwrap_or_default()),
                    ));
                }
                out
            }
        }
    }
}

fn to_json<T: Serialize>(payload: &T) -> String {
    let mut out = serde_json::to_string_pretty(payload).expect("payloads serialize");
    out.push('\n');
    out
}

fn line(out: &mut String, key: &str, value: &impl std::fmt::Display) {
    out.push_str(&format!("{key}: {value}\n"));
}

fn opt_line<T: std::fmt::Display>(out: &mut String, key: &str, value: &Option<T>) {
    if let Some(v) = value {
        line(out, key, v);
    }
}

fn kv(out: &mut String, key: &str, value: &impl std::fmt::Display) {
    out.push_str(&format!("{},{}\n", csv_field(key), csv_field(&value.to_string())));
}

fn opt_kv<T: std::fmt::Display>(out: &mut String, key: &str, value: &Option<T>) {
    if let Some(v) = value {
        kv(out, key, v);
    }
}

/// RFC 4180 quoting: only when the field needs it.
fn csv_field(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Left-aligned columns, two spaces between, widths from content.
fn aligned_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let render_row = |cells: &[String]| -> String {
        let mut parts = Vec::with_capacity(cells.len());
        for (i, cell) in cells.iter().enumerate() {
            parts.push(format!("{:<width$}", cell, width = widths[i]));
        }
        let mut row = parts.join("  ");
        while row.ends_with(' ') {
            row.pop();
        }
        row.push('\n');
        row
    };
    let header_cells: Vec<String> = header.iter().map(|h| h.to_string()).collect();
    let mut out = render_row(&header_cells);
    for row in rows {
        out.push_str(&render_row(row));
    }
    out
}
