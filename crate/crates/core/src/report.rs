//! Machine-readable report envelopes emitted by the CLI.
//!
//! JSON is the lossless form: every big integer is a decimal string and
//! every envelope re-parses to an equal value. CSV rows follow fixed column
//! orders tied to [`SCHEMA_VERSION`]. Tables are for people and carry no
//! stability promise.

use std::fmt::Write as _;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::bigstr;
use crate::bounds::BoundReport;
use crate::error::{Error, Result};
use crate::precision;
use crate::stepper::{StepWitness, WalkConfig};
use crate::suites::SuiteResult;
use crate::walker::{SimulationOutcome, TerminationCertificate};

/// Version of the JSON layout and of every CSV column order.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub command: String,
    pub version: String,
    pub schema_version: u32,
    pub config: Option<WalkConfig>,
    pub payload: Payload,
    pub evaluation_notes: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum Payload {
    BoundReport(BoundReport),
    Witnesses(Vec<StepWitness>),
    Walk(WalkPayload),
    Certificate(TerminationCertificate),
    Suites(Vec<SuiteResult>),
}

/// A simulated or longest walk with its visited values spelled out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkPayload {
    pub outcome: SimulationOutcome,
    /// Steps taken.
    pub length: u64,
    /// Values visited, start included.
    pub nodes: u64,
    #[serde(with = "bigstr::vec")]
    pub values: Vec<BigUint>,
}

impl WalkPayload {
    pub fn new(cfg: &WalkConfig, outcome: SimulationOutcome) -> Result<Self> {
        let values = outcome.walk().values(cfg)?;
        let length = outcome.walk().len();
        Ok(WalkPayload { outcome, length, nodes: length + 1, values })
    }
}

impl ReportEnvelope {
    pub fn new(command: &str, config: Option<WalkConfig>, payload: Payload) -> Self {
        let evaluation_notes = match &payload {
            Payload::BoundReport(_) => format!(
                "all indices and thresholds exact; closed_form values: {}; \
                 walk length counts steps, l_max_nodes counts values; 0 -> 0 is not a step",
                precision::EVALUATION_METHOD
            ),
            _ => "exact integer arithmetic; big integers are decimal strings".to_string(),
        };
        ReportEnvelope {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            schema_version: SCHEMA_VERSION,
            config,
            payload,
            evaluation_notes,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Domain(format!("serialization failed: {e}")))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Domain(format!("cannot parse report: {e}")))
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Domain(format!("csv output failed: {e}"));
        match &self.payload {
            Payload::BoundReport(r) => {
                w.write_record([
                    "schema_version", "p", "q", "base", "digits", "n_star", "k_paper", "k_exact", "m_star",
                    "threshold", "theorem_bound", "closed_form", "l_max", "l_max_nodes", "satisfied",
                ])
                .map_err(io)?;
                w.write_record([
                    SCHEMA_VERSION.to_string(),
                    r.cfg.params.p().to_string(),
                    r.cfg.params.q().to_string(),
                    r.cfg.base.to_string(),
                    r.cfg.digits.to_string(),
                    r.n_star.to_string(),
                    opt(r.k_paper),
                    r.k_exact.to_string(),
                    r.m_star.to_string(),
                    r.threshold.to_string(),
                    r.theorem_bound.to_string(),
                    r.closed_form.clone().unwrap_or_default(),
                    r.l_max.to_string(),
                    r.l_max_nodes.to_string(),
                    r.satisfied.to_string(),
                ])
                .map_err(io)?;
            }
            Payload::Witnesses(ws) => {
                w.write_record(["m", "k", "t", "r"]).map_err(io)?;
                for s in ws {
                    w.write_record([s.m.to_string(), s.k.to_string(), s.t.to_string(), s.r.to_string()])
                        .map_err(io)?;
                }
            }
            Payload::Walk(p) => {
                w.write_record(["step", "m", "k", "t", "r", "value"]).map_err(io)?;
                w.write_record([
                    "0".into(),
                    p.outcome.walk().start.to_string(),
                    String::new(),
                    String::new(),
                    String::new(),
                    p.values[0].to_string(),
                ])
                .map_err(io)?;
                for (i, s) in p.outcome.walk().steps.iter().enumerate() {
                    w.write_record([
                        (i + 1).to_string(),
                        s.m.to_string(),
                        s.k.to_string(),
                        s.t.to_string(),
                        s.r.to_string(),
                        p.values[i + 1].to_string(),
                    ])
                    .map_err(io)?;
                }
            }
            Payload::Certificate(c) => {
                w.write_record([
                    "schema_version", "p", "q", "base", "digits", "threshold", "k_exact", "m_star", "n_star",
                    "scan_margin", "rigidity_solutions", "conclusion",
                ])
                .map_err(io)?;
                w.write_record([
                    SCHEMA_VERSION.to_string(),
                    c.cfg.params.p().to_string(),
                    c.cfg.params.q().to_string(),
                    c.cfg.base.to_string(),
                    c.cfg.digits.to_string(),
                    c.threshold.to_string(),
                    c.k_exact.to_string(),
                    c.m_star.to_string(),
                    c.n_star.to_string(),
                    c.scan_margin.to_string(),
                    solutions(c),
                    c.conclusion.clone(),
                ])
                .map_err(io)?;
            }
            Payload::Suites(rs) => {
                w.write_record(["suite", "passed", "checks", "counterexample"]).map_err(io)?;
                for r in rs {
                    w.write_record([
                        r.suite.clone(),
                        r.passed.to_string(),
                        r.checks.to_string(),
                        r.counterexample.clone().unwrap_or_default(),
                    ])
                    .map_err(io)?;
                }
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Domain(format!("csv output failed: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::Domain(e.to_string()))
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        if let Some(cfg) = &self.config {
            let _ = writeln!(out, "{}  params=({})  base={}  digits={}", self.command, cfg.params, cfg.base, cfg.digits);
        } else {
            let _ = writeln!(out, "{}", self.command);
        }
        match &self.payload {
            Payload::BoundReport(r) => {
                let rows: [(&str, String); 11] = [
                    ("n_star", r.n_star.to_string()),
                    ("K_paper", opt(r.k_paper)),
                    ("K_exact", r.k_exact.to_string()),
                    ("m_star", r.m_star.to_string()),
                    ("threshold", r.threshold.to_string()),
                    ("theorem bound", format!("{} ({})", r.theorem_bound, r.theorem_bound_rule)),
                    ("closed form", r.closed_form.as_deref().map(|s| short(s, 6)).unwrap_or_else(|| "-".into())),
                    ("slope 2 log_phi b", r.closed_form_slope.as_deref().map(|s| short(s, 6)).unwrap_or_else(|| "-".into())),
                    ("L_max (steps)", r.l_max.to_string()),
                    ("L_max (values)", r.l_max_nodes.to_string()),
                    ("satisfied", r.satisfied.to_string()),
                ];
                for (k, v) in rows {
                    let _ = writeln!(out, "  {k:<18} {v}");
                }
            }
            Payload::Witnesses(ws) => {
                let _ = writeln!(out, "  {:>6} {:>4} {:>3}  r", "m", "k", "t");
                for s in ws {
                    let _ = writeln!(out, "  {:>6} {:>4} {:>3}  {}", s.m, s.k, s.t, s.r);
                }
                let _ = writeln!(out, "  ({} steps)", ws.len());
            }
            Payload::Walk(p) => {
                let status = match &p.outcome {
                    SimulationOutcome::Completed { .. } => "completed".to_string(),
                    SimulationOutcome::Failed { block, value, .. } => {
                        format!("failed at block {block}: {value} is not a member")
                    }
                };
                let path: Vec<String> = p.values.iter().map(ToString::to_string).collect();
                let _ = writeln!(out, "  {}", path.join(" -> "));
                let _ = writeln!(out, "  indices: {:?}", p.outcome.walk().indices());
                let _ = writeln!(out, "  {} steps, {} values, {status}", p.length, p.nodes);
            }
            Payload::Certificate(c) => {
                let _ = writeln!(out, "  conclusion         {}", c.conclusion);
                let _ = writeln!(out, "  threshold          {}", c.threshold);
                let _ = writeln!(out, "  m_star             {}", c.m_star);
                let _ = writeln!(out, "  n_star             {}", c.n_star);
                let _ = writeln!(out, "  K_exact            {}", c.k_exact);
                let _ = writeln!(out, "  rigidity (k:t)     {}", if c.rigidity_solutions.is_empty() { "-".into() } else { solutions(c) });
                let _ = writeln!(out, "  empty scan         [{}, {}]", c.threshold, c.threshold + c.scan_margin);
            }
            Payload::Suites(rs) => {
                for r in rs {
                    let verdict = if r.passed { "PASS" } else { "FAIL" };
                    let _ = writeln!(out, "  {verdict} {:<13} {} checks", r.suite, r.checks);
                    if let Some(c) = &r.counterexample {
                        let _ = writeln!(out, "       {c}");
                    }
                }
            }
        }
        out
    }
}

fn opt(v: Option<u64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn solutions(c: &TerminationCertificate) -> String {
    c.rigidity_solutions.iter().map(|s| format!("{}:{}", s.k, s.t)).collect::<Vec<_>>().join(";")
}

fn short(s: &str, places: usize) -> String {
    match s.split_once('.') {
        Some((i, f)) => format!("{i}.{}", &f[..f.len().min(places)]),
        None => s.to_string(),
    }
}
