//! Machine-readable run reports. Every command emits one `RunReport`
//! document; vertices appear as digit strings, never as integer codes.

use serde::{Deserialize, Serialize};

use kcube::reliability::ReliabilityEstimate;
use kcube::solver::KappaCertificate;
use kcube::verify::{Counterexample, VerificationReport, VerifyMode};
use kcube::{Torus, VertexSet};

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct RunReport {
    pub tool_version: String,
    pub command: String,
    pub params: TorusParams,
    pub payload: Payload,
    pub timestamp: String,
}

#[derive(Serialize, Deserialize, PartialEq, Debug, Clone, Copy)]
pub struct TorusParams {
    pub k: u64,
    pub n: u32,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Payload {
    Kappa { certificate: KappaPayload },
    Verify { checks: Vec<CheckPayload> },
    Simulate { table: Vec<EstimateRow> },
    Export { meta: ExportMeta },
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct KappaPayload {
    pub h: u32,
    pub value: u64,
    pub method: String,
    pub exhaustive: bool,
    pub witness: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct CheckPayload {
    pub check_id: String,
    /// "pass", "fail", or "skipped".
    pub status: String,
    pub mode: Option<ModePayload>,
    pub cases_checked: Option<u64>,
    pub elapsed_ms: Option<u64>,
    pub notice: Option<String>,
    pub counterexample: Option<CounterexamplePayload>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum ModePayload {
    Exhaustive,
    Sampled { trials: u64, seed: u64 },
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct CounterexamplePayload {
    pub detail: String,
    pub vertices: Vec<String>,
    pub sets: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct EstimateRow {
    pub fault_count: u64,
    pub trials: u64,
    pub accepted: u64,
    pub disconnected: u64,
    pub point_estimate: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct ExportMeta {
    pub format: String,
    pub path: Option<String>,
    pub vertex_count: u64,
    pub edge_count: u64,
}

pub fn render_set(t: &Torus, s: &VertexSet) -> Vec<String> {
    s.iter().map(|v| t.vertex_string(v)).collect()
}

pub fn kappa_payload(t: &Torus, cert: &KappaCertificate) -> KappaPayload {
    KappaPayload {
        h: cert.h,
        value: cert.value,
        method: cert.method.label().to_string(),
        exhaustive: cert.exhaustive,
        witness: cert.witness.as_ref().map(|w| render_set(t, w)),
    }
}

fn mode_payload(mode: VerifyMode) -> ModePayload {
    match mode {
        VerifyMode::Exhaustive => ModePayload::Exhaustive,
        VerifyMode::Sampled { trials, seed } => ModePayload::Sampled { trials, seed },
    }
}

fn counterexample_payload(t: &Torus, ce: &Counterexample) -> CounterexamplePayload {
    CounterexamplePayload {
        detail: ce.detail.clone(),
        vertices: ce.vertices.iter().map(|&v| t.vertex_string(v)).collect(),
        sets: ce.sets.iter().map(|s| render_set(t, s)).collect(),
    }
}

pub fn check_payload(report: &VerificationReport) -> CheckPayload {
    CheckPayload {
        check_id: report.check_id.to_string(),
        status: if report.passed { "pass" } else { "fail" }.to_string(),
        mode: Some(mode_payload(report.mode)),
        cases_checked: Some(report.cases_checked),
        elapsed_ms: Some(report.elapsed.as_millis() as u64),
        notice: None,
        counterexample: report
            .counterexample
            .as_ref()
            .map(|ce| counterexample_payload(&report.torus, ce)),
    }
}

pub fn skipped_payload(check_id: &str, requires: &str) -> CheckPayload {
    CheckPayload {
        check_id: check_id.to_string(),
        status: "skipped".to_string(),
        mode: None,
        cases_checked: None,
        elapsed_ms: None,
        notice: Some(format!("requires {requires}")),
        counterexample: None,
    }
}

pub fn estimate_row(est: &ReliabilityEstimate) -> EstimateRow {
    EstimateRow {
        fault_count: est.fault_count,
        trials: est.trials,
        accepted: est.accepted,
        disconnected: est.disconnected,
        point_estimate: est.point_estimate,
        wilson_low: est.wilson_low,
        wilson_high: est.wilson_high,
    }
}

pub fn csv_table(table: &[EstimateRow]) -> String {
    let mut out = String::from(
        "fault_count,trials,accepted,disconnected,point_estimate,wilson_low,wilson_high\n",
    );
    for row in table {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.fault_count,
            row.trials,
            row.accepted,
            row.disconnected,
            row.point_estimate,
            row.wilson_low,
            row.wilson_high
        ));
    }
    out
}

/// Edges as digit-string pairs, sorted by (min code, max code).
pub fn sorted_edge_strings(t: &Torus) -> Vec<(String, String)> {
    let mut edges: Vec<(u64, u64)> = t
        .edges()
        .map(|(u, v)| {
            let (a, b) = (u.code(), v.code());
            (a.min(b), a.max(b))
        })
        .collect();
    edges.sort_unstable();
    edges
        .into_iter()
        .map(|(a, b)| {
            let av = t.vertex(a).expect("in range");
            let bv = t.vertex(b).expect("in range");
            (t.vertex_string(av), t.vertex_string(bv))
        })
        .collect()
}

pub fn render_edgelist(t: &Torus) -> String {
    let mut out = String::new();
    for (a, b) in sorted_edge_strings(t) {
        out.push_str(&a);
        out.push(' ');
        out.push_str(&b);
        out.push('\n');
    }
    out
}

pub fn render_dot(t: &Torus) -> String {
    let mut out = format!("graph torus_k{}_n{} {{\n", t.k(), t.n());
    for (a, b) in sorted_edge_strings(t) {
        out.push_str(&format!("  \"{a}\" -- \"{b}\";\n"));
    }
    out.push_str("}\n");
    out
}
