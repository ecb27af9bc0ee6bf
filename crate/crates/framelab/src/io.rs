//! JSON and CSV interchange.
//!
//! Frame files: `{"dim": n, "vectors": [[[re, im], ...n pairs], ...N]}`.
//! Pair files: `{"F": <frame>, "G": <frame>}`. Floats are written in
//! shortest-round-trip form, so write-then-read reproduces every entry
//! bit-exactly.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::erasure::MeasureReport;
use crate::error::FrameError;
use crate::frame::{DualPair, Frame};
use crate::linalg::{CMatrix, C64};
use crate::optimality::{MembershipVerdict, RelationsReport};
use crate::search::SearchResult;

#[derive(Serialize, Deserialize)]
struct FrameJson {
    dim: usize,
    vectors: Vec<Vec<[f64; 2]>>,
}

impl FrameJson {
    fn of(frame: &Frame) -> Self {
        Self {
            dim: frame.dim(),
            vectors: frame
                .vectors()
                .iter()
                .map(|v| v.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }

    fn into_frame(self, tol: f64) -> Result<Frame, FrameError> {
        let vectors = self
            .vectors
            .into_iter()
            .map(|v| v.into_iter().map(|[re, im]| C64::new(re, im)).collect())
            .collect();
        Frame::with_tolerance(self.dim, vectors, tol)
    }
}

fn parse_error(err: serde_json::Error) -> FrameError {
    FrameError::InvalidParameter(format!("JSON parse error: {err}"))
}

pub fn frame_to_json_value(frame: &Frame) -> Value {
    serde_json::to_value(FrameJson::of(frame)).expect("frame serialization cannot fail")
}

pub fn frame_to_json(frame: &Frame) -> String {
    serde_json::to_string_pretty(&FrameJson::of(frame)).expect("frame serialization cannot fail")
}

pub fn frame_from_json(text: &str, tol: f64) -> Result<Frame, FrameError> {
    let parsed: FrameJson = serde_json::from_str(text).map_err(parse_error)?;
    parsed.into_frame(tol)
}

pub fn pair_to_json(pair: &DualPair) -> String {
    let value = json!({
        "F": frame_to_json_value(pair.f()),
        "G": frame_to_json_value(pair.g()),
    });
    serde_json::to_string_pretty(&value).expect("pair serialization cannot fail")
}

#[derive(Deserialize)]
struct PairJson {
    #[serde(rename = "F")]
    f: FrameJson,
    #[serde(rename = "G")]
    g: FrameJson,
}

/// Reads a pair file and re-verifies duality within `tol`.
pub fn pair_from_json(text: &str, tol: f64) -> Result<DualPair, FrameError> {
    let parsed: PairJson = serde_json::from_str(text).map_err(parse_error)?;
    let f = parsed.f.into_frame(crate::DEFAULT_TOL)?;
    let g = parsed.g.into_frame(crate::DEFAULT_TOL)?;
    DualPair::new(f, g, tol)
}

pub fn matrix_to_json_value(mat: &CMatrix) -> Value {
    let rows: Vec<Vec<[f64; 2]>> = (0..mat.rows())
        .map(|i| mat.row(i).iter().map(|z| [z.re, z.im]).collect())
        .collect();
    json!(rows)
}

pub fn report_to_json_value(report: &MeasureReport) -> Value {
    json!({
        "measure": report.measure.as_str(),
        "m": report.m,
        "worst": report.worst_value,
        "argmax": report
            .argmax_sets
            .iter()
            .map(|s| s.indices().to_vec())
            .collect::<Vec<_>>(),
        "theoretical": report.theoretical_optimum,
        "per_set": report.per_set_values.as_ref().map(|entries| {
            entries
                .iter()
                .map(|(set, value)| json!({"indices": set.indices(), "value": value}))
                .collect::<Vec<_>>()
        }),
    })
}

pub fn verdict_to_json_value(verdict: &MembershipVerdict) -> Value {
    json!({
        "holds": verdict.holds,
        "conditional_on_existence": verdict.conditional_on_existence,
        "certificate": verdict
            .certificate
            .iter()
            .map(|c| json!({"condition": c.condition, "max_violation": c.max_violation}))
            .collect::<Vec<_>>(),
    })
}

pub fn relations_to_json_value(report: &RelationsReport) -> Value {
    json!({
        "f1": verdict_to_json_value(&report.f1),
        "r1": verdict_to_json_value(&report.r1),
        "n1": verdict_to_json_value(&report.n1),
        "implications": report
            .implications
            .iter()
            .map(|i| json!({
                "name": i.name,
                "premise": i.premise,
                "conclusion": i.conclusion,
                "violated": i.violated,
            }))
            .collect::<Vec<_>>(),
        "tight_canonical": report.tight_canonical.as_ref().map(|t| json!({
            "f1": t.f1,
            "r1": t.r1,
            "n1": t.n1,
            "equivalent": t.equivalent,
        })),
        "consistent": report.consistent,
    })
}

pub fn search_result_to_json_value(result: &SearchResult) -> Value {
    json!({
        "best_value": result.best_value,
        "converged": result.converged,
        "gap_to_bound": result.gap_to_bound,
        "trace": result.trace.iter().map(|(i, v)| json!([i, v])).collect::<Vec<_>>(),
        "best_dual": frame_to_json_value(&result.best_dual),
        "v": matrix_to_json_value(&result.best_parameters),
    })
}

/// CSV of per-Λ values: header `indices,value`, indices space-separated.
pub fn per_set_csv(report: &MeasureReport) -> Result<String, FrameError> {
    let entries = report.per_set_values.as_ref().ok_or_else(|| {
        FrameError::InvalidParameter("report was built without per-set values".into())
    })?;
    let mut out = String::from("indices,value\n");
    for (set, value) in entries {
        let indices: Vec<String> = set.indices().iter().map(|i| i.to_string()).collect();
        out.push_str(&format!("{},{}\n", indices.join(" "), value));
    }
    Ok(out)
}
