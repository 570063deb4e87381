//! Event traces as JSON lines and latency samples as CSV.

use std::io::Write;

use serde::Serialize;

use rico_core::model::Instance;
use rico_core::orchestrator::{EventKind, EventTrace, SimEvent, TriggerCause};

use crate::formats::{FaultDoc, Ids};

/// Header of the samples file.
pub const SAMPLES_HEADER: [&str; 4] = ["time", "e2", "xapp", "loop_latency_ms"];

#[derive(Serialize)]
struct EventLine<'a> {
    time: f64,
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    e2: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    xapp: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cn: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cost: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    solution_hash: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    latency_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cause: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    applied: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fault: Option<FaultDoc>,
}

fn event_line<'a>(ids: &'a Ids, e: &SimEvent) -> EventLine<'a> {
    let p = &e.payload;
    EventLine {
        time: e.time_s(),
        kind: e.kind.name(),
        e2: p.e2.map(|i| ids.e2s[i].as_str()),
        xapp: p.xapp.map(|a| ids.xapps[a].as_str()),
        cn: p.cn.map(|m| ids.cns[m].as_str()),
        cost: p.cost,
        solution_hash: p.solution_digest.map(|d| format!("{d:016x}")),
        latency_ms: p.latency_ms,
        cause: p.cause.map(|c| match c {
            TriggerCause::Latency => "latency",
            TriggerCause::NodeDown => "node_down",
        }),
        applied: p.applied,
        fault: p.fault.as_ref().map(|f| FaultDoc::from_fault(ids, f)),
    }
}

/// One JSON object per event, in trace order.
pub fn write_events_jsonl(instance: &Instance, trace: &EventTrace, mut out: impl Write) -> std::io::Result<()> {
    let ids = Ids::of(instance);
    for e in &trace.events {
        serde_json::to_writer(&mut out, &event_line(&ids, e))?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// `time,e2,xapp,loop_latency_ms`; the latency is empty while a loop has no
/// measurement.
pub fn write_samples_csv(instance: &Instance, trace: &EventTrace, out: impl Write) -> csv::Result<()> {
    let ids = Ids::of(instance);
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SAMPLES_HEADER)?;
    for e in trace.of_kind(EventKind::MetricSample) {
        let (Some(e2), Some(xapp)) = (e.payload.e2, e.payload.xapp) else { continue };
        let latency = e.payload.latency_ms.map(|l| l.to_string()).unwrap_or_default();
        w.write_record([format!("{:.3}", e.time_s()), ids.e2s[e2].clone(), ids.xapps[xapp].clone(), latency])?;
    }
    w.flush()?;
    Ok(())
}
