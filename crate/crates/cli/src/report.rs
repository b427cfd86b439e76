//! Text and JSON rendering of results.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use asmm::lang::{LitmusTest, Program, Val};
use asmm::models::{BehaviorSet, Outcome};
use asmm::runner::ModelRun;

pub const SCHEMA: &str = "asmm-report/1";

#[derive(Serialize)]
pub struct OutcomeView {
    pub memory: BTreeMap<String, Val>,
    pub registers: BTreeMap<String, Val>,
}

pub fn outcome_view(o: &Outcome, p: &Program) -> OutcomeView {
    OutcomeView { memory: o.memory.iter().map(|(l, v)| (p.loc_name(*l), *v)).collect(), registers: o.registers.clone() }
}

pub fn outcome_text(o: &Outcome, p: &Program) -> String {
    let mut parts: Vec<String> = o.registers.iter().map(|(r, v)| format!("{r}={v}")).collect();
    parts.extend(o.memory.iter().map(|(l, v)| format!("{}={v}", p.loc_name(*l))));
    if parts.is_empty() {
        "(empty)".into()
    } else {
        parts.join(" ")
    }
}

pub fn behaviors_json(b: &BehaviorSet, p: &Program) -> Value {
    match b {
        BehaviorSet::Ub => json!("UB"),
        BehaviorSet::Outcomes(os) => json!(os.iter().map(|o| outcome_view(o, p)).collect::<Vec<_>>()),
    }
}

pub fn model_run_json(t: &LitmusTest, r: &ModelRun) -> Value {
    json!({
        "model": r.report.model,
        "behaviors": behaviors_json(&r.report.behaviors, &t.program),
        "ub_race": r.report.ub_race.map(|(a, b)| [a.to_string(), b.to_string()]),
        "expectations": r.expectations,
        "stats": r.report.stats,
        "values": r.report.values,
        "overflow": r.report.overflow,
        "elapsed_ms": r.elapsed.as_millis() as u64,
    })
}

pub fn model_run_text(t: &LitmusTest, r: &ModelRun, out: &mut String) {
    use std::fmt::Write;
    let rep = &r.report;
    let summary = match &rep.behaviors {
        BehaviorSet::Ub => match rep.ub_race {
            Some((a, b)) => format!("UB (race {a} {b})"),
            None => "UB".into(),
        },
        BehaviorSet::Outcomes(os) => format!("{} outcomes", os.len()),
    };
    let _ = writeln!(
        out,
        "  {:<8} {summary}; {} graphs, {} candidates, {} consistent{}",
        rep.model.name(),
        rep.stats.graphs,
        rep.stats.candidates,
        rep.stats.consistent,
        if rep.overflow { " [bound reached]" } else { "" }
    );
    if let BehaviorSet::Outcomes(os) = &rep.behaviors {
        if os.len() <= 16 {
            for o in os {
                let _ = writeln!(out, "    {}", outcome_text(o, &t.program));
            }
        }
    }
    for e in &r.expectations {
        let verdict = if e.allowed { "allowed" } else { "forbidden" };
        let _ = writeln!(out, "    {} {verdict}: {}", if e.pass { "PASS" } else { "FAIL" }, e.predicate);
    }
}

pub fn envelope(command: &str, status: crate::Status, body: Value) -> Value {
    json!({ "schema": SCHEMA, "command": command, "status": status_name(status), "result": body })
}

pub fn status_name(s: crate::Status) -> &'static str {
    match s {
        crate::Status::Pass => "pass",
        crate::Status::Fail => "fail",
        crate::Status::Overflow => "overflow",
    }
}
