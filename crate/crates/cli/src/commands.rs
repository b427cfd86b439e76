//! Subcommand implementations.

use std::fmt::Write;
use std::io::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde_json::{json, Value};
use thiserror::Error;

use asmm::compile::{self, Scheme};
use asmm::corpus;
use asmm::dot;
use asmm::lang::{parse_litmus, LitmusTest, ModelId, ParseError, Program};
use asmm::mixed::{self, AltPpo};
use asmm::models::{self, BehaviorSet, Config, ModelError};
use asmm::opsem::{self, GraphIndex, ValueDomain};
use asmm::runner::{applicable_models, config_for, expected_models, run_model};
use asmm::suite;
use asmm::transform::{self, SeqKind, TransformError, TransformKind};

use crate::report::{self, envelope};
use crate::{Common, Status};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{}:{}: {}", .err.line, .err.col, .err.msg)]
    Parse { path: PathBuf, err: ParseError },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error("{0}")]
    Usage(String),
}

type CliResult = Result<Status, CliError>;

fn load(path: &Path) -> Result<LitmusTest, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    parse_litmus(&text).map_err(|err| CliError::Parse { path: path.into(), err })
}

fn config(t: &LitmusTest, c: &Common) -> Config {
    let values = c.values.as_ref().map(|v| ValueDomain::new(v.iter().copied()));
    config_for(t, values.as_ref(), c.bound)
}

fn emit(c: &Common, command: &str, status: Status, body: Value, text: &str) {
    if c.json {
        let doc = serde_json::to_string_pretty(&envelope(command, status, body)).expect("report serializes");
        out(&format!("{doc}\n"));
    } else {
        out(text);
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn out(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn file_stem(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' }).collect()
}

fn write_dot(dir: &Path, name: &str, body: &str) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.into(), source })?;
    let path = dir.join(format!("{name}.dot"));
    fs::write(&path, body).map_err(|source| CliError::Io { path, source })
}

/// Writes one DOT file per consistent execution of `t` under `model`.
fn dot_executions(dir: &Path, t: &LitmusTest, model: ModelId, values: &ValueDomain, bound: usize) -> Result<usize, CliError> {
    let mut k = 0;
    for x in models::all_candidates(&t.program, values, bound) {
        if models::is_consistent(&x, model) {
            let name = format!("{}-{}-{k}", file_stem(&t.name), model.name());
            write_dot(dir, &name, &dot::execution_dot(&x, Some(&t.program), &name))?;
            k += 1;
        }
    }
    Ok(k)
}

pub fn run(files: &[PathBuf], requested: &[ModelId], c: &Common) -> CliResult {
    if files.is_empty() {
        return Err(CliError::Usage("no litmus files given".into()));
    }
    let mut status = Status::Pass;
    let mut text = String::new();
    let mut reports = Vec::new();
    let mut tests: Vec<(PathBuf, LitmusTest)> = files.iter().map(|f| load(f).map(|t| (f.clone(), t))).collect::<Result<_, _>>()?;
    tests.sort_by(|a, b| a.1.name.cmp(&b.1.name));
    for (path, t) in &tests {
        let models = match (requested.is_empty(), expected_models(t).is_empty()) {
            (false, _) => requested.to_vec(),
            (true, false) => expected_models(t),
            (true, true) => applicable_models(&t.program),
        };
        let cfg = config(t, c);
        let _ = writeln!(text, "{} ({})", t.name, path.display());
        let mut runs = Vec::new();
        for m in models {
            let r = run_model(t, m, &cfg)?;
            status = status.max(Status::of(r.passed(), r.report.overflow));
            report::model_run_text(t, &r, &mut text);
            if let Some(dir) = &c.dot {
                dot_executions(dir, t, m, &r.report.values, c.bound)?;
            }
            runs.push(report::model_run_json(t, &r));
        }
        reports.push(json!({ "test": t.name, "file": path, "models": runs }));
    }
    let _ = writeln!(text, "{}", report::status_name(status));
    emit(c, "run", status, json!(reports), &text);
    Ok(status)
}

pub fn compare(file: &Path, a: ModelId, b: ModelId, c: &Common) -> CliResult {
    let t = load(file)?;
    let cfg = config(&t, c);
    let ra = models::behaviors(&t.program, a, &cfg)?;
    let rb = models::behaviors(&t.program, b, &cfg)?;
    let p = &t.program;
    let mut text = format!("{}: {a} vs {b}\n", t.name);
    let body = match (&ra.behaviors, &rb.behaviors) {
        (BehaviorSet::Outcomes(x), BehaviorSet::Outcomes(y)) => {
            let only_a: Vec<_> = x.difference(y).collect();
            let only_b: Vec<_> = y.difference(x).collect();
            let common = x.intersection(y).count();
            let _ = writeln!(text, "  common: {common}");
            for (m, only) in [(a, &only_a), (b, &only_b)] {
                let _ = writeln!(text, "  only under {m}: {}", only.len());
                for o in only.iter() {
                    let _ = writeln!(text, "    {}", report::outcome_text(o, p));
                }
            }
            let relation = match (only_a.is_empty(), only_b.is_empty()) {
                (true, true) => "equal",
                (true, false) => "subset",
                (false, true) => "superset",
                (false, false) => "incomparable",
            };
            let _ = writeln!(text, "  {a} is {relation} of {b}");
            json!({
                "relation": relation,
                "common": common,
                "only_a": only_a.iter().map(|o| report::outcome_view(o, p)).collect::<Vec<_>>(),
                "only_b": only_b.iter().map(|o| report::outcome_view(o, p)).collect::<Vec<_>>(),
            })
        }
        (x, y) => {
            let _ = writeln!(text, "  {a}: {}\n  {b}: {}", if x.is_ub() { "UB" } else { "defined" }, if y.is_ub() { "UB" } else { "defined" });
            json!({ "a": report::behaviors_json(x, p), "b": report::behaviors_json(y, p) })
        }
    };
    let status = Status::of(true, ra.overflow || rb.overflow);
    emit(c, "compare", status, json!({ "test": t.name, "a": a, "b": b, "diff": body }), &text);
    Ok(status)
}

pub fn compile(file: &Path, s: Scheme) -> CliResult {
    let t = load(file)?;
    let mut compiled = LitmusTest::new(&format!("{}+{}", t.name, s.name()), compile::compile(&t.program, s));
    compiled.values = t.values.clone();
    out(&format!("{compiled}"));
    Ok(Status::Pass)
}

fn schemes(s: Option<Scheme>) -> Vec<Scheme> {
    s.map(|s| vec![s]).unwrap_or_else(|| Scheme::ALL.to_vec())
}

pub fn check_compilation(file: &Path, scheme: Option<Scheme>, c: &Common) -> CliResult {
    let t = load(file)?;
    let cfg = config(&t, c);
    let mut status = Status::Pass;
    let mut text = String::new();
    let mut body = Vec::new();
    for s in schemes(scheme) {
        let r = compile::check_compilation(&t.program, s, &cfg)?;
        status = status.max(Status::of(r.holds, r.inconclusive));
        let _ = writeln!(text, "{} {s}: {}", t.name, if r.holds { "holds" } else { "FAILS" });
        for o in &r.extra {
            let _ = writeln!(text, "  extra final memory: {}", report::outcome_text(o, &t.program));
        }
        body.push(json!({ "scheme": s, "report": r }));
    }
    emit(c, "check-compilation", status, json!(body), &text);
    Ok(status)
}

fn sweep(p: &Program) -> Vec<TransformKind> {
    let mut ks = transform::strengthenings(p);
    ks.extend(transform::deorderings(p));
    ks.extend(transform::merges(p));
    ks.extend(transform::promotions(p));
    ks.extend(transform::sequentializations(p, SeqKind::Nitia));
    ks.extend(transform::sequentializations(p, SeqKind::Fence));
    ks
}

pub fn check_transform(file: &Path, specs: &[String], c: &Common) -> CliResult {
    let t = load(file)?;
    let cfg = config(&t, c);
    let mut kinds = Vec::new();
    for s in specs {
        if s == "all" {
            kinds.extend(sweep(&t.program));
        } else {
            kinds.push(transform::parse_transform(s, &t.program)?);
        }
    }
    let mut status = Status::Pass;
    let mut text = String::new();
    let mut body = Vec::new();
    for k in kinds {
        let r = transform::check_transform_sound(&t.program, &k, &cfg)?;
        status = status.max(Status::of(r.holds, r.inconclusive));
        let _ = writeln!(text, "{} {k}: {}", t.name, if r.holds { "sound" } else { "ADDS BEHAVIORS" });
        for o in &r.extra {
            let _ = writeln!(text, "  new outcome: {}", report::outcome_text(o, &t.program));
        }
        body.push(json!({ "transform": k.to_string(), "report": r }));
    }
    emit(c, "check-transform", status, json!(body), &text);
    Ok(status)
}

pub fn check_drf(file: &Path, c: &Common) -> CliResult {
    let t = load(file)?;
    let r = models::check_drf(&t.program, &config(&t, c))?;
    let status = Status::of(r.holds, r.overflow);
    let mut text = format!("{}: ", t.name);
    match r.race {
        Some((a, b)) => {
            let _ = writeln!(text, "not data-race free (race {a} {b}); the guarantee does not apply");
        }
        None => {
            let _ = writeln!(text, "data-race free; behaviors {} SC", if r.sc_equivalent { "equal" } else { "DIFFER FROM" });
        }
    }
    emit(c, "check-drf", status, json!({ "test": t.name, "report": r }), &text);
    Ok(status)
}

pub fn check_transfer(file: &Path, scheme: Option<Scheme>, literal: bool, c: &Common) -> CliResult {
    let t = load(file)?;
    let cfg = config(&t, c);
    let values = models::value_domain(&t.program, &cfg);
    let alt = if literal { AltPpo::Literal } else { AltPpo::Corrected };
    let mut status = Status::Pass;
    let mut text = String::new();
    let mut body = Vec::new();
    for s in schemes(scheme) {
        let w = mixed::transfer_sweep(&t.program, s, alt, &values, c.bound)?;
        status = status.max(Status::of(w.holds(), w.overflow));
        let _ = writeln!(
            text,
            "{} {s}: {} executions, {} transfer failures, {} weaker-than failures",
            t.name, w.executions, w.transfer_failures, w.weaker_than_failures
        );
        if let Some(f) = &w.first_failure {
            let _ = writeln!(text, "  first failure: {}", f.trim_end().replace('\n', "\n    "));
        }
        if let Some(dir) = &c.dot {
            dot_mixed(dir, &t, s, alt, &values, c.bound)?;
        }
        body.push(json!({ "scheme": s, "sweep": w }));
    }
    emit(c, "check-transfer", status, json!(body), &text);
    Ok(status)
}

fn dot_mixed(dir: &Path, t: &LitmusTest, s: Scheme, alt: AltPpo, values: &ValueDomain, bound: usize) -> Result<(), CliError> {
    let target = compile::compile(&t.program, s);
    let mut k = 0;
    for cg in opsem::enumerate_graphs(&target, values, bound).graphs {
        for x in opsem::candidates(Arc::new(GraphIndex::new(cg.graph)), &cg.registers) {
            if let Ok(m) = mixed::build_simulation(&t.program, s, &x, bound) {
                let name = format!("{}-mixed-{}-{k}", file_stem(&t.name), s.name());
                write_dot(dir, &name, &dot::mixed_dot(&m, alt, Some(&t.program), &name))?;
                k += 1;
            }
        }
    }
    Ok(())
}

pub fn corpus(list: bool, show: Option<&str>, c: &Common) -> CliResult {
    if list {
        let mut text = String::new();
        for (e, t) in corpus::tests() {
            let _ = writeln!(text, "{:<22} {:<16} {}", e.file.trim_end_matches(".litmus"), t.name, e.note);
        }
        out(&text);
        return Ok(Status::Pass);
    }
    if let Some(name) = show {
        let e = corpus::ENTRIES
            .iter()
            .find(|e| e.file.trim_end_matches(".litmus") == name || parse_litmus(e.source).map(|t| t.name == name).unwrap_or(false))
            .ok_or_else(|| CliError::Usage(format!("no corpus test `{name}`")))?;
        out(e.source);
        return Ok(Status::Pass);
    }
    let mut status = Status::Pass;
    let mut text = String::new();
    let mut body = Vec::new();
    for (e, t) in corpus::tests() {
        let cfg = config(&t, c);
        let mut line = Vec::new();
        let mut runs = Vec::new();
        let mut pass = true;
        let mut overflow = false;
        for m in expected_models(&t) {
            let r = run_model(&t, m, &cfg)?;
            pass &= r.passed();
            overflow |= r.report.overflow;
            if let Some(dir) = &c.dot {
                dot_executions(dir, &t, m, &r.report.values, c.bound)?;
            }
            line.push(format!("{m} {}/{}", r.expectations.iter().filter(|x| x.pass).count(), r.expectations.len()));
            runs.push(report::model_run_json(&t, &r));
        }
        let mut checks = Vec::new();
        for s in Scheme::ALL {
            let comp = compile::check_compilation(&t.program, s, &cfg)?;
            let values = models::value_domain(&t.program, &cfg);
            let tr = mixed::transfer_sweep(&t.program, s, AltPpo::Corrected, &values, c.bound)?;
            pass &= comp.holds && tr.holds();
            overflow |= comp.inconclusive || tr.overflow;
            line.push(format!("compile-{} {}", s.name(), ok(comp.holds)));
            line.push(format!("transfer-{} {}", s.name(), ok(tr.holds())));
            checks.push(json!({ "scheme": s, "compilation": comp.holds, "transfer": tr.holds(), "weaker_than": tr.weaker_than_failures == 0 }));
        }
        let ext = suite::extension_check(&t.program, &models::value_domain(&t.program, &cfg), c.bound)?;
        pass &= ext.discrepancies.is_empty();
        line.push(format!("extension {}", ok(ext.discrepancies.is_empty())));
        let oracle = if t.program.has_loops() { None } else { suite::sc_oracle_agrees(&t.program, &cfg)? };
        pass &= oracle != Some(false);
        line.push(format!("sc-oracle {}", oracle.map(ok).unwrap_or("skipped")));
        let st = Status::of(pass, overflow);
        status = status.max(st);
        let _ = writeln!(text, "{} {:<16} {}", report::status_name(st).to_uppercase(), t.name, line.join(", "));
        body.push(json!({
            "test": t.name,
            "file": e.file,
            "note": e.note,
            "status": report::status_name(st),
            "models": runs,
            "compilation": checks,
            "extension_discrepancies": ext.discrepancies,
            "sc_oracle": oracle,
        }));
    }
    let _ = writeln!(text, "{}", report::status_name(status));
    emit(c, "corpus", status, json!(body), &text);
    Ok(status)
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAIL"
    }
}
