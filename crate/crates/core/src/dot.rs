//! Graphviz rendering of candidate executions and mixed graphs.
//!
//! Edge colors: po black, rf green, mo orange, rb red dashed, ppo_asm blue.

use std::fmt::Write;

use crate::lang::Program;
use crate::mixed::{mixed_ppo, AltPpo, MixedGraph};
use crate::models::Rels;
use crate::opsem::{CandidateExecution, Label};
use crate::relalg::{EventId, Relation};

/// Label text with location numbers replaced by program names.
pub fn label_text(l: &Label, p: Option<&Program>) -> String {
    match (l.loc(), p) {
        (Some(loc), Some(p)) => l.to_string().replace(&format!("@{loc}"), &p.loc_name(loc)),
        _ => l.to_string(),
    }
}

fn node_id(e: EventId) -> String {
    match e {
        EventId::Init(l) => format!("i{l}"),
        EventId::Thread { tid, idx } => format!("e{tid}_{idx}"),
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Edges of `r` that are not implied by transitivity.
fn reduction(r: &Relation) -> Relation {
    r.difference(&r.compose(&r.transitive_closure()))
}

fn edges(out: &mut String, x: &CandidateExecution, r: &Relation, name: &str, style: &str) {
    for (a, b) in r.pairs() {
        let _ = writeln!(out, "  {} -> {} [label=\"{name}\", {style}];", node_id(x.event(a)), node_id(x.event(b)));
    }
}

fn nodes(out: &mut String, x: &CandidateExecution, text: impl Fn(usize) -> String) {
    let mut by_thread = std::collections::BTreeMap::<Option<u32>, Vec<usize>>::new();
    for i in 0..x.n() {
        by_thread.entry(x.event(i).tid()).or_default().push(i);
    }
    for (tid, evs) in by_thread {
        let (cluster, title) = match tid {
            Some(t) => (format!("t{t}"), format!("thread {t}")),
            None => ("init".to_string(), "init".to_string()),
        };
        let _ = writeln!(out, "  subgraph cluster_{cluster} {{\n    label=\"{title}\";");
        for i in evs {
            let _ = writeln!(out, "    {} [label=\"{}\"];", node_id(x.event(i)), escape(&text(i)));
        }
        let _ = writeln!(out, "  }}");
    }
}

fn relation_edges(out: &mut String, x: &CandidateExecution, ppo: &Relation) {
    let r = Rels::new(x);
    let po = reduction(&r.po).filter(|a, _| !x.event(a).is_init());
    edges(out, x, &po, "po", "color=black");
    edges(out, x, &r.rf, "rf", "color=green");
    edges(out, x, &reduction(&r.mo), "mo", "color=orange");
    edges(out, x, &r.rb, "rb", "color=red, style=dashed");
    edges(out, x, &reduction(ppo).difference(&po), "ppo", "color=blue");
}

/// A candidate execution as a `digraph`, one cluster per thread.
pub fn execution_dot(x: &CandidateExecution, p: Option<&Program>, title: &str) -> String {
    let mut out = format!("digraph \"{}\" {{\n  node [shape=box];\n", escape(title));
    nodes(&mut out, x, |i| format!("{}: {}", x.event(i), label_text(&x.labels()[i], p)));
    relation_edges(&mut out, x, &Rels::new(x).ppo_asm());
    out.push_str("}\n");
    out
}

/// A mixed graph: each node shows its kind, its source label and its target labels.
pub fn mixed_dot(m: &MixedGraph, alt: AltPpo, p: Option<&Program>, title: &str) -> String {
    let x = &m.source;
    let mut out = format!("digraph \"{}\" {{\n  node [shape=box];\n", escape(title));
    nodes(&mut out, x, |i| {
        let node = &m.nodes[i];
        let targets: Vec<String> =
            node.target.iter().filter_map(|e| m.target_graph.label(*e)).map(|l| label_text(&l, p)).collect();
        format!("{} {}\n{}\n[{}]", node.source, node.kind.name(), label_text(&x.labels()[i], p), targets.join("; "))
    });
    relation_edges(&mut out, x, &mixed_ppo(m, alt));
    out.push_str("}\n");
    out
}
