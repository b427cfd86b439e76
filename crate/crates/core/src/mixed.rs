//! Mixed execution graphs: each node pairs one source event with the target
//! events its compilation emits. Consistency of either model can be evaluated
//! on the nodes directly and compared with the projected graphs.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::compile::{compile, compile_label, Scheme};
use crate::lang::{Loc, Mode, ModelId, Program, RegState, Tid};
use crate::models::{self, Axiom, ModelError, Rels, Shape, Verdict};
use crate::opsem::{self, CandidateExecution, ExecutionGraph, GraphIndex, Label, ThreadRun, ValueDomain};
use crate::relalg::{identity_on, restrict_same_loc, split_internal_external, EventId, EventSet, Relation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum NodeKind {
    Init,
    /// sc write: `mov; mfence`.
    WWmf,
    WW,
    WNt,
    RmwS,
    RmwF,
    FMf,
    FSf,
    /// Fence compiled to nothing.
    FBot,
    RR,
    /// sc write under the alternative scheme: `sfence; mov; mfence`.
    WSfWMf,
    /// Release write under the alternative scheme: `sfence; mov`.
    WSfW,
    WNtAlt,
    FSfAlt,
}

impl NodeKind {
    pub fn name(self) -> &'static str {
        match self {
            NodeKind::Init => "Init",
            NodeKind::WWmf => "W-WMF",
            NodeKind::WW => "W-W",
            NodeKind::WNt => "W-NT",
            NodeKind::RmwS => "RMW-RMW-S",
            NodeKind::RmwF => "RMW-RMW-F",
            NodeKind::FMf => "F-MF",
            NodeKind::FSf => "F-SF",
            NodeKind::FBot => "F-⊥",
            NodeKind::RR => "R-R",
            NodeKind::WSfWMf => "W-SFWMF",
            NodeKind::WSfW => "W-SFW",
            NodeKind::WNtAlt => "W-NT-alt",
            NodeKind::FSfAlt => "F-SF-alt",
        }
    }

    /// Number of target events a node of this kind holds.
    pub fn arity(self) -> usize {
        match self {
            NodeKind::FBot => 0,
            NodeKind::WWmf | NodeKind::WSfW => 2,
            NodeKind::WSfWMf => 3,
            _ => 1,
        }
    }

    /// Kinds a mixed graph built for `s` may contain.
    pub fn allowed(s: Scheme) -> &'static [NodeKind] {
        use NodeKind::*;
        match s {
            Scheme::Standard => &[Init, WWmf, WW, WNt, RmwS, RmwF, FMf, FSf, FBot, RR],
            Scheme::Alternative => &[Init, WSfWMf, WSfW, WW, WNtAlt, RmwS, RmwF, FMf, FSfAlt, FBot, RR],
        }
    }

    /// Kind of the node holding a source event with label `l`.
    pub fn of(l: &Label, s: Scheme) -> NodeKind {
        use NodeKind::*;
        match (*l, s) {
            (Label::W { md: Mode::Nt, .. }, Scheme::Standard) => WNt,
            (Label::W { md: Mode::Nt, .. }, Scheme::Alternative) => WNtAlt,
            (Label::W { md: Mode::Sc, .. }, Scheme::Standard) => WWmf,
            (Label::W { md: Mode::Sc, .. }, Scheme::Alternative) => WSfWMf,
            (Label::W { md: Mode::Rel, .. }, Scheme::Alternative) => WSfW,
            (Label::W { md: Mode::Rlx, .. }, Scheme::Alternative) => WNtAlt,
            (Label::W { .. }, _) => WW,
            (Label::Rmw { written: Some(_), .. }, _) => RmwS,
            (Label::Rmw { .. }, _) => RmwF,
            (Label::R { .. }, _) => RR,
            (Label::F { md: Mode::Sc }, _) => FMf,
            (Label::F { md: Mode::Sf }, Scheme::Standard) => FSf,
            (Label::F { md: Mode::Sf | Mode::Rel | Mode::AcqRel }, Scheme::Alternative) => FSfAlt,
            (Label::F { .. }, _) => FBot,
        }
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MixedNode {
    pub kind: NodeKind,
    pub source: EventId,
    pub target: Vec<EventId>,
}

/// Nodes are numbered like the events of the source graph; `rf` and `mo` are
/// the node-level relations (and thus the source relations).
#[derive(Clone, Debug)]
pub struct MixedGraph {
    pub scheme: Scheme,
    pub nodes: Vec<MixedNode>,
    pub source: CandidateExecution,
    /// Target graph indexing, used to expand node relations into target relations.
    pub target_graph: Arc<GraphIndex>,
    pub target_registers: BTreeMap<Tid, RegState>,
}

impl MixedGraph {
    pub fn rf(&self) -> &Relation {
        &self.source.rf
    }

    pub fn mo(&self) -> &Relation {
        &self.source.mo
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn kinds(&self) -> impl Iterator<Item = NodeKind> + '_ {
        self.nodes.iter().map(|n| n.kind)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MixedError {
    #[error("thread {tid}: target events cannot be grouped into source events")]
    Unmatched { tid: Tid },
    #[error("target execution relation is not expressible between mixed nodes")]
    Relation,
}

/// Target labels a sequence of source labels compiles to.
fn compiled_stream(ls: &[Label], s: Scheme) -> Vec<Label> {
    ls.iter().flat_map(|l| compile_label(l, s)).collect()
}

/// Replays the source thread so that its compiled event stream equals `target`.
fn replay_thread(p: &Program, tid: Tid, target: &[Label], s: Scheme, values: &ValueDomain, bound: usize) -> Option<ThreadRun> {
    let guide = |ls: &[Label]| {
        let c = compiled_stream(ls, s);
        c.len() <= target.len() && c[..] == target[..c.len()]
    };
    let ex = opsem::explore_thread(&p.threads[&tid], values, bound, Some(&guide));
    ex.runs.into_iter().find(|r| compiled_stream(&r.labels, s) == target)
}

/// Builds the source execution and mixed graph simulating a target execution of `compile(p, s)`.
pub fn build_simulation(p: &Program, s: Scheme, target: &CandidateExecution, bound: usize) -> Result<MixedGraph, MixedError> {
    let tg = &target.graph;
    let values = ValueDomain::new(tg.labels.iter().filter_map(|l| l.read_value()).chain([0]));
    let mut source = ExecutionGraph { inits: tg.graph.inits.clone(), threads: BTreeMap::new() };
    let mut registers = BTreeMap::new();
    for (tid, labels) in &tg.graph.threads {
        let run = replay_thread(p, *tid, labels, s, &values, bound).ok_or(MixedError::Unmatched { tid: *tid })?;
        source.threads.insert(*tid, run.labels);
        registers.insert(*tid, run.regs);
    }
    let sg = Arc::new(GraphIndex::new(source));
    let mut nodes = Vec::with_capacity(sg.len());
    let mut owner = vec![usize::MAX; tg.len()];
    let mut cursor: BTreeMap<Tid, usize> = BTreeMap::new();
    for (i, e) in sg.events.iter().enumerate() {
        let l = sg.labels[i];
        let (kind, target_events) = match *e {
            EventId::Init(loc) => (NodeKind::Init, vec![EventId::Init(loc)]),
            EventId::Thread { tid, .. } => {
                let k = NodeKind::of(&l, s);
                let start = cursor.entry(tid).or_default();
                let evs: Vec<EventId> = (*start..*start + k.arity()).map(|idx| EventId::Thread { tid, idx }).collect();
                *start += k.arity();
                (k, evs)
            }
        };
        for te in &target_events {
            owner[tg.index_of(*te).ok_or(MixedError::Relation)?] = i;
        }
        nodes.push(MixedNode { kind, source: *e, target: target_events });
    }
    let lift = |r: &Relation| -> Result<Relation, MixedError> {
        let mut out = Relation::empty(sg.len());
        for (a, b) in r.pairs() {
            let (na, nb) = (owner[a], owner[b]);
            if na == usize::MAX || nb == usize::MAX || na == nb {
                return Err(MixedError::Relation);
            }
            out.insert(na, nb);
        }
        Ok(out)
    };
    let rf = lift(&target.rf)?;
    let mo = lift(&target.mo)?;
    Ok(MixedGraph {
        scheme: s,
        nodes,
        source: CandidateExecution { graph: sg, rf, mo, registers },
        target_graph: tg.clone(),
        target_registers: target.registers.clone(),
    })
}

pub fn project_source(m: &MixedGraph) -> CandidateExecution {
    m.source.clone()
}

/// Expands node-level rf and mo onto the writing and reading target events.
pub fn project_target(m: &MixedGraph) -> CandidateExecution {
    let tg = &m.target_graph;
    let pick = |node: usize, f: fn(&Label) -> bool| -> usize {
        m.nodes[node]
            .target
            .iter()
            .map(|e| tg.index_of(*e).expect("target event"))
            .find(|i| f(&tg.labels[*i]))
            .expect("node holds an event of the required kind")
    };
    let expand = |r: &Relation, from: fn(&Label) -> bool, to: fn(&Label) -> bool| {
        Relation::from_pairs(tg.len(), r.pairs().map(|(a, b)| (pick(a, from), pick(b, to))))
    };
    CandidateExecution {
        graph: tg.clone(),
        rf: expand(m.rf(), Label::is_write_like, Label::is_read_like),
        mo: expand(m.mo(), Label::is_write_like, Label::is_write_like),
        registers: m.target_registers.clone(),
    }
}

/// Which version of the release-write case the alternative ppo uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AltPpo {
    /// `[E∖F⊥];po;[W-SFW];po?;[E∖F⊥]` as stated.
    Literal,
    /// `[E∖F⊥];po;[W-SFW] ∪ [W-SFW];po;[E∖F⊥∖R]`, matching the target ppo.
    #[default]
    Corrected,
}

/// Node sets used by the mixed ppo.
struct NodeSets {
    all_but_bot: EventSet,
    w: EventSet,
    w_not_nt: EventSet,
    r: EventSet,
    rmw: EventSet,
    mf: EventSet,
    sf: EventSet,
    wwmf: EventSet,
    wsfwmf: EventSet,
    wsfw: EventSet,
}

fn node_sets(m: &MixedGraph) -> NodeSets {
    use NodeKind::*;
    let n = m.len();
    let of = |ks: &[NodeKind]| EventSet::from_fn(n, |i| ks.contains(&m.nodes[i].kind));
    let nt = of(&[WNt, WNtAlt]);
    let w = match m.scheme {
        Scheme::Standard => of(&[Init, WW, WWmf, WNt]),
        Scheme::Alternative => of(&[Init, WW, WSfWMf, WSfW, WNtAlt]),
    };
    NodeSets {
        all_but_bot: EventSet::full(n).difference(&of(&[FBot])),
        w_not_nt: w.difference(&nt),
        w,
        r: of(&[RR]),
        rmw: of(&[RmwS, RmwF]),
        mf: of(&[FMf]),
        sf: of(&[FSf, FSfAlt]),
        wwmf: of(&[WWmf]),
        wsfwmf: of(&[WSfWMf]),
        wsfw: of(&[WSfW]),
    }
}

/// Preserved program order between mixed nodes.
pub fn mixed_ppo(m: &MixedGraph, alt: AltPpo) -> Relation {
    let s = node_sets(m);
    let n = m.len();
    let i = identity_on;
    let po = m.source.po();
    let po_loc = restrict_same_loc(po, |k| m.source.labels()[k].loc());
    let e = i(&s.all_but_bot);
    let e_not_r = i(&s.all_but_bot.difference(&s.r));
    let fences_in = s.rmw.union(&s.mf).union(&s.sf);
    let fences_out = s.r.union(&s.rmw).union(&s.mf);
    let mut parts = match m.scheme {
        Scheme::Standard => vec![
            e.compose(po).compose(&i(&fences_in)),
            i(&fences_out).compose(po).compose(&e),
            e.compose(&po.reflexive_closure()).compose(&i(&s.wwmf)).compose(po).compose(&e),
        ],
        Scheme::Alternative => {
            let release = match alt {
                AltPpo::Literal => e.compose(po).compose(&i(&s.wsfw)).compose(&po.reflexive_closure()).compose(&e),
                AltPpo::Corrected => e.compose(po).compose(&i(&s.wsfw)).union(&i(&s.wsfw).compose(po).compose(&e_not_r)),
            };
            vec![
                e.compose(po).compose(&i(&fences_in.union(&s.wsfwmf))),
                i(&fences_out.union(&s.wsfwmf)).compose(po).compose(&e),
                release,
            ]
        }
    };
    parts.push(i(&s.sf).compose(po).compose(&e_not_r));
    parts.push(i(&s.w_not_nt).compose(po).compose(&i(&s.w_not_nt)));
    parts.push(i(&s.w).compose(&po_loc).compose(&i(&s.w)));
    Relation::union_all(n, parts.iter())
}

/// x86 axioms evaluated on mixed nodes.
pub fn mixed_ex86_consistent(m: &MixedGraph, alt: AltPpo) -> Verdict {
    let x = &m.source;
    let rels = Rels::new(x);
    let split = |r: &Relation| split_internal_external(r, |k| x.event(k).tid());
    let (rf_i, rf_e) = split(&rels.rf);
    let (mo_i, mo_e) = split(&rels.mo);
    let (rb_i, rb_e) = split(&rels.rb);
    let internal = rels.po.compose(&Relation::union_all(m.len(), [&rf_i, &mo_i, &rb_i]));
    let ob = Relation::union_all(m.len(), [&mixed_ppo(m, alt), &rf_e, &mo_e, &rb_e]);
    verdict(x, [(Axiom::Internal, Shape::Irreflexive, internal), (Axiom::External, Shape::Acyclic, ob)])
}

/// Mixed-model axioms evaluated on mixed nodes; nodes carry their source labels.
pub fn mixed_rc11ext_consistent(m: &MixedGraph) -> Verdict {
    let rels = Rels::new(&m.source);
    verdict(&m.source, rels.axioms(ModelId::Rc11Ext))
}

fn verdict(x: &CandidateExecution, axioms: impl IntoIterator<Item = (Axiom, Shape, Relation)>) -> Verdict {
    let mut violated = Vec::new();
    let mut witness = None;
    for (ax, shape, r) in axioms {
        let bad = match shape {
            Shape::Irreflexive => r.find_reflexive().map(|i| vec![i]),
            Shape::Acyclic => r.find_cycle(),
        };
        if let Some(c) = bad {
            violated.push(ax);
            witness.get_or_insert_with(|| c.into_iter().map(|i| x.event(i)).collect());
        }
    }
    Verdict { consistent: violated.is_empty(), violated, witness }
}

/// Agreement of mixed-graph consistency with consistency of the projections.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferReport {
    pub mixed_rc11ext: bool,
    pub source_rc11ext: bool,
    pub mixed_ex86: bool,
    pub target_ex86: bool,
    /// Axioms on which a mixed verdict and its projection verdict disagree.
    pub discrepancies: Vec<String>,
}

impl TransferReport {
    pub fn holds(&self) -> bool {
        self.discrepancies.is_empty()
    }

    /// x86 consistency of the mixed graph implies mixed-model consistency.
    pub fn weaker_than(&self) -> bool {
        !self.mixed_ex86 || self.mixed_rc11ext
    }
}

pub fn transfer_check(m: &MixedGraph, alt: AltPpo) -> Result<TransferReport, ModelError> {
    let mr = mixed_rc11ext_consistent(m);
    let sr = models::rc11ext_consistent(&project_source(m))?;
    let mx = mixed_ex86_consistent(m, alt);
    let tx = models::ex86_consistent(&project_target(m))?;
    let mut discrepancies = Vec::new();
    for (side, a, b) in [("rc11ext", &mr, &sr), ("ex86", &mx, &tx)] {
        if a.consistent != b.consistent || a.violated != b.violated {
            discrepancies.push(format!("{side}: mixed violates {:?}, projection violates {:?}", names(&a.violated), names(&b.violated)));
        }
    }
    Ok(TransferReport { mixed_rc11ext: mr.consistent, source_rc11ext: sr.consistent, mixed_ex86: mx.consistent, target_ex86: tx.consistent, discrepancies })
}

fn names(v: &[Axiom]) -> Vec<&'static str> {
    v.iter().map(|a| a.name()).collect()
}

/// Summary of simulating every target execution of a compiled program.
#[derive(Clone, Debug, Default, Serialize)]
pub struct TransferSweep {
    pub executions: usize,
    pub transfer_failures: usize,
    pub weaker_than_failures: usize,
    pub kind_violations: usize,
    pub round_trip_failures: usize,
    pub overflow: bool,
    /// First failing target execution, rendered.
    pub first_failure: Option<String>,
}

impl TransferSweep {
    pub fn holds(&self) -> bool {
        self.transfer_failures == 0 && self.weaker_than_failures == 0 && self.kind_violations == 0 && self.round_trip_failures == 0
    }
}

/// Builds the mixed graph of every candidate execution of `compile(p, s)` and
/// checks transfer, weaker-than, node kinds and projection round trips.
pub fn transfer_sweep(p: &Program, s: Scheme, alt: AltPpo, values: &ValueDomain, bound: usize) -> Result<TransferSweep, ModelError> {
    let target = compile(p, s);
    let gs = opsem::enumerate_graphs(&target, values, bound);
    let mut out = TransferSweep { overflow: gs.overflow, ..Default::default() };
    for cg in gs.graphs {
        let gi = Arc::new(GraphIndex::new(cg.graph));
        for x in opsem::candidates(gi, &cg.registers) {
            out.executions += 1;
            let m = match build_simulation(p, s, &x, bound) {
                Ok(m) => m,
                Err(e) => {
                    out.round_trip_failures += 1;
                    out.first_failure.get_or_insert_with(|| format!("{e}\n{}", x.graph.graph));
                    continue;
                }
            };
            if !m.kinds().all(|k| NodeKind::allowed(s).contains(&k)) {
                out.kind_violations += 1;
            }
            if project_target(&m) != x {
                out.round_trip_failures += 1;
            }
            let r = transfer_check(&m, alt)?;
            if !r.holds() {
                out.transfer_failures += 1;
                out.first_failure.get_or_insert_with(|| format!("{}\n{}", r.discrepancies.join("; "), x.graph.graph));
            }
            if !r.weaker_than() {
                out.weaker_than_failures += 1;
                out.first_failure.get_or_insert_with(|| format!("weaker-than fails\n{}", x.graph.graph));
            }
        }
    }
    Ok(out)
}

/// Location of a node, for rendering.
pub fn node_loc(m: &MixedGraph, i: usize) -> Option<Loc> {
    m.source.labels()[i].loc()
}
