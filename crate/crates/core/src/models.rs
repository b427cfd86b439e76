//! Consistency predicates over candidate executions, races, final states and
//! the behavior sets they induce.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::lang::{Loc, Mode, ModelId, Program, Val};
use crate::opsem::{self, CandidateExecution, GraphIndex, Label, ValueDomain, DEFAULT_BOUND};
use crate::relalg::{identity_on, split_internal_external, restrict_diff_loc, restrict_same_loc, EventId, EventSet, Relation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("{model} does not apply to label {label} of event {event}")]
    Precondition { model: ModelId, event: EventId, label: Label },
    #[error("{model} does not apply to {what}")]
    Program { model: ModelId, what: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    Coherence,
    CoherenceII,
    CoherenceIII,
    Sc,
    Atomicity,
    NoThinAir,
    Internal,
    External,
    ScCoherence,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::Coherence => "coherence",
            Axiom::CoherenceII => "coherence-ii",
            Axiom::CoherenceIII => "coherence-iii",
            Axiom::Sc => "sc",
            Axiom::Atomicity => "atomicity",
            Axiom::NoThinAir => "no-thin-air",
            Axiom::Internal => "internal",
            Axiom::External => "external",
            Axiom::ScCoherence => "sc-coherence",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Whether an axiom demands irreflexivity or acyclicity of its relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Irreflexive,
    Acyclic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub consistent: bool,
    pub violated: Vec<Axiom>,
    /// Events of a cycle (or the single reflexive event) in the relation of `violated[0]`.
    pub witness: Option<Vec<EventId>>,
}

/// Basic and derived relations of one candidate execution.
pub struct Rels<'a> {
    pub x: &'a CandidateExecution,
    pub n: usize,
    pub po: Relation,
    pub rf: Relation,
    pub mo: Relation,
    pub rb: Relation,
}

impl<'a> Rels<'a> {
    pub fn new(x: &'a CandidateExecution) -> Self {
        let n = x.n();
        let rb = x.rf.inverse().compose(&x.mo).difference(&Relation::identity(n));
        Rels { x, n, po: x.po().clone(), rf: x.rf.clone(), mo: x.mo.clone(), rb }
    }

    fn labels(&self) -> &[Label] {
        self.x.labels()
    }

    pub fn set(&self, pred: impl Fn(&Label) -> bool) -> EventSet {
        EventSet::from_fn(self.n, |i| pred(&self.labels()[i]))
    }

    fn id(&self, pred: impl Fn(&Label) -> bool) -> Relation {
        identity_on(&self.set(pred))
    }

    fn loc(&self) -> impl Fn(usize) -> Option<Loc> + '_ {
        |i| self.labels()[i].loc()
    }

    fn split(&self, r: &Relation) -> (Relation, Relation) {
        split_internal_external(r, |i| self.x.event(i).tid())
    }

    pub fn po_loc(&self) -> Relation {
        restrict_same_loc(&self.po, self.loc())
    }

    pub fn sw(&self) -> Relation {
        let at_least = |m: Mode| move |l: &Label| m.leq(l.mode());
        let fences = self.id(Label::is_fence);
        let head = self.id(at_least(Mode::Rel)).compose(&fences.compose(&self.po).reflexive_closure());
        let writes = self.id(|l| (l.is_write() || l.is_rmw()) && Mode::Rlx.leq(l.mode()));
        let reads = self.id(|l| l.is_read_like() && Mode::Rlx.leq(l.mode()));
        let tail = self.po.compose(&fences).reflexive_closure().compose(&self.id(at_least(Mode::Acq)));
        head.compose(&writes).compose(&self.rf.transitive_closure()).compose(&reads).compose(&tail)
    }

    /// Program order with non-temporal writes detached from later events, except
    /// where a locked RMW, a store fence or a same-location write follows.
    pub fn po_rc(&self) -> Relation {
        let not_nt = self.id(|l| !(l.is_write() && l.mode() == Mode::Nt));
        let barriers = self.id(|l| (l.is_rmw() && l.mode() == Mode::Tso) || (l.is_fence() && Mode::Sf.leq(l.mode())));
        let plain_writes = self.id(Label::is_write);
        Relation::union_all(
            self.n,
            [&not_nt.compose(&self.po), &self.po.compose(&barriers), &self.po_loc().compose(&plain_writes)],
        )
    }

    pub fn hb(&self, model: ModelId) -> Relation {
        let base = if model == ModelId::Rc11Ext { self.po_rc() } else { self.po.clone() };
        base.union(&self.sw()).transitive_closure()
    }

    pub fn eco(&self, model: ModelId) -> Relation {
        let rf = if model == ModelId::Rc11Ext { self.split(&self.rf).1 } else { self.rf.clone() };
        Relation::union_all(self.n, [&rf, &self.mo, &self.rb]).transitive_closure()
    }

    pub fn psc(&self, hb: &Relation, eco: &Relation) -> Relation {
        let po_dl = restrict_diff_loc(&self.po, self.loc());
        let hb_loc = restrict_same_loc(hb, self.loc());
        let scb = Relation::union_all(self.n, [&self.po, &po_dl.compose(hb).compose(&po_dl), &hb_loc, &self.mo, &self.rb]);
        let e_sc = self.id(|l| l.mode() == Mode::Sc);
        let f_sc = self.id(|l| l.is_fence() && l.mode() == Mode::Sc);
        let hb_q = hb.reflexive_closure();
        let pre = e_sc.union(&f_sc.compose(&hb_q));
        let post = e_sc.union(&hb_q.compose(&f_sc));
        let base = pre.compose(&scb).compose(&post);
        let fence = f_sc.compose(&hb.union(&hb.compose(eco).compose(hb))).compose(&f_sc);
        base.union(&fence)
    }

    /// Preserved program order of assembly accesses inside mixed executions.
    pub fn ppo_asm(&self) -> Relation {
        let tso = |l: &Label| l.mode() == Mode::Tso;
        let rmw_tso = |l: &Label| l.is_rmw() && tso(l);
        let sf_up = |l: &Label| l.is_fence() && Mode::Sf.leq(l.mode());
        let wnt = |l: &Label| l.is_write() && l.mode() == Mode::Nt;
        let po = &self.po;
        let a = po.compose(&self.id(|l| rmw_tso(l) || sf_up(l)));
        let b = self.id(|l| (l.is_read() && tso(l)) || rmw_tso(l) || (l.is_fence() && l.mode() == Mode::Sc)).compose(po);
        let c = self.id(sf_up).compose(po).compose(&self.id(|l| !l.is_read()));
        let d = self.id(|l| l.is_write() && tso(l)).compose(po).compose(&self.id(|l| !l.is_read() && !wnt(l)));
        let e = self.id(|l| !l.is_read() && !wnt(l)).compose(po).compose(&self.id(|l| l.is_write() && tso(l)));
        Relation::union_all(self.n, [&a, &b, &c, &d, &e])
    }

    /// Preserved program order of the x86 model.
    pub fn ppo_x86(&self) -> Relation {
        let (w, nt, r, rmw, mf, sf) = x86_sets(self);
        let po = &self.po;
        let not_r = EventSet::full(self.n).difference(&r);
        let wnt = w.union(&nt);
        let i = identity_on;
        Relation::union_all(
            self.n,
            [
                &po.compose(&i(&rmw.union(&mf).union(&sf))),
                &i(&r.union(&rmw).union(&mf)).compose(po),
                &i(&sf).compose(po).compose(&i(&not_r)),
                &i(&w).compose(po).compose(&i(&w)),
                &i(&wnt).compose(&self.po_loc()).compose(&i(&wnt)),
            ],
        )
    }

    /// The relations each axiom of `model` constrains.
    pub fn axioms(&self, model: ModelId) -> Vec<(Axiom, Shape, Relation)> {
        match model {
            ModelId::Sc => {
                vec![(Axiom::ScCoherence, Shape::Acyclic, Relation::union_all(self.n, [&self.po, &self.rf, &self.mo, &self.rb]))]
            }
            ModelId::Rc11 | ModelId::Rc11Ext => {
                let hb = self.hb(model);
                let eco = self.eco(model);
                let mut out = vec![
                    (Axiom::Coherence, Shape::Irreflexive, hb.compose(&eco.reflexive_closure())),
                    (Axiom::Sc, Shape::Acyclic, self.psc(&hb, &eco)),
                    (Axiom::Atomicity, Shape::Irreflexive, self.rb.compose(&self.mo)),
                    (Axiom::NoThinAir, Shape::Acyclic, self.po.union(&self.rf)),
                ];
                if model == ModelId::Rc11Ext {
                    let wnt = self.id(|l| l.is_write() && l.mode() == Mode::Nt);
                    out.insert(1, (Axiom::CoherenceII, Shape::Acyclic, self.ppo_asm().union(&eco)));
                    out.insert(2, (Axiom::CoherenceIII, Shape::Irreflexive, wnt.compose(&self.po).compose(&self.rb.union(&self.mo))));
                }
                out
            }
            ModelId::Ex86 => {
                let (rf_i, rf_e) = self.split(&self.rf);
                let (mo_i, mo_e) = self.split(&self.mo);
                let (rb_i, rb_e) = self.split(&self.rb);
                let internal = self.po.compose(&Relation::union_all(self.n, [&rf_i, &mo_i, &rb_i]));
                let ob = Relation::union_all(self.n, [&self.ppo_x86(), &rf_e, &mo_e, &rb_e]);
                vec![(Axiom::Internal, Shape::Irreflexive, internal), (Axiom::External, Shape::Acyclic, ob)]
            }
        }
    }
}

/// Write, non-temporal write, read, RMW, full fence and store fence events.
fn x86_sets(r: &Rels) -> (EventSet, EventSet, EventSet, EventSet, EventSet, EventSet) {
    let init = EventSet::from_fn(r.n, |i| r.x.event(i).is_init());
    let w = r.set(|l| l.is_write() && l.mode() == Mode::Tso).union(&init);
    let nt = r.set(|l| l.is_write() && l.mode() == Mode::Nt);
    let rd = r.set(|l| l.is_read() && l.mode() == Mode::Tso);
    let rmw = r.set(Label::is_rmw);
    let mf = r.set(|l| l.is_fence() && l.mode() == Mode::Sc);
    let sf = r.set(|l| l.is_fence() && l.mode() == Mode::Sf);
    (w, nt, rd, rmw, mf, sf)
}

fn check_labels(x: &CandidateExecution, model: ModelId) -> Result<(), ModelError> {
    let ok: fn(&Label) -> bool = match model {
        ModelId::Rc11 => Label::is_rc11,
        ModelId::Ex86 => Label::is_ex86,
        ModelId::Sc | ModelId::Rc11Ext => return Ok(()),
    };
    for i in 0..x.n() {
        let e = x.event(i);
        if !e.is_init() && !ok(&x.labels()[i]) {
            return Err(ModelError::Precondition { model, event: e, label: x.labels()[i] });
        }
    }
    Ok(())
}

fn violation(shape: Shape, r: &Relation) -> Option<Vec<usize>> {
    match shape {
        Shape::Irreflexive => r.find_reflexive().map(|i| vec![i]),
        Shape::Acyclic => r.find_cycle(),
    }
}

/// Evaluates every axiom of `model` on `x`.
pub fn check(x: &CandidateExecution, model: ModelId) -> Result<Verdict, ModelError> {
    check_labels(x, model)?;
    let rels = Rels::new(x);
    let mut violated = Vec::new();
    let mut witness = None;
    for (ax, shape, r) in rels.axioms(model) {
        if let Some(cyc) = violation(shape, &r) {
            violated.push(ax);
            if witness.is_none() {
                witness = Some(cyc.into_iter().map(|i| x.event(i)).collect());
            }
        }
    }
    Ok(Verdict { consistent: violated.is_empty(), violated, witness })
}

/// Cheaper than [`check`]: stops at the first violated axiom.
pub fn is_consistent(x: &CandidateExecution, model: ModelId) -> bool {
    let rels = Rels::new(x);
    rels.axioms(model).iter().all(|(_, shape, r)| match shape {
        Shape::Irreflexive => r.is_irreflexive(),
        Shape::Acyclic => r.is_acyclic(),
    })
}

pub fn rc11_consistent(x: &CandidateExecution) -> Result<Verdict, ModelError> {
    check(x, ModelId::Rc11)
}

pub fn rc11ext_consistent(x: &CandidateExecution) -> Result<Verdict, ModelError> {
    check(x, ModelId::Rc11Ext)
}

pub fn ex86_consistent(x: &CandidateExecution) -> Result<Verdict, ModelError> {
    check(x, ModelId::Ex86)
}

pub fn sc_consistent(x: &CandidateExecution) -> Verdict {
    check(x, ModelId::Sc).expect("sc has no label precondition")
}

pub fn sw_relation(x: &CandidateExecution) -> Relation {
    Rels::new(x).sw()
}

/// Re-evaluates the named axiom's relation and confirms `events` is a cycle in it
/// (or a single reflexive event for irreflexivity axioms).
pub fn verify_witness(x: &CandidateExecution, model: ModelId, axiom: Axiom, events: &[EventId]) -> bool {
    let rels = Rels::new(x);
    let Some((_, shape, r)) = rels.axioms(model).into_iter().find(|(a, _, _)| *a == axiom) else { return false };
    let Some(idx) = events.iter().map(|e| x.graph.index_of(*e)).collect::<Option<Vec<usize>>>() else { return false };
    match (shape, idx.as_slice()) {
        (Shape::Irreflexive, [i]) => r.contains(*i, *i),
        (Shape::Acyclic, cyc) if !cyc.is_empty() => (0..cyc.len()).all(|k| r.contains(cyc[k], cyc[(k + 1) % cyc.len()])),
        _ => false,
    }
}

/// Pairs of distinct same-location events, one of them writing, unordered by `hb`.
pub fn races(x: &CandidateExecution, hb: &Relation) -> Vec<(EventId, EventId)> {
    let ls = x.labels();
    let mut out = Vec::new();
    for a in 0..x.n() {
        for b in a + 1..x.n() {
            if ls[a].loc().is_some()
                && ls[a].loc() == ls[b].loc()
                && (ls[a].is_write_like() || ls[b].is_write_like())
                && !hb.contains(a, b)
                && !hb.contains(b, a)
            {
                out.push((x.event(a), x.event(b)));
            }
        }
    }
    out
}

/// A race involving a non-atomic access, if any.
pub fn na_race(x: &CandidateExecution, model: ModelId) -> Option<(EventId, EventId)> {
    let hb = Rels::new(x).hb(model);
    let na = |e: EventId| x.graph.label(e).map(|l| l.mode() == Mode::Na).unwrap_or(false);
    races(x, &hb).into_iter().find(|(a, b)| na(*a) || na(*b))
}

/// Value of the mo-maximal non-initial write at each written location.
pub fn final_state(x: &CandidateExecution) -> BTreeMap<Loc, Val> {
    let ls = x.labels();
    let mut out = BTreeMap::new();
    for (w, l) in ls.iter().enumerate() {
        if x.event(w).is_init() || !l.is_write_like() {
            continue;
        }
        if x.mo.successors(w).next().is_none() {
            out.insert(l.loc().expect("writes have locations"), l.write_value().expect("write"));
        }
    }
    out
}

/// Final memory together with final registers (every program register, default 0).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Outcome {
    pub memory: BTreeMap<Loc, Val>,
    pub registers: BTreeMap<String, Val>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum BehaviorSet {
    Ub,
    Outcomes(BTreeSet<Outcome>),
}

impl BehaviorSet {
    pub fn is_ub(&self) -> bool {
        matches!(self, BehaviorSet::Ub)
    }

    pub fn outcomes(&self) -> Option<&BTreeSet<Outcome>> {
        match self {
            BehaviorSet::Ub => None,
            BehaviorSet::Outcomes(o) => Some(o),
        }
    }

    /// Distinct final memories.
    pub fn memories(&self) -> Option<BTreeSet<BTreeMap<Loc, Val>>> {
        self.outcomes().map(|o| o.iter().map(|o| o.memory.clone()).collect())
    }

    /// `self ⊆ other`, with UB on the right containing everything.
    pub fn included_in(&self, other: &BehaviorSet) -> bool {
        match (self, other) {
            (_, BehaviorSet::Ub) => true,
            (BehaviorSet::Ub, _) => false,
            (BehaviorSet::Outcomes(a), BehaviorSet::Outcomes(b)) => a.is_subset(b),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Config {
    /// Explicit read-value domain; `None` grows `{0} ∪ literals` until closed under written values.
    pub values: Option<ValueDomain>,
    pub bound: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config { values: None, bound: DEFAULT_BOUND }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub graphs: usize,
    pub candidates: usize,
    pub consistent: usize,
    pub prefix_graphs: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BehaviorReport {
    pub model: ModelId,
    pub behaviors: BehaviorSet,
    /// A racy pair witnessing UB.
    pub ub_race: Option<(EventId, EventId)>,
    pub overflow: bool,
    pub values: ValueDomain,
    pub stats: Stats,
}

const CLOSURE_ROUNDS: usize = 8;

/// Checks that `model` can be applied to `p`.
pub fn check_program(p: &Program, model: ModelId) -> Result<(), ModelError> {
    match model {
        ModelId::Rc11 if !p.is_pure_rc11() => Err(ModelError::Program { model, what: "programs with assembly commands".into() }),
        ModelId::Ex86 if !p.is_pure_asm() => Err(ModelError::Program { model, what: "programs with plain accesses".into() }),
        _ => Ok(()),
    }
}

/// The value domain used for `p`: explicit, or `{0} ∪ literals` closed under written values.
pub fn value_domain(p: &Program, cfg: &Config) -> ValueDomain {
    if let Some(v) = &cfg.values {
        return v.clone();
    }
    let mut dom = ValueDomain::for_program(p);
    for _ in 0..CLOSURE_ROUNDS {
        let gs = opsem::enumerate_graphs(p, &dom, cfg.bound);
        let written: BTreeSet<Val> = gs
            .graphs
            .iter()
            .filter(|g| reads_justifiable(&g.graph))
            .flat_map(|g| g.graph.labels().filter_map(Label::write_value).collect::<Vec<_>>())
            .collect();
        if written.is_subset(&dom.0) {
            break;
        }
        dom.0.extend(written);
    }
    dom
}

/// Every read has some same-location write of its value, so rf candidates exist.
fn reads_justifiable(g: &opsem::ExecutionGraph) -> bool {
    let writes: BTreeSet<(Loc, Val)> = g.labels().filter_map(|l| Some((l.loc()?, l.write_value()?))).collect();
    g.labels().all(|l| match (l.loc(), l.read_value()) {
        (Some(loc), Some(v)) => v == 0 || writes.contains(&(loc, v)),
        _ => true,
    })
}

fn outcome_of(x: &CandidateExecution, regs: &BTreeSet<String>) -> Outcome {
    let mut registers: BTreeMap<String, Val> = regs.iter().map(|r| (r.clone(), 0)).collect();
    for rs in x.registers.values() {
        registers.extend(rs.iter().map(|(k, v)| (k.clone(), *v)));
    }
    Outcome { memory: final_state(x), registers }
}

/// Behaviors of `p` under `model`: final outcomes of consistent complete executions,
/// or UB when a consistent execution of any reachable graph has a race on a
/// non-atomic access.
pub fn behaviors(p: &Program, model: ModelId, cfg: &Config) -> Result<BehaviorReport, ModelError> {
    check_program(p, model)?;
    let values = value_domain(p, cfg);
    let gs = opsem::enumerate_graphs(p, &values, cfg.bound);
    let mut overflow = gs.overflow;
    let mut stats = Stats { graphs: gs.graphs.len(), ..Stats::default() };

    if matches!(model, ModelId::Rc11 | ModelId::Rc11Ext) && p.has_na_access() {
        let (prefixes, pre_overflow) = opsem::prefix_graphs(p, &values, cfg.bound);
        overflow |= pre_overflow;
        stats.prefix_graphs = prefixes.len();
        let found = AtomicBool::new(false);
        let race = prefixes.par_iter().find_map_any(|g| {
            if !g.labels().any(|l| l.mode() == Mode::Na) || found.load(Ordering::Relaxed) {
                return None;
            }
            let gi = Arc::new(GraphIndex::new(g.clone()));
            let r = opsem::candidates(gi, &BTreeMap::new())
                .iter()
                .filter(|x| is_consistent(x, model))
                .find_map(|x| na_race(x, model));
            if r.is_some() {
                found.store(true, Ordering::Relaxed);
            }
            r
        });
        if let Some(r) = race {
            return Ok(BehaviorReport { model, behaviors: BehaviorSet::Ub, ub_race: Some(r), overflow, values, stats });
        }
    }

    let regs = p.registers();
    // (candidates, consistent, outcomes) for each graph.
    type GraphTally = (usize, usize, BTreeSet<Outcome>);
    let per_graph: Vec<Result<GraphTally, ModelError>> = gs
        .graphs
        .par_iter()
        .map(|cg| {
            let gi = Arc::new(GraphIndex::new(cg.graph.clone()));
            let cands = opsem::candidates(gi, &cg.registers);
            let mut outs = BTreeSet::new();
            let mut consistent = 0;
            for x in &cands {
                check_labels(x, model)?;
                if is_consistent(x, model) {
                    consistent += 1;
                    outs.insert(outcome_of(x, &regs));
                }
            }
            Ok((cands.len(), consistent, outs))
        })
        .collect();
    let mut outcomes = BTreeSet::new();
    for r in per_graph {
        let (c, k, o) = r?;
        stats.candidates += c;
        stats.consistent += k;
        outcomes.extend(o);
    }
    Ok(BehaviorReport { model, behaviors: BehaviorSet::Outcomes(outcomes), ub_race: None, overflow, values, stats })
}

/// Every candidate execution of `p`'s complete graphs.
pub fn all_candidates(p: &Program, values: &ValueDomain, bound: usize) -> Vec<CandidateExecution> {
    opsem::enumerate_graphs(p, values, bound)
        .graphs
        .into_par_iter()
        .flat_map_iter(|cg| opsem::candidates(Arc::new(GraphIndex::new(cg.graph)), &cg.registers))
        .collect()
}

/// Outcome of the data-race-freedom check.
#[derive(Clone, Debug, Serialize)]
pub struct DrfReport {
    /// No SC-consistent execution has a race other than between two sc accesses.
    pub race_free: bool,
    pub race: Option<(EventId, EventId)>,
    /// RC11Ext outcomes equal SC outcomes.
    pub sc_equivalent: bool,
    pub holds: bool,
    pub overflow: bool,
}

/// DRF guarantee: a program without RMWs whose SC-consistent executions only
/// race between sc accesses has exactly its SC behaviors under RC11Ext.
pub fn check_drf(p: &Program, cfg: &Config) -> Result<DrfReport, ModelError> {
    if p.has_rmw() {
        return Err(ModelError::Program { model: ModelId::Rc11Ext, what: "DRF checks of programs with RMWs".into() });
    }
    let values = value_domain(p, cfg);
    let cfg = Config { values: Some(values.clone()), bound: cfg.bound };
    let (prefixes, mut overflow) = opsem::prefix_graphs(p, &values, cfg.bound);
    let race = prefixes.par_iter().find_map_any(|g| {
        let gi = Arc::new(GraphIndex::new(g.clone()));
        opsem::candidates(gi, &BTreeMap::new()).iter().filter(|x| is_consistent(x, ModelId::Sc)).find_map(|x| {
            let hb = Rels::new(x).hb(ModelId::Rc11Ext);
            let sc = |e: EventId| x.graph.label(e).map(|l| l.mode() == Mode::Sc).unwrap_or(false);
            races(x, &hb).into_iter().find(|(a, b)| !(sc(*a) && sc(*b)))
        })
    });
    let ext = behaviors(p, ModelId::Rc11Ext, &cfg)?;
    let sc = behaviors(p, ModelId::Sc, &cfg)?;
    overflow |= ext.overflow || sc.overflow;
    let sc_equivalent = ext.behaviors == sc.behaviors;
    Ok(DrfReport { race_free: race.is_none(), race, sc_equivalent, holds: race.is_some() || sc_equivalent, overflow })
}
