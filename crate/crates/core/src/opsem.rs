//! Pool-reduction semantics: from a program to its execution graphs, and from
//! a graph to its candidate executions (reads-from and modification order).

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::lang::{Cmd, Expr, Loc, Mode, Program, RegState, Tid, Val};
use crate::relalg::{EventId, Relation};

/// Memory action recorded on an event.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Label {
    R { md: Mode, loc: Loc, val: Val },
    W { md: Mode, loc: Loc, val: Val },
    F { md: Mode },
    /// `written == None` marks a failed RMW.
    Rmw { md: Mode, loc: Loc, read: Val, written: Option<Val> },
}

impl Label {
    pub fn init(loc: Loc) -> Label {
        Label::W { md: Mode::Na, loc, val: 0 }
    }

    pub fn mode(&self) -> Mode {
        match *self {
            Label::R { md, .. } | Label::W { md, .. } | Label::F { md } | Label::Rmw { md, .. } => md,
        }
    }

    pub fn with_mode(&self, m: Mode) -> Label {
        let mut l = *self;
        match &mut l {
            Label::R { md, .. } | Label::W { md, .. } | Label::F { md } | Label::Rmw { md, .. } => *md = m,
        }
        l
    }

    pub fn loc(&self) -> Option<Loc> {
        match *self {
            Label::R { loc, .. } | Label::W { loc, .. } | Label::Rmw { loc, .. } => Some(loc),
            Label::F { .. } => None,
        }
    }

    /// Value read by a read or RMW.
    pub fn read_value(&self) -> Option<Val> {
        match *self {
            Label::R { val, .. } => Some(val),
            Label::Rmw { read, .. } => Some(read),
            _ => None,
        }
    }

    /// Value written by a write or successful RMW.
    pub fn write_value(&self) -> Option<Val> {
        match *self {
            Label::W { val, .. } => Some(val),
            Label::Rmw { written, .. } => written,
            _ => None,
        }
    }

    pub fn is_read_like(&self) -> bool {
        self.read_value().is_some()
    }

    pub fn is_write_like(&self) -> bool {
        self.write_value().is_some()
    }

    pub fn is_read(&self) -> bool {
        matches!(self, Label::R { .. })
    }

    pub fn is_write(&self) -> bool {
        matches!(self, Label::W { .. })
    }

    pub fn is_rmw(&self) -> bool {
        matches!(self, Label::Rmw { .. })
    }

    pub fn is_fence(&self) -> bool {
        matches!(self, Label::F { .. })
    }

    /// Label of the plain C11 fragment.
    pub fn is_rc11(&self) -> bool {
        matches!(self.mode(), Mode::Na | Mode::Rlx | Mode::Rel | Mode::Acq | Mode::AcqRel | Mode::Sc)
    }

    /// Label of the x86 fragment: tso accesses, nt writes, store and full fences.
    pub fn is_ex86(&self) -> bool {
        match self {
            Label::R { md, .. } | Label::Rmw { md, .. } => *md == Mode::Tso,
            Label::W { md, .. } => matches!(md, Mode::Tso | Mode::Nt),
            Label::F { md } => matches!(md, Mode::Sc | Mode::Sf),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::R { md, loc, val } => write!(f, "R{md}(@{loc},{val})"),
            Label::W { md, loc, val } => write!(f, "W{md}(@{loc},{val})"),
            Label::F { md } => write!(f, "F{md}"),
            Label::Rmw { md, loc, read, written: Some(w) } => write!(f, "RMW{md}(@{loc},{read},{w})"),
            Label::Rmw { md, loc, read, written: None } => write!(f, "RMW{md}(@{loc},{read},_)"),
        }
    }
}

/// Values a read may return during enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValueDomain(pub BTreeSet<Val>);

impl ValueDomain {
    pub fn new(vals: impl IntoIterator<Item = Val>) -> Self {
        ValueDomain(vals.into_iter().collect())
    }

    /// `{0}` together with every literal of the program.
    pub fn for_program(p: &Program) -> Self {
        let mut s = p.literals();
        s.insert(0);
        ValueDomain(s)
    }

    pub fn iter(&self) -> impl Iterator<Item = Val> + '_ {
        self.0.iter().copied()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThreadState {
    pub regs: RegState,
    pub ev_counter: usize,
    pub next: Cmd,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pool {
    pub threads: BTreeMap<Tid, ThreadState>,
}

/// Events and labels; program order is implied by event identity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExecutionGraph {
    pub inits: BTreeSet<Loc>,
    pub threads: BTreeMap<Tid, Vec<Label>>,
}

impl ExecutionGraph {
    pub fn events(&self) -> Vec<EventId> {
        let mut out: Vec<EventId> = self.inits.iter().map(|l| EventId::Init(*l)).collect();
        for (tid, labels) in &self.threads {
            out.extend((0..labels.len()).map(|idx| EventId::Thread { tid: *tid, idx }));
        }
        out
    }

    pub fn label(&self, e: EventId) -> Option<Label> {
        match e {
            EventId::Init(l) => self.inits.contains(&l).then(|| Label::init(l)),
            EventId::Thread { tid, idx } => self.threads.get(&tid).and_then(|v| v.get(idx)).copied(),
        }
    }

    pub fn labels(&self) -> impl Iterator<Item = &Label> {
        self.threads.values().flatten()
    }

    /// Adds initialization events for every accessed location.
    fn close_inits(&mut self) {
        let locs: Vec<Loc> = self.labels().filter_map(Label::loc).collect();
        self.inits.extend(locs);
    }
}

impl fmt::Display for ExecutionGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (tid, ls) in &self.threads {
            let ls: Vec<String> = ls.iter().map(|l| l.to_string()).collect();
            writeln!(f, "{tid}: {}", ls.join("; "))?;
        }
        Ok(())
    }
}

pub fn initial_pool(p: &Program) -> Pool {
    Pool {
        threads: p
            .threads
            .iter()
            .map(|(t, c)| (*t, ThreadState { regs: RegState::new(), ev_counter: 0, next: Cmd::Seq(Box::new(c.clone()), Box::new(Cmd::Skip)) }))
            .collect(),
    }
}

pub fn initial_graph(p: &Program) -> ExecutionGraph {
    ExecutionGraph { inits: p.static_locations(), threads: p.threads.keys().map(|t| (*t, Vec::new())).collect() }
}

fn seq(a: Cmd, b: Cmd) -> Cmd {
    Cmd::Seq(Box::new(a), Box::new(b))
}

/// One reduction step of a single thread: successor states with the emitted label.
/// A thread whose command is `skip` has no thread-local step (it terminates).
pub fn thread_step(t: &ThreadState, values: &ValueDomain) -> Vec<(ThreadState, Option<Label>)> {
    let (head, rest) = match &t.next {
        Cmd::Skip => return Vec::new(),
        Cmd::Seq(a, b) => ((**a).clone(), (**b).clone()),
        other => (other.clone(), Cmd::Skip),
    };
    let ev = |regs: RegState, next: Cmd, label: Label| (ThreadState { regs, ev_counter: t.ev_counter + 1, next }, Some(label));
    let silent = |regs: RegState, next: Cmd| (ThreadState { regs, ev_counter: t.ev_counter, next }, None);
    let e = |x: &Expr| x.eval(&t.regs);
    let set = |r: &str, v: Val| {
        let mut regs = t.regs.clone();
        regs.insert(r.to_string(), v);
        regs
    };
    match head {
        Cmd::Skip => vec![silent(t.regs.clone(), rest)],
        Cmd::Seq(a, b) => vec![silent(t.regs.clone(), seq(*a, seq(*b, rest)))],
        Cmd::While(c, body) => {
            let unfolded = Cmd::If(c.clone(), Box::new(seq(*body.clone(), Cmd::While(c, body))));
            vec![silent(t.regs.clone(), seq(unfolded, rest))]
        }
        Cmd::If(c, body) => {
            let next = if e(&c) != 0 { seq(*body, rest) } else { rest };
            vec![silent(t.regs.clone(), next)]
        }
        Cmd::Assign { reg, val } => vec![silent(set(&reg, e(&val)), rest)],
        Cmd::Read { md, reg, addr } => read_step(md, &reg, e(&addr), values, &set, rest, ev),
        Cmd::AsmRead { reg, addr } => read_step(Mode::Tso, &reg, e(&addr), values, &set, rest, ev),
        Cmd::Write { md, addr, val } => vec![ev(t.regs.clone(), rest, Label::W { md, loc: e(&addr), val: e(&val) })],
        Cmd::AsmWrite { addr, val } => vec![ev(t.regs.clone(), rest, Label::W { md: Mode::Tso, loc: e(&addr), val: e(&val) })],
        Cmd::AsmNtWrite { addr, val } => vec![ev(t.regs.clone(), rest, Label::W { md: Mode::Nt, loc: e(&addr), val: e(&val) })],
        Cmd::Fence(md) => vec![ev(t.regs.clone(), rest, Label::F { md })],
        Cmd::AsmMFence => vec![ev(t.regs.clone(), rest, Label::F { md: Mode::Sc })],
        Cmd::AsmSFence => vec![ev(t.regs.clone(), rest, Label::F { md: Mode::Sf })],
        Cmd::Rmw { md, reg, addr, expected, new } => rmw_step(md, &reg, e(&addr), e(&expected), e(&new), values, &set, rest, ev),
        Cmd::AsmRmw { reg, addr, expected, new } => {
            rmw_step(Mode::Tso, &reg, e(&addr), e(&expected), e(&new), values, &set, rest, ev)
        }
    }
}

fn read_step(
    md: Mode,
    reg: &str,
    loc: Loc,
    values: &ValueDomain,
    set: &dyn Fn(&str, Val) -> RegState,
    rest: Cmd,
    ev: impl Fn(RegState, Cmd, Label) -> (ThreadState, Option<Label>),
) -> Vec<(ThreadState, Option<Label>)> {
    values.iter().map(|n| ev(set(reg, n), rest.clone(), Label::R { md, loc, val: n })).collect()
}

#[allow(clippy::too_many_arguments)]
fn rmw_step(
    md: Mode,
    reg: &str,
    loc: Loc,
    expected: Val,
    new: Val,
    values: &ValueDomain,
    set: &dyn Fn(&str, Val) -> RegState,
    rest: Cmd,
    ev: impl Fn(RegState, Cmd, Label) -> (ThreadState, Option<Label>),
) -> Vec<(ThreadState, Option<Label>)> {
    let mut out = vec![ev(set(reg, expected), rest.clone(), Label::Rmw { md, loc, read: expected, written: Some(new) })];
    for m in values.iter().filter(|m| *m != expected) {
        out.push(ev(set(reg, m), rest.clone(), Label::Rmw { md, loc, read: m, written: None }));
    }
    out
}

/// All successors of `(pool, graph)` under the nondeterministic scheduler.
pub fn pool_step(pool: &Pool, graph: &ExecutionGraph, values: &ValueDomain) -> Vec<(Pool, ExecutionGraph)> {
    let mut out = Vec::new();
    for (tid, t) in &pool.threads {
        if t.next == Cmd::Skip {
            let mut p = pool.clone();
            p.threads.remove(tid);
            out.push((p, graph.clone()));
            continue;
        }
        for (t2, label) in thread_step(t, values) {
            let mut p = pool.clone();
            p.threads.insert(*tid, t2);
            let mut g = graph.clone();
            if let Some(l) = label {
                g.threads.entry(*tid).or_default().push(l);
                if let Some(loc) = l.loc() {
                    g.inits.insert(loc);
                }
            }
            out.push((p, g));
        }
    }
    out
}

/// A complete run of one thread.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreadRun {
    pub labels: Vec<Label>,
    pub regs: RegState,
    pub steps: usize,
}

#[derive(Clone, Debug, Default)]
pub struct ThreadExploration {
    pub runs: Vec<ThreadRun>,
    /// Every label sequence reached, complete or not, including the empty one.
    pub prefixes: BTreeSet<Vec<Label>>,
    pub overflow: bool,
}

/// Cap on explored states per thread, so branching loops cannot run away.
const NODE_BUDGET: usize = 1 << 21;

/// Accepts or rejects a thread's label sequence so far.
pub type LabelGuide<'a> = &'a dyn Fn(&[Label]) -> bool;

/// Explores one thread in isolation. `guide`, when given, prunes every path
/// whose label sequence it rejects.
pub fn explore_thread(cmd: &Cmd, values: &ValueDomain, bound: usize, guide: Option<LabelGuide<'_>>) -> ThreadExploration {
    let start = ThreadState { regs: RegState::new(), ev_counter: 0, next: seq(cmd.clone(), Cmd::Skip) };
    let mut out = ThreadExploration::default();
    let mut runs: BTreeMap<Vec<Label>, ThreadRun> = BTreeMap::new();
    let mut stack = vec![(start, Vec::<Label>::new(), 0usize)];
    let mut nodes = 0usize;
    while let Some((t, labels, steps)) = stack.pop() {
        nodes += 1;
        if nodes > NODE_BUDGET {
            out.overflow = true;
            break;
        }
        out.prefixes.insert(labels.clone());
        if t.next == Cmd::Skip {
            if steps + 1 > bound {
                out.overflow = true;
            } else {
                runs.entry(labels.clone()).or_insert(ThreadRun { labels, regs: t.regs, steps: steps + 1 });
            }
            continue;
        }
        if steps + 1 > bound {
            out.overflow = true;
            continue;
        }
        for (t2, label) in thread_step(&t, values) {
            let mut ls = labels.clone();
            if let Some(l) = label {
                ls.push(l);
                if let Some(g) = guide {
                    if !g(&ls) {
                        continue;
                    }
                }
            }
            stack.push((t2, ls, steps + 1));
        }
    }
    out.runs = runs.into_values().collect();
    out
}

/// A graph reached with an empty pool, with the final register files.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompleteGraph {
    pub graph: ExecutionGraph,
    pub registers: BTreeMap<Tid, RegState>,
}

#[derive(Clone, Debug, Default)]
pub struct GraphSet {
    pub graphs: Vec<CompleteGraph>,
    pub overflow: bool,
}

pub const DEFAULT_BOUND: usize = 10_000;

/// All complete graphs of `p` within `bound` reduction steps.
///
/// Threads only interact through the graph, never through reduction, so the
/// complete graphs are the products of per-thread runs.
pub fn enumerate_graphs(p: &Program, values: &ValueDomain, bound: usize) -> GraphSet {
    let explorations: Vec<(Tid, ThreadExploration)> = p.threads.iter().map(|(t, c)| (*t, explore_thread(c, values, bound, None))).collect();
    let mut overflow = explorations.iter().any(|(_, e)| e.overflow);
    let mut partial: Vec<(ExecutionGraph, BTreeMap<Tid, RegState>, usize)> = vec![(initial_graph(p), BTreeMap::new(), 0)];
    for (tid, ex) in &explorations {
        let mut next = Vec::with_capacity(partial.len() * ex.runs.len());
        for (g, regs, steps) in &partial {
            for run in &ex.runs {
                if steps + run.steps > bound {
                    overflow = true;
                    continue;
                }
                let mut g = g.clone();
                g.threads.insert(*tid, run.labels.clone());
                let mut regs = regs.clone();
                regs.insert(*tid, run.regs.clone());
                next.push((g, regs, steps + run.steps));
            }
        }
        partial = next;
    }
    let mut seen = BTreeMap::new();
    for (mut g, regs, _) in partial {
        g.close_inits();
        seen.entry(g).or_insert(regs);
    }
    GraphSet { graphs: seen.into_iter().map(|(graph, registers)| CompleteGraph { graph, registers }).collect(), overflow }
}

/// Every graph reachable from the initial state, complete or not.
pub fn prefix_graphs(p: &Program, values: &ValueDomain, bound: usize) -> (Vec<ExecutionGraph>, bool) {
    let explorations: Vec<(Tid, ThreadExploration)> = p.threads.iter().map(|(t, c)| (*t, explore_thread(c, values, bound, None))).collect();
    let overflow = explorations.iter().any(|(_, e)| e.overflow);
    let mut partial = vec![initial_graph(p)];
    for (tid, ex) in &explorations {
        let mut next = Vec::with_capacity(partial.len() * ex.prefixes.len());
        for g in &partial {
            for pre in &ex.prefixes {
                let mut g = g.clone();
                g.threads.insert(*tid, pre.clone());
                next.push(g);
            }
        }
        partial = next;
    }
    for g in &mut partial {
        g.close_inits();
    }
    partial.sort();
    partial.dedup();
    (partial, overflow)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchOrder {
    Dfs,
    Bfs,
}

/// Complete graphs by exploring the full interleaving space with [`pool_step`].
pub fn enumerate_graphs_interleaved(p: &Program, values: &ValueDomain, bound: usize, order: SearchOrder) -> GraphSet {
    // Registers of terminated threads travel with the state until the pool empties.
    type State = (Pool, ExecutionGraph, BTreeMap<Tid, RegState>);
    let mut seen: HashSet<State> = HashSet::new();
    let mut work: VecDeque<(State, usize)> = VecDeque::from([((initial_pool(p), initial_graph(p), BTreeMap::new()), 0)]);
    let mut done: BTreeMap<ExecutionGraph, BTreeMap<Tid, RegState>> = BTreeMap::new();
    let mut overflow = false;
    while let Some((state, steps)) = match order {
        SearchOrder::Dfs => work.pop_back(),
        SearchOrder::Bfs => work.pop_front(),
    } {
        let (pool, graph, regs) = &state;
        if pool.threads.is_empty() {
            let mut g = graph.clone();
            g.close_inits();
            done.entry(g).or_insert_with(|| regs.clone());
            continue;
        }
        if steps >= bound {
            overflow = true;
            continue;
        }
        if !seen.insert(state.clone()) {
            continue;
        }
        for (p2, g2) in pool_step(pool, graph, values) {
            let mut r2 = regs.clone();
            for (tid, t) in &pool.threads {
                if !p2.threads.contains_key(tid) {
                    r2.insert(*tid, t.regs.clone());
                }
            }
            work.push_back(((p2, g2, r2), steps + 1));
        }
    }
    GraphSet { graphs: done.into_iter().map(|(graph, registers)| CompleteGraph { graph, registers }).collect(), overflow }
}

/// A graph with a dense numbering of its events: initialization events first,
/// then thread events by `(tid, idx)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphIndex {
    pub graph: ExecutionGraph,
    pub events: Vec<EventId>,
    pub labels: Vec<Label>,
    pub po: Relation,
}

impl GraphIndex {
    pub fn new(graph: ExecutionGraph) -> Self {
        let events = graph.events();
        let labels: Vec<Label> = events.iter().map(|e| graph.label(*e).expect("event of graph")).collect();
        let po = program_order_of(&events);
        GraphIndex { graph, events, labels, po }
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn index_of(&self, e: EventId) -> Option<usize> {
        self.events.binary_search(&e).ok()
    }

    pub fn label(&self, e: EventId) -> Option<Label> {
        self.index_of(e).map(|i| self.labels[i])
    }

    pub fn tid(&self, i: usize) -> Option<Tid> {
        self.events[i].tid()
    }

    pub fn loc(&self, i: usize) -> Option<Loc> {
        self.labels[i].loc()
    }
}

fn program_order_of(events: &[EventId]) -> Relation {
    Relation::from_fn(events.len(), |a, b| match (events[a], events[b]) {
        (EventId::Init(_), EventId::Thread { .. }) => true,
        (EventId::Thread { tid: t1, idx: i1 }, EventId::Thread { tid: t2, idx: i2 }) => t1 == t2 && i1 < i2,
        _ => false,
    })
}

pub fn program_order(g: &ExecutionGraph) -> Relation {
    program_order_of(&g.events())
}

/// A graph extended with reads-from and modification order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateExecution {
    pub graph: Arc<GraphIndex>,
    pub rf: Relation,
    pub mo: Relation,
    pub registers: BTreeMap<Tid, RegState>,
}

impl CandidateExecution {
    pub fn n(&self) -> usize {
        self.graph.len()
    }

    pub fn labels(&self) -> &[Label] {
        &self.graph.labels
    }

    pub fn po(&self) -> &Relation {
        &self.graph.po
    }

    pub fn event(&self, i: usize) -> EventId {
        self.graph.events[i]
    }

    pub fn rf_pairs(&self) -> Vec<(EventId, EventId)> {
        self.rf.pairs().map(|(a, b)| (self.event(a), self.event(b))).collect()
    }

    pub fn mo_pairs(&self) -> Vec<(EventId, EventId)> {
        self.mo.pairs().map(|(a, b)| (self.event(a), self.event(b))).collect()
    }

    /// Checks the reads-from and modification-order well-formedness conditions.
    pub fn well_formed(&self) -> Result<(), String> {
        let ls = self.labels();
        for r in 0..self.n() {
            let sources: Vec<usize> = (0..self.n()).filter(|w| self.rf.contains(*w, r)).collect();
            if ls[r].is_read_like() {
                let [w] = sources[..] else { return Err(format!("read {} has {} rf sources", self.event(r), sources.len())) };
                if !ls[w].is_write_like() || ls[w].loc() != ls[r].loc() || ls[w].write_value() != ls[r].read_value() {
                    return Err(format!("rf edge {} -> {} mismatches", self.event(w), self.event(r)));
                }
            } else if !sources.is_empty() {
                return Err(format!("non-read {} has rf sources", self.event(r)));
            }
        }
        for (a, b) in self.mo.pairs() {
            if !ls[a].is_write_like() || !ls[b].is_write_like() || ls[a].loc() != ls[b].loc() || a == b {
                return Err(format!("bad mo edge {} -> {}", self.event(a), self.event(b)));
            }
        }
        let writes: Vec<usize> = (0..self.n()).filter(|i| ls[*i].is_write_like()).collect();
        for &a in &writes {
            for &b in &writes {
                if a != b && ls[a].loc() == ls[b].loc() && !(self.mo.contains(a, b) ^ self.mo.contains(b, a)) {
                    return Err(format!("mo does not totally order {} and {}", self.event(a), self.event(b)));
                }
            }
        }
        if self.mo.transitive_closure() != self.mo {
            return Err("mo is not transitive".into());
        }
        Ok(())
    }
}

/// Every reads-from relation: each read picks one same-location write of the value it read.
pub fn enumerate_rf(g: &GraphIndex) -> Vec<Relation> {
    let n = g.len();
    let mut choices: Vec<(usize, Vec<usize>)> = Vec::new();
    for r in 0..n {
        if let Some(v) = g.labels[r].read_value() {
            let ws: Vec<usize> = (0..n)
                .filter(|&w| w != r && g.labels[w].loc() == g.labels[r].loc() && g.labels[w].write_value() == Some(v))
                .collect();
            if ws.is_empty() {
                return Vec::new();
            }
            choices.push((r, ws));
        }
    }
    let mut out = vec![Relation::empty(n)];
    for (r, ws) in choices {
        out = out
            .iter()
            .flat_map(|rel| {
                ws.iter().map(move |&w| {
                    let mut x = rel.clone();
                    x.insert(w, r);
                    x
                })
            })
            .collect();
    }
    out
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Every modification order: per location, each permutation of the non-initial
/// writes, placed after the initialization write.
pub fn enumerate_mo(g: &GraphIndex) -> Vec<Relation> {
    let n = g.len();
    let mut by_loc: BTreeMap<Loc, (Option<usize>, Vec<usize>)> = BTreeMap::new();
    for i in 0..n {
        if g.labels[i].is_write_like() {
            let entry = by_loc.entry(g.labels[i].loc().expect("writes have locations")).or_default();
            if g.events[i].is_init() {
                entry.0 = Some(i);
            } else {
                entry.1.push(i);
            }
        }
    }
    let mut out = vec![Relation::empty(n)];
    for (init, ws) in by_loc.values() {
        let orders: Vec<Vec<usize>> = permutations(ws)
            .into_iter()
            .map(|p| init.iter().copied().chain(p).collect())
            .collect();
        out = out
            .iter()
            .flat_map(|rel| {
                orders.iter().map(move |ord| {
                    let mut x = rel.clone();
                    for i in 0..ord.len() {
                        for j in i + 1..ord.len() {
                            x.insert(ord[i], ord[j]);
                        }
                    }
                    x
                })
            })
            .collect();
    }
    out
}

/// All candidate executions over one graph.
pub fn candidates(g: Arc<GraphIndex>, registers: &BTreeMap<Tid, RegState>) -> Vec<CandidateExecution> {
    let rfs = enumerate_rf(&g);
    if rfs.is_empty() {
        return Vec::new();
    }
    let mos = enumerate_mo(&g);
    let mut out = Vec::with_capacity(rfs.len() * mos.len());
    for rf in &rfs {
        for mo in &mos {
            out.push(CandidateExecution { graph: g.clone(), rf: rf.clone(), mo: mo.clone(), registers: registers.clone() });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_program;

    fn vals() -> ValueDomain {
        ValueDomain::new([0, 1])
    }

    const MP_NT: &str = "thread 0: asm movnt [x] 1; W[rel] [y] 1
thread 1: a := R[acq] [y]; b := R[rlx] [x]";

    #[test]
    fn initial_states() {
        let p = parse_program(MP_NT).unwrap();
        let pool = initial_pool(&p);
        assert_eq!(pool.threads.len(), 2);
        assert!(pool.threads.values().all(|t| t.ev_counter == 0));
        assert_eq!(initial_graph(&p).inits, BTreeSet::from([0, 1]));
        let skip = parse_program("thread 0: skip").unwrap();
        assert_eq!(initial_pool(&skip).threads[&0].next, seq(Cmd::Skip, Cmd::Skip));
        let computed = parse_program("thread 0: W[na] [2 + 3] 1").unwrap();
        assert_eq!(initial_graph(&computed).inits, BTreeSet::from([5]));
    }

    #[test]
    fn read_step_branches_on_values() {
        let p = parse_program("thread 0: a := R[acq] [y]").unwrap();
        let t = &initial_pool(&p).threads[&0];
        // Seq(Read, Skip) reduces directly.
        let succ = thread_step(t, &vals());
        assert_eq!(succ.len(), 2);
        let vals_read: BTreeSet<Val> = succ.iter().map(|(_, l)| l.unwrap().read_value().unwrap()).collect();
        assert_eq!(vals_read, BTreeSet::from([0, 1]));
    }

    #[test]
    fn terminate_removes_thread() {
        let p = parse_program("thread 0: skip").unwrap();
        let mut pool = initial_pool(&p);
        let g = initial_graph(&p);
        pool = pool_step(&pool, &g, &vals()).remove(0).0;
        assert_eq!(pool.threads[&0].next, Cmd::Skip);
        let succ = pool_step(&pool, &g, &vals());
        assert_eq!(succ.len(), 1);
        assert!(succ[0].0.threads.is_empty());
    }

    #[test]
    fn rmw_success_and_failure() {
        let p = parse_program("thread 0: r := RMW[rlx] [z] 0 1").unwrap();
        let t = &initial_pool(&p).threads[&0];
        let succ = thread_step(t, &vals());
        assert_eq!(succ.len(), 2);
        let (ok, lab) = &succ[0];
        assert_eq!(ok.regs["r"], 0);
        assert_eq!(lab.unwrap(), Label::Rmw { md: Mode::Rlx, loc: 0, read: 0, written: Some(1) });
        let (fail, lab) = &succ[1];
        assert_eq!(fail.regs["r"], 1);
        assert_eq!(lab.unwrap(), Label::Rmw { md: Mode::Rlx, loc: 0, read: 1, written: None });
    }

    #[test]
    fn graph_counts() {
        let p = parse_program(MP_NT).unwrap();
        assert_eq!(enumerate_graphs(&p, &vals(), DEFAULT_BOUND).graphs.len(), 4);
        let skips = parse_program("thread 0: skip\nthread 1: skip").unwrap();
        assert_eq!(enumerate_graphs(&skips, &vals(), DEFAULT_BOUND).graphs.len(), 1);
        let spin = parse_program("thread 0: while 1 { skip }").unwrap();
        let gs = enumerate_graphs(&spin, &vals(), 200);
        assert!(gs.graphs.is_empty());
        assert!(gs.overflow);
    }

    #[test]
    fn program_order_examples() {
        let g = ExecutionGraph {
            inits: BTreeSet::from([0]),
            threads: BTreeMap::from([(0, vec![Label::F { md: Mode::Sc }, Label::F { md: Mode::Sc }])]),
        };
        assert_eq!(program_order(&g), Relation::from_pairs(3, [(0, 1), (0, 2), (1, 2)]));
        let two = ExecutionGraph {
            inits: BTreeSet::from([0]),
            threads: BTreeMap::from([(0, vec![Label::F { md: Mode::Sc }]), (1, vec![Label::F { md: Mode::Sc }])]),
        };
        assert_eq!(program_order(&two), Relation::from_pairs(3, [(0, 1), (0, 2)]));
        let empty = ExecutionGraph { inits: BTreeSet::new(), threads: BTreeMap::new() };
        assert!(program_order(&empty).is_empty());
    }

    #[test]
    fn mp_nt_weak_graph_has_unique_rf() {
        let p = parse_program(MP_NT).unwrap();
        let gs = enumerate_graphs(&p, &vals(), DEFAULT_BOUND);
        let weak = gs
            .graphs
            .iter()
            .find(|g| g.graph.threads[&1] == vec![Label::R { md: Mode::Acq, loc: 1, val: 1 }, Label::R { md: Mode::Rlx, loc: 0, val: 0 }])
            .unwrap();
        let gi = GraphIndex::new(weak.graph.clone());
        let rfs = enumerate_rf(&gi);
        assert_eq!(rfs.len(), 1);
        let ev = |e| gi.index_of(e).unwrap();
        let w_y = ev(EventId::Thread { tid: 0, idx: 1 });
        let r_y = ev(EventId::Thread { tid: 1, idx: 0 });
        let r_x = ev(EventId::Thread { tid: 1, idx: 1 });
        assert_eq!(rfs[0], Relation::from_pairs(gi.len(), [(w_y, r_y), (ev(EventId::Init(0)), r_x)]));
    }

    #[test]
    fn mo_examples() {
        let p = parse_program("thread 0: W[rlx] [x] 1").unwrap();
        let g = &enumerate_graphs(&p, &vals(), DEFAULT_BOUND).graphs[0];
        let gi = GraphIndex::new(g.graph.clone());
        assert_eq!(enumerate_mo(&gi), vec![Relation::from_pairs(2, [(0, 1)])]);
        let sb = parse_program("thread 0: W[sc] [x] 1; a := R[sc] [y]\nthread 1: W[sc] [y] 1; b := R[sc] [x]").unwrap();
        for g in enumerate_graphs(&sb, &vals(), DEFAULT_BOUND).graphs {
            assert_eq!(enumerate_mo(&GraphIndex::new(g.graph)).len(), 1);
        }
    }
}
