//! Program transformations and an empirical soundness check: a transformation
//! is sound on a program when it adds no behaviors under the mixed model.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::compile::{extra_outcomes, InclusionReport};
use crate::lang::{AccessKind, Cmd, Expr, Loc, Mode, ModelId, Program, Tid};
use crate::models::{self, BehaviorSet, Config, ModelError, Outcome};

/// A command position: thread, then indices through nested blocks.
/// `[2, 0]` is the first command in the body of the third top-level command.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Site {
    pub tid: Tid,
    pub path: Vec<usize>,
}

impl Site {
    pub fn new(tid: Tid, path: impl IntoIterator<Item = usize>) -> Self {
        Site { tid, path: path.into_iter().collect() }
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.path.iter().map(|i| i.to_string()).collect();
        write!(f, "{}/{}", self.tid, p.join("."))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SeqKind {
    /// Requires the no-interaction-through-assembly condition.
    Nitia,
    /// Places an sc fence between the two threads.
    Fence,
    /// Unrestricted; known to be unsound.
    Plain,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum TransformKind {
    Strengthen { site: Site, mode: Mode },
    /// Splits a two-command thread into two threads.
    Deorder { tid: Tid },
    /// Merges the command at `site` with the next one in its block.
    Merge { site: Site },
    PromoteRegister { loc: Loc, tid: Tid },
    /// Merges thread `t2` into `t1`. `interleaving[i]` picks the next top-level
    /// command from `t1` (true) or `t2` (false); leftovers follow in order.
    Sequentialize { kind: SeqKind, t1: Tid, t2: Tid, interleaving: Vec<bool> },
}

impl fmt::Display for TransformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransformKind::Strengthen { site, mode } => write!(f, "strengthen:{site}:{mode}"),
            TransformKind::Deorder { tid } => write!(f, "deorder:{tid}"),
            TransformKind::Merge { site } => write!(f, "merge:{site}"),
            TransformKind::PromoteRegister { loc, tid } => write!(f, "promote:@{loc}:{tid}"),
            TransformKind::Sequentialize { kind, t1, t2, interleaving } => {
                let k = match kind {
                    SeqKind::Nitia => "seq-nitia",
                    SeqKind::Fence => "seq-fence",
                    SeqKind::Plain => "seq-plain",
                };
                write!(f, "{k}:{t1},{t2}")?;
                if !interleaving.is_empty() {
                    let bits: String = interleaving.iter().map(|b| if *b { '1' } else { '2' }).collect();
                    write!(f, ":{bits}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("no command at site {0}")]
    NoSuchSite(Site),
    #[error("no thread {0}")]
    NoSuchThread(Tid),
    #[error("cannot strengthen: {0}")]
    Strengthen(String),
    #[error("not deorderable: {0}")]
    Deorder(String),
    #[error("not mergeable: {0}")]
    Merge(String),
    #[error("cannot promote: {0}")]
    Promote(String),
    #[error("threads do not satisfy NITIA: {0}")]
    Nitia(String),
    #[error("bad transformation spec `{0}`")]
    Spec(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn thread(p: &Program, tid: Tid) -> Result<&Cmd, TransformError> {
    p.threads.get(&tid).ok_or(TransformError::NoSuchThread(tid))
}

/// The command at `site`.
pub fn command_at(p: &Program, site: &Site) -> Result<Cmd, TransformError> {
    let missing = || TransformError::NoSuchSite(site.clone());
    let mut c = thread(p, site.tid)?.clone();
    for (k, i) in site.path.iter().enumerate() {
        let inner = c.block().get(*i).cloned().ok_or_else(missing)?;
        c = if k + 1 == site.path.len() {
            inner
        } else {
            match inner {
                Cmd::If(_, b) | Cmd::While(_, b) => *b,
                _ => return Err(missing()),
            }
        };
    }
    if site.path.is_empty() {
        return Err(missing());
    }
    Ok(c)
}

/// Rewrites the block containing `site`; `f` receives the block and the site's index.
fn edit_block(
    p: &Program,
    site: &Site,
    f: impl FnOnce(Vec<Cmd>, usize) -> Result<Vec<Cmd>, TransformError>,
) -> Result<Program, TransformError> {
    fn go(
        c: &Cmd,
        path: &[usize],
        site: &Site,
        f: impl FnOnce(Vec<Cmd>, usize) -> Result<Vec<Cmd>, TransformError>,
    ) -> Result<Cmd, TransformError> {
        let mut cmds = c.block();
        match path {
            [] => return Err(TransformError::NoSuchSite(site.clone())),
            [i] => {
                if *i >= cmds.len() {
                    return Err(TransformError::NoSuchSite(site.clone()));
                }
                cmds = f(cmds, *i)?;
            }
            [i, rest @ ..] => {
                let inner = cmds.get(*i).ok_or_else(|| TransformError::NoSuchSite(site.clone()))?;
                cmds[*i] = match inner {
                    Cmd::If(e, b) => Cmd::If(e.clone(), Box::new(go(b, rest, site, f)?)),
                    Cmd::While(e, b) => Cmd::While(e.clone(), Box::new(go(b, rest, site, f)?)),
                    _ => return Err(TransformError::NoSuchSite(site.clone())),
                };
            }
        }
        Ok(Cmd::seq(cmds))
    }
    let mut out = p.clone();
    let body = go(thread(p, site.tid)?, &site.path, site, f)?;
    out.threads.insert(site.tid, body);
    Ok(out)
}

/// Raises the access mode of the command at `site` to `mode`.
pub fn strengthen(p: &Program, site: &Site, mode: Mode) -> Result<Program, TransformError> {
    let c = command_at(p, site)?;
    let (Some(kind), Some(old)) = (c.access_kind(), c.mode()) else {
        return Err(TransformError::Strengthen(format!("command at {site} has no access mode")));
    };
    if !old.leq(mode) {
        return Err(TransformError::Strengthen(format!("`{mode}` is not above `{old}`")));
    }
    if !kind.is_legal(mode) {
        return Err(TransformError::Strengthen(format!("`{mode}` is not a legal mode for this command")));
    }
    edit_block(p, site, |mut cmds, i| {
        cmds[i] = cmds[i].with_mode(mode).expect("plain command");
        Ok(cmds)
    })
}

fn static_loc(c: &Cmd) -> Option<Loc> {
    c.address().and_then(Expr::constant)
}

/// Mode side condition for swapping a plain command pair at distinct locations.
pub fn deorderable(c1: &Cmd, c2: &Cmd) -> bool {
    use AccessKind::*;
    let (Some(k1), Some(k2), Some(m1), Some(m2)) = (c1.access_kind(), c2.access_kind(), c1.mode(), c2.mode()) else {
        return false;
    };
    if k1 != Fence && k2 != Fence {
        match (static_loc(c1), static_loc(c2)) {
            (Some(x), Some(y)) if x != y => {}
            _ => return false,
        }
    }
    let le = |a: Mode, b: Mode| a.leq(b);
    match (k1, k2) {
        (Read, Read) => le(m1, Mode::Rlx),
        (Read, Write) => le(m1, Mode::Rlx) && le(m2, Mode::Rlx) && (m1 == Mode::Na || m2 == Mode::Na),
        (Read, Rmw) => m1 == Mode::Na && le(m2, Mode::Acq),
        (Read, Fence) => m1 != Mode::Rlx && m2 == Mode::Acq,
        (Write, Read) => m1 != Mode::Sc && m2 != Mode::Sc,
        (Write, Write) => le(m2, Mode::Rlx),
        (Write, Rmw) => le(m2, Mode::Acq),
        (Write, Fence) => m2 == Mode::Acq,
        (Rmw, Read) => le(m1, Mode::Rel),
        (Rmw, Write) => le(m1, Mode::Rel) && m2 == Mode::Na,
        (Rmw, Rmw) => false,
        (Rmw, Fence) => le(Mode::Acq, m1) && m2 == Mode::Acq,
        (Fence, Read) => m1 == Mode::Rel,
        (Fence, Write) => m1 == Mode::Rel && m2 != Mode::Rlx,
        (Fence, Rmw) => m1 == Mode::Rel && le(Mode::Rel, m2),
        (Fence, Fence) => m1 == Mode::Rel && m2 == Mode::Acq,
    }
}

/// Splits thread `tid`, which must be exactly two deorderable commands, into
/// two threads; the second command moves to a fresh thread.
pub fn deorder(p: &Program, tid: Tid) -> Result<Program, TransformError> {
    let cmds = thread(p, tid)?.block();
    let [c1, c2] = &cmds[..] else {
        return Err(TransformError::Deorder(format!("thread {tid} is not exactly two commands")));
    };
    if !deorderable(c1, c2) {
        return Err(TransformError::Deorder("pair is outside the deordering table".into()));
    }
    let (r1, r2) = (c1.registers(), c2.registers());
    if !r1.is_disjoint(&r2) {
        return Err(TransformError::Deorder("the commands share a register".into()));
    }
    let fresh = p.threads.keys().max().copied().unwrap_or(0) + 1;
    let mut out = p.clone();
    out.threads.insert(tid, c1.clone());
    out.threads.insert(fresh, c2.clone());
    Ok(out)
}

/// Single command replacing the same-location pair `c1; c2`, if the pair is mergeable.
pub fn mergeable(c1: &Cmd, c2: &Cmd) -> Option<Vec<Cmd>> {
    if let (Cmd::Fence(m1), Cmd::Fence(m2)) = (c1, c2) {
        return (m1 == m2).then(|| vec![c1.clone()]);
    }
    let (x, y) = (static_loc(c1)?, static_loc(c2)?);
    if x != y {
        return None;
    }
    match (c1, c2) {
        (Cmd::Write { md: m1, .. }, Cmd::Write { md: m2, .. }) if m1 == m2 => Some(vec![c2.clone()]),
        (Cmd::Read { md: m1, reg: a, .. }, Cmd::Read { md: m2, reg: b, .. }) if m1 == m2 => {
            Some(if a == b { vec![c1.clone()] } else { vec![c1.clone(), Cmd::Assign { reg: b.clone(), val: Expr::Reg(a.clone()) }] })
        }
        (Cmd::Write { md: m1, val, .. }, Cmd::Read { md: m2, reg, .. })
            if (*m1 == Mode::Sc && *m2 == Mode::Sc) || *m2 == Mode::Acq =>
        {
            Some(vec![c1.clone(), Cmd::Assign { reg: reg.clone(), val: val.clone() }])
        }
        _ => None,
    }
}

/// Merges the command at `site` with its successor in the same block.
pub fn merge(p: &Program, site: &Site) -> Result<Program, TransformError> {
    edit_block(p, site, |mut cmds, i| {
        let next = cmds.get(i + 1).ok_or_else(|| TransformError::Merge(format!("no command after {site}")))?;
        let merged = mergeable(&cmds[i], next).ok_or_else(|| TransformError::Merge("pair is outside the merging table".into()))?;
        cmds.splice(i..i + 2, merged);
        Ok(cmds)
    })
}

fn promoted_register(p: &Program, loc: Loc) -> String {
    let regs = p.registers();
    let base = format!("_p_{}", p.loc_name(loc).replace('@', ""));
    (0..).map(|k| if k == 0 { base.clone() } else { format!("{base}{k}") }).find(|r| !regs.contains(r)).expect("fresh name")
}

/// Replaces every access to `loc` in thread `tid` with register moves.
pub fn promote_register(p: &Program, loc: Loc, tid: Tid) -> Result<Program, TransformError> {
    promote(p, loc, tid, true)
}

/// Like [`promote_register`] but also rewrites assembly RMWs on `loc`.
pub fn promote_register_unchecked(p: &Program, loc: Loc, tid: Tid) -> Result<Program, TransformError> {
    promote(p, loc, tid, false)
}

fn promote(p: &Program, loc: Loc, tid: Tid, reject_asm_rmw: bool) -> Result<Program, TransformError> {
    thread(p, tid)?;
    for (t, c) in &p.threads {
        let mut err = None;
        c.walk(&mut |c| {
            if let Some(a) = c.address() {
                match a.constant() {
                    None => err = Some("an address is not statically known".to_string()),
                    Some(l) if l == loc && *t != tid => err = Some(format!("location is also accessed by thread {t}")),
                    Some(l) if l == loc && reject_asm_rmw && matches!(c, Cmd::AsmRmw { .. }) => {
                        err = Some("location is accessed by an assembly read-modify-write".into())
                    }
                    _ => {}
                }
            }
        });
        if let Some(e) = err {
            return Err(TransformError::Promote(e));
        }
    }
    let z = promoted_register(p, loc);
    let zr = || Expr::Reg(z.clone());
    let assign = |reg: &str, val: Expr| Cmd::Assign { reg: reg.to_string(), val };
    let body = p.threads[&tid].map(&mut |c| {
        if static_loc(&c) != Some(loc) {
            return c;
        }
        match c {
            Cmd::Read { reg, .. } | Cmd::AsmRead { reg, .. } => assign(&reg, zr()),
            Cmd::Write { val, .. } | Cmd::AsmWrite { val, .. } | Cmd::AsmNtWrite { val, .. } => assign(&z, val),
            Cmd::Rmw { reg, expected, new, .. } | Cmd::AsmRmw { reg, expected, new, .. } => {
                let (pe, pn, pt) = (format!("{z}_e"), format!("{z}_n"), format!("{z}_t"));
                let r = |s: &str| Expr::Reg(s.to_string());
                let differs = Expr::Plus(Box::new(Expr::Sub(Box::new(zr()), Box::new(r(&pe)))), Box::new(Expr::Sub(Box::new(r(&pe)), Box::new(zr()))));
                Cmd::seq([
                    assign(&pe, expected),
                    assign(&pn, new),
                    assign(&reg, zr()),
                    assign(&pt, Expr::Num(1)),
                    Cmd::If(differs, Box::new(assign(&pt, Expr::Num(0)))),
                    Cmd::If(r(&pt), Box::new(assign(&z, r(&pn)))),
                ])
            }
            other => other,
        }
    });
    let mut out = p.clone();
    out.threads.insert(tid, body.canonical());
    Ok(out)
}

/// Locations read and modified by one thread, split by access style.
#[derive(Default)]
struct Footprint {
    plain_reads: BTreeSet<Loc>,
    asm_reads: BTreeSet<Loc>,
    plain_writes: BTreeSet<Loc>,
    asm_writes: BTreeSet<Loc>,
    dynamic: bool,
}

fn footprint(c: &Cmd) -> Footprint {
    let mut f = Footprint::default();
    c.walk(&mut |c| {
        let Some(addr) = c.address() else { return };
        let Some(l) = addr.constant() else {
            if !matches!(c, Cmd::Rmw { .. } | Cmd::AsmRmw { .. }) {
                f.dynamic = true;
            }
            return;
        };
        match c {
            Cmd::Read { .. } => f.plain_reads.insert(l),
            Cmd::AsmRead { .. } => f.asm_reads.insert(l),
            Cmd::Write { .. } => f.plain_writes.insert(l),
            Cmd::AsmWrite { .. } | Cmd::AsmNtWrite { .. } => f.asm_writes.insert(l),
            _ => false,
        };
    });
    f
}

/// No interaction through assembly: plain reads of either thread avoid the
/// other's assembly writes, and assembly reads avoid all of the other's writes.
/// RMWs are ignored. Dynamic addresses fail the check.
pub fn nitia_check(p: &Program, t1: Tid, t2: Tid) -> Result<(), TransformError> {
    let (f1, f2) = (footprint(thread(p, t1)?), footprint(thread(p, t2)?));
    if f1.dynamic || f2.dynamic {
        return Err(TransformError::Nitia("an address is not statically known".into()));
    }
    for (a, b, ta, tb) in [(&f1, &f2, t1, t2), (&f2, &f1, t2, t1)] {
        if let Some(l) = a.plain_reads.intersection(&b.asm_writes).next() {
            return Err(TransformError::Nitia(format!("thread {ta} reads @{l}, which thread {tb} writes with assembly")));
        }
        let all_writes: BTreeSet<Loc> = b.asm_writes.union(&b.plain_writes).copied().collect();
        if let Some(l) = a.asm_reads.intersection(&all_writes).next() {
            return Err(TransformError::Nitia(format!("thread {ta} reads @{l} with assembly, which thread {tb} writes")));
        }
    }
    Ok(())
}

/// Merges thread `t2` into `t1`.
pub fn sequentialize(p: &Program, kind: SeqKind, t1: Tid, t2: Tid, interleaving: &[bool]) -> Result<Program, TransformError> {
    if t1 == t2 {
        return Err(TransformError::Spec("cannot merge a thread with itself".into()));
    }
    let (a, b) = (thread(p, t1)?.block(), thread(p, t2)?.block());
    if kind == SeqKind::Nitia {
        nitia_check(p, t1, t2)?;
    }
    let merged: Vec<Cmd> = match kind {
        SeqKind::Fence => a.into_iter().chain([Cmd::Fence(Mode::Sc)]).chain(b).collect(),
        SeqKind::Nitia | SeqKind::Plain => {
            let (mut ia, mut ib) = (a.into_iter(), b.into_iter());
            let mut out = Vec::new();
            for first in interleaving {
                let next = if *first { ia.next() } else { ib.next() };
                out.extend(next);
            }
            out.extend(ia);
            out.extend(ib);
            out
        }
    };
    let mut out = p.clone();
    out.threads.remove(&t2);
    out.threads.insert(t1, Cmd::seq(merged));
    Ok(out)
}

pub fn apply(p: &Program, k: &TransformKind) -> Result<Program, TransformError> {
    match k {
        TransformKind::Strengthen { site, mode } => strengthen(p, site, *mode),
        TransformKind::Deorder { tid } => deorder(p, *tid),
        TransformKind::Merge { site } => merge(p, site),
        TransformKind::PromoteRegister { loc, tid } => promote_register(p, *loc, *tid),
        TransformKind::Sequentialize { kind, t1, t2, interleaving } => sequentialize(p, *kind, *t1, *t2, interleaving),
    }
}

/// Parses `strengthen:T/P:MODE`, `deorder:T`, `merge:T/P`, `promote:LOC:T`,
/// `seq-nitia:T1,T2[:BITS]`, `seq-fence:T1,T2` or `seq-plain:T1,T2[:BITS]`.
/// Paths are dot-separated indices; BITS is a string of `1`/`2` thread picks.
pub fn parse_transform(spec: &str, p: &Program) -> Result<TransformKind, TransformError> {
    let bad = || TransformError::Spec(spec.to_string());
    let parts: Vec<&str> = spec.split(':').collect();
    let tid = |s: &str| s.trim().parse::<Tid>().map_err(|_| bad());
    let site = |s: &str| -> Result<Site, TransformError> {
        let (t, path) = s.split_once('/').ok_or_else(bad)?;
        let path = path.split('.').map(|i| i.parse::<usize>().map_err(|_| bad())).collect::<Result<Vec<_>, _>>()?;
        Ok(Site { tid: tid(t)?, path })
    };
    let pair = |s: &str| -> Result<(Tid, Tid), TransformError> {
        let (a, b) = s.split_once(',').ok_or_else(bad)?;
        Ok((tid(a)?, tid(b)?))
    };
    let bits = |s: Option<&&str>| -> Result<Vec<bool>, TransformError> {
        s.map(|s| s.chars().map(|c| match c {
            '1' => Ok(true),
            '2' => Ok(false),
            _ => Err(bad()),
        }).collect())
        .unwrap_or(Ok(Vec::new()))
    };
    match parts.as_slice() {
        ["strengthen", s, m] => Ok(TransformKind::Strengthen { site: site(s)?, mode: m.parse().map_err(|_| bad())? }),
        ["deorder", t] => Ok(TransformKind::Deorder { tid: tid(t)? }),
        ["merge", s] => Ok(TransformKind::Merge { site: site(s)? }),
        ["promote", l, t] => {
            let loc = p.loc_by_name(l).or_else(|| l.strip_prefix('@').and_then(|n| n.parse().ok())).ok_or_else(bad)?;
            Ok(TransformKind::PromoteRegister { loc, tid: tid(t)? })
        }
        [k @ ("seq-nitia" | "seq-fence" | "seq-plain"), ts, rest @ ..] if rest.len() <= 1 => {
            let kind = match *k {
                "seq-nitia" => SeqKind::Nitia,
                "seq-fence" => SeqKind::Fence,
                _ => SeqKind::Plain,
            };
            let (t1, t2) = pair(ts)?;
            Ok(TransformKind::Sequentialize { kind, t1, t2, interleaving: bits(rest.first())? })
        }
        _ => Err(bad()),
    }
}

/// Restricts outcomes to what the original program can observe: its own
/// registers, and memory other than a promoted location.
fn observable(b: BehaviorSet, regs: &BTreeSet<String>, hidden: Option<Loc>) -> BehaviorSet {
    match b {
        BehaviorSet::Ub => BehaviorSet::Ub,
        BehaviorSet::Outcomes(os) => BehaviorSet::Outcomes(
            os.into_iter()
                .map(|o| Outcome {
                    memory: o.memory.into_iter().filter(|(l, _)| Some(*l) != hidden).collect(),
                    registers: o.registers.into_iter().filter(|(r, _)| regs.contains(r)).collect::<BTreeMap<_, _>>(),
                })
                .collect(),
        ),
    }
}

/// Behaviors of the transformed program must be behaviors of the original.
pub fn check_transform_sound(p: &Program, k: &TransformKind, cfg: &Config) -> Result<InclusionReport, TransformError> {
    let q = apply(p, k)?;
    check_inclusion(p, &q, k, cfg)
}

/// Inclusion check for an already transformed program `q` of `p`.
pub fn check_inclusion(p: &Program, q: &Program, k: &TransformKind, cfg: &Config) -> Result<InclusionReport, TransformError> {
    let hidden = match k {
        TransformKind::PromoteRegister { loc, .. } => Some(*loc),
        _ => None,
    };
    let regs = p.registers();
    let src = models::behaviors(p, ModelId::Rc11Ext, cfg)?;
    let tgt = models::behaviors(q, ModelId::Rc11Ext, cfg)?;
    let a = observable(src.behaviors, &regs, hidden);
    let b = observable(tgt.behaviors, &regs, hidden);
    Ok(InclusionReport {
        holds: b.included_in(&a),
        extra: extra_outcomes(&a, &b),
        source_ub: a.is_ub(),
        target_ub: b.is_ub(),
        inconclusive: src.overflow || tgt.overflow,
        bound: cfg.bound,
        source_values: src.values,
        target_values: tgt.values,
    })
}

fn sites_of(c: &Cmd, prefix: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, Cmd)>) {
    for (i, c) in c.block().into_iter().enumerate() {
        prefix.push(i);
        if let Cmd::If(_, b) | Cmd::While(_, b) = &c {
            sites_of(b, prefix, out);
        }
        out.push((prefix.clone(), c));
        prefix.pop();
    }
}

/// Every command of `p` with its site.
pub fn sites(p: &Program) -> Vec<(Site, Cmd)> {
    let mut out = Vec::new();
    for (tid, c) in &p.threads {
        let mut v = Vec::new();
        sites_of(c, &mut Vec::new(), &mut v);
        out.extend(v.into_iter().map(|(path, c)| (Site { tid: *tid, path }, c)));
    }
    out
}

/// All single-site strengthenings of plain commands to a strictly stronger legal mode.
pub fn strengthenings(p: &Program) -> Vec<TransformKind> {
    let mut out = Vec::new();
    for (site, c) in sites(p) {
        if let (Some(k), Some(m)) = (c.access_kind(), c.mode()) {
            for &m2 in k.legal_modes() {
                if m2 != m && m.leq(m2) {
                    out.push(TransformKind::Strengthen { site: site.clone(), mode: m2 });
                }
            }
        }
    }
    out
}

/// All applicable merges.
pub fn merges(p: &Program) -> Vec<TransformKind> {
    sites(p)
        .into_iter()
        .filter(|(s, _)| merge(p, s).is_ok())
        .map(|(site, _)| TransformKind::Merge { site })
        .collect()
}

/// All applicable deorderings.
pub fn deorderings(p: &Program) -> Vec<TransformKind> {
    p.threads.keys().filter(|t| deorder(p, **t).is_ok()).map(|tid| TransformKind::Deorder { tid: *tid }).collect()
}

/// All applicable register promotions.
pub fn promotions(p: &Program) -> Vec<TransformKind> {
    let mut out = Vec::new();
    for tid in p.threads.keys() {
        let locs: BTreeSet<Loc> = sites(p).iter().filter(|(s, _)| s.tid == *tid).filter_map(|(_, c)| static_loc(c)).collect();
        for loc in locs {
            if promote_register(p, loc, *tid).is_ok() {
                out.push(TransformKind::PromoteRegister { loc, tid: *tid });
            }
        }
    }
    out
}

/// Ordered thread pairs for which a sequentialization of `kind` applies.
pub fn sequentializations(p: &Program, kind: SeqKind) -> Vec<TransformKind> {
    let tids: Vec<Tid> = p.threads.keys().copied().collect();
    let mut out = Vec::new();
    for &t1 in &tids {
        for &t2 in &tids {
            if t1 != t2 && (kind != SeqKind::Nitia || nitia_check(p, t1, t2).is_ok()) {
                out.push(TransformKind::Sequentialize { kind, t1, t2, interleaving: Vec::new() });
            }
        }
    }
    out
}
