//! Compilation of mixed programs to pure assembly, and the behavior-inclusion
//! check between a program and its compiled form.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::lang::{Cmd, Mode, ModelId, Program};
use crate::models::{self, BehaviorSet, Config, ModelError, Outcome};
use crate::opsem::{Label, ValueDomain};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// Plain stores compile to `mov`; sc stores add a trailing `mfence`.
    Standard,
    /// Relaxed stores compile to `movnt`; release stores and fences use `sfence`.
    Alternative,
}

impl Scheme {
    pub const ALL: [Scheme; 2] = [Scheme::Standard, Scheme::Alternative];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Standard => "standard",
            Scheme::Alternative => "alternative",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "standard" | "std" => Ok(Scheme::Standard),
            "alternative" | "alt" => Ok(Scheme::Alternative),
            _ => Err(format!("unknown compilation scheme `{s}`")),
        }
    }
}

/// Compiles one command. Control flow is kept; memory commands are rewritten.
pub fn compile_cmd(c: &Cmd, s: Scheme) -> Cmd {
    use Scheme::*;
    match c {
        Cmd::Write { md, addr, val } => {
            let mov = Cmd::AsmWrite { addr: addr.clone(), val: val.clone() };
            match (s, md) {
                (Standard, Mode::Sc) => Cmd::seq([mov, Cmd::AsmMFence]),
                (Standard, _) | (Alternative, Mode::Na) => mov,
                (Alternative, Mode::Rlx) => Cmd::AsmNtWrite { addr: addr.clone(), val: val.clone() },
                (Alternative, Mode::Rel) => Cmd::seq([Cmd::AsmSFence, mov]),
                (Alternative, _) => Cmd::seq([Cmd::AsmSFence, mov, Cmd::AsmMFence]),
            }
        }
        Cmd::Read { reg, addr, .. } => Cmd::AsmRead { reg: reg.clone(), addr: addr.clone() },
        Cmd::Rmw { reg, addr, expected, new, .. } => {
            Cmd::AsmRmw { reg: reg.clone(), addr: addr.clone(), expected: expected.clone(), new: new.clone() }
        }
        Cmd::Fence(md) => match (s, md) {
            (_, Mode::Sc) => Cmd::AsmMFence,
            (Alternative, Mode::Rel | Mode::AcqRel) => Cmd::AsmSFence,
            _ => Cmd::Skip,
        },
        Cmd::If(e, b) => Cmd::If(e.clone(), Box::new(compile_cmd(b, s))),
        Cmd::While(e, b) => Cmd::While(e.clone(), Box::new(compile_cmd(b, s))),
        Cmd::Seq(a, b) => Cmd::Seq(Box::new(compile_cmd(a, s)), Box::new(compile_cmd(b, s))),
        other => other.clone(),
    }
}

pub fn compile(p: &Program, s: Scheme) -> Program {
    Program { threads: p.threads.iter().map(|(t, c)| (*t, compile_cmd(c, s))).collect(), locations: p.locations.clone() }
}

/// Target labels emitted for one source label; compilation is determined by the label alone.
pub fn compile_label(l: &Label, s: Scheme) -> Vec<Label> {
    let tso = |l: &Label| l.with_mode(Mode::Tso);
    let mf = Label::F { md: Mode::Sc };
    let sf = Label::F { md: Mode::Sf };
    match (*l, s) {
        (Label::W { md: Mode::Tso, .. }, _) | (Label::W { md: Mode::Nt, .. }, _) => vec![*l],
        (Label::W { md: Mode::Sc, .. }, Scheme::Standard) => vec![tso(l), mf],
        (Label::W { .. }, Scheme::Standard) => vec![tso(l)],
        (Label::W { md: Mode::Na, .. }, Scheme::Alternative) => vec![tso(l)],
        (Label::W { md: Mode::Rlx, .. }, Scheme::Alternative) => vec![l.with_mode(Mode::Nt)],
        (Label::W { md: Mode::Rel, .. }, Scheme::Alternative) => vec![sf, tso(l)],
        (Label::W { .. }, Scheme::Alternative) => vec![sf, tso(l), mf],
        (Label::R { .. }, _) | (Label::Rmw { .. }, _) => vec![tso(l)],
        (Label::F { md: Mode::Sc }, _) => vec![mf],
        (Label::F { md: Mode::Sf }, _) => vec![sf],
        (Label::F { md: Mode::Rel | Mode::AcqRel }, Scheme::Alternative) => vec![sf],
        (Label::F { .. }, _) => vec![],
    }
}

/// Result of comparing a transformed (or compiled) program against its original.
#[derive(Clone, Debug, Serialize)]
pub struct InclusionReport {
    pub holds: bool,
    /// Target outcomes missing from the source.
    pub extra: Vec<Outcome>,
    pub source_ub: bool,
    pub target_ub: bool,
    /// Some enumeration hit the step bound, so the verdict is not conclusive.
    pub inconclusive: bool,
    pub bound: usize,
    pub source_values: ValueDomain,
    pub target_values: ValueDomain,
}

/// Outcomes of `b` not in `a`, treating UB in `a` as containing everything.
pub(crate) fn extra_outcomes(a: &BehaviorSet, b: &BehaviorSet) -> Vec<Outcome> {
    match (a, b) {
        (BehaviorSet::Ub, _) => Vec::new(),
        (BehaviorSet::Outcomes(_), BehaviorSet::Ub) => vec![],
        (BehaviorSet::Outcomes(a), BehaviorSet::Outcomes(b)) => b.difference(a).cloned().collect(),
    }
}

fn memory_only(b: BehaviorSet) -> BehaviorSet {
    match b {
        BehaviorSet::Ub => BehaviorSet::Ub,
        BehaviorSet::Outcomes(o) => {
            BehaviorSet::Outcomes(o.into_iter().map(|o| Outcome { memory: o.memory, registers: Default::default() }).collect::<BTreeSet<_>>())
        }
    }
}

/// Final memories of `compile(p, s)` under the x86 model must be final memories
/// of `p` under the mixed model, unless `p` has undefined behavior.
pub fn check_compilation(p: &Program, s: Scheme, cfg: &Config) -> Result<InclusionReport, ModelError> {
    let target = compile(p, s);
    let src = models::behaviors(p, ModelId::Rc11Ext, cfg)?;
    let tgt = models::behaviors(&target, ModelId::Ex86, cfg)?;
    let (a, b) = (memory_only(src.behaviors), memory_only(tgt.behaviors));
    let extra = extra_outcomes(&a, &b);
    Ok(InclusionReport {
        holds: b.included_in(&a),
        extra,
        source_ub: a.is_ub(),
        target_ub: b.is_ub(),
        inconclusive: src.overflow || tgt.overflow,
        bound: cfg.bound,
        source_values: src.values,
        target_values: tgt.values,
    })
}
