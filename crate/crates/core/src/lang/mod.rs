//! Program syntax: access modes, expressions, commands, litmus tests.

mod parse;
mod print;

pub use print::cmd_to_string;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use parse::{parse_litmus, parse_program, ParseError};

pub type Val = u64;
pub type Loc = u64;
pub type Tid = u32;

/// Access mode carried by commands and event labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Na,
    Rlx,
    Rel,
    Acq,
    AcqRel,
    Sc,
    Nt,
    Sf,
    Tso,
}

use Mode::*;

impl Mode {
    pub const ALL: [Mode; 9] = [Na, Rlx, Rel, Acq, AcqRel, Sc, Nt, Sf, Tso];

    pub const READ_MODES: [Mode; 4] = [Na, Rlx, Acq, Sc];
    pub const WRITE_MODES: [Mode; 4] = [Na, Rlx, Rel, Sc];
    pub const FENCE_MODES: [Mode; 4] = [Acq, Rel, AcqRel, Sc];
    pub const RMW_MODES: [Mode; 5] = [Rlx, Acq, Rel, AcqRel, Sc];

    fn covers(self) -> &'static [Mode] {
        // Hasse edges m -> m' with m' directly above m.
        match self {
            Na | Nt => &[Rlx],
            Rlx => &[Rel, Acq],
            Rel | Acq => &[AcqRel],
            AcqRel => &[Sf, Tso],
            Sf => &[Sc],
            Sc | Tso => &[],
        }
    }

    /// `self ⊑ other` in the mode order.
    pub fn leq(self, other: Mode) -> bool {
        self == other || self.covers().iter().any(|m| m.leq(other))
    }

    pub fn name(self) -> &'static str {
        match self {
            Na => "na",
            Rlx => "rlx",
            Rel => "rel",
            Acq => "acq",
            AcqRel => "acqrel",
            Sc => "sc",
            Nt => "nt",
            Sf => "sf",
            Tso => "tso",
        }
    }
}

pub fn mode_leq(m1: Mode, m2: Mode) -> bool {
    m1.leq(m2)
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Mode::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| format!("unknown access mode `{s}`"))
    }
}

/// Kinds of memory command, for mode-legality checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AccessKind {
    Read,
    Write,
    Rmw,
    Fence,
}

impl AccessKind {
    pub fn legal_modes(self) -> &'static [Mode] {
        match self {
            AccessKind::Read => &Mode::READ_MODES,
            AccessKind::Write => &Mode::WRITE_MODES,
            AccessKind::Rmw => &Mode::RMW_MODES,
            AccessKind::Fence => &Mode::FENCE_MODES,
        }
    }

    pub fn is_legal(self, m: Mode) -> bool {
        self.legal_modes().contains(&m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expr {
    Num(Val),
    Reg(String),
    Loc(Loc),
    Plus(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Times(Box<Expr>, Box<Expr>),
}

/// Register file of one thread; absent registers read as 0.
pub type RegState = BTreeMap<String, Val>;

impl Expr {
    pub fn reg(r: &str) -> Expr {
        Expr::Reg(r.to_string())
    }

    /// Value of the expression; subtraction saturates at 0, other operators wrap.
    pub fn eval(&self, regs: &RegState) -> Val {
        match self {
            Expr::Num(n) => *n,
            Expr::Loc(l) => *l,
            Expr::Reg(r) => regs.get(r).copied().unwrap_or(0),
            Expr::Plus(a, b) => a.eval(regs).wrapping_add(b.eval(regs)),
            Expr::Sub(a, b) => a.eval(regs).saturating_sub(b.eval(regs)),
            Expr::Times(a, b) => a.eval(regs).wrapping_mul(b.eval(regs)),
        }
    }

    /// Value when the expression mentions no register.
    pub fn constant(&self) -> Option<Val> {
        if self.registers().is_empty() {
            Some(self.eval(&RegState::new()))
        } else {
            None
        }
    }

    pub fn registers(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect(&mut |e| {
            if let Expr::Reg(r) = e {
                out.insert(r.clone());
            }
        });
        out
    }

    fn collect(&self, f: &mut impl FnMut(&Expr)) {
        f(self);
        match self {
            Expr::Plus(a, b) | Expr::Sub(a, b) | Expr::Times(a, b) => {
                a.collect(f);
                b.collect(f);
            }
            _ => {}
        }
    }

    fn numbers(&self, out: &mut BTreeSet<Val>) {
        self.collect(&mut |e| {
            if let Expr::Num(n) = e {
                out.insert(*n);
            }
        });
    }

    fn locations(&self, out: &mut BTreeSet<Loc>) {
        self.collect(&mut |e| {
            if let Expr::Loc(l) = e {
                out.insert(*l);
            }
        });
    }
}

pub fn eval_expr(e: &Expr, regs: &RegState) -> Val {
    e.eval(regs)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cmd {
    Read { md: Mode, reg: String, addr: Expr },
    Write { md: Mode, addr: Expr, val: Expr },
    /// `reg := RMW[md] [addr] expected new`
    Rmw { md: Mode, reg: String, addr: Expr, expected: Expr, new: Expr },
    Fence(Mode),
    If(Expr, Box<Cmd>),
    While(Expr, Box<Cmd>),
    Seq(Box<Cmd>, Box<Cmd>),
    Skip,
    /// Register move; emits no event.
    Assign { reg: String, val: Expr },
    AsmRead { reg: String, addr: Expr },
    AsmWrite { addr: Expr, val: Expr },
    AsmRmw { reg: String, addr: Expr, expected: Expr, new: Expr },
    AsmMFence,
    AsmSFence,
    AsmNtWrite { addr: Expr, val: Expr },
}

impl Cmd {
    /// Right-nested sequence of `cmds`; the empty block is `skip`.
    pub fn seq(cmds: impl IntoIterator<Item = Cmd>) -> Cmd {
        let mut v: Vec<Cmd> = cmds.into_iter().collect();
        let Some(mut acc) = v.pop() else { return Cmd::Skip };
        while let Some(c) = v.pop() {
            acc = Cmd::Seq(Box::new(c), Box::new(acc));
        }
        acc
    }

    /// The commands of the sequence spine, left to right.
    pub fn block(&self) -> Vec<Cmd> {
        let mut out = Vec::new();
        fn go(c: &Cmd, out: &mut Vec<Cmd>) {
            match c {
                Cmd::Seq(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                other => out.push(other.clone()),
            }
        }
        go(self, &mut out);
        out
    }

    /// Re-associates every sequence to the right, the form the parser produces.
    pub fn canonical(&self) -> Cmd {
        match self {
            Cmd::Seq(..) => Cmd::seq(self.block().iter().map(Cmd::canonical)),
            Cmd::If(e, s) => Cmd::If(e.clone(), Box::new(s.canonical())),
            Cmd::While(e, s) => Cmd::While(e.clone(), Box::new(s.canonical())),
            other => other.clone(),
        }
    }

    pub fn is_asm(&self) -> bool {
        matches!(
            self,
            Cmd::AsmRead { .. } | Cmd::AsmWrite { .. } | Cmd::AsmRmw { .. } | Cmd::AsmMFence | Cmd::AsmSFence | Cmd::AsmNtWrite { .. }
        )
    }

    /// Plain (non-assembly) memory command.
    pub fn is_plain_access(&self) -> bool {
        matches!(self, Cmd::Read { .. } | Cmd::Write { .. } | Cmd::Rmw { .. } | Cmd::Fence(_))
    }

    pub fn access_kind(&self) -> Option<AccessKind> {
        match self {
            Cmd::Read { .. } | Cmd::AsmRead { .. } => Some(AccessKind::Read),
            Cmd::Write { .. } | Cmd::AsmWrite { .. } | Cmd::AsmNtWrite { .. } => Some(AccessKind::Write),
            Cmd::Rmw { .. } | Cmd::AsmRmw { .. } => Some(AccessKind::Rmw),
            Cmd::Fence(_) | Cmd::AsmMFence | Cmd::AsmSFence => Some(AccessKind::Fence),
            _ => None,
        }
    }

    /// Surface mode of a plain memory command.
    pub fn mode(&self) -> Option<Mode> {
        match self {
            Cmd::Read { md, .. } | Cmd::Write { md, .. } | Cmd::Rmw { md, .. } | Cmd::Fence(md) => Some(*md),
            _ => None,
        }
    }

    pub fn with_mode(&self, m: Mode) -> Option<Cmd> {
        let mut c = self.clone();
        match &mut c {
            Cmd::Read { md, .. } | Cmd::Write { md, .. } | Cmd::Rmw { md, .. } | Cmd::Fence(md) => *md = m,
            _ => return None,
        }
        Some(c)
    }

    pub fn address(&self) -> Option<&Expr> {
        match self {
            Cmd::Read { addr, .. }
            | Cmd::Write { addr, .. }
            | Cmd::Rmw { addr, .. }
            | Cmd::AsmRead { addr, .. }
            | Cmd::AsmWrite { addr, .. }
            | Cmd::AsmRmw { addr, .. }
            | Cmd::AsmNtWrite { addr, .. } => Some(addr),
            _ => None,
        }
    }

    /// Register written by this command (not descending into bodies).
    pub fn target_register(&self) -> Option<&str> {
        match self {
            Cmd::Read { reg, .. } | Cmd::Rmw { reg, .. } | Cmd::Assign { reg, .. } | Cmd::AsmRead { reg, .. } | Cmd::AsmRmw { reg, .. } => {
                Some(reg)
            }
            _ => None,
        }
    }

    /// Every expression directly inside this command (not descending into bodies).
    pub fn expressions(&self) -> Vec<&Expr> {
        match self {
            Cmd::Read { addr, .. } | Cmd::AsmRead { addr, .. } => vec![addr],
            Cmd::Write { addr, val, .. } | Cmd::AsmWrite { addr, val } | Cmd::AsmNtWrite { addr, val } => vec![addr, val],
            Cmd::Rmw { addr, expected, new, .. } | Cmd::AsmRmw { addr, expected, new, .. } => vec![addr, expected, new],
            Cmd::If(e, _) | Cmd::While(e, _) => vec![e],
            Cmd::Assign { val, .. } => vec![val],
            _ => vec![],
        }
    }

    /// Pre-order walk over all commands, including sequence nodes.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Cmd)) {
        f(self);
        match self {
            Cmd::Seq(a, b) => {
                a.walk(f);
                b.walk(f);
            }
            Cmd::If(_, s) | Cmd::While(_, s) => s.walk(f),
            _ => {}
        }
    }

    pub fn registers(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |c| {
            if let Some(r) = c.target_register() {
                out.insert(r.to_string());
            }
            for e in c.expressions() {
                out.extend(e.registers());
            }
        });
        out
    }

    pub fn has_loops(&self) -> bool {
        let mut found = false;
        self.walk(&mut |c| found |= matches!(c, Cmd::While(..)));
        found
    }

    /// Rewrites every command bottom-up with `f`.
    pub fn map(&self, f: &mut impl FnMut(Cmd) -> Cmd) -> Cmd {
        let c = match self {
            Cmd::Seq(a, b) => Cmd::Seq(Box::new(a.map(f)), Box::new(b.map(f))),
            Cmd::If(e, s) => Cmd::If(e.clone(), Box::new(s.map(f))),
            Cmd::While(e, s) => Cmd::While(e.clone(), Box::new(s.map(f))),
            other => other.clone(),
        };
        f(c)
    }
}

/// Model identifiers used by expectations and reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ModelId {
    #[serde(rename = "sc")]
    Sc,
    #[serde(rename = "rc11")]
    Rc11,
    #[serde(rename = "ex86")]
    Ex86,
    #[serde(rename = "rc11ext")]
    Rc11Ext,
}

impl ModelId {
    pub const ALL: [ModelId; 4] = [ModelId::Sc, ModelId::Rc11, ModelId::Ex86, ModelId::Rc11Ext];

    pub fn name(self) -> &'static str {
        match self {
            ModelId::Sc => "sc",
            ModelId::Rc11 => "rc11",
            ModelId::Ex86 => "ex86",
            ModelId::Rc11Ext => "rc11ext",
        }
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        ModelId::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| format!("unknown model `{s}`"))
    }
}

/// How a program's memory commands split between plain and assembly accesses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProgramClass {
    PureRc11,
    PureAsm,
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Program {
    pub threads: BTreeMap<Tid, Cmd>,
    /// Location names; location `i` is named `locations[i]`.
    pub locations: Vec<String>,
}

impl Program {
    pub fn new(threads: BTreeMap<Tid, Cmd>, locations: Vec<String>) -> Program {
        Program { threads, locations }
    }

    pub fn loc_name(&self, l: Loc) -> String {
        self.locations.get(l as usize).cloned().unwrap_or_else(|| format!("@{l}"))
    }

    pub fn loc_by_name(&self, name: &str) -> Option<Loc> {
        self.locations.iter().position(|n| n == name).map(|i| i as Loc)
    }

    pub fn commands(&self) -> Vec<&Cmd> {
        let mut out = Vec::new();
        for c in self.threads.values() {
            c.walk(&mut |c| out.push(c));
        }
        out
    }

    pub fn is_pure_rc11(&self) -> bool {
        self.commands().iter().all(|c| !c.is_asm())
    }

    pub fn is_pure_asm(&self) -> bool {
        self.commands().iter().all(|c| !c.is_plain_access())
    }

    pub fn classify(&self) -> ProgramClass {
        if self.is_pure_rc11() {
            ProgramClass::PureRc11
        } else if self.is_pure_asm() {
            ProgramClass::PureAsm
        } else {
            ProgramClass::Mixed
        }
    }

    pub fn registers(&self) -> BTreeSet<String> {
        self.threads.values().flat_map(|c| c.registers()).collect()
    }

    /// Locations denoted by register-free address expressions.
    pub fn static_locations(&self) -> BTreeSet<Loc> {
        let mut out = BTreeSet::new();
        for c in self.commands() {
            if let Some(l) = c.address().and_then(Expr::constant) {
                out.insert(l);
            }
            for e in c.expressions() {
                e.locations(&mut out);
            }
        }
        out
    }

    /// Numeric literals, plus locations used as values.
    pub fn literals(&self) -> BTreeSet<Val> {
        let mut out = BTreeSet::new();
        for c in self.commands() {
            for e in c.expressions() {
                e.numbers(&mut out);
            }
            let addr = c.address();
            for e in c.expressions() {
                if Some(e) != addr {
                    e.locations(&mut out);
                }
            }
        }
        out
    }

    pub fn has_rmw(&self) -> bool {
        self.commands().iter().any(|c| c.access_kind() == Some(AccessKind::Rmw))
    }

    pub fn has_loops(&self) -> bool {
        self.threads.values().any(Cmd::has_loops)
    }

    pub fn has_na_access(&self) -> bool {
        self.commands().iter().any(|c| c.mode() == Some(Mode::Na))
    }

    /// Checks per-command mode legality and that no register is shared between threads.
    pub fn validate(&self) -> Result<(), String> {
        if self.threads.is_empty() {
            return Err("program has no threads".into());
        }
        for (tid, c) in &self.threads {
            let mut err = None;
            c.walk(&mut |c| {
                if let (Some(k), Some(m)) = (c.access_kind(), c.mode()) {
                    if !k.is_legal(m) && err.is_none() {
                        err = Some(format!("thread {tid}: mode `{m}` is not legal for a {k:?} command"));
                    }
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
        }
        let mut owner: BTreeMap<String, Tid> = BTreeMap::new();
        for (tid, c) in &self.threads {
            for r in c.registers() {
                if let Some(t) = owner.insert(r.clone(), *tid) {
                    if t != *tid {
                        return Err(format!("register `{r}` is used by threads {t} and {tid}"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Same program with every thread body in canonical sequence form.
    pub fn canonical(&self) -> Program {
        Program { threads: self.threads.iter().map(|(t, c)| (*t, c.canonical())).collect(), locations: self.locations.clone() }
    }
}

pub fn classify_program(p: &Program) -> ProgramClass {
    p.classify()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Atom {
    Reg(String, Val),
    Loc(Loc, Val),
}

/// Outcome predicate: `UB`, or a conjunction of register/location equalities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Predicate {
    Ub,
    Conj(Vec<Atom>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Expectation {
    pub model: ModelId,
    pub allowed: bool,
    pub pred: Predicate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LitmusTest {
    pub name: String,
    pub program: Program,
    pub expectations: Vec<Expectation>,
    pub values: Option<Vec<Val>>,
}

impl LitmusTest {
    pub fn new(name: &str, program: Program) -> Self {
        LitmusTest { name: name.into(), program, expectations: Vec::new(), values: None }
    }
}
