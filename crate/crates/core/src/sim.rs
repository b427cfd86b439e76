//! Sequentially consistent interpreter that runs a program directly over every
//! schedule. It shares no code with graph enumeration and serves as an oracle
//! for the SC behavior set.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::lang::{Cmd, Loc, Program, RegState, Val};
use crate::models::Outcome;

#[derive(Clone, PartialEq, Eq, Hash)]
struct State {
    /// Remaining commands of each thread, innermost first at the end.
    conts: Vec<Vec<Cmd>>,
    regs: RegState,
    memory: BTreeMap<Loc, Val>,
}

/// SC outcomes of `p`, and whether some schedule ran past `bound` steps.
pub fn sc_outcomes(p: &Program, bound: usize) -> (BTreeSet<Outcome>, bool) {
    let regs: RegState = p.registers().into_iter().map(|r| (r, 0)).collect();
    let conts = p.threads.values().map(|c| vec![c.clone()]).collect();
    let mut todo = vec![(State { conts, regs, memory: BTreeMap::new() }, 0usize)];
    let mut seen = HashSet::new();
    let mut out = BTreeSet::new();
    let mut overflow = false;
    while let Some((mut s, depth)) = todo.pop() {
        for t in 0..s.conts.len() {
            settle(&mut s.conts[t], &mut s.regs);
        }
        if !seen.insert(s.clone()) {
            continue;
        }
        if s.conts.iter().all(|c| c.is_empty()) {
            out.insert(Outcome { memory: s.memory.clone(), registers: s.regs.clone() });
            continue;
        }
        if depth >= bound {
            overflow = true;
            continue;
        }
        for t in 0..s.conts.len() {
            if let Some(c) = s.conts[t].last() {
                let mut next = s.clone();
                next.conts[t].pop();
                exec(c, &mut next);
                todo.push((next, depth + 1));
            }
        }
    }
    (out, overflow)
}

/// Runs control flow and register moves until the next command is a memory access or fence.
fn settle(k: &mut Vec<Cmd>, regs: &mut RegState) {
    while let Some(c) = k.last() {
        match c {
            Cmd::Skip => {
                k.pop();
            }
            Cmd::Seq(..) => {
                let Some(Cmd::Seq(a, b)) = k.pop() else { unreachable!() };
                k.push(*b);
                k.push(*a);
            }
            Cmd::If(e, b) => {
                let taken = e.eval(regs) != 0;
                let b = (**b).clone();
                k.pop();
                if taken {
                    k.push(b);
                }
            }
            Cmd::Assign { .. } => {
                let Some(Cmd::Assign { reg, val }) = k.pop() else { unreachable!() };
                let v = val.eval(regs);
                regs.insert(reg, v);
            }
            Cmd::While(e, b) => {
                if e.eval(regs) != 0 {
                    let b = (**b).clone();
                    k.push(b);
                } else {
                    k.pop();
                }
            }
            _ => return,
        }
    }
}

fn exec(c: &Cmd, s: &mut State) {
    let addr = |e: &crate::lang::Expr, s: &State| e.eval(&s.regs) as Loc;
    match c {
        Cmd::Read { reg, addr: a, .. } | Cmd::AsmRead { reg, addr: a } => {
            let v = s.memory.get(&addr(a, s)).copied().unwrap_or(0);
            s.regs.insert(reg.clone(), v);
        }
        Cmd::Write { addr: a, val, .. } | Cmd::AsmWrite { addr: a, val } | Cmd::AsmNtWrite { addr: a, val } => {
            let (l, v) = (addr(a, s), val.eval(&s.regs));
            s.memory.insert(l, v);
        }
        Cmd::Rmw { reg, addr: a, expected, new, .. } | Cmd::AsmRmw { reg, addr: a, expected, new } => {
            let l = addr(a, s);
            let v = s.memory.get(&l).copied().unwrap_or(0);
            let (exp, new) = (expected.eval(&s.regs), new.eval(&s.regs));
            s.regs.insert(reg.clone(), v);
            if v == exp {
                s.memory.insert(l, new);
            }
        }
        Cmd::Fence(_) | Cmd::AsmMFence | Cmd::AsmSFence => {}
        Cmd::Skip | Cmd::Assign { .. } | Cmd::Seq(..) | Cmd::If(..) | Cmd::While(..) => unreachable!("settled"),
    }
}
