//! Strategies and properties shared by the property suites and the acceptance harness.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;
use proptest::test_runner::{Config as RunnerConfig, TestRunner};

use asmm::gen::{random_program, GenParams};
use asmm::lang::{parse_litmus, Cmd, Expr, Mode, ModelId, Program, ProgramClass};
use asmm::models::{self, check, value_domain, verify_witness, Config};
use asmm::opsem::{self, CandidateExecution, Label, SearchOrder};
use asmm::relalg::Relation;

pub fn relation(max: usize) -> impl Strategy<Value = Relation> {
    (1..=max).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * n).prop_map(move |bits| Relation::from_fn(n, |a, b| bits[a * n + b]))
    })
}

pub fn relations(k: usize) -> impl Strategy<Value = Vec<Relation>> {
    (1usize..=7).prop_flat_map(move |n| {
        prop::collection::vec(prop::collection::vec(any::<bool>(), n * n), k)
            .prop_map(move |rs| rs.into_iter().map(|bits| Relation::from_fn(n, |a, b| bits[a * n + b])).collect())
    })
}

pub fn expr(regs: Vec<String>) -> BoxedStrategy<Expr> {
    let leaf = prop_oneof![
        (0u64..4).prop_map(Expr::Num),
        prop::sample::select(regs).prop_map(Expr::Reg),
        (0u64..3).prop_map(Expr::Loc),
    ];
    leaf.prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Plus(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::Times(Box::new(a), Box::new(b))),
        ]
    })
    .boxed()
}

pub fn cmd(tid: u32) -> impl Strategy<Value = Cmd> {
    let regs: Vec<String> = ["a", "b"].iter().map(|r| format!("r{tid}{r}")).collect();
    let e = expr(regs.clone());
    let reg = prop::sample::select(regs);
    let mode = |ms: &'static [Mode]| prop::sample::select(ms);
    let leaf = prop_oneof![
        (mode(&Mode::WRITE_MODES), e.clone(), e.clone()).prop_map(|(md, addr, val)| Cmd::Write { md, addr, val }),
        (mode(&Mode::READ_MODES), reg.clone(), e.clone()).prop_map(|(md, reg, addr)| Cmd::Read { md, reg, addr }),
        (mode(&Mode::RMW_MODES), reg.clone(), e.clone(), e.clone(), e.clone())
            .prop_map(|(md, reg, addr, expected, new)| Cmd::Rmw { md, reg, addr, expected, new }),
        mode(&Mode::FENCE_MODES).prop_map(Cmd::Fence),
        (reg.clone(), e.clone()).prop_map(|(reg, val)| Cmd::Assign { reg, val }),
        (reg.clone(), e.clone()).prop_map(|(reg, addr)| Cmd::AsmRead { reg, addr }),
        (e.clone(), e.clone()).prop_map(|(addr, val)| Cmd::AsmWrite { addr, val }),
        (e.clone(), e.clone()).prop_map(|(addr, val)| Cmd::AsmNtWrite { addr, val }),
        (reg, e.clone(), e.clone(), e.clone()).prop_map(|(reg, addr, expected, new)| Cmd::AsmRmw { reg, addr, expected, new }),
        Just(Cmd::AsmMFence),
        Just(Cmd::AsmSFence),
        Just(Cmd::Skip),
    ];
    leaf.prop_recursive(3, 12, 3, move |inner| {
        prop_oneof![
            (e.clone(), inner.clone()).prop_map(|(c, b)| Cmd::If(c, Box::new(b))),
            (e.clone(), inner.clone()).prop_map(|(c, b)| Cmd::While(c, Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| Cmd::Seq(Box::new(a), Box::new(b))),
        ]
    })
}

pub fn program() -> impl Strategy<Value = Program> {
    (1u32..=3).prop_flat_map(|n| {
        (0..n).map(cmd).collect::<Vec<_>>().prop_map(|cs| {
            let threads: BTreeMap<u32, Cmd> = cs.into_iter().enumerate().map(|(t, c)| (t as u32, c)).collect();
            Program::new(threads, vec!["x".into(), "y".into(), "z".into()])
        })
    })
}

pub fn small_program() -> impl Strategy<Value = Program> {
    (any::<u64>(), prop::sample::select(vec![ProgramClass::PureRc11, ProgramClass::PureAsm, ProgramClass::Mixed]))
        .prop_map(|(seed, class)| random_program(seed, GenParams::small(class)))
}

type Check = Result<(), TestCaseError>;

pub fn composition_laws(rs: Vec<Relation>) -> Check {
    let (r, s, t) = (&rs[0], &rs[1], &rs[2]);
    prop_assert_eq!(r.compose(s).compose(t), r.compose(&s.compose(t)));
    prop_assert_eq!(r.compose(&s.union(t)), r.compose(s).union(&r.compose(t)));
    prop_assert_eq!(r.compose(s).inverse(), s.inverse().compose(&r.inverse()));
    prop_assert_eq!(r.inverse().inverse(), r.clone());
    let id = Relation::identity(r.carrier());
    prop_assert_eq!(&r.compose(&id), r);
    prop_assert_eq!(&id.compose(r), r);
    Ok(())
}

pub fn closure_laws(r: Relation) -> Check {
    let tc = r.transitive_closure();
    prop_assert!(r.difference(&tc).is_empty());
    prop_assert!(tc.compose(&tc).difference(&tc).is_empty());
    prop_assert_eq!(&tc.transitive_closure(), &tc);
    // Least: every pair of tc is reachable by iterating r.
    let mut reach = r.clone();
    for _ in 0..r.carrier() {
        reach = reach.union(&reach.compose(&r));
    }
    prop_assert_eq!(&reach, &tc);
    prop_assert_eq!(r.refl_trans_closure(), tc.union(&Relation::identity(r.carrier())));
    Ok(())
}

pub fn cycle_laws(r: Relation) -> Check {
    let acyclic = r.is_acyclic();
    prop_assert_eq!(acyclic, r.transitive_closure().is_irreflexive());
    match r.find_cycle() {
        None => prop_assert!(acyclic),
        Some(c) => {
            prop_assert!(!acyclic && !c.is_empty());
            for k in 0..c.len() {
                prop_assert!(r.contains(c[k], c[(k + 1) % c.len()]));
            }
        }
    }
    prop_assert_eq!(r.is_irreflexive(), r.find_reflexive().is_none());
    Ok(())
}

/// Exhaustive check over all mode triples.
pub fn mode_order_is_partial() -> Check {
    for a in Mode::ALL {
        prop_assert!(a.leq(a));
        for b in Mode::ALL {
            if a.leq(b) && b.leq(a) {
                prop_assert_eq!(a, b);
            }
            for c in Mode::ALL {
                if a.leq(b) && b.leq(c) {
                    prop_assert!(a.leq(c), "{} ⊑ {} ⊑ {}", a, b, c);
                }
            }
        }
    }
    Ok(())
}

pub fn round_trip(p: Program) -> Check {
    let text = p.to_string();
    let back = parse_litmus(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?.program;
    prop_assert_eq!(&back, &p.canonical(), "{}", text);
    prop_assert_eq!(back.to_string(), text);
    Ok(())
}

fn candidates(p: &Program) -> Vec<CandidateExecution> {
    models::all_candidates(p, &value_domain(p, &Config::default()), 10_000)
}

pub fn witnesses_are_genuine(p: Program) -> Check {
    for x in candidates(&p) {
        for m in ModelId::ALL {
            let Ok(v) = check(&x, m) else { continue };
            prop_assert_eq!(v.consistent, v.violated.is_empty());
            prop_assert_eq!(v.consistent, models::is_consistent(&x, m));
            if let Some(w) = &v.witness {
                prop_assert!(verify_witness(&x, m, v.violated[0], w), "{} {:?} {:?}", m, v.violated, w);
            }
        }
    }
    Ok(())
}

pub fn search_order_does_not_matter(p: Program) -> Check {
    let v = value_domain(&p, &Config::default());
    let key = |gs: opsem::GraphSet| {
        let mut g: Vec<_> = gs.graphs.into_iter().map(|c| (c.graph.to_string(), format!("{:?}", c.registers))).collect();
        g.sort();
        g.dedup();
        g
    };
    let product = key(opsem::enumerate_graphs(&p, &v, 10_000));
    prop_assert_eq!(&key(opsem::enumerate_graphs_interleaved(&p, &v, 10_000, SearchOrder::Dfs)), &product);
    prop_assert_eq!(&key(opsem::enumerate_graphs_interleaved(&p, &v, 10_000, SearchOrder::Bfs)), &product);
    Ok(())
}

pub fn candidates_are_well_formed(p: Program) -> Check {
    for x in candidates(&p) {
        prop_assert!(x.well_formed().is_ok(), "{:?}", x.well_formed());
        for i in 0..x.n() {
            let l = x.labels()[i];
            if l.is_read_like() {
                let srcs: Vec<usize> = (0..x.n()).filter(|w| x.rf.contains(*w, i)).collect();
                prop_assert_eq!(srcs.len(), 1);
                let w = x.labels()[srcs[0]];
                prop_assert_eq!(w.loc(), l.loc());
                prop_assert_eq!(w.write_value(), l.read_value());
            }
        }
    }
    Ok(())
}

/// Modes a source command of the same kind can carry.
fn legal(l: &Label, m: Mode) -> bool {
    match l {
        Label::R { .. } => Mode::READ_MODES.contains(&m),
        Label::W { .. } => Mode::WRITE_MODES.contains(&m),
        Label::F { .. } => Mode::FENCE_MODES.contains(&m),
        Label::Rmw { .. } => Mode::RMW_MODES.contains(&m),
    }
}

/// Raising the mode of one event never turns an inconsistent execution consistent.
pub fn strengthening_is_monotone(p: Program, pick: prop::sample::Index) -> Check {
    for x in candidates(&p) {
        let i = pick.index(x.n());
        if x.event(i).is_init() {
            continue;
        }
        let l = x.labels()[i];
        for m in Mode::ALL {
            if m == l.mode() || !l.mode().leq(m) || !legal(&l, m) {
                continue;
            }
            let mut gi = (*x.graph).clone();
            gi.labels[i] = l.with_mode(m);
            let y = CandidateExecution { graph: Arc::new(gi), ..x.clone() };
            for model in [ModelId::Rc11Ext, ModelId::Sc] {
                if models::is_consistent(&y, model) {
                    prop_assert!(models::is_consistent(&x, model), "{} {} -> {}", model, l, m);
                }
            }
        }
    }
    Ok(())
}

pub const RELATION_CASES: u32 = 2500;
pub const PARSER_CASES: u32 = 2000;
pub const EXECUTION_CASES: u32 = 400;

fn run<S: Strategy>(cases: u32, s: S, f: impl Fn(S::Value) -> Check) -> Result<u32, String> {
    let mut runner = TestRunner::new(RunnerConfig { cases, failure_persistence: None, ..RunnerConfig::default() });
    runner.run(&s, f).map(|_| cases).map_err(|e| e.to_string())
}

/// Runs every suite once; returns per-suite case counts or the first failure.
pub fn run_all() -> Vec<(&'static str, Result<u32, String>)> {
    vec![
        ("composition laws", run(RELATION_CASES, relations(3), composition_laws)),
        ("closure laws", run(RELATION_CASES, relation(8), closure_laws)),
        ("cycle laws", run(RELATION_CASES, relation(8), cycle_laws)),
        ("mode partial order", mode_order_is_partial().map(|_| 1).map_err(|e| e.to_string())),
        ("parser round trip", run(PARSER_CASES, program(), round_trip)),
        ("witness validity", run(EXECUTION_CASES, small_program(), witnesses_are_genuine)),
        ("search order", run(EXECUTION_CASES, small_program(), search_order_does_not_matter)),
        ("rf well-formedness", run(EXECUTION_CASES, small_program(), candidates_are_well_formed)),
        ("strengthening monotonicity", run(EXECUTION_CASES, (small_program(), any::<prop::sample::Index>()), |(p, i)| strengthening_is_monotone(p, i))),
    ]
}
