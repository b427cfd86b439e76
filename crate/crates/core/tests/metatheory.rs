use std::time::{Duration, Instant};

use asmm::compile::{check_compilation, Scheme};
use asmm::corpus;
use asmm::gen::{random_program, GenParams};
use asmm::lang::{parse_program, ModelId, ProgramClass};
use asmm::mixed::{transfer_sweep, AltPpo};
use asmm::models::{self, check_drf, value_domain, Config};
use asmm::runner::config_for;
use asmm::suite::{extension_check, sc_oracle_agrees};

const BOUND: usize = 10_000;

#[test]
fn compilation_is_correct_on_the_corpus() {
    for (e, t) in corpus::tests() {
        let cfg = config_for(&t, None, BOUND);
        for s in Scheme::ALL {
            let start = Instant::now();
            let r = check_compilation(&t.program, s, &cfg).unwrap();
            assert!(r.holds && !r.inconclusive, "{} under {s}: extra {:?}", e.file, r.extra);
            assert!(start.elapsed() < Duration::from_secs(10), "{} under {s} took {:?}", e.file, start.elapsed());
        }
    }
}

#[test]
fn compilation_is_correct_on_random_mixed_programs() {
    for seed in 0..150 {
        let p = random_program(seed, GenParams::small(ProgramClass::Mixed));
        for s in Scheme::ALL {
            let r = check_compilation(&p, s, &Config::default()).unwrap();
            assert!(r.holds, "seed {seed} under {s}:\n{p}extra {:?}", r.extra);
        }
    }
}

#[test]
fn transfer_and_weaker_than_hold_on_the_corpus() {
    for (e, t) in corpus::tests() {
        let cfg = config_for(&t, None, BOUND);
        let v = value_domain(&t.program, &cfg);
        for s in Scheme::ALL {
            let w = transfer_sweep(&t.program, s, AltPpo::Corrected, &v, BOUND).unwrap();
            assert!(w.executions > 0 && !w.overflow, "{} under {s}", e.file);
            assert_eq!(w.transfer_failures, 0, "{} under {s}: {:?}", e.file, w.first_failure);
            assert_eq!(w.weaker_than_failures + w.kind_violations + w.round_trip_failures, 0, "{} under {s}: {:?}", e.file, w.first_failure);
        }
    }
}

#[test]
fn transfer_holds_on_random_mixed_programs() {
    for seed in 0..100 {
        let p = random_program(seed, GenParams::small(ProgramClass::Mixed));
        let v = value_domain(&p, &Config::default());
        for s in Scheme::ALL {
            let w = transfer_sweep(&p, s, AltPpo::Corrected, &v, BOUND).unwrap();
            assert_eq!(w.transfer_failures + w.weaker_than_failures, 0, "seed {seed} under {s}:\n{p}{:?}", w.first_failure);
        }
    }
}

/// With the write node's ordering read literally, an earlier store is ordered
/// before a later read, which x86 does not guarantee.
#[test]
fn literal_alternative_ppo_breaks_transfer() {
    let t = corpus::get("sb-rel-asm").unwrap();
    let v = value_domain(&t.program, &Config::default());
    let literal = transfer_sweep(&t.program, Scheme::Alternative, AltPpo::Literal, &v, BOUND).unwrap();
    assert_eq!(literal.transfer_failures, 1);
    let corrected = transfer_sweep(&t.program, Scheme::Alternative, AltPpo::Corrected, &v, BOUND).unwrap();
    assert_eq!(corrected.transfer_failures, 0);
}

#[test]
fn extension_holds_on_corpus_and_random_programs() {
    let mut pure = 0;
    for (e, t) in corpus::tests() {
        let v = value_domain(&t.program, &config_for(&t, None, BOUND));
        let r = extension_check(&t.program, &v, BOUND).unwrap();
        assert!(r.discrepancies.is_empty(), "{}: {:?}", e.file, r.discrepancies);
        pure += usize::from(r.executions > 0);
    }
    assert!(pure >= 8);
    for class in [ProgramClass::PureRc11, ProgramClass::PureAsm] {
        for seed in 0..300 {
            let p = random_program(seed, GenParams::small(class));
            let r = extension_check(&p, &value_domain(&p, &Config::default()), BOUND).unwrap();
            assert!(r.discrepancies.is_empty(), "seed {seed}:\n{p}{:?}", r.discrepancies);
        }
    }
}

#[test]
fn interpreter_matches_sc_model() {
    for (e, t) in corpus::tests() {
        let cfg = config_for(&t, None, BOUND);
        assert_eq!(sc_oracle_agrees(&t.program, &cfg).unwrap(), Some(true), "{}", e.file);
    }
    for seed in 0..200 {
        let p = random_program(seed, GenParams::small(ProgramClass::Mixed));
        assert_eq!(sc_oracle_agrees(&p, &Config::default()).unwrap(), Some(true), "seed {seed}:\n{p}");
    }
}

#[test]
fn sc_executions_are_consistent_under_weaker_models() {
    for (e, t) in corpus::tests() {
        let v = value_domain(&t.program, &config_for(&t, None, BOUND));
        let rc11 = t.program.is_pure_rc11();
        for x in models::all_candidates(&t.program, &v, BOUND) {
            if models::sc_consistent(&x).consistent {
                assert!(models::is_consistent(&x, ModelId::Rc11Ext), "{}", e.file);
                if rc11 {
                    assert!(models::is_consistent(&x, ModelId::Rc11), "{}", e.file);
                }
            }
        }
    }
}

#[test]
fn drf_on_race_free_programs() {
    let sb = "thread 0: W[sc] [x] 1; a := R[sc] [y]\nthread 1: W[sc] [y] 1; b := R[sc] [x]";
    for t in [corpus::get("drf-mp").unwrap().program, corpus::get("drf-handoff").unwrap().program, parse_program(sb).unwrap()] {
        let r = check_drf(&t, &Config::default()).unwrap();
        assert!(r.race_free && r.sc_equivalent && r.holds, "{t}");
        let weak = models::behaviors(&t, ModelId::Rc11Ext, &Config::default()).unwrap();
        let sc = models::behaviors(&t, ModelId::Sc, &Config::default()).unwrap();
        assert_eq!(weak.behaviors, sc.behaviors);
    }
}

#[test]
fn drf_rejects_release_acquire_flags() {
    let p = parse_program("thread 0: W[na] [x] 1; W[rel] [y] 1\nthread 1: a := R[acq] [y]; if a { b := R[na] [x] }").unwrap();
    let r = check_drf(&p, &Config::default()).unwrap();
    assert!(!r.race_free && r.sc_equivalent && r.holds);
}

#[test]
fn drf_reports_races() {
    let r = check_drf(&corpus::get("catch-fire-na").unwrap().program, &Config::default()).unwrap();
    assert!(!r.race_free && r.race.is_some());
    let r = check_drf(&corpus::get("mp-rlx").unwrap().program, &Config::default()).unwrap();
    assert!(!r.race_free, "rlx accesses race under SC");
}
