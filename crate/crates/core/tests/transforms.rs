use asmm::corpus;
use asmm::lang::{parse_program, Program};
use asmm::models::Config;
use asmm::runner::config_for;
use asmm::transform::*;

const BOUND: usize = 10_000;

fn sweep(name: &str, enumerate: impl Fn(&Program) -> Vec<TransformKind>) -> usize {
    let mut applied = 0;
    for (e, t) in corpus::tests() {
        let cfg = config_for(&t, None, BOUND);
        for k in enumerate(&t.program) {
            let r = check_transform_sound(&t.program, &k, &cfg).unwrap();
            assert!(r.holds && !r.inconclusive, "{name}: {} {k} adds {:?}", e.file, r.extra);
            applied += 1;
        }
    }
    applied
}

#[test]
fn strengthening_is_sound() {
    assert!(sweep("strengthen", strengthenings) > 100);
}

#[test]
fn deordering_is_sound() {
    assert!(sweep("deorder", deorderings) > 0);
}

#[test]
fn merging_is_sound() {
    assert!(sweep("merge", merges) >= 4);
}

#[test]
fn register_promotion_is_sound() {
    assert!(sweep("promote", promotions) > 0);
}

#[test]
fn nitia_sequentialization_is_sound() {
    assert!(sweep("seq-nitia", |p| sequentializations(p, SeqKind::Nitia)) > 0);
}

#[test]
fn fenced_sequentialization_is_sound() {
    assert!(sweep("seq-fence", |p| sequentializations(p, SeqKind::Fence)) > 0);
}

#[test]
fn plain_sequentialization_is_unsound() {
    for (three, two) in [("seq-nt-3", "seq-nt-2"), ("seq-tso-3", "seq-tso-2")] {
        let p = corpus::get(three).unwrap().program;
        assert!(nitia_check(&p, 0, 1).is_err(), "{three} interacts through assembly");
        let k = TransformKind::Sequentialize { kind: SeqKind::Plain, t1: 0, t2: 1, interleaving: vec![] };
        let q = apply(&p, &k).unwrap();
        let expected = corpus::get(two).unwrap().program;
        assert_eq!(q.threads.values().collect::<Vec<_>>(), expected.threads.values().collect::<Vec<_>>());
        let r = check_transform_sound(&p, &k, &Config::default()).unwrap();
        assert!(!r.holds && r.extra.len() == 1, "{three}: {:?}", r.extra);
        let regs = &r.extra[0].registers;
        let want = if three == "seq-nt-3" { [("a", 1), ("b", 1), ("c", 0)] } else { [("a", 1), ("b", 0), ("c", 0)] };
        assert!(want.iter().all(|(n, v)| regs[*n] == *v), "{three}: {regs:?}");
    }
}

/// Promoting a location accessed by an assembly RMW drops the ordering the RMW
/// gives a preceding non-temporal store.
#[test]
fn promoting_an_assembly_rmw_location_is_unsound() {
    let p = corpus::get("promote-rmw").unwrap().program;
    let z = p.loc_by_name("z").unwrap();
    assert!(matches!(promote_register(&p, z, 0), Err(TransformError::Promote(_))));
    let q = promote_register_unchecked(&p, z, 0).unwrap();
    let k = TransformKind::PromoteRegister { loc: z, tid: 0 };
    let r = check_inclusion(&p, &q, &k, &Config::default()).unwrap();
    assert!(!r.holds);
    assert!(r.extra.iter().any(|o| o.registers["b"] == 1 && o.registers["c"] == 0), "{:?}", r.extra);
}

#[test]
fn strengthening_random_programs_is_sound() {
    use asmm::gen::{random_program, GenParams};
    use asmm::lang::ProgramClass;
    for seed in 0..40 {
        let p = random_program(seed, GenParams::small(ProgramClass::Mixed));
        for k in strengthenings(&p).into_iter().take(4) {
            let r = check_transform_sound(&p, &k, &Config::default()).unwrap();
            assert!(r.holds, "seed {seed} {k}:\n{p}{:?}", r.extra);
        }
    }
}

#[test]
fn spec_strings_apply() {
    let p = parse_program("thread 0: W[rlx] [x] 1; W[rlx] [x] 2\nthread 1: a := R[rlx] [x]").unwrap();
    for spec in ["strengthen:0/0:rel", "merge:0/0", "seq-fence:0,1", "seq-plain:1,0:21"] {
        let k = parse_transform(spec, &p).unwrap();
        assert!(check_transform_sound(&p, &k, &Config::default()).unwrap().holds, "{spec}");
    }
}
