//! Acceptance harness: one PASS/FAIL line per criterion. Exits non-zero if any fails.

use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use asmm::compile::{check_compilation, Scheme};
use asmm::corpus;
use asmm::gen::{random_program, GenParams};
use asmm::lang::{parse_program, ModelId, ProgramClass};
use asmm::mixed::{transfer_sweep, AltPpo};
use asmm::models::{self, check_drf, value_domain, Config};
use asmm::runner::{config_for, run_model};
use asmm::suite::{extension_check, sc_oracle_agrees};
use asmm::transform::{self, check_transform_sound, SeqKind, TransformKind};
use rayon::prelude::*;

mod common;

const BOUND: usize = 10_000;

type Outcome = Result<String, String>;

/// Required rc11ext verdicts: (corpus file, predicate, allowed).
const VERDICTS: &[(&str, &str, bool)] = &[
    ("mp-nt", "a=1 /\\ b=0", true),
    ("mp-nt-sf", "a=1 /\\ b=0", false),
    ("iriw", "a=1 /\\ b=0 /\\ c=1 /\\ d=0", true),
    ("iriw-tso", "a=1 /\\ b=0 /\\ c=1 /\\ d=0", false),
    ("iriw-tso-2", "a=1 /\\ b=0 /\\ c=1 /\\ d=0", true),
    ("mp-nt-relfence", "a=1 /\\ b=0", true),
    ("mp-nt-sfence", "a=1 /\\ b=0", false),
    ("mp-na-guarded", "a=1 /\\ b=0", false),
    ("mp-nt-guarded", "a=1 /\\ b=0", true),
    ("catch-fire-na", "UB", true),
    ("catch-fire-nt", "UB", false),
    ("catch-fire-nt", "b=1", false),
    ("catch-fire-nt", "b=42", false),
    ("z6u-tso", "a=1 /\\ b=0 /\\ c=0", false),
    ("z6u-sc", "a=1 /\\ b=0 /\\ c=0", true),
    ("sb-sc", "a=0 /\\ b=0", false),
    ("seq-nt-3", "a=1 /\\ b=1 /\\ c=0", false),
    ("seq-nt-2", "a=1 /\\ b=1 /\\ c=0", true),
    ("seq-tso-3", "a=1 /\\ b=0 /\\ c=0", false),
    ("seq-tso-2", "a=1 /\\ b=0 /\\ c=0", true),
    ("mp-nt-read", "a=1 /\\ b=1 /\\ c=0", true),
];

fn corpus_verdicts() -> Outcome {
    for (file, pred, allowed) in VERDICTS {
        let t = corpus::get(file).ok_or(format!("{file} missing"))?;
        let run = run_model(&t, ModelId::Rc11Ext, &config_for(&t, None, BOUND)).map_err(|e| e.to_string())?;
        let r = run
            .expectations
            .iter()
            .find(|e| e.predicate == *pred && e.allowed == *allowed)
            .ok_or(format!("{file}: no expectation `{pred}`"))?;
        if !r.pass || run.report.overflow {
            return Err(format!("{file}: `{pred}` observed={}", r.observed));
        }
    }
    Ok(format!("{} verdicts", VERDICTS.len()))
}

fn extension() -> Outcome {
    let corpus = corpus::tests().into_iter().map(|(_, t)| t.program);
    let random = [ProgramClass::PureRc11, ProgramClass::PureAsm]
        .into_iter()
        .flat_map(|c| (0..1000).map(move |seed| random_program(seed, GenParams::small(c))));
    let programs: Vec<_> = corpus.chain(random).collect();
    let reports = programs
        .par_iter()
        .map(|p| {
            let r = extension_check(p, &value_domain(p, &Config::default()), BOUND).map_err(|e| e.to_string())?;
            match r.discrepancies.first() {
                Some(d) => Err(format!("{d}\n{p}")),
                None => Ok(r.executions),
            }
        })
        .collect::<Result<Vec<usize>, String>>()?;
    let pure = reports.iter().filter(|n| **n > 0).count();
    Ok(format!("{pure} pure programs, {} executions, 0 discrepancies", reports.iter().sum::<usize>()))
}

fn compilation() -> Outcome {
    let mut slowest = Duration::ZERO;
    let mut n = 0;
    for (e, t) in corpus::tests() {
        for s in Scheme::ALL {
            let start = Instant::now();
            let r = check_compilation(&t.program, s, &config_for(&t, None, BOUND)).map_err(|e| e.to_string())?;
            slowest = slowest.max(start.elapsed());
            if !r.holds || r.inconclusive {
                return Err(format!("{} under {s}: extra {:?}", e.file, r.extra));
            }
            n += 1;
        }
    }
    if slowest >= Duration::from_secs(10) {
        return Err(format!("slowest check took {slowest:?}"));
    }
    Ok(format!("{n} checks, slowest {slowest:?}"))
}

type Totals = Result<(usize, usize, usize, Option<String>), String>;

/// (executions, transfer failures, weaker-than failures, first failure) over the corpus, computed once.
fn transfer_totals() -> &'static Totals {
    static TOTALS: OnceLock<Totals> = OnceLock::new();
    TOTALS.get_or_init(sweep_transfer)
}

fn sweep_transfer() -> Totals {
    let (mut ex, mut tf, mut wt, mut first) = (0, 0, 0, None);
    for (e, t) in corpus::tests() {
        let v = value_domain(&t.program, &config_for(&t, None, BOUND));
        for s in Scheme::ALL {
            let w = transfer_sweep(&t.program, s, AltPpo::Corrected, &v, BOUND).map_err(|e| e.to_string())?;
            if w.overflow {
                return Err(format!("{} under {s} overflowed", e.file));
            }
            ex += w.executions;
            tf += w.transfer_failures + w.kind_violations + w.round_trip_failures;
            wt += w.weaker_than_failures;
            if first.is_none() {
                first = w.first_failure.map(|f| format!("{} under {s}: {f}", e.file));
            }
        }
    }
    Ok((ex, tf, wt, first))
}

fn transfer() -> Outcome {
    let (ex, tf, _, first) = transfer_totals().clone()?;
    match tf {
        0 => Ok(format!("{ex} target executions, both schemes")),
        _ => Err(format!("{tf} failures; first: {}", first.unwrap_or_default())),
    }
}

fn weaker_than() -> Outcome {
    let (ex, _, wt, first) = transfer_totals().clone()?;
    match wt {
        0 => Ok(format!("{ex} mixed graphs")),
        _ => Err(format!("{wt} failures; first: {}", first.unwrap_or_default())),
    }
}

fn transformations() -> Outcome {
    type Enum = fn(&asmm::lang::Program) -> Vec<TransformKind>;
    let groups: [(&str, Enum); 6] = [
        ("strengthen", transform::strengthenings),
        ("deorder", transform::deorderings),
        ("merge", transform::merges),
        ("promote", transform::promotions),
        ("seq-nitia", |p| transform::sequentializations(p, SeqKind::Nitia)),
        ("seq-fence", |p| transform::sequentializations(p, SeqKind::Fence)),
    ];
    let mut counts = Vec::new();
    for (name, f) in groups {
        let mut n = 0;
        for (e, t) in corpus::tests() {
            let cfg = config_for(&t, None, BOUND);
            for k in f(&t.program) {
                let r = check_transform_sound(&t.program, &k, &cfg).map_err(|e| e.to_string())?;
                if !r.holds || r.inconclusive {
                    return Err(format!("{} {k} adds {:?}", e.file, r.extra));
                }
                n += 1;
            }
        }
        if n == 0 {
            return Err(format!("no {name} sites in the corpus"));
        }
        counts.push(format!("{name} {n}"));
    }
    for file in ["seq-nt-3", "seq-tso-3"] {
        let p = corpus::get(file).unwrap().program;
        let k = TransformKind::Sequentialize { kind: SeqKind::Plain, t1: 0, t2: 1, interleaving: vec![] };
        let r = check_transform_sound(&p, &k, &Config::default()).map_err(|e| e.to_string())?;
        if r.holds {
            return Err(format!("seq-plain on {file} unexpectedly sound"));
        }
    }
    counts.push("seq-plain fails on both three-thread programs".into());
    Ok(counts.join(", "))
}

fn drf() -> Outcome {
    let sb = parse_program("thread 0: W[sc] [x] 1; a := R[sc] [y]\nthread 1: W[sc] [y] 1; b := R[sc] [x]").unwrap();
    let tests = [("drf-mp", corpus::get("drf-mp").unwrap().program), ("drf-handoff", corpus::get("drf-handoff").unwrap().program), ("sb-sc", sb)];
    for (name, p) in &tests {
        let r = check_drf(p, &Config::default()).map_err(|e| e.to_string())?;
        let weak = models::behaviors(p, ModelId::Rc11Ext, &Config::default()).map_err(|e| e.to_string())?;
        let sc = models::behaviors(p, ModelId::Sc, &Config::default()).map_err(|e| e.to_string())?;
        if !r.race_free || weak.behaviors != sc.behaviors {
            return Err(format!("{name}: race_free={} equal={}", r.race_free, weak.behaviors == sc.behaviors));
        }
    }
    let racy = check_drf(&corpus::get("catch-fire-na").unwrap().program, &Config::default()).map_err(|e| e.to_string())?;
    if racy.race_free {
        return Err("racy program reported race free".into());
    }
    Ok(format!("{} race-free programs equal SC, racy program rejected", tests.len()))
}

fn oracle() -> Outcome {
    let mut n = 0;
    for (e, t) in corpus::tests() {
        if t.program.has_loops() {
            continue;
        }
        match sc_oracle_agrees(&t.program, &config_for(&t, None, BOUND)).map_err(|e| e.to_string())? {
            Some(true) => n += 1,
            Some(false) => return Err(format!("{} disagrees", e.file)),
            None => return Err(format!("{} overflowed", e.file)),
        }
    }
    Ok(format!("{n} loop-free corpus tests"))
}

fn properties() -> Outcome {
    let mut total = 0;
    for (name, r) in common::run_all() {
        total += r.map_err(|e| format!("{name}: {e}"))?;
    }
    if total < 10_000 {
        return Err(format!("only {total} cases"));
    }
    Ok(format!("{total} randomized cases plus exhaustive mode order"))
}

type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("corpus verdicts under the mixed model", Box::new(corpus_verdicts)),
        ("extension: pure programs keep their verdicts", Box::new(extension)),
        ("compilation correctness, both schemes", Box::new(compilation)),
        ("transfer principle, both schemes", Box::new(transfer)),
        ("weaker-than: x86-consistent mixed graphs are mixed-model consistent", Box::new(weaker_than)),
        ("transformation soundness", Box::new(transformations)),
        ("data-race freedom", Box::new(drf)),
        ("SC interpreter agrees with the SC model", Box::new(oracle)),
        ("property suites", Box::new(properties)),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match f() {
            Ok(detail) => println!("PASS {}. {name}: {detail} ({:.1?})", i + 1, start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
