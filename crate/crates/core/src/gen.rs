//! Seeded generator of small loop-free programs.

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::lang::{Cmd, Expr, Mode, Program, ProgramClass};

#[derive(Clone, Copy, Debug)]
pub struct GenParams {
    pub class: ProgramClass,
    pub max_threads: usize,
    pub max_cmds: usize,
    pub locations: usize,
}

impl GenParams {
    pub fn small(class: ProgramClass) -> Self {
        GenParams { class, max_threads: 3, max_cmds: 3, locations: 2 }
    }
}

const LOCS: [&str; 4] = ["x", "y", "z", "w"];

/// A random straight-line program. The same seed and parameters give the same program.
pub fn random_program(seed: u64, params: GenParams) -> Program {
    let mut rng = StdRng::seed_from_u64(seed);
    let locations: Vec<String> = LOCS[..params.locations.clamp(1, LOCS.len())].iter().map(|s| s.to_string()).collect();
    let n = rng.gen_range(1..=params.max_threads.max(1));
    let mut threads = BTreeMap::new();
    for t in 0..n {
        let len = rng.gen_range(1..=params.max_cmds.max(1));
        let cmds: Vec<Cmd> = (0..len).map(|i| random_cmd(&mut rng, params, &format!("r{t}{i}"))).collect();
        threads.insert(t as u32, Cmd::seq(cmds));
    }
    let mut p = Program::new(threads, locations);
    if params.class == ProgramClass::Mixed && p.classify() != ProgramClass::Mixed {
        // Force one command of each kind so the class is what was asked for.
        let c0 = p.threads.get_mut(&0).unwrap();
        *c0 = Cmd::seq([Cmd::AsmNtWrite { addr: Expr::Loc(0), val: Expr::Num(1) }, c0.clone(), Cmd::Write { md: Mode::Rlx, addr: Expr::Loc(0), val: Expr::Num(1) }]);
    }
    p
}

fn random_cmd(rng: &mut StdRng, params: GenParams, reg: &str) -> Cmd {
    let asm = match params.class {
        ProgramClass::PureRc11 => false,
        ProgramClass::PureAsm => true,
        ProgramClass::Mixed => rng.gen_bool(0.5),
    };
    let addr = Expr::Loc(rng.gen_range(0..params.locations.clamp(1, LOCS.len())) as u64);
    let val = Expr::Num(if rng.gen_bool(0.8) { 1 } else { 2 });
    let reg = reg.to_string();
    let pick = |rng: &mut StdRng, ms: &[Mode]| *ms.choose(rng).unwrap();
    match (asm, rng.gen_range(0..10)) {
        (false, 0..=3) => Cmd::Write { md: pick(rng, &Mode::WRITE_MODES), addr, val },
        (false, 4..=7) => Cmd::Read { md: pick(rng, &Mode::READ_MODES), reg, addr },
        (false, 8) => Cmd::Rmw { md: pick(rng, &Mode::RMW_MODES), reg, addr, expected: Expr::Num(0), new: val },
        (false, _) => Cmd::Fence(pick(rng, &Mode::FENCE_MODES)),
        (true, 0..=2) => Cmd::AsmWrite { addr, val },
        (true, 3..=4) => Cmd::AsmNtWrite { addr, val },
        (true, 5..=7) => Cmd::AsmRead { reg, addr },
        (true, 8) => Cmd::AsmRmw { reg, addr, expected: Expr::Num(0), new: val },
        (true, _) => {
            if rng.gen_bool(0.5) {
                Cmd::AsmMFence
            } else {
                Cmd::AsmSFence
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes_and_determinism() {
        for seed in 0..200 {
            for class in [ProgramClass::PureRc11, ProgramClass::PureAsm, ProgramClass::Mixed] {
                let p = random_program(seed, GenParams::small(class));
                assert_eq!(p.classify(), class, "seed {seed}");
                assert!(p.validate().is_ok() && !p.has_loops());
                assert_eq!(p, random_program(seed, GenParams::small(class)));
            }
        }
    }
}
