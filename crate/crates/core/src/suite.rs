//! Program-level metatheory checks shared by the test suites and the CLI.

use crate::lang::{ModelId, Program, ProgramClass};
use crate::models::{self, all_candidates, check, BehaviorSet, Config, ModelError};
use crate::opsem::ValueDomain;
use crate::sim;

/// Per-execution comparison of the mixed model against the model it extends.
#[derive(Clone, Debug, Default)]
pub struct ExtensionReport {
    pub executions: usize,
    pub discrepancies: Vec<String>,
}

/// On a pure RC11 program every candidate is RC11-consistent iff it is
/// consistent under the mixed model; on a pure assembly program the same holds
/// for the x86 model. Mixed programs are skipped.
pub fn extension_check(p: &Program, values: &ValueDomain, bound: usize) -> Result<ExtensionReport, ModelError> {
    let base = match p.classify() {
        ProgramClass::PureRc11 => ModelId::Rc11,
        ProgramClass::PureAsm => ModelId::Ex86,
        ProgramClass::Mixed => return Ok(ExtensionReport::default()),
    };
    let mut r = ExtensionReport::default();
    for x in all_candidates(p, values, bound) {
        r.executions += 1;
        let (a, b) = (check(&x, base)?, check(&x, ModelId::Rc11Ext)?);
        if a.consistent != b.consistent {
            r.discrepancies.push(format!(
                "{base} {:?} vs rc11ext {:?} on rf {:?} mo {:?}",
                a.violated,
                b.violated,
                x.rf_pairs(),
                x.mo_pairs()
            ));
        }
    }
    Ok(r)
}

/// Whether the interpreter and the axiomatic SC model agree on `p`'s outcomes.
/// `None` when either side hit the bound.
pub fn sc_oracle_agrees(p: &Program, cfg: &Config) -> Result<Option<bool>, ModelError> {
    let (direct, overflow) = sim::sc_outcomes(p, cfg.bound);
    let axiomatic = models::behaviors(p, ModelId::Sc, cfg)?;
    if overflow || axiomatic.overflow {
        return Ok(None);
    }
    Ok(Some(axiomatic.behaviors == BehaviorSet::Outcomes(direct)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_program;

    #[test]
    fn extension_on_small_programs() {
        let v = ValueDomain::new([0, 1]);
        let sb = parse_program("thread 0: W[sc] [x] 1; a := R[sc] [y]\nthread 1: W[sc] [y] 1; b := R[sc] [x]").unwrap();
        let r = extension_check(&sb, &v, 1000).unwrap();
        assert_eq!((r.executions, r.discrepancies.len()), (4, 0));
        let asm = parse_program("thread 0: asm mov [x] 1; asm a := mov [y]\nthread 1: asm movnt [y] 1; asm b := mov [x]").unwrap();
        assert!(extension_check(&asm, &v, 1000).unwrap().discrepancies.is_empty());
    }

    #[test]
    fn oracle_agrees_on_mp() {
        let p = parse_program("thread 0: W[rlx] [x] 1; W[rel] [y] 1\nthread 1: a := R[acq] [y]; b := R[rlx] [x]").unwrap();
        assert_eq!(sc_oracle_agrees(&p, &Config::default()).unwrap(), Some(true));
    }
}
