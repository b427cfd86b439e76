//! Evaluation of litmus expectations against behavior sets.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::lang::{Atom, Expectation, LitmusTest, ModelId, Predicate, Program};
use crate::models::{self, BehaviorReport, BehaviorSet, Config, ModelError, Outcome};
use crate::opsem::ValueDomain;

impl Atom {
    pub fn holds(&self, o: &Outcome) -> bool {
        match self {
            Atom::Reg(r, v) => o.registers.get(r).copied().unwrap_or(0) == *v,
            Atom::Loc(l, v) => o.memory.get(l).copied().unwrap_or(0) == *v,
        }
    }
}

impl Predicate {
    /// Whether some behavior satisfies the predicate. UB satisfies every predicate.
    pub fn observed(&self, b: &BehaviorSet) -> bool {
        match (self, b) {
            (_, BehaviorSet::Ub) => true,
            (Predicate::Ub, BehaviorSet::Outcomes(_)) => false,
            (Predicate::Conj(atoms), BehaviorSet::Outcomes(os)) => os.iter().any(|o| atoms.iter().all(|a| a.holds(o))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpectationResult {
    pub model: ModelId,
    pub allowed: bool,
    pub predicate: String,
    pub observed: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelRun {
    pub report: BehaviorReport,
    pub expectations: Vec<ExpectationResult>,
    #[serde(serialize_with = "as_millis")]
    pub elapsed: Duration,
}

fn as_millis<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_u128(d.as_millis())
}

impl ModelRun {
    pub fn passed(&self) -> bool {
        self.expectations.iter().all(|e| e.pass)
    }
}

/// Configuration for a test: an explicit domain wins over the file's `values` line.
pub fn config_for(t: &LitmusTest, values: Option<&ValueDomain>, bound: usize) -> Config {
    let values = values.cloned().or_else(|| t.values.as_ref().map(|v| ValueDomain::new(v.iter().copied())));
    Config { values, bound }
}

pub fn evaluate(p: &Program, e: &Expectation, b: &BehaviorSet) -> ExpectationResult {
    let observed = e.pred.observed(b);
    ExpectationResult { model: e.model, allowed: e.allowed, predicate: e.pred.render(p), observed, pass: observed == e.allowed }
}

/// Runs `t` under `model` and evaluates the expectations that name it.
pub fn run_model(t: &LitmusTest, model: ModelId, cfg: &Config) -> Result<ModelRun, ModelError> {
    let start = Instant::now();
    let report = models::behaviors(&t.program, model, cfg)?;
    let expectations =
        t.expectations.iter().filter(|e| e.model == model).map(|e| evaluate(&t.program, e, &report.behaviors)).collect();
    Ok(ModelRun { report, expectations, elapsed: start.elapsed() })
}

/// Models that can be applied to `p`.
pub fn applicable_models(p: &Program) -> Vec<ModelId> {
    ModelId::ALL.into_iter().filter(|m| models::check_program(p, *m).is_ok()).collect()
}

/// Models named by `t`'s expectations, in canonical order.
pub fn expected_models(t: &LitmusTest) -> Vec<ModelId> {
    ModelId::ALL.into_iter().filter(|m| t.expectations.iter().any(|e| e.model == *m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_litmus;

    #[test]
    fn ub_satisfies_everything() {
        let p = Predicate::Conj(vec![Atom::Reg("a".into(), 42)]);
        assert!(p.observed(&BehaviorSet::Ub));
        assert!(Predicate::Ub.observed(&BehaviorSet::Ub));
        assert!(!Predicate::Ub.observed(&BehaviorSet::Outcomes(Default::default())));
    }

    #[test]
    fn mp_nt_expectation_passes() {
        let t = parse_litmus(
            "test MP-NT\nthread 0: asm movnt [x] 1; W[rel] [y] 1\nthread 1: a := R[acq] [y]; b := R[rlx] [x]\nexpect rc11ext allowed: a=1 /\\ b=0",
        )
        .unwrap();
        let r = run_model(&t, ModelId::Rc11Ext, &config_for(&t, None, 10_000)).unwrap();
        assert!(r.passed() && r.expectations.len() == 1);
        assert_eq!(applicable_models(&t.program), vec![ModelId::Sc, ModelId::Rc11Ext]);
    }
}
