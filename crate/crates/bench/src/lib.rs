//! Inputs shared by the benchmarks under `benches/`.

use asmm::lang::LitmusTest;
use asmm::models;
use asmm::opsem::{ValueDomain, DEFAULT_BOUND};
use asmm::runner::config_for;

/// Corpus tests that cover each model and program class.
pub const WORKLOAD: [&str; 6] = ["mp-nt", "iriw", "iriw-tso", "z6u-tso", "merge-sites", "seq-nt-3"];

/// A corpus test with the value domain its runs use.
pub struct Workload {
    pub test: LitmusTest,
    pub values: ValueDomain,
}

pub fn workload(name: &str) -> Workload {
    let test = asmm::corpus::get(name).unwrap_or_else(|| panic!("no corpus test `{name}`"));
    let cfg = config_for(&test, None, DEFAULT_BOUND);
    let values = models::value_domain(&test.program, &cfg);
    Workload { test, values }
}

pub fn workloads() -> Vec<Workload> {
    WORKLOAD.iter().map(|n| workload(n)).collect()
}

#[cfg(test)]
mod tests {
    #[test]
    fn every_workload_loads() {
        assert_eq!(super::workloads().len(), super::WORKLOAD.len());
    }
}
