use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};

use asmm::compile::Scheme;
use asmm::lang::ModelId;
use asmm::mixed::{self, AltPpo};
use asmm::models::{self, Config};
use asmm::opsem::{self, GraphIndex, DEFAULT_BOUND};
use asmm::relalg::Relation;
use asmm_bench::workloads;

fn graphs(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate_graphs");
    for w in workloads() {
        g.bench_function(&w.test.name, |b| b.iter(|| opsem::enumerate_graphs(black_box(&w.test.program), &w.values, DEFAULT_BOUND)));
    }
    g.finish();
}

fn candidates(c: &mut Criterion) {
    let mut g = c.benchmark_group("candidates");
    for w in workloads() {
        let set = opsem::enumerate_graphs(&w.test.program, &w.values, DEFAULT_BOUND);
        let indexed: Vec<_> = set.graphs.iter().map(|cg| (Arc::new(GraphIndex::new(cg.graph.clone())), &cg.registers)).collect();
        g.bench_function(&w.test.name, |b| {
            b.iter(|| indexed.iter().map(|(gi, regs)| opsem::candidates(gi.clone(), regs).len()).sum::<usize>())
        });
    }
    g.finish();
}

fn consistency(c: &mut Criterion) {
    let mut g = c.benchmark_group("consistency");
    for w in workloads() {
        let xs = models::all_candidates(&w.test.program, &w.values, DEFAULT_BOUND);
        for m in ModelId::ALL.into_iter().filter(|m| models::check_program(&w.test.program, *m).is_ok()) {
            g.bench_function(format!("{}/{m}", w.test.name), |b| {
                b.iter(|| xs.iter().filter(|x| models::is_consistent(black_box(x), m)).count())
            });
        }
    }
    g.finish();
}

fn behaviors(c: &mut Criterion) {
    let mut g = c.benchmark_group("behaviors");
    for w in workloads() {
        let cfg = Config { values: Some(w.values.clone()), bound: DEFAULT_BOUND };
        g.bench_function(&w.test.name, |b| b.iter(|| models::behaviors(black_box(&w.test.program), ModelId::Rc11Ext, &cfg).unwrap()));
    }
    g.finish();
}

fn transfer(c: &mut Criterion) {
    let mut g = c.benchmark_group("transfer_sweep");
    g.sample_size(20);
    for w in workloads() {
        g.bench_function(&w.test.name, |b| {
            b.iter(|| mixed::transfer_sweep(black_box(&w.test.program), Scheme::Alternative, AltPpo::Corrected, &w.values, DEFAULT_BOUND).unwrap())
        });
    }
    g.finish();
}

fn closure(c: &mut Criterion) {
    let mut g = c.benchmark_group("transitive_closure");
    for n in [16, 64, 256] {
        let chain = Relation::from_pairs(n, (0..n - 1).map(|i| (i, i + 1)));
        g.bench_function(format!("chain/{n}"), |b| b.iter(|| black_box(&chain).transitive_closure()));
    }
    g.finish();
}

criterion_group!(benches, graphs, candidates, consistency, behaviors, transfer, closure);
criterion_main!(benches);
