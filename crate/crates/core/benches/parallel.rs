use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use orbitquant::moyal::{star_commutator_check, PlanckParam, SeriesCoefficients};
use orbitquant::orbits::{OrbitDescriptor, OrbitFamily};
use orbitquant::verify::properties::{property_case, Property};
use orbitquant::verify::{run_suite, Suite, VerifyConfig};
use orbitquant::{ExactScalar, Execution};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn commutator(c: &mut Criterion) {
    let orbit = OrbitDescriptor::new(OrbitFamily::Sl2Hyperboloid, Some(ExactScalar::ratio(1, 2))).unwrap();
    let h = PlanckParam::default();
    let mut g = c.benchmark_group("star_commutator_sl2");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(star_commutator_check(&orbit, 0, 6, &h, SeriesCoefficients::Factorial, exec).unwrap()))
        });
    }
    g.finish();
}

fn properties(c: &mut Criterion) {
    let mut g = c.benchmark_group("star_associativity_64_cases");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(exec.map((0..64u64).collect(), |i| property_case(Property::StarAssociativity, 1, i).unwrap())))
        });
    }
    g.finish();
}

fn evolution(c: &mut Criterion) {
    let h = PlanckParam::default();
    let mut g = c.benchmark_group("evolution_suite_grid256");
    g.sample_size(10);
    for (name, exec) in MODES {
        let cfg = VerifyConfig { grid: 256, evolution_times: vec![0.25, 0.5], exec, ..VerifyConfig::default() };
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| black_box(run_suite(Suite::Evolution, None, &cfg, &h))));
    }
    g.finish();
}

criterion_group!(benches, commutator, properties, evolution);
criterion_main!(benches);
