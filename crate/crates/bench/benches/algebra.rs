use criterion::{black_box, criterion_group, criterion_main, Criterion};

use craut_bench::{load_model, model_text};
use craut_core::groebner::{comprehensive_groebner_system, CgsLimits};
use craut_core::liealg::{compute_full_algebra, AlgebraOptions};
use craut_core::report::CgsInput;
use craut_core::tangency::{extract_linear_system, tangency_polynomials, Ansatz, TangencyContext};

fn full_algebras(c: &mut Criterion) {
    let mut group = c.benchmark_group("full_algebra");
    group.sample_size(10);
    for name in ["cubic_1_3", "m05", "m08", "m17"] {
        let m = load_model(name);
        group.bench_function(name, |b| b.iter(|| compute_full_algebra(black_box(&m), &AlgebraOptions::default()).unwrap()));
    }
    group.finish();
}

fn tangency_systems(c: &mut Criterion) {
    let m = load_model("m10");
    let ctx = TangencyContext::new(&m).unwrap();
    c.bench_function("tangency_system_m10_weight0", |b| {
        b.iter(|| {
            let ansatz = Ansatz::build(&m, 0, false).unwrap();
            extract_linear_system(&ansatz, &tangency_polynomials(&ctx, &ansatz))
        })
    });
}

fn cgs(c: &mut Criterion) {
    let input = CgsInput::parse(&model_text("cgs_example")).unwrap();
    let polys = input.polynomials().unwrap();
    let order = input.order().unwrap();
    c.bench_function("cgs_example", |b| {
        b.iter(|| comprehensive_groebner_system(black_box(&polys), 2, order, CgsLimits::default()).unwrap())
    });
}

criterion_group!(benches, full_algebras, tangency_systems, cgs);
criterion_main!(benches);
