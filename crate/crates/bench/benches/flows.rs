use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use wflow_core::{
    collapse_time, integrate, AmbientSpace, CurvatureProfile, Epsilon, FamilyKind, Field, FlowProblem,
    IsoparametricFamily, SolverConfig, WeingartenSpec,
};

fn problem(amb: AmbientSpace, kind: FamilyKind, spec: WeingartenSpec, tau0: f64) -> FlowProblem {
    FlowProblem::new(IsoparametricFamily::new(amb, kind).unwrap(), spec, tau0, None).unwrap()
}

fn cases() -> Vec<(&'static str, FlowProblem)> {
    let sphere = |eps, spec| problem(AmbientSpace::space_form(eps, 4).unwrap(), FamilyKind::GeodesicSphere, spec, 1.0);
    vec![
        ("E3 |A|^2", sphere(Epsilon::Flat, WeingartenSpec::SquaredNorm)),
        ("S3 H_1", sphere(Epsilon::Spherical, WeingartenSpec::MeanCurvature(1))),
        ("H3 H_2", sphere(Epsilon::Hyperbolic, WeingartenSpec::MeanCurvature(2))),
        (
            "munzner g=4 H_1",
            problem(
                AmbientSpace::space_form(Epsilon::Spherical, 7).unwrap(),
                FamilyKind::SphereMunzner { g: 4, multiplicities: vec![1, 2, 1, 2] },
                WeingartenSpec::MeanCurvature(1),
                0.2,
            ),
        ),
        (
            "HO2 H_1",
            problem(
                AmbientSpace::hyperbolic_field(Field::Octonion, 2).unwrap(),
                FamilyKind::HFGeodesicSphere,
                WeingartenSpec::MeanCurvature(1),
                1.0,
            ),
        ),
    ]
}

fn eval(c: &mut Criterion) {
    let mut group = c.benchmark_group("eval");
    let compressed = CurvatureProfile::new(vec![(1.3, 7), (0.4, 8)]).unwrap();
    let values: Vec<f64> = (0..15).map(|i| 0.2 + 0.1 * i as f64).collect();
    let spread = CurvatureProfile::from_values(&values).unwrap();
    for spec in [WeingartenSpec::MeanCurvature(3), WeingartenSpec::SquaredNorm, WeingartenSpec::GaussK] {
        group.bench_with_input(BenchmarkId::new("two blocks", spec.label()), &spec, |b, s| {
            b.iter(|| s.eval(black_box(&compressed)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("distinct", spec.label()), &spec, |b, s| {
            b.iter(|| s.eval(black_box(&spread)).unwrap())
        });
    }
    group.finish();
}

fn quadrature(c: &mut Criterion) {
    let mut group = c.benchmark_group("collapse_time");
    for (name, p) in cases() {
        group.bench_function(name, |b| b.iter(|| collapse_time(black_box(&p), 1e-13).unwrap()));
    }
    group.finish();
}

fn ode(c: &mut Criterion) {
    let cfg = SolverConfig::default();
    let mut group = c.benchmark_group("integrate");
    for (name, p) in cases() {
        group.bench_function(name, |b| b.iter(|| integrate(black_box(&p), &cfg).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, eval, quadrature, ode);
criterion_main!(benches);
