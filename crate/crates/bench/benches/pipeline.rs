use criterion::{black_box, criterion_group, criterion_main, Criterion};
use thermal_transient::model::times_per_decade;
use thermal_transient::nid::{deconvolve_bayes, log_derivative, log_resample, spectrum_to_foster};
use thermal_transient::{
    analyze, cauer_step_response, foster_to_cauer, AnalysisConfig, CauerNetwork, TransientRecord,
};

fn ladder() -> CauerNetwork {
    CauerNetwork::from_pairs(&[(0.5, 1e-4), (1.0, 1e-2), (2.0, 1.0), (1.5, 30.0)]).unwrap()
}

fn transient() -> TransientRecord {
    let times = times_per_decade(1e-6, 1e4, 48);
    cauer_step_response(&ladder(), 1.0, &times).unwrap()
}

fn forward(c: &mut Criterion) {
    let net = ladder();
    let times = times_per_decade(1e-6, 1e4, 48);
    c.bench_function("cauer_step_response/4 rungs, 480 samples", |b| {
        b.iter(|| cauer_step_response(black_box(&net), 1.0, black_box(&times)).unwrap())
    });
}

fn deconvolution(c: &mut Criterion) {
    let signal = log_resample(&transient(), 48).unwrap();
    let derivative = log_derivative(&signal, 3).unwrap();
    c.bench_function("deconvolve_bayes/500 iterations", |b| {
        b.iter(|| deconvolve_bayes(black_box(&derivative), 500).unwrap())
    });
}

fn expansion(c: &mut Criterion) {
    let signal = log_resample(&transient(), 48).unwrap();
    let spectrum = deconvolve_bayes(&log_derivative(&signal, 3).unwrap(), 500).unwrap();
    let mut group = c.benchmark_group("foster_to_cauer");
    group.sample_size(10);
    for stages in [25, 100] {
        let foster = spectrum_to_foster(&spectrum, stages).unwrap();
        group.bench_function(format!("{stages} stages"), |b| {
            b.iter(|| foster_to_cauer(black_box(&foster)).unwrap())
        });
    }
    group.finish();
}

fn full(c: &mut Criterion) {
    let record = transient();
    let config = AnalysisConfig::default();
    let mut group = c.benchmark_group("analyze");
    group.sample_size(10);
    group.bench_function("default config", |b| b.iter(|| analyze(black_box(&record), &config).unwrap()));
    group.finish();
}

criterion_group!(benches, forward, deconvolution, expansion, full);
criterion_main!(benches);
