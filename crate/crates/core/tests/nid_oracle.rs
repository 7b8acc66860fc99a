use thermal_transient::model::{foster_step_response, times_per_decade};
use thermal_transient::nid::{
    deconvolve_bayes, deconvolve_bayes_traced, log_derivative, log_resample, spectrum_to_foster,
};
use thermal_transient::{FosterNetwork, LogTimeSignal, TimeConstantSpectrum};

fn derivative_of(pairs: &[(f64, f64)]) -> LogTimeSignal {
    let net = FosterNetwork::from_pairs(pairs).unwrap();
    let times = times_per_decade(1e-6, 1e3, 48);
    let rec = foster_step_response(&net, 1.0, &times).unwrap();
    let sig = log_resample(&rec, 48).unwrap();
    log_derivative(&sig, 3).unwrap()
}

fn spectrum_of(pairs: &[(f64, f64)]) -> TimeConstantSpectrum {
    deconvolve_bayes(&derivative_of(pairs), 500).unwrap()
}

fn centroid(s: &TimeConstantSpectrum, lo: f64, hi: f64) -> f64 {
    let (mut m, mut a) = (0.0, 0.0);
    for (z, d) in s.zeta_grid().iter().zip(s.density()) {
        if (lo..=hi).contains(z) {
            m += z * d;
            a += d;
        }
    }
    m / a
}

#[test]
fn single_pole_area_and_position() {
    let s = spectrum_of(&[(1.0, 1.0)]);
    assert!((s.area() - 1.0).abs() <= 0.01, "area {}", s.area());
    assert!(s.peak_zeta().abs() <= 0.5, "peak at {}", s.peak_zeta());
}

#[test]
fn two_poles_four_decades_apart_separate() {
    let (t1, t2) = (1e-3f64, 10.0f64);
    let s = spectrum_of(&[(1.0, t1), (1.0, t2)]);
    let mid = 0.5 * (t1.ln() + t2.ln());
    let lower = s.area_between(f64::NEG_INFINITY, mid);
    let upper = s.area_between(mid, f64::INFINITY);
    assert!((lower - 1.0).abs() <= 0.05, "lower lobe {lower}");
    assert!((upper - 1.0).abs() <= 0.05, "upper lobe {upper}");

    let peak_in = |lo: f64, hi: f64| {
        s.zeta_grid()
            .iter()
            .zip(s.density())
            .filter(|(z, _)| (lo..=hi).contains(*z))
            .map(|(_, d)| *d)
            .fold(0.0, f64::max)
    };
    let p1 = peak_in(t1.ln() - 1.0, t1.ln() + 1.0);
    let p2 = peak_in(t2.ln() - 1.0, t2.ln() + 1.0);
    let valley = peak_in(mid - 1.0, mid + 1.0);
    assert!(valley < 0.05 * p1.min(p2), "valley {valley}, peaks {p1} {p2}");
}

#[test]
fn lumped_foster_keeps_total_resistance() {
    let s = spectrum_of(&[(0.4, 1e-4), (1.1, 2e-2), (0.5, 3.0)]);
    let f = spectrum_to_foster(&s, 100).unwrap();
    assert!((f.total_resistance() - 2.0).abs() <= 0.02 * 2.0);
}

#[test]
fn residual_decreases_monotonically() {
    let d = deconvolve_bayes_traced(&derivative_of(&[(1.0, 1e-3), (2.0, 0.5)]), 300).unwrap();
    assert_eq!(d.residuals.len(), 301);
    for w in d.residuals.windows(2) {
        assert!(w[1] <= w[0], "residual rose from {} to {}", w[0], w[1]);
    }
    assert!(d.residuals.last().unwrap() < &(0.1 * d.residuals[0]));
}

#[test]
fn decade_shift_moves_spectrum_by_ln10() {
    let a = spectrum_of(&[(1.0, 1e-3)]);
    let b = spectrum_of(&[(1.0, 1e-2)]);
    let shift = centroid(&b, -12.0, 4.0) - centroid(&a, -12.0, 4.0);
    assert!(
        (shift - std::f64::consts::LN_10).abs() < 0.5 * a.spacing(),
        "shift {shift}"
    );
}
