use thermal_transient::model::{cauer_step_response, stack_to_cauer, times_per_decade};
use thermal_transient::moisture::{
    classify_hermeticity, ClassifierConfig, GypsumExperiment, HermeticityStatus,
};
use thermal_transient::{analyze, AnalysisConfig, CauerNetwork, Error, StructureFunction};

fn identified(net: &CauerNetwork) -> StructureFunction {
    let rec = cauer_step_response(net, 0.1, &times_per_decade(1e-6, 1e3, 48)).unwrap();
    analyze(&rec, &AnalysisConfig::default())
        .unwrap()
        .structure_function
}

#[test]
fn identified_resistance_matches_steady_state() {
    let net = CauerNetwork::from_pairs(&[(0.5, 2e-4), (1.5, 3e-2), (2.5, 2.0)]).unwrap();
    let rec = cauer_step_response(&net, 0.1, &times_per_decade(1e-6, 1e3, 48)).unwrap();
    let a = analyze(&rec, &AnalysisConfig::default()).unwrap();
    let eq1 = a.steady_state.unwrap();
    assert!((eq1 - 4.5).abs() < 1e-9);
    assert!((a.foster.total_resistance() - eq1).abs() <= 0.02 * eq1);
    assert!((a.cauer.total_resistance() - eq1).abs() <= 0.02 * eq1);
    assert!((a.structure_function.total_resistance() - eq1).abs() <= 0.02 * eq1);
}

#[test]
fn unsettled_transient_withholds_steady_state() {
    let net = CauerNetwork::from_pairs(&[(1.0, 1e-3), (1.0, 50.0)]).unwrap();
    let rec = cauer_step_response(&net, 0.1, &times_per_decade(1e-6, 1e2, 48)).unwrap();
    let a = analyze(&rec, &AnalysisConfig::default()).unwrap();
    assert!(matches!(a.steady_state, Err(Error::NotSettled { .. })));
}

#[test]
fn wet_gypsum_is_breached_and_transposition_flips_the_sign() {
    let e = GypsumExperiment::default();
    let dry = identified(&stack_to_cauer(&e.stack(0.0).unwrap(), 8).unwrap());
    let wet = identified(&stack_to_cauer(&e.stack(0.8).unwrap(), 8).unwrap());
    let cfg = ClassifierConfig::default();
    let v = classify_hermeticity(&dry, &wet, &cfg).unwrap();
    assert_eq!(v.status, HermeticityStatus::Breached);
    assert!(v.sensing_layer_resistance_change < -0.1);
    let t = classify_hermeticity(&wet, &dry, &cfg).unwrap();
    assert!(t.sensing_layer_resistance_change > 0.0);
    assert_eq!(t.status, HermeticityStatus::Hermetic);
    assert_eq!(classify_hermeticity(&dry, &dry, &cfg).unwrap().status, HermeticityStatus::Hermetic);
}
