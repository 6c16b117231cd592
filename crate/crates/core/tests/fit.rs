use patchasym_core::fit::{fit_rate, richardson_linear, richardson_log, FitModel};
use patchasym_core::Error;
use proptest::prelude::*;

fn dyadic() -> Vec<f64> {
    (4..10).map(|k| 2f64.powi(-k)).collect()
}

#[test]
fn exact_power_law() {
    let eps = dyadic();
    let v: Vec<f64> = eps.iter().map(|e| 0.7 * e * e).collect();
    let f = fit_rate(&eps, &v, FitModel::PowerLaw, None).unwrap();
    assert!((f.exponent - 2.0).abs() < 0.01);
    assert!((f.coefficient - 0.7).abs() < 1e-9);
    assert_eq!(f.window, vec![1, 2, 3, 4, 5]);
    assert!(f.goodness < 1e-12);
}

#[test]
fn negative_power_law_keeps_its_sign() {
    let eps = dyadic();
    let v: Vec<f64> = eps.iter().map(|e| -3.0 * e.powf(1.5)).collect();
    let f = fit_rate(&eps, &v, FitModel::PowerLaw, None).unwrap();
    assert!((f.exponent - 1.5).abs() < 1e-9);
    assert!((f.coefficient + 3.0).abs() < 1e-9);
}

#[test]
fn exact_log_law() {
    let eps = dyadic();
    let v: Vec<f64> = eps.iter().map(|e| 2.5 / e.ln().abs()).collect();
    let f = fit_rate(&eps, &v, FitModel::LogLaw, None).unwrap();
    assert!((f.coefficient - 2.5).abs() < 0.025);
    assert!(f.exponent.abs() < 1e-9);
}

#[test]
fn richardson_in_reciprocal_log() {
    // π L/(L + log 2) has first-order error in 1/L
    let eps = dyadic();
    let v: Vec<f64> = eps
        .iter()
        .map(|e| {
            let l = e.ln().abs();
            std::f64::consts::PI * l / (l + std::f64::consts::LN_2)
        })
        .collect();
    let plain = v[5];
    let r = richardson_log(&eps, &v, None).unwrap();
    assert!((r - std::f64::consts::PI).abs() < (plain - std::f64::consts::PI).abs() / 3.0);
    let lin: Vec<f64> = eps.iter().map(|e| 1.0 + 2.0 * e).collect();
    assert!((richardson_linear(&eps, &lin, None).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn too_few_rows() {
    let eps = [0.1, 0.05, 0.025];
    let v = [1.0, 2.0, 3.0];
    assert_eq!(fit_rate(&eps, &v, FitModel::PowerLaw, None), Err(Error::InsufficientData { have: 2 }));
    let v = [1.0, f64::NAN, 3.0, 4.0];
    let eps = [0.1, 0.05, 0.025, 0.0125];
    assert_eq!(fit_rate(&eps, &v, FitModel::LogLaw, None).unwrap_err(), Error::InsufficientData { have: 2 });
    let all = [0, 1, 2, 3];
    assert!(fit_rate(&eps, &[1.0, 2.0, 3.0, 4.0], FitModel::LogLaw, Some(&all)).is_ok());
}

proptest! {
    #[test]
    fn power_law_recovers_exponent(p in 0.5f64..3.0, c in 0.1f64..10.0) {
        let eps = dyadic();
        let v: Vec<f64> = eps.iter().map(|e| c * e.powf(p)).collect();
        let f = fit_rate(&eps, &v, FitModel::PowerLaw, None).unwrap();
        prop_assert!((f.exponent - p).abs() < 1e-9);
        prop_assert!((f.coefficient - c).abs() < 1e-8 * c);
    }
}
