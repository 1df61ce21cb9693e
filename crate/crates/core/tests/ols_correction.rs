use misclass::em::EmConfig;
use misclass::ols::run_ols_correction_with;
use misclass::pvw::estimate_misclassification_model;
use misclass::sim::{generate_dataset, Level, ScenarioSpec};

#[test]
fn outcome_rescaling_rescales_the_fit() {
    let mut spec = ScenarioSpec::new(1, Level::Medium, 4).unwrap();
    spec.n = 1500;
    let d = generate_dataset(&spec, 0).unwrap().dataset;
    let step1 = estimate_misclassification_model(&d, &EmConfig::default()).unwrap();
    let base = run_ols_correction_with(&d, false, &step1).unwrap();
    let a = 3.5;
    let scaled_d = d.with_outcome(d.y().iter().map(|y| a * y).collect()).unwrap();
    let scaled = run_ols_correction_with(&scaled_d, false, &step1).unwrap();
    for (t, s) in base.theta.iter().zip(&scaled.theta) {
        assert!((a * t - s).abs() < 1e-9 * (1.0 + s.abs()), "{t} * {a} vs {s}");
    }
    let (v0, v1) = (base.sigma2.unwrap(), scaled.sigma2.unwrap());
    assert!((a * a * v0 - v1).abs() < 1e-9 * v1);
}
