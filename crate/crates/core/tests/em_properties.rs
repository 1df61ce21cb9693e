use misclass::em::{e_step, m_step, run_em, Acceleration, EmConfig, StartStrategy};
use misclass::model::observed_data_loglik;
use misclass::sim::{generate_dataset, Level, ScenarioSpec};
use proptest::prelude::*;

fn small(setting: u8, seed: u64) -> ScenarioSpec {
    let mut spec = ScenarioSpec::new(setting, Level::High, seed).unwrap();
    spec.n = 300;
    spec.replicates = 1;
    spec
}

#[test]
fn plain_em_never_decreases_the_likelihood() {
    for setting in [1, 2, 3, 5] {
        let spec = small(setting, 5);
        let d = generate_dataset(&spec, 0).unwrap().dataset;
        let config = EmConfig {
            acceleration: Acceleration::None,
            max_iterations: 300,
            ..EmConfig::default()
        };
        let r = run_em(&d, spec.family(), &config, spec.interaction()).unwrap();
        for w in r.loglik_trace.windows(2) {
            assert!(w[1] >= w[0] - 1e-10, "setting {setting}: {} -> {}", w[0], w[1]);
        }
    }
}

#[test]
fn one_em_step_from_the_truth_does_not_lose_likelihood() {
    for setting in [1, 2, 5] {
        let spec = small(setting, 8);
        let d = generate_dataset(&spec, 0).unwrap().dataset;
        let truth = spec.truth();
        let family = spec.family();
        let before = observed_data_loglik(&truth, &d, family).unwrap();
        let resp = e_step(&truth, &d, family).unwrap();
        let next = m_step(&resp, &d, family, spec.interaction()).unwrap();
        let after = observed_data_loglik(&next, &d, family).unwrap();
        assert!(after >= before - 1e-9, "setting {setting}: {before} -> {after}");
    }
}

#[test]
fn accelerated_run_reaches_the_plain_optimum() {
    let spec = small(2, 21);
    let d = generate_dataset(&spec, 0).unwrap().dataset;
    let plain = EmConfig {
        acceleration: Acceleration::None,
        ..EmConfig::default()
    };
    let a = run_em(&d, spec.family(), &plain, false).unwrap();
    let b = run_em(&d, spec.family(), &EmConfig::default(), false).unwrap();
    assert!(b.final_loglik().unwrap() >= a.final_loglik().unwrap() - 1e-6);
    assert!(b.iterations <= a.iterations);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn swapped_labels_leave_the_likelihood_unchanged(seed in 0u64..10_000, setting in prop::sample::select(vec![1u8, 3, 5])) {
        let spec = small(setting, seed);
        let d = generate_dataset(&spec, 0).unwrap().dataset;
        let p = spec.truth();
        let a = observed_data_loglik(&p, &d, spec.family()).unwrap();
        let b = observed_data_loglik(&p.label_swapped(), &d, spec.family()).unwrap();
        prop_assert!((a - b).abs() < 1e-8 * a.abs().max(1.0));
    }

    #[test]
    fn flipped_start_is_relabelled(seed in 0u64..10_000) {
        let spec = small(1, seed);
        let d = generate_dataset(&spec, 0).unwrap().dataset;
        let config = EmConfig {
            start: StartStrategy::Given { params: spec.truth().label_swapped() },
            max_iterations: 200,
            ..EmConfig::default()
        };
        let r = run_em(&d, spec.family(), &config, false).unwrap();
        prop_assert!(r.sensitivity.unwrap() + r.specificity.unwrap() > 1.0);
        prop_assert!(r.label_swap_applied);
    }
}
