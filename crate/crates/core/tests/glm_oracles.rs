#![cfg(feature = "oracles")]

use misclass::glm::fit_weighted_glm;
use misclass::oracles::{closed_form_wls, glm_fixture, glm_score, independent_newton_glm};
use misclass::Family;

const FAMILIES: [Family; 3] = [Family::Normal, Family::Bernoulli, Family::Poisson];

#[test]
fn irls_matches_newton_on_every_family() {
    for (f, family) in FAMILIES.into_iter().enumerate() {
        for k in 0..20 {
            let (design, y, w) = glm_fixture(family, 150, 2 + k % 4, 1000 * f as u64 + k as u64).unwrap();
            let fit = fit_weighted_glm(&design, &y, &w, family).unwrap();
            assert!(fit.converged, "{family} fixture {k} did not converge");
            let newton = independent_newton_glm(&design, &y, &w, family).unwrap();
            for (a, b) in fit.coefficients.iter().zip(&newton) {
                assert!((a - b).abs() < 1e-8, "{family} fixture {k}: {a} vs {b}");
            }
            let score = glm_score(&design, &y, &w, family, &fit.coefficients).unwrap();
            let total: f64 = w.iter().sum();
            for g in score {
                assert!(g.abs() / total < 1e-8, "{family} fixture {k}: score {g}");
            }
        }
    }
}

#[test]
fn normal_fit_is_weighted_least_squares() {
    for k in 0..20 {
        let (design, y, w) = glm_fixture(Family::Normal, 80, 2 + k % 5, 77 + k as u64).unwrap();
        let fit = fit_weighted_glm(&design, &y, &w, Family::Normal).unwrap();
        let wls = closed_form_wls(&design, &y, &w).unwrap();
        for (a, b) in fit.coefficients.iter().zip(&wls) {
            assert!((a - b).abs() < 1e-10, "fixture {k}: {a} vs {b}");
        }
    }
}
