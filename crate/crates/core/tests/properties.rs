mod common;

use common::CASES;

#[test]
fn polynomial_ring_laws() {
    common::expr_laws(CASES).unwrap();
}

#[test]
fn homogeneity_and_multiplicity() {
    common::homogeneity_laws(CASES).unwrap();
}

#[test]
fn random_models_match_orbit_oracle() {
    common::random_counts_match_oracle(CASES).unwrap();
}

#[test]
fn builtin_models_match_orbit_oracle() {
    common::builtin_counts_match_oracle(CASES).unwrap();
}

#[test]
fn quadric_surface_counts() {
    common::quadric_counts().unwrap();
}

#[test]
fn series_ring_laws() {
    common::series_laws(CASES).unwrap();
}

#[test]
fn weight_four_form_obeys_weil_bound() {
    common::weil_bound(CASES).unwrap();
}

#[test]
fn verdicts_are_monotone() {
    common::verdict_monotonicity(CASES).unwrap();
}
