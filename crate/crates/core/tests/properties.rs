//! Randomized invariants of the local analysis, the classifier and the
//! witness recurrence, at least 200 cases each.

mod common;

#[test]
fn leibniz_rule_at_regular_places() {
    common::leibniz(common::CASES).unwrap();
}

#[test]
fn pole_orders_survive_parameter_change() {
    common::reparametrization(common::CASES).unwrap();
}

#[test]
fn mobius_maps_keep_the_verdict() {
    // 6 equations x 34 maps
    common::mobius(34).unwrap();
}

#[test]
fn recurrence_prefixes_are_stable() {
    common::lemma_stability(common::CASES).unwrap();
}

#[test]
fn ramification_sums_equal_the_degree() {
    common::ramification_sums(common::CASES).unwrap();
}
