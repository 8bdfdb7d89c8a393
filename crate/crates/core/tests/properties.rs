mod support;

use support::props;

#[test]
fn total_derivative_is_a_derivation() {
    props::total_derivative_is_a_derivation().unwrap();
}

#[test]
fn total_derivative_commutes_with_partials_up_to_a_shift() {
    props::total_derivative_commutes_with_partials_up_to_a_shift().unwrap();
}

#[test]
fn bracket_is_a_derivation_in_the_second_slot() {
    props::bracket_is_a_derivation_in_the_second_slot().unwrap();
}

#[test]
fn sesquilinearity() {
    props::sesquilinearity().unwrap();
}

#[test]
fn right_leibniz_rule() {
    props::right_leibniz_rule().unwrap();
}

#[test]
fn adjoint_reverses_products() {
    props::adjoint_reverses_products().unwrap();
}

#[test]
fn canonical_form_round_trip() {
    props::canonical_form_round_trip().unwrap();
}

#[test]
fn variational_derivative_kills_total_derivatives() {
    props::variational_derivative_kills_total_derivatives().unwrap();
}

#[test]
fn integration_inverts_the_total_derivative() {
    props::integration_inverts_the_total_derivative().unwrap();
}

#[test]
fn conformal_weights_add_and_shift() {
    props::conformal_weights_add_and_shift().unwrap();
}

#[test]
fn bracket_coefficients_have_the_predicted_weight() {
    props::bracket_coefficients_have_the_predicted_weight().unwrap();
}
