use std::f64::consts::PI;

use proptest::prelude::*;

use polyfisher::families::{density_rho_n, polynomials, series_value, FamilySpec};
use polyfisher::fisher::{fisher_closed, fisher_closed_generic, fisher_summand};
use polyfisher::gamma::abs_gamma_sq;

fn discrete_spec() -> impl Strategy<Value = FamilySpec> {
    prop_oneof![
        (0.05f64..20.0).prop_map(|a| FamilySpec::charlier(a).unwrap()),
        (0.05f64..10.0, 0.01f64..0.99).prop_map(|(b, c)| FamilySpec::meixner(b, c).unwrap()),
        (0.01f64..0.99, 2u32..60).prop_map(|(p, n)| FamilySpec::krawtchouk(p, n).unwrap()),
    ]
}

fn any_spec() -> impl Strategy<Value = FamilySpec> {
    prop_oneof![
        3 => discrete_spec(),
        1 => (0.05f64..5.0, 0.05f64..(PI - 0.05))
            .prop_map(|(l, phi)| FamilySpec::meixner_pollaczek(l, phi).unwrap()),
    ]
}

/// A degree with `n + 1` inside the family's range and a support point.
fn spec_n_x() -> impl Strategy<Value = (FamilySpec, u32, f64)> {
    (any_spec(), 0u32..12, 0.0f64..1.0).prop_map(|(spec, n, u)| {
        let (n, x) = match spec {
            FamilySpec::Krawtchouk { n_trials, .. } => {
                (n.min(n_trials - 1), (u * f64::from(n_trials)).round())
            }
            FamilySpec::MeixnerPollaczek { .. } => (n, 60.0 * u - 30.0),
            _ => (n, (u * 60.0).floor()),
        };
        (spec, n, x)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn summand_is_finite_and_nonnegative((spec, n, x) in spec_n_x()) {
        let s = fisher_summand(&spec, n, x).unwrap();
        prop_assert!(s.is_finite() && s >= 0.0, "{spec} n={n} x={x}: {s}");
    }

    #[test]
    fn density_is_a_probability((spec, n, x) in spec_n_x()) {
        let d = density_rho_n(&spec, n, x).unwrap();
        prop_assert!(d.rho_n >= 0.0 && d.rho_n.is_finite());
        prop_assert!(!spec.is_discrete() || d.rho_n <= 1.0 + 1e-12);
    }

    #[test]
    fn closed_form_is_positive_and_grows_with_degree(spec in any_spec(), n in 0u32..30) {
        let top = spec.max_degree().unwrap_or(u32::MAX);
        prop_assume!(n < top);
        let lo = fisher_closed(&spec, n).unwrap();
        let hi = fisher_closed(&spec, n + 1).unwrap();
        prop_assert!(lo > 0.0 && hi > 0.0);
        match spec {
            // the numerator 2n^2 - (2n+1)N steps by 4n + 2 - 2N, so the
            // information peaks at n = (N-1)/2
            FamilySpec::Krawtchouk { n_trials, .. } => {
                let step = 4.0 * f64::from(n) + 2.0 - 2.0 * f64::from(n_trials);
                prop_assert_eq!(hi > lo, step < 0.0, "{} n={}", spec, n);
            }
            _ => prop_assert!(hi > lo, "{spec}: I({n}) = {lo}, I({}) = {hi}", n + 1),
        }
    }

    #[test]
    fn generic_closed_form_agrees(spec in discrete_spec(), n in 0u32..30) {
        let top = spec.max_degree().unwrap_or(u32::MAX);
        prop_assume!(n <= top);
        let a = fisher_closed(&spec, n).unwrap();
        let b = fisher_closed_generic(&spec.zmap().unwrap(), n).unwrap();
        prop_assert!((a - b).abs() <= 1e-13 * a.abs());
    }

    #[test]
    fn discrete_polynomials_are_one_at_origin(spec in discrete_spec(), n in 0u32..20) {
        let n = n.min(spec.max_degree().unwrap_or(n));
        let p = polynomials(&spec, n, 0.0).unwrap();
        for v in &p.values {
            prop_assert!((v - 1.0).abs() <= 1e-12, "{spec}: {:?}", p.values);
        }
    }

    #[test]
    fn series_matches_recurrence_on_small_degrees((spec, n, x) in spec_n_x()) {
        let n = n.min(8);
        let rec = *polynomials(&spec, n, x).unwrap().values.last().unwrap();
        let ser = series_value(&spec, n, x).unwrap();
        prop_assert!((rec - ser).abs() <= 1e-9 * ser.abs().max(1.0), "{spec} n={n} x={x}: {rec} {ser}");
    }

    #[test]
    fn gamma_kernel_is_even_and_positive(lambda in 0.05f64..6.0, x in -40.0f64..40.0) {
        let a = abs_gamma_sq(lambda, x);
        let b = abs_gamma_sq(lambda, -x);
        prop_assert!(a > 0.0);
        prop_assert!((a - b).abs() <= 1e-15 * a);
    }

    #[test]
    fn gamma_kernel_shift_identity(lambda in 0.05f64..6.0, x in -20.0f64..20.0) {
        // |Gamma(s + 1)|^2 = |s|^2 |Gamma(s)|^2
        let lhs = abs_gamma_sq(lambda + 1.0, x);
        let rhs = (lambda * lambda + x * x) * abs_gamma_sq(lambda, x);
        prop_assert!((lhs - rhs).abs() <= 1e-11 * lhs, "{lhs} {rhs}");
    }
}

#[test]
fn summand_vanishes_nowhere_special_at_polynomial_zeros() {
    // P_1 for Charlier a = 2 is 1 - x/2, zero at x = 2; the summand there is
    // the finite limit, not a 0/0
    let spec = FamilySpec::charlier(2.0).unwrap();
    assert!(polynomials(&spec, 1, 2.0).unwrap().values[1].abs() < 1e-15);
    let s = fisher_summand(&spec, 1, 2.0).unwrap();
    assert!(s.is_finite() && s > 0.0);
}
