use proptest::prelude::*;

use ingleton_core::ci::{enumerate_elementary, holds_exact, CIStatement};
use ingleton_core::dist::rat;
use ingleton_core::essential::{
    factorize, family_table, find_certificate, functional_at, functional_series, leading_coefficient, loglin_sign,
    prove_essential, reference_family, sample_families, xz_yz_given_u, CurveFamily, EssentialCertificate, LogLin,
    DEFAULT_ORDER,
};
use ingleton_core::ingleton::ingleton_xy_zu;
use ingleton_core::vars::Var::{X, Y};
use ingleton_core::Error;

fn loglin() -> impl Strategy<Value = LogLin> {
    (-30i64..30, 1i64..12, prop::collection::vec((2i64..40, -6i64..6, 1i64..4), 0..4)).prop_map(|(n, d, logs)| {
        logs.into_iter().fold(LogLin::from_rational(rat(n, d)), |acc, (base, k, m)| {
            acc + LogLin::log_of(&rat(base, 1)).scale(&rat(k, m))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn series_match_direct_evaluation(seed in 0u64..1000, stmt in 0usize..25) {
        let fam = sample_families(seed, 1).pop().unwrap();
        let f = if stmt == 24 { ingleton_xy_zu() } else { enumerate_elementary()[stmt].delta_functional() };
        let ser = functional_series(&f, &fam, DEFAULT_ORDER).unwrap();
        let eps = 1e-4;
        prop_assert!((ser.eval(eps) - functional_at(&f, &fam, eps)).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn loglin_sign_agrees_with_float(x in loglin()) {
        let v = x.to_f64();
        if v.abs() > 1e-9 {
            prop_assert_eq!(loglin_sign(&x), v.signum() as i8);
        }
        prop_assert_eq!(loglin_sign(&(x.clone() - x.clone())), 0);
        prop_assert_eq!(loglin_sign(&-x.clone()), -loglin_sign(&x));
    }

    #[test]
    fn loglin_json_round_trips(x in loglin()) {
        let back: LogLin = serde_json::from_str(&serde_json::to_string(&x).unwrap()).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn factorization_multiplies_back(n in 1u64..1_000_000) {
        prop_assert_eq!(factorize(n).iter().map(|(p, e)| p.pow(*e)).product::<u64>(), n);
    }
}

#[test]
fn log_identities_are_exact_zeros() {
    let log = |n: i64| LogLin::log_of(&rat(n, 1));
    assert!((log(6) - log(2) - log(3)).is_zero());
    assert_eq!(loglin_sign(&(log(30) - LogLin::from_rational(rat(1, 1)))), 1);
    // 2^10 = 1024 > 1000 = 10^3
    let close = log(2).scale(&rat(10, 1)) - log(10).scale(&rat(3, 1));
    assert_eq!(loglin_sign(&close), 1);
}

#[test]
fn reference_family_has_a_valid_limit() {
    let limit = family_table(&reference_family()).at_zero().unwrap();
    for s in xz_yz_given_u() {
        assert!(holds_exact(&limit, &s));
    }
}

#[test]
fn certificate_is_negative_for_every_multiplier() {
    let cert = prove_essential(&xz_yz_given_u(), &reference_family(), DEFAULT_ORDER).unwrap();
    assert_eq!(cert.order, 1);
    let analytic = cert.conclusion_analytic.to_f64().abs();
    let assumed: f64 = cert.assumptions.iter().map(|(_, c)| c.to_f64().abs()).sum();
    let d = num_traits::ToPrimitive::to_f64(&cert.conclusion_logeps).unwrap();
    for lambda in [0.0, 1.0, 10.0, 100.0] {
        // log ε below −(|c| + λ·Σ|c_i| + 1)/d
        let eps = (-(analytic + lambda * assumed + 1.0) / d).exp();
        assert!(eps > 0.0);
        assert!(leading_coefficient(&cert, lambda, eps) < 0.0, "λ = {lambda}");
    }
}

#[test]
fn certificate_json_round_trips() {
    let cert = prove_essential(&xz_yz_given_u(), &reference_family(), DEFAULT_ORDER).unwrap();
    let back: EssentialCertificate = serde_json::from_str(&serde_json::to_string(&cert).unwrap()).unwrap();
    assert_eq!(back, cert);
}

#[test]
fn violated_assumption_in_the_limit_is_rejected() {
    let assumptions = [CIStatement::of(X, Y, &[])];
    let fam = CurveFamily::new(&[0, 15], &[], &[1], &[]).unwrap();
    assert!(matches!(prove_essential(&assumptions, &fam, DEFAULT_ORDER), Err(Error::LimitViolatesAssumptions(_))));
}

#[test]
fn bad_partitions_are_rejected() {
    assert!(CurveFamily::new(&[0], &[0], &[1], &[]).is_err());
    assert!(CurveFamily::new(&[], &[], &[1], &[]).is_err());
    assert!(CurveFamily::new(&[0], &[], &[], &[]).is_err());
    assert!(CurveFamily::new(&[16], &[], &[1], &[]).is_err());
    assert!(CurveFamily::from_json(r#"{"A": ["0000"], "B": [], "C": ["2222"]}"#).is_err());
}

#[test]
fn family_json_round_trips() {
    let fam = reference_family();
    assert_eq!(CurveFamily::from_json(&fam.to_json()).unwrap(), fam);
}

#[test]
fn seeded_sampling_finds_a_certificate() {
    let families = sample_families(0, 10_000);
    assert_eq!(families, sample_families(0, 10_000));
    let cert = find_certificate(&xz_yz_given_u(), &families, DEFAULT_ORDER).expect("certificate within 10 000 samples");
    assert!(cert.conclusion_logeps > rat(0, 1));
    assert!(prove_essential(&xz_yz_given_u(), &cert.family, DEFAULT_ORDER).is_ok());
}

#[test]
fn statement_y_independent_of_x_is_not_assumed() {
    assert!(!xz_yz_given_u().contains(&CIStatement::of(X, Y, &[])));
}
