use proptest::prelude::*;
use pwlab_core::einstein::*;
use pwlab_core::fixtures::{e2, e3, flat};
use pwlab_core::projective::{polynomial_solutions, ProjectiveSolution, SolutionKind};
use pwlab_core::pwext::build;
use pwlab_core::symcore::{parse_field, q, Rsf};
use pwlab_core::Error;

fn scale(s: &str, n: usize) -> ConformalScale {
    ConformalScale::new(parse_field(s, n).unwrap())
}

fn euler(n: usize, comps: &[&str]) -> ProjectiveSolution {
    let c = comps.iter().map(|s| parse_field(s, n).unwrap()).collect();
    ProjectiveSolution::from_components(SolutionKind::EulerField, n, c).unwrap()
}

fn ricciflat(n: usize, s: &str) -> ProjectiveSolution {
    ProjectiveSolution::from_components(SolutionKind::RicciFlatScale, n, vec![parse_field(s, n).unwrap()]).unwrap()
}

#[test]
fn flat_residuals() {
    let pw = build(&flat(3)).unwrap();
    for s in ["1", "x1*p1 + x2*p2 + x3*p3", "1 + x1*p1 + x2*p2 + x3*p3", "p2 + x1"] {
        assert!(aes_residual(&pw, &scale(s, 3)).unwrap().is_zero(), "{s}");
    }
    assert!(!aes_residual(&pw, &scale("p1^2", 3)).unwrap().is_zero());
}

#[test]
fn e2_constant_scale_residual_is_schouten() {
    let pw = build(&e2()).unwrap();
    let r = aes_residual(&pw, &scale("1", 2)).unwrap();
    // P_AB dx^A dx^B with P_11 = 1
    assert_eq!(r.residual_string(), "[1,1]=1");
    assert_eq!(r, pw.curvature().schouten.clone());
}

#[test]
fn lift_minus_on_ricci_flat_base() {
    let pw = build(&e3()).unwrap();
    let s = lift_minus(&pw, &ricciflat(3, "1")).unwrap();
    assert_eq!(s.value(), &Rsf::one());
    assert!(aes_residual(&pw, &s).unwrap().is_zero());
    assert!(pw.curvature().schouten.is_zero());
    assert_eq!(lie_derivative_scale(&pw, &s), -s.value());
    assert!(lift_minus(&build(&flat(2)).unwrap(), &ricciflat(2, "1")).is_ok());
}

#[test]
fn lift_minus_rejects_non_solution() {
    let pw = build(&e2()).unwrap();
    match lift_minus(&pw, &ricciflat(2, "1")) {
        Err(Error::Precondition(m)) => assert!(m.contains("ricciflat-scale equation"), "{m}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn lift_plus_flat() {
    let pw = build(&flat(2)).unwrap();
    let s = lift_plus(&pw, &euler(2, &["x1", "x2"])).unwrap();
    assert_eq!(s.value(), &parse_field("x1*p1 + x2*p2", 2).unwrap());
    assert!(aes_residual(&pw, &s).unwrap().is_zero());
    assert_eq!(&lie_derivative_scale(&pw, &s), s.value());
    let s = lift_plus(&pw, &euler(2, &["3", "-1"])).unwrap();
    assert_eq!(s.value(), &parse_field("3*p1 - p2", 2).unwrap());
    assert!(aes_residual(&pw, &s).unwrap().is_zero());
}

#[test]
fn lift_plus_rejects_non_euler() {
    let pw = build(&flat(2)).unwrap();
    match lift_plus(&pw, &euler(2, &["x1^2", "0"])) {
        Err(Error::Precondition(m)) => assert!(m.contains("euler-field equation"), "{m}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn e3_euler_fields_lift() {
    let d = e3();
    let pw = build(&d).unwrap();
    let sols = polynomial_solutions(&d, SolutionKind::EulerField, 2).unwrap();
    assert!(!sols.is_empty());
    for xi in &sols {
        let (a, b) = lift_plus_summands(&d, xi).unwrap();
        assert!(a.is_zero() && b.is_zero());
        let s = lift_plus(&pw, xi).unwrap();
        assert!(aes_residual(&pw, &s).unwrap().is_zero());
        assert_eq!(&lie_derivative_scale(&pw, &s), s.value());
        assert!(rescaled_schouten_trace_cleared(&pw, &s).unwrap().is_zero());
    }
}

#[test]
fn decompose_examples() {
    let pw = build(&flat(2)).unwrap();
    let dec = decompose_scale(&pw, &scale("1 + x1*p1 + x2*p2", 2)).unwrap();
    assert_eq!(dec.minus.value(), &Rsf::one());
    assert_eq!(dec.plus.value(), &parse_field("x1*p1 + x2*p2", 2).unwrap());
    assert_eq!(dec.xi, Some(euler(2, &["x1", "x2"])));
    assert_eq!(dec.sigma, Some(ricciflat(2, "1")));

    let dec = decompose_scale(&pw, &scale("x1*p1 + x2*p2", 2)).unwrap();
    assert!(dec.minus.is_zero() && dec.sigma.is_none());

    let pw = build(&e3()).unwrap();
    let dec = decompose_scale(&pw, &scale("1", 3)).unwrap();
    assert!(dec.plus.is_zero() && dec.xi.is_none());
    assert_eq!(dec.sigma, Some(ricciflat(3, "1")));
}

#[test]
fn decompose_rejects_non_einstein() {
    let pw = build(&flat(2)).unwrap();
    assert!(matches!(decompose_scale(&pw, &scale("p1^2", 2)), Err(Error::Precondition(_))));
    let pw = build(&e2()).unwrap();
    assert!(decompose_scale(&pw, &scale("1", 2)).is_err());
}

/// Every sum of lifted basis solutions decomposes back into its summands.
fn round_trip(d: &pwlab_core::projective::AffineConnection) {
    let pw = build(d).unwrap();
    let n = d.n();
    let xis = polynomial_solutions(d, SolutionKind::EulerField, 2).unwrap();
    let sigmas = polynomial_solutions(d, SolutionKind::RicciFlatScale, 2).unwrap();
    assert!(!xis.is_empty() && !sigmas.is_empty());
    for xi in &xis {
        for sigma in &sigmas {
            let plus = lift_plus(&pw, xi).unwrap();
            let minus = lift_minus(&pw, sigma).unwrap();
            let sum = plus.add(&minus);
            assert!(aes_residual(&pw, &sum).unwrap().is_zero());
            assert!(kk_hessian(&pw, &sum).unwrap().is_zero());
            for part in [&plus, &minus] {
                assert!(rescaled_schouten_trace_cleared(&pw, part).unwrap().is_zero());
            }
            let dec = decompose_scale(&pw, &sum).unwrap();
            assert_eq!(dec.xi.as_ref(), Some(xi), "n={n}");
            assert_eq!(dec.sigma.as_ref(), Some(sigma));
        }
    }
}

#[test]
fn round_trip_flat_and_e3() {
    round_trip(&flat(2));
    round_trip(&flat(3));
    round_trip(&e3());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_flat_scales_round_trip(a in -3i64..4, b in -3i64..4, c in -3i64..4, e in -3i64..4, f in -3i64..4) {
        let pw = build(&flat(2)).unwrap();
        let xi = euler(2, &[&format!("{a} + {c}*x1"), &format!("{b} + {c}*x2")]);
        let sigma = ricciflat(2, &format!("{e}*x1 + {f}*x2 + 1"));
        let sum = lift_plus(&pw, &xi).unwrap().add(&lift_minus(&pw, &sigma).unwrap());
        let dec = decompose_scale(&pw, &sum).unwrap();
        prop_assert_eq!(dec.sigma, Some(sigma));
        if a == 0 && b == 0 && c == 0 {
            prop_assert!(dec.xi.is_none());
        } else {
            prop_assert_eq!(dec.xi, Some(xi));
        }
        prop_assert_eq!(kk_hessian(&pw, &sum).unwrap(), Rsf::zero());
        let l = lie_derivative_scale(&pw, &dec.plus);
        prop_assert_eq!(l, dec.plus.value().scale(&q(1, 1)));
    }
}
