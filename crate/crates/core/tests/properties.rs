use hrcone::constants::{gamma_triple, hr_term, p_alpha, ConeParams};
use hrcone::profiles::{moments, need, EndCondition, Profile1D};
use hrcone::quadrature::QuadConfig;
use hrcone::sharpness::quotient_f;
use hrcone::spectra::{domain_spectrum, LambdaSelection, SphericalDomain};
use hrcone::verifier::{emden_fowler_check, kelvin_check, Angular, CylinderTestFunction, InequalityId, InequalitySetup, Mode, Region};
use num::rational::BigRational;
use num::{BigInt, One, Zero};
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn bump() -> impl Strategy<Value = Profile1D> {
    (0.6f64..4.0, 0.1f64..1.5).prop_map(|(c, r)| Profile1D::bump(c, r.min(c - 0.05)).unwrap())
}

/// Splines on a positive interval with clamped ends and random interior values.
fn positive_spline() -> impl Strategy<Value = Profile1D> {
    (0.2f64..2.0, 0.5f64..3.0, prop::collection::vec(-1.0f64..1.0, 2..6)).prop_map(|(start, len, inner)| {
        let n = inner.len() + 1;
        let mut pts = vec![(start, 0.0)];
        for (i, v) in inner.iter().enumerate() {
            let bump = if i == 0 { 0.5 } else { 0.0 };
            pts.push((start + len * (i + 1) as f64 / n as f64, v + bump));
        }
        pts.push((start + len, 0.0));
        Profile1D::spline(&pts, EndCondition::Clamped, EndCondition::Clamped).unwrap()
    })
}

fn params() -> impl Strategy<Value = ConeParams> {
    (2u32..9, -3.0f64..6.0).prop_map(|(n, a)| ConeParams::new(n, a).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gamma_identities_exact(n in 2u32..40, num in -200i64..200, den in 1i64..50) {
        let p = ConeParams::new(n, rat(num, den)).unwrap();
        let g = gamma_triple(&p);
        let two = rat(2, 1);
        let a = (rat(n as i64, 1) - &two) / &two;
        let b = (rat(num, den) - &two) / &two;
        prop_assert_eq!(&g.gamma + &g.gamma_bar, &a * &a * &two);
        prop_assert_eq!(&g.gamma_bar - &g.gamma, &b * &b * &two);
        prop_assert_eq!(&g.gamma_hat * (&a - &b), g.gamma.clone());
        // 2 gamma_bar - gamma_hat^2 = (a - b)^2
        prop_assert_eq!(&g.gamma_bar * &two - &g.gamma_hat * &g.gamma_hat, (&a - &b) * (&a - &b));
    }

    #[test]
    fn two_bd_minus_ae_is_p_alpha(n in 2u32..30, num in -100i64..100, den in 1i64..20, ln in 0i64..500, ld in 1i64..10) {
        let p = ConeParams::new(n, rat(num, den)).unwrap();
        let l = rat(ln, ld);
        let g = gamma_triple(&p);
        let direct = rat(2, 1) * (&l + &g.gamma_bar) * (&l + &g.gamma_hat * &g.gamma_hat) - (&l + &g.gamma) * (&l + &g.gamma);
        prop_assert_eq!(direct, p_alpha(&p, &l));
    }

    #[test]
    fn hr_term_zero_limit(n in 2u32..30, num in -100i64..100, den in 1i64..20) {
        let p = ConeParams::new(n, rat(num, den)).unwrap();
        let g = gamma_triple(&p);
        if !g.gamma_hat.is_zero() {
            let lim = &g.gamma * &g.gamma / (&g.gamma_hat * &g.gamma_hat);
            prop_assert_eq!(lim, hr_term(&p, &BigRational::zero()));
        }
        prop_assert!(hr_term(&p, &BigRational::one()) >= BigRational::zero());
    }

    #[test]
    fn quotient_nondecreasing_in_eps2(p in params(), lambda in 0.0f64..40.0, y in bump()) {
        let m = moments(&y, &QuadConfig::default()).unwrap();
        let mut prev = quotient_f(&p, lambda, &m, 0.0).unwrap_or(f64::NEG_INFINITY);
        for k in -8..=3 {
            let e2 = 10f64.powf(k as f64 / 2.0);
            let q = quotient_f(&p, lambda, &m, e2).unwrap();
            prop_assert!(q >= prev - 1e-12 * q.abs().max(1.0), "f({e2}) = {q} < {prev}");
            prev = q;
        }
    }

    #[test]
    fn two_bd_minus_ae_float(p in params(), lambda in 0.0f64..40.0, y in bump()) {
        let m = moments(&y, &QuadConfig::default()).unwrap();
        let g = gamma_triple(&p);
        let gh2 = g.gamma_hat * g.gamma_hat;
        let direct = (2.0 * (lambda + g.gamma_bar) * (lambda + gh2) - (lambda + g.gamma).powi(2)) * m.m0 * m.m1;
        let via_p = p_alpha(&p, &lambda) * m.m0 * m.m1;
        prop_assert!((direct - via_p).abs() <= 1e-10 * via_p.abs().max(direct.abs()).max(1e-300));
    }

    #[test]
    fn moment_scaling_laws(y in bump(), eps in 0.2f64..3.0) {
        let cfg = QuadConfig::default();
        let m = moments(&y, &cfg).unwrap();
        let direct = moments(&y.scaled(eps).unwrap(), &cfg).unwrap();
        let law = m.scaled(eps);
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-8 * a.abs().max(b.abs());
        prop_assert!(close(direct.m0, law.m0) && close(direct.m1, law.m1) && close(direct.m2, law.m2));
        prop_assert!(close(need(direct.w2_0).unwrap(), need(law.w2_0).unwrap()));
        prop_assert!(close(need(direct.w4_0).unwrap(), need(law.w4_0).unwrap()));
        prop_assert!(close(need(direct.w2_1).unwrap(), need(law.w2_1).unwrap()));
    }

    #[test]
    fn oned_hardy_rellich_margins(y in prop_oneof![bump(), positive_spline()]) {
        let m = moments(&y, &QuadConfig::default()).unwrap();
        let w20 = need(m.w2_0).unwrap();
        let w40 = need(m.w4_0).unwrap();
        prop_assert!(m.m0 > 0.0);
        prop_assert!((m.m1 - 0.25 * w20) / w20 >= -1e-10);
        prop_assert!((m.m2 - 9.0 / 16.0 * w40) / w40 >= -1e-10);
    }

    #[test]
    fn identities_hold(n in 3u32..6, alpha in -1.0f64..3.5, j in 0u32..4, y in bump()) {
        let p = ConeParams::new(n, alpha).unwrap();
        let lambda = (j * (j + n - 2)) as f64;
        let cfg = QuadConfig::default();
        for r in emden_fowler_check(&p, &y, lambda, &cfg).unwrap().into_iter().chain(kelvin_check(&p, &y, lambda, &cfg).unwrap()) {
            prop_assert!(r.pass, "{} discrepancy {}", r.inequality_id, -r.margin);
        }
    }
}

#[test]
fn multi_mode_additivity() {
    let cfg = QuadConfig::default();
    let p = ConeParams::new(4, 1.0).unwrap();
    let spectrum = domain_spectrum(4, SphericalDomain::Hemisphere, 6).unwrap();
    for id in [InequalityId::Nd, InequalityId::Nd2, InequalityId::Nav] {
        let setup = InequalitySetup::new(id, &p, SphericalDomain::Hemisphere, &LambdaSelection::All).unwrap();
        let modes: Vec<Mode> = spectrum
            .entries
            .iter()
            .take(4)
            .enumerate()
            .map(|(i, e)| Mode {
                angular: Angular::Eigen { lambda: e.lambda, label: e.label },
                profile: Profile1D::bump(1.5 + 0.3 * i as f64, 0.8 + 0.1 * i as f64).unwrap(),
                coefficient: 0.7 - 0.4 * i as f64,
            })
            .collect();
        let all = setup.evaluate(&CylinderTestFunction::new(modes.clone(), Region::Inner).unwrap(), &cfg).unwrap();
        let parts: Vec<_> = modes
            .into_iter()
            .map(|m| setup.evaluate(&CylinderTestFunction::new(vec![m], Region::Inner).unwrap(), &cfg).unwrap())
            .collect();
        let sum = |f: fn(&hrcone::verifier::Terms) -> f64| parts.iter().map(f).sum::<f64>();
        for (total, pieces) in [(all.f, sum(|t| t.f)), (all.g, sum(|t| t.g)), (all.w20, sum(|t| t.w20)), (all.w40, sum(|t| t.w40))] {
            assert!((total - pieces).abs() <= 1e-10 * total.abs().max(1e-300), "{id}: {total} vs {pieces}");
        }
        let rhs_sum: f64 = parts.iter().map(|t| setup.rhs(t)).sum();
        assert!((setup.rhs(&all) - rhs_sum).abs() <= 1e-10 * rhs_sum.abs());
    }
}
