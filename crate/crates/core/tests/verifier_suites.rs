use hrcone::cone::{resolve_lambdas, Objective};
use hrcone::constants::{navier_coefficients, ConeParams};
use hrcone::quadrature::QuadConfig;
use hrcone::spectra::{cap_eigenvalues, LambdaSelection, SphericalDomain};
use hrcone::verifier::resonance::resonant_alphas;
use hrcone::verifier::{dirichlet_estimate, random_test_suite, resonance_report, InequalityId};
use std::f64::consts::FRAC_PI_3;

fn navier_constant(p: &ConeParams, domain: SphericalDomain) -> f64 {
    let lambdas: Vec<f64> =
        resolve_lambdas(p, domain, &LambdaSelection::All, Objective::HardyRellich).unwrap().iter().map(|e| e.lambda).collect();
    navier_coefficients(p, &lambdas).unwrap().a0
}

#[test]
fn hr_suite_on_the_sphere() {
    let p = ConeParams::new(5, 0.0).unwrap();
    let s = random_test_suite(InequalityId::Hr, &p, SphericalDomain::FullSphere, &LambdaSelection::All, 100, 42, &QuadConfig::default())
        .unwrap();
    assert_eq!(s.passed, 100, "min margin {}", s.min_margin);
}

#[test]
fn nd2_suite_on_the_hemisphere() {
    let p = ConeParams::new(3, 1.0).unwrap();
    let s =
        random_test_suite(InequalityId::Nd2, &p, SphericalDomain::Hemisphere, &LambdaSelection::All, 100, 7, &QuadConfig::default())
            .unwrap();
    assert_eq!(s.passed, 100, "min margin {}", s.min_margin);
}

#[test]
fn suites_are_reproducible() {
    let p = ConeParams::new(4, 0.5).unwrap();
    let cfg = QuadConfig::default();
    let run = || random_test_suite(InequalityId::Nav, &p, SphericalDomain::cap(1.2).unwrap(), &LambdaSelection::All, 20, 99, &cfg).unwrap();
    let (a, b) = (run(), run());
    assert_eq!(a, b);
    assert!(a.pass);
}

#[test]
fn estimate_dominates_navier_and_refines_downward() {
    for (n, alpha, theta0) in [(3u32, 0.0, FRAC_PI_3), (3, 1.0, FRAC_PI_3), (4, 2.0, 1.0), (5, -1.0, 2.0)] {
        let p = ConeParams::new(n, alpha).unwrap();
        let est = dirichlet_estimate(&p, theta0, 4, 200).unwrap();
        let nav = navier_constant(&p, SphericalDomain::cap(theta0).unwrap());
        assert!(est.mu0 > nav, "N={n} alpha={alpha}: {} vs {nav}", est.mu0);
        assert!(est.mu0 <= est.refinement.coarse_mu0 * (1.0 + 1e-12));
        assert!(est.per_mode.iter().all(|c| c.mu0 >= est.mu0));
    }
}

#[test]
fn estimate_positive_at_resonance() {
    let theta0 = FRAC_PI_3;
    let lambda1 = cap_eigenvalues(3, theta0, 1, None).unwrap().principal;
    let alpha = resonant_alphas(3, lambda1)[1];
    let p = ConeParams::new(3, alpha).unwrap();
    let domain = SphericalDomain::cap(theta0).unwrap();
    let spectrum = cap_eigenvalues(3, theta0, 8, None).unwrap();
    assert!(resonance_report(&p, &spectrum, &LambdaSelection::All).unwrap().resonant);
    assert!(navier_constant(&p, domain).abs() < 1e-9);
    let est = dirichlet_estimate(&p, theta0, 4, 200).unwrap();
    assert!(est.mu0 > 1e-3, "{}", est.mu0);
}
