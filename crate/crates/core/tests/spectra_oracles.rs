use hrcone::spectra::finite_difference::{channel_eigenvalues_fd, channel_eigenvalues_richardson};
use hrcone::spectra::shooting::channel_eigenvalues;
use hrcone::spectra::{cap_eigenvalues, hemisphere_eigenvalues, resolve_selection, LambdaSelection};
use std::f64::consts::{FRAC_PI_2, PI};

#[test]
fn cap_at_right_angle_is_hemisphere() {
    for n in [2u32, 3, 4] {
        // channel entries split degenerate hemisphere eigenvalues; compare distinct values
        let mut cap = cap_eigenvalues(n, FRAC_PI_2, 15, None).unwrap().values();
        cap.dedup_by(|a, b| (*a - *b).abs() <= 1e-8 * *b);
        let hemi = hemisphere_eigenvalues(n, 5).unwrap().values();
        assert!(cap.len() >= 5);
        for (c, h) in cap.iter().zip(&hemi) {
            assert!((c - h).abs() <= 1e-8 * h, "N={n}: {c} vs {h}");
        }
    }
}

#[test]
fn cap_counts_multiplicity_when_expanded() {
    let e = cap_eigenvalues(3, FRAC_PI_2, 3, None).unwrap().expanded();
    for (got, want) in e.iter().zip([2.0, 6.0, 6.0]) {
        assert!((got - want).abs() <= 1e-8 * want, "{e:?}");
    }
}

#[test]
fn arc_eigenvalues_closed_form() {
    let theta0 = 0.8;
    let got = cap_eigenvalues(2, theta0, 4, None).unwrap().values();
    for (k, v) in got.iter().enumerate() {
        let exact = ((k + 1) as f64 * PI / (2.0 * theta0)).powi(2);
        assert!((v - exact).abs() <= 1e-8 * exact, "{v} vs {exact}");
    }
}

#[test]
fn shooting_matches_finite_differences() {
    for (n, theta0) in [(3u32, 1.0), (4, 2.0), (5, 0.6), (3, 2.8)] {
        for ell in 0..3 {
            let shoot = channel_eigenvalues(n, theta0, ell, 3, None).unwrap();
            let fd = channel_eigenvalues_richardson(n, theta0, ell, 3, 2000).unwrap();
            let plain = channel_eigenvalues_fd(n, theta0, ell, 3, 2000).unwrap();
            for ((s, f), q) in shoot.iter().zip(&fd).zip(&plain) {
                assert!((s - f).abs() <= 1e-6 * s, "N={n} theta0={theta0} l={ell}: {s} vs {f}");
                assert!((s - q).abs() <= 1e-4 * s);
            }
        }
    }
}

#[test]
fn shrinking_the_cap_raises_the_principal_eigenvalue() {
    for n in [2u32, 3, 5] {
        let angles = [2.9, 2.5, 2.0, 1.5, 1.0, 0.7, 0.4];
        let principal: Vec<f64> = angles.iter().map(|&t| cap_eigenvalues(n, t, 1, None).unwrap().principal).collect();
        assert!(principal.windows(2).all(|w| w[1] > w[0]), "N={n}: {principal:?}");
    }
}

#[test]
fn resolved_cap_spectra_are_sorted_and_nonnegative() {
    let s = cap_eigenvalues(4, 1.2, 12, None).unwrap();
    for sel in [LambdaSelection::All, LambdaSelection::ExcludePrincipal, LambdaSelection::Tail(2)] {
        let e = resolve_selection(&s, &sel).unwrap();
        assert!(e.windows(2).all(|w| w[0].lambda <= w[1].lambda));
        assert!(e.iter().all(|x| x.lambda >= s.principal));
    }
    assert_eq!(s.principal, s.entries[0].lambda);
}
