//! Cross-validation of the cylinder-side closed forms against radial quadrature in x-space.

use super::{MarginReport, ReportInputs};
use crate::constants::{gamma_triple, ConeParams};
use crate::error::Result;
use crate::profiles::{moments, need, Profile1D};
use crate::quadrature::{integrate_breaks, QuadConfig};

/// Purely relative tolerance so that tiny integrals are still resolved.
fn identity_quad(cfg: &QuadConfig) -> QuadConfig {
    QuadConfig { abs_tol: 0.0, rel_tol: cfg.rel_tol.min(1e-11), max_subdivisions: cfg.max_subdivisions.max(20_000) }
}

/// Radial factor R(r) = r^s y(-log r), or r^s y(log r) when reflected.
struct Radial<'a> {
    profile: &'a Profile1D,
    s: f64,
    reflect: bool,
}

impl Radial<'_> {
    fn derivs(&self, r: f64) -> [f64; 3] {
        let t = -r.ln();
        let [y, mut yp, ypp] = if self.reflect { self.profile.eval(-t) } else { self.profile.eval(t) };
        if self.reflect {
            yp = -yp;
        }
        let s = self.s;
        let rs = r.powf(s);
        [rs * y, rs / r * (s * y - yp), rs / (r * r) * (s * (s - 1.0) * y - (2.0 * s - 1.0) * yp + ypp)]
    }

    fn breakpoints(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self
            .profile
            .breakpoints()
            .into_iter()
            .map(|t| if self.reflect { t.exp() } else { (-t).exp() })
            .collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }
}

fn laplacian(dim: f64, lambda: f64, r: f64, d: [f64; 3]) -> f64 {
    d[2] + (dim - 1.0) * d[1] / r - lambda * d[0] / (r * r)
}

fn inputs(p: &ConeParams, lambda: f64) -> ReportInputs {
    ReportInputs { dim: p.dim, alpha: p.alpha, lambda: Some(lambda), ..Default::default() }
}

/// Checks the three transform identities, plus the logarithmic ones for half-line profiles.
pub fn emden_fowler_check(p: &ConeParams, profile: &Profile1D, lambda: f64, cfg: &QuadConfig) -> Result<Vec<MarginReport>> {
    let q = identity_quad(cfg);
    let g = gamma_triple(p);
    let n = p.dim as f64;
    let a = p.alpha;
    let m = moments(profile, &q)?;
    let rad = Radial { profile, s: (4.0 - n - a) / 2.0, reflect: false };
    let pts = rad.breakpoints();
    let x_u2 = integrate_breaks(|r| r.powf(a - 4.0 + n - 1.0) * rad.derivs(r)[0].powi(2), &pts, &q)?;
    let x_grad = integrate_breaks(
        |r| {
            let d = rad.derivs(r);
            r.powf(a - 2.0 + n - 1.0) * (d[1] * d[1] + lambda * d[0] * d[0] / (r * r))
        },
        &pts,
        &q,
    )?;
    let x_lap = integrate_breaks(|r| r.powf(a + n - 1.0) * laplacian(n, lambda, r, rad.derivs(r)).powi(2), &pts, &q)?;
    let gh2 = g.gamma_hat * g.gamma_hat;
    let cyl_grad = (lambda + gh2) * m.m0 + m.m1;
    let cyl_lap = (lambda + g.gamma).powi(2) * m.m0 + m.m2 + 2.0 * (lambda + g.gamma_bar) * m.m1;
    let inp = inputs(p, lambda);
    let mut out = vec![
        MarginReport::identity("ef_u2", x_u2, m.m0, inp.clone()),
        MarginReport::identity("ef_grad", x_grad, cyl_grad, inp.clone()),
        MarginReport::identity("ef_lap", x_lap, cyl_lap, inp.clone()),
    ];
    if !profile.compact_in_positive() {
        return Ok(out);
    }
    let (w20, w21, w40, x) = (need(m.w2_0)?, need(m.w2_1)?, need(m.w4_0)?, need(m.cross)?);
    let log_grad = |rad: &Radial, r: f64| {
        let d = rad.derivs(r);
        r.powf(a - 2.0 + n - 1.0) * (d[1] * d[1] + lambda * d[0] * d[0] / (r * r)) / r.ln().powi(2)
    };
    let x_ln = integrate_breaks(|r| log_grad(&rad, r), &pts, &q)?;
    let x_lns = integrate_breaks(|r| r.powf(a - 4.0 + n - 1.0) * lambda * rad.derivs(r)[0].powi(2) / r.ln().powi(2), &pts, &q)?;
    let x_lu2 = integrate_breaks(|r| r.powf(a - 4.0 + n - 1.0) * rad.derivs(r)[0].powi(2) / r.ln().powi(2), &pts, &q)?;
    let x_lu4 = integrate_breaks(|r| r.powf(a - 4.0 + n - 1.0) * rad.derivs(r)[0].powi(2) / r.ln().powi(4), &pts, &q)?;
    let ext = Radial { reflect: true, ..rad };
    let x_ln_ext = integrate_breaks(|r| log_grad(&ext, r), &ext.breakpoints(), &q)?;
    let cyl_ln = lambda * w20 + w21 + 2.0 * g.gamma_hat * x + gh2 * w20;
    let cyl_ln_ext = lambda * w20 + w21 - 2.0 * g.gamma_hat * x + gh2 * w20;
    out.extend([
        MarginReport::identity("log_nabla", x_ln, cyl_ln, inp.clone()),
        MarginReport::identity("log_nabla_sigma", x_lns, lambda * w20, inp.clone()),
        MarginReport::identity("log_u2", x_lu2, w20, inp.clone()),
        MarginReport::identity("log_u4", x_lu4, w40, inp.clone()),
        MarginReport::identity("log_nabla_exterior", x_ln_ext, cyl_ln_ext, inp),
    ]);
    Ok(out)
}

fn worst(name: &str, hat: f64, plain: f64, cylinder: f64, inp: ReportInputs) -> MarginReport {
    let a = MarginReport::identity(name, hat, plain, inp.clone());
    let b = MarginReport::identity(name, hat, cylinder, inp);
    if b.margin < a.margin {
        MarginReport { lhs: hat, rhs: plain, ..b }
    } else {
        a
    }
}

/// Checks the three Kelvin identities for u with weight-(4 - alpha) profile y, so that the
/// Kelvin image carries the weight-alpha profile y(-t).
pub fn kelvin_check(p: &ConeParams, profile: &Profile1D, lambda: f64, cfg: &QuadConfig) -> Result<Vec<MarginReport>> {
    let q = identity_quad(cfg);
    let g = gamma_triple(p);
    let n = p.dim as f64;
    let a = p.alpha;
    let m = moments(profile, &q)?;
    let rad = Radial { profile, s: (a - n) / 2.0, reflect: false };
    let pts = rad.breakpoints();
    let hat_pts: Vec<f64> = pts.iter().rev().map(|r| if *r == 0.0 { f64::INFINITY } else { 1.0 / r }).collect();
    // u hat(r) = r^{2-N} R(1/r), differentiated by the chain rule
    let hat = |r: f64| -> [f64; 3] {
        let rho = 1.0 / r;
        let [f, fp, fpp] = rad.derivs(rho);
        let rn = r.powf(-n);
        [
            r * r * rn * f,
            (2.0 - n) * r * rn * f - rn * fp,
            (n - 2.0) * (n - 1.0) * rn * f + (2.0 * n - 2.0) * rn / r * fp + rn / (r * r) * fpp,
        ]
    };
    let u2_hat = integrate_breaks(|r| r.powf(a - 4.0 + n - 1.0) * hat(r)[0].powi(2), &hat_pts, &q)?;
    let u2 = integrate_breaks(|r| r.powf(-a + n - 1.0) * rad.derivs(r)[0].powi(2), &pts, &q)?;
    let lap_hat = integrate_breaks(|r| r.powf(a + n - 1.0) * laplacian(n, lambda, r, hat(r)).powi(2), &hat_pts, &q)?;
    let lap = integrate_breaks(|r| r.powf(4.0 - a + n - 1.0) * laplacian(n, lambda, r, rad.derivs(r)).powi(2), &pts, &q)?;
    let grad_hat = integrate_breaks(
        |r| {
            let d = hat(r);
            r.powf(a - 2.0 + n - 1.0) * (d[1] * d[1] + lambda * d[0] * d[0] / (r * r))
        },
        &hat_pts,
        &q,
    )?;
    let grad = integrate_breaks(
        |r| {
            let d = rad.derivs(r);
            r.powf(2.0 - a + n - 1.0) * (d[1] * d[1] + lambda * d[0] * d[0] / (r * r))
        },
        &pts,
        &q,
    )?;
    let correction = (n - 2.0) * (a - 2.0) * u2;
    let cyl_lap = (lambda + g.gamma).powi(2) * m.m0 + m.m2 + 2.0 * (lambda + g.gamma_bar) * m.m1;
    let cyl_grad = (lambda + g.gamma_hat * g.gamma_hat) * m.m0 + m.m1;
    let inp = inputs(p, lambda);
    Ok(vec![
        worst("kelvin_u2", u2_hat, u2, m.m0, inp.clone()),
        worst("kelvin_lap", lap_hat, lap, cyl_lap, inp.clone()),
        worst("kelvin_grad", grad_hat, grad + correction, cyl_grad, inp),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_pass(reports: &[MarginReport]) {
        for r in reports {
            assert!(r.pass, "{} x={} cyl={} margin={}", r.inequality_id, r.lhs, r.rhs, r.margin);
        }
    }

    #[test]
    fn radial_bump_identities() {
        let p = ConeParams::new(3, 0.0).unwrap();
        let reports = emden_fowler_check(&p, &Profile1D::bump(1.5, 0.5).unwrap(), 0.0, &QuadConfig::default()).unwrap();
        assert_eq!(reports.len(), 8);
        all_pass(&reports);
        for r in &reports {
            assert!(r.margin > -1e-8);
        }
    }

    #[test]
    fn angular_modes_and_full_line_profiles() {
        let cfg = QuadConfig::default();
        for (n, a, l) in [(4, 1.0, 3.0), (5, -1.0, 5.0), (3, 3.0, 6.0)] {
            let p = ConeParams::new(n, a).unwrap();
            all_pass(&emden_fowler_check(&p, &Profile1D::bump(-0.5, 1.2).unwrap(), l, &cfg).unwrap());
            all_pass(&emden_fowler_check(&p, &Profile1D::bump(2.0, 1.0).unwrap(), l, &cfg).unwrap());
        }
    }

    #[test]
    fn kelvin_identities() {
        let cfg = QuadConfig::default();
        let p = ConeParams::new(3, 0.0).unwrap();
        let r = kelvin_check(&p, &Profile1D::bump(0.3, 1.0).unwrap(), 2.0, &cfg).unwrap();
        assert_eq!(r.len(), 3);
        all_pass(&r);
        // at alpha = 2 the gradient correction vanishes
        let p2 = ConeParams::new(5, 2.0).unwrap();
        all_pass(&kelvin_check(&p2, &Profile1D::bump(-1.0, 0.8).unwrap(), 0.0, &cfg).unwrap());
    }
}
