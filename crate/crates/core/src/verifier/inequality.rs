//! Margins of every inequality, assembled mode by mode from the cylinder closed forms.

use super::dirichlet::DirichletSpace;
use super::{Angular, CylinderTestFunction, InequalityId, MarginReport, Mode, Region, ReportInputs};
use crate::cone::{resolve_lambdas, Objective};
use crate::constants::{
    dirichlet_conelike_coefficients, gamma_triple, hardy_rellich_constant, nd_coefficients, nd_log_coefficients,
    punctured_ball_coefficients, schmincke_coefficients, ConeParams, GammaTriple,
};
use crate::error::{Error, Result};
use crate::profiles::{moments, need, Profile1D};
use crate::quadrature::QuadConfig;
use crate::spectra::{domain_spectrum, resolve_selection, LambdaSelection, SpectrumEntry, SphericalDomain, CAP_MEMBERSHIP_TOL};
use serde::Serialize;
use std::sync::Arc;

/// Default discretization backing the Dirichlet inequality.
pub const DIR_ELL_MAX: u32 = 4;
pub const DIR_GRID: usize = 200;

/// Right-hand-side coefficients of one inequality.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RhsCoefficients {
    pub a0: f64,
    pub argmin_lambda: Option<f64>,
    pub lambda_min: f64,
    /// Weight of the log-squared L2 term (A2, kappa, K or kappa0 depending on the id).
    pub log_u2: f64,
    /// (N - 2)(2 - alpha), the zero-order factor of the reflected inequality.
    pub zero_order_factor: f64,
}

/// Everything about an inequality that does not depend on the test function.
#[derive(Clone, Debug)]
pub struct InequalitySetup {
    pub id: InequalityId,
    pub params: ConeParams,
    pub domain: SphericalDomain,
    pub selection: LambdaSelection,
    /// Truncated selection (for the reflected weight when the id is SCH).
    pub lambdas: Vec<SpectrumEntry>,
    pub principal: f64,
    pub coeffs: RhsCoefficients,
    pub dirichlet: Option<Arc<DirichletSpace>>,
}

impl InequalitySetup {
    pub fn new(id: InequalityId, p: &ConeParams, domain: SphericalDomain, selection: &LambdaSelection) -> Result<Self> {
        let space = if id == InequalityId::Dir {
            let theta0 = dir_theta0(domain)?;
            Some(Arc::new(DirichletSpace::build(p, theta0, DIR_ELL_MAX, DIR_GRID)?))
        } else {
            None
        };
        Self::with_space(id, p, domain, selection, space)
    }

    pub fn with_space(
        id: InequalityId,
        p: &ConeParams,
        domain: SphericalDomain,
        selection: &LambdaSelection,
        dirichlet: Option<Arc<DirichletSpace>>,
    ) -> Result<Self> {
        if id == InequalityId::Pb && domain != SphericalDomain::FullSphere {
            return Err(Error::DomainMismatch(format!("PB lives on the punctured ball, got {domain}")));
        }
        if id == InequalityId::Dir {
            dir_theta0(domain)?;
            if *selection != LambdaSelection::All {
                return Err(Error::SelectionViolation(
                    "clamped angular factors carry no orthogonality constraint; DIR uses the selection 'all'".into(),
                ));
            }
        }
        let reflected = if id == InequalityId::Sch { p.reflected() } else { p.clone() };
        let lambdas = resolve_lambdas(&reflected, domain, selection, Objective::HardyRellich)?;
        let values: Vec<f64> = lambdas.iter().map(|e| e.lambda).collect();
        let principal = domain_spectrum(p.dim, domain, 1)?.principal;
        let lambda_min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let mu = hardy_rellich_constant(p, &values)?;
        let coeffs = match id {
            InequalityId::Hr => RhsCoefficients::plain(mu.value, Some(mu.argmin_lambda), lambda_min),
            InequalityId::Nd => {
                let c = nd_coefficients(p, &values)?;
                RhsCoefficients { log_u2: c.a2, ..RhsCoefficients::plain(c.a0, Some(c.mu.argmin_lambda), lambda_min) }
            }
            InequalityId::Nd2 | InequalityId::Nav => {
                let c = nd_log_coefficients(p, &values)?;
                RhsCoefficients { log_u2: c.kappa, ..RhsCoefficients::plain(c.a0, Some(c.mu.argmin_lambda), lambda_min) }
            }
            InequalityId::Pb => {
                let c = punctured_ball_coefficients(p, &domain, &values)?;
                RhsCoefficients { log_u2: c.k, ..RhsCoefficients::plain(c.a0, Some(c.mu.argmin_lambda), lambda_min) }
            }
            InequalityId::Sch => {
                let c = schmincke_coefficients(p, &values)?;
                RhsCoefficients {
                    zero_order_factor: (p.dim as f64 - 2.0) * (2.0 - p.alpha),
                    ..RhsCoefficients::plain(c.grad_coeff, Some(c.reflected.argmin_lambda), lambda_min)
                }
            }
            InequalityId::Dir => {
                let space = dirichlet.as_ref().ok_or_else(|| Error::InvalidParams("DIR needs a clamped space".into()))?;
                if space.params != *p || Some(space.theta0) != domain_theta0(domain) {
                    return Err(Error::InvalidParams("clamped space built for different parameters".into()));
                }
                let c = dirichlet_conelike_coefficients(p, &values, space.mu0)?;
                RhsCoefficients { log_u2: c.kappa0, ..RhsCoefficients::plain(c.a0, None, lambda_min) }
            }
        };
        Ok(InequalitySetup { id, params: p.clone(), domain, selection: selection.clone(), lambdas, principal, coeffs, dirichlet })
    }

    fn inputs(&self) -> ReportInputs {
        ReportInputs {
            dim: self.params.dim,
            alpha: self.params.alpha,
            domain: self.domain.to_string(),
            selection: self.selection.to_string(),
            ..Default::default()
        }
    }

    fn check_membership(&self, angular: &Angular) -> Result<()> {
        let (lambda, label) = match angular {
            Angular::Eigen { lambda, label } => (*lambda, *label),
            Angular::Clamped { ell, .. } => {
                let space = self.dirichlet.as_ref();
                return match space.and_then(|s| s.channel(*ell)) {
                    Some(_) if self.id == InequalityId::Dir => Ok(()),
                    _ => Err(Error::BoundaryClassViolation(format!("clamped factor l={ell} not available for {}", self.id))),
                };
            }
        };
        if self.id == InequalityId::Dir {
            return Err(Error::BoundaryClassViolation("DIR needs doubly clamped angular factors".into()));
        }
        if self.lambdas.iter().any(|e| e.label == label && same_value(e.lambda, lambda, self.domain)) {
            return Ok(());
        }
        let violation = || Error::SelectionViolation(format!("mode {label} (lambda = {lambda}) is outside {}", self.selection));
        let entry = resolve_lambdas(&self.params, self.domain, &LambdaSelection::Singleton(lambda), Objective::HardyRellich)
            .map_err(|_| violation())?
            .remove(0);
        if entry.label != label {
            return Err(violation());
        }
        let ok = match &self.selection {
            LambdaSelection::All => true,
            LambdaSelection::Tail(k) => label.degree() >= *k,
            LambdaSelection::ExcludePrincipal => entry.lambda != self.principal,
            LambdaSelection::Explicit(_) | LambdaSelection::Singleton(_) => false,
        };
        if ok {
            Ok(())
        } else {
            Err(violation())
        }
    }

    fn check_profile(&self, profile: &Profile1D, region: Region) -> Result<()> {
        let (a, b) = profile.support();
        let bad = |why: &str| Err(Error::BoundaryClassViolation(format!("{}: {why}", self.id)));
        if self.id.full_line() {
            if region != Region::FullLine {
                return bad("whole-cone inequality needs a full-line test");
            }
            if !(a.is_finite() && b.is_finite()) {
                return bad("profile must have compact support");
            }
            return Ok(());
        }
        if region == Region::FullLine {
            return bad("cone-like domain needs an inner or exterior test");
        }
        match self.id {
            InequalityId::Nav => {
                if !(a >= 0.0 && b.is_finite()) {
                    return bad("profile must live on [0, T] and vanish at 0");
                }
                if a == 0.0 && profile.eval(0.0)[0] != 0.0 {
                    return bad("profile must vanish at 0");
                }
                Ok(())
            }
            _ => {
                if !profile.compact_in_positive() {
                    return bad("profile support must be a compact subset of (0, inf)");
                }
                Ok(())
            }
        }
    }

    /// Assembles lhs and rhs of a test function, checking its class first.
    pub fn evaluate(&self, test: &CylinderTestFunction, cfg: &QuadConfig) -> Result<Terms> {
        let g = gamma_triple(&self.params);
        let mut total = Terms::default();
        for mode in &test.modes {
            self.check_membership(&mode.angular)?;
            self.check_profile(&mode.profile, test.region)?;
            total.add(&mode_terms(self.id, &g, mode, test.region, cfg)?);
        }
        Ok(total)
    }

    pub fn rhs(&self, t: &Terms) -> f64 {
        let c = &self.coeffs;
        match self.id {
            InequalityId::Hr => c.a0 * t.g,
            InequalityId::Sch => c.a0 * (t.g + c.zero_order_factor * t.u),
            InequalityId::Nd => c.a0 * t.g + 0.25 * t.ln + c.log_u2 * t.w20,
            InequalityId::Nd2 => c.a0 * t.g + c.log_u2 * t.w20 + 9.0 / 16.0 * t.w40,
            InequalityId::Pb => c.a0 * t.g + 0.25 * t.ln + 0.25 * t.ln_sigma + c.log_u2 * t.w20,
            InequalityId::Nav => c.a0 * t.g + c.log_u2 * t.w20,
            InequalityId::Dir => c.a0 * t.g + c.log_u2 * t.y1 + 9.0 / 16.0 * t.w40,
        }
    }

    pub fn margin(&self, test: &CylinderTestFunction, cfg: &QuadConfig, inputs: ReportInputs) -> Result<MarginReport> {
        let t = self.evaluate(test, cfg)?;
        Ok(MarginReport::inequality(&self.id.to_string(), t.f, self.rhs(&t), t.g, inputs))
    }
}

impl RhsCoefficients {
    fn plain(a0: f64, argmin_lambda: Option<f64>, lambda_min: f64) -> Self {
        RhsCoefficients { a0, argmin_lambda, lambda_min, log_u2: 0.0, zero_order_factor: 0.0 }
    }
}

fn same_value(a: f64, b: f64, domain: SphericalDomain) -> bool {
    if domain.is_exact() {
        a == b
    } else {
        (a - b).abs() <= CAP_MEMBERSHIP_TOL
    }
}

fn domain_theta0(domain: SphericalDomain) -> Option<f64> {
    match domain {
        SphericalDomain::Hemisphere => Some(std::f64::consts::FRAC_PI_2),
        other => other.theta0(),
    }
}

fn dir_theta0(domain: SphericalDomain) -> Result<f64> {
    domain_theta0(domain)
        .ok_or_else(|| Error::DomainMismatch("DIR needs a proper cap of the sphere".into()))
}

/// Integrals of one test function on the cylinder, summed over modes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Terms {
    /// Weighted Laplacian energy.
    pub f: f64,
    /// Weighted gradient energy.
    pub g: f64,
    /// Weighted L2 norm.
    pub u: f64,
    /// Log-weighted full gradient.
    pub ln: f64,
    /// Log-weighted spherical gradient.
    pub ln_sigma: f64,
    pub w20: f64,
    pub w40: f64,
    /// Radial derivative energy, the integral of |w_t|^2.
    pub y1: f64,
}

impl Terms {
    fn add(&mut self, o: &Terms) {
        self.f += o.f;
        self.g += o.g;
        self.u += o.u;
        self.ln += o.ln;
        self.ln_sigma += o.ln_sigma;
        self.w20 += o.w20;
        self.w40 += o.w40;
        self.y1 += o.y1;
    }
}

fn mode_terms(id: InequalityId, g: &GammaTriple, mode: &Mode, region: Region, cfg: &QuadConfig) -> Result<Terms> {
    let (norm, grad, lap) = mode.angular.forms(g.gamma);
    let m = moments(&mode.profile, cfg)?;
    let c2 = mode.coefficient * mode.coefficient;
    let gh2 = g.gamma_hat * g.gamma_hat;
    let mut t = Terms {
        f: lap * m.m0 + norm * m.m2 + 2.0 * grad * m.m1 + 2.0 * g.gamma_bar * norm * m.m1,
        g: (grad + gh2 * norm) * m.m0 + norm * m.m1,
        u: norm * m.m0,
        y1: norm * m.m1,
        ..Terms::default()
    };
    if region != Region::FullLine {
        let w20 = need(m.w2_0)?;
        t.w20 = norm * w20;
        t.ln_sigma = grad * w20;
        if matches!(id, InequalityId::Nd | InequalityId::Pb) {
            let sign = if region == Region::Exterior { -1.0 } else { 1.0 };
            let x = need(m.cross)?;
            t.ln = grad * w20 + norm * (need(m.w2_1)? + 2.0 * sign * g.gamma_hat * x + gh2 * w20);
        }
        if matches!(id, InequalityId::Nd2 | InequalityId::Dir) {
            t.w40 = norm * need(m.w4_0)?;
        }
    }
    for v in [&mut t.f, &mut t.g, &mut t.u, &mut t.ln, &mut t.ln_sigma, &mut t.w20, &mut t.w40, &mut t.y1] {
        *v *= c2;
    }
    Ok(t)
}

/// One-shot margin of a test function.
pub fn inequality_margin(
    id: InequalityId,
    p: &ConeParams,
    domain: SphericalDomain,
    selection: &LambdaSelection,
    test: &CylinderTestFunction,
    cfg: &QuadConfig,
) -> Result<MarginReport> {
    let setup = InequalitySetup::new(id, p, domain, selection)?;
    setup.margin(test, cfg, setup.inputs())
}

/// (lhs - A0 * gradient term) / gradient term for the single-mode family y(eps t) at the
/// minimizing angular factor.
pub fn a0_sharpness(setup: &InequalitySetup, eps: f64, cfg: &QuadConfig) -> Result<f64> {
    let (profile, region) = if setup.id.full_line() {
        (Profile1D::bump(0.0, 1.0)?.scaled(eps)?, Region::FullLine)
    } else {
        (Profile1D::bump(2.0, 1.0)?.scaled(eps)?, Region::Inner)
    };
    let angular = match setup.id {
        InequalityId::Dir => {
            let space = setup.dirichlet.as_ref().ok_or_else(|| Error::InvalidParams("missing clamped space".into()))?;
            let ch = space.channel(space.argmin_ell).ok_or_else(|| Error::InvalidParams("missing channel".into()))?;
            let (norm, grad, lap) = ch.forms(&ch.min.vector);
            Angular::Clamped { ell: ch.ell, norm, grad, lap }
        }
        _ => {
            let lambda = setup.coeffs.argmin_lambda.ok_or_else(|| Error::InvalidParams("no minimizing eigenvalue".into()))?;
            let entry = resolve_selection_entry(setup, lambda)?;
            Angular::Eigen { lambda, label: entry.label }
        }
    };
    let test = CylinderTestFunction::new(vec![Mode { angular, profile, coefficient: 1.0 }], region)?;
    let t = setup.evaluate(&test, cfg)?;
    let grad_term = if setup.id == InequalityId::Sch { t.g + setup.coeffs.zero_order_factor * t.u } else { t.g };
    Ok((t.f - setup.coeffs.a0 * grad_term) / grad_term)
}

fn resolve_selection_entry(setup: &InequalitySetup, lambda: f64) -> Result<SpectrumEntry> {
    setup
        .lambdas
        .iter()
        .find(|e| same_value(e.lambda, lambda, setup.domain))
        .cloned()
        .map(Ok)
        .unwrap_or_else(|| {
            let s = domain_spectrum(setup.params.dim, setup.domain, 8)?;
            resolve_selection(&s, &LambdaSelection::Singleton(lambda)).map(|mut v| v.remove(0))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::ModeLabel;

    fn eigen_mode(j: u32, n: u32, profile: Profile1D, c: f64) -> Mode {
        let lambda = (j * (j + n - 2)) as f64;
        Mode { angular: Angular::Eigen { lambda, label: ModeLabel::Degree(j) }, profile, coefficient: c }
    }

    #[test]
    fn hr_three_modes_nonnegative() {
        let p = ConeParams::new(4, 0.0).unwrap();
        let modes = vec![
            eigen_mode(0, 4, Profile1D::bump(0.0, 1.0).unwrap(), 0.7),
            eigen_mode(1, 4, Profile1D::bump(1.0, 2.0).unwrap(), -0.4),
            eigen_mode(3, 4, Profile1D::bump(-2.0, 0.5).unwrap(), 0.2),
        ];
        let test = CylinderTestFunction::new(modes, Region::FullLine).unwrap();
        let r = inequality_margin(InequalityId::Hr, &p, SphericalDomain::FullSphere, &LambdaSelection::All, &test, &QuadConfig::default())
            .unwrap();
        assert!(r.pass && r.margin >= 0.0);
    }

    #[test]
    fn multi_mode_is_additive() {
        let p = ConeParams::new(3, 1.0).unwrap();
        let setup = InequalitySetup::new(InequalityId::Nd2, &p, SphericalDomain::Hemisphere, &LambdaSelection::All).unwrap();
        let cfg = QuadConfig::default();
        let a = eigen_mode(1, 3, Profile1D::bump(2.0, 1.0).unwrap(), 0.5);
        let b = eigen_mode(2, 3, Profile1D::bump(1.5, 0.7).unwrap(), -0.8);
        let both = setup.evaluate(&CylinderTestFunction::new(vec![a.clone(), b.clone()], Region::Inner).unwrap(), &cfg).unwrap();
        let ta = setup.evaluate(&CylinderTestFunction::new(vec![a], Region::Inner).unwrap(), &cfg).unwrap();
        let tb = setup.evaluate(&CylinderTestFunction::new(vec![b], Region::Inner).unwrap(), &cfg).unwrap();
        assert!((both.f - ta.f - tb.f).abs() <= 1e-10 * both.f);
        assert!((setup.rhs(&both) - setup.rhs(&ta) - setup.rhs(&tb)).abs() <= 1e-10 * setup.rhs(&both));
    }

    #[test]
    fn class_and_selection_violations() {
        let p = ConeParams::new(3, 0.0).unwrap();
        let cfg = QuadConfig::default();
        let setup = InequalitySetup::new(InequalityId::Nd, &p, SphericalDomain::Hemisphere, &LambdaSelection::All).unwrap();
        let bad_profile = CylinderTestFunction::new(vec![eigen_mode(1, 3, Profile1D::bump(0.5, 1.0).unwrap(), 1.0)], Region::Inner).unwrap();
        assert!(matches!(setup.evaluate(&bad_profile, &cfg), Err(Error::BoundaryClassViolation(_))));
        let radial = CylinderTestFunction::new(vec![eigen_mode(0, 3, Profile1D::bump(2.0, 1.0).unwrap(), 1.0)], Region::Inner).unwrap();
        assert!(matches!(setup.evaluate(&radial, &cfg), Err(Error::SelectionViolation(_))));
        let tail = InequalitySetup::new(InequalityId::Hr, &p, SphericalDomain::FullSphere, &LambdaSelection::Tail(2)).unwrap();
        let low = CylinderTestFunction::new(vec![eigen_mode(1, 3, Profile1D::bump(0.0, 1.0).unwrap(), 1.0)], Region::FullLine).unwrap();
        assert!(matches!(tail.evaluate(&low, &cfg), Err(Error::SelectionViolation(_))));
        let far = CylinderTestFunction::new(vec![eigen_mode(40, 3, Profile1D::bump(0.0, 1.0).unwrap(), 1.0)], Region::FullLine).unwrap();
        assert!(tail.evaluate(&far, &cfg).is_ok());
        assert!(InequalitySetup::new(InequalityId::Pb, &p, SphericalDomain::Hemisphere, &LambdaSelection::All).is_err());
    }

    #[test]
    fn schmincke_at_two_is_hardy_rellich() {
        let p = ConeParams::new(3, 2.0).unwrap();
        let s = InequalitySetup::new(InequalityId::Sch, &p, SphericalDomain::FullSphere, &LambdaSelection::All).unwrap();
        let h = InequalitySetup::new(InequalityId::Hr, &p, SphericalDomain::FullSphere, &LambdaSelection::All).unwrap();
        assert_eq!(s.coeffs.a0, h.coeffs.a0);
        assert_eq!(s.coeffs.zero_order_factor, 0.0);
    }

    #[test]
    fn scaled_family_is_sharp() {
        let cfg = QuadConfig::default();
        let cases = [
            (InequalityId::Hr, 4, 0.0, SphericalDomain::FullSphere),
            (InequalityId::Nd, 3, 0.0, SphericalDomain::Hemisphere),
            (InequalityId::Nd2, 4, 0.0, SphericalDomain::FullSphere),
            (InequalityId::Pb, 3, 0.0, SphericalDomain::FullSphere),
            (InequalityId::Nav, 5, 0.0, SphericalDomain::FullSphere),
            (InequalityId::Sch, 5, 0.0, SphericalDomain::FullSphere),
            (InequalityId::Dir, 3, 0.0, SphericalDomain::Cap(1.0)),
        ];
        for (id, n, a, d) in cases {
            let p = ConeParams::new(n, a).unwrap();
            let setup = InequalitySetup::new(id, &p, d, &LambdaSelection::All).unwrap();
            let gap = a0_sharpness(&setup, 1e-3, &cfg).unwrap();
            assert!((-1e-9..1e-2).contains(&gap), "{id}: {gap}");
        }
    }
}
