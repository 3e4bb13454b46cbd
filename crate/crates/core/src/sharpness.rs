//! Scaling quotients along y(eps t) families and related one-dimensional functionals.

use crate::constants::{gamma_triple, hr_term, ConeParams};
use crate::error::{Error, Result};
use crate::profiles::{moments, need, pow_exp_moments_gamma, Moments, Profile1D};
use crate::quadrature::QuadConfig;
use rayon::prelude::*;
use serde::Serialize;

/// Cylinder quotient of the test y(eps t) phi with eps2 = eps^2, written in the moments of y.
pub fn quotient_f(p: &ConeParams, lambda: f64, m: &Moments, eps2: f64) -> Result<f64> {
    if lambda < 0.0 {
        return Err(Error::NegativeInput { name: "lambda", value: lambda });
    }
    if !(eps2 >= 0.0) {
        return Err(Error::NegativeInput { name: "eps2", value: eps2 });
    }
    let g = gamma_triple(p);
    let num = (lambda + g.gamma).powi(2) * m.m0 + 2.0 * eps2 * (lambda + g.gamma_bar) * m.m1 + eps2 * eps2 * m.m2;
    let den = (lambda + g.gamma_hat * g.gamma_hat) * m.m0 + eps2 * m.m1;
    if den == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(num / den)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepPoint {
    pub eps: f64,
    pub eps2: f64,
    pub quotient: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub lambda: f64,
    pub limit: f64,
    pub points: Vec<SweepPoint>,
    /// Relative gap to the limit at the smallest eps.
    pub gap_rel: f64,
    /// Quotients strictly decrease along the (descending) grid.
    pub monotone: bool,
}

fn check_grid(eps_grid: &[f64]) -> Result<()> {
    if eps_grid.is_empty() {
        return Err(Error::InvalidParams("empty epsilon grid".into()));
    }
    if let Some(e) = eps_grid.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
        return Err(Error::NegativeInput { name: "eps", value: *e });
    }
    Ok(())
}

/// Evaluates the quotient on a descending eps grid.
pub fn sharpness_sweep(
    p: &ConeParams,
    lambda: f64,
    profile: &Profile1D,
    eps_grid: &[f64],
    cfg: &QuadConfig,
) -> Result<SweepReport> {
    check_grid(eps_grid)?;
    let m = moments(profile, cfg)?;
    sweep_with_moments(p, lambda, &m, eps_grid)
}

pub fn sweep_with_moments(p: &ConeParams, lambda: f64, m: &Moments, eps_grid: &[f64]) -> Result<SweepReport> {
    check_grid(eps_grid)?;
    let points = eps_grid
        .iter()
        .map(|&eps| Ok(SweepPoint { eps, eps2: eps * eps, quotient: quotient_f(p, lambda, m, eps * eps)? }))
        .collect::<Result<Vec<_>>>()?;
    let limit = hr_term(p, &lambda);
    let smallest = points.iter().min_by(|a, b| a.eps.total_cmp(&b.eps)).map(|q| q.quotient).unwrap_or(limit);
    let gap_rel = (smallest - limit).abs() / limit.abs().max(f64::MIN_POSITIVE);
    let monotone = points.windows(2).all(|w| w[1].eps < w[0].eps && w[1].quotient < w[0].quotient);
    Ok(SweepReport { lambda, limit, points, gap_rel, monotone })
}

/// 2 sqrt(m0 (m2 - w2_1/4)) / w2_0 + 2 m1 / w2_0 - 1/4.
pub fn r_functional(m: &Moments) -> Result<f64> {
    let w2_0 = need(m.w2_0)?;
    let w2_1 = need(m.w2_1)?;
    let inner = m.m2 - 0.25 * w2_1;
    let radicand = m.m0 * inner;
    if radicand < 0.0 {
        return Err(Error::NegativeRadicand(radicand));
    }
    Ok(2.0 * radicand.sqrt() / w2_0 + 2.0 * m.m1 / w2_0 - 0.25)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OneDKind {
    Hardy,
    Rellich,
}

impl OneDKind {
    /// The sharp constant of the one-dimensional inequality.
    pub fn constant(&self) -> f64 {
        match self {
            OneDKind::Hardy => 0.25,
            OneDKind::Rellich => 9.0 / 16.0,
        }
    }

    fn base_power(&self) -> f64 {
        match self {
            OneDKind::Hardy => 0.5,
            OneDKind::Rellich => 1.5,
        }
    }

    fn quotient(&self, m: &Moments) -> Result<f64> {
        match self {
            OneDKind::Hardy => Ok(m.m1 / need(m.w2_0)?),
            OneDKind::Rellich => Ok(m.m2 / need(m.w4_0)?),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentPath {
    Gamma,
    Quadrature,
}

#[derive(Clone, Debug, PartialEq)]
pub enum OneDFamily {
    /// t^{base + eps} e^{-t}, base 1/2 for Hardy and 3/2 for Rellich.
    PowerExp(MomentPath),
    /// y(eps t) for a fixed profile; the quotient is scale invariant.
    Scaled(Profile1D),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OneDPoint {
    pub eps: f64,
    pub quotient: f64,
}

/// Power-exponential moments along the chosen path.
pub fn family_moments(power: f64, path: MomentPath, cfg: &QuadConfig) -> Result<Moments> {
    match path {
        MomentPath::Gamma => Ok(pow_exp_moments_gamma(power)),
        MomentPath::Quadrature => moments(&Profile1D::pow_exp(power)?, cfg),
    }
}

pub fn oned_sharpness(kind: OneDKind, family: &OneDFamily, eps_grid: &[f64], cfg: &QuadConfig) -> Result<Vec<OneDPoint>> {
    check_grid(eps_grid)?;
    eps_grid
        .par_iter()
        .map(|&eps| {
            let m = match family {
                OneDFamily::PowerExp(path) => family_moments(kind.base_power() + eps, *path, cfg)?,
                OneDFamily::Scaled(profile) => {
                    if !profile.compact_in_positive() {
                        return Err(Error::UnsupportedWeight);
                    }
                    moments(&profile.scaled(eps)?, cfg)?
                }
            };
            Ok(OneDPoint { eps, quotient: kind.quotient(&m)? })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::p_alpha;

    fn params(n: u32, a: f64) -> ConeParams {
        ConeParams::new(n, a).unwrap()
    }

    #[test]
    fn quotient_exceeds_limit_at_unit_scale() {
        let m = moments(&Profile1D::bump(0.0, 1.0).unwrap(), &QuadConfig::default()).unwrap();
        let q = quotient_f(&params(4, 0.0), 3.0, &m, 1.0).unwrap();
        assert!(q > 3.0);
        assert_eq!(quotient_f(&params(4, 0.0), 3.0, &m, 0.0).unwrap(), 3.0);
    }

    #[test]
    fn sweep_converges_and_decreases() {
        let grid: Vec<f64> = (0..7).map(|k| 10f64.powi(-k)).collect();
        let r = sharpness_sweep(&params(4, 0.0), 3.0, &Profile1D::bump(0.0, 1.0).unwrap(), &grid, &QuadConfig::default())
            .unwrap();
        assert!(r.monotone);
        assert!(r.gap_rel < 1e-4);
    }

    #[test]
    fn radial_sweep_limit_exceeds_full_space_constant() {
        let grid = [1.0, 0.1, 1e-3];
        let r = sharpness_sweep(&params(3, 0.0), 0.0, &Profile1D::bump(0.0, 1.0).unwrap(), &grid, &QuadConfig::default())
            .unwrap();
        assert_eq!(r.limit, 2.25);
        assert!(r.points.last().unwrap().quotient > 25.0 / 36.0);
    }

    #[test]
    fn zero_denominator_only_when_degenerate() {
        let m = moments(&Profile1D::bump(0.0, 1.0).unwrap(), &QuadConfig::default()).unwrap();
        let p = params(3, 1.0);
        assert_eq!(p_alpha(&p, &0.0), 0.0);
        assert_eq!(quotient_f(&p, 0.0, &m, 0.0), Err(Error::ZeroDenominator));
        assert!(quotient_f(&p, 0.0, &m, 1e-3).is_ok());
    }

    #[test]
    fn r_functional_near_limit() {
        let m = pow_exp_moments_gamma(1.5 + 1e-3);
        let r = r_functional(&m).unwrap();
        let limit = (33.0f64 / 2.0).sqrt() + 1.25;
        assert!((r - limit).abs() < 1e-2, "{r}");
    }

    #[test]
    fn oned_families_approach_constants() {
        let cfg = QuadConfig::default();
        for kind in [OneDKind::Hardy, OneDKind::Rellich] {
            let pts = oned_sharpness(kind, &OneDFamily::PowerExp(MomentPath::Gamma), &[0.1, 1e-3], &cfg).unwrap();
            let q = pts[1].quotient;
            assert!(q > kind.constant() && q < kind.constant() * 1.01, "{kind:?} {q}");
            let b = oned_sharpness(kind, &OneDFamily::Scaled(Profile1D::bump(2.0, 1.0).unwrap()), &[1.0], &cfg).unwrap();
            assert!(b[0].quotient > kind.constant());
        }
    }
}
