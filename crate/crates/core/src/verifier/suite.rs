//! Seeded randomized margin suites.

use super::inequality::InequalitySetup;
use super::{Angular, CylinderTestFunction, InequalityId, MarginReport, Mode, Region, ReportInputs};
use crate::constants::ConeParams;
use crate::error::Result;
use crate::profiles::{EndCondition, Profile1D};
use crate::quadrature::QuadConfig;
use crate::spectra::{LambdaSelection, SphericalDomain};
use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

const MAX_MODES: usize = 5;
/// Eigen modes are drawn from this many lowest selected eigenvalues.
const POOL: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub inequality_id: String,
    pub trials: usize,
    pub passed: usize,
    pub min_margin: f64,
    pub pass: bool,
    pub reports: Vec<MarginReport>,
}

/// splitmix64 step, used to spread the master seed over trials.
fn trial_seed(seed: u64, trial: usize) -> u64 {
    let mut z = seed.wrapping_add((trial as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, PartialEq)]
enum ProfileClass {
    FullLine,
    Positive,
    NavierStart,
}

fn random_spline(rng: &mut ChaCha8Rng, start: f64, scale: f64, natural_start: bool) -> Result<Profile1D> {
    let n = rng.gen_range(4..=7);
    let mut t = start;
    let mut pts = vec![(t, 0.0)];
    for i in 1..n {
        t += scale * rng.gen_range(0.3..1.5);
        let v = if i == n - 1 { 0.0 } else { rng.gen_range(-1.0..1.0) };
        pts.push((t, v));
    }
    let start_cond = if natural_start { EndCondition::Natural } else { EndCondition::Clamped };
    Profile1D::spline(&pts, start_cond, EndCondition::Clamped)
}

fn random_profile(rng: &mut ChaCha8Rng, class: ProfileClass) -> Result<Profile1D> {
    let scale = 10f64.powf(rng.gen_range(-0.3..1.3));
    let bump = rng.gen_bool(0.5);
    match class {
        ProfileClass::FullLine => {
            if bump {
                Profile1D::bump(rng.gen_range(-3.0..3.0) * scale, rng.gen_range(0.3..2.0) * scale)
            } else {
                {
                let start = rng.gen_range(-4.0..1.0) * scale;
                random_spline(rng, start, scale, false)
            }
            }
        }
        ProfileClass::NavierStart if rng.gen_bool(0.5) => random_spline(rng, 0.0, scale, true),
        _ => {
            if bump {
                let radius = rng.gen_range(0.2..2.0) * scale;
                Profile1D::bump(radius + rng.gen_range(0.05..3.0) * scale, radius)
            } else {
                {
                let start = rng.gen_range(0.05..2.0) * scale;
                random_spline(rng, start, scale, false)
            }
            }
        }
    }
}

/// Smooth doubly clamped shape theta^q (theta0^2 - theta^2)^2 P(theta^2) and its derivative.
fn clamped_shape(theta0: f64, ell: u32, c: [f64; 3]) -> impl Fn(f64) -> (f64, f64) {
    let q = ell.min(2) as i32;
    let t2 = theta0 * theta0;
    move |th: f64| {
        let d = t2 - th * th;
        let b = d * d;
        let bp = -4.0 * th * d;
        let x = th * th / t2;
        let p = c[0] + c[1] * x + c[2] * x * x;
        let pp = (c[1] + 2.0 * c[2] * x) * 2.0 * th / t2;
        let tq = th.powi(q);
        let tq1 = if q == 0 { 0.0 } else { q as f64 * th.powi(q - 1) };
        (tq * b * p, tq1 * b * p + tq * (bp * p + b * pp))
    }
}

fn random_test(setup: &InequalitySetup, rng: &mut ChaCha8Rng) -> Result<CylinderTestFunction> {
    let id = setup.id;
    let region = if id.full_line() {
        Region::FullLine
    } else if rng.gen_bool(0.5) {
        Region::Inner
    } else {
        Region::Exterior
    };
    let class = match id {
        InequalityId::Hr | InequalityId::Sch => ProfileClass::FullLine,
        InequalityId::Nav => ProfileClass::NavierStart,
        _ => ProfileClass::Positive,
    };
    let mut modes = Vec::new();
    if let Some(space) = setup.dirichlet.as_ref().filter(|_| id == InequalityId::Dir) {
        let k = rng.gen_range(1..=MAX_MODES).min(space.channels.len());
        for idx in sample(rng, space.channels.len(), k).into_vec() {
            let ch = &space.channels[idx];
            let c = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let shape = space.interpolate(ch.ell, clamped_shape(space.theta0, ch.ell, c)).unwrap_or_default();
            let (sn, _, _) = ch.forms(&shape);
            let (mn, _, _) = ch.forms(&ch.min.vector);
            let (a, b) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let v: Vec<f64> =
                ch.min.vector.iter().zip(&shape).map(|(x, y)| a * x / mn.sqrt() + b * y / sn.sqrt().max(1e-300)).collect();
            let (norm, grad, lap) = ch.forms(&v);
            modes.push(Mode {
                angular: Angular::Clamped { ell: ch.ell, norm, grad, lap },
                profile: random_profile(rng, class)?,
                coefficient: rng.gen_range(-1.0..1.0),
            });
        }
    } else {
        let pool = &setup.lambdas[..setup.lambdas.len().min(POOL)];
        let k = rng.gen_range(1..=MAX_MODES).min(pool.len());
        for idx in sample(rng, pool.len(), k).into_vec() {
            let e = &pool[idx];
            modes.push(Mode {
                angular: Angular::Eigen { lambda: e.lambda, label: e.label },
                profile: random_profile(rng, class)?,
                coefficient: rng.gen_range(-1.0..1.0),
            });
        }
    }
    CylinderTestFunction::new(modes, region)
}

/// Runs `trials` seeded random multi-mode tests; reports come back in trial order.
pub fn random_test_suite(
    id: InequalityId,
    p: &ConeParams,
    domain: SphericalDomain,
    selection: &LambdaSelection,
    trials: usize,
    seed: u64,
    cfg: &QuadConfig,
) -> Result<SuiteSummary> {
    let setup = InequalitySetup::new(id, p, domain, selection)?;
    suite_with_setup(&setup, trials, seed, cfg)
}

pub fn suite_with_setup(setup: &InequalitySetup, trials: usize, seed: u64, cfg: &QuadConfig) -> Result<SuiteSummary> {
    if trials == 0 {
        return Err(crate::Error::InvalidParams("trials must be at least 1".into()));
    }
    let reports = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, trial));
            let test = random_test(setup, &mut rng)?;
            let inputs = ReportInputs {
                dim: setup.params.dim,
                alpha: setup.params.alpha,
                domain: setup.domain.to_string(),
                selection: setup.selection.to_string(),
                lambda: None,
                seed: Some(seed),
                trial: Some(trial),
            };
            setup.margin(&test, cfg, inputs)
        })
        .collect::<Result<Vec<_>>>()?;
    let passed = reports.iter().filter(|r| r.pass).count();
    let min_margin = reports.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    Ok(SuiteSummary {
        inequality_id: setup.id.to_string(),
        trials,
        passed,
        min_margin,
        pass: passed == trials,
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_passing() {
        let p = ConeParams::new(5, 0.0).unwrap();
        let cfg = QuadConfig::default();
        let a = random_test_suite(InequalityId::Hr, &p, SphericalDomain::FullSphere, &LambdaSelection::All, 30, 42, &cfg).unwrap();
        let b = random_test_suite(InequalityId::Hr, &p, SphericalDomain::FullSphere, &LambdaSelection::All, 30, 42, &cfg).unwrap();
        assert!(a.pass, "min margin {}", a.min_margin);
        assert_eq!(a, b);
        let c = random_test_suite(InequalityId::Hr, &p, SphericalDomain::FullSphere, &LambdaSelection::All, 30, 43, &cfg).unwrap();
        assert_ne!(a.reports, c.reports);
    }

    #[test]
    fn trial_seeds_differ() {
        assert_ne!(trial_seed(1, 0), trial_seed(1, 1));
        assert_ne!(trial_seed(1, 0), trial_seed(2, 0));
    }
}
