//! Closed-form sharp constants and remainder coefficients.
//!
//! Every function is generic over [`Scalar`], so the same code runs in exact
//! rational arithmetic (sphere and hemisphere spectra) and in `f64` (caps).

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spectra::SphericalDomain;
use num::rational::BigRational;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConeParams<S = f64> {
    pub dim: u32,
    pub alpha: S,
}

impl<S: Scalar> ConeParams<S> {
    pub fn new(dim: u32, alpha: S) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall { dim, min: 2 });
        }
        if !alpha.to_f64().is_finite() {
            return Err(Error::InvalidParams(format!("alpha must be finite, got {alpha:?}")));
        }
        Ok(Self { dim, alpha })
    }

    pub fn n(&self) -> S {
        S::from_i64(self.dim as i64)
    }

    /// The reflected weight 4 - alpha.
    pub fn reflected(&self) -> Self {
        Self { dim: self.dim, alpha: S::from_i64(4) - self.alpha.clone() }
    }

    pub fn to_f64(&self) -> ConeParams<f64> {
        ConeParams { dim: self.dim, alpha: self.alpha.to_f64() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GammaTriple<S = f64> {
    pub gamma: S,
    pub gamma_bar: S,
    pub gamma_hat: S,
}

pub fn gamma_triple<S: Scalar>(p: &ConeParams<S>) -> GammaTriple<S> {
    let two = S::from_i64(2);
    let a = (p.n() - two.clone()) / two.clone();
    let b = (p.alpha.clone() - two.clone()) / two.clone();
    let a2 = a.clone() * a.clone();
    let b2 = b.clone() * b.clone();
    GammaTriple {
        gamma: a2.clone() - b2.clone(),
        gamma_bar: a2 + b2,
        gamma_hat: a + b,
    }
}

fn sq<S: Scalar>(x: S) -> S {
    x.clone() * x
}

/// (N - alpha)^2 / 4, the value of the Hardy-Rellich term at lambda = 0.
pub fn radial_value<S: Scalar>(p: &ConeParams<S>) -> S {
    sq(p.n() - p.alpha.clone()) / S::from_i64(4)
}

/// (gamma + lambda)^2 / (gamma_hat^2 + lambda); lambda = 0 maps to (N - alpha)^2 / 4.
pub fn hr_term<S: Scalar>(p: &ConeParams<S>, lambda: &S) -> S {
    if lambda.is_zero() {
        return radial_value(p);
    }
    let g = gamma_triple(p);
    sq(g.gamma + lambda.clone()) / (sq(g.gamma_hat) + lambda.clone())
}

pub fn rellich_term<S: Scalar>(p: &ConeParams<S>, lambda: &S) -> S {
    sq(gamma_triple(p).gamma + lambda.clone())
}

/// lambda^2 + [(alpha-2)^2 + 2 gamma_hat^2] lambda + gamma_hat^4.
pub fn p_alpha<S: Scalar>(p: &ConeParams<S>, lambda: &S) -> S {
    let gh2 = sq(gamma_triple(p).gamma_hat);
    let lin = sq(p.alpha.clone() - S::from_i64(2)) + S::from_i64(2) * gh2.clone();
    sq(lambda.clone()) + lin * lambda.clone() + sq(gh2)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantResult<S = f64> {
    pub value: S,
    pub argmin_lambda: S,
    pub resonant: bool,
}

impl<S: Scalar> ConstantResult<S> {
    pub fn exact(&self) -> Option<BigRational> {
        self.value.to_exact()
    }
}

fn minimize<S: Scalar>(lambdas: &[S], term: impl Fn(&S) -> S) -> Result<ConstantResult<S>> {
    let mut best: Option<(S, S)> = None;
    for l in lambdas {
        if l.is_negative() {
            return Err(Error::NegativeInput { name: "lambda", value: l.to_f64() });
        }
        let v = term(l);
        best = match best {
            None => Some((v, l.clone())),
            Some((bv, bl)) => {
                if v < bv || (v == bv && *l < bl) {
                    Some((v, l.clone()))
                } else {
                    Some((bv, bl))
                }
            }
        };
    }
    let (value, argmin_lambda) = best.ok_or(Error::EmptyLambda)?;
    let resonant = value.is_negligible();
    Ok(ConstantResult { value, argmin_lambda, resonant })
}

/// min over the given eigenvalues of [`hr_term`].
pub fn hardy_rellich_constant<S: Scalar>(p: &ConeParams<S>, lambdas: &[S]) -> Result<ConstantResult<S>> {
    minimize(lambdas, |l| hr_term(p, l))
}

pub fn rellich_constant<S: Scalar>(p: &ConeParams<S>, lambdas: &[S]) -> Result<ConstantResult<S>> {
    minimize(lambdas, |l| rellich_term(p, l))
}

/// Eigenvalues above this bound cannot lower the Hardy-Rellich minimum below `current`.
///
/// Uses (lambda + gamma)^2 / (lambda + gamma_hat^2) >= lambda + 2 gamma - gamma_hat^2.
pub fn hr_cutoff<S: Scalar>(p: &ConeParams<S>, current: &S) -> S {
    let g = gamma_triple(p);
    current.clone() - S::from_i64(2) * g.gamma + sq(g.gamma_hat)
}

/// The Rellich term increases for lambda >= -gamma.
pub fn rellich_cutoff<S: Scalar>(p: &ConeParams<S>) -> S {
    -gamma_triple(p).gamma
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonotoneRange<S = f64> {
    pub lower: S,
    pub upper: S,
    pub in_range: bool,
}

/// The alpha interval on which the Hardy-Rellich minimum sits at the principal eigenvalue.
pub fn monotone_range<S: Scalar>(p: &ConeParams<S>) -> MonotoneRange<S> {
    let lower = (S::from_i64(8) - p.n()) / S::from_i64(3);
    let upper = p.n();
    let in_range = lower <= p.alpha && p.alpha <= upper;
    MonotoneRange { lower, upper, in_range }
}

fn lambda_min<S: Scalar>(lambdas: &[S]) -> Result<S> {
    let mut it = lambdas.iter();
    let first = it.next().ok_or(Error::EmptyLambda)?.clone();
    Ok(it.fold(first, |m, l| if *l < m { l.clone() } else { m }))
}

/// (2 gamma_bar + 2 lambda - mu) / 4.
pub fn kappa_from<S: Scalar>(p: &ConeParams<S>, lambda: &S, mu: &S) -> S {
    let g = gamma_triple(p);
    (S::from_i64(2) * g.gamma_bar + S::from_i64(2) * lambda.clone() - mu.clone()) / S::from_i64(4)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Schmincke<S = f64> {
    pub grad_coeff: S,
    pub zero_order_coeff: S,
    pub reflected: ConstantResult<S>,
}

/// `lambdas` must be resolved for the reflected weight 4 - alpha.
pub fn schmincke_coefficients<S: Scalar>(p: &ConeParams<S>, lambdas: &[S]) -> Result<Schmincke<S>> {
    if p.dim < 3 {
        return Err(Error::DimensionTooSmall { dim: p.dim, min: 3 });
    }
    let reflected = hardy_rellich_constant(&p.reflected(), lambdas)?;
    let grad_coeff = reflected.value.clone();
    let factor = (p.n() - S::from_i64(2)) * (S::from_i64(2) - p.alpha.clone());
    Ok(Schmincke { zero_order_coeff: grad_coeff.clone() * factor, grad_coeff, reflected })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NdCoefficients<S = f64> {
    pub a0: S,
    pub a1: S,
    pub a2: S,
    pub lambda_min: S,
    pub mu: ConstantResult<S>,
}

pub fn nd_coefficients<S: Scalar>(p: &ConeParams<S>, lambdas: &[S]) -> Result<NdCoefficients<S>> {
    let mu = hardy_rellich_constant(p, lambdas)?;
    let lmin = lambda_min(lambdas)?;
    let g = gamma_triple(p);
    let a2 = if lmin.is_zero() {
        S::zero()
    } else {
        lmin.clone() * sq(p.alpha.clone() - S::from_i64(2))
            / (S::from_i64(4) * (lmin.clone() + sq(g.gamma_hat)))
    };
    Ok(NdCoefficients { a0: mu.value.clone(), a1: S::ratio(1, 4), a2, lambda_min: lmin, mu })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NdLogCoefficients<S = f64> {
    pub a0: S,
    pub kappa: S,
    pub a2: S,
    pub lambda_min: S,
    pub mu: ConstantResult<S>,
}

pub fn nd_log_coefficients<S: Scalar>(p: &ConeParams<S>, lambdas: &[S]) -> Result<NdLogCoefficients<S>> {
    let mu = hardy_rellich_constant(p, lambdas)?;
    let lmin = lambda_min(lambdas)?;
    let kappa = kappa_from(p, &lmin, &mu.value);
    Ok(NdLogCoefficients { a0: mu.value.clone(), kappa, a2: S::ratio(9, 16), lambda_min: lmin, mu })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PuncturedBallCoefficients<S = f64> {
    pub a0: S,
    pub a1_grad_log: S,
    pub a1_sph_grad: S,
    pub k: S,
    pub mu: ConstantResult<S>,
}

pub fn punctured_ball_coefficients<S: Scalar>(
    p: &ConeParams<S>,
    domain: &SphericalDomain,
    lambdas: &[S],
) -> Result<PuncturedBallCoefficients<S>> {
    if *domain != SphericalDomain::FullSphere {
        return Err(Error::DomainMismatch(format!(
            "punctured-ball coefficients need the full sphere, got {domain}"
        )));
    }
    let mu = hardy_rellich_constant(p, lambdas)?;
    let g = gamma_triple(p);
    let k = (S::from_i64(2) * g.gamma_bar - sq(g.gamma_hat) - mu.value.clone()) / S::from_i64(4);
    Ok(PuncturedBallCoefficients {
        a0: mu.value.clone(),
        a1_grad_log: S::ratio(1, 4),
        a1_sph_grad: S::ratio(1, 4),
        k,
        mu,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NavierCoefficients<S = f64> {
    pub a0: S,
    pub a1: S,
    pub lambda_min: S,
    pub mu: ConstantResult<S>,
}

pub fn navier_coefficients<S: Scalar>(p: &ConeParams<S>, lambdas: &[S]) -> Result<NavierCoefficients<S>> {
    let mu = hardy_rellich_constant(p, lambdas)?;
    let lmin = lambda_min(lambdas)?;
    let a1 = kappa_from(p, &lmin, &mu.value);
    Ok(NavierCoefficients { a0: mu.value.clone(), a1, lambda_min: lmin, mu })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DirichletCoefficients<S = f64> {
    pub a0: S,
    pub kappa0: S,
    pub a1: S,
    pub lambda_min: S,
}

pub fn dirichlet_conelike_coefficients<S: Scalar>(
    p: &ConeParams<S>,
    lambdas: &[S],
    mu0: S,
) -> Result<DirichletCoefficients<S>> {
    if mu0.is_negative() {
        return Err(Error::NegativeInput { name: "mu0", value: mu0.to_f64() });
    }
    let lmin = lambda_min(lambdas)?;
    let kappa0 = kappa_from(p, &lmin, &mu0);
    Ok(DirichletCoefficients { a0: mu0, kappa0, a1: S::ratio(9, 16), lambda_min: lmin })
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightFreeRow {
    pub dim: u32,
    pub mu0: BigRational,
    pub kappa0: BigRational,
}

/// Tabulated weight-free constants for the punctured ball (alpha = 0, no orthogonality).
pub fn weight_free_table(dim: u32) -> Result<WeightFreeRow> {
    let q = |n: i64, d: i64| BigRational::ratio(n, d);
    let (mu0, kappa0) = match dim {
        0 | 1 => return Err(Error::DimensionTooSmall { dim, min: 2 }),
        2 => (q(0, 1), q(1, 2)),
        3 => (q(25, 36), q(65, 144)),
        4 => (q(3, 1), q(1, 4)),
        n => {
            let n = n as i64;
            (q(n * n, 4), q((n - 4) * (n - 4), 16))
        }
    };
    Ok(WeightFreeRow { dim, mu0, kappa0 })
}
