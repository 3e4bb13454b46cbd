//! One-dimensional test profiles y(t) and their integral moments.

use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_breaks, QuadConfig};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EndCondition {
    /// y' = 0 at the knot.
    Clamped,
    /// y'' = 0 at the knot, slope left free.
    Natural,
}

/// Cubic spline vanishing at both end knots.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spline {
    knots: Vec<f64>,
    values: Vec<f64>,
    second: Vec<f64>,
    start: EndCondition,
    end: EndCondition,
}

impl Spline {
    pub fn new(points: &[(f64, f64)], start: EndCondition, end: EndCondition) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::InvalidProfile("spline needs at least three knots".into()));
        }
        let knots: Vec<f64> = points.iter().map(|p| p.0).collect();
        let values: Vec<f64> = points.iter().map(|p| p.1).collect();
        if knots.windows(2).any(|w| !(w[1] > w[0])) || knots.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(Error::InvalidProfile("spline knots must be finite and strictly increasing".into()));
        }
        if values[0] != 0.0 || values[values.len() - 1] != 0.0 {
            return Err(Error::InvalidProfile("spline must vanish at both end knots".into()));
        }
        if values.iter().all(|v| *v == 0.0) {
            return Err(Error::InvalidProfile("identically zero profile".into()));
        }
        let second = solve_second_derivatives(&knots, &values, start, end);
        Ok(Spline { knots, values, second, start, end })
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn start(&self) -> EndCondition {
        self.start
    }

    pub fn end(&self) -> EndCondition {
        self.end
    }

    fn eval(&self, t: f64) -> [f64; 3] {
        let n = self.knots.len();
        if t < self.knots[0] || t > self.knots[n - 1] {
            return [0.0; 3];
        }
        let i = match self.knots.partition_point(|k| *k <= t) {
            0 => 0,
            p if p >= n => n - 2,
            p => p - 1,
        };
        let (t0, t1) = (self.knots[i], self.knots[i + 1]);
        let h = t1 - t0;
        let a = (t1 - t) / h;
        let b = 1.0 - a;
        let (y0, y1, m0, m1) = (self.values[i], self.values[i + 1], self.second[i], self.second[i + 1]);
        let y = a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
        let d = (y1 - y0) / h - (3.0 * a * a - 1.0) / 6.0 * h * m0 + (3.0 * b * b - 1.0) / 6.0 * h * m1;
        let dd = a * m0 + b * m1;
        [y, d, dd]
    }

    fn scaled(&self, eps: f64) -> Spline {
        let knots: Vec<f64> = self.knots.iter().map(|k| k / eps).collect();
        let second: Vec<f64> = self.second.iter().map(|m| m * eps * eps).collect();
        Spline { knots, values: self.values.clone(), second, start: self.start, end: self.end }
    }
}

fn solve_second_derivatives(t: &[f64], y: &[f64], start: EndCondition, end: EndCondition) -> Vec<f64> {
    let n = t.len();
    let h: Vec<f64> = t.windows(2).map(|w| w[1] - w[0]).collect();
    let mut sub = vec![0.0; n];
    let mut dia = vec![0.0; n];
    let mut sup = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    match start {
        EndCondition::Clamped => {
            dia[0] = h[0] / 3.0;
            sup[0] = h[0] / 6.0;
            rhs[0] = (y[1] - y[0]) / h[0];
        }
        EndCondition::Natural => dia[0] = 1.0,
    }
    for i in 1..n - 1 {
        sub[i] = h[i - 1] / 6.0;
        dia[i] = (h[i - 1] + h[i]) / 3.0;
        sup[i] = h[i] / 6.0;
        rhs[i] = (y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1];
    }
    match end {
        EndCondition::Clamped => {
            sub[n - 1] = h[n - 2] / 6.0;
            dia[n - 1] = h[n - 2] / 3.0;
            rhs[n - 1] = -(y[n - 1] - y[n - 2]) / h[n - 2];
        }
        EndCondition::Natural => dia[n - 1] = 1.0,
    }
    // Thomas algorithm
    for i in 1..n {
        let w = sub[i] / dia[i - 1];
        dia[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    let mut m = vec![0.0; n];
    m[n - 1] = rhs[n - 1] / dia[n - 1];
    for i in (0..n - 1).rev() {
        m[i] = (rhs[i] - sup[i] * m[i + 1]) / dia[i];
    }
    m
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Profile1D {
    /// exp(-1 / (1 - s^2)) with s = (t - center) / radius.
    Bump { center: f64, radius: f64 },
    /// t^power e^{-t} on (0, inf).
    PowExp { power: f64 },
    Spline(Spline),
}

impl Profile1D {
    pub fn bump(center: f64, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite() && center.is_finite()) {
            return Err(Error::InvalidProfile(format!("bump radius must be positive, got {radius}")));
        }
        Ok(Profile1D::Bump { center, radius })
    }

    /// t^power e^{-t}; moments up to second derivatives need power > 1/2.
    pub fn pow_exp(power: f64) -> Result<Self> {
        if !(power > 0.5 && power.is_finite()) {
            return Err(Error::InvalidProfile(format!("power must exceed 1/2, got {power}")));
        }
        Ok(Profile1D::PowExp { power })
    }

    /// psi_eps(t) = t^{3/2 + eps} e^{-t}.
    pub fn rellich_family(eps: f64) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(Error::InvalidProfile(format!("epsilon must be positive, got {eps}")));
        }
        Self::pow_exp(1.5 + eps)
    }

    /// t^{1/2 + eps} e^{-t}.
    pub fn hardy_family(eps: f64) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(Error::InvalidProfile(format!("epsilon must be positive, got {eps}")));
        }
        Self::pow_exp(0.5 + eps)
    }

    pub fn spline(points: &[(f64, f64)], start: EndCondition, end: EndCondition) -> Result<Self> {
        Spline::new(points, start, end).map(Profile1D::Spline)
    }

    /// (y, y', y'') at t.
    pub fn eval(&self, t: f64) -> [f64; 3] {
        match self {
            Profile1D::Bump { center, radius } => {
                let s = (t - center) / radius;
                if s.abs() >= 1.0 {
                    return [0.0; 3];
                }
                let q = 1.0 - s * s;
                let e = (-1.0 / q).exp();
                let g1 = -2.0 * s / (q * q);
                let g2 = -2.0 / (q * q) - 8.0 * s * s / (q * q * q);
                [e, e * g1 / radius, e * (g1 * g1 + g2) / (radius * radius)]
            }
            Profile1D::PowExp { power } => {
                if t <= 0.0 {
                    return [0.0; 3];
                }
                let p = *power;
                let e = (-t).exp();
                let tp = t.powf(p);
                [tp * e, t.powf(p - 1.0) * (p - t) * e, t.powf(p - 2.0) * (p * (p - 1.0) - 2.0 * p * t + t * t) * e]
            }
            Profile1D::Spline(s) => s.eval(t),
        }
    }

    /// Closed support [a, b] (b may be infinite).
    pub fn support(&self) -> (f64, f64) {
        match self {
            Profile1D::Bump { center, radius } => (center - radius, center + radius),
            Profile1D::PowExp { .. } => (0.0, f64::INFINITY),
            Profile1D::Spline(s) => (s.knots[0], s.knots[s.knots.len() - 1]),
        }
    }

    /// Support is a compact subset of (0, inf).
    pub fn compact_in_positive(&self) -> bool {
        let (a, b) = self.support();
        a > 0.0 && b.is_finite()
    }

    /// Slope at the left end of the support, where the profile vanishes.
    pub fn start_slope(&self) -> f64 {
        match self {
            Profile1D::Spline(s) => {
                let h = s.knots[1] - s.knots[0];
                (s.values[1] - s.values[0]) / h - h * s.second[0] / 3.0 - h * s.second[1] / 6.0
            }
            _ => self.eval(self.support().0)[1],
        }
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Profile1D::Bump { center, radius } => vec![center - radius, *center, center + radius],
            Profile1D::PowExp { .. } => vec![0.0, 1.0, f64::INFINITY],
            Profile1D::Spline(s) => s.knots.clone(),
        }
    }

    /// The profile t -> y(eps t).
    pub fn scaled(&self, eps: f64) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(Error::InvalidProfile("scale must be positive".into()));
        }
        match self {
            Profile1D::Bump { center, radius } => Ok(Profile1D::Bump { center: center / eps, radius: radius / eps }),
            Profile1D::Spline(s) => Ok(Profile1D::Spline(s.scaled(eps))),
            Profile1D::PowExp { .. } => Err(Error::InvalidProfile("power-exponential profiles are not rescaled".into())),
        }
    }
}

/// Integral moments of a profile; weighted entries are `None` when the support reaches t < 0
/// and `Some(inf)` when the integral diverges at t = 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Moments {
    pub m0: f64,
    pub m1: f64,
    pub m2: f64,
    pub w2_0: Option<f64>,
    pub w2_1: Option<f64>,
    pub w4_0: Option<f64>,
    pub cross: Option<f64>,
}

pub fn need(v: Option<f64>) -> Result<f64> {
    v.ok_or(Error::UnsupportedWeight)
}

impl Moments {
    /// Moments of t -> y(eps t) from those of y.
    pub fn scaled(&self, eps: f64) -> Moments {
        let e = eps;
        Moments {
            m0: self.m0 / e,
            m1: self.m1 * e,
            m2: self.m2 * e * e * e,
            w2_0: self.w2_0.map(|v| v * e),
            w2_1: self.w2_1.map(|v| v * e * e * e),
            w4_0: self.w4_0.map(|v| v * e * e * e),
            cross: self.cross.map(|v| v * e * e),
        }
    }

    pub fn weighted(&self) -> bool {
        self.w2_0.is_some()
    }
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// t^{p-k} P_k(t) e^{-t} is the k-th derivative of t^p e^{-t}.
fn pow_exp_poly(p: f64, k: usize) -> Vec<f64> {
    match k {
        0 => vec![1.0],
        1 => vec![p, -1.0],
        _ => vec![p * (p - 1.0), -2.0 * p, 1.0],
    }
}

/// Integrand t^e Q(t) e^{-2t} for the moment with derivative orders (i, j) and weight t^{-w}.
fn pow_exp_integrand(p: f64, i: usize, j: usize, w: f64) -> (f64, Vec<f64>) {
    let e = (p - i as f64) + (p - j as f64) - w;
    (e, poly_mul(&pow_exp_poly(p, i), &pow_exp_poly(p, j)))
}

fn leading(q: &[f64]) -> Option<usize> {
    q.iter().position(|c| *c != 0.0)
}

fn divergent(e: f64, q: &[f64]) -> Option<f64> {
    let k0 = leading(q)?;
    if e + k0 as f64 > -1.0 {
        None
    } else {
        Some(f64::INFINITY.copysign(q[k0]))
    }
}

fn pow_exp_gamma(e: f64, q: &[f64]) -> f64 {
    if let Some(v) = divergent(e, q) {
        return v;
    }
    q.iter()
        .enumerate()
        .filter(|(_, c)| **c != 0.0)
        .map(|(k, c)| {
            let s = e + k as f64 + 1.0;
            c * statrs::function::gamma::gamma(s) / 2f64.powf(s)
        })
        .sum()
}

fn pow_exp_quadrature(e: f64, q: &[f64], cfg: &QuadConfig) -> Result<f64> {
    if let Some(v) = divergent(e, q) {
        return Ok(v);
    }
    let k0 = leading(q).unwrap_or(0);
    let lead = e + k0 as f64;
    let shifted = &q[k0..];
    let poly = |t: f64| shifted.iter().rev().fold(0.0, |acc, c| acc * t + c);
    // on (0, 1] substitute t = s^{1/(lead+1)} so that t^lead dt = ds / (lead + 1)
    let inv = 1.0 / (lead + 1.0);
    let near = integrate(
        |s| {
            let t = s.powf(inv);
            poly(t) * (-2.0 * t).exp() * inv
        },
        0.0,
        1.0,
        cfg,
    )?;
    let far = integrate(|t| t.powf(lead) * poly(t) * (-2.0 * t).exp(), 1.0, f64::INFINITY, cfg)?;
    Ok(near + far)
}

const MOMENT_SPECS: [(usize, usize, f64); 7] =
    [(0, 0, 0.0), (1, 1, 0.0), (2, 2, 0.0), (0, 0, 2.0), (1, 1, 2.0), (0, 0, 4.0), (0, 1, 2.0)];

fn assemble(v: [f64; 7]) -> Moments {
    Moments { m0: v[0], m1: v[1], m2: v[2], w2_0: Some(v[3]), w2_1: Some(v[4]), w4_0: Some(v[5]), cross: Some(v[6]) }
}

/// Closed-form moments of t^p e^{-t} via the Gamma function.
pub fn pow_exp_moments_gamma(power: f64) -> Moments {
    let mut v = [0.0; 7];
    for (slot, (i, j, w)) in v.iter_mut().zip(MOMENT_SPECS) {
        let (e, q) = pow_exp_integrand(power, i, j, w);
        *slot = pow_exp_gamma(e, &q);
    }
    assemble(v)
}

fn pow_exp_moments_quadrature(power: f64, cfg: &QuadConfig) -> Result<Moments> {
    let mut v = [0.0; 7];
    for (slot, (i, j, w)) in v.iter_mut().zip(MOMENT_SPECS) {
        let (e, q) = pow_exp_integrand(power, i, j, w);
        *slot = pow_exp_quadrature(e, &q, cfg)?;
    }
    Ok(assemble(v))
}

/// Adaptive-quadrature moments with analytic derivatives.
pub fn moments(profile: &Profile1D, cfg: &QuadConfig) -> Result<Moments> {
    if let Profile1D::PowExp { power } = profile {
        return pow_exp_moments_quadrature(*power, cfg);
    }
    let pts = profile.breakpoints();
    let f = |k: usize| move |t: f64| profile.eval(t)[k].powi(2);
    let m0 = integrate_breaks(f(0), &pts, cfg)?;
    let m1 = integrate_breaks(f(1), &pts, cfg)?;
    let m2 = integrate_breaks(f(2), &pts, cfg)?;
    if !(m0 > 0.0) {
        return Err(Error::InvalidProfile("profile has zero L2 norm".into()));
    }
    let (a, _) = profile.support();
    let mut out = Moments { m0, m1, m2, w2_0: None, w2_1: None, w4_0: None, cross: None };
    if a < 0.0 {
        return Ok(out);
    }
    // at a = 0 the profile vanishes; a nonzero slope makes the stronger weights diverge
    let singular = a == 0.0 && profile.start_slope() != 0.0;
    let w = |k: usize, l: usize, p: i32| move |t: f64| {
        let v = profile.eval(t);
        v[k] * v[l] / t.powi(p)
    };
    out.w2_0 = Some(integrate_breaks(w(0, 0, 2), &pts, cfg)?);
    if singular {
        out.w2_1 = Some(f64::INFINITY);
        out.w4_0 = Some(f64::INFINITY);
        out.cross = Some(f64::INFINITY);
    } else {
        out.w2_1 = Some(integrate_breaks(w(1, 1, 2), &pts, cfg)?);
        out.w4_0 = Some(integrate_breaks(w(0, 0, 4), &pts, cfg)?);
        out.cross = Some(integrate_breaks(w(0, 1, 2), &pts, cfg)?);
    }
    Ok(out)
}
