//! Prüfer-angle shooting for the polar Sturm-Liouville problem on a cap.
//!
//! Channel ell solves -(w f')'/w + c_ell f / sin^2 = lambda f on (0, theta0),
//! w = sin^{N-2}, c_ell = ell (ell + N - 3), f regular at the pole and f(theta0) = 0.
//! With g = sin^m f, m = (N-2)/2, nu = ell + m this becomes
//! -g'' + nu (nu - 1) / sin^2 g = (lambda + m^2) g, integrated in Prüfer form.

use super::ode::{integrate, OdeConfig};
use crate::error::{Error, Result};
use std::f64::consts::{FRAC_PI_2, PI};

pub const THETA_MIN: f64 = 1e-6;

pub fn c_ell(dim: u32, ell: u32) -> f64 {
    let (n, l) = (dim as f64, ell as f64);
    l * (l + n - 3.0)
}

/// Lower bound for every eigenvalue of channel ell.
pub fn channel_floor(dim: u32, theta0: f64, ell: u32) -> f64 {
    let c = c_ell(dim, ell);
    if theta0 <= FRAC_PI_2 {
        c / theta0.sin().powi(2)
    } else {
        c
    }
}

/// Second coefficient of the regular series f = theta^ell (1 + a theta^2).
pub fn series_coefficient(dim: u32, ell: u32, lambda: f64) -> f64 {
    let (n, l) = (dim as f64, ell as f64);
    (((n - 2.0) * l + c_ell(dim, ell)) / 3.0 - lambda) / (2.0 * (2.0 * l + n - 1.0))
}

/// Prüfer angle at theta0 for trial eigenvalue `lambda`.
pub fn prufer_angle(dim: u32, theta0: f64, ell: u32, lambda: f64) -> Result<f64> {
    let m = (dim as f64 - 2.0) / 2.0;
    let nu = ell as f64 + m;
    let q = nu * (nu - 1.0);
    let e = lambda + m * m;
    let t = THETA_MIN;
    let a = series_coefficient(dim, ell, lambda);
    let log_deriv = ell as f64 / t + 2.0 * a * t / (1.0 + a * t * t);
    let r = log_deriv + m * t.cos() / t.sin();
    let start = 1f64.atan2(r);
    let cfg = OdeConfig::default();
    let out = integrate(
        |x, y: &[f64; 1]| {
            let (s, c) = y[0].sin_cos();
            let sx = x.sin();
            [c * c + (e - q / (sx * sx)) * s * s]
        },
        t,
        theta0,
        [start],
        &cfg,
    )?;
    Ok(out[0])
}

fn brent(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64) -> Result<f64> {
    if fa * fb > 0.0 {
        return Err(Error::ConvergenceFailure("root not bracketed".into()));
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb * fc > 0.0 {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 1e-15;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            if 2.0 * p < (3.0 * xm * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(xm) };
        fb = f(b)?;
    }
    Err(Error::ConvergenceFailure("Brent iteration limit".into()))
}

/// k-th (k >= 1) eigenvalue of channel ell, searched above `lower` (a value below it).
pub fn channel_eigenvalue_above(dim: u32, theta0: f64, ell: u32, k: u32, lower: f64) -> Result<f64> {
    let target = k as f64 * PI;
    let g = |lam: f64| prufer_angle(dim, theta0, ell, lam).map(|v| v - target);
    let lo = lower.max(0.0);
    let glo = g(lo)?;
    if glo >= 0.0 {
        return Err(Error::ConvergenceFailure(format!(
            "lower bracket {lo} already beyond root {k} of channel {ell}"
        )));
    }
    let mut hi = (lo * 2.0).max(channel_floor(dim, theta0, ell) + 1.0).max(1.0);
    let mut ghi = g(hi)?;
    let mut tries = 0;
    while ghi <= 0.0 {
        hi *= 2.0;
        ghi = g(hi)?;
        tries += 1;
        if tries > 80 {
            return Err(Error::ConvergenceFailure(format!("could not bracket root {k} of channel {ell}")));
        }
    }
    brent(g, lo, hi, glo, ghi)
}

pub fn channel_eigenvalue(dim: u32, theta0: f64, ell: u32, k: u32) -> Result<f64> {
    channel_eigenvalue_above(dim, theta0, ell, k, 0.0)
}

/// Up to `count` smallest eigenvalues of channel ell, stopping early past `cutoff`.
pub fn channel_eigenvalues(dim: u32, theta0: f64, ell: u32, count: usize, cutoff: Option<f64>) -> Result<Vec<f64>> {
    if !(theta0 > 0.0 && theta0 < PI) {
        return Err(Error::InvalidAngle(theta0));
    }
    let mut out = Vec::with_capacity(count);
    let mut lower = 0.0;
    for k in 1..=count as u32 {
        let lam = channel_eigenvalue_above(dim, theta0, ell, k, lower)?;
        let stop = cutoff.is_some_and(|c| lam > c);
        out.push(lam);
        if stop {
            break;
        }
        lower = lam;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hemisphere_channels_match_closed_form() {
        for dim in [2u32, 3, 4] {
            let ells: Vec<u32> = if dim == 2 { vec![0, 1] } else { vec![0, 1, 2] };
            for ell in ells {
                for k in 1..=3u32 {
                    let j = (ell + 2 * k - 1) as f64;
                    let expect = j * (j + dim as f64 - 2.0);
                    let got = channel_eigenvalue(dim, FRAC_PI_2, ell, k).unwrap();
                    assert!((got - expect).abs() <= 1e-9 * expect, "N={dim} l={ell} k={k}: {got} vs {expect}");
                }
            }
        }
    }

    #[test]
    fn arc_closed_form() {
        let theta0 = 0.7;
        for k in 1..=4u32 {
            let ell = (k + 1) % 2;
            let idx = k.div_ceil(2);
            let got = channel_eigenvalue(2, theta0, ell, idx).unwrap();
            let expect = (k as f64 * PI / (2.0 * theta0)).powi(2);
            assert!((got - expect).abs() <= 1e-9 * expect, "k={k}: {got} vs {expect}");
        }
    }

    #[test]
    fn series_coefficient_matches_legendre() {
        // N = 3, ell = 0: P_nu(cos theta) = 1 - lambda theta^2 / 4 + ...
        assert!((series_coefficient(3, 0, 2.0) + 0.5).abs() < 1e-15);
    }
}
