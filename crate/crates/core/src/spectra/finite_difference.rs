//! Conservative finite-volume discretization of a cap channel, used as an independent oracle.

use crate::error::{Error, Result};
use crate::linalg::tridiagonal_eigenvalue;
use std::f64::consts::PI;

const GL8: [(f64, f64); 8] = [
    (-0.960_289_856_497_536_2, 0.101_228_536_290_376_26),
    (-0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (-0.525_532_409_916_329_0, 0.313_706_645_877_887_3),
    (-0.183_434_642_495_649_8, 0.362_683_783_378_362_0),
    (0.183_434_642_495_649_8, 0.362_683_783_378_362_0),
    (0.525_532_409_916_329_0, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (0.960_289_856_497_536_2, 0.101_228_536_290_376_26),
];

fn cell_integral(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    GL8.iter().map(|(x, w)| w * f(c + h * x)).sum::<f64>() * h
}

/// The `count` smallest eigenvalues of channel ell on an `n`-interval grid.
pub fn channel_eigenvalues_fd(dim: u32, theta0: f64, ell: u32, count: usize, n: usize) -> Result<Vec<f64>> {
    if !(theta0 > 0.0 && theta0 < PI) {
        return Err(Error::InvalidAngle(theta0));
    }
    if n < 4 {
        return Err(Error::InvalidParams("grid needs at least 4 intervals".into()));
    }
    let p = dim as i32 - 2;
    let c = ell as f64 * (ell as f64 + dim as f64 - 3.0);
    let h = theta0 / n as f64;
    let w = |t: f64| t.sin().powi(p);
    let first = if ell == 0 { 0 } else { 1 };
    let nodes: Vec<usize> = (first..n).collect();
    let mut diag = Vec::with_capacity(nodes.len());
    let mut off = Vec::with_capacity(nodes.len());
    let mut mass = Vec::with_capacity(nodes.len());
    for &i in &nodes {
        let t = i as f64 * h;
        let (a, b) = ((t - 0.5 * h).max(0.0), t + 0.5 * h);
        let wl = if i == 0 { 0.0 } else { w(t - 0.5 * h) };
        let wr = w(t + 0.5 * h);
        let q = if c == 0.0 { 0.0 } else { cell_integral(|s| c * s.sin().powi(p - 2), a, b) };
        diag.push((wl + wr) / h + q);
        mass.push(cell_integral(w, a, b));
        if i + 1 < n {
            off.push(-wr / h);
        }
    }
    let scale: Vec<f64> = mass.iter().map(|m| 1.0 / m.sqrt()).collect();
    for (i, d) in diag.iter_mut().enumerate() {
        *d *= scale[i] * scale[i];
    }
    for (i, o) in off.iter_mut().enumerate() {
        *o *= scale[i] * scale[i + 1];
    }
    (0..count).map(|k| tridiagonal_eigenvalue(&diag, &off, k)).collect()
}

/// Richardson extrapolation of two second-order runs on grids n and 2n.
pub fn channel_eigenvalues_richardson(dim: u32, theta0: f64, ell: u32, count: usize, n: usize) -> Result<Vec<f64>> {
    let coarse = channel_eigenvalues_fd(dim, theta0, ell, count, n)?;
    let fine = channel_eigenvalues_fd(dim, theta0, ell, count, 2 * n)?;
    Ok(coarse.iter().zip(&fine).map(|(c, f)| (4.0 * f - c) / 3.0).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fd_converges_on_hemisphere() {
        let got = channel_eigenvalues_fd(3, PI / 2.0, 0, 2, 2000).unwrap();
        assert!((got[0] - 2.0).abs() < 1e-5 * 2.0, "{got:?}");
        assert!((got[1] - 12.0).abs() < 1e-5 * 12.0, "{got:?}");
    }
}
