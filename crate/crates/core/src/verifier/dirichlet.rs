//! Doubly clamped quotient on a cap, discretized with Hermite cubic elements in the polar angle.

use crate::constants::{gamma_triple, ConeParams};
use crate::error::{Error, Result};
use crate::linalg::{smallest_generalized_by, BandMatrix, GenEig};
use crate::quadrature::GL8;
use crate::spectra::shooting::c_ell;
use serde::Serialize;

const EIG_TOL: f64 = 1e-11;

/// Discrete spaces and matrices of every harmonic channel up to `ell_max`.
#[derive(Clone, Debug)]
pub struct DirichletSpace {
    pub params: ConeParams,
    pub theta0: f64,
    pub grid_size: usize,
    pub channels: Vec<Channel>,
    pub mu0: f64,
    pub argmin_ell: u32,
}

#[derive(Clone, Debug)]
pub struct Channel {
    pub ell: u32,
    /// Global degree of freedom (2i value, 2i + 1 slope at node i) for each reduced index.
    pub free: Vec<usize>,
    pub k: BandMatrix,
    pub s: BandMatrix,
    pub m: BandMatrix,
    /// Smallest eigenpair; `value` is recomputed from the pointwise forms.
    pub min: GenEig,
    samples: Vec<Sample>,
    map: Vec<Option<usize>>,
    gamma_hat2: f64,
}

/// Quadrature point data: element index, weight, potential, and per basis (a, phi, phi').
#[derive(Clone, Debug)]
struct Sample {
    element: usize,
    weight: f64,
    pot: f64,
    basis: [[f64; 3]; 4],
}

fn hermite(xi: f64, h: f64) -> [[f64; 3]; 4] {
    let (x2, x3) = (xi * xi, xi * xi * xi);
    [
        [1.0 - 3.0 * x2 + 2.0 * x3, (-6.0 * xi + 6.0 * x2) / h, (-6.0 + 12.0 * xi) / (h * h)],
        [h * (xi - 2.0 * x2 + x3), 1.0 - 4.0 * xi + 3.0 * x2, (-4.0 + 6.0 * xi) / h],
        [3.0 * x2 - 2.0 * x3, (6.0 * xi - 6.0 * x2) / h, (6.0 - 12.0 * xi) / (h * h)],
        [h * (-x2 + x3), -2.0 * xi + 3.0 * x2, (-2.0 + 6.0 * xi) / h],
    ]
}

fn constrained(ell: u32, n: usize) -> Vec<usize> {
    let mut c = match ell {
        0 => vec![1],
        1 => vec![0],
        _ => vec![0, 1],
    };
    c.extend([2 * n, 2 * n + 1]);
    c
}

impl Channel {
    fn assemble(p: &ConeParams, theta0: f64, n: usize, ell: u32) -> Result<Channel> {
        let g = gamma_triple(p);
        let dim = p.dim as f64;
        let c = c_ell(p.dim, ell);
        let h = theta0 / n as f64;
        let total = 2 * (n + 1);
        let fixed = constrained(ell, n);
        let mut map = vec![None; total];
        let mut free = Vec::new();
        for dof in 0..total {
            if !fixed.contains(&dof) {
                map[dof] = Some(free.len());
                free.push(dof);
            }
        }
        let size = free.len();
        let (mut k, mut s, mut m) = (BandMatrix::zeros(size, 3), BandMatrix::zeros(size, 3), BandMatrix::zeros(size, 3));
        let mut samples = Vec::with_capacity(n * GL8.len());
        for e in 0..n {
            let dofs = [2 * e, 2 * e + 1, 2 * e + 2, 2 * e + 3];
            let mut lk = [[0.0; 4]; 4];
            let mut ls = [[0.0; 4]; 4];
            let mut lm = [[0.0; 4]; 4];
            for (x, wq) in GL8 {
                let xi = 0.5 * (x + 1.0);
                let theta = (e as f64 + xi) * h;
                let (sn, cs) = theta.sin_cos();
                let w = sn.powi(p.dim as i32 - 2) * wq * 0.5 * h;
                let hb = hermite(xi, h);
                let pot = c / (sn * sn);
                let mut basis = [[0.0; 3]; 4];
                for (b, src) in basis.iter_mut().zip(&hb) {
                    *b = [-src[2] - (dim - 2.0) * cs / sn * src[1] + (pot + g.gamma) * src[0], src[0], src[1]];
                }
                for i in 0..4 {
                    for j in 0..4 {
                        lk[i][j] += basis[i][0] * basis[j][0] * w;
                        ls[i][j] += (basis[i][2] * basis[j][2] + pot * basis[i][1] * basis[j][1]) * w;
                        lm[i][j] += basis[i][1] * basis[j][1] * w;
                    }
                }
                samples.push(Sample { element: e, weight: w, pot, basis });
            }
            for i in 0..4 {
                for j in 0..=i {
                    if let (Some(ri), Some(rj)) = (map[dofs[i]], map[dofs[j]]) {
                        k.add(ri, rj, lk[i][j]);
                        s.add(ri, rj, ls[i][j]);
                        m.add(ri, rj, lm[i][j]);
                    }
                }
            }
        }
        let gamma_hat2 = g.gamma_hat * g.gamma_hat;
        let q = s.shifted(&m, -gamma_hat2);
        let placeholder = GenEig { value: 0.0, vector: Vec::new(), certified_lower: 0.0, iterations: 0 };
        let mut ch = Channel { ell, free, k, s, m, min: placeholder, samples, map, gamma_hat2 };
        let accurate = |v: &[f64]| ch.quotient(v);
        let mut min = smallest_generalized_by(&ch.k, &q, EIG_TOL, Some(&accurate))?;
        min.value = ch.quotient(&min.vector);
        ch.min = min;
        Ok(ch)
    }

    /// (norm, grad, lap) of a reduced coefficient vector, summed pointwise as squares.
    pub fn forms(&self, v: &[f64]) -> (f64, f64, f64) {
        let (mut norm, mut grad, mut lap) = (0.0, 0.0, 0.0);
        for smp in &self.samples {
            let mut val = [0.0; 3];
            for (i, b) in smp.basis.iter().enumerate() {
                if let Some(r) = self.map[2 * smp.element + i] {
                    for (acc, x) in val.iter_mut().zip(b) {
                        *acc += v[r] * x;
                    }
                }
            }
            lap += val[0] * val[0] * smp.weight;
            norm += val[1] * val[1] * smp.weight;
            grad += (val[2] * val[2] + smp.pot * val[1] * val[1]) * smp.weight;
        }
        (norm, grad, lap)
    }

    /// Discrete quotient of a reduced vector.
    pub fn quotient(&self, v: &[f64]) -> f64 {
        let (norm, grad, lap) = self.forms(v);
        lap / (grad + self.gamma_hat2 * norm)
    }
}

impl DirichletSpace {
    pub fn build(p: &ConeParams, theta0: f64, ell_max: u32, grid_size: usize) -> Result<Self> {
        if !(theta0 > 0.0 && theta0 < std::f64::consts::PI) {
            return Err(Error::InvalidAngle(theta0));
        }
        if grid_size < 8 {
            return Err(Error::InvalidParams(format!("grid size {grid_size} is too small")));
        }
        let top = if p.dim == 2 { ell_max.min(1) } else { ell_max };
        let channels = (0..=top).map(|ell| Channel::assemble(p, theta0, grid_size, ell)).collect::<Result<Vec<_>>>()?;
        let best = channels
            .iter()
            .min_by(|a, b| a.min.value.total_cmp(&b.min.value))
            .ok_or_else(|| Error::EigensolveFailure("no channels".into()))?;
        Ok(DirichletSpace {
            params: p.clone(),
            theta0,
            grid_size,
            mu0: best.min.value,
            argmin_ell: best.ell,
            channels,
        })
    }

    pub fn channel(&self, ell: u32) -> Option<&Channel> {
        self.channels.iter().find(|c| c.ell == ell)
    }

    /// Hermite interpolant of (f, f') in the reduced space of channel `ell`.
    pub fn interpolate(&self, ell: u32, f: impl Fn(f64) -> (f64, f64)) -> Option<Vec<f64>> {
        let ch = self.channel(ell)?;
        let h = self.theta0 / self.grid_size as f64;
        Some(
            ch.free
                .iter()
                .map(|dof| {
                    let (v, d) = f((dof / 2) as f64 * h);
                    if dof % 2 == 0 {
                        v
                    } else {
                        d
                    }
                })
                .collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChannelEstimate {
    pub ell: u32,
    pub mu0: f64,
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Refinement {
    pub coarse_grid_size: usize,
    pub coarse_mu0: f64,
    pub rel_delta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DirichletEstimate {
    pub mu0: f64,
    pub argmin_ell: u32,
    pub grid_size: usize,
    pub per_mode: Vec<ChannelEstimate>,
    /// Comparison against half the grid size.
    pub refinement: Refinement,
}

/// Minimum over channels ell <= ell_max of the discrete clamped quotient on cap(theta0).
pub fn dirichlet_estimate(p: &ConeParams, theta0: f64, ell_max: u32, grid_size: usize) -> Result<DirichletEstimate> {
    if grid_size < 100 {
        return Err(Error::InvalidParams(format!("grid size must be at least 100, got {grid_size}")));
    }
    let (fine, coarse) = rayon::join(
        || DirichletSpace::build(p, theta0, ell_max, grid_size),
        || DirichletSpace::build(p, theta0, ell_max, grid_size / 2),
    );
    let (fine, coarse) = (fine?, coarse?);
    let per_mode = fine
        .channels
        .iter()
        .map(|c| ChannelEstimate { ell: c.ell, mu0: c.min.value, iterations: c.min.iterations })
        .collect();
    Ok(DirichletEstimate {
        mu0: fine.mu0,
        argmin_ell: fine.argmin_ell,
        grid_size,
        per_mode,
        refinement: Refinement {
            coarse_grid_size: coarse.grid_size,
            coarse_mu0: coarse.mu0,
            rel_delta: (coarse.mu0 - fine.mu0).abs() / fine.mu0.abs().max(f64::MIN_POSITIVE),
        },
    })
}
