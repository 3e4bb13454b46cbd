//! Small dense-free linear algebra: symmetric tridiagonal bisection and banded Cholesky.

use crate::error::{Error, Result};

/// Number of eigenvalues strictly below `x` of the symmetric tridiagonal matrix (diag, off).
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let e2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = diag[i] - x - if i == 0 { 0.0 } else { e2 / q };
        if q == 0.0 {
            q = f64::EPSILON * (diag[i].abs() + x.abs() + 1.0);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The k-th smallest eigenvalue (0-based) by bisection on the Sturm count.
pub fn tridiagonal_eigenvalue(diag: &[f64], off: &[f64], k: usize) -> Result<f64> {
    if k >= diag.len() {
        return Err(Error::EigensolveFailure(format!("index {k} exceeds matrix order {}", diag.len())));
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..diag.len() {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i < off.len() { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diag, off, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Symmetric positive definite band matrix in lower storage: `band[i][d]` holds A[i][i-d].
#[derive(Clone, Debug)]
pub struct BandMatrix {
    pub n: usize,
    pub bw: usize,
    pub band: Vec<Vec<f64>>,
}

impl BandMatrix {
    pub fn zeros(n: usize, bw: usize) -> Self {
        BandMatrix { n, bw, band: vec![vec![0.0; bw + 1]; n] }
    }

    /// Adds `v` to A[i][j] (and implicitly A[j][i]); only |i - j| <= bw is stored.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        debug_assert!(r - c <= self.bw);
        self.band[r][r - c] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        if r - c > self.bw {
            0.0
        } else {
            self.band[r][r - c]
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            for d in 0..=self.bw.min(i) {
                let j = i - d;
                let a = self.band[i][d];
                y[i] += a * x[j];
                if d > 0 {
                    y[j] += a * x[i];
                }
            }
        }
        y
    }

    /// self - sigma * other, assuming equal shapes.
    pub fn shifted(&self, other: &BandMatrix, sigma: f64) -> BandMatrix {
        let mut out = self.clone();
        for (ro, rb) in out.band.iter_mut().zip(&other.band) {
            for (a, b) in ro.iter_mut().zip(rb) {
                *a -= sigma * b;
            }
        }
        out
    }

    /// Banded Cholesky factor L (same storage), or `None` if the matrix is not positive definite.
    pub fn cholesky(&self) -> Option<BandMatrix> {
        let mut l = BandMatrix::zeros(self.n, self.bw);
        for i in 0..self.n {
            let j0 = i.saturating_sub(self.bw);
            for j in j0..=i {
                let mut s = self.get(i, j);
                let k0 = j0.max(j.saturating_sub(self.bw));
                for k in k0..j {
                    s -= l.band[i][i - k] * l.band[j][j - k];
                }
                if i == j {
                    if s <= 0.0 || !s.is_finite() {
                        return None;
                    }
                    l.band[i][0] = s.sqrt();
                } else {
                    l.band[i][i - j] = s / l.band[j][0];
                }
            }
        }
        Some(l)
    }

    /// Solves L L^T x = b with `self` holding the Cholesky factor.
    pub fn cholesky_solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y = b.to_vec();
        for i in 0..n {
            let j0 = i.saturating_sub(self.bw);
            let mut s = y[i];
            for k in j0..i {
                s -= self.band[i][i - k] * y[k];
            }
            y[i] = s / self.band[i][0];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..(i + self.bw + 1).min(n) {
                s -= self.band[k][k - i] * y[k];
            }
            y[i] = s / self.band[i][0];
        }
        y
    }
}

impl BandMatrix {
    /// sum |A_ij| |x_i| |x_j|, the rounding scale of x^T A x.
    pub fn abs_quadratic(&self, x: &[f64]) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for d in 0..=self.bw.min(i) {
                let t = self.band[i][d].abs() * x[i].abs() * x[i - d].abs();
                s += if d > 0 { 2.0 * t } else { t };
            }
        }
        s
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Clone, Debug)]
pub struct GenEig {
    pub value: f64,
    pub vector: Vec<f64>,
    /// Largest shift at which K - sigma Q was certified positive definite.
    pub certified_lower: f64,
    pub iterations: usize,
}

/// Smallest eigenpair of K x = mu Q x (K symmetric, Q SPD) by shifted inverse iteration.
///
/// A successful Cholesky factorization of K - sigma Q proves sigma < mu_min, which is
/// used to move the shift towards the eigenvalue.
pub fn smallest_generalized(k: &BandMatrix, q: &BandMatrix, rel_tol: f64) -> Result<GenEig> {
    smallest_generalized_by(k, q, rel_tol, None)
}

/// As [`smallest_generalized`], with convergence judged on `quotient` when given. It must
/// return the Rayleigh quotient of K against Q to better accuracy than the matrix products,
/// for instance from a pointwise sum of squares; the rounding floor is then not needed.
pub fn smallest_generalized_by(
    k: &BandMatrix,
    q: &BandMatrix,
    rel_tol: f64,
    quotient: Option<&dyn Fn(&[f64]) -> f64>,
) -> Result<GenEig> {
    let n = k.n;
    if n == 0 {
        return Err(Error::EigensolveFailure("empty system".into()));
    }
    let mut sigma = 0.0;
    let mut fact = match k.cholesky() {
        Some(f) => f,
        None => {
            // K may be indefinite only through rounding; back off below zero
            let mut s = -1.0;
            loop {
                if let Some(f) = k.shifted(q, s).cholesky() {
                    sigma = s;
                    break f;
                }
                s *= 4.0;
                if s < -1e12 {
                    return Err(Error::EigensolveFailure("no positive definite shift found".into()));
                }
            }
        }
    };
    let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i * 7919) % 13) as f64).collect();
    let mut rq = f64::INFINITY;
    for it in 0..500 {
        let qx = q.mul_vec(&x);
        let mut y = fact.cholesky_solve(&qx);
        let norm = dot(&y, &q.mul_vec(&y)).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::EigensolveFailure("inverse iteration breakdown".into()));
        }
        y.iter_mut().for_each(|v| *v /= norm);
        x = y;
        let (new_rq, floor) = match quotient {
            Some(f) => (f(&x), 0.0),
            // changes below the rounding floor of x^T K x cannot be resolved
            None => (dot(&x, &k.mul_vec(&x)), 64.0 * f64::EPSILON * k.abs_quadratic(&x)),
        };
        let change = (new_rq - rq).abs();
        let converged = change <= rel_tol * new_rq.abs().max(1e-300) || change <= floor;
        rq = new_rq;
        if converged && it > 2 {
            return Ok(GenEig { value: rq, vector: x, certified_lower: sigma, iterations: it + 1 });
        }
        // try to move the shift up to just below the current Rayleigh quotient
        let gap = rq - sigma;
        if gap > 0.0 && it % 2 == 1 {
            let trial = rq - 1e-3 * gap;
            if let Some(f) = k.shifted(q, trial).cholesky() {
                sigma = trial;
                fact = f;
            }
        }
    }
    Err(Error::EigensolveFailure("inverse iteration did not converge".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sturm_bisection_second_difference() {
        let n = 50;
        let diag = vec![2.0; n];
        let off = vec![-1.0; n - 1];
        for k in 0..5 {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            let got = tridiagonal_eigenvalue(&diag, &off, k).unwrap();
            assert!((got - exact).abs() < 1e-13);
        }
    }

    #[test]
    fn banded_cholesky_solves() {
        let n = 20;
        let mut a = BandMatrix::zeros(n, 2);
        for i in 0..n {
            a.add(i, i, 6.0);
            if i >= 1 {
                a.add(i, i - 1, -2.0);
            }
            if i >= 2 {
                a.add(i, i - 2, 0.5);
            }
        }
        let x: Vec<f64> = (0..n).map(|i| i as f64 - 3.0).collect();
        let b = a.mul_vec(&x);
        let l = a.cholesky().unwrap();
        let y = l.cholesky_solve(&b);
        for (u, v) in x.iter().zip(&y) {
            assert!((u - v).abs() < 1e-12);
        }
        let neg = a.shifted(&BandMatrix { n, bw: 2, band: (0..n).map(|_| vec![1.0, 0.0, 0.0]).collect() }, 100.0);
        assert!(neg.cholesky().is_none());
    }

    #[test]
    fn generalized_smallest_eigenvalue() {
        let n = 40;
        let mut k = BandMatrix::zeros(n, 1);
        let mut q = BandMatrix::zeros(n, 1);
        for i in 0..n {
            k.add(i, i, 2.0);
            q.add(i, i, 2.0);
            if i > 0 {
                k.add(i, i - 1, -1.0);
            }
        }
        let e = smallest_generalized(&k, &q, 1e-14).unwrap();
        let exact = (2.0 - 2.0 * (std::f64::consts::PI / (n + 1) as f64).cos()) / 2.0;
        assert!((e.value - exact).abs() < 1e-12);
        assert!(e.certified_lower <= e.value);
    }
}
