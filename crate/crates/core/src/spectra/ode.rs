//! Adaptive Dormand-Prince 5(4) integration for small fixed-size systems.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct OdeConfig {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeConfig {
    fn default() -> Self {
        OdeConfig { rtol: 1e-12, atol: 1e-13, max_steps: 200_000 }
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates y' = f(x, y) from `x0` to `x1` and returns y(x1).
pub fn integrate<const D: usize, F>(f: F, x0: f64, x1: f64, y0: [f64; D], cfg: &OdeConfig) -> Result<[f64; D]>
where
    F: Fn(f64, &[f64; D]) -> [f64; D],
{
    let span = x1 - x0;
    if span == 0.0 {
        return Ok(y0);
    }
    let dir = span.signum();
    let mut x = x0;
    let mut y = y0;
    let mut h = dir * (span.abs() * 1e-3).max(1e-12 * x0.abs().max(1.0)).min(x0.abs().max(1e-8));
    let mut k = [[0.0; D]; 7];
    k[0] = f(x, &y);
    for _ in 0..cfg.max_steps {
        if (x1 - x) * dir <= 0.0 {
            return Ok(y);
        }
        if (x + h - x1) * dir > 0.0 {
            h = x1 - x;
        }
        for s in 1..7 {
            let mut ys = y;
            for (d, v) in ys.iter_mut().enumerate() {
                for j in 0..s {
                    *v += h * A[s][j] * k[j][d];
                }
            }
            k[s] = f(x + C[s] * h, &ys);
        }
        let mut y5 = y;
        let mut err = 0.0f64;
        for d in 0..D {
            let mut inc5 = 0.0;
            let mut inc4 = 0.0;
            for s in 0..7 {
                inc5 += B5[s] * k[s][d];
                inc4 += B4[s] * k[s][d];
            }
            y5[d] = y[d] + h * inc5;
            let sc = cfg.atol + cfg.rtol * y[d].abs().max(y5[d].abs());
            err = err.max((h * (inc5 - inc4)).abs() / sc);
        }
        if !err.is_finite() {
            h *= 0.1;
            continue;
        }
        if err <= 1.0 {
            x += h;
            y = y5;
            // FSAL: the last stage is f at the accepted point
            k[0] = k[6];
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= fac;
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
        }
        if h.abs() < 1e-15 * x.abs().max(1e-300) {
            return Err(Error::ConvergenceFailure(format!("step size underflow at x = {x}")));
        }
    }
    Err(Error::ConvergenceFailure("ODE step budget exhausted".into()))
}
