//! Drivers that resolve a domain and selection into a finite eigenvalue set on which
//! the minimizations are exact.

use crate::constants::{hr_cutoff, hr_term, rellich_cutoff, rellich_term, ConeParams};
use crate::error::{Error, Result};
use crate::scalar::rational_from_f64;
use crate::spectra::{domain_spectrum, resolve_selection, LambdaSelection, SpectrumEntry, SphericalDomain};
use num::rational::BigRational;

/// Which minimized term decides the truncation level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    HardyRellich,
    Rellich,
}

const START_SIZE: usize = 8;
const MAX_SIZE: usize = 1 << 14;

fn finite_selection_needs_more(selection: &LambdaSelection, largest: f64) -> bool {
    match selection {
        LambdaSelection::Singleton(v) => *v > largest,
        LambdaSelection::Explicit(vs) => vs.iter().any(|v| *v > largest),
        _ => false,
    }
}

/// Truncated selection that contains every eigenvalue able to attain the minimum,
/// plus the first one past the cutoff.
pub fn resolve_lambdas(
    p: &ConeParams,
    domain: SphericalDomain,
    selection: &LambdaSelection,
    objective: Objective,
) -> Result<Vec<SpectrumEntry>> {
    let mut size = START_SIZE;
    loop {
        let spectrum = domain_spectrum(p.dim, domain, size)?;
        let largest = spectrum.largest();
        let grow = |size: usize| -> Result<usize> {
            if size >= MAX_SIZE {
                Err(Error::ConvergenceFailure(format!("spectrum truncation did not settle below {MAX_SIZE} entries")))
            } else {
                Ok(size * 2)
            }
        };
        if selection.is_finite() {
            if finite_selection_needs_more(selection, largest) {
                size = grow(size)?;
                continue;
            }
            return resolve_selection(&spectrum, selection);
        }
        let resolved = match resolve_selection(&spectrum, selection) {
            Ok(r) => r,
            Err(Error::EmptyLambda) => {
                size = grow(size)?;
                continue;
            }
            Err(e) => return Err(e),
        };
        let cutoff = match objective {
            Objective::HardyRellich => {
                let best = resolved.iter().map(|e| hr_term(p, &e.lambda)).fold(f64::INFINITY, f64::min);
                hr_cutoff(p, &best)
            }
            Objective::Rellich => rellich_cutoff(p),
        };
        // the last resolved entry must lie past the cutoff
        let last = resolved.last().map(|e| e.lambda).unwrap_or(f64::NEG_INFINITY);
        if last > cutoff || (objective == Objective::Rellich && last >= cutoff) {
            let mut out = Vec::new();
            for e in resolved {
                let past = e.lambda > cutoff || (objective == Objective::Rellich && e.lambda >= cutoff);
                out.push(e);
                if past {
                    break;
                }
            }
            return Ok(out);
        }
        size = grow(size)?;
    }
}

/// Minimum over a resolved set of the objective term, for quick float use.
pub fn objective_minimum(p: &ConeParams, entries: &[SpectrumEntry], objective: Objective) -> Option<f64> {
    entries
        .iter()
        .map(|e| match objective {
            Objective::HardyRellich => hr_term(p, &e.lambda),
            Objective::Rellich => rellich_term(p, &e.lambda),
        })
        .min_by(f64::total_cmp)
}

/// Parameters and eigenvalues in the most exact arithmetic available.
#[derive(Clone, Debug, PartialEq)]
pub enum ScalarSet {
    Exact(ConeParams<BigRational>, Vec<BigRational>),
    Float(ConeParams<f64>, Vec<f64>),
}

impl ScalarSet {
    /// Exact whenever alpha is rational and every eigenvalue carries an exact value.
    pub fn build(dim: u32, alpha: f64, alpha_exact: Option<BigRational>, entries: &[SpectrumEntry]) -> Result<Self> {
        let exact_lambdas: Option<Vec<BigRational>> = entries.iter().map(|e| e.exact.clone()).collect();
        let alpha_exact = alpha_exact.or_else(|| rational_from_f64(alpha));
        match (alpha_exact, exact_lambdas) {
            (Some(a), Some(ls)) => Ok(ScalarSet::Exact(ConeParams::new(dim, a)?, ls)),
            _ => Ok(ScalarSet::Float(ConeParams::new(dim, alpha)?, entries.iter().map(|e| e.lambda).collect())),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ScalarSet::Exact(..))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::hardy_rellich_constant;

    #[test]
    fn truncation_matches_long_scan() {
        for n in 2..9u32 {
            for a in [-3.0, -1.0, 0.0, 0.5, 2.0, 4.0, 7.5] {
                let p = ConeParams::new(n, a).unwrap();
                let short: Vec<f64> = resolve_lambdas(&p, SphericalDomain::FullSphere, &LambdaSelection::All, Objective::HardyRellich)
                    .unwrap()
                    .iter()
                    .map(|e| e.lambda)
                    .collect();
                let long: Vec<f64> = (0..400).map(|j| (j * (j + n - 2)) as f64).collect();
                let a1 = hardy_rellich_constant(&p, &short).unwrap();
                let a2 = hardy_rellich_constant(&p, &long).unwrap();
                assert_eq!(a1.value, a2.value, "N={n} alpha={a}");
            }
        }
    }

    #[test]
    fn rellich_truncation_reaches_minus_gamma() {
        let p = ConeParams::new(3, -20.0).unwrap();
        let l = resolve_lambdas(&p, SphericalDomain::FullSphere, &LambdaSelection::All, Objective::Rellich).unwrap();
        assert!(l.last().unwrap().lambda >= -crate::constants::gamma_triple(&p).gamma);
    }

    #[test]
    fn exact_when_possible() {
        let p = ConeParams::new(4, 0.0).unwrap();
        let l = resolve_lambdas(&p, SphericalDomain::FullSphere, &LambdaSelection::All, Objective::HardyRellich).unwrap();
        assert!(ScalarSet::build(4, 0.0, None, &l).unwrap().is_exact());
        let c = resolve_lambdas(&p, SphericalDomain::cap(1.0).unwrap(), &LambdaSelection::All, Objective::HardyRellich).unwrap();
        assert!(!ScalarSet::build(4, 0.0, None, &c).unwrap().is_exact());
    }

    #[test]
    fn singleton_beyond_first_window() {
        let p = ConeParams::new(3, 0.0).unwrap();
        let l = resolve_lambdas(&p, SphericalDomain::FullSphere, &LambdaSelection::Singleton(420.0), Objective::HardyRellich)
            .unwrap();
        assert_eq!(l.len(), 1);
        assert!(resolve_lambdas(&p, SphericalDomain::FullSphere, &LambdaSelection::Singleton(5.0), Objective::HardyRellich).is_err());
    }
}
