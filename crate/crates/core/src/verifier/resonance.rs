//! Detection of the degenerate case -gamma in the selected eigenvalues.

use crate::constants::{gamma_triple, ConeParams};
use crate::error::Result;
use crate::spectra::{resolve_selection, LambdaSelection, Spectrum, CAP_MEMBERSHIP_TOL};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResonantAlphas {
    pub lambda: f64,
    /// Both weights alpha with gamma_alpha = -lambda.
    pub alphas: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResonanceReport {
    pub resonant: bool,
    pub resonant_lambda: Option<f64>,
    pub minus_gamma: f64,
    pub alpha_roots: Vec<ResonantAlphas>,
}

/// gamma_alpha = -lambda exactly when alpha = 2 +- sqrt((N - 2)^2 + 4 lambda).
pub fn resonant_alphas(dim: u32, lambda: f64) -> [f64; 2] {
    let r = (((dim as f64) - 2.0).powi(2) + 4.0 * lambda).sqrt();
    [2.0 - r, 2.0 + r]
}

pub fn resonance_report(p: &ConeParams, spectrum: &Spectrum, selection: &LambdaSelection) -> Result<ResonanceReport> {
    let entries = resolve_selection(spectrum, selection)?;
    let minus_gamma = -gamma_triple(p).gamma;
    let tol = if spectrum.domain.is_exact() { 0.0 } else { CAP_MEMBERSHIP_TOL };
    let resonant_lambda = entries.iter().map(|e| e.lambda).find(|l| (l - minus_gamma).abs() <= tol);
    let alpha_roots =
        entries.iter().map(|e| ResonantAlphas { lambda: e.lambda, alphas: resonant_alphas(p.dim, e.lambda) }).collect();
    Ok(ResonanceReport { resonant: resonant_lambda.is_some(), resonant_lambda, minus_gamma, alpha_roots })
}
