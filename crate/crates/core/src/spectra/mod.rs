//! Dirichlet Laplace-Beltrami spectra on the sphere, the hemisphere and geodesic caps.

pub mod finite_difference;
pub mod ode;
pub mod shooting;

use crate::error::{Error, Result};
use num::rational::BigRational;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

/// Absolute tolerance for membership tests against floating (cap) spectra.
pub const CAP_MEMBERSHIP_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "theta0")]
pub enum SphericalDomain {
    FullSphere,
    Hemisphere,
    Cap(f64),
}

impl SphericalDomain {
    pub fn cap(theta0: f64) -> Result<Self> {
        if !(theta0 > 0.0 && theta0 < std::f64::consts::PI) {
            return Err(Error::InvalidAngle(theta0));
        }
        Ok(SphericalDomain::Cap(theta0))
    }

    /// Polar opening angle; `None` for the full sphere.
    pub fn theta0(&self) -> Option<f64> {
        match self {
            SphericalDomain::FullSphere => None,
            SphericalDomain::Hemisphere => Some(std::f64::consts::FRAC_PI_2),
            SphericalDomain::Cap(t) => Some(*t),
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, SphericalDomain::Cap(_))
    }
}

impl fmt::Display for SphericalDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SphericalDomain::FullSphere => write!(f, "sphere"),
            SphericalDomain::Hemisphere => write!(f, "hemisphere"),
            SphericalDomain::Cap(t) => write!(f, "cap:{t}"),
        }
    }
}

impl FromStr for SphericalDomain {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "sphere" => Ok(SphericalDomain::FullSphere),
            "hemisphere" => Ok(SphericalDomain::Hemisphere),
            other => {
                let t = other
                    .strip_prefix("cap:")
                    .ok_or_else(|| Error::InvalidParams(format!("unknown domain '{other}'")))?;
                let theta: f64 = t
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidParams(format!("bad cap angle '{t}'")))?;
                SphericalDomain::cap(theta)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeLabel {
    /// Degree j of a spherical harmonic (sphere and hemisphere).
    Degree(u32),
    /// Order ell of the S^{N-2} harmonic factor and radial index k >= 1 (caps).
    Channel { ell: u32, k: u32 },
}

impl ModeLabel {
    /// Degree used by tail selections. Cap channels continue the hemisphere numbering
    /// j = ell + 2k - 1, which is exact at theta0 = pi/2.
    pub fn degree(&self) -> u32 {
        match *self {
            ModeLabel::Degree(j) => j,
            ModeLabel::Channel { ell, k } => ell + 2 * k - 1,
        }
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModeLabel::Degree(j) => write!(f, "j={j}"),
            ModeLabel::Channel { ell, k } => write!(f, "l={ell},k={k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumEntry {
    pub lambda: f64,
    pub exact: Option<BigRational>,
    pub label: ModeLabel,
    pub multiplicity: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub dim: u32,
    pub domain: SphericalDomain,
    pub entries: Vec<SpectrumEntry>,
    pub principal: f64,
}

impl Spectrum {
    fn from_entries(dim: u32, domain: SphericalDomain, mut entries: Vec<SpectrumEntry>) -> Result<Self> {
        entries.sort_by(|a, b| a.lambda.total_cmp(&b.lambda).then(a.label.cmp(&b.label)));
        let principal = entries.first().ok_or(Error::EmptyLambda)?.lambda;
        Ok(Spectrum { dim, domain, entries, principal })
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.lambda).collect()
    }

    /// Eigenvalues repeated according to multiplicity.
    pub fn expanded(&self) -> Vec<f64> {
        self.entries
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.lambda, e.multiplicity as usize))
            .collect()
    }

    pub fn largest(&self) -> f64 {
        self.entries.last().map(|e| e.lambda).unwrap_or(0.0)
    }
}

/// Binomial coefficient, zero whenever n < k or n < 0.
pub fn binomial(n: i64, k: i64) -> u128 {
    if k < 0 || n < k {
        return 0;
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Dimension of degree-j spherical harmonics on S^{N-1}.
pub fn sphere_multiplicity(dim: u32, j: u32) -> u64 {
    let (n, j) = (dim as i64, j as i64);
    (binomial(j + n - 1, n - 1) - binomial(j + n - 3, n - 1)) as u64
}

/// Dimension of order-ell harmonics on S^{N-2} (for N = 2 only ell = 0, 1 survive).
pub fn channel_multiplicity(dim: u32, ell: u32) -> u64 {
    let (n, l) = (dim as i64, ell as i64);
    (binomial(l + n - 2, n - 2) - binomial(l + n - 4, n - 2)) as u64
}

fn hemisphere_multiplicity(dim: u32, j: u32) -> u64 {
    (0..j).filter(|l| (j - l) % 2 == 1).map(|l| channel_multiplicity(dim, l)).sum()
}

fn degree_entry(dim: u32, j: u32, multiplicity: u64) -> SpectrumEntry {
    let v = j as i64 * (j as i64 + dim as i64 - 2);
    SpectrumEntry {
        lambda: v as f64,
        exact: Some(BigRational::from_integer(v.into())),
        label: ModeLabel::Degree(j),
        multiplicity,
    }
}

pub fn sphere_eigenvalues(dim: u32, j_max: u32) -> Result<Spectrum> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall { dim, min: 2 });
    }
    let entries = (0..=j_max).map(|j| degree_entry(dim, j, sphere_multiplicity(dim, j))).collect();
    Spectrum::from_entries(dim, SphericalDomain::FullSphere, entries)
}

pub fn hemisphere_eigenvalues(dim: u32, j_max: u32) -> Result<Spectrum> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall { dim, min: 2 });
    }
    let entries = (1..=j_max.max(1)).map(|j| degree_entry(dim, j, hemisphere_multiplicity(dim, j))).collect();
    Spectrum::from_entries(dim, SphericalDomain::Hemisphere, entries)
}

/// Smallest `count` channel eigenvalues of the cap of opening `theta0`.
///
/// With `ell_max = None` channels are added until their lower bound
/// c_ell / sin^2(theta0) exceeds the current `count`-th candidate.
pub fn cap_eigenvalues(dim: u32, theta0: f64, count: usize, ell_max: Option<u32>) -> Result<Spectrum> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall { dim, min: 2 });
    }
    let domain = SphericalDomain::cap(theta0)?;
    if count == 0 {
        return Err(Error::InvalidParams("count must be at least 1".into()));
    }
    let limit = if dim == 2 { 1 } else { ell_max.unwrap_or(u32::MAX) };
    let limit = limit.min(ell_max.unwrap_or(u32::MAX));
    let mut found: Vec<SpectrumEntry> = Vec::new();
    let kth = |found: &Vec<SpectrumEntry>| -> Option<f64> {
        if found.len() < count {
            return None;
        }
        let mut v: Vec<f64> = found.iter().map(|e| e.lambda).collect();
        v.sort_by(f64::total_cmp);
        Some(v[count - 1])
    };
    let mut ell = 0u32;
    loop {
        if ell > limit {
            break;
        }
        let floor = shooting::channel_floor(dim, theta0, ell);
        if let Some(bound) = kth(&found) {
            if floor > bound {
                break;
            }
        }
        let cutoff = kth(&found);
        let values = shooting::channel_eigenvalues(dim, theta0, ell, count, cutoff)?;
        let mult = channel_multiplicity(dim, ell);
        for (i, lambda) in values.into_iter().enumerate() {
            found.push(SpectrumEntry {
                lambda,
                exact: None,
                label: ModeLabel::Channel { ell, k: i as u32 + 1 },
                multiplicity: mult,
            });
        }
        ell += 1;
    }
    let mut s = Spectrum::from_entries(dim, domain, found)?;
    s.entries.truncate(count);
    Ok(s)
}

/// Spectrum with at least `size` entries for any supported domain.
pub fn domain_spectrum(dim: u32, domain: SphericalDomain, size: usize) -> Result<Spectrum> {
    let size = size.max(1);
    match domain {
        SphericalDomain::FullSphere => sphere_eigenvalues(dim, size as u32 - 1),
        SphericalDomain::Hemisphere => hemisphere_eigenvalues(dim, size as u32),
        SphericalDomain::Cap(t) => cap_eigenvalues(dim, t, size, None),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LambdaSelection {
    All,
    Tail(u32),
    Explicit(Vec<f64>),
    ExcludePrincipal,
    Singleton(f64),
}

impl LambdaSelection {
    /// Finite selections do not depend on the truncation level.
    pub fn is_finite(&self) -> bool {
        matches!(self, LambdaSelection::Explicit(_) | LambdaSelection::Singleton(_))
    }
}

impl fmt::Display for LambdaSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaSelection::All => write!(f, "all"),
            LambdaSelection::Tail(k) => write!(f, "tail:{k}"),
            LambdaSelection::Explicit(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "set:{}", parts.join(","))
            }
            LambdaSelection::ExcludePrincipal => write!(f, "exclude-principal"),
            LambdaSelection::Singleton(v) => write!(f, "only:{v}"),
        }
    }
}

impl FromStr for LambdaSelection {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |t: &str| -> Result<f64> {
            let v: f64 = t.trim().parse().map_err(|_| Error::InvalidParams(format!("bad eigenvalue '{t}'")))?;
            if v < 0.0 || !v.is_finite() {
                return Err(Error::NegativeInput { name: "lambda", value: v });
            }
            Ok(v)
        };
        match s {
            "all" => Ok(LambdaSelection::All),
            "exclude-principal" => Ok(LambdaSelection::ExcludePrincipal),
            _ => {
                if let Some(k) = s.strip_prefix("tail:") {
                    let k: u32 = k.trim().parse().map_err(|_| Error::InvalidParams(format!("bad tail index '{k}'")))?;
                    if k == 0 {
                        return Err(Error::InvalidParams("tail index must be positive".into()));
                    }
                    Ok(LambdaSelection::Tail(k))
                } else if let Some(v) = s.strip_prefix("set:") {
                    let vals = v.split(',').map(num).collect::<Result<Vec<_>>>()?;
                    if vals.is_empty() {
                        return Err(Error::EmptyLambda);
                    }
                    Ok(LambdaSelection::Explicit(vals))
                } else if let Some(v) = s.strip_prefix("only:") {
                    Ok(LambdaSelection::Singleton(num(v)?))
                } else {
                    Err(Error::InvalidParams(format!("unknown eigenvalue selection '{s}'")))
                }
            }
        }
    }
}

fn member(spectrum: &Spectrum, v: f64) -> Result<&SpectrumEntry> {
    let exact = spectrum.domain.is_exact();
    spectrum
        .entries
        .iter()
        .find(|e| if exact { e.lambda == v } else { (e.lambda - v).abs() <= CAP_MEMBERSHIP_TOL })
        .ok_or(Error::NotInSpectrum(v))
}

/// Applies a selection rule to a (possibly truncated) spectrum.
pub fn resolve_selection(spectrum: &Spectrum, selection: &LambdaSelection) -> Result<Vec<SpectrumEntry>> {
    let out: Vec<SpectrumEntry> = match selection {
        LambdaSelection::All => spectrum.entries.clone(),
        LambdaSelection::Tail(k) => spectrum.entries.iter().filter(|e| e.label.degree() >= *k).cloned().collect(),
        LambdaSelection::ExcludePrincipal => {
            spectrum.entries.iter().filter(|e| e.lambda != spectrum.principal).cloned().collect()
        }
        LambdaSelection::Singleton(v) => vec![member(spectrum, *v)?.clone()],
        LambdaSelection::Explicit(vs) => {
            let mut out: Vec<SpectrumEntry> = Vec::new();
            for v in vs {
                let e = member(spectrum, *v)?;
                if !out.iter().any(|o| o.label == e.label) {
                    out.push(e.clone());
                }
            }
            out.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
            out
        }
    };
    if out.is_empty() {
        return Err(Error::EmptyLambda);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_examples() {
        assert_eq!(sphere_eigenvalues(3, 3).unwrap().values(), vec![0.0, 2.0, 6.0, 12.0]);
        assert_eq!(sphere_eigenvalues(2, 2).unwrap().values(), vec![0.0, 1.0, 4.0]);
        assert_eq!(sphere_eigenvalues(4, 1).unwrap().values(), vec![0.0, 3.0]);
        assert!(matches!(sphere_eigenvalues(1, 3), Err(Error::DimensionTooSmall { .. })));
    }

    #[test]
    fn hemisphere_examples() {
        assert_eq!(hemisphere_eigenvalues(4, 5).unwrap().principal, 3.0);
        assert_eq!(hemisphere_eigenvalues(2, 5).unwrap().principal, 1.0);
        assert_eq!(hemisphere_eigenvalues(3, 2).unwrap().values(), vec![2.0, 6.0]);
    }

    #[test]
    fn multiplicities() {
        // S^2: 2j + 1; S^3: (j + 1)^2; S^1: 1, 2, 2, ...
        for j in 0..6 {
            assert_eq!(sphere_multiplicity(3, j), 2 * j as u64 + 1);
            assert_eq!(sphere_multiplicity(4, j), (j as u64 + 1).pow(2));
            assert_eq!(sphere_multiplicity(2, j), if j == 0 { 1 } else { 2 });
        }
        // hemisphere of S^2 has j odd-in-x3 harmonics of degree j
        for j in 1..6 {
            assert_eq!(hemisphere_multiplicity(3, j), j as u64);
            assert_eq!(hemisphere_multiplicity(2, j), 1);
        }
        assert_eq!(channel_multiplicity(2, 2), 0);
    }

    #[test]
    fn selection_grammar_roundtrip() {
        for s in ["all", "tail:2", "set:2,6", "exclude-principal", "only:3"] {
            let sel: LambdaSelection = s.parse().unwrap();
            assert_eq!(sel.to_string(), s);
        }
        assert!("tail:0".parse::<LambdaSelection>().is_err());
        assert!("set:-1".parse::<LambdaSelection>().is_err());
        assert!("bogus".parse::<LambdaSelection>().is_err());
    }

    #[test]
    fn domain_grammar() {
        assert_eq!("sphere".parse::<SphericalDomain>().unwrap(), SphericalDomain::FullSphere);
        assert_eq!("cap:1.25".parse::<SphericalDomain>().unwrap(), SphericalDomain::Cap(1.25));
        assert!(matches!("cap:4".parse::<SphericalDomain>(), Err(Error::InvalidAngle(_))));
        assert!("torus".parse::<SphericalDomain>().is_err());
    }

    #[test]
    fn resolve_examples() {
        let s = sphere_eigenvalues(4, 6).unwrap();
        let r = resolve_selection(&s, &LambdaSelection::Singleton(0.0)).unwrap();
        assert_eq!(r.len(), 1);
        let r = resolve_selection(&s, &LambdaSelection::ExcludePrincipal).unwrap();
        assert_eq!(r[0].lambda, 3.0);
        let r = resolve_selection(&s, &LambdaSelection::Tail(2)).unwrap();
        assert_eq!(r[0].lambda, 8.0);
        assert_eq!(
            resolve_selection(&s, &LambdaSelection::Explicit(vec![3.0, 5.0])),
            Err(Error::NotInSpectrum(5.0))
        );
        let h = hemisphere_eigenvalues(3, 4).unwrap();
        assert_eq!(resolve_selection(&h, &LambdaSelection::All).unwrap().len(), 4);
    }
}
