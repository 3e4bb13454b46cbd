//! Independent numerical certification of the transform identities and inequalities.

pub mod dirichlet;
pub mod identities;
pub mod inequality;
pub mod resonance;
pub mod suite;

use crate::error::{Error, Result};
use crate::profiles::Profile1D;
use crate::spectra::ModeLabel;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

pub use dirichlet::{dirichlet_estimate, DirichletEstimate, DirichletSpace};
pub use identities::{emden_fowler_check, kelvin_check};
pub use inequality::{a0_sharpness, inequality_margin, InequalitySetup, Terms};
pub use resonance::{resonance_report, ResonanceReport};
pub use suite::{random_test_suite, SuiteSummary};

/// Floor for normalized inequality margins.
pub const MARGIN_TOL: f64 = 1e-9;
/// Relative tolerance for transform identity checks.
pub const IDENTITY_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum InequalityId {
    #[serde(rename = "HR")]
    Hr,
    #[serde(rename = "ND")]
    Nd,
    #[serde(rename = "ND2")]
    Nd2,
    #[serde(rename = "PB")]
    Pb,
    #[serde(rename = "NAV")]
    Nav,
    #[serde(rename = "DIR")]
    Dir,
    #[serde(rename = "SCH")]
    Sch,
}

impl InequalityId {
    pub const ALL: [InequalityId; 7] =
        [InequalityId::Hr, InequalityId::Nd, InequalityId::Nd2, InequalityId::Pb, InequalityId::Nav, InequalityId::Dir, InequalityId::Sch];

    /// Whole-cone inequalities work on the full line in t.
    pub fn full_line(&self) -> bool {
        matches!(self, InequalityId::Hr | InequalityId::Sch)
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            InequalityId::Hr => "HR",
            InequalityId::Nd => "ND",
            InequalityId::Nd2 => "ND2",
            InequalityId::Pb => "PB",
            InequalityId::Nav => "NAV",
            InequalityId::Dir => "DIR",
            InequalityId::Sch => "SCH",
        };
        f.write_str(s)
    }
}

impl FromStr for InequalityId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        InequalityId::ALL
            .into_iter()
            .find(|id| id.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidParams(format!("unknown inequality id '{s}'")))
    }
}

/// Where the profile lives: the whole cylinder, or the half cylinder for |x| < 1 or |x| > 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    FullLine,
    Inner,
    Exterior,
}

/// Angular factor of one mode.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Angular {
    /// Unit-normalized Dirichlet eigenfunction.
    Eigen { lambda: f64, label: ModeLabel },
    /// Doubly clamped cap function of harmonic order `ell`; `lap` is the integral of
    /// (-Laplacian + gamma) phi squared for the weight it was built for.
    Clamped { ell: u32, norm: f64, grad: f64, lap: f64 },
}

impl Angular {
    /// (norm, grad, lap) integrals of the angular factor.
    pub fn forms(&self, gamma: f64) -> (f64, f64, f64) {
        match self {
            Angular::Eigen { lambda, .. } => (1.0, *lambda, (lambda + gamma).powi(2)),
            Angular::Clamped { norm, grad, lap, .. } => (*norm, *grad, *lap),
        }
    }

    fn key(&self) -> String {
        match self {
            Angular::Eigen { label, .. } => label.to_string(),
            Angular::Clamped { ell, .. } => format!("clamped l={ell}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Mode {
    pub angular: Angular,
    pub profile: Profile1D,
    pub coefficient: f64,
}

/// Sum of separable terms c_j y_j(t) phi_j(omega) with pairwise orthogonal angular factors.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CylinderTestFunction {
    pub modes: Vec<Mode>,
    pub region: Region,
}

impl CylinderTestFunction {
    pub fn new(modes: Vec<Mode>, region: Region) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::InvalidParams("test function needs at least one mode".into()));
        }
        let mut keys: Vec<String> = modes.iter().map(|m| m.angular.key()).collect();
        keys.sort();
        if keys.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParams("modes must carry distinct angular labels".into()));
        }
        if modes.iter().all(|m| m.coefficient == 0.0) {
            return Err(Error::InvalidParams("all mode coefficients vanish".into()));
        }
        Ok(CylinderTestFunction { modes, region })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ReportInputs {
    pub dim: u32,
    pub alpha: f64,
    pub domain: String,
    pub selection: String,
    pub lambda: Option<f64>,
    pub seed: Option<u64>,
    pub trial: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarginReport {
    pub inequality_id: String,
    pub lhs: f64,
    pub rhs: f64,
    /// Normalized margin; identity checks report minus the relative discrepancy.
    pub margin: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub inputs: ReportInputs,
}

impl MarginReport {
    pub fn inequality(id: &str, lhs: f64, rhs: f64, scale: f64, inputs: ReportInputs) -> Self {
        let margin = (lhs - rhs) / scale;
        MarginReport {
            inequality_id: id.to_string(),
            lhs,
            rhs,
            margin,
            tolerance: MARGIN_TOL,
            pass: margin >= -MARGIN_TOL,
            inputs,
        }
    }

    pub fn identity(name: &str, x_space: f64, cylinder: f64, inputs: ReportInputs) -> Self {
        let scale = cylinder.abs().max(x_space.abs()).max(f64::MIN_POSITIVE);
        let margin = -(x_space - cylinder).abs() / scale;
        MarginReport {
            inequality_id: name.to_string(),
            lhs: x_space,
            rhs: cylinder,
            margin,
            tolerance: IDENTITY_TOL,
            pass: margin >= -IDENTITY_TOL,
            inputs,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in InequalityId::ALL {
            assert_eq!(id.to_string().parse::<InequalityId>().unwrap(), id);
        }
        assert!("XX".parse::<InequalityId>().is_err());
    }

    #[test]
    fn duplicate_labels_rejected() {
        let m = Mode {
            angular: Angular::Eigen { lambda: 2.0, label: ModeLabel::Degree(1) },
            profile: Profile1D::bump(0.0, 1.0).unwrap(),
            coefficient: 1.0,
        };
        assert!(CylinderTestFunction::new(vec![m.clone(), m], Region::FullLine).is_err());
    }
}
