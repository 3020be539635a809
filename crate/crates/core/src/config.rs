//! Shared experiment configuration: node layout, channel parameters and
//! per-link-class fading models.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::NodeLayout;

/// Fading model of one link class. `Rayleigh` means unit-mean exponential
/// power gains; `Deterministic1` pins the gain at 1 (path loss only).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fading {
    Rayleigh,
    Deterministic1,
}

/// Fading assignment for the desired links (u), the interferer-to-relay
/// marks (g) and the interferer-to-destination marks (h).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FadingSpec {
    pub desired: Fading,
    pub mark_g: Fading,
    pub mark_h: Fading,
}

impl FadingSpec {
    /// Rayleigh fading on every link.
    pub fn rayleigh() -> Self {
        FadingSpec {
            desired: Fading::Rayleigh,
            mark_g: Fading::Rayleigh,
            mark_h: Fading::Rayleigh,
        }
    }

    /// Path loss only: all gains identically 1.
    pub fn path_loss_only() -> Self {
        FadingSpec {
            desired: Fading::Deterministic1,
            mark_g: Fading::Deterministic1,
            mark_h: Fading::Deterministic1,
        }
    }

    /// Non-fading desired links with Rayleigh interference marks
    /// (CSI-at-transmitter scenario).
    pub fn mixed_u1() -> Self {
        FadingSpec {
            desired: Fading::Deterministic1,
            mark_g: Fading::Rayleigh,
            mark_h: Fading::Rayleigh,
        }
    }

    pub fn is_all_rayleigh(&self) -> bool {
        *self == Self::rayleigh()
    }

    pub fn is_path_loss_only(&self) -> bool {
        *self == Self::path_loss_only()
    }

    pub fn is_mixed_u1(&self) -> bool {
        *self == Self::mixed_u1()
    }
}

/// A complete scenario: geometry, path-loss exponent, SIR threshold,
/// interferer density and fading assignment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkConfig {
    pub layout: NodeLayout,
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub fading: FadingSpec,
}

impl NetworkConfig {
    pub fn new(
        layout: NodeLayout,
        alpha: f64,
        beta: f64,
        lambda: f64,
        fading: FadingSpec,
    ) -> Result<Self> {
        if !(alpha > 2.0) {
            return Err(Error::InvalidConfig(format!(
                "alpha must be > 2, got {alpha}"
            )));
        }
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "beta must be positive and finite, got {beta}"
            )));
        }
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "lambda must be >= 0 and finite, got {lambda}"
            )));
        }
        Ok(NetworkConfig {
            layout,
            alpha,
            beta,
            lambda,
            fading,
        })
    }

    pub fn with_lambda(&self, lambda: f64) -> Self {
        NetworkConfig { lambda, ..*self }
    }
}

/// Provenance of an outage number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Analytic,
    Bound,
    MonteCarlo,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Method::Analytic => write!(f, "analytic"),
            Method::Bound => write!(f, "bound"),
            Method::MonteCarlo => write!(f, "montecarlo"),
        }
    }
}

/// Per-phase outage probabilities, `q = q_bc + q_mac`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutageBreakdown {
    pub q_bc: f64,
    pub q_mac: f64,
    pub q: f64,
    pub method: Method,
}

impl OutageBreakdown {
    pub fn new(q_bc: f64, q_mac: f64, method: Method) -> Self {
        OutageBreakdown {
            q_bc,
            q_mac,
            q: q_bc + q_mac,
            method,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    fn layout() -> NodeLayout {
        NodeLayout::new(Point::new(15.0, 0.0), Point::new(6.0, 0.0)).unwrap()
    }

    #[test]
    fn validation() {
        assert!(NetworkConfig::new(layout(), 2.0, 0.1, 1e-3, FadingSpec::rayleigh()).is_err());
        assert!(NetworkConfig::new(layout(), 4.0, 0.0, 1e-3, FadingSpec::rayleigh()).is_err());
        assert!(NetworkConfig::new(layout(), 4.0, 0.1, -1.0, FadingSpec::rayleigh()).is_err());
        assert!(NetworkConfig::new(layout(), 4.0, 0.1, 0.0, FadingSpec::rayleigh()).is_ok());
    }

    #[test]
    fn fading_presets() {
        assert!(FadingSpec::rayleigh().is_all_rayleigh());
        assert!(FadingSpec::path_loss_only().is_path_loss_only());
        assert!(FadingSpec::mixed_u1().is_mixed_u1());
        assert!(!FadingSpec::mixed_u1().is_all_rayleigh());
    }

    #[test]
    fn breakdown_sums() {
        let b = OutageBreakdown::new(0.1, 0.05, Method::Analytic);
        assert_eq!(b.q, 0.15000000000000002);
    }
}
