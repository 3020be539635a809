//! Semi-closed-form outage probabilities for Rayleigh fading: the Psi
//! interference functional, the two-phase outage assembly, the no-relay
//! baseline and the small-density linear coefficients.
//!
//! All probability assembly is done through `exp`/`expm1` so values stay
//! accurate down to q ~ 1e-300; the diversity-order slope fits depend on it.

use std::cell::RefCell;
use std::f64::consts::PI;

use crate::config::{Method, NetworkConfig, OutageBreakdown};
use crate::error::{Error, Result};
use crate::geometry::{path_loss_sq, pow_alpha_half, NodeLayout};
use crate::quad::{integrate, QuadratureSettings};

/// Truncation radius used when the radial transform is disabled.
const RADIAL_CUTOFF: f64 = 1e4;

/// `\int_0^\infty 2r \int_0^\pi point(r, phi) dphi dr` with the outer
/// improper integral mapped to (0, 1] via u = 1/(1+r).
pub(crate) fn double_radial(
    settings: &QuadratureSettings,
    point: &dyn Fn(f64, f64) -> f64,
) -> Result<f64> {
    settings.validate()?;
    let inner_failure: RefCell<Option<Error>> = RefCell::new(None);
    let inner_rel = (settings.rel_tol * 0.1).max(1e-14);
    let inner_abs = (settings.abs_tol * 0.1).max(1e-300);

    let radial = |r: f64| -> f64 {
        if inner_failure.borrow().is_some() {
            return 0.0;
        }
        match integrate(&|phi| point(r, phi), 0.0, PI, inner_rel, inner_abs, 512) {
            Ok((v, _)) => 2.0 * r * v,
            Err(e) => {
                *inner_failure.borrow_mut() = Some(e);
                0.0
            }
        }
    };

    let outcome = if settings.radial_transform {
        integrate(
            &|u: f64| {
                let r = (1.0 - u) / u;
                let v = radial(r);
                if v == 0.0 {
                    0.0
                } else {
                    v / (u * u)
                }
            },
            0.0,
            1.0,
            settings.rel_tol,
            settings.abs_tol,
            4096,
        )
    } else {
        integrate(&radial, 0.0, RADIAL_CUTOFF, settings.rel_tol, settings.abs_tol, 4096)
    };
    if let Some(e) = inner_failure.into_inner() {
        return Err(e);
    }
    Ok(outcome?.0)
}

/// The interference functional
/// `Psi(f, g) = \int_0^\infty \int_0^\pi 2r (1 - 1/((1+f(r,phi))(1+g(r)))) dphi dr`.
///
/// The integrand is evaluated as `(f + g + f g) / ((1+f)(1+g))`, which is the
/// same quantity without the catastrophic cancellation at large radii.
pub fn psi<F, G>(f: F, g: G, settings: &QuadratureSettings) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
    G: Fn(f64) -> f64,
{
    double_radial(settings, &|r, phi| {
        let fv = f(r, phi);
        let gv = g(r);
        (fv + gv + fv * gv) / ((1.0 + fv) * (1.0 + gv))
    })
}

/// Scaled kernel constants for one (layout, alpha, beta) scenario.
///
/// The Laplace-transform exponents of Proposition-style expressions all take
/// the form `c / (1 + d(x)^alpha)` for a handful of constants c; everything
/// below is assembled from those.
#[derive(Debug, Clone, Copy)]
struct Kernels {
    alpha: f64,
    /// beta * (1 + |x_s - x_r|^alpha), relay-side kernel scale
    c_sr: f64,
    /// beta * (1 + |x_s|^alpha)
    c_sd: f64,
    /// beta * (1 + |x_r|^alpha)
    c_rd: f64,
    /// |x_r|
    xr: f64,
}

impl Kernels {
    fn new(layout: &NodeLayout, alpha: f64, beta: f64) -> Self {
        Kernels {
            alpha,
            c_sr: beta * (1.0 + pow_alpha_half(layout.x_s.dist_sq(layout.x_r), alpha)),
            c_sd: beta * (1.0 + pow_alpha_half(layout.x_s.norm_sq(), alpha)),
            c_rd: beta * (1.0 + pow_alpha_half(layout.x_r.norm_sq(), alpha)),
            xr: layout.relay_norm(),
        }
    }

    /// beta * lsr*(r, phi): interferer at destination-centered polar (r, phi).
    #[inline]
    fn f_sr(&self, r: f64, phi: f64) -> f64 {
        let d_sq = (r * r + self.xr * self.xr - 2.0 * r * self.xr * phi.cos()).max(0.0);
        self.c_sr * path_loss_sq(d_sq, self.alpha)
    }

    /// c / (1 + r^alpha)
    #[inline]
    fn radial(&self, c: f64, r: f64) -> f64 {
        c * path_loss_sq(r * r, self.alpha)
    }
}

#[derive(Debug, Clone, Copy)]
enum MacBranch {
    /// |x_s| != |x_r|: two-exponential tail with weight mu2 = l_r / (l_s - l_r).
    Distinct { mu2: f64, de: f64 },
    /// |x_s| = |x_r|: Gamma(2) tail; `psi_deriv` is the t-derivative term
    /// of the joint Laplace exponent.
    EqualNorm { psi_deriv: f64 },
}

/// Proposition-level Rayleigh outage formulas with the quadrature work done
/// once, so that density sweeps are cheap.
///
/// Stored quantities: `psi_bc_d = Psi(0, (beta/2) lsd*)`,
/// `psi_sr = Psi(beta lsr*, 0)`, and the differences
/// `cb = Psi(beta lsr*, (beta/2) lsd*) - psi_sr`,
/// `db = Psi(beta lsr*, beta lsd*) - psi_sr`,
/// `de = Psi(beta lsr*, beta lsd*) - Psi(beta lsr*, beta lrd*)`.
/// The differences are integrated directly (single integrals of the
/// pointwise difference), which keeps them accurate even when the two norms
/// nearly coincide and mu2 is large.
#[derive(Debug, Clone)]
pub struct RayleighOutage {
    psi_bc_d: f64,
    psi_sr: f64,
    cb: f64,
    db: f64,
    mac: MacBranch,
}

/// Relative closeness of l(|x_s|) and l(|x_r|) below which the Gamma-branch
/// is used instead of the two-exponential tail.
const EQUAL_NORM_TOL: f64 = 1e-9;

impl RayleighOutage {
    pub fn new(
        layout: &NodeLayout,
        alpha: f64,
        beta: f64,
        settings: &QuadratureSettings,
    ) -> Result<Self> {
        if !(alpha > 2.0) {
            return Err(Error::Domain(format!("alpha must be > 2, got {alpha}")));
        }
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::Domain(format!("beta must be positive, got {beta}")));
        }
        settings.validate()?;
        let k = Kernels::new(layout, alpha, beta);
        let c_bcd = 0.5 * k.c_sd;

        let psi_bc_d = double_radial(settings, &|r, _| {
            let g = k.radial(c_bcd, r);
            g / (1.0 + g)
        })?;
        let psi_sr = double_radial(settings, &|r, phi| {
            let f = k.f_sr(r, phi);
            f / (1.0 + f)
        })?;
        let cb = double_radial(settings, &|r, phi| {
            let f = k.f_sr(r, phi);
            let g = k.radial(c_bcd, r);
            g / ((1.0 + f) * (1.0 + g))
        })?;
        let db = double_radial(settings, &|r, phi| {
            let f = k.f_sr(r, phi);
            let g = k.radial(k.c_sd, r);
            g / ((1.0 + f) * (1.0 + g))
        })?;

        let l_s = beta / k.c_sd; // l(|x_s|) = beta / (beta (1 + |x_s|^alpha))
        let l_r = beta / k.c_rd;
        let mac = if (l_s - l_r).abs() < EQUAL_NORM_TOL * l_s.max(l_r) {
            let psi_deriv = double_radial(settings, &|r, phi| {
                let f = k.f_sr(r, phi);
                let g = k.radial(k.c_sd, r);
                g / ((1.0 + f) * (1.0 + g) * (1.0 + g))
            })?;
            MacBranch::EqualNorm { psi_deriv }
        } else {
            let de = double_radial(settings, &|r, phi| {
                let f = k.f_sr(r, phi);
                let g1 = k.radial(k.c_sd, r);
                let g2 = k.radial(k.c_rd, r);
                let diff = k.radial(k.c_sd - k.c_rd, r);
                diff / ((1.0 + f) * (1.0 + g1) * (1.0 + g2))
            })?;
            MacBranch::Distinct {
                mu2: l_r / (l_s - l_r),
                de,
            }
        };

        Ok(RayleighOutage {
            psi_bc_d,
            psi_sr,
            cb,
            db,
            mac,
        })
    }

    /// Broadcast-phase outage probability at density `lambda`.
    pub fn q_bc(&self, lambda: f64) -> f64 {
        let q = -f64::exp_m1(-lambda * self.psi_bc_d)
            + f64::exp(-lambda * self.psi_sr) * f64::exp_m1(-lambda * self.cb);
        q.clamp(0.0, 1.0)
    }

    /// MAC-phase outage probability at density `lambda`.
    pub fn q_mac(&self, lambda: f64) -> f64 {
        let q = match self.mac {
            MacBranch::Distinct { mu2, de } => {
                let e = self.psi_sr + self.db - de; // Psi(beta lsr*, beta lrd*)
                -f64::exp(-lambda * self.psi_sr) * f64::exp_m1(-lambda * self.db)
                    - mu2 * f64::exp(-lambda * e) * f64::exp_m1(-lambda * de)
            }
            MacBranch::EqualNorm { psi_deriv } => {
                let d = self.psi_sr + self.db;
                -f64::exp(-lambda * self.psi_sr) * f64::exp_m1(-lambda * self.db)
                    - lambda * psi_deriv * f64::exp(-lambda * d)
            }
        };
        q.clamp(0.0, 1.0)
    }

    pub fn breakdown(&self, lambda: f64) -> OutageBreakdown {
        OutageBreakdown::new(self.q_bc(lambda), self.q_mac(lambda), Method::Analytic)
    }

    /// Linear small-density coefficients `(c_bc, c_mac)`:
    /// `q_bc ~ lambda c_bc` and `q_mac ~ lambda c_mac` as lambda -> 0.
    pub fn small_lambda_coefficients(&self) -> (f64, f64) {
        let c_bc = self.psi_bc_d - self.cb;
        let c_mac = match self.mac {
            MacBranch::Distinct { mu2, de } => self.db + mu2 * de,
            MacBranch::EqualNorm { psi_deriv } => self.db - psi_deriv,
        };
        (c_bc, c_mac)
    }
}

fn require_all_rayleigh(config: &NetworkConfig) -> Result<()> {
    if !config.fading.is_all_rayleigh() {
        return Err(Error::InvalidConfig(
            "analytic outage formulas require Rayleigh fading on all links".into(),
        ));
    }
    Ok(())
}

/// Broadcast-phase outage probability (Rayleigh fading everywhere).
pub fn q_bc_rayleigh(config: &NetworkConfig, settings: &QuadratureSettings) -> Result<f64> {
    require_all_rayleigh(config)?;
    Ok(RayleighOutage::new(&config.layout, config.alpha, config.beta, settings)?.q_bc(config.lambda))
}

/// MAC-phase outage probability (Rayleigh fading everywhere).
pub fn q_mac_rayleigh(config: &NetworkConfig, settings: &QuadratureSettings) -> Result<f64> {
    require_all_rayleigh(config)?;
    Ok(RayleighOutage::new(&config.layout, config.alpha, config.beta, settings)?.q_mac(config.lambda))
}

/// Full per-phase outage breakdown (Rayleigh fading everywhere).
pub fn outage_rayleigh(
    config: &NetworkConfig,
    settings: &QuadratureSettings,
) -> Result<OutageBreakdown> {
    require_all_rayleigh(config)?;
    Ok(
        RayleighOutage::new(&config.layout, config.alpha, config.beta, settings)?
            .breakdown(config.lambda),
    )
}

/// Small-density linear coefficients `(c_bc, c_mac)` of the two phases.
pub fn small_lambda_coefficients(
    config: &NetworkConfig,
    settings: &QuadratureSettings,
) -> Result<(f64, f64)> {
    require_all_rayleigh(config)?;
    Ok(RayleighOutage::new(&config.layout, config.alpha, config.beta, settings)?
        .small_lambda_coefficients())
}

/// No-relay Rayleigh baseline: the exact value under the non-singular path
/// loss next to the known singular-law closed form, which serves as a
/// comparator only.
#[derive(Debug, Clone, Copy)]
pub struct NoRelayOutage {
    /// 1 - exp(-lambda * exact_exponent)
    pub exact: f64,
    /// 1 - exp(-lambda * closed_form_exponent)
    pub closed_form: f64,
    /// Psi(0, beta lsd*)
    pub exact_exponent: f64,
    /// pi^2 (2/alpha) |x_s|^2 beta^(2/alpha) csc(2 pi / alpha)
    pub closed_form_exponent: f64,
}

/// Outage probability of the direct link without a relay.
pub fn q_norelay_rayleigh(
    source_dist: f64,
    alpha: f64,
    beta: f64,
    lambda: f64,
    settings: &QuadratureSettings,
) -> Result<NoRelayOutage> {
    if !(source_dist > 0.0) {
        return Err(Error::Domain(format!(
            "source distance must be > 0, got {source_dist}"
        )));
    }
    if !(alpha > 2.0) {
        return Err(Error::Domain(format!("alpha must be > 2, got {alpha}")));
    }
    if !(beta > 0.0) {
        return Err(Error::Domain(format!("beta must be > 0, got {beta}")));
    }
    if !(lambda >= 0.0) {
        return Err(Error::Domain(format!("lambda must be >= 0, got {lambda}")));
    }
    let c = beta * (1.0 + source_dist.powf(alpha));
    let exact_exponent = double_radial(settings, &|r, _| {
        let g = c * path_loss_sq(r * r, alpha);
        g / (1.0 + g)
    })?;
    let closed_form_exponent =
        PI * PI * (2.0 / alpha) * source_dist * source_dist * beta.powf(2.0 / alpha)
            / (2.0 * PI / alpha).sin();
    Ok(NoRelayOutage {
        exact: -f64::exp_m1(-lambda * exact_exponent),
        closed_form: -f64::exp_m1(-lambda * closed_form_exponent),
        exact_exponent,
        closed_form_exponent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::FadingSpec;
    use crate::geometry::Point;
    use approx::assert_relative_eq;

    fn fig2_layout(relay_x: f64) -> NodeLayout {
        NodeLayout::new(Point::new(15.0, 0.0), Point::new(relay_x, 0.0)).unwrap()
    }

    fn fig2_config(lambda: f64) -> NetworkConfig {
        NetworkConfig::new(fig2_layout(6.0), 4.0, 0.1, lambda, FadingSpec::rayleigh()).unwrap()
    }

    /// Closed form for Psi(0, c/(1+r^alpha)):
    /// pi c (1+c)^(2/alpha - 1) (2 pi / alpha) csc(2 pi / alpha),
    /// from \int_0^inf dt / (A + t^p) = A^(1/p - 1) (pi/p) csc(pi/p).
    fn psi_radial_closed_form(c: f64, alpha: f64) -> f64 {
        PI * c * (1.0 + c).powf(2.0 / alpha - 1.0) * (2.0 * PI / alpha)
            / (2.0 * PI / alpha).sin()
    }

    #[test]
    fn psi_vanishes_for_zero_kernels() {
        let v = psi(|_, _| 0.0, |_| 0.0, &QuadratureSettings::default()).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn psi_matches_closed_form_spec_example() {
        // f = 0, g = c/(1+r^4) with c = (beta/2)(1 + 15^4), beta = 0.1
        let c = 0.05 * 50626.0;
        let v = psi(
            |_, _| 0.0,
            |r: f64| c / (1.0 + r.powi(4)),
            &QuadratureSettings::default(),
        )
        .unwrap();
        let oracle = psi_radial_closed_form(c, 4.0);
        assert_relative_eq!(v, oracle, max_relative = 1e-7);
        assert_relative_eq!(v, 248.2, max_relative = 1e-3);
    }

    #[test]
    fn psi_closed_form_grid() {
        for &alpha in &[2.5, 3.0, 3.5, 4.0, 5.0] {
            for &c in &[0.1, 1.0, 10.0, 100.0] {
                let v = psi(
                    |_, _| 0.0,
                    |r: f64| c / (1.0 + r.powf(alpha)),
                    &QuadratureSettings::default(),
                )
                .unwrap();
                assert_relative_eq!(
                    v,
                    psi_radial_closed_form(c, alpha),
                    max_relative = 1e-6
                );
            }
        }
    }

    #[test]
    fn psi_tolerance_consistency() {
        let k = Kernels::new(&fig2_layout(6.0), 4.0, 0.1);
        let f = |r, phi| k.f_sr(r, phi);
        let g = |r| k.radial(0.5 * k.c_sd, r);
        let tight = psi(f, g, &QuadratureSettings::default()).unwrap();
        let loose = psi(f, g, &QuadratureSettings::with_rel_tol(1e-4)).unwrap();
        assert_relative_eq!(tight, loose, max_relative = 1e-4);
    }

    #[test]
    fn psi_transform_flag_consistency() {
        let k = Kernels::new(&fig2_layout(6.0), 4.0, 0.1);
        let with = psi(
            |r, phi| k.f_sr(r, phi),
            |r| k.radial(0.5 * k.c_sd, r),
            &QuadratureSettings::default(),
        )
        .unwrap();
        let without = psi(
            |r, phi| k.f_sr(r, phi),
            |r| k.radial(0.5 * k.c_sd, r),
            &QuadratureSettings {
                radial_transform: false,
                ..Default::default()
            },
        )
        .unwrap();
        assert_relative_eq!(with, without, max_relative = 1e-5);
    }

    #[test]
    fn psi_monotone_in_kernels() {
        let k = Kernels::new(&fig2_layout(6.0), 4.0, 0.1);
        let settings = QuadratureSettings::default();
        let g = |r| k.radial(0.5 * k.c_sd, r);
        let mut prev = 0.0;
        for scale in [0.0, 0.25, 0.5, 1.0, 2.0] {
            let v = psi(|r, phi| scale * k.f_sr(r, phi), g, &settings).unwrap();
            assert!(v >= prev - 1e-9, "scale {scale}: {v} < {prev}");
            prev = v;
        }
    }

    #[test]
    fn q_bc_limits() {
        let formulas =
            RayleighOutage::new(&fig2_layout(6.0), 4.0, 0.1, &QuadratureSettings::default())
                .unwrap();
        assert_eq!(formulas.q_bc(0.0), 0.0);
        assert_eq!(formulas.q_mac(0.0), 0.0);
        assert!((formulas.q_bc(10.0) - 1.0).abs() < 1e-6);
        // the MAC phase needs the relay to decode, which never happens at
        // saturating density
        assert!(formulas.q_mac(10.0) < 1e-6);
    }

    #[test]
    fn q_monotone_in_lambda_and_beta() {
        // small-density regime where both phases are increasing
        let layout = fig2_layout(6.0);
        let settings = QuadratureSettings::default();
        let formulas = RayleighOutage::new(&layout, 4.0, 0.1, &settings).unwrap();
        let mut prev = (0.0, 0.0);
        for i in 1..=10 {
            let lambda = 1e-6 * i as f64 * 10.0;
            let cur = (formulas.q_bc(lambda), formulas.q_mac(lambda));
            assert!(cur.0 >= prev.0 && cur.1 >= prev.1, "lambda {lambda}");
            prev = cur;
        }
        let mut prev_q = (0.0, 0.0);
        for i in 0..10 {
            let beta = 0.05 + 0.015 * i as f64;
            let f = RayleighOutage::new(&layout, 4.0, beta, &settings).unwrap();
            let cur = (f.q_bc(1e-4), f.q_mac(1e-4));
            assert!(cur.0 >= prev_q.0 && cur.1 >= prev_q.1, "beta {beta}");
            prev_q = cur;
        }
    }

    #[test]
    fn small_lambda_coefficients_positive_and_consistent() {
        let settings = QuadratureSettings::default();
        let formulas = RayleighOutage::new(&fig2_layout(6.0), 4.0, 0.1, &settings).unwrap();
        let (c_bc, c_mac) = formulas.small_lambda_coefficients();
        assert!(c_bc > 0.0);
        assert!(c_mac > 0.0);
        // q_bc(lambda) / (lambda c_bc) -> 1 as lambda -> 0
        let mut prev_gap = f64::INFINITY;
        for lambda in [1e-5, 1e-6, 1e-7] {
            let gap = (formulas.q_bc(lambda) / (lambda * c_bc) - 1.0).abs();
            assert!(gap < prev_gap, "lambda {lambda}: gap {gap}");
            prev_gap = gap;
        }
        assert!(prev_gap < 1e-4);
    }

    #[test]
    fn coefficients_vanish_as_beta_to_zero() {
        let settings = QuadratureSettings::default();
        let mut prev = f64::INFINITY;
        for beta in [1e-2, 1e-4, 1e-6] {
            let f = RayleighOutage::new(&fig2_layout(6.0), 4.0, beta, &settings).unwrap();
            let (c_bc, c_mac) = f.small_lambda_coefficients();
            assert!(c_bc >= 0.0 && c_mac >= 0.0);
            assert!(c_bc + c_mac < prev);
            prev = c_bc + c_mac;
        }
        assert!(prev < 1e-2);
    }

    #[test]
    fn equal_norm_branch_is_limit_of_distinct_branch() {
        // relay rotated to |x_r| = |x_s|: the Gamma branch must agree with
        // the two-exponential branch evaluated just off the degenerate point
        let settings = QuadratureSettings::default();
        let equal = RayleighOutage::new(
            &NodeLayout::new(Point::new(15.0, 0.0), Point::new(0.0, 15.0)).unwrap(),
            4.0,
            0.1,
            &settings,
        )
        .unwrap();
        let near = RayleighOutage::new(
            &NodeLayout::new(Point::new(15.0, 0.0), Point::new(0.0, 15.0005)).unwrap(),
            4.0,
            0.1,
            &settings,
        )
        .unwrap();
        assert!(matches!(equal.mac, MacBranch::EqualNorm { .. }));
        assert!(matches!(near.mac, MacBranch::Distinct { .. }));
        for lambda in [1e-5, 1e-3] {
            assert_relative_eq!(
                equal.q_mac(lambda),
                near.q_mac(lambda),
                max_relative = 1e-3
            );
        }
    }

    #[test]
    fn rotation_invariance() {
        let settings = QuadratureSettings::default();
        let base = RayleighOutage::new(&fig2_layout(6.0), 4.0, 0.1, &settings).unwrap();
        for angle in [0.7, 2.1, -1.3] {
            let rotated = RayleighOutage::new(
                &fig2_layout(6.0).rotated(angle),
                4.0,
                0.1,
                &settings,
            )
            .unwrap();
            assert_relative_eq!(base.q_bc(1e-3), rotated.q_bc(1e-3), max_relative = 1e-7);
            assert_relative_eq!(base.q_mac(1e-3), rotated.q_mac(1e-3), max_relative = 1e-7);
        }
    }

    #[test]
    fn norelay_example_values() {
        let settings = QuadratureSettings::default();
        let out = q_norelay_rayleigh(15.0, 4.0, 0.1, 1e-4, &settings).unwrap();
        assert_relative_eq!(out.closed_form_exponent, 351.1, max_relative = 1e-3);
        assert_relative_eq!(out.closed_form, 0.0345, max_relative = 2e-2);
        // exact exponent against the radial closed form with c = beta (1 + 15^4)
        assert_relative_eq!(
            out.exact_exponent,
            psi_radial_closed_form(0.1 * 50626.0, 4.0),
            max_relative = 1e-7
        );
        // the singular-law closed form upper-approximates the exact exponent
        // within 5% relative in this regime
        assert!(out.closed_form_exponent >= out.exact_exponent);
        assert!(
            (out.closed_form_exponent - out.exact_exponent).abs() / out.exact_exponent < 0.05
        );
        let zero = q_norelay_rayleigh(15.0, 4.0, 0.1, 0.0, &settings).unwrap();
        assert_eq!(zero.exact, 0.0);
        assert_eq!(zero.closed_form, 0.0);
    }

    #[test]
    fn config_level_wrappers_validate_fading() {
        let mut config = fig2_config(1e-3);
        config.fading = FadingSpec::path_loss_only();
        assert!(q_bc_rayleigh(&config, &QuadratureSettings::default()).is_err());
        let config = fig2_config(1e-3);
        let b = outage_rayleigh(&config, &QuadratureSettings::default()).unwrap();
        assert_relative_eq!(b.q, b.q_bc + b.q_mac, max_relative = 1e-15);
        assert!(b.q_bc > 0.0 && b.q_bc < 1.0);
        assert!(b.q_mac > 0.0 && b.q_mac < 1.0);
    }
}
