//! Dominant-interferer machinery: the single-interferer lower bound for
//! non-fading desired links with fading interference marks, the
//! path-loss-only small-density asymptotics with their order-1/order-2 case
//! split, the nearest-interferer tail identity and a bound-vs-simulation
//! tightness diagnostic.

use std::f64::consts::PI;

use crate::analytic::double_radial;
use crate::config::{Fading, NetworkConfig};
use crate::error::{Error, Result};
use crate::geometry::{dominant_regions, pow_alpha_half, DominantRegions, NodeLayout};
use crate::quad::{integrate, QuadratureSettings};
use crate::special::reg_upper_gamma_int;

/// Tail probability P(mark > x) of one interference mark.
pub fn mark_tail(fading: Fading, x: f64) -> f64 {
    match fading {
        Fading::Rayleigh => (-x).exp(),
        Fading::Deterministic1 => {
            if x < 1.0 {
                1.0
            } else {
                0.0
            }
        }
    }
}

/// Mean number of jointly-dominant interferers per unit density:
/// `psi_bar = 2 \int_0^inf r P(h > t_d(r)) \int_0^pi P(g > t_r(r, phi)) dphi dr`
/// with thresholds `t_d(r) = (2/beta) (1 + r^alpha) / (1 + |x_s|^alpha)` and
/// `t_r = (1/beta) (1 + d_r^alpha) / (1 + |x_s - x_r|^alpha)`, `d_r` the
/// distance from the integration point to the relay.
///
/// Generic in the mark tails so other mark laws can be plugged in without
/// touching the bound assembly.
pub fn dominant_mark_exponent_with_tails(
    layout: &NodeLayout,
    alpha: f64,
    beta: f64,
    tail_g: &dyn Fn(f64) -> f64,
    tail_h: &dyn Fn(f64) -> f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    if !(alpha > 2.0) {
        return Err(Error::Domain(format!("alpha must be > 2, got {alpha}")));
    }
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::Domain(format!("beta must be positive, got {beta}")));
    }
    let inv_c_sd = (2.0 / beta) / (1.0 + pow_alpha_half(layout.x_s.norm_sq(), alpha));
    let inv_c_sr = (1.0 / beta) / (1.0 + pow_alpha_half(layout.x_s.dist_sq(layout.x_r), alpha));
    let xr = layout.relay_norm();
    double_radial(settings, &|r, phi| {
        let d_sq = (r * r + xr * xr - 2.0 * r * xr * phi.cos()).max(0.0);
        let t_d = inv_c_sd * (1.0 + pow_alpha_half(r * r, alpha));
        let t_r = inv_c_sr * (1.0 + pow_alpha_half(d_sq, alpha));
        tail_h(t_d) * tail_g(t_r)
    })
}

/// `psi_bar` with the tails taken from the configured mark fading.
pub fn dominant_mark_exponent(
    layout: &NodeLayout,
    alpha: f64,
    beta: f64,
    mark_g: Fading,
    mark_h: Fading,
    settings: &QuadratureSettings,
) -> Result<f64> {
    dominant_mark_exponent_with_tails(
        layout,
        alpha,
        beta,
        &|x| mark_tail(mark_g, x),
        &|x| mark_tail(mark_h, x),
        settings,
    )
}

/// Cut-off radius beyond which both tail factors are negligible; used only by
/// the Cartesian cross-check route.
fn cartesian_cutoff(layout: &NodeLayout, alpha: f64, beta: f64) -> f64 {
    // solve (2/beta)(r^alpha)/(1 + |x_s|^alpha) = 50 for the h tail
    let c = (1.0 + pow_alpha_half(layout.x_s.norm_sq(), alpha)) * beta * 25.0;
    let r = c.powf(1.0 / alpha);
    (2.0 * r).max(4.0 * layout.source_norm()).max(4.0 * layout.relay_norm())
}

/// Same quantity as [`dominant_mark_exponent_with_tails`] computed as a plain
/// Cartesian double integral over a bounding box; internal consistency check
/// for the polar change of variables.
pub fn dominant_mark_exponent_cartesian(
    layout: &NodeLayout,
    alpha: f64,
    beta: f64,
    mark_g: Fading,
    mark_h: Fading,
    settings: &QuadratureSettings,
) -> Result<f64> {
    let inv_c_sd = (2.0 / beta) / (1.0 + pow_alpha_half(layout.x_s.norm_sq(), alpha));
    let inv_c_sr = (1.0 / beta) / (1.0 + pow_alpha_half(layout.x_s.dist_sq(layout.x_r), alpha));
    let l = cartesian_cutoff(layout, alpha, beta);
    let xr = layout.x_r;
    let point = |x: f64, y: f64| -> f64 {
        let t_d = inv_c_sd * (1.0 + pow_alpha_half(x * x + y * y, alpha));
        let dx = x - xr.x;
        let dy = y - xr.y;
        let t_r = inv_c_sr * (1.0 + pow_alpha_half(dx * dx + dy * dy, alpha));
        mark_tail(mark_h, t_d) * mark_tail(mark_g, t_r)
    };
    let failure = std::cell::RefCell::new(None);
    let outer = integrate(
        &|x: f64| {
            if failure.borrow().is_some() {
                return 0.0;
            }
            match integrate(&|y| point(x, y), -l, l, settings.rel_tol * 0.1, settings.abs_tol, 512)
            {
                Ok((v, _)) => v,
                Err(e) => {
                    *failure.borrow_mut() = Some(e);
                    0.0
                }
            }
        },
        -l,
        l,
        settings.rel_tol,
        settings.abs_tol,
        2048,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(outer?.0)
}

/// Lower bound on the broadcast-phase outage from the jointly-dominant
/// interferer set, `1 - exp(-lambda psi_bar)`, precomputed so density sweeps
/// are cheap.
#[derive(Debug, Clone, Copy)]
pub struct DominantMarkBound {
    pub psi_bar: f64,
}

impl DominantMarkBound {
    /// Requires deterministic desired links (the bound's thresholds assume
    /// u = 1) with any mark fading.
    pub fn new(config: &NetworkConfig, settings: &QuadratureSettings) -> Result<Self> {
        if config.fading.desired != Fading::Deterministic1 {
            return Err(Error::InvalidConfig(
                "dominant-interferer mark bound assumes non-fading desired links".into(),
            ));
        }
        let psi_bar = dominant_mark_exponent(
            &config.layout,
            config.alpha,
            config.beta,
            config.fading.mark_g,
            config.fading.mark_h,
            settings,
        )?;
        Ok(DominantMarkBound { psi_bar })
    }

    pub fn bound(&self, lambda: f64) -> f64 {
        (-f64::exp_m1(-lambda * self.psi_bar)).clamp(0.0, 1.0)
    }
}

/// Broadcast-phase lower bound `1 - exp(-lambda psi_bar)` for non-fading
/// desired links with Rayleigh interference marks.
pub fn q_bc_lower_bound_fading_marks(
    config: &NetworkConfig,
    settings: &QuadratureSettings,
) -> Result<f64> {
    if !config.fading.is_mixed_u1() {
        return Err(Error::InvalidConfig(
            "fading-marks bound requires deterministic desired links with Rayleigh marks".into(),
        ));
    }
    Ok(DominantMarkBound::new(config, settings)?.bound(config.lambda))
}

/// Small-density behaviour of the path-loss-only broadcast phase.
#[derive(Debug, Clone, Copy)]
pub struct PathLossAsymptotics {
    /// 1 when the dominant balls overlap (q_bc ~ lambda * coefficient),
    /// 2 when they are disjoint (q_bc ~ lambda^2 * coefficient).
    pub order: u8,
    pub coefficient: f64,
    /// True when a region is empty: no single interferer can break that link
    /// at this threshold, so the dominant-interferer analysis collapses.
    pub degenerate: bool,
    pub regions: DominantRegions,
}

/// Order and leading coefficient of q_bc as lambda -> 0 with all fading
/// deterministic: `lambda |A_rd|` in the overlap case, `lambda^2 |A_r| |A_d|`
/// in the disjoint case.
pub fn q_bc_asymptotic_pathloss_only(config: &NetworkConfig) -> Result<PathLossAsymptotics> {
    if !config.fading.is_path_loss_only() {
        return Err(Error::InvalidConfig(
            "path-loss-only asymptotics require deterministic fading everywhere".into(),
        ));
    }
    let regions = dominant_regions(&config.layout, config.alpha, config.beta)?;
    if regions.r1 == 0.0 || regions.r2 == 0.0 {
        return Ok(PathLossAsymptotics {
            order: 2,
            coefficient: 0.0,
            degenerate: true,
            regions,
        });
    }
    Ok(if regions.overlap {
        PathLossAsymptotics {
            order: 1,
            coefficient: regions.area_lens,
            degenerate: false,
            regions,
        }
    } else {
        PathLossAsymptotics {
            order: 2,
            coefficient: regions.area_r * regions.area_d,
            degenerate: false,
            regions,
        }
    })
}

/// Path-loss-only lower bound `P(Phi(A_r) >= 1 and Phi(A_d) >= 1)` from the
/// joint void probabilities of the two dominant balls:
/// `1 - e^{-lambda |A_r|} - e^{-lambda |A_d|} + e^{-lambda |A_r u A_d|}`.
///
/// Reduces to `~ lambda |A_rd|` in the overlap case and factorizes to
/// `(1 - e^{-lambda |A_r|})(1 - e^{-lambda |A_d|}) ~ lambda^2 |A_r||A_d|`
/// when the balls are disjoint.
pub fn q_bc_dominant_void_bound(regions: &DominantRegions, lambda: f64) -> f64 {
    let b = -f64::exp_m1(-lambda * regions.area_r) - f64::exp_m1(-lambda * regions.area_d)
        + f64::exp_m1(-lambda * regions.area_union());
    b.clamp(0.0, 1.0)
}

/// P(the n-th nearest interferer alone has path gain within a factor
/// `(1 + epsilon)^{-1}` of the singular law), i.e.
/// `1 - Q(n, lambda pi epsilon^{-2/alpha})` with Q the regularized upper
/// incomplete gamma function.
pub fn nearest_interferer_equivalence(n: u32, lambda: f64, epsilon: f64, alpha: f64) -> Result<f64> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!("lambda must be >= 0, got {lambda}")));
    }
    if !(epsilon > 0.0) {
        return Err(Error::Domain(format!("epsilon must be > 0, got {epsilon}")));
    }
    if !(alpha > 2.0) {
        return Err(Error::Domain(format!("alpha must be > 2, got {alpha}")));
    }
    Ok(1.0 - reg_upper_gamma_int(n, lambda * PI * epsilon.powf(-2.0 / alpha))?)
}

/// One row of the bound-vs-simulation tightness table.
#[derive(Debug, Clone, Copy)]
pub struct TightnessRow {
    pub lambda: f64,
    pub bound: f64,
    pub mc_estimate: f64,
    /// mc_estimate / bound; approaches 1 from above as lambda -> 0.
    pub ratio: f64,
}

/// Dominant-ball lower bound against a Monte Carlo q_bc estimate across a
/// density grid. `mc_q_bc` supplies the estimate at each lambda; sharing
/// random seeds across grid points keeps the ratio curve variance-stable.
pub fn tightness_diagnostic<F: FnMut(f64) -> Result<f64>>(
    config: &NetworkConfig,
    lambda_grid: &[f64],
    mut mc_q_bc: F,
) -> Result<Vec<TightnessRow>> {
    if !config.fading.is_path_loss_only() {
        return Err(Error::InvalidConfig(
            "tightness diagnostic is defined for the path-loss-only model".into(),
        ));
    }
    if lambda_grid.is_empty() {
        return Err(Error::InvalidConfig("empty lambda grid".into()));
    }
    let regions = dominant_regions(&config.layout, config.alpha, config.beta)?;
    let mut rows = Vec::with_capacity(lambda_grid.len());
    for &lambda in lambda_grid {
        if !(lambda > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tightness ratio is undefined at lambda = {lambda}"
            )));
        }
        let bound = q_bc_dominant_void_bound(&regions, lambda);
        let mc_estimate = mc_q_bc(lambda)?;
        rows.push(TightnessRow {
            lambda,
            bound,
            mc_estimate,
            ratio: mc_estimate / bound,
        });
    }
    Ok(rows)
}
