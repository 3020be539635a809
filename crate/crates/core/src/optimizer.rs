//! Relay placement on the source-destination line: minimize the total outage
//! probability over the relay ratio with a coarse scan plus golden-section
//! refinement.

use rayon::prelude::*;

use crate::analytic::RayleighOutage;
use crate::error::{Error, Result};
use crate::geometry::{NodeLayout, Point};
use crate::quad::QuadratureSettings;

/// Outcome of one line-placement search. The ratio is
/// `|x_s - x_r| / |x_s - x_d|`, so values above 0.5 put the relay closer to
/// the destination.
#[derive(Debug, Clone, PartialEq)]
pub struct PlacementResult {
    pub optimal_ratio: f64,
    pub optimal_q: f64,
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    /// Every (ratio, objective) pair evaluated during the search.
    pub trace: Vec<(f64, f64)>,
    /// Objective varied by less than 1e-12 across the coarse scan.
    pub flat: bool,
}

const COARSE_POINTS: usize = 41;
const RATIO_LO: f64 = 0.025;
const RATIO_HI: f64 = 0.975;
const RATIO_RESOLUTION: f64 = 0.005;
/// Below this density the outage itself underflows usefully long before the
/// minimizer moves, so the linear-coefficient objective is used instead.
const COEFFICIENT_OBJECTIVE_LAMBDA: f64 = 1e-6;

fn line_layout(x_s_distance: f64, ratio: f64) -> Result<NodeLayout> {
    NodeLayout::new(
        Point::new(x_s_distance, 0.0),
        Point::new((1.0 - ratio) * x_s_distance, 0.0),
    )
}

/// Total outage (or its small-density linear coefficient) at one relay ratio.
fn objective(
    x_s_distance: f64,
    ratio: f64,
    alpha: f64,
    beta: f64,
    lambda: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    let layout = line_layout(x_s_distance, ratio)?;
    let formulas = RayleighOutage::new(&layout, alpha, beta, settings)?;
    Ok(if lambda < COEFFICIENT_OBJECTIVE_LAMBDA {
        let (c_bc, c_mac) = formulas.small_lambda_coefficients();
        c_bc + c_mac
    } else {
        formulas.q_bc(lambda) + formulas.q_mac(lambda)
    })
}

/// Golden-section minimization of `f` on [a, b] down to interval width `tol`;
/// assumes the coarse scan bracketed a minimum. Appends evaluations to
/// `trace`.
fn golden_section<F: Fn(f64) -> Result<f64>>(
    f: F,
    mut a: f64,
    mut b: f64,
    tol: f64,
    trace: &mut Vec<(f64, f64)>,
) -> Result<(f64, f64)> {
    const INVPHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = b - INVPHI * (b - a);
    let mut x2 = a + INVPHI * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    trace.push((x1, f1));
    trace.push((x2, f2));
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INVPHI * (b - a);
            f1 = f(x1)?;
            trace.push((x1, f1));
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INVPHI * (b - a);
            f2 = f(x2)?;
            trace.push((x2, f2));
        }
    }
    Ok(if f1 <= f2 { (x1, f1) } else { (x2, f2) })
}

/// Minimize total outage over the relay position on the open segment between
/// source and destination. Coarse 41-point scan guards against the objective
/// not being unimodal; golden-section refinement resolves the ratio to
/// +- 0.005.
pub fn optimize_relay_line(
    x_s_distance: f64,
    alpha: f64,
    beta: f64,
    lambda: f64,
    settings: &QuadratureSettings,
) -> Result<PlacementResult> {
    if !(x_s_distance > 0.0) || !x_s_distance.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "source distance must be positive, got {x_s_distance}"
        )));
    }
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "lambda must be >= 0, got {lambda}"
        )));
    }
    let ratios: Vec<f64> = (0..COARSE_POINTS)
        .map(|i| RATIO_LO + (RATIO_HI - RATIO_LO) * i as f64 / (COARSE_POINTS - 1) as f64)
        .collect();
    let coarse: Vec<(f64, f64)> = ratios
        .par_iter()
        .map(|&r| Ok((r, objective(x_s_distance, r, alpha, beta, lambda, settings)?)))
        .collect::<Result<_>>()?;

    let (mut best_i, mut best) = (0usize, coarse[0]);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (i, &(r, v)) in coarse.iter().enumerate() {
        lo = lo.min(v);
        hi = hi.max(v);
        if v < best.1 {
            best_i = i;
            best = (r, v);
        }
    }
    let flat = hi - lo < 1e-12;
    let mut trace = coarse.clone();

    let (optimal_ratio, optimal_q) = if flat {
        best
    } else {
        let a = ratios[best_i.saturating_sub(1)];
        let b = ratios[(best_i + 1).min(COARSE_POINTS - 1)];
        let (r, v) = golden_section(
            |r| objective(x_s_distance, r, alpha, beta, lambda, settings),
            a,
            b,
            RATIO_RESOLUTION,
            &mut trace,
        )?;
        if v <= best.1 {
            (r, v)
        } else {
            best
        }
    };

    Ok(PlacementResult {
        optimal_ratio,
        optimal_q,
        alpha,
        beta,
        lambda,
        trace,
        flat,
    })
}

/// One placement search per path-loss exponent; per-point failures are
/// reported in the row instead of aborting the sweep.
pub fn sweep_alpha_curve(
    alpha_grid: &[f64],
    beta: f64,
    lambda: f64,
    x_s_distance: f64,
    settings: &QuadratureSettings,
) -> Vec<(f64, Result<PlacementResult>)> {
    alpha_grid
        .iter()
        .map(|&alpha| {
            (
                alpha,
                optimize_relay_line(x_s_distance, alpha, beta, lambda, settings),
            )
        })
        .collect()
}
