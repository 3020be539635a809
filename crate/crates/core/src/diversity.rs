//! Diversity-order estimation: least-squares slopes of log q versus
//! log lambda over small-density grids, the four-case theorem verification
//! table, and the power-series scaling utility behind it.

use crate::analytic::RayleighOutage;
use crate::bounds::{q_bc_dominant_void_bound, DominantMarkBound};
use crate::config::{FadingSpec, Method, NetworkConfig};
use crate::error::{Error, Result};
use crate::geometry::{dominant_regions, NodeLayout, Point};
use crate::quad::QuadratureSettings;

/// `n` log-spaced densities from `lo` to `hi`, ascending.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo) || n < 2 {
        return Err(Error::InvalidConfig(format!(
            "log grid needs 0 < lo < hi and n >= 2, got lo={lo} hi={hi} n={n}"
        )));
    }
    let (llo, lhi) = (lo.ln(), hi.ln());
    Ok((0..n)
        .map(|i| (llo + (lhi - llo) * i as f64 / (n - 1) as f64).exp())
        .collect())
}

/// Default density grid for analytic and bound sources.
pub fn default_analytic_grid() -> Vec<f64> {
    log_grid(1e-6, 1e-4, 8).expect("static grid")
}

/// Default density grid for Monte Carlo sources, where smaller densities
/// would need impractical trial counts.
pub fn default_mc_grid() -> Vec<f64> {
    log_grid(1e-4, 1e-2, 8).expect("static grid")
}

/// Least-squares fit of log q against log lambda.
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeFit {
    pub delta_hat: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit in log space.
    pub residual: f64,
    pub lambda_grid: Vec<f64>,
    pub source: Method,
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 5 {
        return Err(Error::InvalidConfig(format!(
            "slope fit needs at least 5 grid points, got {}",
            grid.len()
        )));
    }
    if grid.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
        return Err(Error::InvalidConfig(
            "slope-fit grid must contain positive finite densities".into(),
        ));
    }
    let ascending = grid.windows(2).all(|w| w[0] < w[1]);
    let descending = grid.windows(2).all(|w| w[0] > w[1]);
    if !(ascending || descending) {
        return Err(Error::InvalidConfig(
            "slope-fit grid must be strictly monotone".into(),
        ));
    }
    let (lo, hi) = grid
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &l| (lo.min(l), hi.max(l)));
    if hi / lo < 99.99 {
        return Err(Error::InvalidConfig(format!(
            "slope-fit grid must span at least two decades, got {lo}..{hi}"
        )));
    }
    Ok(())
}

/// Fitted diversity order of an outage curve over a density grid.
pub fn estimate_scdo<F: FnMut(f64) -> Result<f64>>(
    mut q: F,
    lambda_grid: &[f64],
    source: Method,
) -> Result<SlopeFit> {
    validate_grid(lambda_grid)?;
    let mut xs = Vec::with_capacity(lambda_grid.len());
    let mut ys = Vec::with_capacity(lambda_grid.len());
    for &lambda in lambda_grid {
        let v = q(lambda)?;
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::SlopeFit(format!(
                "q({lambda}) = {v}; need q > 0 on the whole grid - use larger densities \
                 or an analytic source"
            )));
        }
        xs.push(lambda.ln());
        ys.push(v.ln());
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let delta_hat = sxy / sxx;
    let intercept = my - delta_hat * mx;
    let ss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (intercept + delta_hat * x);
            r * r
        })
        .sum();
    if !delta_hat.is_finite() {
        return Err(Error::SlopeFit("slope fit produced a non-finite value".into()));
    }
    Ok(SlopeFit {
        delta_hat,
        intercept,
        residual: (ss / n).sqrt(),
        lambda_grid: lambda_grid.to_vec(),
        source,
    })
}

/// One diversity-order check of the verification table.
#[derive(Debug, Clone)]
pub struct TheoremCase {
    pub name: &'static str,
    pub expected: f64,
    pub tolerance: f64,
    pub fit: SlopeFit,
    pub pass: bool,
}

/// Fitted diversity orders for the four canonical cases: Rayleigh-everywhere
/// total outage (order 1), the fading-marks lower bound (order 1), and the
/// path-loss-only dominant-ball bound with overlapping (order 1) and disjoint
/// (order 2) regions.
pub fn verify_theorem_table(settings: &QuadratureSettings) -> Result<Vec<TheoremCase>> {
    let layout = NodeLayout::new(Point::new(15.0, 0.0), Point::new(6.0, 0.0))?;
    let disjoint_layout = NodeLayout::new(Point::new(15.0, 0.0), Point::new(30.0, 0.0))?;
    let grid = default_analytic_grid();
    let mut cases = Vec::new();

    let rayleigh = RayleighOutage::new(&layout, 4.0, 0.1, settings)?;
    cases.push(make_case(
        "rayleigh-total",
        1.0,
        0.15,
        estimate_scdo(
            |l| Ok(rayleigh.q_bc(l) + rayleigh.q_mac(l)),
            &grid,
            Method::Analytic,
        )?,
    ));

    let mark_bound = DominantMarkBound::new(
        &NetworkConfig::new(layout, 4.0, 0.1, 1e-4, FadingSpec::mixed_u1())?,
        settings,
    )?;
    cases.push(make_case(
        "fading-marks-bound",
        1.0,
        0.15,
        estimate_scdo(|l| Ok(mark_bound.bound(l)), &grid, Method::Bound)?,
    ));

    let overlap = dominant_regions(&layout, 4.0, 0.1)?;
    cases.push(make_case(
        "pathloss-overlap",
        1.0,
        0.15,
        estimate_scdo(
            |l| Ok(q_bc_dominant_void_bound(&overlap, l)),
            &grid,
            Method::Bound,
        )?,
    ));

    let disjoint = dominant_regions(&disjoint_layout, 4.0, 0.1)?;
    cases.push(make_case(
        "pathloss-disjoint",
        2.0,
        0.15,
        estimate_scdo(
            |l| Ok(q_bc_dominant_void_bound(&disjoint, l)),
            &grid,
            Method::Bound,
        )?,
    ));
    Ok(cases)
}

fn make_case(name: &'static str, expected: f64, tolerance: f64, fit: SlopeFit) -> TheoremCase {
    let pass = (fit.delta_hat - expected).abs() <= tolerance;
    TheoremCase {
        name,
        expected,
        tolerance,
        fit,
        pass,
    }
}

/// `sum_k coeffs[k] lambda^(k+1)`: the truncated power series whose
/// diversity order is the index of its first non-zero coefficient.
pub fn power_series(coeffs: &[f64], lambda: f64) -> f64 {
    let mut acc = 0.0;
    let mut p = 1.0;
    for &c in coeffs {
        p *= lambda;
        acc += c * p;
    }
    acc
}

/// Exponent of the leading term of [`power_series`], if any coefficient is
/// non-zero.
pub fn leading_exponent(coeffs: &[f64]) -> Option<f64> {
    coeffs
        .iter()
        .position(|&c| c != 0.0)
        .map(|k| (k + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn grid_construction() {
        let g = log_grid(1e-6, 1e-4, 8).unwrap();
        assert_eq!(g.len(), 8);
        assert_relative_eq!(g[0], 1e-6, max_relative = 1e-12);
        assert_relative_eq!(g[7], 1e-4, max_relative = 1e-12);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(log_grid(1e-4, 1e-6, 8).is_err());
        assert!(log_grid(1e-6, 1e-4, 1).is_err());
    }

    #[test]
    fn linear_in_lambda_curve_has_slope_one() {
        let grid = log_grid(1e-7, 1e-5, 8).unwrap();
        let fit = estimate_scdo(
            |l| Ok(-f64::exp_m1(-351.1 * l)),
            &grid,
            Method::Analytic,
        )
        .unwrap();
        assert!((fit.delta_hat - 1.0).abs() < 0.01, "slope {}", fit.delta_hat);
    }

    #[test]
    fn pure_power_law_is_exact() {
        let grid = log_grid(1e-6, 1e-4, 8).unwrap();
        let fit = estimate_scdo(|l| Ok(7.3 * l * l), &grid, Method::Analytic).unwrap();
        assert_relative_eq!(fit.delta_hat, 2.0, max_relative = 1e-12);
        assert!(fit.residual < 1e-12);
    }

    #[test]
    fn slope_invariant_under_scaling() {
        let grid = log_grid(1e-6, 1e-4, 8).unwrap();
        let a = estimate_scdo(|l| Ok(-f64::exp_m1(-351.1 * l)), &grid, Method::Analytic).unwrap();
        let b = estimate_scdo(
            |l| Ok(-17.0 * f64::exp_m1(-351.1 * l)),
            &grid,
            Method::Analytic,
        )
        .unwrap();
        assert_relative_eq!(a.delta_hat, b.delta_hat, max_relative = 1e-12);
    }

    #[test]
    fn grid_shift_stability() {
        let q = |l: f64| Ok(-f64::exp_m1(-351.1 * l));
        let a = estimate_scdo(q, &log_grid(1e-6, 1e-4, 8).unwrap(), Method::Analytic).unwrap();
        let b = estimate_scdo(q, &log_grid(1e-7, 1e-5, 8).unwrap(), Method::Analytic).unwrap();
        assert!((a.delta_hat - b.delta_hat).abs() < 0.05);
    }

    #[test]
    fn grid_validation() {
        let q = |l: f64| Ok(l);
        assert!(estimate_scdo(q, &[1e-4], Method::Analytic).is_err());
        assert!(estimate_scdo(q, &[1e-6, 1e-5, 1e-6, 1e-4, 1e-3], Method::Analytic).is_err());
        // under two decades of span
        assert!(
            estimate_scdo(q, &log_grid(1e-5, 5e-5, 6).unwrap(), Method::Analytic).is_err()
        );
        // zero curve value names the fix
        let err = estimate_scdo(
            |_| Ok(0.0),
            &log_grid(1e-6, 1e-4, 8).unwrap(),
            Method::MonteCarlo,
        )
        .unwrap_err();
        assert!(err.to_string().contains("larger densities"));
    }

    #[test]
    fn theorem_table_passes() {
        let cases = verify_theorem_table(&QuadratureSettings::default()).unwrap();
        assert_eq!(cases.len(), 4);
        for case in &cases {
            assert!(
                case.pass,
                "{}: slope {} expected {} +- {}",
                case.name, case.fit.delta_hat, case.expected, case.tolerance
            );
        }
        assert_relative_eq!(cases[3].fit.delta_hat, 2.0, epsilon = 0.01);
    }

    #[test]
    fn power_series_leading_term_sets_slope() {
        let grid = log_grid(1e-7, 1e-5, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let lead = rng.gen_range(0..3usize);
            let mut coeffs = vec![0.0; 3];
            for c in coeffs.iter_mut().skip(lead) {
                *c = rng.gen_range(0.1..10.0);
            }
            let expected = leading_exponent(&coeffs).unwrap();
            let fit = estimate_scdo(|l| Ok(power_series(&coeffs, l)), &grid, Method::Analytic)
                .unwrap();
            assert!(
                (fit.delta_hat - expected).abs() < 0.02,
                "coeffs {coeffs:?}: slope {} expected {expected}",
                fit.delta_hat
            );
        }
        assert_eq!(leading_exponent(&[0.0, 0.0]), None);
    }
}
