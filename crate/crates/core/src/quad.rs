//! Globally adaptive Gauss-Kronrod quadrature (7-15 pair).

use serde::{Deserialize, Serialize};
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Tolerances and the improper-integral handling for the semi-infinite
/// radial integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Map the radial integral to (0, 1] via u = 1/(1+r). When disabled the
    /// integral is truncated at a large fixed radius instead.
    pub radial_transform: bool,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            radial_transform: true,
        }
    }
}

impl QuadratureSettings {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        QuadratureSettings {
            rel_tol,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "quadrature tolerances must be positive, got rel {} abs {}",
                self.rel_tol, self.abs_tol
            )));
        }
        Ok(())
    }
}

// 15-point Kronrod abscissae (positive half) and weights, with the embedded
// 7-point Gauss weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_2,
    0.063_092_092_629_978_6,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// One Gauss-Kronrod 7-15 evaluation on [a, b]; returns (integral, error).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut res_kronrod = f_center * WGK[7];
    let mut res_gauss = 0.0;
    let mut res_abs = res_kronrod.abs();
    let mut fv = [0.0f64; 15];
    fv[7] = f_center;

    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[j] = f1;
        fv[14 - j] = f2;
        res_kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * (f1 + f2);
        }
    }
    res_gauss += WG[3] * f_center;

    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }

    let value = res_kronrod * half;
    let err = rescale_error((res_kronrod - res_gauss) * half, res_abs * half.abs(), res_asc * half.abs());
    (value, err)
}

#[derive(Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Globally adaptive integration of `f` over [a, b].
///
/// Bisects the panel with the largest error estimate until the summed error
/// satisfies `max(abs_tol, rel_tol * |I|)` or the panel budget is exhausted.
pub fn integrate<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_panels: usize,
) -> Result<(f64, f64)> {
    if a == b {
        return Ok((0.0, 0.0));
    }
    let (v, e) = gk15(f, a, b);
    if !v.is_finite() {
        return Err(Error::Domain(
            "integrand produced a non-finite value".into(),
        ));
    }
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value: v, err: e });
    let mut total_value = v;
    let mut total_err = e;

    while total_err > abs_tol.max(rel_tol * total_value.abs()) {
        if heap.len() >= max_panels {
            return Err(Error::QuadratureFailure {
                achieved: total_err,
                requested: abs_tol.max(rel_tol * total_value.abs()),
            });
        }
        let worst = heap.pop().expect("heap cannot be empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // panel no longer bisectable at f64 resolution
            return Err(Error::QuadratureFailure {
                achieved: total_err,
                requested: abs_tol.max(rel_tol * total_value.abs()),
            });
        }
        let (v1, e1) = gk15(f, worst.a, mid);
        let (v2, e2) = gk15(f, mid, worst.b);
        if !(v1.is_finite() && v2.is_finite()) {
            return Err(Error::Domain(
                "integrand produced a non-finite value".into(),
            ));
        }
        total_value += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.err;
        heap.push(Panel { a: worst.a, b: mid, value: v1, err: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, err: e2 });
    }
    Ok((total_value, total_err))
}
