//! Node layout, the non-singular path-loss law and its normalized kernels,
//! and the ball/lens geometry behind the dominant-interferer regions.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// 2D point in dimensionless distance units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dist_sq(self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn dist(self, other: Point) -> f64 {
        self.dist_sq(other).sqrt()
    }

    /// Rotation about the origin by `angle` radians.
    pub fn rotated(self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        Point {
            x: c * self.x - s * self.y,
            y: s * self.x + c * self.y,
        }
    }
}

/// Source/relay positions. The destination is pinned at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodeLayout {
    pub x_s: Point,
    pub x_r: Point,
}

impl NodeLayout {
    /// Rejects zero-length desired links (`x_s` at the origin or `x_s == x_r`).
    pub fn new(x_s: Point, x_r: Point) -> Result<Self> {
        if x_s.norm_sq() == 0.0 {
            return Err(Error::InvalidConfig(
                "source must not coincide with the destination (origin)".into(),
            ));
        }
        if x_s == x_r {
            return Err(Error::InvalidConfig(
                "source must not coincide with the relay".into(),
            ));
        }
        Ok(NodeLayout { x_s, x_r })
    }

    pub fn x_d(&self) -> Point {
        Point::ORIGIN
    }

    pub fn source_norm(&self) -> f64 {
        self.x_s.norm()
    }

    pub fn relay_norm(&self) -> f64 {
        self.x_r.norm()
    }

    pub fn source_relay_dist(&self) -> f64 {
        self.x_s.dist(self.x_r)
    }

    /// Layout rotated about the destination by `angle` radians.
    pub fn rotated(&self, angle: f64) -> NodeLayout {
        NodeLayout {
            x_s: self.x_s.rotated(angle),
            x_r: self.x_r.rotated(angle),
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 2.0) {
        return Err(Error::Domain(format!(
            "path-loss exponent must satisfy alpha > 2, got {alpha}"
        )));
    }
    Ok(())
}

/// `(x_sq)^(alpha/2)`, i.e. `d^alpha` from a squared distance, avoiding the
/// square root. Special-cases alpha = 4 for the hot Monte Carlo loop.
#[inline]
pub fn pow_alpha_half(x_sq: f64, alpha: f64) -> f64 {
    if alpha == 4.0 {
        x_sq * x_sq
    } else {
        x_sq.powf(0.5 * alpha)
    }
}

/// Non-singular path loss `1 / (1 + r^alpha)` from a squared distance.
#[inline]
pub fn path_loss_sq(dist_sq: f64, alpha: f64) -> f64 {
    1.0 / (1.0 + pow_alpha_half(dist_sq, alpha))
}

/// Non-singular path loss `l(r) = (1 + r^alpha)^{-1}`.
///
/// Monotone decreasing in `r` with `l(0) = 1`. Requires `r >= 0` and
/// `alpha > 2` (integrability of the interference field).
pub fn path_loss(r: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(r >= 0.0) {
        return Err(Error::Domain(format!("distance must be >= 0, got {r}")));
    }
    Ok(path_loss_sq(r * r, alpha))
}

/// Normalized source-destination kernel `(1 + |x_s|^alpha) / (1 + r^alpha)`.
pub fn kernel_sd(r: f64, layout: &NodeLayout, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(r >= 0.0) {
        return Err(Error::Domain(format!("distance must be >= 0, got {r}")));
    }
    let num = 1.0 + pow_alpha_half(layout.x_s.norm_sq(), alpha);
    Ok(num * path_loss_sq(r * r, alpha))
}

/// Normalized relay-destination kernel `(1 + |x_r|^alpha) / (1 + r^alpha)`.
pub fn kernel_rd(r: f64, layout: &NodeLayout, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(r >= 0.0) {
        return Err(Error::Domain(format!("distance must be >= 0, got {r}")));
    }
    let num = 1.0 + pow_alpha_half(layout.x_r.norm_sq(), alpha);
    Ok(num * path_loss_sq(r * r, alpha))
}

/// Normalized source-relay kernel in destination-centered polar coordinates:
/// `(1 + |x_s - x_r|^alpha) / (1 + (r^2 + |x_r|^2 - 2 r |x_r| cos phi)^(alpha/2))`.
pub fn kernel_sr(r: f64, phi: f64, layout: &NodeLayout, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(r >= 0.0) {
        return Err(Error::Domain(format!("distance must be >= 0, got {r}")));
    }
    if !(0.0..=PI).contains(&phi) {
        return Err(Error::Domain(format!("phi must be in [0, pi], got {phi}")));
    }
    let xr = layout.relay_norm();
    let d_sq = (r * r + xr * xr - 2.0 * r * xr * phi.cos()).max(0.0);
    let num = 1.0 + pow_alpha_half(layout.x_s.dist_sq(layout.x_r), alpha);
    Ok(num * path_loss_sq(d_sq, alpha))
}

/// Dominant-interferer balls around the relay and the destination.
///
/// `r1` bounds the region where a single unit-mark interferer alone breaks the
/// source-relay link; `r2` the same for the repetition branch at the
/// destination. A zero radius means that region is empty: no single
/// interferer can cause that outage, however close.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DominantRegions {
    pub r1: f64,
    pub r2: f64,
    pub area_r: f64,
    pub area_d: f64,
    pub area_lens: f64,
    pub overlap: bool,
}

impl DominantRegions {
    pub fn area_union(&self) -> f64 {
        self.area_r + self.area_d - self.area_lens
    }

    /// Lens area normalized by the union area (intersection over union).
    /// Zero when either region is empty.
    pub fn lens_fraction_of_union(&self) -> f64 {
        let u = self.area_union();
        if u > 0.0 {
            self.area_lens / u
        } else {
            0.0
        }
    }
}

/// Area of the intersection of two disks with radii `r1`, `r2` and center
/// distance `d`.
pub fn lens_area(d: f64, r1: f64, r2: f64) -> Result<f64> {
    if !(d >= 0.0 && r1 >= 0.0 && r2 >= 0.0) {
        return Err(Error::Domain(format!(
            "lens_area requires non-negative inputs, got d={d}, r1={r1}, r2={r2}"
        )));
    }
    let (small, big) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
    if d + small <= big {
        // one disk contains the other
        return Ok(PI * small * small);
    }
    if d >= r1 + r2 {
        return Ok(0.0);
    }
    let d2 = d * d;
    let a1 = r1 * r1 * (((d2 + r1 * r1 - r2 * r2) / (2.0 * d * r1)).clamp(-1.0, 1.0)).acos();
    let a2 = r2 * r2 * (((d2 + r2 * r2 - r1 * r1) / (2.0 * d * r2)).clamp(-1.0, 1.0)).acos();
    let k = ((-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2)).max(0.0);
    Ok((a1 + a2 - 0.5 * k.sqrt()).max(0.0))
}

/// Radii, areas and overlap of the dominant-interferer regions for the
/// path-loss-only broadcast phase.
///
/// `r1 = (beta (1 + |x_s - x_r|^alpha) - 1)^{1/alpha}` around the relay and
/// `r2 = ((beta/2) (1 + |x_s|^alpha) - 1)^{1/alpha}` around the destination.
/// A non-positive radicand yields an empty region (radius 0). Boundary
/// tangency `|x_r| = r1 + r2` counts as overlap with zero lens area.
pub fn dominant_regions(layout: &NodeLayout, alpha: f64, beta: f64) -> Result<DominantRegions> {
    check_alpha(alpha)?;
    if !(beta > 0.0) {
        return Err(Error::Domain(format!("beta must be > 0, got {beta}")));
    }
    let root = |radicand: f64| -> f64 {
        if radicand > 0.0 {
            radicand.powf(1.0 / alpha)
        } else {
            0.0
        }
    };
    let r1 = root(beta * (1.0 + pow_alpha_half(layout.x_s.dist_sq(layout.x_r), alpha)) - 1.0);
    let r2 = root(0.5 * beta * (1.0 + pow_alpha_half(layout.x_s.norm_sq(), alpha)) - 1.0);
    let d = layout.relay_norm();
    let empty = r1 == 0.0 || r2 == 0.0;
    let overlap = !empty && d <= r1 + r2;
    let area_lens = if overlap { lens_area(d, r1, r2)? } else { 0.0 };
    Ok(DominantRegions {
        r1,
        r2,
        area_r: PI * r1 * r1,
        area_d: PI * r2 * r2,
        area_lens,
        overlap,
    })
}
