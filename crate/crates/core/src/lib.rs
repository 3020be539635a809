//! Outage probability and spatial diversity order of selection
//! decode-and-forward relaying inside a Poisson field of interferers.
//!
//! The crate computes the two-phase outage probability four ways and checks
//! them against each other:
//! - semi-closed-form expressions under Rayleigh fading ([`analytic`]),
//! - dominant-interferer lower bounds ([`bounds`]),
//! - small-density asymptotics and their ball/lens geometry ([`geometry`],
//!   [`bounds`]),
//! - direct Monte Carlo simulation of the marked point process
//!   ([`montecarlo`]).
//!
//! [`diversity`] fits density-scaling exponents to any of these curves and
//! [`optimizer`] searches the relay position minimizing total outage.

pub mod analytic;
pub mod bounds;
pub mod cli;
pub mod config;
pub mod diversity;
pub mod error;
pub mod geometry;
pub mod montecarlo;
pub mod optimizer;
pub mod quad;
pub mod special;

pub use analytic::{outage_rayleigh, q_norelay_rayleigh, NoRelayOutage, RayleighOutage};
pub use bounds::{
    q_bc_asymptotic_pathloss_only, q_bc_dominant_void_bound, q_bc_lower_bound_fading_marks,
    DominantMarkBound, PathLossAsymptotics, TightnessRow,
};
pub use config::{Fading, FadingSpec, Method, NetworkConfig, OutageBreakdown};
pub use diversity::{estimate_scdo, SlopeFit, TheoremCase};
pub use error::{Error, Result};
pub use geometry::{dominant_regions, path_loss, DominantRegions, NodeLayout, Point};
pub use montecarlo::{
    estimate_outage, sample_snapshot, McEstimate, SimulationOutcome, SimulationParams, Snapshot,
};
pub use optimizer::{optimize_relay_line, sweep_alpha_curve, PlacementResult};
pub use quad::QuadratureSettings;
