//! Snapshot simulator: marked Poisson field on a disk, correlated
//! interference at relay and destination, per-trial outcome classification
//! and parallel outage estimation with reproducible counter-based streams.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;

use crate::config::{Fading, Method, NetworkConfig, OutageBreakdown};
use crate::error::{Error, Result};
use crate::geometry::{path_loss_sq, pow_alpha_half, Point};

/// Trial budget, seeding and window controls for one estimation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationParams {
    /// Simulation disk radius; `None` picks a radius from the truncation
    /// analysis in [`default_window_radius`].
    pub window_radius: Option<f64>,
    pub trials: u64,
    pub seed: u64,
    /// Pair consecutive trials on a shared stream with mirrored uniforms.
    pub antithetic: bool,
}

impl Default for SimulationParams {
    fn default() -> Self {
        SimulationParams {
            window_radius: None,
            trials: 100_000,
            seed: 42,
            antithetic: false,
        }
    }
}

impl SimulationParams {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be >= 1".into()));
        }
        if let Some(r) = self.window_radius {
            if !(r > 0.0) || !r.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "window radius must be positive, got {r}"
                )));
            }
        }
        if self.antithetic && self.trials % 2 != 0 {
            return Err(Error::InvalidConfig(
                "antithetic estimation needs an even trial count".into(),
            ));
        }
        Ok(())
    }

    pub fn resolved_radius(&self, config: &NetworkConfig) -> f64 {
        self.window_radius
            .unwrap_or_else(|| default_window_radius(config))
    }
}

/// Hard cap on the automatic window radius; beyond this the per-trial point
/// count becomes impractical and the caller should set the radius explicitly.
const MAX_AUTO_RADIUS: f64 = 3000.0;

/// Window radius with truncation bias below estimator noise:
/// `max(100, 5 max(|x_s|, |x_r|), r_eps)` where `r_eps` puts the expected
/// interference from beyond the window, `2 pi lambda R^{2-alpha}/(alpha-2)`,
/// three decades under the smallest outage threshold in play.
pub fn default_window_radius(config: &NetworkConfig) -> f64 {
    let layout = &config.layout;
    let d_max = layout
        .source_norm()
        .max(layout.relay_norm())
        .max(layout.source_relay_dist());
    let base = 100.0_f64.max(5.0 * layout.source_norm().max(layout.relay_norm()));
    let threshold_scale = config.beta * (1.0 + pow_alpha_half(d_max * d_max, config.alpha));
    let c = 2.0 * PI * config.lambda / (config.alpha - 2.0) * threshold_scale * 1e3;
    let r_eps = if c > 0.0 {
        c.powf(1.0 / (config.alpha - 2.0)).min(MAX_AUTO_RADIUS)
    } else {
        0.0
    };
    base.max(r_eps)
}

/// One realization of the marked interferer field plus the desired-link
/// gains. The same location list feeds both receivers, preserving the
/// spatial correlation of the two interference powers.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Snapshot {
    pub locations: Vec<Point>,
    /// Marks toward the relay.
    pub g: Vec<f64>,
    /// Marks toward the destination.
    pub h: Vec<f64>,
    pub u_sr: f64,
    pub u_sd: f64,
    pub u_rd: f64,
}

/// Per-trial substream with optional antithetic mirroring of all uniforms
/// drawn after the interferer count.
struct TrialRng {
    rng: ChaCha8Rng,
    mirror: bool,
}

impl TrialRng {
    fn new(seed: u64, trial_index: u64, antithetic: bool) -> Self {
        let (stream, mirror) = if antithetic {
            (trial_index / 2, trial_index % 2 == 1)
        } else {
            (trial_index, false)
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        TrialRng { rng, mirror }
    }

    fn uniform(&mut self) -> f64 {
        let u: f64 = self.rng.gen();
        if self.mirror {
            1.0 - u
        } else {
            u
        }
    }

    fn gain(&mut self, fading: Fading) -> f64 {
        match fading {
            // inverse-CDF exponential so the antithetic mirror applies
            Fading::Rayleigh => -(-self.uniform()).ln_1p(),
            Fading::Deterministic1 => 1.0,
        }
    }
}

fn sample_snapshot_into(
    out: &mut Snapshot,
    config: &NetworkConfig,
    params: &SimulationParams,
    trial_index: u64,
) {
    let radius = params.resolved_radius(config);
    let mut rng = TrialRng::new(params.seed, trial_index, params.antithetic);
    let mean = config.lambda * PI * radius * radius;
    // the count comes straight off the stream, before mirroring applies, so
    // an antithetic pair sees the same interferer count
    let n = if mean > 0.0 {
        Poisson::new(mean).expect("validated mean").sample(&mut rng.rng) as u64
    } else {
        0
    };
    let desired = config.fading.desired;
    out.u_sr = rng.gain(desired);
    out.u_sd = rng.gain(desired);
    out.u_rd = rng.gain(desired);
    out.locations.clear();
    out.g.clear();
    out.h.clear();
    out.locations.reserve(n as usize);
    out.g.reserve(n as usize);
    out.h.reserve(n as usize);
    for _ in 0..n {
        let r = radius * rng.uniform().sqrt();
        let theta = 2.0 * PI * rng.uniform();
        let (s, c) = theta.sin_cos();
        out.locations.push(Point::new(r * c, r * s));
        out.g.push(rng.gain(config.fading.mark_g));
        out.h.push(rng.gain(config.fading.mark_h));
    }
}

/// One marked-PPP realization, deterministic given `(seed, trial_index)`.
pub fn sample_snapshot(
    config: &NetworkConfig,
    params: &SimulationParams,
    trial_index: u64,
) -> Snapshot {
    let mut out = Snapshot::default();
    sample_snapshot_into(&mut out, config, params, trial_index);
    out
}

/// Aggregate interference `(I_r, I_d)` seen at the relay and the destination
/// from the same interferer locations.
pub fn interference_pair(snapshot: &Snapshot, config: &NetworkConfig) -> (f64, f64) {
    let x_r = config.layout.x_r;
    let alpha = config.alpha;
    let mut i_r = 0.0;
    let mut i_d = 0.0;
    for (i, &p) in snapshot.locations.iter().enumerate() {
        i_r += snapshot.g[i] * path_loss_sq(p.dist_sq(x_r), alpha);
        i_d += snapshot.h[i] * path_loss_sq(p.norm_sq(), alpha);
    }
    (i_r, i_d)
}

/// Block outcome of the two-slot protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    /// Relay failed to decode and the repetition-combined direct link failed.
    BcOutage,
    /// Relay decoded but the combined relay/source transmission failed.
    MacOutage,
}

/// Classify one snapshot per the SDF decision rules. Comparisons are done in
/// product form (`u l < beta I`) so zero interference cleanly means success.
pub fn classify_sdf(snapshot: &Snapshot, config: &NetworkConfig) -> Outcome {
    let layout = &config.layout;
    let alpha = config.alpha;
    let beta = config.beta;
    let l_sr = path_loss_sq(layout.x_s.dist_sq(layout.x_r), alpha);
    let l_sd = path_loss_sq(layout.x_s.norm_sq(), alpha);
    let l_rd = path_loss_sq(layout.x_r.norm_sq(), alpha);
    let (i_r, i_d) = interference_pair(snapshot, config);

    let relay_failed = snapshot.u_sr * l_sr < beta * i_r;
    if relay_failed {
        if 2.0 * snapshot.u_sd * l_sd < beta * i_d {
            Outcome::BcOutage
        } else {
            Outcome::Success
        }
    } else if snapshot.u_sd * l_sd + snapshot.u_rd * l_rd < beta * i_d {
        Outcome::MacOutage
    } else {
        Outcome::Success
    }
}

/// Point estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub p_hat: f64,
    pub se: f64,
    pub trials: u64,
    pub seed: u64,
}

/// Estimates for both outage phases from one simulation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationOutcome {
    pub breakdown: OutageBreakdown,
    pub bc: McEstimate,
    pub mac: McEstimate,
    pub window_radius: f64,
}

/// Pair-level tallies: outcome counts plus sums of squared per-pair counts
/// for the antithetic variance estimate.
#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    bc: u64,
    mac: u64,
    bc_sq: u64,
    mac_sq: u64,
}

impl Tally {
    fn merge(self, other: Tally) -> Tally {
        Tally {
            bc: self.bc + other.bc,
            mac: self.mac + other.mac,
            bc_sq: self.bc_sq + other.bc_sq,
            mac_sq: self.mac_sq + other.mac_sq,
        }
    }
}

fn estimate_from_counts(count: u64, sq: u64, params: &SimulationParams) -> McEstimate {
    let trials = params.trials;
    let p_hat = count as f64 / trials as f64;
    let se = if params.antithetic {
        // variance of per-pair means, halved again for the pair average
        let pairs = (trials / 2) as f64;
        let mean = count as f64 / pairs;
        let var = (sq as f64 / pairs - mean * mean).max(0.0);
        (var / pairs).sqrt() / 2.0
    } else {
        (p_hat * (1.0 - p_hat) / trials as f64).sqrt()
    };
    McEstimate {
        p_hat,
        se,
        trials,
        seed: params.seed,
    }
}

/// Parallel Monte Carlo estimate of both outage phases. Deterministic given
/// `(seed, trials)` regardless of thread count: every trial owns a dedicated
/// RNG stream and aggregation is pure integer addition.
pub fn estimate_outage(config: &NetworkConfig, params: &SimulationParams) -> Result<SimulationOutcome> {
    params.validate()?;
    let units = if params.antithetic {
        params.trials / 2
    } else {
        params.trials
    };
    let tally = (0..units)
        .into_par_iter()
        .map_init(Snapshot::default, |scratch, unit| {
            let mut t = Tally::default();
            let trials_here = if params.antithetic {
                [Some(2 * unit), Some(2 * unit + 1)]
            } else {
                [Some(unit), None]
            };
            let (mut bc, mut mac) = (0u64, 0u64);
            for trial in trials_here.into_iter().flatten() {
                sample_snapshot_into(scratch, config, params, trial);
                match classify_sdf(scratch, config) {
                    Outcome::BcOutage => bc += 1,
                    Outcome::MacOutage => mac += 1,
                    Outcome::Success => {}
                }
            }
            t.bc = bc;
            t.mac = mac;
            t.bc_sq = bc * bc;
            t.mac_sq = mac * mac;
            t
        })
        .reduce(Tally::default, Tally::merge);

    let bc = estimate_from_counts(tally.bc, tally.bc_sq, params);
    let mac = estimate_from_counts(tally.mac, tally.mac_sq, params);
    Ok(SimulationOutcome {
        breakdown: OutageBreakdown::new(bc.p_hat, mac.p_hat, Method::MonteCarlo),
        bc,
        mac,
        window_radius: params.resolved_radius(config),
    })
}
