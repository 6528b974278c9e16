//! Two-path (surface + bulk) link model for diver-to-diver trials.
//!
//! The received level is the stronger of two paths:
//!
//! * surface: up to the interface, along it and back down,
//!   `A_surf = exp(−(d_tx + d_rx)/L_z − r/L_r) / sqrt(r/r0)`;
//! * bulk: straight through the water,
//!   `A_bulk = exp(−R/δ) / (R/r0)` with `R = sqrt(r² + (d_tx − d_rx)²)`.
//!
//! The link closes with probability `Φ((G − T)/σ_fade)` where `G` is the gain
//! in dB above a coupling offset and `T` the detection threshold. Gains are
//! computed from log-amplitudes, so strongly attenuated paths stay finite.

mod fit;
mod trials;

pub use fit::{fit_parameters, FitResult, FreeParam, ParamBounds};
pub use trials::{simulate_records, simulate_trials, TrialOutcome, TrialRecord};

use std::f64::consts::{LN_10, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::media::{skin_depth, SEAWATER_SIGMA};

/// Field dB per neper.
const DB_PER_NEPER: f64 = 20.0 / LN_10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkModelParams {
    /// Surface-wave penetration depth (m).
    pub l_z: f64,
    /// Surface-wave propagation length (m).
    pub l_r: f64,
    /// Bulk skin depth (m).
    pub delta: f64,
    /// Lumped TX power, antenna coupling and RX sensitivity (dB).
    pub coupling_db: f64,
    pub threshold_db: f64,
    pub sigma_fade_db: f64,
    /// Reference distance for spreading (m).
    pub r0: f64,
}

impl Default for LinkModelParams {
    /// Effective parameters for 50 MHz in seawater with `L_r = 9 m`.
    ///
    /// The threshold puts the 50 % contour at 0.5 m depth near 5 m range and
    /// at 3 m depth near 0.5 m range.
    fn default() -> Self {
        Self {
            l_z: 0.0851,
            l_r: 9.0,
            delta: skin_depth(SEAWATER_SIGMA, 50e6).expect("seawater is lossy"),
            coupling_db: 0.0,
            threshold_db: -114.0,
            sigma_fade_db: 6.0,
            r0: 1.0,
        }
    }
}

impl LinkModelParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("L_z", self.l_z),
            ("L_r", self.l_r),
            ("delta", self.delta),
            ("r0", self.r0),
            ("sigma_fade_db", self.sigma_fade_db),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        if !self.coupling_db.is_finite() || !self.threshold_db.is_finite() {
            return Err(Error::domain("coupling and threshold must be finite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkScenario {
    pub tx_depth: f64,
    pub rx_depth: f64,
    pub range: f64,
}

impl LinkScenario {
    pub fn new(tx_depth: f64, rx_depth: f64, range: f64) -> Result<Self> {
        for (name, v) in [("tx_depth", tx_depth), ("rx_depth", rx_depth), ("range", range)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self {
            tx_depth,
            rx_depth,
            range,
        })
    }

    /// Both divers at the same depth.
    pub fn level(depth: f64, range: f64) -> Result<Self> {
        Self::new(depth, depth, range)
    }
}

/// Natural-log amplitudes `(ln A_surf, ln A_bulk)`.
pub fn path_log_amplitudes(s: &LinkScenario, p: &LinkModelParams) -> (f64, f64) {
    let r = s.range;
    let surf = -(s.tx_depth + s.rx_depth) / p.l_z - r / p.l_r - 0.5 * (r / p.r0).ln();
    let slant = r.hypot(s.tx_depth - s.rx_depth);
    let bulk = -slant / p.delta - (slant / p.r0).ln();
    (surf, bulk)
}

/// Link gain in dB: coupling plus the stronger of the two paths.
pub fn two_path_gain(s: &LinkScenario, p: &LinkModelParams) -> f64 {
    let (surf, bulk) = path_log_amplitudes(s, p);
    p.coupling_db + DB_PER_NEPER * surf.max(bulk)
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

pub fn link_probability(gain_db: f64, p: &LinkModelParams) -> f64 {
    normal_cdf((gain_db - p.threshold_db) / p.sigma_fade_db)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityGrid {
    pub depths: Vec<f64>,
    pub ranges: Vec<f64>,
    /// `p[i][j]` for `depths[i]`, `ranges[j]`.
    pub p: Vec<Vec<f64>>,
}

impl ProbabilityGrid {
    /// `(depth, range, p)` rows, depth outer.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.depths.iter().zip(&self.p).flat_map(move |(&d, row)| {
            self.ranges.iter().zip(row).map(move |(&r, &p)| (d, r, p))
        })
    }

    /// Smallest grid range at `depth_index` where the probability drops below
    /// `level`, linearly interpolated between grid columns. `None` if the row
    /// never crosses; `Some(0)` style edge cases return the first range.
    pub fn crossing_range(&self, depth_index: usize, level: f64) -> Option<f64> {
        let row = &self.p[depth_index];
        if row[0] < level {
            return Some(self.ranges[0]);
        }
        row.windows(2).zip(self.ranges.windows(2)).find_map(|(pp, rr)| {
            (pp[0] >= level && pp[1] < level)
                .then(|| rr[0] + (pp[0] - level) / (pp[0] - pp[1]) * (rr[1] - rr[0]))
        })
    }
}

fn check_axis(name: &str, v: &[f64]) -> Result<()> {
    if v.is_empty() {
        return Err(Error::domain(format!("{name} grid is empty")));
    }
    if v.iter().any(|x| !(x.is_finite() && *x > 0.0)) || v.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain(format!(
            "{name} grid must be positive and strictly increasing"
        )));
    }
    Ok(())
}

/// Link probability for divers at equal depth over a depth × range grid.
pub fn probability_grid(depths: &[f64], ranges: &[f64], p: &LinkModelParams) -> Result<ProbabilityGrid> {
    check_axis("depth", depths)?;
    check_axis("range", ranges)?;
    p.validate()?;
    let grid = depths
        .iter()
        .map(|&d| {
            ranges
                .iter()
                .map(|&r| {
                    let s = LinkScenario { tx_depth: d, rx_depth: d, range: r };
                    link_probability(two_path_gain(&s, p), p)
                })
                .collect()
        })
        .collect();
    Ok(ProbabilityGrid {
        depths: depths.to_vec(),
        ranges: ranges.to_vec(),
        p: grid,
    })
}

#[cfg(test)]
mod tests;
