//! Line-based `key = value` scenario files.
//!
//! `#` starts a comment; blank lines are ignored. Every value is a number in
//! SI units named by its suffix. Unknown or repeated keys are rejected with the
//! offending line number.

use std::path::Path;

use crate::error::{Error, Result};
use crate::halfspace::{DipoleSource, HalfSpaceProblem, QuadratureConfig};
use crate::linkmodel::LinkModelParams;
use crate::media::{salinity_to_conductivity, skin_depth, Medium, RfContext, SEAWATER_EPS_R, SEAWATER_SIGMA};

pub const KEYS: &[&str] = &[
    "freq_hz",
    "eps_real",
    "sigma_s_per_m",
    "salinity_percent",
    "L_r_m",
    "L_z_m",
    "delta_m",
    "coupling_db",
    "threshold_db",
    "sigma_fade_db",
    "r0_m",
    "source_depth_m",
    "source_moment_a_m",
    "range_min_m",
    "range_max_m",
    "range_steps",
    "depth_min_m",
    "depth_max_m",
    "depth_steps",
    "seed",
    "attempts",
    "rel_tol",
    "max_tail_intervals",
];

pub const DEFAULT_FREQ_HZ: f64 = 50e6;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Scenario {
    values: Vec<(&'static str, f64, usize)>,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values: Vec<(&'static str, f64, usize)> = Vec::new();
        let mut medium_line = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
            let key = key.trim();
            let key = *KEYS
                .iter()
                .find(|k| **k == key)
                .ok_or_else(|| err(format!("unknown key `{key}`")))?;
            if values.iter().any(|(k, ..)| *k == key) {
                return Err(err(format!("duplicate key `{key}`")));
            }
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| err(format!("`{}` is not a number", value.trim())))?;
            if !value.is_finite() {
                return Err(err(format!("`{key}` must be finite")));
            }
            if key == "sigma_s_per_m" || key == "salinity_percent" {
                if let Some(prev) = medium_line {
                    return Err(err(format!(
                        "give either sigma_s_per_m or salinity_percent, not both (other on line {prev})"
                    )));
                }
                medium_line = Some(line_no);
            }
            values.push((key, value, line_no));
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.values.iter().find(|(k, ..)| *k == key).map(|(_, v, _)| *v)
    }

    fn line_of(&self, key: &str) -> usize {
        self.values
            .iter()
            .find(|(k, ..)| *k == key)
            .map(|(.., l)| *l)
            .unwrap_or(0)
    }

    fn require(&self, key: &str) -> Result<f64> {
        self.get(key)
            .ok_or_else(|| Error::domain(format!("scenario is missing `{key}`")))
    }

    fn count(&self, key: &str) -> Result<Option<u64>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) if v >= 0.0 && v.fract() == 0.0 && v <= u64::MAX as f64 => Ok(Some(v as u64)),
            Some(v) => Err(Error::Parse {
                line: self.line_of(key),
                message: format!("`{key}` must be a non-negative integer, got {v}"),
            }),
        }
    }

    pub fn freq(&self) -> f64 {
        self.get("freq_hz").unwrap_or(DEFAULT_FREQ_HZ)
    }

    pub fn conductivity(&self) -> Result<f64> {
        match (self.get("sigma_s_per_m"), self.get("salinity_percent")) {
            (Some(s), _) => Ok(s),
            (None, Some(sal)) => salinity_to_conductivity(sal),
            (None, None) => Ok(SEAWATER_SIGMA),
        }
    }

    pub fn water(&self) -> Result<Medium> {
        Medium::new(
            self.get("eps_real").unwrap_or(SEAWATER_EPS_R),
            self.conductivity()?,
            "water",
        )
    }

    pub fn seed(&self) -> Result<u64> {
        Ok(self.count("seed")?.unwrap_or(0))
    }

    pub fn attempts(&self) -> Result<Option<u64>> {
        self.count("attempts")
    }

    /// Air above the scenario's water, source at `source_depth_m` (signed).
    pub fn half_space(&self) -> Result<HalfSpaceProblem> {
        HalfSpaceProblem::new(
            Medium::air(),
            self.water()?,
            RfContext::new(self.freq())?,
            DipoleSource::new(
                self.require("source_depth_m")?,
                self.get("source_moment_a_m").unwrap_or(1.0),
            )?,
        )
    }

    pub fn quadrature(&self) -> Result<QuadratureConfig> {
        let mut cfg = QuadratureConfig::default();
        if let Some(t) = self.get("rel_tol") {
            cfg.rel_tol = t;
        }
        if let Some(n) = self.count("max_tail_intervals")? {
            cfg.max_tail_intervals = n as usize;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Link parameters; δ defaults to the skin depth of the scenario's water.
    pub fn link_params(&self) -> Result<LinkModelParams> {
        let d = LinkModelParams::default();
        let delta = match self.get("delta_m") {
            Some(v) => v,
            None => skin_depth(self.conductivity()?, self.freq())?,
        };
        let p = LinkModelParams {
            l_z: self.get("L_z_m").unwrap_or(d.l_z),
            l_r: self.get("L_r_m").unwrap_or(d.l_r),
            delta,
            coupling_db: self.get("coupling_db").unwrap_or(d.coupling_db),
            threshold_db: self.get("threshold_db").unwrap_or(d.threshold_db),
            sigma_fade_db: self.get("sigma_fade_db").unwrap_or(d.sigma_fade_db),
            r0: self.get("r0_m").unwrap_or(d.r0),
        };
        p.validate()?;
        Ok(p)
    }

    fn axis(&self, prefix: &str) -> Result<Vec<f64>> {
        let lo = self.require(&format!("{prefix}_min_m"))?;
        let hi = self.require(&format!("{prefix}_max_m"))?;
        let n = self
            .count(&format!("{prefix}_steps"))?
            .ok_or_else(|| Error::domain(format!("scenario is missing `{prefix}_steps`")))?;
        linspace(lo, hi, n as usize)
    }

    pub fn ranges(&self) -> Result<Vec<f64>> {
        self.axis("range")
    }

    pub fn depths(&self) -> Result<Vec<f64>> {
        self.axis("depth")
    }
}

/// `n` evenly spaced points from `lo` to `hi` inclusive; `n = 1` gives `[lo]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    match n {
        0 => Err(Error::domain("grid needs at least one step")),
        1 => Ok(vec![lo]),
        _ if hi <= lo => Err(Error::domain(format!("grid max ({hi}) must exceed min ({lo})"))),
        _ => Ok((0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect()),
    }
}
