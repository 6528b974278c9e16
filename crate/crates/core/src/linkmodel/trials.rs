use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ProbabilityGrid;
use crate::error::{Error, Result};

/// Outcome of `attempts` key presses at one depth/range position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub depth: f64,
    pub range: f64,
    pub attempts: u64,
    pub successes: u64,
}

impl TrialRecord {
    pub fn new(depth: f64, range: f64, attempts: u64, successes: u64) -> Result<Self> {
        if attempts == 0 {
            return Err(Error::domain("attempts must be at least 1"));
        }
        if successes > attempts {
            return Err(Error::domain(format!(
                "successes ({successes}) exceed attempts ({attempts})"
            )));
        }
        if !(depth.is_finite() && depth > 0.0 && range.is_finite() && range > 0.0) {
            return Err(Error::domain(format!("depth and range must be positive, got {depth}, {range}")));
        }
        Ok(Self {
            depth,
            range,
            attempts,
            successes,
        })
    }

    pub fn success_rate(&self) -> f64 {
        self.successes as f64 / self.attempts as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub successes: u64,
    pub estimate: f64,
}

/// Uniform double in `[0, 1)` from the top 53 bits of the next word.
fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn draw(rng: &mut ChaCha8Rng, prob: f64, attempts: u64) -> u64 {
    (0..attempts).filter(|_| unit(rng) < prob).count() as u64
}

fn check(prob: f64, attempts: u64) -> Result<()> {
    if !(0.0..=1.0).contains(&prob) {
        return Err(Error::domain(format!("probability must lie in [0, 1], got {prob}")));
    }
    if attempts == 0 {
        return Err(Error::domain("attempts must be at least 1"));
    }
    Ok(())
}

/// Bernoulli trials driven by ChaCha8 seeded with `seed` (via
/// `SeedableRng::seed_from_u64`). Each attempt consumes one 64-bit word and
/// succeeds when its top 53 bits, read as a fraction, fall below `prob`.
pub fn simulate_trials(prob: f64, attempts: u64, seed: u64) -> Result<TrialOutcome> {
    check(prob, attempts)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let successes = draw(&mut rng, prob, attempts);
    Ok(TrialOutcome {
        successes,
        estimate: successes as f64 / attempts as f64,
    })
}

/// Trials for every cell of a probability grid, depth-major, from one stream.
pub fn simulate_records(grid: &ProbabilityGrid, attempts: u64, seed: u64) -> Result<Vec<TrialRecord>> {
    check(0.5, attempts)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    grid.rows()
        .map(|(depth, range, p)| {
            check(p, attempts)?;
            TrialRecord::new(depth, range, attempts, draw(&mut rng, p, attempts))
        })
        .collect()
}
