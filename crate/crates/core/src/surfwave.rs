//! Closed-form surface-wave parameters at a lossy/air interface.
//!
//! `L_z = λ0/(4π sqrt(ε''))` is the 1/e field depth on the water side and
//! `L_r = λ0 ε''/π` the 1/e field decay length along the interface. The
//! Zenneck pole `k_ρ = k0 sqrt(ε/(ε+1))` gives the same quantities without the
//! large-loss approximation and is used to cross-check them.

use std::f64::consts::{LN_10, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceWaveParams {
    pub l_z: f64,
    pub l_r: f64,
    pub lambda0: f64,
    pub eps_im: f64,
}

impl SurfaceWaveParams {
    pub fn new(lambda0: f64, eps_im: f64) -> Result<Self> {
        Ok(Self {
            l_z: penetration_depth(lambda0, eps_im)?,
            l_r: propagation_length(lambda0, eps_im)?,
            lambda0,
            eps_im,
        })
    }
}

fn check_inputs(lambda0: f64, eps_im: f64) -> Result<()> {
    if !(lambda0.is_finite() && lambda0 > 0.0) {
        return Err(Error::domain(format!("wavelength must be positive, got {lambda0}")));
    }
    if !(eps_im.is_finite() && eps_im > 0.0) {
        return Err(Error::domain(format!(
            "imaginary permittivity must be positive (a lossless interface has no surface-wave depth), got {eps_im}"
        )));
    }
    Ok(())
}

pub fn penetration_depth(lambda0: f64, eps_im: f64) -> Result<f64> {
    check_inputs(lambda0, eps_im)?;
    Ok(lambda0 / (4.0 * PI * eps_im.sqrt()))
}

pub fn propagation_length(lambda0: f64, eps_im: f64) -> Result<f64> {
    check_inputs(lambda0, eps_im)?;
    Ok(lambda0 * eps_im / PI)
}

/// The Zenneck pole of a lossy half-space under air.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZenneckPole {
    /// Radial wavenumber, `Im ≤ 0`.
    pub k_rho: Complex64,
    /// Vertical wavenumber on the water side, `sqrt(ε k0² − k_ρ²)`.
    pub k_z_water: Complex64,
    /// `1/|Im k_ρ|`; infinite for a lossless interface.
    pub propagation_length: f64,
    /// `1/|Im k_z|` on the water side.
    pub water_decay_depth: f64,
}

pub fn zenneck_wavenumber(eps: Complex64, k0: f64) -> Result<ZenneckPole> {
    if !(k0.is_finite() && k0 > 0.0) {
        return Err(Error::domain(format!("k0 must be positive, got {k0}")));
    }
    if eps.im > 0.0 {
        return Err(Error::domain("active medium: Im(eps) must be <= 0 under exp(+jωt)"));
    }
    let denom = eps + 1.0;
    if denom.norm() <= f64::EPSILON * eps.norm().max(1.0) {
        return Err(Error::Singular("eps = -1 places the pole at infinity".into()));
    }
    let mut k_rho = k0 * (eps / denom).sqrt();
    if k_rho.im > 0.0 || (k_rho.im == 0.0 && k_rho.re < 0.0) {
        k_rho = -k_rho;
    }
    let mut k_z_water = (eps * k0 * k0 - k_rho * k_rho).sqrt();
    if k_z_water.im > 0.0 {
        k_z_water = -k_z_water;
    }
    Ok(ZenneckPole {
        k_rho,
        k_z_water,
        propagation_length: 1.0 / k_rho.im.abs(),
        water_decay_depth: 1.0 / k_z_water.im.abs(),
    })
}

/// Depth at which a field decaying as `exp(−z/L_z)` reaches `level_db`
/// (amplitude dB, `20·log10`).
pub fn depth_at_level(level_db: f64, l_z: f64) -> Result<f64> {
    if !(level_db.is_finite() && level_db <= 0.0) {
        return Err(Error::domain(format!("level must be <= 0 dB, got {level_db}")));
    }
    if !(l_z.is_finite() && l_z > 0.0) {
        return Err(Error::domain(format!("penetration depth must be positive, got {l_z}")));
    }
    Ok(-level_db * LN_10 / 20.0 * l_z)
}

/// Same as [`depth_at_level`] for a level quoted in power dB (`10·log10`).
pub fn depth_at_power_level(level_db: f64, l_z: f64) -> Result<f64> {
    depth_at_level(level_db / 2.0, l_z)
}
