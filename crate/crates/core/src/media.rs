//! Physical constants, media descriptions, complex permittivity and skin depth.
//!
//! The time convention is fixed to `exp(+jωt)` everywhere in the crate, so a
//! lossy medium has a complex relative permittivity `ε = ε' − jε''` with
//! `ε'' ≥ 0`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Vacuum magnetic permeability, CODATA 2018 (H/m).
pub const MU0: f64 = 1.256_637_062_12e-6;
/// Vacuum electric permittivity (F/m), tied to `MU0` and `SPEED_OF_LIGHT`
/// through `ε0 = 1/(μ0 c²)` so the three constants are mutually consistent.
pub const EPS0: f64 = 1.0 / (MU0 * SPEED_OF_LIGHT * SPEED_OF_LIGHT);

/// Conductivity that reproduces the 270 Hz^½·m skin-depth constant.
pub const SEAWATER_SIGMA: f64 = 3.475;
/// Real relative permittivity of seawater.
pub const SEAWATER_EPS_R: f64 = 81.0;
/// Salinity (percent) mapped onto [`SEAWATER_SIGMA`].
pub const SEAWATER_SALINITY: f64 = 3.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub mu0: f64,
    pub eps0: f64,
    pub c: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            mu0: MU0,
            eps0: EPS0,
            c: SPEED_OF_LIGHT,
        }
    }
}

/// A homogeneous, isotropic, non-magnetic material.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Medium {
    pub eps_r: f64,
    pub sigma: f64,
    pub name: String,
}

impl Medium {
    pub fn new(eps_r: f64, sigma: f64, name: impl Into<String>) -> Result<Self> {
        if !(eps_r.is_finite() && eps_r >= 1.0) {
            return Err(Error::domain(format!("relative permittivity must be >= 1, got {eps_r}")));
        }
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(Error::domain(format!("conductivity must be >= 0, got {sigma}")));
        }
        Ok(Self {
            eps_r,
            sigma,
            name: name.into(),
        })
    }

    pub fn vacuum() -> Self {
        Self {
            eps_r: 1.0,
            sigma: 0.0,
            name: "vacuum".into(),
        }
    }

    /// Air is treated as vacuum at these frequencies.
    pub fn air() -> Self {
        Self {
            name: "air".into(),
            ..Self::vacuum()
        }
    }

    pub fn seawater() -> Self {
        Self {
            eps_r: SEAWATER_EPS_R,
            sigma: SEAWATER_SIGMA,
            name: "seawater".into(),
        }
    }

    pub fn is_lossless(&self) -> bool {
        self.sigma == 0.0
    }
}

/// Frequency together with the derived free-space quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RfContext {
    freq: f64,
}

impl RfContext {
    pub fn new(freq: f64) -> Result<Self> {
        if !(freq.is_finite() && freq > 0.0) {
            return Err(Error::domain(format!("frequency must be positive, got {freq}")));
        }
        Ok(Self { freq })
    }

    pub fn freq(&self) -> f64 {
        self.freq
    }

    pub fn omega(&self) -> f64 {
        2.0 * PI * self.freq
    }

    pub fn lambda0(&self) -> f64 {
        SPEED_OF_LIGHT / self.freq
    }

    pub fn k0(&self) -> f64 {
        2.0 * PI / self.lambda0()
    }
}

/// Imaginary part magnitude `ε'' = σ/(ωε0)`.
pub fn eps_imag(sigma: f64, ctx: &RfContext) -> f64 {
    sigma / (ctx.omega() * EPS0)
}

/// Complex relative permittivity `ε' − jε''` under the `exp(+jωt)` convention.
pub fn complex_permittivity(m: &Medium, ctx: &RfContext) -> Complex64 {
    Complex64::new(m.eps_r, -eps_imag(m.sigma, ctx))
}

/// Plane-wave skin depth `δ = 1/sqrt(π μ0 σ ν)` in metres.
pub fn skin_depth(sigma: f64, freq: f64) -> Result<f64> {
    if !(freq.is_finite() && freq > 0.0) {
        return Err(Error::domain(format!("frequency must be positive, got {freq}")));
    }
    Ok(skin_depth_constant(sigma)? / freq.sqrt())
}

/// Frequency-independent constant `δ·sqrt(ν) = 1/sqrt(π μ0 σ)` in Hz^½·m.
pub fn skin_depth_constant(sigma: f64) -> Result<f64> {
    if sigma == 0.0 {
        return Err(Error::InfiniteSkinDepth);
    }
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::domain(format!("conductivity must be positive, got {sigma}")));
    }
    Ok(1.0 / (PI * MU0 * sigma).sqrt())
}

/// Rough linear salinity → conductivity map anchored at 3.5 % ↦ 3.475 S/m.
///
/// A rough linear map, not an oceanographic model; temperature is ignored.
pub fn salinity_to_conductivity(salinity_percent: f64) -> Result<f64> {
    if !(0.0..=4.0).contains(&salinity_percent) {
        return Err(Error::domain(format!(
            "salinity must lie in [0, 4] percent, got {salinity_percent}"
        )));
    }
    Ok(salinity_percent * (SEAWATER_SIGMA / SEAWATER_SALINITY))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn ctx(f: f64) -> RfContext {
        RfContext::new(f).unwrap()
    }

    #[test]
    fn constants_are_consistent() {
        let c = PhysicalConstants::default();
        assert_relative_eq!(c.c, 1.0 / (c.mu0 * c.eps0).sqrt(), max_relative = 1e-12);
        let x = ctx(50e6);
        assert_relative_eq!(x.k0() * x.lambda0(), 2.0 * PI, max_relative = 1e-12);
    }

    #[test]
    fn lossless_permittivity() {
        let m = Medium::new(81.0, 0.0, "deionized").unwrap();
        let eps = complex_permittivity(&m, &ctx(50e6));
        assert_eq!(eps.re, 81.0);
        assert_eq!(eps.im, 0.0);
    }

    #[test]
    fn seawater_loss_tangent() {
        // σ/(2πν ε0) evaluated independently with ε0 = 8.8541878128e-12.
        let expected = 3.5 / (2.0 * PI * 50e6 * 8.854_187_812_8e-12);
        let m = Medium::new(81.0, 3.5, "sea").unwrap();
        let eps = complex_permittivity(&m, &ctx(50e6));
        assert_relative_eq!(-eps.im, expected, max_relative = 1e-9);
        assert!((-eps.im - 1258.3).abs() < 0.05);
        assert_relative_eq!(eps_imag(3.5, &ctx(50e6)), -eps.im);
    }

    #[test]
    fn unit_loss_identity() {
        let x = ctx(50e6);
        let sigma = x.omega() * EPS0;
        assert_relative_eq!(eps_imag(sigma, &x), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn non_positive_frequency_rejected() {
        assert!(matches!(RfContext::new(0.0), Err(Error::Domain(_))));
        assert!(matches!(RfContext::new(-1.0), Err(Error::Domain(_))));
        assert!(matches!(skin_depth(3.475, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn seawater_skin_depth() {
        let d = skin_depth(3.475, 50e6).unwrap();
        assert!((d - 0.0382).abs() < 0.0001, "{d}");
        assert_relative_eq!(skin_depth(4.0, 50e6).unwrap(), 0.0356, max_relative = 2e-3);
    }

    #[test]
    fn quadrupling_frequency_halves_depth() {
        let a = skin_depth(3.475, 50e6).unwrap();
        let b = skin_depth(3.475, 200e6).unwrap();
        assert_relative_eq!(b, a / 2.0, max_relative = 1e-14);
    }

    #[test]
    fn skin_depth_constant_values() {
        let k = skin_depth_constant(3.475).unwrap();
        assert!((k - 270.0).abs() < 1.0, "{k}");
        assert_relative_eq!(skin_depth_constant(4.0 * 3.475).unwrap(), k / 2.0, max_relative = 1e-14);
        assert!((skin_depth_constant(4.0).unwrap() - 251.646_060_453_94).abs() < 1e-9);
    }

    #[test]
    fn zero_conductivity_has_no_skin_depth() {
        assert_eq!(skin_depth(0.0, 50e6), Err(Error::InfiniteSkinDepth));
        assert_eq!(skin_depth_constant(0.0), Err(Error::InfiniteSkinDepth));
    }

    #[test]
    fn salinity_map() {
        assert_relative_eq!(salinity_to_conductivity(3.5).unwrap(), 3.475, max_relative = 1e-15);
        assert_eq!(salinity_to_conductivity(0.0).unwrap(), 0.0);
        assert!((salinity_to_conductivity(2.8).unwrap() - 2.78).abs() < 1e-12);
        assert!(salinity_to_conductivity(4.1).is_err());
        assert!(salinity_to_conductivity(-0.1).is_err());
    }

    #[test]
    fn salinity_round_trip() {
        let d = skin_depth(salinity_to_conductivity(3.5).unwrap(), 50e6).unwrap();
        assert_relative_eq!(d, 0.0382, max_relative = 5e-3);
    }

    #[test]
    fn medium_validation() {
        assert!(Medium::new(0.5, 0.0, "x").is_err());
        assert!(Medium::new(2.0, -1.0, "x").is_err());
        assert!(Medium::seawater().eps_r == 81.0);
    }

    proptest! {
        #[test]
        fn depth_times_root_freq_is_constant(sigma in 1e-3f64..10.0, f1 in 1e3f64..1e10, f2 in 1e3f64..1e10) {
            let a = skin_depth(sigma, f1).unwrap() * f1.sqrt();
            let b = skin_depth(sigma, f2).unwrap() * f2.sqrt();
            prop_assert!((a - b).abs() <= 1e-12 * a);
        }

        #[test]
        fn loss_decreases_with_frequency(sigma in 1e-3f64..10.0, f in 1e3f64..1e10, step in 1.001f64..10.0) {
            let lo = eps_imag(sigma, &ctx(f));
            let hi = eps_imag(sigma, &ctx(f * step));
            prop_assert!(hi < lo);
        }

        #[test]
        fn skin_depth_decreasing(sigma in 1e-3f64..10.0, f in 1e3f64..1e10, step in 1.001f64..10.0) {
            let base = skin_depth(sigma, f).unwrap();
            prop_assert!(skin_depth(sigma * step, f).unwrap() < base);
            prop_assert!(skin_depth(sigma, f * step).unwrap() < base);
        }
    }
}
