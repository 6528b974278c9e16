//! Dielectric-loading scaling laws for the helical monopole.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Measured advantage (dB) of the deionized-water enclosure over a bare
/// antenna in 0.5 % brackish water at 2.45 GHz. A measurement, not a model
/// output; nothing in the crate computes with it.
pub const ENCLOSURE_ADVANTAGE_DB_MEASURED: f64 = 20.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AntennaRecord {
    pub f_air: f64,
    pub eps_r: f64,
    pub length: f64,
    pub diameter: f64,
    pub notes: String,
}

impl AntennaRecord {
    /// The finished 50 MHz helical monopole used in the sea trials.
    pub fn reference_helix() -> Self {
        Self {
            f_air: 450e6,
            eps_r: 81.0,
            length: 0.16,
            diameter: 0.007,
            notes: "helical monopole over ground plane, trimmed in water from 450 MHz to 50 MHz; \
                    fed by 11 cm coax tapped 11 turns from the grounded end; tip sharpened; \
                    deionized-water impedance-matching enclosure"
                .into(),
        }
    }

    pub fn resonance_in_medium(&self) -> Result<f64> {
        resonance_in_medium(self.f_air, self.eps_r)
    }
}

fn check_eps(eps_r: f64) -> Result<()> {
    if !(eps_r.is_finite() && eps_r >= 1.0) {
        return Err(Error::domain(format!("relative permittivity must be >= 1, got {eps_r}")));
    }
    Ok(())
}

/// Resonance of a structure tuned to `f_air` once fully immersed in a
/// dielectric of relative permittivity `eps_r`.
pub fn resonance_in_medium(f_air: f64, eps_r: f64) -> Result<f64> {
    if !(f_air.is_finite() && f_air > 0.0) {
        return Err(Error::domain(format!("frequency must be positive, got {f_air}")));
    }
    check_eps(eps_r)?;
    Ok(f_air / eps_r.sqrt())
}

pub fn size_reduction_factor(eps_r: f64) -> Result<f64> {
    check_eps(eps_r)?;
    Ok(eps_r.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn helix_trim() {
        assert_eq!(resonance_in_medium(450e6, 81.0).unwrap(), 50e6);
        assert_eq!(size_reduction_factor(81.0).unwrap(), 9.0);
        assert_eq!(AntennaRecord::reference_helix().resonance_in_medium().unwrap(), 50e6);
    }

    #[test]
    fn trivial_cases() {
        assert_eq!(resonance_in_medium(123e6, 1.0).unwrap(), 123e6);
        assert_eq!(resonance_in_medium(300e6, 9.0).unwrap(), 100e6);
        assert_eq!(size_reduction_factor(1.0).unwrap(), 1.0);
        assert!((size_reduction_factor(80.0).unwrap() - 8.944).abs() < 5e-4);
    }

    #[test]
    fn sub_vacuum_permittivity_rejected() {
        assert!(resonance_in_medium(1e6, 0.9).is_err());
        assert!(size_reduction_factor(0.5).is_err());
        assert!(resonance_in_medium(0.0, 2.0).is_err());
    }

    proptest! {
        #[test]
        fn product_identity(f in 1e3f64..1e11, e in 1.0f64..1e4) {
            let prod = resonance_in_medium(f, e).unwrap() * size_reduction_factor(e).unwrap();
            prop_assert!((prod - f).abs() <= 1e-12 * f);
        }

        #[test]
        fn monotone(f in 1e3f64..1e11, e in 1.0f64..1e4, step in 1.001f64..10.0) {
            prop_assert!(resonance_in_medium(f, e * step).unwrap() < resonance_in_medium(f, e).unwrap());
            prop_assert!(size_reduction_factor(e * step).unwrap() > size_reduction_factor(e).unwrap());
            prop_assert!(resonance_in_medium(f, e).unwrap() <= f);
        }
    }
}
