//! Physical constants and conversions to Hartree atomic units.
//!
//! All constants are CODATA 2018 recommended values. Everything else in the
//! crate works in atomic units (Hartree, bohr, electron mass, atomic unit of
//! time and of magnetic flux density) and converts only at its edges.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fine-structure constant.
pub const FINE_STRUCTURE: f64 = 7.297_352_569_3e-3;
/// Hartree energy in kelvin (E_h / k_B).
pub const HARTREE_IN_KELVIN: f64 = 3.157_750_248_040_7e5;
/// Hartree energy in wavenumbers.
pub const HARTREE_IN_INV_CM: f64 = 2.194_746_313_632e5;
/// Bohr radius in cm.
pub const BOHR_RADIUS_CM: f64 = 5.291_772_109_03e-9;
/// Atomic unit of time in seconds.
pub const ATOMIC_TIME_S: f64 = 2.418_884_326_585_7e-17;
/// Atomic unit of magnetic flux density in gauss.
pub const ATOMIC_FIELD_GAUSS: f64 = 2.350_517_567_58e9;
/// Unified atomic mass unit in electron masses.
pub const AMU_IN_ELECTRON_MASSES: f64 = 1.822_888_486_209e3;
/// Bohr magneton, exactly 1/2 in atomic units.
pub const BOHR_MAGNETON: f64 = 0.5;
/// Landé g-factor of the Dy 5I8 ground level.
pub const DY_GROUND_G_FACTOR: f64 = 1.24159;
/// Mass of 164Dy in amu.
pub const DY164_MASS_AMU: f64 = 163.929;

/// Boltzmann constant in Hartree per kelvin.
pub const fn boltzmann_au() -> f64 {
    1.0 / HARTREE_IN_KELVIN
}

/// Rate coefficient a0^3 / t_au expressed in cm^3/s.
pub fn rate_au_in_cm3_per_s() -> f64 {
    BOHR_RADIUS_CM.powi(3) / ATOMIC_TIME_S
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub fine_structure_alpha: f64,
    pub bohr_magneton_au: f64,
    pub g_factor_gj: f64,
    pub boltzmann_kb: f64,
    pub amu_in_electron_masses: f64,
    pub gauss_per_au_field: f64,
    pub bohr_radius_cm: f64,
    pub hartree_time_s: f64,
}

pub const CODATA2018: PhysicalConstants = PhysicalConstants {
    fine_structure_alpha: FINE_STRUCTURE,
    bohr_magneton_au: BOHR_MAGNETON,
    g_factor_gj: DY_GROUND_G_FACTOR,
    boltzmann_kb: boltzmann_au(),
    amu_in_electron_masses: AMU_IN_ELECTRON_MASSES,
    gauss_per_au_field: ATOMIC_FIELD_GAUSS,
    bohr_radius_cm: BOHR_RADIUS_CM,
    hartree_time_s: ATOMIC_TIME_S,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Unit {
    Gauss,
    Kelvin,
    InverseCm,
    Cm3PerS,
    Amu,
    Bohr,
}

impl Unit {
    pub const ALL: [Unit; 6] = [
        Unit::Gauss,
        Unit::Kelvin,
        Unit::InverseCm,
        Unit::Cm3PerS,
        Unit::Amu,
        Unit::Bohr,
    ];

    /// Size of one of this unit in atomic units.
    fn in_au(self) -> f64 {
        match self {
            Unit::Gauss => 1.0 / ATOMIC_FIELD_GAUSS,
            Unit::Kelvin => boltzmann_au(),
            Unit::InverseCm => 1.0 / HARTREE_IN_INV_CM,
            Unit::Cm3PerS => 1.0 / rate_au_in_cm3_per_s(),
            Unit::Amu => AMU_IN_ELECTRON_MASSES,
            Unit::Bohr => 1.0,
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Unit::Gauss => "G",
            Unit::Kelvin => "K",
            Unit::InverseCm => "cm^-1",
            Unit::Cm3PerS => "cm^3/s",
            Unit::Amu => "amu",
            Unit::Bohr => "a0",
        })
    }
}

impl FromStr for Unit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "G" | "gauss" | "Gauss" => Ok(Unit::Gauss),
            "K" | "kelvin" | "Kelvin" => Ok(Unit::Kelvin),
            "cm^-1" | "cm-1" | "1/cm" => Ok(Unit::InverseCm),
            "cm^3/s" | "cm3/s" => Ok(Unit::Cm3PerS),
            "amu" | "u" => Ok(Unit::Amu),
            "a0" | "bohr" => Ok(Unit::Bohr),
            other => Err(Error::Config(format!("unknown unit `{other}`"))),
        }
    }
}

pub fn to_au(value: f64, unit: Unit) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::Config(format!("non-finite value {value} in {unit}")));
    }
    Ok(value * unit.in_au())
}

pub fn from_au(value: f64, unit: Unit) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::Config(format!("non-finite value {value} a.u.")));
    }
    Ok(value / unit.in_au())
}

/// String-keyed variant of [`to_au`] for config files and flags.
pub fn to_au_named(value: f64, unit: &str) -> Result<f64> {
    to_au(value, unit.parse()?)
}

pub fn kelvin_to_hartree(t: f64) -> f64 {
    t * boltzmann_au()
}

pub fn hartree_to_kelvin(e: f64) -> f64 {
    e * HARTREE_IN_KELVIN
}

pub fn gauss_to_au(b: f64) -> f64 {
    b / ATOMIC_FIELD_GAUSS
}

pub fn rate_to_cm3_per_s(rate_au: f64) -> f64 {
    rate_au * rate_au_in_cm3_per_s()
}

/// Reduced mass in electron masses for two atoms given in amu.
pub fn reduced_mass_au(m1_amu: f64, m2_amu: f64) -> f64 {
    m1_amu * m2_amu / (m1_amu + m2_amu) * AMU_IN_ELECTRON_MASSES
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn zero_maps_to_zero() {
        for unit in Unit::ALL {
            assert_eq!(to_au(0.0, unit).unwrap(), 0.0);
        }
    }

    #[test]
    fn ten_gauss() {
        // B[a.u.] = B[G] / 2.35052e9
        assert_relative_eq!(to_au(10.0, Unit::Gauss).unwrap(), 4.2544e-9, max_relative = 1e-4);
    }

    #[test]
    fn five_hundred_microkelvin() {
        assert_relative_eq!(to_au(500e-6, Unit::Kelvin).unwrap(), 1.583e-9, max_relative = 1e-3);
        assert_relative_eq!(boltzmann_au(), 3.16681e-6, max_relative = 1e-5);
    }

    #[test]
    fn atomic_rate_and_temperature() {
        assert_relative_eq!(from_au(1.0, Unit::Cm3PerS).unwrap(), 6.126e-9, max_relative = 1e-3);
        assert_relative_eq!(from_au(1.0, Unit::Kelvin).unwrap(), 3.1578e5, max_relative = 1e-4);
    }

    #[test]
    fn unknown_unit_is_config_error() {
        assert!(matches!(to_au_named(1.0, "furlong"), Err(Error::Config(_))));
        assert!(to_au(f64::NAN, Unit::Bohr).is_err());
    }

    #[test]
    fn dy164_pair_reduced_mass() {
        let mu = reduced_mass_au(DY164_MASS_AMU, DY164_MASS_AMU);
        assert_relative_eq!(mu, 1.494e5, max_relative = 1e-3);
    }

    #[test]
    fn bohr_magneton_is_half() {
        assert_eq!(CODATA2018.bohr_magneton_au, 0.5);
        assert_eq!(CODATA2018.g_factor_gj, 1.24159);
    }

    proptest::proptest! {
        #[test]
        fn round_trip(x in -1e12f64..1e12, idx in 0usize..6) {
            let unit = Unit::ALL[idx];
            let back = from_au(to_au(x, unit).unwrap(), unit).unwrap();
            let fwd = to_au(from_au(x, unit).unwrap(), unit).unwrap();
            let tol = 1e-14 * x.abs().max(f64::MIN_POSITIVE);
            proptest::prop_assert!((back - x).abs() <= tol);
            proptest::prop_assert!((fwd - x).abs() <= tol);
        }
    }
}
