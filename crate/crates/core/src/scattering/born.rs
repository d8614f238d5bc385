use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{reduced_mass_au, BOHR_MAGNETON, DY164_MASS_AMU, DY_GROUND_G_FACTOR, FINE_STRUCTURE};

/// Density-of-states correction, defined for `x > 1`.
pub fn h_function(x: f64) -> Result<f64> {
    if !(x > 1.0) || !x.is_finite() {
        return Err(Error::domain(format!("h(x) needs finite x > 1, got {x}")));
    }
    // ln((x-1)/(x+1)), avoiding cancellation at both ends
    let log = if x < 3.0 { ((x - 1.0) / (x + 1.0)).ln() } else { (-2.0 / (x + 1.0)).ln_1p() };
    let s = (1.0 - x) * (1.0 + x);
    Ok(-0.5 - 0.75 * s * s * log / (x * (1.0 + x * x)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Flip {
    /// `M -> M-1`
    Single,
    /// `M -> M-2`
    Double,
}

impl Flip {
    fn quanta(self) -> f64 {
        match self {
            Flip::Single => 1.0,
            Flip::Double => 2.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BornParams {
    pub reduced_mass: f64,
    pub j: u32,
    pub g_j: f64,
}

impl Default for BornParams {
    fn default() -> Self {
        Self {
            reduced_mass: reduced_mass_au(DY164_MASS_AMU, DY164_MASS_AMU),
            j: 8,
            g_j: DY_GROUND_G_FACTOR,
        }
    }
}

/// Born dipolar-relaxation rate coefficient for one or two spin flips.
/// `b` and `energy` in a.u.
pub fn born_gamma(b: f64, energy: f64, flip: Flip, p: &BornParams) -> Result<f64> {
    if !(b > 0.0 && energy > 0.0) {
        return Err(Error::domain(format!("field ({b}) and energy ({energy}) must be positive")));
    }
    let mu = p.reduced_mass;
    let ki2 = 2.0 * mu * energy;
    let kf2 = ki2 + 2.0 * mu * flip.quanta() * p.g_j * BOHR_MAGNETON * b;
    let kf = kf2.sqrt();
    let x = (kf2 / ki2).sqrt();
    let dos = 1.0 + h_function(x)?;
    let moment = p.g_j * BOHR_MAGNETON;
    let coupling = 2.0 * FINE_STRUCTURE * FINE_STRUCTURE * moment * moment * mu;
    let j = f64::from(p.j);
    let angular = match flip {
        Flip::Single => 4.0 * std::f64::consts::PI / 15.0 * j.powi(3),
        Flip::Double => 2.0 * std::f64::consts::PI / 15.0 * j.powi(2),
    };
    Ok(angular * coupling * coupling * dos * kf / mu)
}

/// `2 (gamma1 + gamma2)`.
pub fn total_born_rate(b: f64, energy: f64, p: &BornParams) -> Result<f64> {
    Ok(2.0 * (born_gamma(b, energy, Flip::Single, p)? + born_gamma(b, energy, Flip::Double, p)?))
}
