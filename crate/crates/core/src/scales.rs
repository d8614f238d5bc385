//! Splitting scales that decide where spin flips can happen: Zeeman,
//! rotational (l = 0 to 2), magnetic dipole-dipole and anisotropic dispersion.
//! These are order-of-magnitude comparators, separate from the full matrices
//! in [`crate::longrange`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::FINE_STRUCTURE;

/// Default anisotropy of the adiabatic C6 coefficients, a.u.
pub const DEFAULT_DELTA_C6: f64 = 25.0;

fn check_r(r: f64) -> Result<()> {
    if r > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("R must be positive, got {r}")))
    }
}

/// Zeeman splitting of neighbouring sublevels, `g_j B / 2` (B in a.u.).
pub fn zeeman_scale(b: f64, g_j: f64) -> Result<f64> {
    if !(b >= 0.0) {
        return Err(Error::domain(format!("magnetic field must be non-negative, got {b}")));
    }
    Ok(g_j * b / 2.0)
}

/// `l = 0` to `l = 2` rotational splitting `6 / (2 m_r R^2)`.
pub fn rotational_scale(r: f64, reduced_mass: f64) -> Result<f64> {
    check_r(r)?;
    Ok(6.0 / (2.0 * reduced_mass * r * r))
}

/// `2 alpha^2 j (g_j/2)^2 / R^3`.
pub fn mdd_scale(r: f64, j: u32, g_j: f64) -> Result<f64> {
    check_r(r)?;
    Ok(2.0 * FINE_STRUCTURE * FINE_STRUCTURE * f64::from(j) * (g_j / 2.0).powi(2) / r.powi(3))
}

/// `delta_c6 / R^6`.
pub fn ad_scale(r: f64, delta_c6: f64) -> Result<f64> {
    check_r(r)?;
    if !(delta_c6 >= 0.0) {
        return Err(Error::domain(format!("delta C6 must be non-negative, got {delta_c6}")));
    }
    Ok(delta_c6 / r.powi(6))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ScaleKind {
    /// Field in a.u.
    Zeeman { b: f64, g_j: f64 },
    Rotational { reduced_mass: f64 },
    Mdd { j: u32, g_j: f64 },
    Ad { delta_c6: f64 },
}

/// One splitting-scale curve as a function of R.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleCurve {
    pub kind: ScaleKind,
}

impl ScaleCurve {
    pub fn zeeman(b: f64, g_j: f64) -> Self {
        Self { kind: ScaleKind::Zeeman { b, g_j } }
    }

    pub fn rotational(reduced_mass: f64) -> Self {
        Self { kind: ScaleKind::Rotational { reduced_mass } }
    }

    pub fn mdd(j: u32, g_j: f64) -> Self {
        Self { kind: ScaleKind::Mdd { j, g_j } }
    }

    pub fn ad(delta_c6: f64) -> Self {
        Self { kind: ScaleKind::Ad { delta_c6 } }
    }

    pub fn eval(&self, r: f64) -> Result<f64> {
        match self.kind {
            ScaleKind::Zeeman { b, g_j } => {
                check_r(r)?;
                zeeman_scale(b, g_j)
            }
            ScaleKind::Rotational { reduced_mass } => rotational_scale(r, reduced_mass),
            ScaleKind::Mdd { j, g_j } => mdd_scale(r, j, g_j),
            ScaleKind::Ad { delta_c6 } => ad_scale(r, delta_c6),
        }
    }

    pub fn sample(&self, r_grid: &[f64]) -> Result<Vec<f64>> {
        r_grid.iter().map(|&r| self.eval(r)).collect()
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            ScaleKind::Zeeman { .. } => "zeeman",
            ScaleKind::Rotational { .. } => "rotational",
            ScaleKind::Mdd { .. } => "mdd",
            ScaleKind::Ad { .. } => "ad",
        }
    }
}

/// Bisection tolerance on the crossing radius, a0.
pub const CROSSING_TOLERANCE: f64 = 1e-6;

/// Radius in `[lo, hi]` where the two curves cross.
pub fn crossing_radius(a: &ScaleCurve, b: &ScaleCurve, lo: f64, hi: f64) -> Result<f64> {
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::domain(format!("invalid bracket [{lo}, {hi}]")));
    }
    let diff = |r: f64| -> Result<f64> { Ok(a.eval(r)? - b.eval(r)?) };
    let (mut x0, mut x1) = (lo, hi);
    let (mut f0, f1) = (diff(x0)?, diff(x1)?);
    if f0 == 0.0 && f1 == 0.0 || f0.signum() == f1.signum() {
        return Err(Error::NoCrossing { lo, hi });
    }
    if f0 == 0.0 {
        return Ok(x0);
    }
    if f1 == 0.0 {
        return Ok(x1);
    }
    while x1 - x0 > CROSSING_TOLERANCE {
        let mid = 0.5 * (x0 + x1);
        let fm = diff(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == f0.signum() {
            x0 = mid;
            f0 = fm;
        } else {
            x1 = mid;
        }
    }
    Ok(0.5 * (x0 + x1))
}

/// Radius where `delta_c6/R^6 = 2 alpha^2 j (g/2)^2 / R^3`.
pub fn ad_mdd_crossing_closed_form(delta_c6: f64, j: u32, g_j: f64) -> f64 {
    let c = 2.0 * FINE_STRUCTURE * FINE_STRUCTURE * f64::from(j) * (g_j / 2.0).powi(2);
    (delta_c6 / c).cbrt()
}
