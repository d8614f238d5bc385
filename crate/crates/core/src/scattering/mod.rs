//! Single-channel universal loss model and Born dipolar relaxation.

mod born;
mod numerov;
mod rates;
mod universal;

pub use born::{born_gamma, h_function, total_born_rate, BornParams, Flip};
pub use numerov::{integrate_outward, NumerovEnd};
pub use rates::{RateRow, RateTable, RateTableBuilder, SummaryRow};
pub use universal::{
    partial_rate, riccati_hankel_plus, total_rate, universal_smatrix, unitarity_limit, TotalRate,
    TRUNCATION_THRESHOLD,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{hartree_to_kelvin, kelvin_to_hartree, reduced_mass_au, DY164_MASS_AMU};

/// Mean isotropic C6 used by default, a.u.
pub const DEFAULT_C6: f64 = 1878.0;
pub const DEFAULT_R_INNER: f64 = 35.0;
pub const DEFAULT_GRID_STEP: f64 = 0.02;
pub const DEFAULT_L_MAX: u32 = 8;
/// Default energy grid, K and points.
pub const DEFAULT_E_MIN_K: f64 = 1e-6;
pub const DEFAULT_E_MAX_K: f64 = 1.5e-3;
pub const DEFAULT_E_POINTS: usize = 60;

/// Automatic outer matching radius never goes below this, a0.
pub const MIN_AUTO_R_OUTER: f64 = 300.0;
/// Auto rule places the outer radius where C6/R^6 = 1e-4 E.
const AUTO_OUTER_FRACTION: f64 = 1e-4;
/// Matching fails if C6/R^6 exceeds this fraction of E at the outer radius.
pub const MATCHING_TOLERANCE: f64 = 1e-3;
/// Required grid points per local wavelength.
pub const POINTS_PER_WAVELENGTH: f64 = 20.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollisionConfig {
    pub c6: f64,
    pub reduced_mass: f64,
    /// Absorbing-boundary radius R_c.
    pub r_match_inner: f64,
    /// `None` picks a radius per energy, see [`CollisionConfig::outer_radius`].
    pub r_match_outer: Option<f64>,
    pub grid_step: f64,
    pub l_max: u32,
    /// Collision energies, Hartree.
    pub energies: Vec<f64>,
}

impl Default for CollisionConfig {
    fn default() -> Self {
        Self {
            c6: DEFAULT_C6,
            reduced_mass: reduced_mass_au(DY164_MASS_AMU, DY164_MASS_AMU),
            r_match_inner: DEFAULT_R_INNER,
            r_match_outer: None,
            grid_step: DEFAULT_GRID_STEP,
            l_max: DEFAULT_L_MAX,
            energies: log_energy_grid(DEFAULT_E_MIN_K, DEFAULT_E_MAX_K, DEFAULT_E_POINTS)
                .expect("default grid is valid"),
        }
    }
}

impl CollisionConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive, got {v}")))
            }
        };
        positive("c6", self.c6)?;
        positive("reduced_mass", self.reduced_mass)?;
        positive("r_match_inner", self.r_match_inner)?;
        positive("grid_step", self.grid_step)?;
        if let Some(r) = self.r_match_outer {
            if !(r > self.r_match_inner) {
                return Err(Error::Config(format!(
                    "r_match_outer ({r}) must exceed r_match_inner ({})",
                    self.r_match_inner
                )));
            }
        }
        for &e in &self.energies {
            positive("energy", e)?;
        }
        Ok(())
    }

    /// Outer matching radius used at energy `e`.
    pub fn outer_radius(&self, e: f64) -> f64 {
        self.r_match_outer.unwrap_or_else(|| {
            (self.c6 / (AUTO_OUTER_FRACTION * e))
                .powf(1.0 / 6.0)
                .max(MIN_AUTO_R_OUTER)
                .max(self.r_match_inner + 100.0)
        })
    }

    pub fn rx(&self) -> f64 {
        (2.0 * self.reduced_mass * self.c6).powf(0.25)
    }
}

/// Logarithmic grid between `t_min` and `t_max` (Kelvin), returned in Hartree.
pub fn log_energy_grid(t_min: f64, t_max: f64, n: usize) -> Result<Vec<f64>> {
    if !(t_min > 0.0 && t_max >= t_min) || n == 0 {
        return Err(Error::Config(format!("invalid energy grid {t_min}..{t_max} K with {n} points")));
    }
    if n == 1 {
        return Ok(vec![kelvin_to_hartree(t_min)]);
    }
    let (a, b) = (t_min.ln(), t_max.ln());
    Ok((0..n)
        .map(|i| {
            let t = if i == n - 1 { t_max } else { (a + (b - a) * i as f64 / (n - 1) as f64).exp() };
            kelvin_to_hartree(t)
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SMatrixEntry {
    pub energy: f64,
    pub l: u32,
    pub s_re: f64,
    pub s_im: f64,
    /// `1 - |S|^2`, from the flux absorbed at R_c.
    pub loss_probability: f64,
}

impl SMatrixEntry {
    pub fn s_value(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.s_re, self.s_im)
    }

    pub fn s_abs_sq(&self) -> f64 {
        1.0 - self.loss_probability
    }
}

/// `(2 m_r C6)^{1/4}`.
pub fn characteristic_length_rx(c6: f64, reduced_mass: f64) -> Result<f64> {
    if !(c6 > 0.0 && reduced_mass > 0.0) {
        return Err(Error::domain(format!("C6 ({c6}) and reduced mass ({reduced_mass}) must be positive")));
    }
    Ok((2.0 * reduced_mass * c6).powf(0.25))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BarrierInfo {
    pub l: u32,
    pub r_barrier: f64,
    /// Hartree.
    pub height: f64,
    pub height_kelvin: f64,
}

fn barrier_inputs(l: u32, c6: f64, reduced_mass: f64) -> Result<f64> {
    if l == 0 {
        return Err(Error::domain("s-wave has no centrifugal barrier"));
    }
    characteristic_length_rx(c6, reduced_mass)?;
    Ok(f64::from(l * (l + 1)))
}

/// Analytic top of `-C6/R^6 + l(l+1)/(2 m_r R^2)`.
pub fn barrier(l: u32, c6: f64, reduced_mass: f64) -> Result<BarrierInfo> {
    let ll = barrier_inputs(l, c6, reduced_mass)?;
    let r_barrier = (6.0 * reduced_mass * c6 / ll).powf(0.25);
    let height = 2.0 / 3.0 * (ll / (2.0 * reduced_mass)) / (r_barrier * r_barrier);
    Ok(BarrierInfo { l, r_barrier, height, height_kelvin: hartree_to_kelvin(height) })
}

/// Grid-search maximum of the same potential, refined by successive zooms.
pub fn barrier_numeric(l: u32, c6: f64, reduced_mass: f64) -> Result<BarrierInfo> {
    let ll = barrier_inputs(l, c6, reduced_mass)?;
    let v = |r: f64| -c6 / r.powi(6) + ll / (2.0 * reduced_mass * r * r);
    let rx = characteristic_length_rx(c6, reduced_mass)?;
    let (mut lo, mut hi) = (0.05 * rx, 20.0 * rx);
    let n = 2000;
    let mut best = lo;
    for _ in 0..12 {
        let dr = (hi - lo) / n as f64;
        best = (0..=n)
            .map(|i| lo + dr * i as f64)
            .max_by(|a, b| v(*a).total_cmp(&v(*b)))
            .unwrap_or(lo);
        lo = (best - 2.0 * dr).max(lo);
        hi = best + 2.0 * dr;
    }
    let height = v(best);
    Ok(BarrierInfo { l, r_barrier: best, height, height_kelvin: hartree_to_kelvin(height) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn mu() -> f64 {
        reduced_mass_au(DY164_MASS_AMU, DY164_MASS_AMU)
    }

    #[test]
    fn rx_values() {
        let r = characteristic_length_rx(1890.0, mu()).unwrap();
        assert!((r - 154.0).abs() < 1.0, "{r}");
        assert_relative_eq!(characteristic_length_rx(4.0 * 1890.0, mu()).unwrap(), r * 2f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(characteristic_length_rx(1.0 / (2.0 * mu()), mu()).unwrap(), 1.0, max_relative = 1e-14);
        assert!(characteristic_length_rx(0.0, mu()).is_err());
        assert!(characteristic_length_rx(1.0, -1.0).is_err());
    }

    #[test]
    fn g_wave_barrier() {
        let b = barrier(4, 1890.0, mu()).unwrap();
        assert!((b.height_kelvin - 1.5e-3).abs() < 0.2e-3, "{}", b.height_kelvin);
        let n = barrier_numeric(4, 1890.0, mu()).unwrap();
        assert_relative_eq!(n.height, b.height, max_relative = 1e-8);
        assert_relative_eq!(n.r_barrier, b.r_barrier, max_relative = 1e-4);
        assert!(matches!(barrier(0, 1890.0, mu()), Err(Error::Domain(_))));
    }

    #[test]
    fn barrier_scaling() {
        let h1 = barrier(1, 1890.0, mu()).unwrap().height;
        for l in 2..6u32 {
            let ratio = barrier(l, 1890.0, mu()).unwrap().height / h1;
            assert_relative_eq!(ratio, (f64::from(l * (l + 1)) / 2.0).powf(1.5), max_relative = 1e-12);
        }
    }

    #[test]
    fn energy_grid() {
        let g = log_energy_grid(1e-6, 1.5e-3, 60).unwrap();
        assert_eq!(g.len(), 60);
        assert_relative_eq!(hartree_to_kelvin(g[0]), 1e-6, max_relative = 1e-12);
        assert_relative_eq!(hartree_to_kelvin(g[59]), 1.5e-3, max_relative = 1e-12);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        assert!(log_energy_grid(0.0, 1.0, 3).is_err());
    }

    #[test]
    fn config_validation() {
        let mut c = CollisionConfig::default();
        c.validate().unwrap();
        c.r_match_outer = Some(10.0);
        assert!(c.validate().is_err());
        c.r_match_outer = None;
        c.energies.push(-1.0);
        assert!(c.validate().is_err());
    }
}
