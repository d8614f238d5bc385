use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{integrate_outward, CollisionConfig, SMatrixEntry, MATCHING_TOLERANCE, POINTS_PER_WAVELENGTH};
use crate::error::{Error, Result};

/// Warn when the `l_max` partial wave carries more than this share of the total.
pub const TRUNCATION_THRESHOLD: f64 = 1e-3;

/// Outgoing Riccati-Hankel function, `~ e^{i(x - l pi/2)}` at large x.
pub fn riccati_hankel_plus(l: u32, x: f64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let z = Complex64::new(0.0, 1.0 / (2.0 * x));
    for k in 0..=l {
        sum += term;
        // (l+k+1)!/((k+1)!(l-k-1)!) relative to (l+k)!/(k!(l-k)!)
        let kf = f64::from(k);
        let lf = f64::from(l);
        term *= z * ((lf + kf + 1.0) * (lf - kf) / (kf + 1.0));
    }
    Complex64::new(0.0, x - f64::from(l) * std::f64::consts::FRAC_PI_2).exp() * sum
}

/// Integrates from the absorbing boundary at `r_match_inner` and matches to
/// `(e^- - S e^+)/sqrt(k)` free solutions at the outer radius.
pub fn universal_smatrix(config: &CollisionConfig, energy: f64, l: u32) -> Result<SMatrixEntry> {
    if !(energy > 0.0 && energy.is_finite()) {
        return Err(Error::domain(format!("collision energy must be positive, got {energy}")));
    }
    config.validate()?;
    let mu = config.reduced_mass;
    let c6 = config.c6;
    let h = config.grid_step;
    let r0 = config.r_match_inner;
    let r_out = config.outer_radius(energy);
    if r_out <= r0 {
        return Err(Error::Matching(format!("outer radius {r_out} a0 is inside R_c = {r0} a0")));
    }
    if c6 / r_out.powi(6) > MATCHING_TOLERANCE * energy {
        return Err(Error::Matching(format!(
            "C6/R^6 at R = {r_out} a0 is {:.3e} of the collision energy",
            c6 / r_out.powi(6) / energy
        )));
    }

    let ll = f64::from(l * (l + 1));
    let f = |r: f64| 2.0 * mu * (-c6 / r.powi(6) - energy) + ll / (r * r);
    let df = |r: f64| 12.0 * mu * c6 / r.powi(7) - 2.0 * ll / r.powi(3);
    let d2f = |r: f64| -84.0 * mu * c6 / r.powi(8) + 6.0 * ll / r.powi(4);

    // Local wavenumber is largest at the inner edge (and grows with l only
    // through a repulsive term).
    let k_local = (-f(r0)).max(2.0 * mu * energy).sqrt();
    let limit = 2.0 * std::f64::consts::PI / k_local / POINTS_PER_WAVELENGTH;
    if h > limit {
        return Err(Error::Resolution { step: h, limit, radius: r0 });
    }

    // Incoming WKB wave at R_c: psi = exp(i (R_x/R)^2 / 2).
    let rx2 = (2.0 * mu * c6).sqrt();
    let phase = rx2 / (2.0 * r0 * r0);
    let psi0 = Complex64::new(0.0, phase).exp();
    let dpsi0 = Complex64::new(0.0, -rx2 / r0.powi(3)) * psi0;
    // Probability current Im(psi* psi') at R_c, conserved outward.
    let flux = -rx2 / r0.powi(3);

    let n = ((r_out - r0) / h).ceil() as usize;
    let end = integrate_outward(f, df, d2f, r0, h, n, psi0, dpsi0);

    let k = (2.0 * mu * energy).sqrt();
    let wp = [riccati_hankel_plus(l, k * end.r[0]), riccati_hankel_plus(l, k * end.r[1])];
    let wm = [wp[0].conj(), wp[1].conj()];
    let y = [end.psi[0] * k.sqrt(), end.psi[1] * k.sqrt()];
    let det = wm[0] * wp[1] - wp[0] * wm[1];
    if det.norm() == 0.0 || !det.is_finite() {
        return Err(Error::Matching("singular matching system".into()));
    }
    let a = (y[0] * wp[1] - wp[0] * y[1]) / det;
    let b = (wm[0] * y[1] - y[0] * wm[1]) / det;
    let s = -b / a;
    let loss = (-flux / a.norm_sqr()).clamp(0.0, 1.0);
    if !loss.is_finite() || !s.is_finite() {
        return Err(Error::Matching("non-finite S-matrix element".into()));
    }
    Ok(SMatrixEntry { energy, l, s_re: s.re, s_im: s.im, loss_probability: loss })
}

/// `2 (2l+1) v pi / k^2`, a.u.
pub fn unitarity_limit(energy: f64, l: u32, reduced_mass: f64) -> f64 {
    let k = (2.0 * reduced_mass * energy).sqrt();
    2.0 * f64::from(2 * l + 1) * std::f64::consts::PI / (reduced_mass * k)
}

/// Rate coefficient for partial wave `l`, summed over `m_l`, two atoms lost per event.
pub fn partial_rate(config: &CollisionConfig, energy: f64, l: u32) -> Result<f64> {
    let s = universal_smatrix(config, energy, l)?;
    Ok(unitarity_limit(energy, l, config.reduced_mass) * s.loss_probability)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TotalRate {
    pub energy: f64,
    /// Indexed by l.
    pub per_l: Vec<f64>,
    pub total: f64,
    /// Set when the `l_max` wave exceeds [`TRUNCATION_THRESHOLD`] of the total.
    pub truncation_warning: Option<String>,
}

impl TotalRate {
    pub(crate) fn from_partials(energy: f64, per_l: Vec<f64>) -> Self {
        let total: f64 = per_l.iter().sum();
        let last = per_l.last().copied().unwrap_or(0.0);
        let truncation_warning = (total > 0.0 && last / total > TRUNCATION_THRESHOLD).then(|| {
            format!(
                "l_max = {} carries {:.2e} of the total rate at E = {:.3e} K; raise l_max",
                per_l.len() - 1,
                last / total,
                crate::units::hartree_to_kelvin(energy)
            )
        });
        Self { energy, per_l, total, truncation_warning }
    }
}

pub fn total_rate(config: &CollisionConfig, energy: f64) -> Result<TotalRate> {
    let ls: Vec<u32> = (0..=config.l_max).collect();
    let per_l = crate::par_map(&ls, |&l| partial_rate(config, energy, l))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(TotalRate::from_partials(energy, per_l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{kelvin_to_hartree, rate_to_cm3_per_s};

    fn cfg() -> CollisionConfig {
        CollisionConfig { l_max: 6, ..Default::default() }
    }

    #[test]
    fn hankel_large_x() {
        for l in 0..6 {
            let x = 1e7;
            let w = riccati_hankel_plus(l, x);
            let p = Complex64::new(0.0, x - f64::from(l) * std::f64::consts::FRAC_PI_2).exp();
            assert!((w - p).norm() < 1e-5);
        }
    }

    #[test]
    fn hankel_satisfies_free_equation() {
        // w'' = (l(l+1)/x^2 - 1) w
        for l in 0..5u32 {
            let x = 2.3;
            let d = 1e-3;
            let w = |x| riccati_hankel_plus(l, x);
            let second = (w(x + d) - 2.0 * w(x) + w(x - d)) / (d * d);
            let rhs = (f64::from(l * (l + 1)) / (x * x) - 1.0) * w(x);
            assert!((second - rhs).norm() < 1e-5 * rhs.norm().max(1.0), "l = {l}");
        }
    }

    #[test]
    fn unitarity_bound() {
        let c = cfg();
        for t in [1e-6, 1e-5, 1e-4, 5e-4, 1.5e-3] {
            for l in 0..=c.l_max {
                let s = universal_smatrix(&c, kelvin_to_hartree(t), l).unwrap();
                assert!(s.s_value().norm() <= 1.0 + 1e-8, "{t} {l} {}", s.s_value().norm());
                assert!((s.s_value().norm_sqr() - s.s_abs_sq()).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn rate_at_500_microkelvin() {
        let r = total_rate(&cfg(), kelvin_to_hartree(500e-6)).unwrap();
        let cm = rate_to_cm3_per_s(r.total);
        assert!((5e-11..=2.1e-10).contains(&cm), "{cm}");
        assert!(r.truncation_warning.is_none());
    }

    #[test]
    fn truncation_warning_for_s_wave_only() {
        let c = CollisionConfig { l_max: 0, ..Default::default() };
        let r = total_rate(&c, kelvin_to_hartree(1e-3)).unwrap();
        assert!(r.truncation_warning.is_some());
    }

    #[test]
    fn unresolved_grid() {
        let c = CollisionConfig { grid_step: 1.0, ..Default::default() };
        assert!(matches!(universal_smatrix(&c, kelvin_to_hartree(1e-4), 0), Err(Error::Resolution { .. })));
    }

    #[test]
    fn matching_too_close() {
        let c = CollisionConfig { r_match_outer: Some(60.0), ..Default::default() };
        assert!(matches!(universal_smatrix(&c, kelvin_to_hartree(1e-4), 0), Err(Error::Matching(_))));
    }

    #[test]
    fn limits_of_partial_rate() {
        let e = kelvin_to_hartree(1e-4);
        let u = unitarity_limit(e, 2, cfg().reduced_mass);
        assert!(partial_rate(&cfg(), e, 2).unwrap() <= u);
        assert!((unitarity_limit(e, 2, 1.0) / unitarity_limit(e, 0, 1.0) - 5.0).abs() < 1e-12);
    }

    fn loss(step: f64, t: f64, l: u32) -> f64 {
        let c = CollisionConfig { grid_step: step, ..Default::default() };
        universal_smatrix(&c, kelvin_to_hartree(t), l).unwrap().loss_probability
    }

    #[test]
    fn step_halving_order() {
        for t in [1e-6, 5e-4, 1.5e-3] {
            for l in 0..=4 {
                let p: Vec<f64> = [0.5, 0.25, 0.125].iter().map(|&h| loss(h, t, l)).collect();
                let order = ((p[0] - p[1]).abs() / (p[1] - p[2]).abs()).log2();
                assert!(order >= 3.0, "T = {t}, l = {l}: order {order}");
            }
        }
    }

    #[test]
    fn default_step_converged() {
        let h = CollisionConfig::default().grid_step;
        for l in 0..=4 {
            assert!((loss(h, 5e-4, l) - loss(h / 2.0, 5e-4, l)).abs() < 1e-6);
        }
    }

    #[test]
    fn outer_radius_insensitive() {
        let c = cfg();
        for t in [1e-6, 5e-4, 1.5e-3] {
            let e = kelvin_to_hartree(t);
            let r = c.outer_radius(e);
            let beta = |r: f64| total_rate(&CollisionConfig { r_match_outer: Some(r), ..c.clone() }, e).unwrap().total;
            let b0 = beta(r);
            for f in [0.8, 1.2] {
                assert!((beta(f * r) / b0 - 1.0).abs() < 5e-3, "T = {t}, factor {f}");
            }
        }
    }

    #[test]
    fn s_wave_low_energy_against_fine_grid() {
        let e = kelvin_to_hartree(1e-6);
        let coarse = cfg();
        let fine = CollisionConfig {
            grid_step: coarse.grid_step / 10.0,
            r_match_outer: Some(1.5 * coarse.outer_radius(e)),
            ..coarse.clone()
        };
        let a = partial_rate(&coarse, e, 0).unwrap();
        let b = partial_rate(&fine, e, 0).unwrap();
        assert!((a / b - 1.0).abs() < 1e-4, "{a} vs {b}");
    }

    #[test]
    fn wigner_threshold_slopes() {
        let c = cfg();
        let temps = [1e-8, 3e-8, 1e-7, 3e-7, 1e-6];
        for l in 0..=4u32 {
            let pts: Vec<(f64, f64)> = temps
                .iter()
                .map(|&t| {
                    let e = kelvin_to_hartree(t);
                    (e.ln(), partial_rate(&c, e, l).unwrap().ln())
                })
                .collect();
            let n = pts.len() as f64;
            let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
            let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
            let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
            let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
            let slope = sxy / sxx;
            assert!((slope - f64::from(l)).abs() < 0.1, "l = {l}: slope {slope}");
        }
    }

    #[test]
    fn both_absorption_radii_in_range() {
        for rc in [35.0, 50.0] {
            let c = CollisionConfig { r_match_inner: rc, ..cfg() };
            let cm = rate_to_cm3_per_s(total_rate(&c, kelvin_to_hartree(500e-6)).unwrap().total);
            assert!((5e-11..=2.1e-10).contains(&cm), "R_c = {rc}: {cm}");
        }
    }
}
