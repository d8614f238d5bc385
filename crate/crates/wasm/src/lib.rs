//! Browser bindings: adiabatic potentials, splitting scales and loss rates as
//! JSON strings for the static page in `www/`.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use dyspair::angular::Parity;
use dyspair::atomdata::dy_reference_k;
use dyspair::config::RunConfig;
use dyspair::report::{adiabat_curves, crossings, Crossing, ScaleSet};
use dyspair::scattering::{log_energy_grid, CollisionConfig, RateTableBuilder};
use dyspair::units::{gauss_to_au, hartree_to_kelvin, rate_to_cm3_per_s, DY_GROUND_G_FACTOR};

#[derive(Serialize)]
struct Curves {
    r_a0: Vec<f64>,
    /// `curves[label][i]` in mK.
    curves_mk: Vec<Vec<f64>>,
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

pub fn adiabats_json(omega: i32, parity: &str, r_min: f64, r_max: f64, points: usize) -> Result<String, String> {
    let parity: Parity = parity.parse().map_err(|e: dyspair::Error| e.to_string())?;
    if !(r_min > 0.0 && r_max > r_min) || points == 0 {
        return Err("need 0 < rmin < rmax and at least one point".into());
    }
    let grid = linspace(r_min, r_max, points);
    let set = adiabat_curves(&dy_reference_k(), DY_GROUND_G_FACTOR, omega, parity, &grid).map_err(|e| e.to_string())?;
    let curves_mk = set.curves.iter().map(|c| c.iter().map(|e| hartree_to_kelvin(*e) * 1e3).collect()).collect();
    serde_json::to_string(&Curves { r_a0: set.r_grid, curves_mk }).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Scales {
    r_a0: Vec<f64>,
    /// Name and values in mK.
    series: Vec<(String, Vec<f64>)>,
    crossings: Vec<Crossing>,
}

pub fn scales_json(bfields: &str, delta_c6: f64, r_min: f64, r_max: f64, points: usize) -> Result<String, String> {
    let mut cfg = RunConfig {
        b_fields_gauss: dyspair::config::parse_float_list(bfields).map_err(|e| e.to_string())?,
        ..Default::default()
    };
    if cfg.b_fields_gauss.is_empty() {
        return Err("give at least one field".into());
    }
    cfg.delta_c6_au = delta_c6;
    cfg.scales.r_min = r_min;
    cfg.scales.r_max = r_max;
    cfg.scales.points = points;
    cfg.validate().map_err(|e| e.to_string())?;
    let grid = cfg.scales.grid().map_err(|e| e.to_string())?;
    let set = ScaleSet::from_config(&cfg);
    let mk = |c: &dyspair::scales::ScaleCurve| -> Result<Vec<f64>, String> {
        c.sample(&grid)
            .map(|v| v.into_iter().map(|e| hartree_to_kelvin(e) * 1e3).collect())
            .map_err(|e| e.to_string())
    };
    let mut series = Vec::new();
    for (b, z) in &set.zeeman {
        series.push((format!("Zeeman {b} G"), mk(z)?));
    }
    series.push(("rotational".into(), mk(&set.rotational)?));
    series.push(("MDD".into(), mk(&set.mdd)?));
    series.push(("AD".into(), mk(&set.ad)?));
    let crossings = crossings(&set, r_min, r_max).map_err(|e| e.to_string())?;
    serde_json::to_string(&Scales { r_a0: grid, series, crossings }).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Rates {
    energy_k: Vec<f64>,
    beta_total: Vec<f64>,
    /// `[l][energy]`, cm^3/s.
    beta_l: Vec<Vec<f64>>,
    gamma_total: Vec<f64>,
    warnings: Vec<String>,
}

pub fn rates_json(c6: f64, r_c: f64, b_gauss: f64, l_max: u32, points: usize) -> Result<String, String> {
    let energies = log_energy_grid(1e-6, 1.5e-3, points).map_err(|e| e.to_string())?;
    let config = CollisionConfig { c6, r_match_inner: r_c, l_max, energies, ..Default::default() };
    let t = RateTableBuilder::new(config, gauss_to_au(b_gauss)).build().map_err(|e| e.to_string())?;
    let cm = |v: &[f64]| v.iter().map(|x| rate_to_cm3_per_s(*x)).collect::<Vec<_>>();
    let beta_l = (0..=l_max as usize)
        .map(|l| t.per_l_rates.iter().map(|row| rate_to_cm3_per_s(row[l])).collect())
        .collect();
    let out = Rates {
        energy_k: t.energies.iter().map(|e| hartree_to_kelvin(*e)).collect(),
        beta_total: cm(&t.total_rate),
        beta_l,
        gamma_total: cm(&t.gamma),
        warnings: t.warnings.clone(),
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

/// Adiabats for one (Omega, parity) with the built-in K values.
#[wasm_bindgen]
pub fn adiabats(omega: i32, parity: &str, r_min: f64, r_max: f64, points: usize) -> Result<String, JsError> {
    js(adiabats_json(omega, parity, r_min, r_max, points))
}

/// Splitting scales and crossing radii; `bfields` is a comma-separated list in gauss.
#[wasm_bindgen]
pub fn scales(bfields: &str, delta_c6: f64, r_min: f64, r_max: f64, points: usize) -> Result<String, JsError> {
    js(scales_json(bfields, delta_c6, r_min, r_max, points))
}

/// Universal and Born rates on a 1 uK to 1.5 mK grid.
#[wasm_bindgen]
pub fn rates(c6: f64, r_c: f64, b_gauss: f64, l_max: u32, points: usize) -> Result<String, JsError> {
    js(rates_json(c6, r_c, b_gauss, l_max, points))
}
