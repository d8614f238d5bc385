//! Tables and summaries shared by the command-line tool and the web demo.

use serde::Serialize;

use crate::angular::Parity;
use crate::atomdata::KTensor;
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::longrange::{
    build_c3_block, build_c6_block, c3_spectra, c6_spectra, combined_adiabats, full_space_sum, AdiabaticSpectrum,
    PotentialCurveSet,
};
use crate::output::{Cell, CsvTable};
use crate::scales::{crossing_radius, ScaleCurve};
use crate::scattering::RateTable;
use crate::units::{gauss_to_au, hartree_to_kelvin};

/// Which (Omega, parity) blocks to report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Selection {
    /// `None` for all Omega.
    pub omega: Option<i32>,
    pub parities: Vec<Parity>,
}

impl Selection {
    pub fn all() -> Self {
        Self { omega: None, parities: Parity::BOTH.to_vec() }
    }

    pub fn check(&self, j: u32) -> Result<()> {
        match self.omega {
            Some(o) if !(0..=2 * j as i32).contains(&o) => {
                Err(Error::domain(format!("Omega must lie in 0..={}, got {o}", 2 * j)))
            }
            _ => Ok(()),
        }
    }

    fn keeps(&self, s: &AdiabaticSpectrum) -> bool {
        self.omega.is_none_or(|o| o == s.omega) && self.parities.contains(&s.parity)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSummary {
    pub count: usize,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub spread: Option<f64>,
    pub positive: usize,
    pub negative: usize,
    /// Over the whole pair space, independent of the selection.
    pub full_space_sum: f64,
}

fn summarize(selected: &[&AdiabaticSpectrum], all: &[AdiabaticSpectrum]) -> SpectrumSummary {
    let values: Vec<f64> = selected.iter().flat_map(|s| s.eigenvalues.iter().copied()).collect();
    let min = values.iter().copied().reduce(f64::min);
    let max = values.iter().copied().reduce(f64::max);
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    SpectrumSummary {
        count: values.len(),
        min,
        max,
        spread: min.zip(max).map(|(a, b)| b - a),
        positive: values.iter().filter(|v| **v > 1e-12 * scale).count(),
        negative: values.iter().filter(|v| **v < -1e-12 * scale).count(),
        full_space_sum: full_space_sum(all),
    }
}

fn spectrum_table(name: &str, spectra: &[&AdiabaticSpectrum]) -> CsvTable {
    let mut t = CsvTable::new(["omega", "parity", "index", name]);
    for s in spectra {
        for (i, v) in s.eigenvalues.iter().enumerate() {
            t.rows.push(vec![s.omega.into(), s.parity.label().into(), i.into(), (*v).into()]);
        }
    }
    t
}

/// Adiabatic C6 table (`omega,parity,index,c6_au`) and its summary.
pub fn c6_report(k: &KTensor, sel: &Selection) -> Result<(CsvTable, SpectrumSummary)> {
    sel.check(k.j_ground)?;
    let all = c6_spectra(k)?;
    let chosen: Vec<&AdiabaticSpectrum> = all.iter().filter(|s| sel.keeps(s)).collect();
    Ok((spectrum_table("c6_au", &chosen), summarize(&chosen, &all)))
}

/// Adiabatic C3 table (`omega,parity,index,c3_au`) and its summary.
pub fn c3_report(j: u32, g_j: f64, sel: &Selection) -> Result<(CsvTable, SpectrumSummary)> {
    sel.check(j)?;
    let all = c3_spectra(j, g_j)?;
    let chosen: Vec<&AdiabaticSpectrum> = all.iter().filter(|s| sel.keeps(s)).collect();
    Ok((spectrum_table("c3_au", &chosen), summarize(&chosen, &all)))
}

pub fn adiabat_curves(k: &KTensor, g_j: f64, omega: i32, parity: Parity, r_grid: &[f64]) -> Result<PotentialCurveSet> {
    Selection { omega: Some(omega), parities: vec![parity] }.check(k.j_ground)?;
    let c6 = build_c6_block(k, omega, parity)?;
    let c3 = build_c3_block(k.j_ground, g_j, omega, parity)?;
    combined_adiabats(&c6, &c3, r_grid)
}

/// Long-format table `R_a0,curve,energy_au[,energy_mK]`.
pub fn adiabat_table(set: &PotentialCurveSet, millikelvin: bool) -> CsvTable {
    let mut header = vec!["R_a0", "curve", "energy_au"];
    if millikelvin {
        header.push("energy_mK");
    }
    let mut t = CsvTable::new(header);
    for (i, r) in set.r_grid.iter().enumerate() {
        for (label, curve) in set.curves.iter().enumerate() {
            let mut row: Vec<Cell> = vec![(*r).into(), label.into(), curve[i].into()];
            if millikelvin {
                row.push((hartree_to_kelvin(curve[i]) * 1e3).into());
            }
            t.rows.push(row);
        }
    }
    t
}

fn gauss_label(b: f64) -> String {
    format!("zeeman_{b}G")
}

pub struct ScaleSet {
    pub zeeman: Vec<(f64, ScaleCurve)>,
    pub rotational: ScaleCurve,
    pub mdd: ScaleCurve,
    pub ad: ScaleCurve,
}

impl ScaleSet {
    pub fn from_config(cfg: &RunConfig) -> Self {
        Self {
            zeeman: cfg
                .b_fields_gauss
                .iter()
                .map(|&b| (b, ScaleCurve::zeeman(gauss_to_au(b), cfg.atom.g_j)))
                .collect(),
            rotational: ScaleCurve::rotational(cfg.reduced_mass()),
            mdd: ScaleCurve::mdd(cfg.atom.j, cfg.atom.g_j),
            ad: ScaleCurve::ad(cfg.delta_c6_au),
        }
    }
}

/// Wide table `R_a0,zeeman_<B>G...,rotational,mdd,ad`, energies in a.u.
pub fn scales_table(set: &ScaleSet, r_grid: &[f64]) -> Result<CsvTable> {
    let mut header: Vec<String> = vec!["R_a0".into()];
    header.extend(set.zeeman.iter().map(|(b, _)| gauss_label(*b)));
    header.extend(["rotational", "mdd", "ad"].map(String::from));
    let mut t = CsvTable::new(header);
    for &r in r_grid {
        let mut row: Vec<Cell> = vec![r.into()];
        for (_, z) in &set.zeeman {
            row.push(z.eval(r)?.into());
        }
        for c in [&set.rotational, &set.mdd, &set.ad] {
            row.push(c.eval(r)?.into());
        }
        t.rows.push(row);
    }
    Ok(t)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Crossing {
    pub curve: String,
    pub against: String,
    pub b_gauss: Option<f64>,
    /// `None` when the curves do not cross inside the bracket.
    pub r_a0: Option<f64>,
}

pub fn crossings(set: &ScaleSet, lo: f64, hi: f64) -> Result<Vec<Crossing>> {
    let find = |a: &ScaleCurve, b: &ScaleCurve| match crossing_radius(a, b, lo, hi) {
        Ok(r) => Ok(Some(r)),
        Err(Error::NoCrossing { .. }) => Ok(None),
        Err(e) => Err(e),
    };
    let mut out = Vec::new();
    for (b, z) in &set.zeeman {
        for c in [&set.ad, &set.mdd, &set.rotational] {
            out.push(Crossing {
                curve: c.name().into(),
                against: "zeeman".into(),
                b_gauss: Some(*b),
                r_a0: find(c, z)?,
            });
        }
    }
    out.push(Crossing { curve: "ad".into(), against: "mdd".into(), b_gauss: None, r_a0: find(&set.ad, &set.mdd)? });
    Ok(out)
}

pub fn crossings_table(list: &[Crossing]) -> CsvTable {
    let mut t = CsvTable::new(["curve", "against", "b_gauss", "r_a0"]);
    for c in list {
        t.rows.push(vec![
            c.curve.as_str().into(),
            c.against.as_str().into(),
            c.b_gauss.map_or(Cell::Text(String::new()), Cell::Float),
            c.r_a0.map_or(Cell::Text("none".into()), Cell::Float),
        ]);
    }
    t
}

/// Per-l table `energy_K,l,beta_l_cm3s,unitarity_cm3s`.
pub fn rates_table(t: &RateTable) -> CsvTable {
    let mut out = CsvTable::new(["energy_K", "l", "beta_l_cm3s", "unitarity_cm3s"]);
    for r in t.rows() {
        out.rows.push(vec![r.energy_k.into(), r.l.into(), r.beta_l_cm3s.into(), r.unitarity_cm3s.into()]);
    }
    out
}

/// `energy_K,beta_total_cm3s,gamma1_cm3s,gamma2_cm3s,gamma_total_cm3s`.
pub fn rates_summary_table(t: &RateTable) -> CsvTable {
    let mut out = CsvTable::new(["energy_K", "beta_total_cm3s", "gamma1_cm3s", "gamma2_cm3s", "gamma_total_cm3s"]);
    for r in t.summary() {
        out.rows.push(vec![
            r.energy_k.into(),
            r.beta_total_cm3s.into(),
            r.gamma1_cm3s.into(),
            r.gamma2_cm3s.into(),
            r.gamma_total_cm3s.into(),
        ]);
    }
    out
}
