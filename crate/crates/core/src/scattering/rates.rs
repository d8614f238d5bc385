use serde::{Deserialize, Serialize};

use super::universal::TotalRate;
use super::{born_gamma, partial_rate, unitarity_limit, BornParams, CollisionConfig, Flip};
use crate::error::Result;
use crate::units::{hartree_to_kelvin, rate_to_cm3_per_s};

/// Universal and Born rates on an energy grid, all in a.u.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateTable {
    pub config: CollisionConfig,
    pub born: BornParams,
    /// Field for the Born rates, a.u.
    pub b_field: f64,
    pub energies: Vec<f64>,
    /// `[energy][l]`
    pub per_l_rates: Vec<Vec<f64>>,
    pub unitarity_limits: Vec<Vec<f64>>,
    pub total_rate: Vec<f64>,
    pub gamma1: Vec<f64>,
    pub gamma2: Vec<f64>,
    pub gamma: Vec<f64>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateRow {
    pub energy_k: f64,
    pub l: u32,
    pub beta_l_cm3s: f64,
    pub unitarity_cm3s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SummaryRow {
    pub energy_k: f64,
    pub beta_total_cm3s: f64,
    pub gamma1_cm3s: f64,
    pub gamma2_cm3s: f64,
    pub gamma_total_cm3s: f64,
}

#[derive(Debug, Clone)]
pub struct RateTableBuilder {
    config: CollisionConfig,
    born: BornParams,
    b_field: f64,
}

impl RateTableBuilder {
    /// `b_field` in a.u.; it has no default.
    pub fn new(config: CollisionConfig, b_field: f64) -> Self {
        let born = BornParams { reduced_mass: config.reduced_mass, ..BornParams::default() };
        Self { config, born, b_field }
    }

    pub fn born_params(mut self, born: BornParams) -> Self {
        self.born = born;
        self
    }

    /// Every (E, l) pair runs independently; assembly keeps grid order.
    pub fn build(self) -> Result<RateTable> {
        let Self { config, born, b_field } = self;
        config.validate()?;
        let nl = config.l_max as usize + 1;
        let jobs: Vec<(usize, u32)> = (0..config.energies.len())
            .flat_map(|i| (0..=config.l_max).map(move |l| (i, l)))
            .collect();
        let flat = crate::par_map(&jobs, |&(i, l)| partial_rate(&config, config.energies[i], l))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;

        let mut table = RateTable {
            born,
            b_field,
            energies: config.energies.clone(),
            per_l_rates: Vec::new(),
            unitarity_limits: Vec::new(),
            total_rate: Vec::new(),
            gamma1: Vec::new(),
            gamma2: Vec::new(),
            gamma: Vec::new(),
            warnings: Vec::new(),
            config: config.clone(),
        };
        let mut last = None;
        for (i, &e) in config.energies.iter().enumerate() {
            let per_l = flat[i * nl..(i + 1) * nl].to_vec();
            let total = TotalRate::from_partials(e, per_l);
            table.unitarity_limits.push((0..=config.l_max).map(|l| unitarity_limit(e, l, config.reduced_mass)).collect());
            table.total_rate.push(total.total);
            let g1 = born_gamma(b_field, e, Flip::Single, &born)?;
            let g2 = born_gamma(b_field, e, Flip::Double, &born)?;
            table.gamma1.push(g1);
            table.gamma2.push(g2);
            table.gamma.push(2.0 * (g1 + g2));
            if last.as_ref().is_none_or(|(le, _): &(f64, _)| e >= *le) {
                last = Some((e, total.truncation_warning.clone()));
            }
            table.per_l_rates.push(total.per_l);
        }
        if let Some((_, Some(w))) = last {
            table.warnings.push(w);
        }
        Ok(table)
    }
}

impl RateTable {
    pub fn rows(&self) -> Vec<RateRow> {
        let mut rows = Vec::new();
        for (i, &e) in self.energies.iter().enumerate() {
            for (l, (&b, &u)) in self.per_l_rates[i].iter().zip(&self.unitarity_limits[i]).enumerate() {
                rows.push(RateRow {
                    energy_k: hartree_to_kelvin(e),
                    l: l as u32,
                    beta_l_cm3s: rate_to_cm3_per_s(b),
                    unitarity_cm3s: rate_to_cm3_per_s(u),
                });
            }
        }
        rows
    }

    pub fn summary(&self) -> Vec<SummaryRow> {
        (0..self.energies.len())
            .map(|i| SummaryRow {
                energy_k: hartree_to_kelvin(self.energies[i]),
                beta_total_cm3s: rate_to_cm3_per_s(self.total_rate[i]),
                gamma1_cm3s: rate_to_cm3_per_s(self.gamma1[i]),
                gamma2_cm3s: rate_to_cm3_per_s(self.gamma2[i]),
                gamma_total_cm3s: rate_to_cm3_per_s(self.gamma[i]),
            })
            .collect()
    }

    /// Total universal rate linearly interpolated in log E.
    pub fn total_at(&self, energy: f64) -> Option<f64> {
        let e = &self.energies;
        let i = e.windows(2).position(|w| w[0] <= energy && energy <= w[1])?;
        let t = (energy.ln() - e[i].ln()) / (e[i + 1].ln() - e[i].ln());
        Some(self.total_rate[i] + t * (self.total_rate[i + 1] - self.total_rate[i]))
    }
}
