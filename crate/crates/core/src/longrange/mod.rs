//! Omega-block interaction matrices, their adiabatic coefficients and
//! R-dependent adiabatic potentials.
//!
//! Sign conventions: `U_disp = -C6/R^6` with C6 > 0 attractive, and
//! `U_mdd = -C3/R^3` with C3 of either sign. Blocks store the coefficient
//! matrices (C6 or C3), not the potentials.

mod curves;
mod dispersion;
mod magnetic;
mod oracle;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

pub use crate::angular::{CoupledState, PairBasisState, Parity};
pub use curves::{combined_adiabats, overlap_matrix, PotentialCurveSet};
pub use dispersion::{a_tensor, build_c6_block, full_uncoupled_c6, ATensor};
pub use magnetic::{build_c3_block, full_uncoupled_c3, mdd_prefactor};
pub use oracle::{direct_c6_uncoupled, validate_c6_equivalence, BlockDeviation, EquivalenceReport};

use crate::error::{Error, Result};

/// Interaction matrix for one (Omega, parity) block in the total-J basis.
#[derive(Debug, Clone)]
pub struct OmegaBlock {
    pub omega: i32,
    pub parity: Parity,
    pub basis: Vec<CoupledState>,
    /// Real symmetric coefficient matrix, atomic units.
    pub matrix: DMatrix<f64>,
    /// The block multiplies `-1/R^r_power`.
    pub r_power: u32,
}

impl OmegaBlock {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdiabaticSpectrum {
    pub omega: i32,
    pub parity: Parity,
    pub r_power: u32,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Columns are eigenvectors in the block basis, matching `eigenvalues`.
    #[serde(skip)]
    pub eigenvectors: Option<DMatrix<f64>>,
}

/// Sorted eigen-decomposition of a real symmetric matrix.
pub(crate) fn sorted_eigen(matrix: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = matrix.nrows();
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(matrix.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        let mut v = eig.eigenvectors.column(i).clone_owned();
        // fix the gauge: largest component positive
        let imax = v.iamax();
        if v[imax] < 0.0 {
            v.neg_mut();
        }
        vectors.set_column(col, &v);
    }
    (values, vectors)
}

pub fn adiabatic_coefficients(block: &OmegaBlock) -> AdiabaticSpectrum {
    let (eigenvalues, vectors) = sorted_eigen(&block.matrix);
    AdiabaticSpectrum {
        omega: block.omega,
        parity: block.parity,
        r_power: block.r_power,
        eigenvalues,
        eigenvectors: Some(vectors),
    }
}

/// All (Omega >= 0, parity) keys in output order: Omega ascending, gerade first.
pub fn block_keys(j: u32) -> Vec<(i32, Parity)> {
    (0..=2 * j as i32)
        .flat_map(|omega| Parity::BOTH.map(|p| (omega, p)))
        .collect()
}

/// Adiabatic C6 coefficients for every block (Omega >= 0), including empty ones.
pub fn c6_spectra(k: &crate::atomdata::KTensor) -> Result<Vec<AdiabaticSpectrum>> {
    let table = ATensor::new(k.j_ground)?;
    crate::par_map(&block_keys(k.j_ground), |&(omega, parity)| {
        dispersion::build_c6_block_with(&table, k, omega, parity).map(|b| adiabatic_coefficients(&b))
    })
    .into_iter()
    .collect()
}

/// Adiabatic C3 coefficients for every block (Omega >= 0), including empty ones.
pub fn c3_spectra(j: u32, g_j: f64) -> Result<Vec<AdiabaticSpectrum>> {
    crate::par_map(&block_keys(j), |&(omega, parity)| {
        build_c3_block(j, g_j, omega, parity).map(|b| adiabatic_coefficients(&b))
    })
    .into_iter()
    .collect()
}

/// Sum of all eigenvalues over the full pair space, counting each Omega > 0
/// block twice for its degenerate -Omega partner.
pub fn full_space_sum(spectra: &[AdiabaticSpectrum]) -> f64 {
    spectra
        .iter()
        .map(|s| {
            let mult = if s.omega == 0 { 1.0 } else { 2.0 };
            mult * s.eigenvalues.iter().sum::<f64>()
        })
        .sum()
}

/// Order-of-magnitude quadrupole-quadrupole energy `Q^2 / R^5` (angular factor 1).
pub fn qq_interaction_scale(q: f64, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::domain(format!("R must be positive, got {r}")));
    }
    Ok(q * q / r.powi(5))
}

pub(crate) fn check_omega(j: u32, omega: i32) -> Result<()> {
    if omega.unsigned_abs() > 2 * j {
        return Err(Error::domain(format!("|Omega| = {} exceeds {}", omega.abs(), 2 * j)));
    }
    Ok(())
}
