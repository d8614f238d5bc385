use nalgebra::DMatrix;

use super::dispersion::symmetrize;
use super::{check_omega, OmegaBlock};
use crate::angular::{symmetrized_basis, PairBasisState, Parity};
use crate::error::Result;
use crate::units::{BOHR_MAGNETON, FINE_STRUCTURE};

/// `mu0 (g mu_B)^2 / 4 pi` in atomic units, i.e. `alpha^2 (g/2)^2`.
pub fn mdd_prefactor(g_j: f64) -> f64 {
    let g_mub = g_j * BOHR_MAGNETON;
    FINE_STRUCTURE * FINE_STRUCTURE * g_mub * g_mub
}

/// `<m1 m2| j1.j2 - 3 j1z j2z |m1' m2'>` for two spins `j`.
fn angular_element(j: f64, a: PairBasisState, b: PairBasisState) -> f64 {
    let jj = j * (j + 1.0);
    let (m1, m2) = (f64::from(b.m1), f64::from(b.m2));
    if a == b {
        return -2.0 * m1 * m2;
    }
    if a.m1 == b.m1 + 1 && a.m2 == b.m2 - 1 {
        // j1+ j2- / 2
        return 0.5 * (jj - m1 * (m1 + 1.0)).sqrt() * (jj - m2 * (m2 - 1.0)).sqrt();
    }
    if a.m1 == b.m1 - 1 && a.m2 == b.m2 + 1 {
        return 0.5 * (jj - m1 * (m1 - 1.0)).sqrt() * (jj - m2 * (m2 + 1.0)).sqrt();
    }
    0.0
}

fn c3_uncoupled(j: u32, g_j: f64, states: &[PairBasisState]) -> DMatrix<f64> {
    let pref = -mdd_prefactor(g_j);
    let n = states.len();
    DMatrix::from_fn(n, n, |r, c| pref * angular_element(f64::from(j), states[r], states[c]))
}

/// C3 block with `U_mdd = -C3/R^3`.
pub fn build_c3_block(j: u32, g_j: f64, omega: i32, parity: Parity) -> Result<OmegaBlock> {
    check_omega(j, omega)?;
    let basis = symmetrized_basis(j, omega, parity)?;
    let mut matrix = basis.project(&c3_uncoupled(j, g_j, &basis.uncoupled));
    symmetrize(&mut matrix);
    Ok(OmegaBlock { omega, parity, basis: basis.states, matrix, r_power: 3 })
}

/// C3 on the full uncoupled space, states ordered by `(m1, m2)` descending.
pub fn full_uncoupled_c3(j: u32, g_j: f64) -> (Vec<PairBasisState>, DMatrix<f64>) {
    let ji = j as i32;
    let states: Vec<_> = (-ji..=ji)
        .rev()
        .flat_map(|m1| (-ji..=ji).rev().map(move |m2| PairBasisState { m1, m2 }))
        .collect();
    let m = c3_uncoupled(j, g_j, &states);
    (states, m)
}
