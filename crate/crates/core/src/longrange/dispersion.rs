use nalgebra::DMatrix;

use super::{check_omega, OmegaBlock};
use crate::angular::{symmetrized_basis, wigner3j_f64, PairBasisState, Parity};
use crate::atomdata::KTensor;
use crate::error::{Error, Result};

/// Precomputed dipole 3-j symbols `(j 1 ja; -m, m - ma, ma)` for one ground `j`.
///
/// The A tensor needs only these: the conjugate factor
/// `(ja 1 j; -ma, ma - m', m')` equals `(j 1 ja; -m', m' - ma, ma)` exactly.
#[derive(Debug, Clone)]
pub struct ATensor {
    j: i32,
    stride_ma: usize,
    stride_m: usize,
    table: Vec<f64>,
}

impl ATensor {
    pub fn new(j: u32) -> Result<Self> {
        if j == 0 {
            return Err(Error::domain("ground level must have j >= 1"));
        }
        let j = j as i32;
        let stride_ma = (2 * j + 3) as usize;
        let stride_m = (2 * j + 1) as usize * stride_ma;
        let mut table = vec![0.0; 3 * stride_m];
        for (ia, ja) in (j - 1..=j + 1).enumerate() {
            for m in -j..=j {
                for ma in -ja..=ja {
                    if (m - ma).abs() > 1 {
                        continue;
                    }
                    let idx = ia * stride_m + (m + j) as usize * stride_ma + (ma + j + 1) as usize;
                    table[idx] = wigner3j_f64(j, 1, ja, -m, m - ma, ma)?;
                }
            }
        }
        Ok(Self { j, stride_ma, stride_m, table })
    }

    pub fn j(&self) -> u32 {
        self.j as u32
    }

    fn w(&self, ja: i32, m: i32, ma: i32) -> f64 {
        if (m - ma).abs() > 1 || ma.abs() > ja || m.abs() > self.j || (ja - self.j).abs() > 1 {
            return 0.0;
        }
        let ia = (ja - self.j + 1) as usize;
        self.table[ia * self.stride_m + (m + self.j) as usize * self.stride_ma + (ma + self.j + 1) as usize]
    }

    #[allow(clippy::too_many_arguments)]
    fn term(&self, m1: i32, m2: i32, m1p: i32, m2p: i32, ja: i32, jb: i32, ma: i32, mb: i32) -> f64 {
        let d1 = if m1 == ma { 2.0 } else { 1.0 };
        let d2 = if m1p == ma { 2.0 } else { 1.0 };
        d1 * d2 * self.w(ja, m1, ma) * self.w(jb, m2, mb) * self.w(ja, m1p, ma) * self.w(jb, m2p, mb)
    }

    /// `A^{j j ja jb}_{m1 m2, m1' m2'}`.
    ///
    /// The intermediate pair state keeps the total projection, `ma + mb =
    /// m1 + m2`, as the dipole-dipole operator is invariant under rotations
    /// about the internuclear axis. The `(1 + delta)` factors come from the
    /// weight 2 of the `q = 0` spherical component in `d1.d2 - 3 d1z d2z`.
    pub fn value(&self, m1: i32, m2: i32, m1p: i32, m2p: i32, ja: u32, jb: u32) -> f64 {
        if m1 + m2 != m1p + m2p {
            return 0.0;
        }
        let (ja, jb) = (ja as i32, jb as i32);
        let omega = m1 + m2;
        (m1 - 1..=m1 + 1)
            .map(|ma| self.term(m1, m2, m1p, m2p, ja, jb, ma, omega - ma))
            .sum()
    }

    /// The same sum with `ma` and `mb` running independently, without the
    /// projection constraint on the intermediate state. Kept for diagnostics
    /// only; it does not conserve Omega.
    pub fn value_unconstrained(&self, m1: i32, m2: i32, m1p: i32, m2p: i32, ja: u32, jb: u32) -> f64 {
        let (ja, jb) = (ja as i32, jb as i32);
        let mut s = 0.0;
        for ma in m1 - 1..=m1 + 1 {
            for mb in m2 - 1..=m2 + 1 {
                s += self.term(m1, m2, m1p, m2p, ja, jb, ma, mb);
            }
        }
        s
    }

    /// Closed-form `sum K[ja][jb] A(...)` on the uncoupled block basis.
    pub(crate) fn c6_uncoupled(&self, k: &KTensor, states: &[PairBasisState], literal: bool) -> DMatrix<f64> {
        let n = states.len();
        let js = k.excited_js();
        let mut m = DMatrix::zeros(n, n);
        for (r, a) in states.iter().enumerate() {
            for (c, b) in states.iter().enumerate().skip(r) {
                let mut v = 0.0;
                for &ja in &js {
                    for &jb in &js {
                        let kab = k.get(ja, jb);
                        if kab == 0.0 {
                            continue;
                        }
                        let a_val = if literal {
                            self.value_unconstrained(a.m1, a.m2, b.m1, b.m2, ja, jb)
                        } else {
                            self.value(a.m1, a.m2, b.m1, b.m2, ja, jb)
                        };
                        v += kab * a_val;
                    }
                }
                m[(r, c)] = v;
                m[(c, r)] = v;
            }
        }
        m
    }
}

/// A-tensor element evaluated from scratch (no shared table).
pub fn a_tensor(j: u32, m1: i32, m2: i32, m1p: i32, m2p: i32, ja: u32, jb: u32) -> Result<f64> {
    let ji = j as i32;
    for m in [m1, m2, m1p, m2p] {
        if m.abs() > ji {
            return Err(Error::domain(format!("projection {m} out of range for j = {j}")));
        }
    }
    if ja.abs_diff(j) > 1 || jb.abs_diff(j) > 1 {
        return Ok(0.0);
    }
    Ok(ATensor::new(j)?.value(m1, m2, m1p, m2p, ja, jb))
}

pub(crate) fn build_c6_block_with(table: &ATensor, k: &KTensor, omega: i32, parity: Parity) -> Result<OmegaBlock> {
    check_omega(k.j_ground, omega)?;
    if table.j() != k.j_ground {
        return Err(Error::domain("A-tensor table built for a different j"));
    }
    let basis = symmetrized_basis(k.j_ground, omega, parity)?;
    let uncoupled = table.c6_uncoupled(k, &basis.uncoupled, false);
    let mut matrix = basis.project(&uncoupled);
    symmetrize(&mut matrix);
    Ok(OmegaBlock { omega, parity, basis: basis.states, matrix, r_power: 6 })
}

pub fn build_c6_block(k: &KTensor, omega: i32, parity: Parity) -> Result<OmegaBlock> {
    build_c6_block_with(&ATensor::new(k.j_ground)?, k, omega, parity)
}

/// C6 on the full `(2j+1)^2` uncoupled space, states ordered by `(m1, m2)`
/// descending.
pub fn full_uncoupled_c6(k: &KTensor) -> Result<(Vec<PairBasisState>, DMatrix<f64>)> {
    let j = k.j_ground as i32;
    let states: Vec<_> = (-j..=j)
        .rev()
        .flat_map(|m1| (-j..=j).rev().map(move |m2| PairBasisState { m1, m2 }))
        .collect();
    let table = ATensor::new(k.j_ground)?;
    let m = table.c6_uncoupled(k, &states, false);
    Ok((states, m))
}

pub(crate) fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for r in 0..n {
        for c in r + 1..n {
            let v = 0.5 * (m[(r, c)] + m[(c, r)]);
            m[(r, c)] = v;
            m[(c, r)] = v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atomdata::dy_reference_k;
    use approx::assert_relative_eq;

    #[test]
    fn omega_conservation() {
        let t = ATensor::new(8).unwrap();
        assert_eq!(t.value(3, 2, 3, 1, 8, 9), 0.0);
        assert_eq!(a_tensor(8, 8, 8, 7, 8, 7, 9).unwrap(), 0.0);
    }

    #[test]
    fn exchange_symmetry() {
        let t = ATensor::new(8).unwrap();
        for (m1, m2, m1p, m2p) in [(3, -1, 2, 0), (8, 8, 8, 8), (-4, 5, -3, 4), (0, 0, 1, -1)] {
            for ja in 7..=9 {
                for jb in 7..=9 {
                    let a = t.value(m1, m2, m1p, m2p, ja, jb);
                    let b = t.value(m2, m1, m2p, m1p, jb, ja);
                    assert_relative_eq!(a, b, max_relative = 1e-14, epsilon = 1e-300);
                }
            }
        }
    }

    #[test]
    fn hermitian_in_pair_states() {
        let t = ATensor::new(8).unwrap();
        for (m1, m2, m1p, m2p) in [(3, -1, 2, 0), (-4, 5, -3, 4), (1, 0, 0, 1)] {
            for ja in 7..=9 {
                for jb in 7..=9 {
                    assert_relative_eq!(
                        t.value(m1, m2, m1p, m2p, ja, jb),
                        t.value(m1p, m2p, m1, m2, ja, jb),
                        max_relative = 1e-14,
                        epsilon = 1e-300
                    );
                }
            }
        }
    }

    #[test]
    fn stretched_diagonal_matches_hand_value() {
        // Only ja = jb = 9 reaches |8,8> with ma = mb = 8 (q = 0) and
        // ma = 9, mb = 7 / ma = 7, mb = 9 (q = -1, +1).
        let t = ATensor::new(8).unwrap();
        let w = |m: i32, ma: i32| wigner3j_f64(8, 1, 9, -m, m - ma, ma).unwrap();
        let q0 = 4.0 * w(8, 8).powi(4);
        let q1 = w(8, 9).powi(2) * w(8, 7).powi(2) * 2.0;
        assert_relative_eq!(t.value(8, 8, 8, 8, 9, 9), q0 + q1, max_relative = 1e-14);
    }

    #[test]
    fn block_shapes() {
        let k = dy_reference_k();
        assert_eq!(build_c6_block(&k, 16, Parity::Gerade).unwrap().dim(), 1);
        assert!(build_c6_block(&k, 16, Parity::Ungerade).unwrap().is_empty());
        assert!(build_c6_block(&k, 17, Parity::Gerade).is_err());
        for omega in 0..=16 {
            let g = build_c6_block(&k, omega, Parity::Gerade).unwrap();
            let u = build_c6_block(&k, omega, Parity::Ungerade).unwrap();
            assert_eq!(g.dim() + u.dim(), 17 - omega as usize);
            let asym = (&g.matrix - g.matrix.transpose()).amax();
            assert!(asym <= 1e-12 * g.matrix.amax().max(1.0));
        }
    }

    #[test]
    fn full_matrix_is_block_diagonal() {
        let (states, m) = full_uncoupled_c6(&dy_reference_k()).unwrap();
        assert_eq!(states.len(), 289);
        for (r, a) in states.iter().enumerate() {
            for (c, b) in states.iter().enumerate() {
                if a.m1 + a.m2 != b.m1 + b.m2 {
                    assert_eq!(m[(r, c)], 0.0);
                }
            }
        }
    }

    #[test]
    fn negative_omega_is_degenerate() {
        let k = dy_reference_k();
        for omega in [1, 5, 12] {
            for p in Parity::BOTH {
                let a = super::super::adiabatic_coefficients(&build_c6_block(&k, omega, p).unwrap());
                let b = super::super::adiabatic_coefficients(&build_c6_block(&k, -omega, p).unwrap());
                for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
                    assert_relative_eq!(x, y, max_relative = 1e-12);
                }
            }
        }
    }
}
