//! Direct degenerate second-order sum for the dispersion matrix, used to
//! check the closed `K . A` form.
//!
//! Every dipole matrix element is expanded with the Wigner-Eckart theorem
//! and the interaction `d1.d2 - 3 d1z d2z` is evaluated from Cartesian
//! components, so no A-tensor bookkeeping is shared with the closed form.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::dispersion::ATensor;
use crate::angular::{symmetrized_basis, uncoupled_block, wigner3j_f64, PairBasisState, Parity};
use crate::atomdata::{build_k_tensor, reduced_dipole_sq_from_f, TransitionLine};
use crate::error::Result;

/// Relative agreement required between the closed form and the direct sum.
pub const EQUIVALENCE_TOLERANCE: f64 = 1e-10;

/// Elements smaller than this fraction of the block's largest element are
/// compared against that floor instead of their own magnitude.
const RELATIVE_FLOOR: f64 = 1e-4;

/// One excited level with its Cartesian dipole matrix elements from the ground level.
struct ExcitedLevel {
    j: i32,
    energy: f64,
    /// `[component][m + j_ground][ma + j]` for components x, y, z.
    d: [Vec<Vec<Complex64>>; 3],
}

impl ExcitedLevel {
    fn new(j_ground: i32, j: i32, energy: f64, reduced: f64) -> Result<Self> {
        let n_g = (2 * j_ground + 1) as usize;
        let n_e = (2 * j + 1) as usize;
        let zero = vec![vec![Complex64::new(0.0, 0.0); n_e]; n_g];
        let mut d = [zero.clone(), zero.clone(), zero];
        let s2 = std::f64::consts::FRAC_1_SQRT_2;
        for m in -j_ground..=j_ground {
            for ma in -j..=j {
                // <j_g m| d_q |j ma> = (-1)^(j_g - m) (j_g 1 j; -m q ma) <j_g||d||j>
                let sph = |q: i32| -> Result<f64> {
                    if m != ma + q {
                        return Ok(0.0);
                    }
                    let phase = if (j_ground - m).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                    Ok(phase * wigner3j_f64(j_ground, 1, j, -m, q, ma)? * reduced)
                };
                let (dm, d0, dp) = (sph(-1)?, sph(0)?, sph(1)?);
                let (gi, ei) = ((m + j_ground) as usize, (ma + j) as usize);
                d[0][gi][ei] = Complex64::new(s2 * (dm - dp), 0.0);
                d[1][gi][ei] = Complex64::new(0.0, s2 * (dm + dp));
                d[2][gi][ei] = Complex64::new(d0, 0.0);
            }
        }
        Ok(Self { j, energy, d })
    }

    fn elem(&self, c: usize, j_ground: i32, m: i32, ma: i32) -> Complex64 {
        self.d[c][(m + j_ground) as usize][(ma + self.j) as usize]
    }
}

/// `<m1 m2 | d1.d2 - 3 d1z d2z | a ma, b mb>`.
fn vdd(j_g: i32, a: &ExcitedLevel, b: &ExcitedLevel, g: PairBasisState, ma: i32, mb: i32) -> Complex64 {
    let x = a.elem(0, j_g, g.m1, ma) * b.elem(0, j_g, g.m2, mb);
    let y = a.elem(1, j_g, g.m1, ma) * b.elem(1, j_g, g.m2, mb);
    let z = a.elem(2, j_g, g.m1, ma) * b.elem(2, j_g, g.m2, mb);
    x + y - 2.0 * z
}

/// Direct second-order C6 matrix on the given uncoupled states,
/// `C6 = sum_n <g|V|n><n|V|g'> / (dE_a + dE_b)` with `U = -C6/R^6`.
pub fn direct_c6_uncoupled(lines: &[TransitionLine], j_ground: u32, states: &[PairBasisState]) -> Result<DMatrix<f64>> {
    let jg = j_ground as i32;
    let levels: Vec<ExcitedLevel> = lines
        .iter()
        .map(|l| {
            let d2 = reduced_dipole_sq_from_f(l, j_ground)?;
            ExcitedLevel::new(jg, l.excited_j as i32, l.energy, d2.sqrt())
        })
        .collect::<Result<_>>()?;
    let n = states.len();
    let mut out = DMatrix::zeros(n, n);
    for a in &levels {
        for b in &levels {
            let denom = a.energy + b.energy;
            for ma in -a.j..=a.j {
                for mb in -b.j..=b.j {
                    let amps: Vec<Complex64> = states.iter().map(|&g| vdd(jg, a, b, g, ma, mb)).collect();
                    if amps.iter().all(|z| z.norm_sqr() == 0.0) {
                        continue;
                    }
                    for r in 0..n {
                        for c in 0..n {
                            // <n|V|g'> = conj(<g'|V|n>) for Hermitian V
                            out[(r, c)] += (amps[r] * amps[c].conj()).re / denom;
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlockDeviation {
    pub omega: i32,
    pub parity: Parity,
    pub dimension: usize,
    /// Closed form (projection-conserving A) against the direct sum.
    pub max_rel_deviation: f64,
    /// Closed form with independent `ma`, `mb` sums against the direct sum.
    pub unconstrained_max_rel_deviation: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub blocks: Vec<BlockDeviation>,
    pub max_rel_deviation: f64,
    pub unconstrained_max_rel_deviation: f64,
    pub tolerance: f64,
    pub agrees: bool,
    pub note: String,
}

fn rel_deviation(closed: &DMatrix<f64>, direct: &DMatrix<f64>) -> f64 {
    let scale = direct.amax();
    closed
        .iter()
        .zip(direct.iter())
        .map(|(&c, &d)| {
            let diff = (c - d).abs();
            if diff == 0.0 {
                0.0
            } else {
                diff / d.abs().max(RELATIVE_FLOOR * scale).max(f64::MIN_POSITIVE)
            }
        })
        .fold(0.0, f64::max)
}

/// Compares the closed `K . A` dispersion matrix with the direct
/// second-order sum for every (Omega, parity) block, Omega in `[-2j, 2j]`.
/// The direct sum is authoritative.
pub fn validate_c6_equivalence(lines: &[TransitionLine], j_ground: u32) -> Result<EquivalenceReport> {
    let k = build_k_tensor(lines, j_ground)?;
    let table = ATensor::new(j_ground)?;
    let jg = 2 * j_ground as i32;
    let mut blocks = Vec::new();
    for omega in -jg..=jg {
        let states = uncoupled_block(j_ground, omega)?;
        let direct = direct_c6_uncoupled(lines, j_ground, &states)?;
        let closed = table.c6_uncoupled(&k, &states, false);
        let literal = table.c6_uncoupled(&k, &states, true);
        for parity in Parity::BOTH {
            let basis = symmetrized_basis(j_ground, omega, parity)?;
            if basis.states.is_empty() {
                continue;
            }
            let d = basis.project(&direct);
            blocks.push(BlockDeviation {
                omega,
                parity,
                dimension: basis.states.len(),
                max_rel_deviation: rel_deviation(&basis.project(&closed), &d),
                unconstrained_max_rel_deviation: rel_deviation(&basis.project(&literal), &d),
            });
        }
    }
    let max_rel_deviation = blocks.iter().map(|b| b.max_rel_deviation).fold(0.0, f64::max);
    let unconstrained = blocks
        .iter()
        .map(|b| b.unconstrained_max_rel_deviation)
        .fold(0.0, f64::max);
    let agrees = max_rel_deviation <= EQUIVALENCE_TOLERANCE;
    let note = if agrees {
        "closed form with (1+delta_{m1,ma})(1+delta_{m1',ma}) weights and ma+mb = m1+m2 \
         reproduces the direct sum"
            .to_string()
    } else {
        format!(
            "closed form deviates from the direct sum by {max_rel_deviation:.3e}; check the \
             (1+delta_{{m1,ma}})(1+delta_{{m1',ma}}) prefactors and the ma+mb = m1+m2 constraint"
        )
    };
    Ok(EquivalenceReport {
        blocks,
        max_rel_deviation,
        unconstrained_max_rel_deviation: unconstrained,
        tolerance: EQUIVALENCE_TOLERANCE,
        agrees,
        note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_lines() -> Vec<TransitionLine> {
        vec![
            TransitionLine::with_f(7, 0.081, 0.31),
            TransitionLine::with_f(8, 0.097, 0.52),
            TransitionLine::with_f(9, 0.118, 0.24),
        ]
    }

    #[test]
    fn single_line_agrees() {
        let r = validate_c6_equivalence(&[TransitionLine::with_dipole_sq(9, 0.1, 12.0)], 8).unwrap();
        assert!(r.agrees, "{}", r.max_rel_deviation);
        assert_eq!(r.blocks.len(), 64);
    }

    #[test]
    fn toy_list_agrees_block_by_block() {
        let r = validate_c6_equivalence(&toy_lines(), 8).unwrap();
        for b in &r.blocks {
            assert!(b.max_rel_deviation < 1e-10, "{b:?}");
        }
        // the unconstrained reading picks up intermediate states of the wrong Omega
        assert!(r.unconstrained_max_rel_deviation > 1e-3);
    }

    #[test]
    fn zero_strength_gives_zero() {
        let lines = vec![TransitionLine::with_f(8, 0.1, 0.0), TransitionLine::with_f(9, 0.2, 0.0)];
        let r = validate_c6_equivalence(&lines, 8).unwrap();
        assert!(r.agrees);
        assert_eq!(r.max_rel_deviation, 0.0);
        let states = uncoupled_block(8, 3).unwrap();
        assert_eq!(direct_c6_uncoupled(&lines, 8, &states).unwrap().amax(), 0.0);
    }

    #[test]
    fn small_j_agrees() {
        let lines = vec![TransitionLine::with_dipole_sq(0, 0.2, 1.0), TransitionLine::with_dipole_sq(2, 0.3, 2.0)];
        let r = validate_c6_equivalence(&lines, 1).unwrap();
        assert!(r.agrees, "{}", r.max_rel_deviation);
    }
}
