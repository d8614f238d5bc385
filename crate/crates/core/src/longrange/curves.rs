use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{sorted_eigen, OmegaBlock, Parity};
use crate::error::{Error, Result};

/// Adiabatic potentials of `-C6/R^6 - C3/R^3` on an R grid, each curve
/// followed continuously through eigenvector overlaps.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PotentialCurveSet {
    pub omega: i32,
    pub parity: Parity,
    pub r_grid: Vec<f64>,
    /// `curves[label][i]` is the energy (Hartree) of adiabat `label` at `r_grid[i]`.
    /// Labels follow energy order at the first grid point.
    pub curves: Vec<Vec<f64>>,
    /// Smallest overlap used for an assignment between neighbouring points.
    pub min_tracking_overlap: f64,
}

impl PotentialCurveSet {
    pub fn n_curves(&self) -> usize {
        self.curves.len()
    }

    /// Energies at grid index `i`, ascending.
    pub fn sorted_at(&self, i: usize) -> Vec<f64> {
        let mut v: Vec<f64> = self.curves.iter().map(|c| c[i]).collect();
        v.sort_by(f64::total_cmp);
        v
    }
}

/// Squared overlaps `|<prev_i|next_k>|^2` between two eigenvector sets (columns).
pub fn overlap_matrix(prev: &DMatrix<f64>, next: &DMatrix<f64>) -> DMatrix<f64> {
    (prev.transpose() * next).map(|x| x * x)
}

/// Greedy maximal-overlap assignment; returns `assign[label] = new column`.
fn assign(overlaps: &DMatrix<f64>) -> (Vec<usize>, f64) {
    let n = overlaps.nrows();
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |k| (i, k))).collect();
    // ties fall back to energy order of the new eigenvalues, then label order
    pairs.sort_by(|&(i, k), &(i2, k2)| {
        overlaps[(i2, k2)]
            .total_cmp(&overlaps[(i, k)])
            .then(k.cmp(&k2))
            .then(i.cmp(&i2))
    });
    let mut assignment = vec![usize::MAX; n];
    let mut taken = vec![false; n];
    let mut worst = 1.0f64;
    for (i, k) in pairs {
        if assignment[i] == usize::MAX && !taken[k] {
            assignment[i] = k;
            taken[k] = true;
            worst = worst.min(overlaps[(i, k)]);
        }
    }
    (assignment, worst)
}

pub fn combined_adiabats(c6: &OmegaBlock, c3: &OmegaBlock, r_grid: &[f64]) -> Result<PotentialCurveSet> {
    if c6.omega != c3.omega || c6.parity != c3.parity || c6.dim() != c3.dim() {
        return Err(Error::domain("C6 and C3 blocks belong to different (Omega, parity) sectors"));
    }
    if c6.r_power != 6 || c3.r_power != 3 {
        return Err(Error::domain("expected an R^-6 block and an R^-3 block"));
    }
    if let Some(&r) = r_grid.iter().find(|&&r| !(r > 0.0)) {
        return Err(Error::domain(format!("R grid contains non-positive radius {r}")));
    }
    if r_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain("R grid must be strictly increasing"));
    }
    let n = c6.dim();
    let mut curves = vec![Vec::with_capacity(r_grid.len()); n];
    let mut prev: Option<DMatrix<f64>> = None;
    let mut min_overlap = 1.0f64;
    for &r in r_grid {
        let h = -&c6.matrix / r.powi(6) - &c3.matrix / r.powi(3);
        let (values, vectors) = sorted_eigen(&h);
        let ordered = match &prev {
            None => vectors,
            Some(p) => {
                let (map, worst) = assign(&overlap_matrix(p, &vectors));
                min_overlap = min_overlap.min(worst);
                let mut reordered = DMatrix::zeros(n, n);
                for (label, &k) in map.iter().enumerate() {
                    curves[label].push(values[k]);
                    let mut v = vectors.column(k).clone_owned();
                    // keep the sign continuous
                    if v.dot(&p.column(label)) < 0.0 {
                        v.neg_mut();
                    }
                    reordered.set_column(label, &v);
                }
                prev = Some(reordered);
                continue;
            }
        };
        for (label, &e) in values.iter().enumerate() {
            curves[label].push(e);
        }
        prev = Some(ordered);
    }
    Ok(PotentialCurveSet {
        omega: c6.omega,
        parity: c6.parity,
        r_grid: r_grid.to_vec(),
        curves,
        min_tracking_overlap: min_overlap,
    })
}
