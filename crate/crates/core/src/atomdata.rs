//! Atomic transition data and the dipole-coupling tensor K.

use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{to_au, Unit};

/// Strength of a ground-to-excited dipole transition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Strength {
    /// Absorption oscillator strength f (lower-level degeneracy convention).
    OscillatorStrength(f64),
    /// |<j_ground||d||n j_excited>|^2 in atomic units.
    ReducedDipoleSquared(f64),
}

impl Strength {
    fn value(self) -> f64 {
        match self {
            Strength::OscillatorStrength(v) | Strength::ReducedDipoleSquared(v) => v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionLine {
    pub excited_j: u32,
    /// Excitation energy above the ground level, Hartree.
    pub energy: f64,
    pub strength: Strength,
    /// 1-based source line, when parsed from a file.
    pub source_line: Option<usize>,
}

impl TransitionLine {
    pub fn with_f(excited_j: u32, energy: f64, f: f64) -> Self {
        Self { excited_j, energy, strength: Strength::OscillatorStrength(f), source_line: None }
    }

    pub fn with_dipole_sq(excited_j: u32, energy: f64, d_sq: f64) -> Self {
        Self { excited_j, energy, strength: Strength::ReducedDipoleSquared(d_sq), source_line: None }
    }

    fn validate(&self, j_ground: u32) -> Result<()> {
        let line = self.source_line.unwrap_or(0);
        let invalid = |message: String| Err(Error::Validation { line, message });
        if !(self.energy > 0.0) {
            return invalid(format!("excitation energy must be positive, got {}", self.energy));
        }
        let s = self.strength.value();
        if !(s >= 0.0) || !s.is_finite() {
            return invalid(format!("strength must be non-negative, got {s}"));
        }
        if !dipole_allowed(j_ground, self.excited_j) {
            return invalid(format!(
                "j = {} is not dipole-connected to ground j = {j_ground}",
                self.excited_j
            ));
        }
        Ok(())
    }
}

fn dipole_allowed(j_ground: u32, j_excited: u32) -> bool {
    j_ground.abs_diff(j_excited) <= 1 && j_ground + j_excited >= 1
}

/// Parses a whitespace-separated line list: `excited_j  energy_cm^-1  f_value`.
///
/// Lines starting with `#` and blank lines are skipped; anything after a `#`
/// is a trailing comment.
pub fn parse_linelist<R: BufRead>(source: R, j_ground: u32) -> Result<Vec<TransitionLine>> {
    let mut lines = Vec::new();
    for (idx, raw) in source.lines().enumerate() {
        let lineno = idx + 1;
        let raw = raw?;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let cols: Vec<&str> = content.split_whitespace().collect();
        if cols.len() != 3 {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected 3 columns, found {}", cols.len()),
            });
        }
        let parse_err = |what: &str, tok: &str| Error::Parse {
            line: lineno,
            message: format!("invalid {what} `{tok}`"),
        };
        let excited_j: i64 = cols[0].parse().map_err(|_| parse_err("excited_j", cols[0]))?;
        let energy_cm: f64 = cols[1].parse().map_err(|_| parse_err("energy", cols[1]))?;
        let f: f64 = cols[2].parse().map_err(|_| parse_err("f-value", cols[2]))?;
        let excited_j = u32::try_from(excited_j).map_err(|_| Error::Validation {
            line: lineno,
            message: format!("negative excited_j {excited_j}"),
        })?;
        let line = TransitionLine {
            excited_j,
            energy: to_au(energy_cm, Unit::InverseCm).map_err(|_| parse_err("energy", cols[1]))?,
            strength: Strength::OscillatorStrength(f),
            source_line: Some(lineno),
        };
        line.validate(j_ground)?;
        lines.push(line);
    }
    Ok(lines)
}

pub fn parse_linelist_str(text: &str, j_ground: u32) -> Result<Vec<TransitionLine>> {
    parse_linelist(text.as_bytes(), j_ground)
}

/// `|<j_ground||d||n j_excited>|^2 = (3/2)(2 j_ground + 1) f / dE` in atomic units.
pub fn reduced_dipole_sq_from_f(line: &TransitionLine, j_ground: u32) -> Result<f64> {
    match line.strength {
        Strength::ReducedDipoleSquared(d2) => Ok(d2),
        Strength::OscillatorStrength(f) => {
            if line.energy == 0.0 {
                return Err(Error::domain("zero transition energy"));
            }
            Ok(1.5 * f64::from(2 * j_ground + 1) * f / line.energy)
        }
    }
}

/// Symmetric 3x3 table K[ja][jb], ja, jb in {j-1, j, j+1}, atomic units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KTensor {
    pub j_ground: u32,
    pub values: [[f64; 3]; 3],
}

impl KTensor {
    pub fn excited_js(&self) -> [u32; 3] {
        [self.j_ground - 1, self.j_ground, self.j_ground + 1]
    }

    fn index(&self, j: u32) -> Option<usize> {
        let lo = self.j_ground.checked_sub(1)?;
        (j >= lo && j <= self.j_ground + 1).then(|| (j - lo) as usize)
    }

    /// K for excited levels `ja`, `jb`; zero for levels not dipole-connected.
    pub fn get(&self, ja: u32, jb: u32) -> f64 {
        match (self.index(ja), self.index(jb)) {
            (Some(a), Some(b)) => self.values[a][b],
            _ => 0.0,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        (0..3).all(|a| (0..3).all(|b| self.values[a][b] == self.values[b][a]))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().flatten().for_each(|v| *v *= factor);
        out
    }
}

pub fn build_k_tensor(lines: &[TransitionLine], j_ground: u32) -> Result<KTensor> {
    if lines.is_empty() {
        return Err(Error::domain("K tensor needs at least one transition line"));
    }
    if j_ground == 0 {
        return Err(Error::domain("ground level must have j >= 1"));
    }
    let mut prepared = Vec::with_capacity(lines.len());
    for l in lines {
        l.validate(j_ground)?;
        prepared.push((l.excited_j, l.energy, reduced_dipole_sq_from_f(l, j_ground)?));
    }
    let mut k = KTensor { j_ground, values: [[0.0; 3]; 3] };
    let js = k.excited_js();
    for a in 0..3 {
        for b in a..3 {
            let mut sum = 0.0;
            for &(ja, ea, da) in prepared.iter().filter(|p| p.0 == js[a]) {
                for &(_, eb, db) in prepared.iter().filter(|p| p.0 == js[b]) {
                    debug_assert_eq!(ja, js[a]);
                    sum += da * db / (ea + eb);
                }
            }
            k.values[a][b] = sum;
            k.values[b][a] = sum;
        }
    }
    Ok(k)
}

/// Reference K for two Dy 5I8 atoms (j = 8), atomic units.
///
/// The source data give (8,7) as 81313.662 against 81313.663 for (7,8); the
/// upper-triangle value is used for both.
pub fn dy_reference_k() -> KTensor {
    const K77: f64 = 71528.597;
    const K78: f64 = 81313.663;
    const K79: f64 = 88173.833;
    const K88: f64 = 92438.922;
    const K89: f64 = 100240.311;
    const K99: f64 = 108705.654;
    KTensor {
        j_ground: 8,
        values: [[K77, K78, K79], [K78, K88, K89], [K79, K89, K99]],
    }
}
