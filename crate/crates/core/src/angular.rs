//! Exact angular-momentum algebra.
//!
//! Wigner 3-j and Clebsch-Gordan coefficients are evaluated with the Racah
//! sum in arbitrary-precision rationals. Every such coefficient has the form
//! `sign * sqrt(r)` with `r` rational, which is what [`ExactValue`] stores;
//! conversion to `f64` happens only at the boundary.

use std::fmt;
use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Angular momentum quantum number stored as `2j`, so half-integers are exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AngularMomentum {
    two_j: u32,
}

impl AngularMomentum {
    pub const fn from_two_j(two_j: u32) -> Self {
        Self { two_j }
    }

    pub const fn integer(j: u32) -> Self {
        Self { two_j: 2 * j }
    }

    pub const fn two_j(self) -> u32 {
        self.two_j
    }

    pub fn value(self) -> f64 {
        self.two_j as f64 / 2.0
    }

    /// Checks that `two_m` is an allowed projection of this angular momentum.
    pub fn check_projection(self, two_m: i32) -> Result<()> {
        if two_m.unsigned_abs() > self.two_j {
            return Err(Error::domain(format!(
                "|m| = {}/2 exceeds j = {}/2",
                two_m.unsigned_abs(),
                self.two_j
            )));
        }
        if (two_m - self.two_j as i32).rem_euclid(2) != 0 {
            return Err(Error::domain(format!(
                "projection {two_m}/2 has the wrong parity for j = {}/2",
                self.two_j
            )));
        }
        Ok(())
    }
}

/// Exact value `sign * sqrt(square)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactValue {
    sign: i8,
    square: BigRational,
}

impl ExactValue {
    pub fn zero() -> Self {
        Self { sign: 0, square: BigRational::zero() }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// The rational number whose square root is `|self|`.
    pub fn square(&self) -> &BigRational {
        &self.square
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            return 0.0;
        }
        let sq = self.square.to_f64().unwrap_or(f64::NAN);
        f64::from(self.sign) * sq.sqrt()
    }

    fn scaled_square(mut self, factor: BigRational) -> Self {
        self.square *= factor;
        self
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => f.write_str("0"),
            s => write!(f, "{}sqrt({})", if s < 0 { "-" } else { "" }, self.square),
        }
    }
}

const FACTORIAL_TABLE_LEN: usize = 256;

fn factorial(n: i64) -> BigInt {
    static TABLE: OnceLock<Vec<BigInt>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(FACTORIAL_TABLE_LEN);
        t.push(BigInt::one());
        for i in 1..FACTORIAL_TABLE_LEN {
            let next = &t[i - 1] * BigInt::from(i);
            t.push(next);
        }
        t
    });
    debug_assert!(n >= 0);
    let n = n as usize;
    if n < table.len() {
        table[n].clone()
    } else {
        (table.len()..=n).fold(table[table.len() - 1].clone(), |acc, i| acc * BigInt::from(i))
    }
}

fn half(twice: i64) -> i64 {
    debug_assert!(twice % 2 == 0);
    twice / 2
}

/// Wigner 3-j symbol `(j1 j2 j3; m1 m2 m3)` with projections given as `2m`.
///
/// Returns zero when the projections do not sum to zero or the triangle
/// condition fails. Projections that are not allowed for their `j` are a
/// domain error.
pub fn wigner3j(j: [AngularMomentum; 3], two_m: [i32; 3]) -> Result<ExactValue> {
    for (ji, &mi) in j.iter().zip(two_m.iter()) {
        ji.check_projection(mi)?;
    }
    if two_m.iter().sum::<i32>() != 0 {
        return Ok(ExactValue::zero());
    }
    let [tj1, tj2, tj3] = j.map(|x| x.two_j as i64);
    let [tm1, tm2, tm3] = two_m.map(i64::from);

    let a = tj1 + tj2 - tj3;
    let b = tj1 - tj2 + tj3;
    let c = -tj1 + tj2 + tj3;
    if a < 0 || b < 0 || c < 0 {
        return Ok(ExactValue::zero());
    }
    let (a, b, c) = (half(a), half(b), half(c));
    let jsum = half(tj1 + tj2 + tj3);

    let j1pm1 = half(tj1 + tm1);
    let j1mm1 = half(tj1 - tm1);
    let j2pm2 = half(tj2 + tm2);
    let j2mm2 = half(tj2 - tm2);
    let j3pm3 = half(tj3 + tm3);
    let j3mm3 = half(tj3 - tm3);

    // Racah sum
    let t1 = half(tj3 - tj2 + tm1); // j3 - j2 + m1
    let t2 = half(tj3 - tj1 - tm2); // j3 - j1 - m2
    let kmin = 0.max(-t1).max(-t2);
    let kmax = a.min(j1mm1).min(j2pm2);
    let mut sum = BigRational::zero();
    for k in kmin..=kmax {
        let denom = factorial(k)
            * factorial(a - k)
            * factorial(j1mm1 - k)
            * factorial(j2pm2 - k)
            * factorial(t1 + k)
            * factorial(t2 + k);
        let term = BigRational::new(BigInt::one(), denom);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return Ok(ExactValue::zero());
    }

    let triangle = BigRational::new(
        factorial(a) * factorial(b) * factorial(c),
        factorial(jsum + 1),
    );
    let projections = factorial(j1pm1)
        * factorial(j1mm1)
        * factorial(j2pm2)
        * factorial(j2mm2)
        * factorial(j3pm3)
        * factorial(j3mm3);

    let phase = half(tj1 - tj2 - tm3);
    let mut sign: i8 = if phase.rem_euclid(2) == 0 { 1 } else { -1 };
    if sum.is_negative() {
        sign = -sign;
    }
    let square = triangle * BigRational::from_integer(projections) * &sum * &sum;
    Ok(ExactValue { sign, square })
}

/// Clebsch-Gordan coefficient `<j1 m1; j2 m2 | J M>`, projections as `2m`.
pub fn clebsch_gordan(
    j1: AngularMomentum,
    two_m1: i32,
    j2: AngularMomentum,
    two_m2: i32,
    big_j: AngularMomentum,
    two_big_m: i32,
) -> Result<ExactValue> {
    big_j.check_projection(two_big_m)?;
    let w = wigner3j([j1, j2, big_j], [two_m1, two_m2, -two_big_m])?;
    if w.is_zero() {
        return Ok(w);
    }
    let phase = (j1.two_j as i64 - j2.two_j as i64 + two_big_m as i64) / 2;
    let sign = if phase.rem_euclid(2) == 0 { w.sign } else { -w.sign };
    let w = ExactValue { sign, ..w };
    Ok(w.scaled_square(BigRational::from_integer(BigInt::from(big_j.two_j + 1))))
}

/// Integer-argument shorthand for [`wigner3j`] returning `f64`.
pub fn wigner3j_f64(j1: i32, j2: i32, j3: i32, m1: i32, m2: i32, m3: i32) -> Result<f64> {
    let j = [j1, j2, j3].map(|x| {
        u32::try_from(x)
            .map(AngularMomentum::integer)
            .map_err(|_| Error::domain(format!("negative angular momentum {x}")))
    });
    let [a, b, c] = j;
    Ok(wigner3j([a?, b?, c?], [2 * m1, 2 * m2, 2 * m3])?.to_f64())
}

/// Integer-argument shorthand for [`clebsch_gordan`] returning `f64`.
pub fn clebsch_gordan_f64(j1: u32, m1: i32, j2: u32, m2: i32, big_j: u32, big_m: i32) -> Result<f64> {
    Ok(clebsch_gordan(
        AngularMomentum::integer(j1),
        2 * m1,
        AngularMomentum::integer(j2),
        2 * m2,
        AngularMomentum::integer(big_j),
        2 * big_m,
    )?
    .to_f64())
}

/// Exchange symmetry of a two-atom state: gerade for even total J.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parity {
    Gerade,
    Ungerade,
}

impl Parity {
    pub const BOTH: [Parity; 2] = [Parity::Gerade, Parity::Ungerade];

    pub fn of_total_j(j_total: u32) -> Self {
        if j_total.is_multiple_of(2) {
            Parity::Gerade
        } else {
            Parity::Ungerade
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Parity::Gerade => "g",
            Parity::Ungerade => "u",
        }
    }

    pub fn admits(self, j_total: u32) -> bool {
        Parity::of_total_j(j_total) == self
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "g" | "gerade" => Ok(Parity::Gerade),
            "u" | "ungerade" => Ok(Parity::Ungerade),
            other => Err(Error::Config(format!("unknown symmetry `{other}`"))),
        }
    }
}

/// Uncoupled pair state `|j m1, j m2>` with projections on the internuclear axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairBasisState {
    pub m1: i32,
    pub m2: i32,
}

/// Coupled pair state `|(j j) J Omega>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoupledState {
    pub j_total: u32,
    pub omega: i32,
    pub parity: Parity,
}

impl CoupledState {
    /// Reflection label `+`/`-` for Omega = 0 states: sigma_v acts as (-1)^J.
    pub fn reflection(&self) -> Option<char> {
        (self.omega == 0).then(|| if self.j_total.is_multiple_of(2) { '+' } else { '-' })
    }
}

/// States of the `m1 + m2 = omega` block for two atoms of angular momentum `j`,
/// ordered by descending `m1`.
pub fn uncoupled_block(j: u32, omega: i32) -> Result<Vec<PairBasisState>> {
    let j = j as i32;
    if omega.abs() > 2 * j {
        return Err(Error::domain(format!("|Omega| = {} exceeds {}", omega.abs(), 2 * j)));
    }
    let hi = j.min(omega + j);
    let lo = (-j).max(omega - j);
    Ok((lo..=hi).rev().map(|m1| PairBasisState { m1, m2: omega - m1 }).collect())
}

/// Total-J states of one exchange symmetry and the transform into them.
#[derive(Debug, Clone)]
pub struct SymmetrizedBasis {
    pub omega: i32,
    pub parity: Parity,
    pub states: Vec<CoupledState>,
    pub uncoupled: Vec<PairBasisState>,
    /// Rows are coupled states, columns uncoupled states; entries are CG coefficients.
    pub transform: DMatrix<f64>,
}

impl SymmetrizedBasis {
    /// Transforms an operator from the uncoupled block into this basis.
    pub fn project(&self, uncoupled: &DMatrix<f64>) -> DMatrix<f64> {
        &self.transform * uncoupled * self.transform.transpose()
    }
}

pub fn symmetrized_basis(j: u32, omega: i32, parity: Parity) -> Result<SymmetrizedBasis> {
    let uncoupled = uncoupled_block(j, omega)?;
    let states: Vec<CoupledState> = (omega.unsigned_abs()..=2 * j)
        .filter(|&jt| parity.admits(jt))
        .map(|j_total| CoupledState { j_total, omega, parity })
        .collect();
    let mut transform = DMatrix::zeros(states.len(), uncoupled.len());
    for (row, s) in states.iter().enumerate() {
        for (col, p) in uncoupled.iter().enumerate() {
            transform[(row, col)] = clebsch_gordan_f64(j, p.m1, j, p.m2, s.j_total, omega)?;
        }
    }
    Ok(SymmetrizedBasis { omega, parity, states, uncoupled, transform })
}

/// Number of distinct gerade and ungerade potentials, counting Omega >= 0.
pub fn potential_census(j: u32) -> (usize, usize) {
    let mut g = 0;
    let mut u = 0;
    for omega in 0..=2 * j {
        for jt in omega..=2 * j {
            match Parity::of_total_j(jt) {
                Parity::Gerade => g += 1,
                Parity::Ungerade => u += 1,
            }
        }
    }
    (g, u)
}
