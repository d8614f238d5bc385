//! Long-range interactions between two ground-state open-shell atoms
//! (dispersion, magnetic dipole-dipole, quadrupole-quadrupole) and
//! first-estimate inelastic loss rates from a universal single-channel model
//! and a Born dipolar-relaxation model.
//!
//! Everything is computed in Hartree atomic units; see [`units`] for the
//! conversions used at the edges.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod angular;
pub mod atomdata;
pub mod config;
pub mod error;
pub mod longrange;
pub mod output;
pub mod report;
pub mod scales;
pub mod scattering;
pub mod units;

pub use error::{Error, Result};

/// Order-preserving map that runs in parallel when the `parallel` feature is on.
#[cfg(feature = "parallel")]
pub(crate) fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}
