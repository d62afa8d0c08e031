//! Toda lattice toolkit: deterministic flow in three equivalent forms,
//! structure-preserving multiplicative noise, isospectral stochastic
//! deformation, double-bracket dissipation, the continuum stochastic PDE
//! limit, and a seeded Monte Carlo harness.

pub mod error;
pub mod matrix;
pub mod lattice;
pub mod integrate;
pub mod noise;
pub mod stochastic;
pub mod dissipative;
pub mod continuum;
pub mod ensemble;
pub mod config;
pub mod runner;

#[cfg(test)]
pub(crate) mod test_util;
