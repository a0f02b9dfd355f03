//! Grids, potentials, wave functions and the discrete energy functionals.

mod functional;
mod grid;
mod potential;
mod wave;

pub use functional::{
    abs_pow, chemical_potential, eigen_residual, energy, h1_distance, neg_half_laplacian,
    quad_norm_sq, Hamiltonian,
};
pub use grid::{Axis, Grid};
pub use potential::PotentialSpec;
pub use wave::WaveFunction;

use crate::error::{Error, Result};

/// Interaction strength `beta` and nonlinearity power `sigma`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Params {
    pub beta: f64,
    pub sigma: f64,
}

impl Params {
    pub fn new(beta: f64, sigma: f64) -> Result<Self> {
        let p = Self { beta, sigma };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.beta.is_finite() {
            return Err(Error::InvalidParams(format!("beta must be finite, got {}", self.beta)));
        }
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "sigma must be finite and nonnegative, got {}",
                self.sigma
            )));
        }
        Ok(())
    }
}

/// Output of a ground-state solve.
#[derive(Clone, Debug)]
pub struct GroundStateResult {
    pub phi: WaveFunction,
    pub energy: f64,
    pub mu: f64,
    /// Quadrature L2 norm of the eigen-residual at `mu`.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}
