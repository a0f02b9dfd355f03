//! Ground states of the nonlinear Schrödinger equation with power nonlinearity
//! `beta |phi|^{2 sigma} phi`, together with the asymptotic regimes used to
//! check them.

pub mod asym_box;
pub mod asym_harmonic;
pub mod domain;
pub mod error;
pub mod gflow;
pub mod linalg;
pub mod quad;
pub mod regimes;
pub mod special;

pub use domain::{
    chemical_potential, eigen_residual, energy, quad_norm_sq, Axis, Grid, GroundStateResult,
    Params, PotentialSpec, WaveFunction,
};
pub use error::{Error, Result};
pub use gflow::{befd_step, continuation_sweep, solve_ground_state, FlowConfig};
