use super::grid::Grid;
use crate::error::{Error, Result};

/// External potential `V(x)`.
#[derive(Clone, Debug, PartialEq)]
pub enum PotentialSpec {
    /// `sum_j gamma_j^2 x_j^2 / 2`. A single frequency is broadcast to every direction.
    Harmonic { gamma: Vec<f64> },
    /// `V = 0` inside the computational box; the box walls are the grid boundary.
    Box,
    /// Harmonic trap plus `amplitude * sum_j sin^2(wavenumber * pi * x_j)`.
    Lattice {
        gamma: Vec<f64>,
        amplitude: f64,
        wavenumber: f64,
    },
    /// Values sampled at the grid nodes, in storage order.
    Custom(Vec<f64>),
}

impl PotentialSpec {
    pub fn harmonic(gamma: f64) -> Self {
        PotentialSpec::Harmonic { gamma: vec![gamma] }
    }

    pub fn anisotropic(gamma: &[f64]) -> Self {
        PotentialSpec::Harmonic {
            gamma: gamma.to_vec(),
        }
    }

    pub fn lattice(gamma: f64, amplitude: f64, wavenumber: f64) -> Self {
        PotentialSpec::Lattice {
            gamma: vec![gamma],
            amplitude,
            wavenumber,
        }
    }

    /// Frequency in direction `j`, if the potential has a harmonic part.
    pub fn gamma(&self, j: usize) -> Option<f64> {
        match self {
            PotentialSpec::Harmonic { gamma } | PotentialSpec::Lattice { gamma, .. } => {
                Some(if gamma.len() == 1 { gamma[0] } else { gamma[j] })
            }
            _ => None,
        }
    }

    pub fn validate(&self, grid: &Grid) -> Result<()> {
        let check_gamma = |gamma: &[f64]| -> Result<()> {
            if gamma.len() != 1 && gamma.len() != grid.dim() {
                return Err(Error::InvalidInput(format!(
                    "expected 1 or {} frequencies, got {}",
                    grid.dim(),
                    gamma.len()
                )));
            }
            if gamma.iter().any(|&g| !(g.is_finite() && g > 0.0)) {
                return Err(Error::InvalidInput(
                    "trap frequencies must be positive".into(),
                ));
            }
            Ok(())
        };
        match self {
            PotentialSpec::Harmonic { gamma } => check_gamma(gamma),
            PotentialSpec::Box => Ok(()),
            PotentialSpec::Lattice {
                gamma,
                amplitude,
                wavenumber,
            } => {
                check_gamma(gamma)?;
                if !(amplitude.is_finite() && *amplitude >= 0.0 && wavenumber.is_finite()) {
                    return Err(Error::InvalidInput(
                        "lattice amplitude must be finite and nonnegative".into(),
                    ));
                }
                Ok(())
            }
            PotentialSpec::Custom(values) => {
                if values.len() != grid.len() {
                    return Err(Error::InvalidInput(format!(
                        "custom potential has {} samples for {} grid nodes",
                        values.len(),
                        grid.len()
                    )));
                }
                if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                    return Err(Error::InvalidInput(
                        "potential samples must be finite and nonnegative".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    /// One-directional part `V_j(x)` for separable potentials.
    fn axis_value(&self, j: usize, x: f64) -> f64 {
        match self {
            PotentialSpec::Harmonic { .. } => {
                let g = self.gamma(j).unwrap();
                0.5 * g * g * x * x
            }
            PotentialSpec::Lattice {
                amplitude,
                wavenumber,
                ..
            } => {
                let g = self.gamma(j).unwrap();
                let s = (wavenumber * std::f64::consts::PI * x).sin();
                0.5 * g * g * x * x + amplitude * s * s
            }
            _ => 0.0,
        }
    }

    /// Samples the potential at every grid node.
    pub fn sample(&self, grid: &Grid) -> Result<Vec<f64>> {
        self.validate(grid)?;
        if let PotentialSpec::Custom(values) = self {
            return Ok(values.clone());
        }
        Ok(grid.sample(|x| {
            x.iter()
                .enumerate()
                .map(|(j, &xj)| self.axis_value(j, xj))
                .sum()
        }))
    }

    /// Per-direction samples `V_j` with `V = sum_j V_j`, or `None` when the
    /// potential is not known to separate.
    pub fn separable_parts(&self, grid: &Grid) -> Option<Vec<Vec<f64>>> {
        if let PotentialSpec::Custom(_) = self {
            return None;
        }
        Some(
            grid.axes()
                .iter()
                .enumerate()
                .map(|(j, axis)| axis.coords().iter().map(|&x| self.axis_value(j, x)).collect())
                .collect(),
        )
    }
}
