use super::grid::Grid;
use crate::error::{Error, Result};

/// Real samples of `phi` at the interior nodes of a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveFunction {
    grid: Grid,
    values: Vec<f64>,
    normalized: bool,
}

impl WaveFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidInput(format!(
                "{} values for {} grid nodes",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("wave function has non-finite entries".into()));
        }
        Ok(Self {
            grid,
            values,
            normalized: false,
        })
    }

    pub fn from_fn<F: Fn(&[f64]) -> f64>(grid: Grid, f: F) -> Result<Self> {
        let values = grid.sample(f);
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// True when the values were last rescaled to unit quadrature norm.
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm_sq(&self) -> f64 {
        self.grid.cell_volume() * self.values.iter().map(|v| v * v).sum::<f64>()
    }

    /// Rescales to unit quadrature norm.
    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm_sq().sqrt();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::InvalidInput("cannot normalize a zero wave function".into()));
        }
        self.values.iter_mut().for_each(|v| *v /= n);
        self.normalized = true;
        Ok(self)
    }

    pub(crate) fn from_normalized(grid: Grid, values: Vec<f64>) -> Self {
        Self {
            grid,
            values,
            normalized: true,
        }
    }

    /// Flips the overall sign so the largest-magnitude node is positive.
    pub fn sign_fixed(mut self) -> Self {
        if let Some(i) = self.argmax_abs() {
            if self.values[i] < 0.0 {
                self.values.iter_mut().for_each(|v| *v = -*v);
            }
        }
        self
    }

    pub fn argmax_abs(&self) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (i, v) in self.values.iter().enumerate() {
            if best.map_or(true, |(_, b)| v.abs() > b) {
                best = Some((i, v.abs()));
            }
        }
        best.map(|(i, _)| i)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest pointwise deviation from the mirror image through the grid center.
    pub fn asymmetry(&self) -> f64 {
        (0..self.values.len())
            .map(|i| (self.values[i] - self.values[self.grid.reflect(i)]).abs())
            .fold(0.0, f64::max)
    }
}
