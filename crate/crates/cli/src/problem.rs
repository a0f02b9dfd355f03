//! Grids, potentials and flow settings assembled from command-line options.

use crate::args::{PotentialKind, ProblemArgs};
use crate::error::CliError;
use nlse_core::asym_box::{box_tf_estimate, box_weak_estimate, matched_asymptotic};
use nlse_core::asym_harmonic::{tf_estimate, weak_beta_estimate};
use nlse_core::gflow::default_half_width;
use nlse_core::{FlowConfig, Grid, Params, PotentialSpec};

#[derive(Clone, Debug)]
pub struct Problem {
    pub grid: Grid,
    pub potential: PotentialSpec,
    pub cfg: FlowConfig,
    /// Box lengths, one per direction, for box problems.
    pub lengths: Option<Vec<f64>>,
}

fn per_direction(name: &str, v: &[f64], dim: usize) -> Result<Vec<f64>, CliError> {
    match v.len() {
        1 => Ok(vec![v[0]; dim]),
        n if n == dim => Ok(v.to_vec()),
        n => Err(CliError::Usage(format!("--{name} takes 1 or {dim} values, got {n}"))),
    }
}

pub fn flow_config(a: &ProblemArgs) -> Result<FlowConfig, CliError> {
    let cfg = FlowConfig {
        dt: a.dt,
        tol: a.tol,
        max_iters: a.max_iters,
        ..Default::default()
    };
    cfg.validate()?;
    Ok(cfg)
}

impl ProblemArgs {
    pub fn default_n(&self) -> usize {
        self.n.unwrap_or(if self.dim == 1 { 511 } else { 129 })
    }

    /// `strongest` sizes the default trap domain so the Thomas-Fermi support fits.
    pub fn build(&self, strongest: &Params) -> Result<Problem, CliError> {
        let d = self.dim as usize;
        let n = self.default_n();
        let cfg = flow_config(self)?;
        let (grid, potential, lengths) = match self.potential {
            PotentialKind::Box => {
                let l = per_direction("length", &self.length, d)?;
                (Grid::boxed(&l, n)?, PotentialSpec::Box, Some(l))
            }
            kind => {
                let g = per_direction("gamma", &self.gamma, d)?;
                let potential = if kind == PotentialKind::Lattice {
                    PotentialSpec::Lattice {
                        gamma: g.clone(),
                        amplitude: self.amplitude,
                        wavenumber: self.wavenumber,
                    }
                } else {
                    PotentialSpec::Harmonic { gamma: g.clone() }
                };
                let gmin = g.iter().cloned().fold(f64::INFINITY, f64::min);
                if !(gmin.is_finite() && gmin > 0.0) {
                    return Err(CliError::Usage("--gamma must be positive".into()));
                }
                let half = match self.half_width {
                    Some(h) => h,
                    None => default_half_width(d, gmin, strongest),
                };
                (Grid::centered(d, half, n)?, potential, None)
            }
        };
        potential.validate(&grid)?;
        Ok(Problem {
            grid,
            potential,
            cfg,
            lengths,
        })
    }
}

impl Problem {
    /// Names of the asymptotic estimates available for this problem.
    pub fn estimate_names(&self) -> Vec<&'static str> {
        match (&self.potential, &self.lengths) {
            (PotentialSpec::Box, Some(_)) => {
                vec!["E_weak", "mu_weak", "E_TF", "mu_TF", "E_MA", "mu_MA"]
            }
            (PotentialSpec::Harmonic { gamma }, _) if gamma.windows(2).all(|w| w[0] == w[1]) => {
                vec!["E_weak", "mu_weak", "E_TF", "mu_TF"]
            }
            _ => Vec::new(),
        }
    }

    /// Estimates in the order of [`Problem::estimate_names`]; NaN where an
    /// estimate is outside its regime.
    pub fn estimates(&self, p: &Params) -> Vec<f64> {
        let d = self.grid.dim();
        let nan = f64::NAN;
        let pair = |r: Option<(f64, f64)>| r.map_or([nan, nan], |(e, m)| [e, m]);
        match (&self.potential, &self.lengths) {
            (PotentialSpec::Box, Some(l)) => {
                let weak = box_weak_estimate(l, p.beta, p.sigma).ok().map(|w| (w.energy, w.mu));
                let tf = box_tf_estimate(l, p.beta, p.sigma).ok().map(|t| (t.energy, t.mu));
                let ma = if p.beta > 0.0 && p.sigma > 0.0 {
                    matched_asymptotic(l, p.beta, p.sigma)
                        .ok()
                        .map(|m| (m.energy(), m.chemical_potential()))
                } else {
                    None
                };
                [pair(weak), pair(tf), pair(ma)].concat()
            }
            (PotentialSpec::Harmonic { gamma }, _) if !self.estimate_names().is_empty() => {
                let g = gamma[0];
                let weak = weak_beta_estimate(d, g, p.beta, p.sigma).ok().map(|w| (w.energy, w.mu));
                let tf = tf_estimate(d, g, p.beta, p.sigma).ok().map(|t| (t.energy_tf, t.mu_tf));
                [pair(weak), pair(tf)].concat()
            }
            _ => Vec::new(),
        }
    }
}
