//! Normalized gradient flow with semi-implicit backward Euler time stepping.

use crate::domain::{
    abs_pow, GroundStateResult, Grid, Hamiltonian, Params, PotentialSpec, WaveFunction,
};
use crate::error::{Error, Result};
use crate::linalg::{pcg, thomas_spd, FastDiagonalization};
use std::f64::consts::PI;

/// Energy increase tolerated per accepted step, relative to `max(1, |E|)`,
/// before the step is retried with a smaller time step.
pub const ENERGY_SLACK: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct FlowConfig {
    /// Time step; `None` selects `min(0.1, 1/(1+sigma))`.
    pub dt: Option<f64>,
    /// Stop once `max|phi^{n+1} - phi^n| / dt < tol`.
    pub tol: f64,
    pub max_iters: usize,
    pub warm_start: Option<WaveFunction>,
    /// Flip the sign so the largest-magnitude node is positive.
    pub sign_fix: bool,
    /// Relative residual target of the inner conjugate-gradient solves (2D only).
    pub cg_tol: f64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self {
            dt: None,
            tol: 1e-10,
            max_iters: 1_000_000,
            warm_start: None,
            sign_fix: true,
            cg_tol: 1e-12,
        }
    }
}

impl FlowConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(dt) = self.dt {
            if !(dt.is_finite() && dt > 0.0) {
                return Err(Error::InvalidInput(format!("dt must be positive, got {dt}")));
            }
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::InvalidInput(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidInput("max_iters must be at least 1".into()));
        }
        if !(self.cg_tol.is_finite() && self.cg_tol > 0.0) {
            return Err(Error::InvalidInput("cg_tol must be positive".into()));
        }
        Ok(())
    }

    pub fn base_dt(&self, sigma: f64) -> f64 {
        self.dt.unwrap_or_else(|| default_dt(sigma))
    }
}

pub fn default_dt(sigma: f64) -> f64 {
    0.1f64.min(1.0 / (1.0 + sigma))
}

/// One accepted step of the flow, as reported to observers.
#[derive(Clone, Copy, Debug)]
pub struct FlowStep<'a> {
    pub iteration: usize,
    pub dt: f64,
    pub energy: f64,
    pub update_rate: f64,
    pub phi: &'a [f64],
}

/// Reusable implicit solver for `(I + dt H_lagged) x = phi`.
struct Stepper {
    ham: Hamiltonian,
    fd: Option<FastDiagonalization>,
    cg_tol: f64,
    mu_guess: f64,
}

impl Stepper {
    fn new(ham: Hamiltonian, potential: &PotentialSpec, cg_tol: f64) -> Result<Self> {
        let grid = ham.grid().clone();
        let fd = if grid.dim() == 2 {
            let parts = potential.separable_parts(&grid).unwrap_or_else(|| {
                grid.axes().iter().map(|a| vec![0.0; a.n()]).collect()
            });
            Some(FastDiagonalization::new(&grid, &parts)?)
        } else {
            None
        };
        Ok(Self {
            ham,
            fd,
            cg_tol,
            mu_guess: 0.0,
        })
    }

    /// Unnormalized implicit solve.
    fn solve(&mut self, phi: &[f64], dt: f64) -> Result<Vec<f64>> {
        let Params { beta, sigma } = self.ham.params();
        let grid = self.ham.grid();
        let v = self.ham.potential();
        let shift: Vec<f64> = phi
            .iter()
            .zip(v)
            .map(|(&p, &v)| v + beta * abs_pow(p, 2.0 * sigma))
            .collect();
        let mut out = vec![0.0; phi.len()];
        match &self.fd {
            None => {
                let h = grid.axis(0).h();
                let c = 0.5 / (h * h);
                let diag: Vec<f64> = shift.iter().map(|s| 1.0 + dt * (2.0 * c + s)).collect();
                thomas_spd(&diag, -dt * c, phi, &mut out)?;
            }
            Some(fd) => {
                let scale = 1.0 / (1.0 + dt * self.mu_guess);
                out.iter_mut().zip(phi).for_each(|(o, p)| *o = p * scale);
                let apply = |x: &[f64], y: &mut [f64]| {
                    crate::domain::neg_half_laplacian(grid, x, y);
                    for i in 0..x.len() {
                        y[i] = x[i] + dt * (y[i] + shift[i] * x[i]);
                    }
                };
                pcg(apply, |r, z| fd.apply(dt, r, z), phi, &mut out, self.cg_tol, 500)?;
            }
        }
        Ok(out)
    }

    /// Implicit solve followed by projection onto the unit sphere.
    fn step(&mut self, phi: &[f64], dt: f64) -> Result<Vec<f64>> {
        let mut out = self.solve(phi, dt)?;
        let nrm = self.ham.norm_sq(&out).sqrt();
        if !(nrm > 0.0 && nrm.is_finite()) {
            return Err(Error::LinearSolve(format!("implicit step produced norm {nrm}")));
        }
        self.mu_guess = (1.0 / nrm - 1.0) / dt;
        out.iter_mut().for_each(|v| *v /= nrm);
        Ok(out)
    }
}

/// One projected backward Euler step with the nonlinearity lagged at `phi`.
pub fn befd_step(
    phi: &WaveFunction,
    potential: &PotentialSpec,
    params: &Params,
    dt: f64,
) -> Result<WaveFunction> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidInput(format!("dt must be positive, got {dt}")));
    }
    let ham = Hamiltonian::new(phi.grid(), potential, *params)?;
    let mut stepper = Stepper::new(ham, potential, FlowConfig::default().cg_tol)?;
    let out = stepper.step(phi.values(), dt)?;
    Ok(WaveFunction::from_normalized(phi.grid().clone(), out))
}

/// Largest step for which the lagged nonlinearity stays damped at the current iterate.
fn stiffness_cap(params: &Params, peak: f64) -> f64 {
    let Params { beta, sigma } = *params;
    let g = beta.abs() * abs_pow(peak, 2.0 * sigma);
    if g == 0.0 {
        return f64::INFINITY;
    }
    if beta > 0.0 {
        if 2.0 * sigma > 1.0 {
            1.0 / ((2.0 * sigma - 1.0) * g)
        } else {
            f64::INFINITY
        }
    } else {
        0.5 / g
    }
}

/// Smallest update rate distinguishable from rounding in the implicit solve:
/// `4 eps ||H|| max|phi|`.
fn rounding_floor(linear_norm: f64, params: &Params, peak: f64) -> f64 {
    let h_norm = linear_norm + params.beta.abs() * abs_pow(peak, 2.0 * params.sigma);
    4.0 * f64::EPSILON * h_norm * peak
}

/// Refuses parameter sets for which no ground state exists.
fn check_existence(dim: usize, params: &Params) -> Result<()> {
    let Params { beta, sigma } = *params;
    if beta < 0.0 && sigma > 0.0 && dim as f64 * sigma >= 2.0 {
        return Err(Error::ExistenceViolation(format!(
            "no ground state for beta = {beta} < 0 with d*sigma = {} >= 2",
            dim as f64 * sigma
        )));
    }
    Ok(())
}

/// Normalized Gaussian `prod_j exp(-gamma_j x_j^2 / 2)` for traps, first box mode otherwise.
pub fn default_initial_guess(grid: &Grid, potential: &PotentialSpec) -> Result<WaveFunction> {
    potential.validate(grid)?;
    let wf = match potential {
        PotentialSpec::Harmonic { .. } | PotentialSpec::Lattice { .. } => {
            WaveFunction::from_fn(grid.clone(), |x| {
                let s: f64 = x
                    .iter()
                    .enumerate()
                    .map(|(j, &xj)| potential.gamma(j).unwrap() * xj * xj)
                    .sum();
                (-0.5 * s).exp()
            })?
        }
        _ => box_mode(grid)?,
    };
    wf.normalized()
}

fn box_mode(grid: &Grid) -> Result<WaveFunction> {
    let axes = grid.axes().to_vec();
    WaveFunction::from_fn(grid.clone(), |x| {
        x.iter()
            .zip(&axes)
            .map(|(&xj, a)| (PI * (xj - a.lower()) / a.length()).sin())
            .product()
    })
}

/// Symmetric harmonic-trap domain half-width `max(8/sqrt(gamma), 1.5 R_TF)`.
pub fn default_half_width(dim: usize, gamma: f64, params: &Params) -> f64 {
    let mut r = 8.0 / gamma.sqrt();
    if params.beta > 0.0 && params.sigma > 0.0 {
        if let Ok(tf) = crate::asym_harmonic::tf_estimate(dim, gamma, params.beta, params.sigma) {
            r = r.max(1.5 * tf.support_radius);
        }
    }
    r
}

pub fn solve_ground_state(
    grid: &Grid,
    potential: &PotentialSpec,
    params: &Params,
    cfg: &FlowConfig,
) -> Result<GroundStateResult> {
    solve_ground_state_observed(grid, potential, params, cfg, |_| {})
}

/// As [`solve_ground_state`], calling `observer` after every accepted step.
pub fn solve_ground_state_observed<F>(
    grid: &Grid,
    potential: &PotentialSpec,
    params: &Params,
    cfg: &FlowConfig,
    mut observer: F,
) -> Result<GroundStateResult>
where
    F: FnMut(&FlowStep<'_>),
{
    cfg.validate()?;
    params.validate()?;
    check_existence(grid.dim(), params)?;
    let ham = Hamiltonian::new(grid, potential, *params)?;
    let mut phi = match &cfg.warm_start {
        Some(w) => {
            if w.grid() != grid {
                return Err(Error::InvalidInput("warm start lives on a different grid".into()));
            }
            w.clone().normalized()?.into_values()
        }
        None => default_initial_guess(grid, potential)?.into_values(),
    };
    let base_dt = cfg.base_dt(params.sigma);
    let stencil_norm: f64 = grid.axes().iter().map(|a| 2.0 / (a.h() * a.h())).sum();
    let v_max = ham.potential().iter().fold(0.0f64, |m, v| m.max(*v));
    let mut stepper = Stepper::new(ham.clone(), potential, cfg.cg_tol)?;
    let mut energy = ham.energy(&phi);
    let mut safety = 1.0;
    let mut iterations = 0;
    let mut attempts = 0;
    let mut update_rate = f64::INFINITY;
    let mut converged = false;

    while iterations < cfg.max_iters && attempts < cfg.max_iters.saturating_mul(4) {
        attempts += 1;
        let peak = phi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let dt = (base_dt * safety).min(stiffness_cap(params, peak));
        let next = match stepper.step(&phi, dt) {
            Ok(next) => next,
            Err(Error::LinearSolve(msg)) => {
                if safety < 1e-12 {
                    return Err(Error::LinearSolve(msg));
                }
                safety *= 0.5;
                continue;
            }
            Err(e) => return Err(e),
        };
        let rate = next
            .iter()
            .zip(&phi)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
            / dt;
        let tol = cfg.tol.max(rounding_floor(stencil_norm + v_max, params, peak));
        let e_next = ham.energy(&next);
        if params.beta >= 0.0
            && e_next > energy + ENERGY_SLACK * energy.abs().max(1.0)
            && rate >= tol
            && safety > 1e-12
        {
            safety *= 0.5;
            continue;
        }
        iterations += 1;
        phi = next;
        energy = e_next;
        update_rate = rate;
        observer(&FlowStep {
            iteration: iterations,
            dt,
            energy,
            update_rate,
            phi: &phi,
        });
        if rate < tol {
            converged = true;
            break;
        }
    }

    let mut wf = WaveFunction::from_normalized(grid.clone(), phi);
    if cfg.sign_fix {
        wf = wf.sign_fixed();
    }
    let mu = ham.chemical_potential(wf.values());
    let result = GroundStateResult {
        energy: ham.energy(wf.values()),
        mu,
        residual: ham.residual(wf.values(), mu),
        phi: wf,
        iterations,
        converged,
    };
    if converged {
        Ok(result)
    } else {
        Err(Error::NotConverged {
            result: Box::new(result),
            update_rate,
        })
    }
}

/// Solves a sequence of parameter sets, warm-starting each from its predecessor.
/// Items that fail to converge are returned with `converged == false`.
pub fn continuation_sweep(
    grid: &Grid,
    potential: &PotentialSpec,
    params: &[Params],
    cfg: &FlowConfig,
) -> Result<Vec<GroundStateResult>> {
    if params.is_empty() {
        return Err(Error::InvalidInput("empty parameter list".into()));
    }
    for p in params {
        p.validate()?;
        check_existence(grid.dim(), p)?;
    }
    let mut out: Vec<GroundStateResult> = Vec::with_capacity(params.len());
    let mut cfg = cfg.clone();
    for p in params {
        let r = match solve_ground_state(grid, potential, p, &cfg) {
            Ok(r) => r,
            Err(Error::NotConverged { result, .. }) => *result,
            Err(e) => return Err(e),
        };
        cfg.warm_start = Some(r.phi.clone());
        out.push(r);
    }
    Ok(out)
}
