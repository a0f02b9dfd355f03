//! Asymptotic approximations of ground states in a harmonic trap.

use crate::domain::{GroundStateResult, Grid, Params, PotentialSpec, WaveFunction};
use crate::error::{Error, Result};
use crate::gflow::{solve_ground_state, FlowConfig};
use crate::quad::bisect;
use crate::special::ln_beta;
use std::f64::consts::PI;

fn check_dim(d: usize) -> Result<()> {
    if !(1..=3).contains(&d) {
        return Err(Error::InvalidInput(format!("dimension must be 1, 2 or 3, got {d}")));
    }
    Ok(())
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

/// Volume of the unit ball in `d` dimensions.
pub fn unit_ball_volume(d: usize) -> f64 {
    match d {
        1 => 2.0,
        2 => PI,
        _ => 4.0 * PI / 3.0,
    }
}

/// Two-term small-`beta` expansion around the linear oscillator.
#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicWeakEstimate {
    pub d: usize,
    pub gamma: f64,
    pub energy: f64,
    pub mu: f64,
}

impl HarmonicWeakEstimate {
    /// Normalized Gaussian `prod_j (gamma/pi)^{1/4} exp(-gamma x_j^2 / 2)`.
    pub fn profile(&self, x: &[f64]) -> f64 {
        gaussian_profile(self.gamma, x)
    }
}

pub fn gaussian_profile(gamma: f64, x: &[f64]) -> f64 {
    x.iter()
        .map(|xj| (gamma / PI).powf(0.25) * (-0.5 * gamma * xj * xj).exp())
        .product()
}

pub fn weak_beta_estimate(
    d: usize,
    gamma: f64,
    beta: f64,
    sigma: f64,
) -> Result<HarmonicWeakEstimate> {
    check_dim(d)?;
    check_positive("gamma", gamma)?;
    Params::new(beta, sigma)?;
    let df = d as f64;
    let base = 0.5 * df * gamma;
    let overlap = (gamma / PI).powf(0.5 * df * sigma);
    Ok(HarmonicWeakEstimate {
        d,
        gamma,
        energy: base + beta / (sigma + 1.0).powf(0.5 * (df + 2.0)) * overlap,
        mu: base + beta / (sigma + 1.0).powf(0.5 * df) * overlap,
    })
}

/// Thomas-Fermi approximation in an isotropic trap.
#[derive(Clone, Debug, PartialEq)]
pub struct TfEstimate {
    pub d: usize,
    pub gamma: f64,
    pub beta: f64,
    pub sigma: f64,
    pub mu_tf: f64,
    pub energy_tf: f64,
    pub support_radius: f64,
}

/// `E^TF / mu^TF`.
pub fn tf_energy_ratio(d: usize, sigma: f64) -> f64 {
    let ds = d as f64 * sigma;
    (2.0 + ds) / (2.0 * sigma + 2.0 + ds)
}

pub fn tf_estimate(d: usize, gamma: f64, beta: f64, sigma: f64) -> Result<TfEstimate> {
    check_dim(d)?;
    check_positive("gamma", gamma)?;
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::Regime(format!("Thomas-Fermi limit needs beta > 0, got {beta}")));
    }
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::Regime(format!("Thomas-Fermi limit needs sigma > 0, got {sigma}")));
    }
    let df = d as f64;
    let ln_den = (0.5 * df - 1.0) * 2f64.ln()
        + (df * unit_ball_volume(d)).ln()
        + ln_beta(0.5 * df, 1.0 + 1.0 / sigma);
    let ln_num = beta.ln() / sigma + df * gamma.ln();
    let mu_tf = ((ln_num - ln_den) / (0.5 * df + 1.0 / sigma)).exp();
    Ok(TfEstimate {
        d,
        gamma,
        beta,
        sigma,
        mu_tf,
        energy_tf: tf_energy_ratio(d, sigma) * mu_tf,
        support_radius: (2.0 * mu_tf).sqrt() / gamma,
    })
}

/// Thomas-Fermi amplitude `((mu - gamma^2 |x|^2 / 2) / beta)^{1/(2 sigma)}`, zero outside the support.
pub fn tf_profile_eval(est: &TfEstimate, x: &[f64]) -> f64 {
    let r2: f64 = x.iter().map(|v| v * v).sum();
    let s = est.mu_tf - 0.5 * est.gamma * est.gamma * r2;
    if s <= 4.0 * f64::EPSILON * est.mu_tf {
        0.0
    } else {
        (s / est.beta).powf(0.5 / est.sigma)
    }
}

const SHOOT_STEP: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Fate {
    Grows,
    Crosses,
}

fn shoot_end(gamma: f64, x0: f64, mu: f64) -> f64 {
    x0.max((2.0 * mu).sqrt() / gamma) + 10.0 / gamma.sqrt()
}

/// Integrates `phi'' = (gamma^2 x^2 - 2 mu) phi` from `(x0, 1, 0)` by RK4,
/// stopping at blow-up past 10, a zero crossing, or the far end.
fn trajectory(gamma: f64, x0: f64, mu: f64, mut record: Option<&mut Vec<[f64; 3]>>) -> Fate {
    let g2 = gamma * gamma;
    let q = |x: f64| g2 * x * x - 2.0 * mu;
    let end = shoot_end(gamma, x0, mu);
    let h = SHOOT_STEP;
    let (mut x, mut p, mut dp) = (x0, 1.0f64, 0.0f64);
    if let Some(r) = record.as_deref_mut() {
        r.push([x, p, dp]);
    }
    loop {
        let k1p = dp;
        let k1d = q(x) * p;
        let k2p = dp + 0.5 * h * k1d;
        let k2d = q(x + 0.5 * h) * (p + 0.5 * h * k1p);
        let k3p = dp + 0.5 * h * k2d;
        let k3d = q(x + 0.5 * h) * (p + 0.5 * h * k2p);
        let k4p = dp + h * k3d;
        let k4d = q(x + h) * (p + h * k3p);
        p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        dp += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
        x += h;
        if let Some(r) = record.as_deref_mut() {
            r.push([x, p, dp]);
        }
        if p < 0.0 {
            return Fate::Crosses;
        }
        if p > 10.0 {
            return Fate::Grows;
        }
        if x >= end {
            return if dp >= 0.0 { Fate::Grows } else { Fate::Crosses };
        }
    }
}

/// Eigenvalue for which the trajectory from `(x0, 1, 0)` decays.
fn decaying_mu(gamma: f64, x0: f64) -> Result<f64> {
    let mut lo = 0.5 * gamma * gamma * x0 * x0;
    let mut hi = lo + gamma;
    let mut trace = Vec::new();
    while trajectory(gamma, x0, hi, None) == Fate::Grows {
        trace.push((hi, 1.0));
        lo = hi;
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Bracket {
                message: format!("no over-decaying eigenvalue found for x0 = {x0}"),
                trace,
            });
        }
    }
    while hi - lo > 1e-14 * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match trajectory(gamma, x0, mid, None) {
            Fate::Grows => lo = mid,
            Fate::Crosses => hi = mid,
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Decaying branch up to the point where `|phi|` is smallest, plus the mass beyond.
fn outer_branch(gamma: f64, x0: f64, mu: f64) -> (Vec<[f64; 3]>, f64) {
    let mut samples = Vec::new();
    trajectory(gamma, x0, mu, Some(&mut samples));
    let imin = samples
        .iter()
        .enumerate()
        .fold(0, |b, (i, s)| if s[1].abs() < samples[b][1].abs() { i } else { b });
    samples.truncate(imin + 1);
    let m = samples.len() - 1;
    let f = |i: usize| samples[i][1] * samples[i][1];
    let mut mass = 0.0;
    let even = m - m % 2;
    for i in (0..even).step_by(2) {
        mass += SHOOT_STEP / 3.0 * (f(i) + 4.0 * f(i + 1) + f(i + 2));
    }
    if m % 2 == 1 {
        mass += 0.5 * SHOOT_STEP * (f(m - 1) + f(m));
    }
    let xe = samples[m][0];
    if xe > 0.0 {
        mass += f(m) / (2.0 * gamma * xe);
    }
    (samples, mass)
}

/// Solution of the free-boundary problem describing the infinite-power limit
/// in a trap with `gamma > pi`: `phi = 1` on `[0, x_gamma]` and a decaying
/// linear eigenfunction outside.
#[derive(Clone, Debug)]
pub struct ShootingSolution {
    pub gamma: f64,
    pub x_gamma: f64,
    pub mu: f64,
    /// `(x, phi(x))` for `x >= x_gamma`, spaced by the integrator step.
    pub outer_profile: Vec<(f64, f64)>,
    slopes: Vec<f64>,
}

impl ShootingSolution {
    /// `x_gamma + int_{x_gamma}^inf phi^2 - 1/2`.
    pub fn normalization_residual(&self) -> f64 {
        let (_, mass) = outer_branch(self.gamma, self.x_gamma, self.mu);
        self.x_gamma + mass - 0.5
    }

    pub fn slope_at_boundary(&self) -> f64 {
        self.slopes[0]
    }

    /// Even extension: 1 on the plateau, the outer branch beyond it.
    pub fn eval(&self, x: f64) -> f64 {
        let a = x.abs();
        if a <= self.x_gamma {
            return 1.0;
        }
        let n = self.outer_profile.len();
        let t = (a - self.x_gamma) / SHOOT_STEP;
        let i = t.floor() as usize;
        if i + 1 >= n {
            let (xe, pe) = self.outer_profile[n - 1];
            return pe * (-0.5 * self.gamma * (a * a - xe * xe)).exp();
        }
        let s = t - i as f64;
        let (p0, p1) = (self.outer_profile[i].1, self.outer_profile[i + 1].1);
        let (d0, d1) = (self.slopes[i] * SHOOT_STEP, self.slopes[i + 1] * SHOOT_STEP);
        let s2 = s * s;
        let s3 = s2 * s;
        (2.0 * s3 - 3.0 * s2 + 1.0) * p0
            + (s3 - 2.0 * s2 + s) * d0
            + (-2.0 * s3 + 3.0 * s2) * p1
            + (s3 - s2) * d1
    }
}

pub fn shoot_sigma_limit(gamma: f64) -> Result<ShootingSolution> {
    check_positive("gamma", gamma)?;
    if gamma <= PI {
        return Err(Error::Regime(format!(
            "free-boundary limit needs gamma > pi, got {gamma}"
        )));
    }
    let mut trace = Vec::new();
    let mut g = |x0: f64| -> f64 {
        match decaying_mu(gamma, x0) {
            Ok(mu) => {
                let v = x0 + outer_branch(gamma, x0, mu).1 - 0.5;
                trace.push((x0, v));
                v
            }
            Err(_) => f64::NAN,
        }
    };
    let x_gamma = match bisect(&mut g, 0.0, 0.5, 1e-13) {
        Ok(x) => x,
        Err(Error::Bracket { message, .. }) => {
            return Err(Error::Bracket { message, trace })
        }
        Err(e) => return Err(e),
    };
    let mu = decaying_mu(gamma, x_gamma)?;
    let (samples, _) = outer_branch(gamma, x_gamma, mu);
    Ok(ShootingSolution {
        gamma,
        x_gamma,
        mu,
        outer_profile: samples.iter().map(|s| (s[0], s[1])).collect(),
        slopes: samples.iter().map(|s| s[2]).collect(),
    })
}

/// Limit of the ground state as `sigma -> infinity` at fixed `beta > 0`.
#[derive(Clone, Debug)]
pub enum SigmaLimit {
    /// `gamma <= pi`: the linear ground state.
    Gaussian { gamma: f64 },
    /// `gamma > pi`: flat top of height 1.
    FlatTop(ShootingSolution),
}

impl SigmaLimit {
    pub fn new(gamma: f64) -> Result<Self> {
        check_positive("gamma", gamma)?;
        if gamma <= PI {
            Ok(SigmaLimit::Gaussian { gamma })
        } else {
            Ok(SigmaLimit::FlatTop(shoot_sigma_limit(gamma)?))
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            SigmaLimit::Gaussian { gamma } => gaussian_profile(*gamma, &[x]),
            SigmaLimit::FlatTop(s) => s.eval(x),
        }
    }

    pub fn peak(&self) -> f64 {
        self.eval(0.0)
    }
}

pub fn sigma_limit_profile(gamma: f64, x: f64) -> Result<f64> {
    Ok(SigmaLimit::new(gamma)?.eval(x))
}

/// Length scale `eps = |beta|^{-1/(2 - d sigma)}` of the attractive rescaling.
pub fn attractive_scale(d: usize, sigma: f64, beta: f64) -> Result<f64> {
    check_dim(d)?;
    let ds = d as f64 * sigma;
    if ds >= 2.0 {
        return Err(Error::ExistenceViolation(format!(
            "attractive limit needs d*sigma < 2, got {ds}"
        )));
    }
    if !(beta.is_finite() && beta < 0.0) {
        return Err(Error::Regime(format!("attractive limit needs beta < 0, got {beta}")));
    }
    Ok((-beta).powf(-1.0 / (2.0 - ds)))
}

/// `eps^2 V(eps y)` for the potentials that support it.
fn rescaled_potential(potential: &PotentialSpec, eps: f64) -> Result<PotentialSpec> {
    let e2 = eps * eps;
    match potential {
        PotentialSpec::Harmonic { gamma } => Ok(PotentialSpec::Harmonic {
            gamma: gamma.iter().map(|g| g * e2).collect(),
        }),
        PotentialSpec::Box => Ok(PotentialSpec::Box),
        PotentialSpec::Lattice {
            gamma,
            amplitude,
            wavenumber,
        } => Ok(PotentialSpec::Lattice {
            gamma: gamma.iter().map(|g| g * e2).collect(),
            amplitude: amplitude * e2,
            wavenumber: wavenumber * eps,
        }),
        PotentialSpec::Custom(_) => Err(Error::InvalidInput(
            "sampled potentials cannot be rescaled".into(),
        )),
    }
}

/// Ground state of the rescaled attractive problem
/// `-1/2 Delta phi + eps^2 V(eps y) phi - |phi|^{2 sigma} phi = mu phi` on `grid`
/// (in rescaled coordinates). Map back with [`rescale_to_physical`].
pub fn attractive_limit_solve(
    sigma: f64,
    beta: f64,
    grid: &Grid,
    potential: &PotentialSpec,
    cfg: &FlowConfig,
) -> Result<GroundStateResult> {
    let eps = attractive_scale(grid.dim(), sigma, beta)?;
    let v = rescaled_potential(potential, eps)?;
    let params = Params::new(-1.0, sigma)?;
    let mut cfg = cfg.clone();
    if cfg.warm_start.is_none() {
        let c = grid.center();
        let start = WaveFunction::from_fn(grid.clone(), |y| {
            let r2: f64 = y.iter().zip(&c).map(|(a, b)| (a - b) * (a - b)).sum();
            (-0.5 * r2).exp()
        })?;
        cfg.warm_start = Some(start.normalized()?);
    }
    solve_ground_state(grid, &v, &params, &cfg)
}

/// `phi(x) = eps^{-d/2} phi_eps(x / eps)` on the correspondingly stretched grid.
pub fn rescale_to_physical(phi_eps: &WaveFunction, eps: f64) -> Result<WaveFunction> {
    check_positive("eps", eps)?;
    let axes = phi_eps
        .grid()
        .axes()
        .iter()
        .map(|a| crate::domain::Axis::new(a.lower() * eps, a.upper() * eps, a.n()))
        .collect::<Result<Vec<_>>>()?;
    let grid = Grid::new(axes)?;
    let s = eps.powf(-0.5 * grid.dim() as f64);
    WaveFunction::new(grid, phi_eps.values().iter().map(|v| v * s).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weak_estimates() {
        let w = weak_beta_estimate(1, 3.0, 0.0, 2.0).unwrap();
        assert_eq!((w.energy, w.mu), (1.5, 1.5));
        let w = weak_beta_estimate(1, 1.0, 1.0, 1.0).unwrap();
        assert!((w.energy - 0.699_471).abs() < 1e-5);
        assert!((w.mu - 0.898_942).abs() < 1e-5);
        let w = weak_beta_estimate(2, 1.0, 0.1, 1.0).unwrap();
        assert!((w.energy - (1.0 + 0.1 / (4.0 * PI))).abs() < 1e-14);
    }

    #[test]
    fn tf_closed_forms() {
        let tf = tf_estimate(1, 1.0, 10.0, 1.0).unwrap();
        let alt = 0.5 * (1.5f64 * 10.0).powf(2.0 / 3.0);
        assert!((tf.mu_tf - alt).abs() < 1e-12 * alt);
        assert!((tf.mu_tf - 3.0411).abs() < 1e-4);
        assert!((tf.energy_tf - 0.6 * tf.mu_tf).abs() < 1e-14);
        assert_eq!(tf_energy_ratio(1, 2.0), 0.5);
        assert!(tf_estimate(1, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn tf_profile_values() {
        let tf = tf_estimate(1, 1.0, 10.0, 1.0).unwrap();
        assert_eq!(tf_profile_eval(&tf, &[tf.support_radius]), 0.0);
        assert!((tf_profile_eval(&tf, &[0.0]) - (tf.mu_tf / 10.0).sqrt()).abs() < 1e-15);
        assert!((tf_profile_eval(&tf, &[1.0]) - 0.5041).abs() < 1e-4);
        assert_eq!(tf_profile_eval(&tf, &[10.0]), 0.0);
    }

    #[test]
    fn gaussian_branch_of_sigma_limit() {
        let peak = sigma_limit_profile(3.0, 0.0).unwrap();
        assert!((peak - (3.0 / PI).powf(0.25)).abs() < 1e-15);
        assert!(shoot_sigma_limit(3.0).is_err());
    }

    #[test]
    fn shooting_boundary_conditions() {
        let s = shoot_sigma_limit(6.0).unwrap();
        assert_eq!(s.outer_profile[0], (s.x_gamma, 1.0));
        assert_eq!(s.slope_at_boundary(), 0.0);
        assert!(s.normalization_residual().abs() < 1e-8);
        assert!(s.x_gamma > 0.0 && s.x_gamma < 0.5);
        assert_eq!(s.eval(0.0), 1.0);
        assert!(s.eval(20.0) < 1e-12);
    }

    #[test]
    fn attractive_scale_values() {
        assert_eq!(attractive_scale(1, 1.0, -4.0).unwrap(), 0.25);
        assert!(attractive_scale(2, 1.0, -4.0).is_err());
        assert!(attractive_scale(1, 1.0, 4.0).is_err());
    }
}
