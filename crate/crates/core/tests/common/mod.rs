#![allow(dead_code)]

use nlse_core::gflow::{default_initial_guess, solve_ground_state_observed};
use nlse_core::{Error, FlowConfig, Grid, GroundStateResult, Params, PotentialSpec};

/// Worst-case invariant violations observed along one flow.
#[derive(Clone, Debug, Default)]
pub struct FlowAudit {
    pub steps: usize,
    pub max_dt: f64,
    pub max_norm_dev: f64,
    /// Largest `(E_{n+1} - E_n) / max(1, |E_n|)`.
    pub max_energy_rise: f64,
    pub max_asymmetry: f64,
    pub mu_minus_e: f64,
}

impl FlowAudit {
    pub fn merge(&mut self, o: &FlowAudit) {
        self.steps += o.steps;
        self.max_dt = self.max_dt.max(o.max_dt);
        self.max_norm_dev = self.max_norm_dev.max(o.max_norm_dev);
        self.max_energy_rise = self.max_energy_rise.max(o.max_energy_rise);
        self.max_asymmetry = self.max_asymmetry.max(o.max_asymmetry);
        self.mu_minus_e = self.mu_minus_e.min(o.mu_minus_e);
    }

    pub fn empty() -> Self {
        FlowAudit {
            mu_minus_e: f64::INFINITY,
            ..Default::default()
        }
    }
}

/// Runs the flow while auditing normalization, energy descent and reflection symmetry.
pub fn audited_solve(
    grid: &Grid,
    v: &PotentialSpec,
    p: &Params,
    cfg: &FlowConfig,
) -> (Result<GroundStateResult, Error>, FlowAudit) {
    let w = grid.cell_volume();
    let start = match &cfg.warm_start {
        Some(s) => s.clone(),
        None => default_initial_guess(grid, v).unwrap(),
    };
    let ham = nlse_core::domain::Hamiltonian::new(grid, v, *p).unwrap();
    let mut prev_e = ham.energy(start.values());
    let mut audit = FlowAudit::empty();
    let res = solve_ground_state_observed(grid, v, p, cfg, |s| {
        audit.steps += 1;
        audit.max_dt = audit.max_dt.max(s.dt);
        let n2: f64 = w * s.phi.iter().map(|x| x * x).sum::<f64>();
        audit.max_norm_dev = audit.max_norm_dev.max((n2 - 1.0).abs());
        let rise = (s.energy - prev_e) / prev_e.abs().max(1.0);
        audit.max_energy_rise = audit.max_energy_rise.max(rise);
        prev_e = s.energy;
        let peak = s.phi.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let asym = (0..s.phi.len())
            .map(|i| (s.phi[i] - s.phi[grid.reflect(i)]).abs())
            .fold(0.0f64, f64::max);
        audit.max_asymmetry = audit.max_asymmetry.max(asym / peak);
    });
    if let Ok(r) = &res {
        audit.mu_minus_e = r.mu - r.energy;
    }
    (res, audit)
}

/// Solves along an ascending parameter list, warm-starting each solve.
pub fn audited_sweep(
    grid: &Grid,
    v: &PotentialSpec,
    params: &[Params],
    cfg: &FlowConfig,
) -> (Vec<GroundStateResult>, FlowAudit) {
    let mut cfg = cfg.clone();
    let mut out = Vec::new();
    let mut total = FlowAudit::empty();
    for p in params {
        let (r, a) = audited_solve(grid, v, p, &cfg);
        let r = r.unwrap_or_else(|e| panic!("solve at {p:?} failed: {e}"));
        total.merge(&a);
        cfg.warm_start = Some(r.phi.clone());
        out.push(r);
    }
    (out, total)
}

pub fn sigma_ladder(max: f64) -> Vec<f64> {
    let mut s = vec![1.0];
    while *s.last().unwrap() < max {
        let n = s.last().unwrap() * 2.0;
        s.push(n);
    }
    s
}

/// Linear interpolation of the first crossing of `level` by samples `(x_i, y_i)`.
pub fn first_crossing(xs: &[f64], ys: &[f64], level: f64) -> Option<f64> {
    for i in 1..ys.len() {
        if ys[i - 1] < level && ys[i] >= level {
            let t = (level - ys[i - 1]) / (ys[i] - ys[i - 1]);
            return Some(xs[i - 1] + t * (xs[i] - xs[i - 1]));
        }
    }
    None
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Free 2D soliton `Q'' + Q'/r - Q + Q^3 = 0` by shooting on `Q(0)`;
/// returns `||Q||^2 / 2`, the sharp constant for `d = 2`, `sigma = 1`.
pub fn townes_best_constant() -> f64 {
    let rhs = |r: f64, q: f64, dq: f64| -> f64 {
        if r == 0.0 {
            0.5 * (q - q * q * q)
        } else {
            -dq / r + q - q * q * q
        }
    };
    // +1: crosses zero (too large), -1: turns back up (too small)
    let shoot = |q0: f64, mass: &mut f64| -> i32 {
        let h = 1e-4;
        let (mut r, mut q, mut dq) = (0.0f64, q0, 0.0f64);
        *mass = 0.0;
        while r < 20.0 {
            let k1q = dq;
            let k1d = rhs(r, q, dq);
            let k2q = dq + 0.5 * h * k1d;
            let k2d = rhs(r + 0.5 * h, q + 0.5 * h * k1q, dq + 0.5 * h * k1d);
            let k3q = dq + 0.5 * h * k2d;
            let k3d = rhs(r + 0.5 * h, q + 0.5 * h * k2q, dq + 0.5 * h * k2d);
            let k4q = dq + h * k3d;
            let k4d = rhs(r + h, q + h * k3q, dq + h * k3d);
            let qn = q + h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
            let dqn = dq + h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
            *mass += 0.5 * h * (r * q * q + (r + h) * qn * qn);
            r += h;
            q = qn;
            dq = dqn;
            if q < 0.0 {
                return 1;
            }
            if dq > 0.0 {
                return -1;
            }
        }
        0
    };
    let (mut lo, mut hi) = (1.5, 3.0);
    let mut mass = 0.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        match shoot(mid, &mut mass) {
            1 => hi = mid,
            _ => lo = mid,
        }
    }
    shoot(lo, &mut mass);
    2.0 * std::f64::consts::PI * mass / 2.0
}
