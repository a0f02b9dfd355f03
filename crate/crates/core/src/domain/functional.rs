use super::grid::Grid;
use super::potential::PotentialSpec;
use super::wave::WaveFunction;
use super::Params;
use crate::error::{Error, Result};

/// `|x|^p`, with `0^p = 0` for every `p > 0` and `x^0 = 1`.
pub fn abs_pow(x: f64, p: f64) -> f64 {
    if p == 0.0 {
        return 1.0;
    }
    let a = x.abs();
    if a == 0.0 {
        0.0
    } else if p.fract() == 0.0 && p.abs() <= 64.0 {
        a.powi(p as i32)
    } else {
        (p * a.ln()).exp()
    }
}

fn shape(grid: &Grid) -> ([usize; 2], [f64; 2]) {
    let a0 = grid.axis(0);
    match grid.dim() {
        1 => ([a0.n(), 1], [a0.h(), f64::INFINITY]),
        _ => {
            let a1 = grid.axis(1);
            ([a0.n(), a1.n()], [a0.h(), a1.h()])
        }
    }
}

/// `sum |grad_h phi|^2` over every cell edge, boundary edges included, without the cell weight.
fn gradient_sum(grid: &Grid, phi: &[f64]) -> f64 {
    let ([n0, n1], [h0, h1]) = shape(grid);
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    for i in 0..n0 {
        for j in 0..n1 {
            let v = phi[i * n1 + j];
            let up0 = if i + 1 < n0 { phi[(i + 1) * n1 + j] } else { 0.0 };
            s0 += (up0 - v) * (up0 - v);
            if i == 0 {
                s0 += v * v;
            }
            if grid.dim() == 2 {
                let up1 = if j + 1 < n1 { phi[i * n1 + j + 1] } else { 0.0 };
                s1 += (up1 - v) * (up1 - v);
                if j == 0 {
                    s1 += v * v;
                }
            }
        }
    }
    let mut total = s0 / (h0 * h0);
    if grid.dim() == 2 {
        total += s1 / (h1 * h1);
    }
    total
}

/// Writes `-1/2 Delta_h phi` (homogeneous Dirichlet) into `out`.
pub fn neg_half_laplacian(grid: &Grid, phi: &[f64], out: &mut [f64]) {
    let ([n0, n1], [h0, h1]) = shape(grid);
    let c0 = 0.5 / (h0 * h0);
    let c1 = if grid.dim() == 2 { 0.5 / (h1 * h1) } else { 0.0 };
    for i in 0..n0 {
        for j in 0..n1 {
            let k = i * n1 + j;
            let v = phi[k];
            let lo0 = if i > 0 { phi[k - n1] } else { 0.0 };
            let hi0 = if i + 1 < n0 { phi[k + n1] } else { 0.0 };
            let mut r = c0 * (2.0 * v - lo0 - hi0);
            if c1 != 0.0 {
                let lo1 = if j > 0 { phi[k - 1] } else { 0.0 };
                let hi1 = if j + 1 < n1 { phi[k + 1] } else { 0.0 };
                r += c1 * (2.0 * v - lo1 - hi1);
            }
            out[k] = r;
        }
    }
}

/// Discrete energy functional and its first variation on a fixed grid.
#[derive(Clone, Debug)]
pub struct Hamiltonian {
    grid: Grid,
    v: Vec<f64>,
    params: Params,
}

impl Hamiltonian {
    pub fn new(grid: &Grid, potential: &PotentialSpec, params: Params) -> Result<Self> {
        params.validate()?;
        let v = potential.sample(grid)?;
        Ok(Self {
            grid: grid.clone(),
            v,
            params,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn potential(&self) -> &[f64] {
        &self.v
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn with_params(&self, params: Params) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            grid: self.grid.clone(),
            v: self.v.clone(),
            params,
        })
    }

    fn weight(&self) -> f64 {
        self.grid.cell_volume()
    }

    pub fn norm_sq(&self, phi: &[f64]) -> f64 {
        self.weight() * phi.iter().map(|v| v * v).sum::<f64>()
    }

    pub fn kinetic(&self, phi: &[f64]) -> f64 {
        0.5 * self.weight() * gradient_sum(&self.grid, phi)
    }

    pub fn potential_term(&self, phi: &[f64]) -> f64 {
        self.weight() * phi.iter().zip(&self.v).map(|(p, v)| v * p * p).sum::<f64>()
    }

    /// Quadrature of `|phi|^{2 sigma + 2}`.
    pub fn interaction_integral(&self, phi: &[f64]) -> f64 {
        let p = 2.0 * self.params.sigma + 2.0;
        self.weight() * phi.iter().map(|&v| abs_pow(v, p)).sum::<f64>()
    }

    pub fn energy(&self, phi: &[f64]) -> f64 {
        let Params { beta, sigma } = self.params;
        let mut e = self.kinetic(phi) + self.potential_term(phi);
        if beta != 0.0 {
            e += beta / (sigma + 1.0) * self.interaction_integral(phi);
        }
        e
    }

    pub fn chemical_potential(&self, phi: &[f64]) -> f64 {
        let Params { beta, sigma } = self.params;
        let e = self.energy(phi);
        if beta == 0.0 || sigma == 0.0 {
            return e;
        }
        e + sigma * beta / (sigma + 1.0) * self.interaction_integral(phi)
    }

    /// `H(phi) phi = -1/2 Delta_h phi + V phi + beta |phi|^{2 sigma} phi`.
    pub fn apply(&self, phi: &[f64], out: &mut [f64]) {
        let Params { beta, sigma } = self.params;
        neg_half_laplacian(&self.grid, phi, out);
        for ((o, &p), &v) in out.iter_mut().zip(phi).zip(&self.v) {
            *o += (v + beta * abs_pow(p, 2.0 * sigma)) * p;
        }
    }

    /// Quadrature L2 norm of `H(phi) phi - mu phi`.
    pub fn residual(&self, phi: &[f64], mu: f64) -> f64 {
        let mut r = vec![0.0; phi.len()];
        self.apply(phi, &mut r);
        let s: f64 = r.iter().zip(phi).map(|(r, p)| (r - mu * p).powi(2)).sum();
        (self.weight() * s).sqrt()
    }
}

fn check_finite(phi: &WaveFunction) -> Result<()> {
    if phi.values().iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("wave function has non-finite entries".into()));
    }
    Ok(())
}

/// Composite midpoint quadrature of `|phi|^2`.
pub fn quad_norm_sq(phi: &WaveFunction) -> Result<f64> {
    check_finite(phi)?;
    Ok(phi.norm_sq())
}

pub fn energy(phi: &WaveFunction, potential: &PotentialSpec, params: &Params) -> Result<f64> {
    check_finite(phi)?;
    Ok(Hamiltonian::new(phi.grid(), potential, *params)?.energy(phi.values()))
}

pub fn chemical_potential(
    phi: &WaveFunction,
    potential: &PotentialSpec,
    params: &Params,
) -> Result<f64> {
    check_finite(phi)?;
    Ok(Hamiltonian::new(phi.grid(), potential, *params)?.chemical_potential(phi.values()))
}

pub fn eigen_residual(
    phi: &WaveFunction,
    potential: &PotentialSpec,
    params: &Params,
    mu: f64,
) -> Result<f64> {
    check_finite(phi)?;
    if !mu.is_finite() {
        return Err(Error::InvalidInput("mu must be finite".into()));
    }
    Ok(Hamiltonian::new(phi.grid(), potential, *params)?.residual(phi.values(), mu))
}

/// Discrete H1 distance `sqrt(||a-b||^2 + ||grad_h(a-b)||^2)` on a shared grid.
pub fn h1_distance(a: &WaveFunction, b: &WaveFunction) -> Result<f64> {
    if a.grid() != b.grid() {
        return Err(Error::InvalidInput("wave functions live on different grids".into()));
    }
    let d: Vec<f64> = a.values().iter().zip(b.values()).map(|(x, y)| x - y).collect();
    let w = a.grid().cell_volume();
    let l2: f64 = d.iter().map(|v| v * v).sum();
    Ok((w * (l2 + gradient_sum(a.grid(), &d))).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn gaussian(n: usize) -> WaveFunction {
        let g = Grid::line(-8.0, 8.0, n).unwrap();
        WaveFunction::from_fn(g, |x| PI.powf(-0.25) * (-x[0] * x[0] / 2.0).exp()).unwrap()
    }

    fn sine(n: usize) -> WaveFunction {
        let g = Grid::line(0.0, 1.0, n).unwrap();
        WaveFunction::from_fn(g, |x| 2f64.sqrt() * (PI * x[0]).sin()).unwrap()
    }

    #[test]
    fn norms() {
        let g = Grid::line(0.0, 1.0, 63).unwrap();
        let one = WaveFunction::new(g.clone(), vec![1.0; 63]).unwrap();
        assert!((quad_norm_sq(&one).unwrap() - 63.0 / 64.0).abs() < 1e-15);
        assert!((quad_norm_sq(&sine(255)).unwrap() - 1.0).abs() < 1e-4);
        let zero = WaveFunction::new(g, vec![0.0; 63]).unwrap();
        assert_eq!(quad_norm_sq(&zero).unwrap(), 0.0);
    }

    #[test]
    fn gaussian_energies() {
        let phi = gaussian(255);
        let v = PotentialSpec::harmonic(1.0);
        let e0 = energy(&phi, &v, &Params::new(0.0, 1.0).unwrap()).unwrap();
        assert!((e0 - 0.5).abs() < 2e-3);
        let p = Params::new(1.0, 1.0).unwrap();
        let e1 = energy(&phi, &v, &p).unwrap();
        let want = 0.5 + 2f64.powf(-1.5) / PI.sqrt();
        assert!((e1 - want).abs() < 2e-3, "{e1} vs {want}");
        let mu = chemical_potential(&phi, &v, &p).unwrap();
        let want = 0.5 + 1.0 / (2.0 * PI).sqrt();
        assert!((mu - want).abs() < 2e-3, "{mu} vs {want}");
    }

    #[test]
    fn box_mode_energy_and_residual() {
        let phi = sine(255);
        let p = Params::new(0.0, 1.0).unwrap();
        let e = energy(&phi, &PotentialSpec::Box, &p).unwrap();
        assert!((e - PI * PI / 2.0).abs() < 1e-3);
        let r = eigen_residual(&phi, &PotentialSpec::Box, &p, PI * PI / 2.0).unwrap();
        assert!(r < 1e-3, "{r}");
    }

    #[test]
    fn discrete_eigenpair_has_tiny_residual() {
        let n = 31;
        let g = Grid::line(0.0, 1.0, n).unwrap();
        let h = g.axis(0).h();
        let phi = WaveFunction::from_fn(g, |x| (PI * x[0]).sin())
            .unwrap()
            .normalized()
            .unwrap();
        let lambda = 2.0 / (h * h) * (PI * h / 2.0).sin().powi(2);
        let p = Params::new(0.0, 1.0).unwrap();
        assert!(eigen_residual(&phi, &PotentialSpec::Box, &p, lambda).unwrap() < 1e-12);
    }

    #[test]
    fn sigma_zero_shifts_energy_by_beta() {
        let phi = gaussian(255).normalized().unwrap();
        let v = PotentialSpec::harmonic(1.0);
        let e_lin = energy(&phi, &v, &Params::new(0.0, 0.0).unwrap()).unwrap();
        let p = Params::new(3.0, 0.0).unwrap();
        let e = energy(&phi, &v, &p).unwrap();
        assert!((e - e_lin - 3.0).abs() < 1e-13);
        assert_eq!(chemical_potential(&phi, &v, &p).unwrap(), e);
    }

    #[test]
    fn abs_pow_edge_cases() {
        assert_eq!(abs_pow(0.0, 2.5), 0.0);
        assert_eq!(abs_pow(0.0, 0.0), 1.0);
        assert!((abs_pow(-2.0, 3.0) - 8.0).abs() < 1e-15);
        assert!((abs_pow(2.0, 0.5) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn laplacian_quadratic_form_matches_kinetic() {
        let g = Grid::rectangle((-1.0, 1.0), (-2.0, 1.0), [9, 13]).unwrap();
        let phi = g.sample(|x| (x[0] * 3.0).cos() + x[1] * x[0]);
        let ham = Hamiltonian::new(&g, &PotentialSpec::Box, Params::new(0.0, 1.0).unwrap()).unwrap();
        let mut out = vec![0.0; phi.len()];
        neg_half_laplacian(&g, &phi, &mut out);
        let form: f64 = g.cell_volume() * phi.iter().zip(&out).map(|(a, b)| a * b).sum::<f64>();
        assert!((form - ham.kinetic(&phi)).abs() < 1e-12 * form.abs());
    }
}
