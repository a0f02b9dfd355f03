//! Asymptotic approximations of ground states in a box `prod_j (0, L_j)`.

use crate::error::{Error, Result};
use crate::quad::{bisect, gauss_legendre};
use crate::special::ln_gamma;
use std::f64::consts::PI;

fn check_lengths(l: &[f64]) -> Result<()> {
    if l.is_empty() || l.len() > 3 {
        return Err(Error::InvalidInput(format!(
            "expected 1 to 3 box lengths, got {}",
            l.len()
        )));
    }
    if l.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::InvalidInput("box lengths must be positive".into()));
    }
    Ok(())
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::InvalidParams(format!("sigma must be positive, got {sigma}")));
    }
    Ok(())
}

/// `pi^2/2 sum_j 1/L_j^2`, the linear ground-state energy.
pub fn box_linear_energy(l: &[f64]) -> f64 {
    0.5 * PI * PI * l.iter().map(|v| 1.0 / (v * v)).sum::<f64>()
}

/// Constant Thomas-Fermi amplitude `1/sqrt(prod_j L_j)`.
pub fn box_amplitude(l: &[f64]) -> f64 {
    1.0 / l.iter().product::<f64>().sqrt()
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoxWeakEstimate {
    pub energy: f64,
    pub mu: f64,
    pub amplitude: f64,
}

/// `beta` coefficient of the weak-interaction energy expansion.
pub fn box_weak_coefficient(l: &[f64], sigma: f64) -> f64 {
    let d = l.len() as f64;
    let a0 = box_amplitude(l);
    let ln_ratio = ln_gamma(sigma + 1.5) + ln_gamma(0.5) - ln_gamma(sigma + 2.0);
    let ln_c = d * (sigma + 1.0) * 2f64.ln() + 2.0 * sigma * a0.ln() - (sigma + 1.0).ln()
        - d * PI.ln()
        + d * ln_ratio;
    ln_c.exp()
}

pub fn box_weak_estimate(l: &[f64], beta: f64, sigma: f64) -> Result<BoxWeakEstimate> {
    check_lengths(l)?;
    check_sigma(sigma)?;
    if !beta.is_finite() {
        return Err(Error::InvalidParams("beta must be finite".into()));
    }
    let e0 = box_linear_energy(l);
    let c = box_weak_coefficient(l, sigma);
    Ok(BoxWeakEstimate {
        energy: e0 + beta * c,
        mu: e0 + (sigma + 1.0) * beta * c,
        amplitude: box_amplitude(l),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoxTfEstimate {
    pub energy: f64,
    pub mu: f64,
    pub amplitude: f64,
}

pub fn box_tf_estimate(l: &[f64], beta: f64, sigma: f64) -> Result<BoxTfEstimate> {
    check_lengths(l)?;
    check_sigma(sigma)?;
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::Regime(format!("Thomas-Fermi limit needs beta > 0, got {beta}")));
    }
    let a0 = box_amplitude(l);
    let mu = a0.powf(2.0 * sigma) * beta;
    Ok(BoxTfEstimate {
        energy: mu / (sigma + 1.0),
        mu,
        amplitude: a0,
    })
}

/// Distance below 1 at which the layer quadrature stops.
pub const LAYER_CUT: f64 = 1e-10;
const LAYER_PANELS: usize = 4000;

/// `F(s) = s^{2 sigma + 2}/(sigma + 1) + sigma/(sigma + 1) - s^2`, so that `phi' = sqrt(2 F(phi))`.
pub fn layer_potential(sigma: f64, s: f64) -> f64 {
    let p = 2.0 * sigma + 2.0;
    let u = 1.0 - s;
    if u.abs() < 1e-3 {
        // expansion about s = 1, where direct evaluation cancels catastrophically
        let mut acc = 2.0 * sigma * u * u;
        let mut binom = p * (p - 1.0) / 2.0;
        let mut upow = u * u;
        for k in 3..200 {
            binom *= (p - (k - 1) as f64) / k as f64;
            upow *= -u;
            let term = binom * upow / (sigma + 1.0);
            acc += term;
            if term.abs() <= 1e-18 * acc.abs() {
                break;
            }
        }
        acc
    } else {
        s.abs().powf(p) / (sigma + 1.0) + sigma / (sigma + 1.0) - s * s
    }
}

/// Monotone boundary-layer profile `phi_sigma` on the half line:
/// `phi = -1/2 phi'' + phi^{2 sigma + 1}`, `phi(0) = 0`, `phi(inf) = 1`.
#[derive(Clone, Debug)]
pub struct LayerProfile {
    pub sigma: f64,
    /// `phi'(0) = sqrt(2 sigma / (sigma + 1))`.
    pub slope0: f64,
    /// Requested end of the table; it stops earlier once `phi` rounds to 1.
    pub x_cut: f64,
    xs: Vec<f64>,
    phis: Vec<f64>,
    slopes: Vec<f64>,
    x_tail: f64,
    phi_tail: f64,
}

impl LayerProfile {
    /// Tabulated `(x, phi, phi')` triples.
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.xs
            .iter()
            .zip(&self.phis)
            .zip(&self.slopes)
            .map(|((&x, &p), &d)| (x, p, d))
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Point where the quadrature stopped and the exponential tail takes over.
    pub fn tail_start(&self) -> f64 {
        self.x_tail
    }

    fn tail(&self, x: f64) -> (f64, f64) {
        let c = 2.0 * self.sigma.sqrt();
        let u = (1.0 - self.phi_tail) * (-c * (x - self.x_tail)).exp();
        (1.0 - u, c * u)
    }

    /// `(phi, phi')` at `x`, extended as an odd function.
    pub fn eval_with_slope(&self, x: f64) -> (f64, f64) {
        if x < 0.0 {
            let (p, d) = self.eval_with_slope(-x);
            return (-p, d);
        }
        if x >= self.x_tail {
            return self.tail(x);
        }
        let i = match self.xs.binary_search_by(|v| v.total_cmp(&x)) {
            Ok(i) => return (self.phis[i], self.slopes[i]),
            Err(i) => i - 1,
        };
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let h = x1 - x0;
        let s = (x - x0) / h;
        let (p0, p1) = (self.phis[i], self.phis[i + 1]);
        let (d0, d1) = (self.slopes[i], self.slopes[i + 1]);
        let s2 = s * s;
        let s3 = s2 * s;
        let p = (2.0 * s3 - 3.0 * s2 + 1.0) * p0
            + (s3 - 2.0 * s2 + s) * h * d0
            + (-2.0 * s3 + 3.0 * s2) * p1
            + (s3 - s2) * h * d1;
        let dp = ((6.0 * s2 - 6.0 * s) * (p0 - p1)) / h
            + (3.0 * s2 - 4.0 * s + 1.0) * d0
            + (3.0 * s2 - 2.0 * s) * d1;
        (p, dp)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_with_slope(x).0
    }

    /// Position where the profile reaches `level` in `(0, 1)`.
    pub fn position_of(&self, level: f64) -> Result<f64> {
        if !(level > 0.0 && level < 1.0) {
            return Err(Error::InvalidInput(format!("level must lie in (0, 1), got {level}")));
        }
        if level >= self.phi_tail {
            let c = 2.0 * self.sigma.sqrt();
            return Ok(self.x_tail + ((1.0 - self.phi_tail) / (1.0 - level)).ln() / c);
        }
        let i = self.phis.partition_point(|&p| p < level);
        if i == 0 {
            return Ok(0.0);
        }
        let (lo, hi) = (self.xs[i - 1], self.xs[i]);
        bisect(|x| self.eval(x) - level, lo, hi, 1e-15)
    }
}

/// Tabulates the layer profile up to `x_cut` from the first integral
/// `x(phi) = int_0^phi ds / sqrt(2 F(s))`, with `s = 1 - e^{-t}`.
pub fn solve_layer_ode(sigma: f64, x_cut: f64) -> Result<LayerProfile> {
    check_sigma(sigma)?;
    if !(x_cut.is_finite() && x_cut > 0.0) {
        return Err(Error::InvalidInput(format!("x_cut must be positive, got {x_cut}")));
    }
    let slope0 = (2.0 * sigma / (sigma + 1.0)).sqrt();
    let integrand = |t: f64| -> f64 {
        let u = (-t).exp();
        let f = layer_potential(sigma, 1.0 - u);
        if f <= 0.0 {
            f64::NAN
        } else {
            u / (2.0 * f).sqrt()
        }
    };
    let t_end = -LAYER_CUT.ln();
    let dt = t_end / LAYER_PANELS as f64;
    let mut xs = Vec::with_capacity(LAYER_PANELS + 1);
    let mut phis = Vec::with_capacity(LAYER_PANELS + 1);
    let mut slopes = Vec::with_capacity(LAYER_PANELS + 1);
    xs.push(0.0);
    phis.push(0.0);
    slopes.push(slope0);
    let mut x = 0.0;
    for k in 0..LAYER_PANELS {
        let (a, b) = (k as f64 * dt, (k + 1) as f64 * dt);
        let piece = gauss_legendre(&integrand, a, b);
        if !piece.is_finite() {
            return Err(Error::Quadrature(format!(
                "layer integrand not finite on t in [{a}, {b}] for sigma = {sigma}"
            )));
        }
        x += piece;
        let phi = 1.0 - (-b).exp();
        xs.push(x);
        phis.push(phi);
        slopes.push((2.0 * layer_potential(sigma, phi)).sqrt());
    }
    let x_tail = x;
    let phi_tail = *phis.last().unwrap();
    let mut profile = LayerProfile {
        sigma,
        slope0,
        x_cut,
        xs,
        phis,
        slopes,
        x_tail,
        phi_tail,
    };
    if x_cut < x_tail {
        let (p, d) = profile.eval_with_slope(x_cut);
        let keep = profile.xs.partition_point(|&v| v < x_cut);
        profile.xs.truncate(keep);
        profile.phis.truncate(keep);
        profile.slopes.truncate(keep);
        profile.xs.push(x_cut);
        profile.phis.push(p);
        profile.slopes.push(d);
    } else {
        // tabulate the tail only while phi still resolves below 1
        let step = 0.01;
        let mut xe = x_tail + step;
        while xe <= x_cut {
            let (p, d) = profile.tail(xe.min(x_cut));
            if p <= *profile.phis.last().unwrap() {
                break;
            }
            profile.xs.push(xe.min(x_cut));
            profile.phis.push(p);
            profile.slopes.push(d);
            xe += step;
        }
    }
    Ok(profile)
}

/// Limit of the layer profile as `sigma -> infinity`: `min(sin(sqrt(2) x), 1)`.
pub fn layer_sigma_limit(x: f64) -> f64 {
    let x0 = PI / (2.0 * 2f64.sqrt());
    if x >= x0 {
        1.0
    } else {
        (2f64.sqrt() * x).sin()
    }
}

/// Matched boundary-layer approximation in a box.
#[derive(Clone, Debug)]
pub struct MatchedEstimate {
    pub lengths: Vec<f64>,
    pub beta: f64,
    pub sigma: f64,
    pub mu_ma: f64,
    pub layer: LayerProfile,
}

impl MatchedEstimate {
    fn amplitude(&self) -> f64 {
        (self.mu_ma / self.beta).powf(0.5 / self.sigma)
    }

    /// Normalized 1D factor `phi(y) + phi(l - y) - phi(l)` in stretched units.
    fn factor(layer: &LayerProfile, ell: f64, y: f64) -> (f64, f64) {
        let c = if ell > layer.tail_start() { 1.0 } else { layer.eval(ell) };
        let (a, da) = layer.eval_with_slope(y);
        let (b, db) = layer.eval_with_slope(ell - y);
        (a + b - c, da - db)
    }

    /// `int_0^L g(Phi) dx` in the symmetric form `(l - 2 int_0^{l/2} (1 - g(Phi)) dy) / sqrt(mu)`.
    fn axis_integral<G: Fn(f64) -> f64>(layer: &LayerProfile, len: f64, mu: f64, g: G) -> f64 {
        let rt = mu.sqrt();
        let ell = len * rt;
        let half = 0.5 * ell;
        let defect = |y: f64| 1.0 - g(Self::factor(layer, ell, y).0);
        (ell - 2.0 * layered_quadrature(&defect, half, layer.tail_start())) / rt
    }

    fn axis_gradient(layer: &LayerProfile, len: f64, mu: f64) -> f64 {
        let rt = mu.sqrt();
        let ell = len * rt;
        let slope2 = |y: f64| Self::factor(layer, ell, y).1.powi(2);
        2.0 * rt * layered_quadrature(&slope2, 0.5 * ell, layer.tail_start())
    }

    fn norm_at(layer: &LayerProfile, lengths: &[f64], beta: f64, sigma: f64, mu: f64) -> f64 {
        let a2 = (mu / beta).powf(1.0 / sigma);
        a2 * lengths
            .iter()
            .map(|&l| Self::axis_integral(layer, l, mu, |p| p * p))
            .product::<f64>()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let rt = self.mu_ma.sqrt();
        self.amplitude()
            * x.iter()
                .zip(&self.lengths)
                .map(|(&xj, &l)| {
                    if xj <= 0.0 || xj >= l {
                        0.0
                    } else {
                        Self::factor(&self.layer, l * rt, xj * rt).0
                    }
                })
                .product::<f64>()
    }

    pub fn norm_sq(&self) -> f64 {
        Self::norm_at(&self.layer, &self.lengths, self.beta, self.sigma, self.mu_ma)
    }

    /// Continuum energy functional evaluated on the matched profile.
    pub fn energy(&self) -> f64 {
        let (kin, inter) = self.energy_parts();
        kin + self.beta / (self.sigma + 1.0) * inter
    }

    /// Chemical-potential functional evaluated on the matched profile.
    pub fn chemical_potential(&self) -> f64 {
        let (kin, inter) = self.energy_parts();
        kin + self.beta * inter
    }

    fn energy_parts(&self) -> (f64, f64) {
        let a = self.amplitude();
        let mu = self.mu_ma;
        let q = 2.0 * self.sigma + 2.0;
        let norms: Vec<f64> = self
            .lengths
            .iter()
            .map(|&l| Self::axis_integral(&self.layer, l, mu, |p| p * p))
            .collect();
        let grads: Vec<f64> = self
            .lengths
            .iter()
            .map(|&l| Self::axis_gradient(&self.layer, l, mu))
            .collect();
        let mut kin = 0.0;
        for j in 0..self.lengths.len() {
            let others: f64 = norms
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != j)
                .map(|(_, v)| v)
                .product();
            kin += grads[j] * others;
        }
        kin *= 0.5 * a * a;
        let inter = a.powf(q)
            * self
                .lengths
                .iter()
                .map(|&l| Self::axis_integral(&self.layer, l, mu, |p| p.abs().powf(q)))
                .product::<f64>();
        (kin, inter)
    }
}

/// Composite Gauss-Legendre on `[0, b]`, fine inside the layer and coarse beyond it.
fn layered_quadrature<F: Fn(f64) -> f64>(f: &F, b: f64, layer_end: f64) -> f64 {
    let inner = b.min(layer_end + 5.0);
    let mut s = 0.0;
    let n_in = ((inner / 0.02).ceil() as usize).max(1);
    let h = inner / n_in as f64;
    for k in 0..n_in {
        s += gauss_legendre(f, k as f64 * h, (k + 1) as f64 * h);
    }
    if b > inner {
        let n_out = (((b - inner) / 1.0).ceil() as usize).max(1);
        let h = (b - inner) / n_out as f64;
        for k in 0..n_out {
            s += gauss_legendre(f, inner + k as f64 * h, inner + (k + 1) as f64 * h);
        }
    }
    s
}

pub fn matched_asymptotic(l: &[f64], beta: f64, sigma: f64) -> Result<MatchedEstimate> {
    let tf = box_tf_estimate(l, beta, sigma)?;
    let layer = solve_layer_ode(sigma, 40.0)?;
    matched_asymptotic_with(l, beta, sigma, layer, tf.mu)
}

/// As [`matched_asymptotic`] with a precomputed layer profile.
pub fn matched_asymptotic_with(
    l: &[f64],
    beta: f64,
    sigma: f64,
    layer: LayerProfile,
    mu_tf: f64,
) -> Result<MatchedEstimate> {
    if (layer.sigma - sigma).abs() > 0.0 {
        return Err(Error::InvalidInput("layer profile computed for another sigma".into()));
    }
    let resid = |mu: f64| MatchedEstimate::norm_at(&layer, l, beta, sigma, mu) - 1.0;
    let (mut lo, mut hi) = (0.5 * mu_tf, 2.0 * mu_tf);
    let mut trace = vec![(lo, resid(lo)), (hi, resid(hi))];
    for _ in 0..8 {
        if trace[trace.len() - 2].1 < 0.0 && trace[trace.len() - 1].1 > 0.0 {
            break;
        }
        lo *= 0.25;
        hi *= 4.0;
        trace.push((lo, resid(lo)));
        trace.push((hi, resid(hi)));
    }
    let (rlo, rhi) = (trace[trace.len() - 2].1, trace[trace.len() - 1].1);
    if !(rlo < 0.0 && rhi > 0.0) {
        return Err(Error::Bracket {
            message: format!("normalization not bracketed for beta = {beta}, sigma = {sigma}"),
            trace,
        });
    }
    let mu_ma = bisect(resid, lo, hi, 1e-10 * mu_tf)?;
    Ok(MatchedEstimate {
        lengths: l.to_vec(),
        beta,
        sigma,
        mu_ma,
        layer,
    })
}

/// Which infinite-power limit applies in a 1D box of length `L`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoxLimitCase {
    /// `0 < L <= 1`: constant profile, energy and chemical potential diverge.
    Constant,
    /// `L >= 2`: the linear ground state.
    Linear,
    /// `1 < L < 2`: plateau of height 1 flanked by quarter sine waves.
    FlatTop,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoxSigmaLimit {
    pub length: f64,
    pub beta: f64,
    pub case: BoxLimitCase,
    /// Set when `L` sits exactly on a case boundary (1 or 2).
    pub on_boundary: bool,
    /// Limiting energy; `None` when it diverges.
    pub energy: Option<f64>,
    /// Limiting chemical potential; `None` when it diverges.
    pub mu: Option<f64>,
}

impl BoxSigmaLimit {
    pub fn eval(&self, x: f64) -> f64 {
        let l = self.length;
        if x <= 0.0 || x >= l {
            return 0.0;
        }
        match self.case {
            BoxLimitCase::Constant => 1.0 / l.sqrt(),
            BoxLimitCase::Linear => (2.0 / l).sqrt() * (PI * x / l).sin(),
            BoxLimitCase::FlatTop => {
                let w = 2.0 * (l - 1.0);
                if x < l - 1.0 {
                    (PI * x / w).sin()
                } else if x <= 1.0 {
                    1.0
                } else {
                    (PI * (l + x - 2.0) / w).sin()
                }
            }
        }
    }

    /// Growth rates `(beta/((sigma+1) L^{sigma+1}), beta/L^{sigma+1})` of energy
    /// and chemical potential in the constant case.
    pub fn divergence_rates(&self, sigma: f64) -> Option<(f64, f64)> {
        match self.case {
            BoxLimitCase::Constant => {
                let mu = self.beta / self.length.powf(sigma + 1.0);
                Some((mu / (sigma + 1.0), mu))
            }
            _ => None,
        }
    }
}

pub fn box_sigma_limit(l: f64, beta: f64) -> Result<BoxSigmaLimit> {
    if !(l.is_finite() && l > 0.0) {
        return Err(Error::InvalidInput(format!("box length must be positive, got {l}")));
    }
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::Regime(format!("infinite-power limit needs beta > 0, got {beta}")));
    }
    let (case, energy, mu) = if l <= 1.0 {
        (BoxLimitCase::Constant, None, None)
    } else if l >= 2.0 {
        let e = PI * PI / (2.0 * l * l);
        (BoxLimitCase::Linear, Some(e), Some(e))
    } else {
        let a = l - 1.0;
        (
            BoxLimitCase::FlatTop,
            Some(PI * PI / (8.0 * a)),
            Some(PI * PI / (8.0 * a * a)),
        )
    };
    Ok(BoxSigmaLimit {
        length: l,
        beta,
        case,
        on_boundary: l == 1.0 || l == 2.0,
        energy,
        mu,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weak_box_values() {
        let w = box_weak_estimate(&[1.0], 0.0, 1.0).unwrap();
        assert!((w.energy - PI * PI / 2.0).abs() < 1e-14);
        let w = box_weak_estimate(&[1.0], 0.1, 1.0).unwrap();
        assert!((w.energy - PI * PI / 2.0 - 0.075).abs() < 1e-12);
        assert!((w.mu - PI * PI / 2.0 - 0.15).abs() < 1e-12);
        let w = box_weak_estimate(&[1.0, 1.0], 0.0, 1.0).unwrap();
        assert!((w.energy - PI * PI).abs() < 1e-13);
    }

    #[test]
    fn tf_box_values() {
        let t = box_tf_estimate(&[1.0], 100.0, 2.0).unwrap();
        assert!((t.energy - 100.0 / 3.0).abs() < 1e-12);
        assert_eq!(t.mu, 100.0);
        let t = box_tf_estimate(&[2.0], 10.0, 1.0).unwrap();
        assert!((t.energy - 2.5).abs() < 1e-14 && (t.mu - 5.0).abs() < 1e-14);
        assert!(box_tf_estimate(&[1.0], -1.0, 1.0).is_err());
    }

    #[test]
    fn layer_potential_branches_agree() {
        for &sigma in &[0.5, 1.0, 3.0, 20.0] {
            let s = 1.0 - 1.5e-3;
            let series = {
                let p = 2.0 * sigma + 2.0;
                let u: f64 = 1.0 - s;
                let mut acc = 2.0 * sigma * u * u;
                let mut b = p * (p - 1.0) / 2.0;
                let mut up = u * u;
                for k in 3..200 {
                    b *= (p - (k - 1) as f64) / k as f64;
                    up *= -u;
                    acc += b * up / (sigma + 1.0);
                }
                acc
            };
            let direct = layer_potential(sigma, s);
            assert!((series - direct).abs() < 1e-9 * series, "{sigma}: {series} {direct}");
        }
    }

    #[test]
    fn cubic_layer_is_tanh() {
        let p = solve_layer_ode(1.0, 6.0).unwrap();
        for k in 0..=500 {
            let x = k as f64 * 0.01;
            assert!((p.eval(x) - x.tanh()).abs() < 1e-8);
        }
        assert_eq!(p.slope0, 1.0);
        let w = p.position_of(0.99).unwrap();
        assert!((w - 0.99f64.atanh()).abs() < 1e-9);
    }

    #[test]
    fn layer_limit_reaches_one_continuously() {
        let x0 = PI / (2.0 * 2f64.sqrt());
        assert!((layer_sigma_limit(x0 - 1e-12) - 1.0).abs() < 1e-12);
        assert_eq!(layer_sigma_limit(x0 + 1.0), 1.0);
        assert!((layer_sigma_limit(0.25) - (0.25 * 2f64.sqrt()).sin()).abs() < 1e-15);
    }

    #[test]
    fn flat_top_limit_is_continuous() {
        let lim = box_sigma_limit(1.5, 1.0).unwrap();
        assert_eq!(lim.case, BoxLimitCase::FlatTop);
        assert!((lim.eval(0.5 - 1e-12) - 1.0).abs() < 1e-10);
        assert_eq!(lim.eval(0.5), 1.0);
        assert!((lim.mu.unwrap() - PI * PI / 2.0).abs() < 1e-14);
        assert!((lim.energy.unwrap() - PI * PI / 4.0).abs() < 1e-14);
        let two = box_sigma_limit(2.0, 1.0).unwrap();
        assert_eq!(two.case, BoxLimitCase::Linear);
        assert!(two.on_boundary);
        assert!((two.eval(1.0) - 1.0).abs() < 1e-15);
        let one = box_sigma_limit(1.0, 1.0).unwrap();
        assert_eq!(one.case, BoxLimitCase::Constant);
        let small = box_sigma_limit(0.9, 1.0).unwrap();
        assert!((small.eval(0.45) - 1.054_092_553_389_459_8).abs() < 1e-12);
        let (re, rm) = small.divergence_rates(64.0).unwrap();
        assert!((rm - 0.9f64.powf(-65.0)).abs() < 1e-9 * rm);
        assert!((re * 65.0 - rm).abs() < 1e-9 * rm);
    }
}
