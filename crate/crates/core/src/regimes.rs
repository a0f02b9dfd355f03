//! Existence classification, Gagliardo-Nirenberg best constants and the
//! infinite-power bifurcation scan.

use crate::domain::{abs_pow, Grid, Params, PotentialSpec, WaveFunction};
use crate::error::{Error, Result};
use crate::gflow::{continuation_sweep, FlowConfig};
use crate::linalg::{thomas_spd, FastDiagonalization};
use crate::quad::adaptive;

/// Tolerance on `d * sigma - 2` below which the critical clause applies.
pub const CRITICAL_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Verdict {
    Exists,
    ExistsUnique,
    NotExists,
    /// Critical case without a best constant: existence iff `beta > factor * C_b`.
    ConditionalOnBestConstant { threshold_factor: f64 },
}

/// Which existence clause decided the verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Clause {
    /// `d sigma < 2`, any `beta`.
    Subcritical,
    /// `d sigma = 2`, `beta > -(sigma+1)/2 C_b`.
    CriticalAboveThreshold,
    /// `d sigma > 2`, `beta >= 0`.
    SupercriticalRepulsive,
    /// `d sigma = 2`, `beta <= -(sigma+1)/2 C_b`.
    CriticalBelowThreshold,
    /// `d sigma > 2`, `beta < 0`.
    SupercriticalAttractive,
    /// `d sigma = 2`, `beta < 0` and no best constant supplied.
    CriticalUndetermined,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExistenceVerdict {
    pub verdict: Verdict,
    pub clause: Clause,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BestConstant {
    pub d: usize,
    pub sigma: f64,
    pub value: f64,
    pub method: String,
}

pub fn classify_existence(
    d: usize,
    sigma: f64,
    beta: f64,
    cb: Option<&BestConstant>,
) -> Result<ExistenceVerdict> {
    if !(1..=3).contains(&d) {
        return Err(Error::InvalidInput(format!("dimension must be 1, 2 or 3, got {d}")));
    }
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::InvalidParams(format!(
            "existence classification needs sigma > 0, got {sigma}"
        )));
    }
    if !beta.is_finite() {
        return Err(Error::InvalidParams("beta must be finite".into()));
    }
    let ds = d as f64 * sigma;
    let critical = (ds - 2.0).abs() <= CRITICAL_TOL;
    let v = |verdict, clause| Ok(ExistenceVerdict { verdict, clause });
    if critical {
        let factor = -(sigma + 1.0) / 2.0;
        if beta >= 0.0 {
            return v(Verdict::ExistsUnique, Clause::CriticalAboveThreshold);
        }
        return match cb {
            Some(c) => {
                if beta > factor * c.value {
                    v(Verdict::Exists, Clause::CriticalAboveThreshold)
                } else {
                    v(Verdict::NotExists, Clause::CriticalBelowThreshold)
                }
            }
            None => v(
                Verdict::ConditionalOnBestConstant {
                    threshold_factor: factor,
                },
                Clause::CriticalUndetermined,
            ),
        };
    }
    if ds < 2.0 {
        if beta >= 0.0 {
            v(Verdict::ExistsUnique, Clause::Subcritical)
        } else {
            v(Verdict::Exists, Clause::Subcritical)
        }
    } else if beta >= 0.0 {
        v(Verdict::ExistsUnique, Clause::SupercriticalRepulsive)
    } else {
        v(Verdict::NotExists, Clause::SupercriticalAttractive)
    }
}

/// Gagliardo-Nirenberg quotient
/// `||grad f||^{d sigma} ||f||^{2 + (2-d) sigma} / ||f||_{2 sigma + 2}^{2 sigma + 2}`
/// with finite-difference gradients on the grid of `phi`.
pub fn gn_quotient(phi: &WaveFunction, sigma: f64) -> f64 {
    let grid = phi.grid();
    let d = grid.dim() as f64;
    let w = grid.cell_volume();
    let vals = phi.values();
    let l2: f64 = w * vals.iter().map(|v| v * v).sum::<f64>();
    let mut lap = vec![0.0; vals.len()];
    crate::domain::neg_half_laplacian(grid, vals, &mut lap);
    let grad2: f64 = 2.0 * w * vals.iter().zip(&lap).map(|(a, b)| a * b).sum::<f64>();
    let q = 2.0 * sigma + 2.0;
    let lq: f64 = w * vals.iter().map(|&v| abs_pow(v, q)).sum::<f64>();
    grad2.powf(0.5 * d * sigma) * l2.powf(0.5 * (2.0 + (2.0 - d) * sigma)) / lq
}

/// Quotient of a radial function `f(|x|)` with derivative `df`, integrated on `[0, r_max]`.
pub fn gn_quotient_radial<F, G>(d: usize, sigma: f64, f: F, df: G, r_max: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let df_ = d as f64;
    let jac = |r: f64| r.powi(d as i32 - 1);
    let q = 2.0 * sigma + 2.0;
    let tol = 1e-14;
    let l2 = adaptive(&|r| f(r) * f(r) * jac(r), 0.0, r_max, tol)?;
    let g2 = adaptive(&|r| df(r) * df(r) * jac(r), 0.0, r_max, tol)?;
    let lq = adaptive(&|r| abs_pow(f(r), q) * jac(r), 0.0, r_max, tol)?;
    let area = match d {
        1 => 2.0,
        2 => 2.0 * std::f64::consts::PI,
        _ => 4.0 * std::f64::consts::PI,
    };
    Ok((area * g2).powf(0.5 * df_ * sigma) * (area * l2).powf(0.5 * (2.0 + (2.0 - df_) * sigma))
        / (area * lq))
}

/// Solves `-1/2 Delta_h u + u = |u|^{2 sigma} u` on `grid` by Petviashvili iteration.
pub fn free_soliton(grid: &Grid, sigma: f64, max_iters: usize) -> Result<WaveFunction> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::InvalidParams(format!("sigma must be positive, got {sigma}")));
    }
    let omega = 1.0;
    let n = grid.len();
    let c = grid.center();
    let d = grid.dim();
    let mut u = grid.sample(|x| {
        let r2: f64 = (0..d).map(|j| (x[j] - c[j]) * (x[j] - c[j])).sum();
        (-r2).exp()
    });
    let fd = if d == 2 {
        let zeros: Vec<Vec<f64>> = grid.axes().iter().map(|a| vec![0.0; a.n()]).collect();
        Some(FastDiagonalization::new(grid, &zeros)?)
    } else {
        None
    };
    let solve_l = |rhs: &[f64], out: &mut [f64]| -> Result<()> {
        match &fd {
            None => {
                let h = grid.axis(0).h();
                let k = 0.5 / (h * h);
                let diag = vec![omega + 2.0 * k; n];
                thomas_spd(&diag, -k, rhs, out)
            }
            Some(fd) => {
                fd.apply(1.0 / omega, rhs, out);
                out.iter_mut().for_each(|v| *v /= omega);
                Ok(())
            }
        }
    };
    let apply_l = |x: &[f64], out: &mut [f64]| {
        crate::domain::neg_half_laplacian(grid, x, out);
        for i in 0..x.len() {
            out[i] += omega * x[i];
        }
    };
    let expo = (2.0 * sigma + 1.0) / (2.0 * sigma);
    let mut lu = vec![0.0; n];
    let mut next = vec![0.0; n];
    for _ in 0..max_iters {
        let nu: Vec<f64> = u.iter().map(|&v| abs_pow(v, 2.0 * sigma) * v).collect();
        apply_l(&u, &mut lu);
        let num: f64 = u.iter().zip(&lu).map(|(a, b)| a * b).sum();
        let den: f64 = u.iter().zip(&nu).map(|(a, b)| a * b).sum();
        if !(den > 0.0) {
            return Err(Error::InvalidInput("soliton iteration collapsed".into()));
        }
        let m = num / den;
        solve_l(&nu, &mut next)?;
        let scale = m.powf(expo);
        let mut change = 0.0f64;
        let mut peak = 0.0f64;
        for i in 0..n {
            let v = scale * next[i];
            change = change.max((v - u[i]).abs());
            peak = peak.max(v.abs());
            u[i] = v;
        }
        // m carries the rounding of the eigendecomposition, about 1e-13 in 2D
        if (m - 1.0).abs() < 1e-9 && change <= 1e-12 * peak {
            return WaveFunction::new(grid.clone(), u);
        }
    }
    Err(Error::InvalidInput(format!(
        "soliton iteration did not converge in {max_iters} iterations"
    )))
}

/// Best constant from the discrete free soliton on `[-half_width, half_width]^d`
/// with `n` interior nodes per direction.
pub fn estimate_best_constant_on(d: usize, sigma: f64, half_width: f64, n: usize) -> Result<BestConstant> {
    if !(1..=2).contains(&d) {
        return Err(Error::InvalidInput(format!(
            "best-constant estimation supports d = 1 or 2, got {d}"
        )));
    }
    let grid = Grid::centered(d, half_width, n)?;
    let u = free_soliton(&grid, sigma, 10_000)?;
    Ok(BestConstant {
        d,
        sigma,
        value: gn_quotient(&u, sigma),
        method: format!("petviashvili soliton on [-{half_width}, {half_width}]^{d}, n = {n}"),
    })
}

pub fn estimate_best_constant(d: usize, sigma: f64) -> Result<BestConstant> {
    let n = if d == 1 { 1023 } else { 191 };
    estimate_best_constant_on(d, sigma, 12.0, n)
}

pub const PLATEAU_DELTA: f64 = 0.02;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BifurcationClass {
    LinearLimit,
    FlatTop,
    Unresolved,
}

#[derive(Clone, Debug)]
pub struct BifurcationReport {
    pub potential: PotentialSpec,
    pub beta: f64,
    pub sigma_list: Vec<f64>,
    pub peak_values: Vec<f64>,
    /// Measure of `{|phi| > 1 - delta}` per sigma.
    pub plateau_widths: Vec<f64>,
    pub converged: Vec<bool>,
    pub classification: BifurcationClass,
    /// Trap frequency or box length, whichever controls the transition.
    pub threshold_parameter: Option<f64>,
}

fn monotone(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] >= w[0]) || v.windows(2).all(|w| w[1] <= w[0])
}

/// Classifies a peak/plateau history.
pub fn classify_bifurcation(peaks: &[f64], widths: &[f64], cell: f64) -> BifurcationClass {
    let (Some(&p), Some(&w)) = (peaks.last(), widths.last()) else {
        return BifurcationClass::Unresolved;
    };
    let w_prev = if widths.len() >= 2 { widths[widths.len() - 2] } else { 0.0 };
    if (p - 1.0).abs() <= PLATEAU_DELTA && w > 0.0 && w >= w_prev - cell {
        BifurcationClass::FlatTop
    } else if p < 1.0 - PLATEAU_DELTA && monotone(&peaks[peaks.len().min(1)..]) {
        BifurcationClass::LinearLimit
    } else {
        BifurcationClass::Unresolved
    }
}

pub fn bifurcation_scan(
    grid: &Grid,
    potential: &PotentialSpec,
    beta: f64,
    sigma_list: &[f64],
    cfg: &FlowConfig,
) -> Result<BifurcationReport> {
    if sigma_list.is_empty() || sigma_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("sigma list must be nonempty and strictly ascending".into()));
    }
    let params = sigma_list
        .iter()
        .map(|&s| Params::new(beta, s))
        .collect::<Result<Vec<_>>>()?;
    let results = continuation_sweep(grid, potential, &params, cfg)?;
    let cell = grid.cell_volume();
    let peak_values: Vec<f64> = results.iter().map(|r| r.phi.max_abs()).collect();
    let plateau_widths: Vec<f64> = results
        .iter()
        .map(|r| {
            r.phi
                .values()
                .iter()
                .filter(|v| v.abs() > 1.0 - PLATEAU_DELTA)
                .count() as f64
                * cell
        })
        .collect();
    let threshold_parameter = match potential {
        PotentialSpec::Harmonic { .. } | PotentialSpec::Lattice { .. } => potential.gamma(0),
        PotentialSpec::Box => Some(grid.axis(0).length()),
        PotentialSpec::Custom(_) => None,
    };
    Ok(BifurcationReport {
        potential: potential.clone(),
        beta,
        sigma_list: sigma_list.to_vec(),
        classification: classify_bifurcation(&peak_values, &plateau_widths, cell),
        peak_values,
        plateau_widths,
        converged: results.iter().map(|r| r.converged).collect(),
        threshold_parameter,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clause_examples() {
        let v = classify_existence(1, 1.0, -50.0, None).unwrap();
        assert_eq!(v.verdict, Verdict::Exists);
        let v = classify_existence(3, 1.0, -0.1, None).unwrap();
        assert_eq!(v.verdict, Verdict::NotExists);
        let v = classify_existence(2, 1.0, 0.5, None).unwrap();
        assert_eq!(v.verdict, Verdict::ExistsUnique);
        let cb = BestConstant {
            d: 2,
            sigma: 1.0,
            value: 5.85,
            method: "given".into(),
        };
        let v = classify_existence(2, 1.0, -10.0, Some(&cb)).unwrap();
        assert_eq!(v.verdict, Verdict::NotExists);
        assert_eq!(v.clause, Clause::CriticalBelowThreshold);
        let v = classify_existence(2, 1.0, -5.85, Some(&cb)).unwrap();
        assert_eq!(v.verdict, Verdict::NotExists);
        let v = classify_existence(2, 1.0, -1.0, None).unwrap();
        assert_eq!(
            v.verdict,
            Verdict::ConditionalOnBestConstant {
                threshold_factor: -1.0
            }
        );
        assert!(classify_existence(1, 0.0, 1.0, None).is_err());
    }

    #[test]
    fn radial_quotient_is_scale_invariant() {
        for &(d, sigma) in &[(1usize, 1.0), (2, 1.0), (2, 0.7)] {
            let q = |lam: f64| {
                gn_quotient_radial(
                    d,
                    sigma,
                    |r| (-(lam * r).powi(2)).exp(),
                    |r| -2.0 * lam * lam * r * (-(lam * r).powi(2)).exp(),
                    12.0 / lam,
                )
                .unwrap()
            };
            let base = q(1.0);
            for lam in [0.5, 2.0] {
                assert!((q(lam) - base).abs() < 1e-10 * base, "{d} {sigma} {lam}");
            }
        }
    }

    #[test]
    fn classifier_rules() {
        let c = 0.01;
        assert_eq!(
            classify_bifurcation(&[0.9, 0.95, 0.96], &[0.0, 0.0, 0.0], c),
            BifurcationClass::LinearLimit
        );
        assert_eq!(
            classify_bifurcation(&[1.1, 1.02, 1.005], &[0.0, 0.3, 0.4], c),
            BifurcationClass::FlatTop
        );
        assert_eq!(
            classify_bifurcation(&[0.9, 0.95, 0.94, 0.96], &[0.0; 4], c),
            BifurcationClass::Unresolved
        );
        assert_eq!(classify_bifurcation(&[], &[], c), BifurcationClass::Unresolved);
    }
}
