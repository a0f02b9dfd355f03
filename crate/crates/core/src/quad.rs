//! Quadrature and scalar root finding.

use crate::error::{Error, Result};

// 8-point Gauss–Legendre nodes and weights on [-1, 1].
const GL8_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL8_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362_0,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// 8-point Gauss–Legendre rule on a single interval.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut s = 0.0;
    for (x, w) in GL8_NODES.iter().zip(GL8_WEIGHTS.iter()) {
        s += w * (f(mid - half * x) + f(mid + half * x));
    }
    s * half
}

/// Composite 8-point Gauss–Legendre with `panels` equal panels.
pub fn gauss_legendre_composite<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| gauss_legendre(f, a + i as f64 * h, a + (i + 1) as f64 * h))
        .sum()
}

/// Adaptive Gauss–Legendre: bisects panels until the two-half estimate agrees
/// with the whole-panel estimate to `tol` (absolute).
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64> {
        let m = 0.5 * (a + b);
        let left = gauss_legendre(f, a, m);
        let right = gauss_legendre(f, m, b);
        let err = (left + right - whole).abs();
        if err <= tol {
            return Ok(left + right);
        }
        if depth == 0 {
            return Err(Error::Quadrature(format!(
                "adaptive rule on [{a:.6e}, {b:.6e}] stalled with error {err:.3e}"
            )));
        }
        Ok(recurse(f, a, m, left, 0.5 * tol, depth - 1)?
            + recurse(f, m, b, right, 0.5 * tol, depth - 1)?)
    }
    if a == b {
        return Ok(0.0);
    }
    let whole = gauss_legendre(f, a, b);
    recurse(f, a, b, whole, tol.max(f64::EPSILON), 48)
}

/// Bisection for a sign change of `f` on `[lo, hi]`. Terminates when the
/// bracket is narrower than `xtol` (absolute) or after 200 halvings.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, xtol: f64) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || !flo.is_finite() || !fhi.is_finite() {
        return Err(Error::Bracket {
            message: format!("no sign change on [{lo}, {hi}]"),
            trace: vec![(lo, flo), (hi, fhi)],
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= xtol || mid == lo || mid == hi {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
