//! Gamma and Beta functions via the Lanczos approximation.

use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural logarithm of |Γ(x)|.
pub fn ln_gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.5 {
        // reflection: Γ(x)Γ(1-x) = π / sin(πx)
        let s = (PI * x).sin();
        if s == 0.0 {
            return f64::INFINITY;
        }
        return (PI / s.abs()).ln() - ln_gamma(1.0 - x);
    }
    let z = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// Γ(x) for real x. Poles at non-positive integers give +∞.
pub fn gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return f64::INFINITY;
    }
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    ln_gamma(x).exp()
}

/// Beta function B(a, b) = Γ(a)Γ(b)/Γ(a+b) for a, b > 0, evaluated in log
/// space so large arguments do not overflow.
pub fn beta(a: f64, b: f64) -> f64 {
    ln_beta(a, b).exp()
}

pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn gamma_integers_and_half_integers() {
        let mut fact = 1.0;
        for n in 1..20 {
            assert!(rel(gamma(n as f64), fact) < 1e-13, "Γ({n})");
            fact *= n as f64;
        }
        assert!(rel(gamma(0.5), PI.sqrt()) < 1e-14);
        assert!(rel(gamma(2.5), 0.75 * PI.sqrt()) < 1e-14);
        assert!(rel(gamma(-0.5), -2.0 * PI.sqrt()) < 1e-13);
        assert!(gamma(0.0).is_infinite());
        assert!(gamma(-3.0).is_infinite());
    }

    #[test]
    fn ln_gamma_large_argument_matches_stirling() {
        let x: f64 = 500.5;
        let stirling = (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + 1.0 / (12.0 * x)
            - 1.0 / (360.0 * x.powi(3));
        assert!(rel(ln_gamma(x), stirling) < 1e-13);
    }

    #[test]
    fn beta_against_direct_quadrature() {
        // oracle: composite Simpson on B(a,b) = 2 int_0^{pi/2} sin^{2a-1} cos^{2b-1}
        let simpson = |a: f64, b: f64| {
            let n = 20_000;
            let h = 0.5 * PI / n as f64;
            let f = |t: f64| 2.0 * t.sin().powf(2.0 * a - 1.0) * t.cos().abs().powf(2.0 * b - 1.0);
            let mut s = f(0.0) + f(0.5 * PI);
            for i in 1..n {
                let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                s += w * f(i as f64 * h);
            }
            s * h / 3.0
        };
        for &(a, b) in &[(1.0, 1.0), (2.0, 3.0), (1.5, 4.25), (3.5, 1.25), (1.0, 1.5)] {
            assert!(rel(beta(a, b), simpson(a, b)) < 1e-9, "B({a},{b})");
        }
        assert!(rel(beta(0.5, 0.5), PI) < 1e-14);
    }

    #[test]
    fn beta_does_not_overflow() {
        let v = ln_beta(400.0, 350.5);
        assert!(v.is_finite() && v < 0.0);
        assert!(beta(400.0, 350.5) > 0.0);
    }
}
