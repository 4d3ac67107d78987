//! Gamma-function helpers shared by the Meijer-G evaluator and the series
//! expansions.
//!
//! The complex log-gamma uses the Lanczos approximation (g = 7, nine
//! coefficients) on `Re z >= 0.5` and the upward recurrence below that.
//! Only `exp` of sums of these values is ever consumed, so the branch of the
//! imaginary part is irrelevant.

use num_complex::Complex64;
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn ln_gamma_lanczos(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut acc = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// `ln Γ(z)` for complex `z`. Returns `None` at the poles (non-positive
/// integers on the real axis).
pub fn ln_gamma_complex(z: Complex64) -> Option<Complex64> {
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        return None;
    }
    if z.re >= 0.5 {
        return Some(ln_gamma_lanczos(z));
    }
    let shift = (0.5 - z.re).ceil();
    let mut correction = Complex64::new(0.0, 0.0);
    let mut w = z;
    for _ in 0..shift as usize {
        correction += w.ln();
        w += 1.0;
    }
    Some(ln_gamma_lanczos(w) - correction)
}

/// `ln |Γ(x)|` for real `x`; `+inf` at the poles.
pub fn ln_gamma(x: f64) -> f64 {
    match ln_gamma_complex(Complex64::new(x, 0.0)) {
        Some(v) => v.re,
        None => f64::INFINITY,
    }
}

/// `Γ(x)` for real `x > 0`.
pub fn gamma(x: f64) -> f64 {
    ln_gamma(x).exp()
}

pub fn ln_factorial(n: usize) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k))
        .exp()
        .round()
}

/// Poisson probability mass `e^{-m} m^r / r!`, exact for `m = 0`.
pub fn poisson_pmf(mean: f64, r: usize) -> f64 {
    if mean == 0.0 {
        return if r == 0 { 1.0 } else { 0.0 };
    }
    (r as f64 * mean.ln() - mean - ln_factorial(r)).exp()
}
