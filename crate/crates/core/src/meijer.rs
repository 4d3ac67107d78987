//! Numerical Meijer G-function and truncation of nested infinite series.
//!
//! `G^{m,n}_{p,q}(x | a; b)` is evaluated from its Mellin–Barnes integral
//!
//! ```text
//!            1    ⌠  Π_{j≤m} Γ(b_j - t) Π_{j≤n} Γ(1 - a_j + t)
//! G(x) =  ─────   │  ─────────────────────────────────────────────  x^t dt
//!          2πi    ⌡  Π_{j>m} Γ(1 - b_j + t) Π_{j>n} Γ(a_j - t)
//! ```
//!
//! taken along a vertical line `Re t = c` that separates the poles of the
//! `Γ(b_j - t)` factors (right) from those of the `Γ(1 - a_j + t)` factors
//! (left). The integrand is conjugate-symmetric in `Im t`, so only the upper
//! half-line is integrated, with the trapezoidal rule and step halving.
//!
//! The supported class is the one where a straight separating line exists
//! (`a_j - b_k < 1` for `j ≤ n`, `k ≤ m`) and the integral converges
//! absolutely on it (`m + n > (p + q)/2`). That covers every instance the
//! outage series produce. Anything else is reported, never guessed.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::special::{gamma, ln_gamma_complex};

/// Order and parameters of one Meijer-G instance.
#[derive(Debug, Clone, PartialEq)]
pub struct MeijerGSpec {
    pub m: usize,
    pub n: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl MeijerGSpec {
    /// `a` has length `p`, `b` has length `q`.
    pub fn new(m: usize, n: usize, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if m > b.len() {
            return Err(Error::invalid("m", "m must not exceed q"));
        }
        if n > a.len() {
            return Err(Error::invalid("n", "n must not exceed p"));
        }
        if a.iter().chain(&b).any(|v| !v.is_finite()) {
            return Err(Error::invalid("a/b", "parameters must be finite"));
        }
        Ok(Self { m, n, a, b })
    }

    pub fn p(&self) -> usize {
        self.a.len()
    }

    pub fn q(&self) -> usize {
        self.b.len()
    }

    /// `m + n - (p + q)/2`; the integrand decays like `exp(-π·this·|Im t|)`.
    pub fn decay_order(&self) -> f64 {
        (self.m + self.n) as f64 - (self.p() + self.q()) as f64 / 2.0
    }

    /// Open interval of admissible `Re t` for a straight contour.
    fn strip(&self) -> Result<(f64, f64)> {
        for aj in &self.a[..self.n] {
            for bk in &self.b[..self.m] {
                let diff = aj - bk;
                if diff >= 1.0 - 1e-12 {
                    let kind = if (diff - diff.round()).abs() < 1e-12 {
                        "pole collision"
                    } else {
                        "no straight separating contour"
                    };
                    return Err(Error::UnsupportedParameters(format!(
                        "{kind}: a - b = {diff} for a = {aj}, b = {bk}"
                    )));
                }
            }
        }
        let lo = self.a[..self.n]
            .iter()
            .map(|a| a - 1.0)
            .fold(f64::NEG_INFINITY, f64::max);
        let hi = self.b[..self.m]
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        Ok((lo, hi))
    }

    /// Complex log of the integrand at `t`, or `None` where a reciprocal
    /// gamma vanishes.
    fn ln_integrand(&self, t: Complex64, ln_x: f64) -> Option<Complex64> {
        let mut acc = t * ln_x;
        for b in &self.b[..self.m] {
            acc += ln_gamma_complex(b - t)?;
        }
        for a in &self.a[..self.n] {
            acc += ln_gamma_complex(1.0 - a + t)?;
        }
        for b in &self.b[self.m..] {
            acc -= ln_gamma_complex(1.0 - b + t)?;
        }
        for a in &self.a[self.n..] {
            acc -= ln_gamma_complex(a - t)?;
        }
        Some(acc)
    }

    fn ln_integrand_real(&self, c: f64, ln_x: f64) -> f64 {
        match self.ln_integrand(Complex64::new(c, 0.0), ln_x) {
            Some(v) if v.re.is_finite() => v.re,
            _ => f64::INFINITY,
        }
    }
}

/// Truncation controls for nested infinite sums.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SeriesBudget {
    pub rel_tol: f64,
    pub max_index_per_sum: usize,
}

impl Default for SeriesBudget {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            max_index_per_sum: 60,
        }
    }
}

impl SeriesBudget {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(Error::invalid("rel_tol", "must be > 0"));
        }
        if self.max_index_per_sum == 0 {
            return Err(Error::invalid("max_index_per_sum", "must be >= 1"));
        }
        Ok(())
    }
}

/// Outcome of [`truncated_nested_sum`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NestedSum {
    pub value: f64,
    pub converged: bool,
    pub terms_used: usize,
    pub shells_used: usize,
}

/// `G^{m,n}_{p,q}(x)`, using closed forms for the three elementary classes
/// and the contour integral otherwise.
pub fn meijer_g(spec: &MeijerGSpec, x: f64) -> Result<f64> {
    check_argument(x)?;
    match (spec.m, spec.n, spec.p(), spec.q()) {
        (1, 0, 0, 1) => Ok(x.powf(spec.b[0]) * (-x).exp()),
        (1, 1, 1, 1) if spec.a[0] - spec.b[0] < 1.0 => {
            let (a, b) = (spec.a[0], spec.b[0]);
            Ok(gamma(1.0 - a + b) * x.powf(b) * (1.0 + x).powf(a - b - 1.0))
        }
        (2, 0, 0, 2) => {
            let (b1, b2) = (spec.b[0], spec.b[1]);
            Ok(2.0 * x.powf(0.5 * (b1 + b2)) * bessel_k(b1 - b2, 2.0 * x.sqrt()))
        }
        _ => meijer_g_contour(spec, x),
    }
}

fn check_argument(x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("Meijer-G argument must be > 0, got {x}")));
    }
    Ok(())
}

/// Always evaluates the Mellin–Barnes integral, even when a closed form
/// exists.
pub fn meijer_g_contour(spec: &MeijerGSpec, x: f64) -> Result<f64> {
    let (mantissa, ln_scale) = meijer_g_scaled(spec, x)?;
    Ok(mantissa * ln_scale.exp())
}

/// Contour evaluation returning `(m, s)` with `G = m·e^s`, for instances
/// whose value would overflow or underflow `f64`.
pub fn meijer_g_scaled(spec: &MeijerGSpec, x: f64) -> Result<(f64, f64)> {
    check_argument(x)?;
    let decay = spec.decay_order();
    if decay <= 0.0 {
        return Err(Error::ConvergenceFailure(format!(
            "contour integral does not converge absolutely (m+n-(p+q)/2 = {decay})"
        )));
    }
    let (lo, hi) = spec.strip()?;
    let ln_x = x.ln();
    let c = choose_abscissa(spec, lo, hi, ln_x)?;

    let magnitude = |y: f64| -> f64 {
        spec.ln_integrand(Complex64::new(c, y), ln_x)
            .map_or(f64::NEG_INFINITY, |v| v.re)
    };
    let peak = magnitude(0.0);
    if !peak.is_finite() {
        return Err(Error::ConvergenceFailure(
            "contour integrand is not finite on the real axis".into(),
        ));
    }
    let integrand = |y: f64| -> f64 {
        match spec.ln_integrand(Complex64::new(c, y), ln_x) {
            Some(v) => (v.re - peak).exp() * v.im.cos(),
            None => 0.0,
        }
    };

    // Cut-off where the integrand has fallen e^-40 below its value at y = 0.
    let mut y_max = 1.0;
    loop {
        let tail = magnitude(y_max).max(magnitude(1.5 * y_max));
        if tail < peak - 40.0 {
            break;
        }
        y_max *= 2.0;
        if y_max > 1e4 {
            return Err(Error::ConvergenceFailure(
                "contour integrand does not decay".into(),
            ));
        }
    }

    let mut panels = 64usize;
    let mut h = y_max / panels as f64;
    let mut samples: Vec<f64> = (0..=panels).map(|i| integrand(i as f64 * h)).collect();
    let trapezoid = |s: &[f64], h: f64| -> (f64, f64) {
        let last = s.len() - 1;
        let (mut sum, mut abs) = (0.0, 0.0);
        for (i, v) in s.iter().enumerate() {
            let w = if i == 0 || i == last { 0.5 } else { 1.0 };
            sum += w * v;
            abs += w * v.abs();
        }
        (sum * h, abs * h)
    };
    let (mut estimate, _) = trapezoid(&samples, h);
    loop {
        let refined_h = h / 2.0;
        let mut refined = Vec::with_capacity(2 * panels + 1);
        for (i, v) in samples.iter().enumerate() {
            refined.push(*v);
            if i < panels {
                refined.push(integrand((2 * i + 1) as f64 * refined_h));
            }
        }
        panels *= 2;
        h = refined_h;
        samples = refined;
        let (next, abs) = trapezoid(&samples, h);
        let delta = (next - estimate).abs();
        estimate = next;
        if delta <= 1e-13 * abs + 1e-11 * next.abs() {
            if abs > 1e10 * next.abs() {
                return Err(Error::ConvergenceFailure(format!(
                    "cancellation too severe (|∫f| / |G| = {:.3e})",
                    abs / next.abs()
                )));
            }
            return Ok((estimate / PI, peak));
        }
        if panels >= 1 << 20 {
            return Err(Error::ConvergenceFailure(
                "trapezoidal refinement did not settle".into(),
            ));
        }
    }
}

/// Picks `Re t` inside the strip where the real-axis integrand is smallest
/// (its saddle point), which keeps the oscillatory part of the integrand
/// least cancelling.
fn choose_abscissa(spec: &MeijerGSpec, lo: f64, hi: f64, ln_x: f64) -> Result<f64> {
    let (left, right) = match (lo.is_finite(), hi.is_finite()) {
        (true, true) => {
            if !(hi > lo) {
                return Err(Error::UnsupportedParameters("empty contour strip".into()));
            }
            (lo, hi)
        }
        (true, false) => (lo, lo + 80.0),
        (false, true) => (hi - 80.0, hi),
        (false, false) => (-40.0, 40.0),
    };
    let phi = |c: f64| spec.ln_integrand_real(c, ln_x);
    let grid = 200;
    let width = right - left;
    let (mut best_c, mut best) = (f64::NAN, f64::INFINITY);
    for i in 1..grid {
        let c = left + width * i as f64 / grid as f64;
        let v = phi(c);
        if v < best {
            best = v;
            best_c = c;
        }
    }
    if !best_c.is_finite() {
        return Err(Error::ConvergenceFailure(
            "integrand is not finite anywhere on the contour strip".into(),
        ));
    }
    // golden-section refinement on the neighbouring grid cells
    let step = width / grid as f64;
    let (mut a, mut b) = ((best_c - step).max(left + 1e-3 * step), (best_c + step).min(right - 1e-3 * step));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (phi(x1), phi(x2));
    for _ in 0..60 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = phi(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = phi(x2);
        }
    }
    let c = 0.5 * (a + b);
    Ok(if phi(c).is_finite() { c } else { best_c })
}

/// Modified Bessel function `K_ν(z)` for real `ν` and `z > 0`, from
/// `K_ν(z) = ∫_0^∞ exp(-z cosh t) cosh(νt) dt`.
pub fn bessel_k(nu: f64, z: f64) -> f64 {
    // the scaled integrand has dropped below e^-60 past t_max
    let mut t_max: f64 = 1.0;
    while z * t_max.cosh() - nu.abs() * t_max - z < 60.0 {
        t_max *= 1.5;
    }
    let mut panels = 32usize;
    let f = |t: f64| {
        let base = z - z * t.cosh();
        0.5 * ((base + nu * t).exp() + (base - nu * t).exp())
    };
    let eval = |panels: usize| {
        let h = t_max / panels as f64;
        let mut s = 0.5 * (f(0.0) + f(t_max));
        for i in 1..panels {
            s += f(i as f64 * h);
        }
        s * h
    };
    let mut prev = eval(panels);
    loop {
        panels *= 2;
        let next = eval(panels);
        if (next - prev).abs() <= 1e-15 * next.abs() || panels > 1 << 16 {
            return next * (-z).exp();
        }
        prev = next;
    }
}

/// Sums `term` over all non-negative index vectors of length `depth`, shell
/// by shell in increasing total order. Stops once three consecutive shells
/// each add less than `rel_tol · |partial sum|`; gives up (not converged)
/// after shell `max_index_per_sum`.
pub fn truncated_nested_sum<F>(mut term: F, depth: usize, budget: &SeriesBudget) -> Result<NestedSum>
where
    F: FnMut(&[usize]) -> Result<f64>,
{
    budget.validate()?;
    if depth == 0 {
        return Err(Error::invalid("depth", "nested sum needs depth >= 1"));
    }
    let mut partial = 0.0;
    let mut terms_used = 0;
    let mut quiet = 0;
    let mut index = vec![0usize; depth];
    for order in 0..=budget.max_index_per_sum {
        let mut shell = 0.0;
        let mut failure = None;
        for_each_composition(order, &mut index, 0, &mut |idx| {
            if failure.is_some() {
                return;
            }
            terms_used += 1;
            match term(idx) {
                Ok(v) if v.is_finite() => shell += v,
                Ok(_) => {
                    failure = Some(Error::NonFiniteTerm {
                        index: idx.to_vec(),
                    })
                }
                Err(e) => failure = Some(e),
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        partial += shell;
        if shell.abs() <= budget.rel_tol * partial.abs() {
            quiet += 1;
            if quiet >= 3 {
                return Ok(NestedSum {
                    value: partial,
                    converged: true,
                    terms_used,
                    shells_used: order + 1,
                });
            }
        } else {
            quiet = 0;
        }
    }
    Ok(NestedSum {
        value: partial,
        converged: false,
        terms_used,
        shells_used: budget.max_index_per_sum + 1,
    })
}

fn for_each_composition(
    remaining: usize,
    index: &mut [usize],
    pos: usize,
    visit: &mut dyn FnMut(&[usize]),
) {
    if pos + 1 == index.len() {
        index[pos] = remaining;
        visit(index);
        return;
    }
    for first in (0..=remaining).rev() {
        index[pos] = first;
        for_each_composition(remaining - first, index, pos + 1, visit);
    }
}
