//! HPPP relay placement and the path-loss law of the k-th nearest relay.
//!
//! With `A_e = πφ` and `δ = U/α`, the path loss `d^α` of the k-th nearest
//! point satisfies `(d^α)^δ ~ Gamma(k, rate A_e)`, so it is sampled directly
//! instead of simulating a point set per trial.

use rand::Rng;
use rand_distr::{Distribution, Gamma, Poisson};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::special::ln_gamma;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometrySpec {
    /// Relay density φ (points per unit area).
    pub density: f64,
    /// Space dimension U.
    pub dimension: u32,
    /// Path-loss exponent α.
    pub pathloss_exp: f64,
    /// Which nearest relay is selected (k ≥ 1).
    pub order: u32,
    /// Overrides `U/α` when set. One figure configuration fixes δ
    /// independently of U and α.
    pub delta_override: Option<f64>,
}

impl GeometrySpec {
    pub fn new(density: f64, dimension: u32, pathloss_exp: f64, order: u32) -> Result<Self> {
        let spec = Self {
            density,
            dimension,
            pathloss_exp,
            order,
            delta_override: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_delta(mut self, delta: f64) -> Result<Self> {
        self.delta_override = Some(delta);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.density > 0.0 && self.density.is_finite()) {
            return Err(Error::invalid("phi", "density must be finite and > 0"));
        }
        if self.dimension == 0 {
            return Err(Error::invalid("dimension", "must be >= 1"));
        }
        if !(self.pathloss_exp > 0.0 && self.pathloss_exp.is_finite()) {
            return Err(Error::invalid("alpha", "must be finite and > 0"));
        }
        if self.order == 0 {
            return Err(Error::invalid("k", "must be >= 1"));
        }
        if !(self.delta() > 0.0 && self.delta().is_finite()) {
            return Err(Error::invalid("delta", "must be finite and > 0"));
        }
        Ok(())
    }

    pub fn delta(&self) -> f64 {
        self.delta_override
            .unwrap_or(self.dimension as f64 / self.pathloss_exp)
    }

    /// `A_e = πφ`.
    pub fn area_factor(&self) -> f64 {
        PI * self.density
    }

    /// `E[d^α] = Γ(k + 1/δ) / (Γ(k) A_e^{1/δ})`.
    pub fn mean_pathloss(&self) -> f64 {
        let k = self.order as f64;
        let inv = 1.0 / self.delta();
        (ln_gamma(k + inv) - ln_gamma(k) - inv * self.area_factor().ln()).exp()
    }
}

/// Density of `d^α` for the k-th nearest relay.
pub fn pathloss_pdf(x: f64, spec: &GeometrySpec) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("path loss must be > 0, got {x}")));
    }
    let k = spec.order as f64;
    let delta = spec.delta();
    let ae = spec.area_factor();
    let ln = -ae * x.powf(delta) + delta.ln() + k * ae.ln() + (delta * k - 1.0) * x.ln()
        - ln_gamma(k);
    Ok(ln.exp())
}

/// One draw of `d^α` for the k-th nearest relay.
pub fn sample_kth_pathloss<R: Rng + ?Sized>(spec: &GeometrySpec, rng: &mut R) -> f64 {
    let y: f64 = Gamma::new(spec.order as f64, 1.0 / spec.area_factor())
        .expect("validated geometry")
        .sample(rng);
    let x = y.powf(1.0 / spec.delta());
    // y^{1/δ} underflows for huge δ only if y == 0, which Gamma never returns
    x.max(f64::MIN_POSITIVE)
}

/// Poisson point set in the square `[-side/2, side/2]²`.
pub fn generate_hppp_window<R: Rng + ?Sized>(
    density: f64,
    side: f64,
    rng: &mut R,
) -> Vec<[f64; 2]> {
    let mean = density * side * side;
    if !(mean > 0.0) {
        return Vec::new();
    }
    let count = Poisson::new(mean).expect("positive mean").sample(rng) as usize;
    let half = side / 2.0;
    (0..count)
        .map(|_| {
            [
                rng.random_range(-half..half),
                rng.random_range(-half..half),
            ]
        })
        .collect()
}

/// Distance from the origin to the k-th nearest point, if there are at least
/// k points.
pub fn kth_nearest_distance(points: &[[f64; 2]], k: usize) -> Option<f64> {
    if k == 0 || points.len() < k {
        return None;
    }
    let mut d: Vec<f64> = points.iter().map(|p| p[0].hypot(p[1])).collect();
    let (_, kth, _) = d.select_nth_unstable_by(k - 1, |a, b| a.total_cmp(b));
    Some(*kth)
}
