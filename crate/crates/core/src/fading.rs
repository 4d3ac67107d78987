//! Power-gain samplers and densities for κ-μ, cascaded κ-μ and exponential
//! (Rayleigh-power) channels, including MRC sums.
//!
//! A κ-μ power gain with mean `Ω` is drawn as a Poisson mixture of gamma
//! variates: `P ~ Poisson(κμ)`, `G ~ Gamma(μ + P, 1)`, returned as
//! `Ω·G / (μ(1 + κ))`. This is exact for every real `μ > 0`.

use rand::Rng;
use rand_distr::{Distribution, Gamma, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::ln_factorial;

/// Cascades longer than this are multiplied in log space.
const LOG_PRODUCT_THRESHOLD: usize = 4;

/// One κ-μ fading stage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaMuSpec {
    pub kappa: f64,
    pub mu: f64,
    pub mean_power: f64,
}

impl KappaMuSpec {
    pub fn new(kappa: f64, mu: f64, mean_power: f64) -> Result<Self> {
        let spec = Self {
            kappa,
            mu,
            mean_power,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Unit-mean stage.
    pub fn unit(kappa: f64, mu: f64) -> Result<Self> {
        Self::new(kappa, mu, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa >= 0.0 && self.kappa.is_finite()) {
            return Err(Error::invalid("kappa", "must be finite and >= 0"));
        }
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(Error::invalid("mu", "must be finite and > 0"));
        }
        if !(self.mean_power > 0.0 && self.mean_power.is_finite()) {
            return Err(Error::invalid("mean_power", "must be finite and > 0"));
        }
        Ok(())
    }

    /// Rate of the conditional gamma law, `μ(1+κ)/Ω`.
    pub fn rate(&self) -> f64 {
        self.mu * (1.0 + self.kappa) / self.mean_power
    }

    /// Mean of the Poisson mixing index, `κμ`.
    pub fn poisson_mean(&self) -> f64 {
        self.kappa * self.mu
    }

    /// Variance of the power gain, `Ω²(1 + 2κ)/(μ(1+κ)²)`.
    pub fn variance(&self) -> f64 {
        self.mean_power.powi(2) * (1.0 + 2.0 * self.kappa)
            / (self.mu * (1.0 + self.kappa).powi(2))
    }
}

/// Product channel made of independent κ-μ stages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeSpec {
    pub stages: Vec<KappaMuSpec>,
}

impl CascadeSpec {
    pub fn new(stages: Vec<KappaMuSpec>) -> Result<Self> {
        let spec = Self { stages };
        spec.validate()?;
        Ok(spec)
    }

    /// `n` identical unit-mean stages.
    pub fn uniform(n: usize, kappa: f64, mu: f64) -> Result<Self> {
        let stage = KappaMuSpec::unit(kappa, mu)?;
        Self::new(vec![stage; n])
    }

    pub fn validate(&self) -> Result<()> {
        if self.stages.is_empty() {
            return Err(Error::invalid("stages", "cascade needs at least one stage"));
        }
        self.stages.iter().try_for_each(KappaMuSpec::validate)
    }

    pub fn level(&self) -> usize {
        self.stages.len()
    }

    pub fn mean(&self) -> f64 {
        self.stages.iter().map(|s| s.mean_power).product()
    }
}

/// Erlang law of an `L`-branch MRC sum of exponential power gains.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpMrcSpec {
    pub rate: f64,
    pub branches: usize,
}

impl ExpMrcSpec {
    pub fn new(rate: f64, branches: usize) -> Result<Self> {
        let spec = Self { rate, branches };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rate > 0.0 && self.rate.is_finite()) {
            return Err(Error::invalid("lambda_p", "rate must be finite and > 0"));
        }
        if self.branches == 0 {
            return Err(Error::invalid("l_r", "need at least one branch"));
        }
        Ok(())
    }

    pub fn mean(&self) -> f64 {
        self.branches as f64 / self.rate
    }
}

/// A channel whose MRC sum can be sampled: a single κ-μ stage or a cascade.
#[derive(Debug, Clone, Copy)]
pub enum BranchLaw<'a> {
    Single(&'a KappaMuSpec),
    Cascade(&'a CascadeSpec),
}

impl<'a> From<&'a KappaMuSpec> for BranchLaw<'a> {
    fn from(s: &'a KappaMuSpec) -> Self {
        BranchLaw::Single(s)
    }
}

impl<'a> From<&'a CascadeSpec> for BranchLaw<'a> {
    fn from(s: &'a CascadeSpec) -> Self {
        BranchLaw::Cascade(s)
    }
}

fn gamma_draw<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> f64 {
    // shape > 0 is guaranteed by validated specs
    Gamma::new(shape, 1.0)
        .expect("gamma shape validated upstream")
        .sample(rng)
}

/// One κ-μ power-gain draw.
pub fn sample_kappa_mu_power<R: Rng + ?Sized>(spec: &KappaMuSpec, rng: &mut R) -> f64 {
    let lambda = spec.poisson_mean();
    let extra = if lambda > 0.0 {
        Poisson::new(lambda)
            .expect("poisson mean validated upstream")
            .sample(rng)
    } else {
        0.0
    };
    spec.mean_power * gamma_draw(spec.mu + extra, rng) / (spec.mu * (1.0 + spec.kappa))
}

/// One cascaded power-gain draw: the product of the per-stage powers.
pub fn sample_cascaded_power<R: Rng + ?Sized>(spec: &CascadeSpec, rng: &mut R) -> f64 {
    if spec.stages.len() > LOG_PRODUCT_THRESHOLD {
        spec.stages
            .iter()
            .map(|s| sample_kappa_mu_power(s, rng).ln())
            .sum::<f64>()
            .exp()
    } else {
        spec.stages
            .iter()
            .map(|s| sample_kappa_mu_power(s, rng))
            .product()
    }
}

/// Sum of `branches` independent draws of `law`.
pub fn sample_mrc_power_sum<'a, R: Rng + ?Sized>(
    law: impl Into<BranchLaw<'a>>,
    branches: usize,
    rng: &mut R,
) -> f64 {
    let law = law.into();
    (0..branches)
        .map(|_| match law {
            BranchLaw::Single(s) => sample_kappa_mu_power(s, rng),
            BranchLaw::Cascade(c) => sample_cascaded_power(c, rng),
        })
        .sum()
}

/// One Erlang(`L_R`, `λ_p`) draw.
pub fn sample_exp_mrc<R: Rng + ?Sized>(spec: &ExpMrcSpec, rng: &mut R) -> f64 {
    gamma_draw(spec.branches as f64, rng) / spec.rate
}

fn check_nonnegative(x: f64) -> Result<()> {
    if x < 0.0 || x.is_nan() {
        return Err(Error::Domain(format!("x must be >= 0, got {x}")));
    }
    Ok(())
}

/// Erlang density of the MRC sum at the relay.
pub fn pdf_exp_mrc(x: f64, spec: &ExpMrcSpec) -> Result<f64> {
    check_nonnegative(x)?;
    let l = spec.branches;
    if x == 0.0 {
        return Ok(if l == 1 { spec.rate } else { 0.0 });
    }
    let ln = l as f64 * spec.rate.ln() + (l - 1) as f64 * x.ln()
        - spec.rate * x
        - ln_factorial(l - 1);
    Ok(ln.exp())
}

/// Erlang CDF: `1 - Σ_{i<L} (λx)^i e^{-λx} / i!`.
pub fn cdf_exp_mrc(x: f64, spec: &ExpMrcSpec) -> Result<f64> {
    check_nonnegative(x)?;
    Ok(1.0 - erlang_survival(spec.rate * x, spec.branches))
}

/// `Σ_{i<L} t^i e^{-t} / i!`, the Erlang survival at scaled argument `t`.
pub(crate) fn erlang_survival(t: f64, branches: usize) -> f64 {
    let mut term = (-t).exp();
    let mut acc = term;
    for i in 1..branches {
        term *= t / i as f64;
        acc += term;
    }
    acc.min(1.0)
}
