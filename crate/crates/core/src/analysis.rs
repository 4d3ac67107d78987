//! Closed-form outage probabilities, throughput and energy efficiency.
//!
//! Both outage events reduce to `G_PR ≤ d^α (α1 + α2/Z)`, where `Z` is the
//! relay→PU gain `g_RP` (with `α1 = c1`, `α2 = c2`) or the SU MRC sum `G_RS`
//! (with `α1 = d2`, `α2 = d1`). `G_PR` is Erlang, `d^α` is Gamma(k, A_e)
//! for `δ = 1`, and `Z`, conditioned on its Poisson index tuple `r`, is a
//! scaled product of gamma variates. Averaging the Erlang CDF over `d^α`
//! leaves a finite binomial sum in `Z`, and each of its terms averages over
//! `Z` to one Meijer G-function:
//!
//! ```text
//! 1 − OP = Σ_r w_r Σ_{i<L_R} Σ_{j≤i}  A_e^k C(i,j) D^j
//!          ────────────────────────────────────────────────
//!           i! Γ(k) C^{j+k} Θ^{j+k} Π_m Γ(s_m)
//!
//!          × G^{1,n+1}_{n+1,1}( B/(CΘ) | 1−i−k, 1−s_1−j−k, …, 1−s_n−j−k ; 0 )
//! ```
//!
//! with `D = λ_p α1`, `C = λ_p α2`, `B = A_e + D`, `s_m = μ_m + r_m` and `Θ`
//! the product of the stage rates. The `r`-sum is truncated with
//! [`truncated_nested_sum`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fading::CascadeSpec;
use crate::linkmodel::{DerivedConstants, SystemParams};
use crate::meijer::{meijer_g, meijer_g_scaled, truncated_nested_sum, MeijerGSpec, SeriesBudget};
use crate::special::{binomial, ln_factorial, ln_gamma, poisson_pmf};

/// Law of a cascaded gain as a Poisson mixture of scaled gamma products.
///
/// For the SU link the MRC sum of `L_S` cascades is represented by a single
/// cascade whose stages carry `μ·L_S` clusters and whose mean is `L_S`.
/// This is exact when the cascade has one stage or `L_S = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureLaw {
    /// Poisson means `κ_m μ_m` per stage.
    pub poisson_means: Vec<f64>,
    /// Base gamma shapes `μ_m` per stage.
    pub base_shapes: Vec<f64>,
    /// `Θ`: `Z = X/Θ` with `X` the product of the stage gamma variates.
    pub theta: f64,
}

impl MixtureLaw {
    pub fn cascade(spec: &CascadeSpec) -> Self {
        Self::mrc_cascade(spec, 1)
    }

    pub fn mrc_cascade(spec: &CascadeSpec, branches: usize) -> Self {
        let l = branches as f64;
        let mut theta = 1.0;
        let mut poisson_means = Vec::with_capacity(spec.level());
        let mut base_shapes = Vec::with_capacity(spec.level());
        for stage in &spec.stages {
            poisson_means.push(stage.kappa * stage.mu * l);
            base_shapes.push(stage.mu * l);
            theta *= stage.rate() * l;
        }
        // overall scale so that the mean is `branches` times the stage product
        theta /= l;
        Self {
            poisson_means,
            base_shapes,
            theta,
        }
    }

    pub fn depth(&self) -> usize {
        self.base_shapes.len()
    }

    pub fn coefficients(&self, index: &[usize]) -> SeriesCoefficients {
        let weight = self
            .poisson_means
            .iter()
            .zip(index)
            .map(|(&m, &r)| poisson_pmf(m, r))
            .product();
        let shapes: Vec<f64> = self
            .base_shapes
            .iter()
            .zip(index)
            .map(|(&mu, &r)| mu + r as f64)
            .collect();
        let ln_gamma_shapes = shapes.iter().map(|&s| ln_gamma(s)).sum();
        SeriesCoefficients {
            weight,
            shapes,
            ln_gamma_shapes,
            theta: self.theta,
        }
    }
}

/// Per-index-tuple quantities of the cascade density series.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesCoefficients {
    /// Product of the Poisson mixing probabilities.
    pub weight: f64,
    /// Conditional gamma shapes `s_m = μ_m + r_m`.
    pub shapes: Vec<f64>,
    /// `Σ ln Γ(s_m)`.
    pub ln_gamma_shapes: f64,
    pub theta: f64,
}

/// Density of a cascaded κ-μ power gain, as the Poisson-weighted sum of
/// `Θ/ΠΓ(s)·G^{n,0}_{0,n}(Θx | s_1−1, …, s_n−1)`.
pub fn pdf_cascaded_power(x: f64, spec: &CascadeSpec, budget: &SeriesBudget) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("density argument must be > 0, got {x}")));
    }
    let law = MixtureLaw::cascade(spec);
    let sum = truncated_nested_sum(
        |r| {
            let co = law.coefficients(r);
            if co.weight == 0.0 {
                return Ok(0.0);
            }
            let b = co.shapes.iter().map(|s| s - 1.0).collect();
            let g = MeijerGSpec::new(co.shapes.len(), 0, vec![], b)?;
            Ok(co.weight * co.theta * (-co.ln_gamma_shapes).exp() * meijer_g(&g, co.theta * x)?)
        },
        law.depth(),
        budget,
    )?;
    if !sum.converged {
        return Err(Error::ConvergenceFailure(format!(
            "density series at x = {x} did not converge within the budget"
        )));
    }
    Ok(sum.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutageResult {
    pub value: f64,
    pub converged: bool,
    pub shells_used: usize,
    pub feasible: bool,
}

impl OutageResult {
    fn certain() -> Self {
        Self {
            value: 1.0,
            converged: true,
            shells_used: 0,
            feasible: false,
        }
    }

    fn never() -> Self {
        Self {
            value: 0.0,
            converged: true,
            shells_used: 0,
            feasible: true,
        }
    }
}

fn require_unit_delta(p: &SystemParams) -> Result<()> {
    let delta = p.geometry.delta();
    if (delta - 1.0).abs() > 1e-12 {
        return Err(Error::UnsupportedParameters(format!(
            "closed-form outage needs δ = 1 (got {delta}); use the Monte-Carlo engine"
        )));
    }
    Ok(())
}

/// Outage probability of the PU link.
pub fn outage_pu_closed_form(p: &SystemParams, budget: &SeriesBudget) -> Result<OutageResult> {
    p.validate()?;
    let dc = p.derived();
    if !dc.pu_feasible() {
        return Ok(OutageResult::certain());
    }
    require_unit_delta(p)?;
    outage_series(p, dc.c1, dc.c2, &MixtureLaw::cascade(&p.rp_channel), budget)
}

/// Outage probability of the SU link.
pub fn outage_su_closed_form(p: &SystemParams, budget: &SeriesBudget) -> Result<OutageResult> {
    p.validate()?;
    let dc = p.derived();
    if !dc.su_feasible() {
        return Ok(OutageResult::certain());
    }
    require_unit_delta(p)?;
    let law = MixtureLaw::mrc_cascade(&p.rs_channel, p.l_s);
    outage_series(p, dc.d2, dc.d1, &law, budget)
}

/// `P(G_PR ≤ d^α (alpha1 + alpha2/Z))` for `δ = 1`.
fn outage_series(
    p: &SystemParams,
    alpha1: f64,
    alpha2: f64,
    law: &MixtureLaw,
    budget: &SeriesBudget,
) -> Result<OutageResult> {
    if alpha2 == 0.0 {
        // zero rate threshold: outage only when G_PR = 0
        return Ok(OutageResult::never());
    }
    let lambda = p.pr_channel.rate;
    let branches = p.l_r();
    let k = p.geometry.order as f64;
    let area = p.geometry.area_factor();
    let d_coef = lambda * alpha1;
    let c_coef = lambda * alpha2;
    let omega = (area + d_coef) / c_coef;
    let x = omega / law.theta;
    let ln_base = k * area.ln() - ln_gamma(k);
    let n = law.depth();

    let sum = truncated_nested_sum(
        |r| {
            let co = law.coefficients(r);
            if co.weight == 0.0 {
                return Ok(0.0);
            }
            let mut acc = 0.0;
            for i in 0..branches {
                let nu = i as f64 + k;
                for j in 0..=i {
                    let pw = j as f64 + k;
                    let mut a_params = Vec::with_capacity(n + 1);
                    a_params.push(1.0 - nu);
                    a_params.extend(co.shapes.iter().map(|s| 1.0 - s - pw));
                    let spec = MeijerGSpec::new(1, n + 1, a_params, vec![0.0])?;
                    let (mantissa, ln_scale) = meijer_g_scaled(&spec, x)?;
                    let d_term = if j == 0 { 0.0 } else { j as f64 * d_coef.ln() };
                    let ln_pref = ln_base - ln_factorial(i)
                        + binomial(i, j).ln()
                        + d_term
                        - pw * (c_coef.ln() + co.theta.ln())
                        - co.ln_gamma_shapes;
                    acc += mantissa * (ln_pref + ln_scale).exp();
                }
            }
            Ok(co.weight * acc)
        },
        n,
        budget,
    )?;

    let value = 1.0 - sum.value;
    if !(-1e-9..=1.0 + 1e-9).contains(&value) {
        return Err(Error::ConvergenceFailure(format!(
            "outage series left the unit interval ({value})"
        )));
    }
    Ok(OutageResult {
        value: value.clamp(0.0, 1.0),
        converged: sum.converged,
        shells_used: sum.shells_used,
        feasible: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Throughput {
    pub tau_p: f64,
    pub tau_s: f64,
    pub tau: f64,
}

/// `τ_P = (1−OP_P)R_thp(1−ρ)`, `τ_S = (1−OP_S)R_ths(1−ρ)`.
pub fn throughput(p: &SystemParams, op_p: f64, op_s: f64) -> Result<Throughput> {
    for (v, name) in [(op_p, "op_p"), (op_s, "op_s")] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Domain(format!("{name} must lie in [0, 1], got {v}")));
        }
    }
    let tau_p = (1.0 - op_p) * p.r_thp * (1.0 - p.rho);
    let tau_s = (1.0 - op_s) * p.r_ths * (1.0 - p.rho);
    Ok(Throughput {
        tau_p,
        tau_s,
        tau: tau_p + tau_s,
    })
}

/// `τ / ((ρ + ν_p + ν_s)·P_T)` in bits/J.
pub fn energy_efficiency(p: &SystemParams, tau: f64) -> Result<f64> {
    let share = p.rho + p.nu_p + p.nu_s;
    if !(share > 0.0) {
        return Err(Error::Domain("ρ + ν_p + ν_s must be > 0".into()));
    }
    Ok(tau / (share * p.p_t))
}

/// PU and SU outage, or the reason the closed form does not apply.
pub fn outage_pair(p: &SystemParams, budget: &SeriesBudget) -> Result<(OutageResult, OutageResult)> {
    Ok((outage_pu_closed_form(p, budget)?, outage_su_closed_form(p, budget)?))
}

/// Scaled thresholds of both links, exposed for diagnostics.
pub fn thresholds(dc: &DerivedConstants) -> [(f64, f64); 2] {
    [(dc.c1, dc.c2), (dc.d2, dc.d1)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fading::{ExpMrcSpec, KappaMuSpec};
    use crate::geometry::GeometrySpec;
    use crate::linkmodel::db_to_linear;

    fn params(n: usize, kappa: f64, k: u32, p_t_db: f64) -> SystemParams {
        SystemParams {
            p_t: db_to_linear(p_t_db),
            rho: 0.6,
            eta: 0.8,
            slot: 1.0,
            a_f: 0.8,
            nu_p: 0.0,
            nu_s: 0.0,
            n0: 1.0,
            l_s: 1,
            r_thp: 0.5,
            r_ths: 0.5,
            r_pt: 0.0,
            geometry: GeometrySpec::new(1.0, 2, 2.0, k).unwrap(),
            pr_channel: ExpMrcSpec::new(0.5, 2).unwrap(),
            rp_channel: CascadeSpec::uniform(n, kappa, 1.0).unwrap(),
            rs_channel: CascadeSpec::uniform(n, kappa, 1.0).unwrap(),
        }
    }

    /// ∫_0^∞ f(x) dx by Simpson after x = t/(1−t).
    fn half_line(f: impl Fn(f64) -> f64, panels: usize) -> f64 {
        let h = 1.0 / panels as f64;
        let mut acc = 0.0;
        for i in 1..panels {
            let t = i as f64 * h;
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(t / (1.0 - t)) / (1.0 - t).powi(2);
        }
        acc * h / 3.0
    }

    /// `1 − OP` given `Z = z`, from the Erlang/Gamma mixture directly.
    fn conditional_success(p: &SystemParams, alpha1: f64, alpha2: f64, z: f64) -> f64 {
        let u = p.pr_channel.rate * (alpha1 + alpha2 / z);
        let a = p.geometry.area_factor();
        let k = p.geometry.order as f64;
        (0..p.l_r())
            .map(|i| {
                let i_f = i as f64;
                (ln_gamma(i_f + k) - ln_factorial(i) - ln_gamma(k) + k * (a / (a + u)).ln()
                    + i_f * (u / (a + u)).ln())
                .exp()
            })
            .sum()
    }

    #[test]
    fn rayleigh_single_stage_matches_quadrature() {
        // Z ~ Exp(1)
        for (k, p_t_db) in [(1, 0.0), (2, 10.0), (1, 20.0)] {
            let p = params(1, 0.0, k, p_t_db);
            let dc = p.derived();
            let oracle = 1.0
                - half_line(|z| (-z).exp() * conditional_success(&p, dc.c1, dc.c2, z), 20_000);
            let op = outage_pu_closed_form(&p, &SeriesBudget::default()).unwrap();
            assert!(op.converged && op.feasible);
            assert!((op.value - oracle).abs() < 1e-7, "k={k}: {} vs {oracle}", op.value);
        }
    }

    #[test]
    fn kappa_mu_single_stage_matches_quadrature() {
        // κ = 1, μ = 1.5: Poisson mixture of Gamma(μ + r, rate μ(1+κ))
        let mut p = params(1, 0.0, 1, 5.0);
        p.rp_channel = CascadeSpec::new(vec![KappaMuSpec::unit(1.0, 1.5).unwrap()]).unwrap();
        let dc = p.derived();
        let stage = p.rp_channel.stages[0];
        let density = |z: f64| -> f64 {
            (0..80)
                .map(|r| {
                    let s = stage.mu + r as f64;
                    let theta = stage.rate();
                    poisson_pmf(stage.poisson_mean(), r)
                        * (s * theta.ln() + (s - 1.0) * z.ln() - theta * z - ln_gamma(s)).exp()
                })
                .sum()
        };
        let oracle = 1.0 - half_line(|z| density(z) * conditional_success(&p, dc.c1, dc.c2, z), 20_000);
        let op = outage_pu_closed_form(&p, &SeriesBudget::default()).unwrap();
        assert!((op.value - oracle).abs() < 1e-7, "{} vs {oracle}", op.value);
    }

    #[test]
    fn double_rayleigh_matches_double_quadrature() {
        // Z = X1·X2 with X_i ~ Exp(1); density 2K0(2√z) avoided on purpose
        let p = params(2, 0.0, 1, 10.0);
        let dc = p.derived();
        let oracle = 1.0
            - half_line(
                |x1| {
                    (-x1).exp()
                        * half_line(
                            |x2| (-x2).exp() * conditional_success(&p, dc.c1, dc.c2, x1 * x2),
                            2_000,
                        )
                },
                2_000,
            );
        let op = outage_pu_closed_form(&p, &SeriesBudget::default()).unwrap();
        assert!((op.value - oracle).abs() < 1e-6, "{} vs {oracle}", op.value);
    }

    #[test]
    fn su_single_stage_mrc_matches_quadrature() {
        // n_s = 1, L_S = 3, κ = 0: G_RS ~ Gamma(3, 1)
        let mut p = params(1, 0.0, 1, 5.0);
        p.rho = 0.2;
        p.a_f = 0.2;
        p.nu_p = 0.2;
        p.nu_s = 0.2;
        p.r_ths = 1.0;
        p.l_s = 3;
        let dc = p.derived();
        let oracle = 1.0
            - half_line(
                |z| 0.5 * z * z * (-z).exp() * conditional_success(&p, dc.d2, dc.d1, z),
                20_000,
            );
        let op = outage_su_closed_form(&p, &SeriesBudget::default()).unwrap();
        assert!((op.value - oracle).abs() < 1e-7, "{} vs {oracle}", op.value);
    }

    #[test]
    fn gates_and_limits() {
        let budget = SeriesBudget::default();
        let mut p = params(2, 1.0, 1, 10.0);
        p.r_thp = 10.0;
        let op = outage_pu_closed_form(&p, &budget).unwrap();
        assert_eq!(op.value, 1.0);
        assert!(!op.feasible);

        let mut p = params(1, 1.0, 1, 10.0);
        p.rho = 1e-7;
        assert!(outage_pu_closed_form(&p, &budget).unwrap().value > 0.999);

        let mut p = params(2, 1.0, 1, 10.0);
        p.a_f = 1.0;
        assert_eq!(outage_su_closed_form(&p, &budget).unwrap().value, 1.0);
        p.a_f = 0.5;
        p.nu_s = 1.0;
        assert_eq!(outage_su_closed_form(&p, &budget).unwrap().value, 1.0);

        let mut p = params(2, 1.0, 1, 10.0);
        p.r_thp = 0.0;
        assert_eq!(outage_pu_closed_form(&p, &budget).unwrap().value, 0.0);
    }

    #[test]
    fn non_unit_delta_is_unsupported() {
        let mut p = params(1, 0.0, 1, 5.0);
        p.geometry = p.geometry.with_delta(2.0).unwrap();
        assert!(matches!(
            outage_pu_closed_form(&p, &SeriesBudget::default()),
            Err(Error::UnsupportedParameters(_))
        ));
    }

    #[test]
    fn tight_budget_reports_non_convergence() {
        let p = params(2, 1.0, 1, 10.0);
        let budget = SeriesBudget {
            rel_tol: 1e-8,
            max_index_per_sum: 2,
        };
        assert!(!outage_pu_closed_form(&p, &budget).unwrap().converged);
    }

    #[test]
    fn monotone_in_power_and_branches() {
        let budget = SeriesBudget::default();
        let mut prev = 1.0;
        for p_t_db in [0.0, 5.0, 10.0, 15.0, 20.0] {
            let v = outage_pu_closed_form(&params(2, 1.0, 1, p_t_db), &budget).unwrap().value;
            assert!(v <= prev + 1e-12);
            prev = v;
        }
        let mut prev = 1.0;
        for l_r in 1..=3 {
            let mut p = params(2, 1.0, 1, 10.0);
            p.pr_channel.branches = l_r;
            let v = outage_pu_closed_form(&p, &budget).unwrap().value;
            assert!(v <= prev + 1e-12);
            prev = v;
        }
    }

    #[test]
    fn cascade_density_normalizes() {
        let spec = CascadeSpec::uniform(2, 1.0, 1.0).unwrap();
        let budget = SeriesBudget::default();
        // x = e^u removes the logarithmic peak at the origin
        let h = 0.05;
        let mass: f64 = (0..=600)
            .map(|i| {
                let x = (-25.0 + i as f64 * h).exp();
                pdf_cascaded_power(x, &spec, &budget).unwrap() * x * h
            })
            .sum();
        assert!((mass - 1.0).abs() < 1e-7, "{mass}");
        // κ = 0, μ = 1, n = 1 is Exp(1)
        let spec = CascadeSpec::uniform(1, 0.0, 1.0).unwrap();
        assert!((pdf_cascaded_power(0.7, &spec, &budget).unwrap() - (-0.7f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn cascade_weights_match_dense_sum() {
        // two-stage Poisson-product weights at a fixed argument: shells vs a dense grid
        let spec = CascadeSpec::uniform(2, 1.0, 1.0).unwrap();
        let law = MixtureLaw::cascade(&spec);
        let x = 0.8;
        let term = |r: &[usize]| -> f64 {
            let co = law.coefficients(r);
            if co.weight == 0.0 {
                return 0.0;
            }
            // conditional density of X1·X2/Θ at x via 2K_ν
            let nu = co.shapes[0] - co.shapes[1];
            let z = co.theta * x;
            co.weight
                * co.theta
                * 2.0
                * z.powf(0.5 * (co.shapes[0] + co.shapes[1]) - 1.0)
                * crate::meijer::bessel_k(nu, 2.0 * z.sqrt())
                * (-co.ln_gamma_shapes).exp()
        };
        let shells = truncated_nested_sum(|r| Ok(term(r)), 2, &SeriesBudget::default()).unwrap();
        let mut dense = 0.0;
        for r1 in 0..100 {
            for r2 in 0..100 {
                dense += term(&[r1, r2]);
            }
        }
        assert!(shells.converged);
        assert!((shells.value - dense).abs() < 1e-8 * dense, "{} vs {dense} ({} shells)", shells.value, shells.shells_used);
    }

    #[test]
    fn throughput_and_efficiency() {
        let mut p = params(1, 0.0, 1, 0.0);
        assert_eq!(throughput(&p, 1.0, 1.0).unwrap().tau, 0.0);
        p.r_thp = 0.5;
        assert!((throughput(&p, 0.0, 1.0).unwrap().tau - 0.2).abs() < 1e-15);
        p.rho = 0.2;
        p.r_thp = 1.0;
        p.r_ths = 1.0;
        assert!((throughput(&p, 0.5, 0.5).unwrap().tau - 0.8).abs() < 1e-15);
        assert!(throughput(&p, 1.5, 0.5).is_err());

        p.nu_p = 0.1;
        p.nu_s = 0.1;
        p.p_t = 1.0;
        assert_eq!(energy_efficiency(&p, 0.0).unwrap(), 0.0);
        assert!((energy_efficiency(&p, 0.8).unwrap() - 2.0).abs() < 1e-15);
    }
}
