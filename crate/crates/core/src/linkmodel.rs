//! Per-realization link physics: harvested energy, relay power,
//! amplification, SINRs and rates.
//!
//! Everything here is linear-scale. dB values are converted once, at the
//! configuration boundary, with [`db_to_linear`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fading::{CascadeSpec, ExpMrcSpec};
use crate::geometry::GeometrySpec;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Every scenario symbol in one validated record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// PU transmit power P_T in watts.
    pub p_t: f64,
    /// Time-switching factor ρ.
    pub rho: f64,
    /// Energy conversion efficiency η.
    pub eta: f64,
    /// Slot duration T.
    pub slot: f64,
    /// Share A_f of relay power spent forwarding the PU message.
    pub a_f: f64,
    /// Power-splitting factor at the PU receiver.
    pub nu_p: f64,
    /// Power-splitting factor at the SU receiver.
    pub nu_s: f64,
    /// Noise variance N_0 in watts.
    pub n0: f64,
    /// MRC branches L_S at the SU receiver.
    pub l_s: usize,
    pub r_thp: f64,
    pub r_ths: f64,
    /// PU rate floor used by the optimizer.
    pub r_pt: f64,
    pub geometry: GeometrySpec,
    /// PU-Tx → relay MRC channel; `branches` is L_R.
    pub pr_channel: ExpMrcSpec,
    /// Relay → PU-Rx cascade (n_p stages).
    pub rp_channel: CascadeSpec,
    /// Relay → SU-Rx cascade (n_s stages), per receive branch.
    pub rs_channel: CascadeSpec,
}

fn check(ok: bool, field: &'static str, reason: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::invalid(field, reason))
    }
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        check(self.p_t > 0.0 && self.p_t.is_finite(), "p_t", "must be finite and > 0")?;
        check(self.rho > 0.0 && self.rho < 1.0, "rho", "must lie in (0, 1)")?;
        check(self.eta > 0.0 && self.eta <= 1.0, "eta", "must lie in (0, 1]")?;
        check(self.slot > 0.0 && self.slot.is_finite(), "slot", "must be finite and > 0")?;
        check((0.0..=1.0).contains(&self.a_f), "a_f", "must lie in [0, 1]")?;
        check((0.0..=1.0).contains(&self.nu_p), "nu_p", "must lie in [0, 1]")?;
        check((0.0..=1.0).contains(&self.nu_s), "nu_s", "must lie in [0, 1]")?;
        check(self.n0 > 0.0 && self.n0.is_finite(), "n0", "must be finite and > 0")?;
        check(self.l_s >= 1, "l_s", "must be >= 1")?;
        for (v, name) in [(self.r_thp, "r_thp"), (self.r_ths, "r_ths"), (self.r_pt, "r_pt")] {
            check(v >= 0.0 && v.is_finite(), name, "must be finite and >= 0")?;
        }
        self.geometry.validate()?;
        self.pr_channel.validate()?;
        self.rp_channel.validate()?;
        self.rs_channel.validate()
    }

    pub fn l_r(&self) -> usize {
        self.pr_channel.branches
    }

    /// `ρη/(1−ρ)`, the factor shared by every SINR constant.
    fn harvest_gain(&self) -> f64 {
        self.rho * self.eta / (1.0 - self.rho)
    }

    pub fn derived(&self) -> DerivedConstants {
        DerivedConstants::new(self)
    }
}

/// Per-scenario SINR constants and scaled outage thresholds.
///
/// `c1, c2` are `+∞` when `a − J·c ≤ 0` (the PU threshold sits at or above
/// the SINR ceiling); likewise `d1, d2` when `q − ε_e·w ≤ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub q: f64,
    pub e: f64,
    pub w: f64,
    pub j: f64,
    pub eps_e: f64,
    pub c1: f64,
    pub c2: f64,
    pub d1: f64,
    pub d2: f64,
}

impl DerivedConstants {
    pub fn new(p: &SystemParams) -> Self {
        let g = p.harvest_gain();
        let a = (1.0 - p.nu_p) * p.a_f * g * p.p_t;
        let b = p.n0 * p.a_f * g;
        let c = (1.0 - p.a_f) * g * p.p_t;
        let q = (1.0 - p.nu_s) * (1.0 - p.a_f) * g * p.p_t;
        let e = b;
        let w = p.a_f * g * p.p_t;
        let spread = (1.0 - p.rho) * p.slot;
        let j = (p.r_thp / spread).exp2() - 1.0;
        let eps_e = (p.r_ths / spread).exp2() - 1.0;
        let pu_margin = a - j * c;
        let (c1, c2) = if pu_margin > 0.0 {
            (b * j / pu_margin, p.n0 * j / pu_margin)
        } else {
            (f64::INFINITY, f64::INFINITY)
        };
        let su_margin = q - eps_e * w;
        let (d1, d2) = if su_margin > 0.0 {
            (eps_e * p.n0 / su_margin, eps_e * e / su_margin)
        } else {
            (f64::INFINITY, f64::INFINITY)
        };
        Self {
            a,
            b,
            c,
            q,
            e,
            w,
            j,
            eps_e,
            c1,
            c2,
            d1,
            d2,
        }
    }

    /// `a − J·c > 0`: the PU threshold is reachable.
    pub fn pu_feasible(&self) -> bool {
        self.a - self.j * self.c > 0.0
    }

    /// `q − ε_e·w > 0`: the SU threshold is reachable.
    pub fn su_feasible(&self) -> bool {
        self.q - self.eps_e * self.w > 0.0
    }
}

/// One joint draw of the channel state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelRealization {
    /// MRC sum G_PR at the relay.
    pub g_pr: f64,
    /// Relay → PU-Rx power gain g_RP.
    pub g_rp: f64,
    /// MRC sum G_RS at the SU receiver.
    pub g_rs: f64,
    /// Path loss d^α of the selected relay.
    pub d_alpha: f64,
}

fn check_pathloss(d_alpha: f64) -> Result<()> {
    if d_alpha > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("path loss must be > 0, got {d_alpha}")))
    }
}

/// `E_p = ρηP_T T·h/d^α`.
pub fn harvested_energy(p: &SystemParams, h_pr_power: f64, d_alpha: f64) -> Result<f64> {
    check_pathloss(d_alpha)?;
    Ok(p.rho * p.eta * p.p_t * p.slot * h_pr_power / d_alpha)
}

/// `P_k = E_p / ((1−ρ)T)`.
pub fn relay_power(p: &SystemParams, h_pr_power: f64, d_alpha: f64) -> Result<f64> {
    Ok(harvested_energy(p, h_pr_power, d_alpha)? / ((1.0 - p.rho) * p.slot))
}

/// Relay gain `Λ = sqrt(A_f P_k / (P_T G_PR/d^α + N_0))`; the approximate
/// form drops `N_0`.
pub fn amplification_factor(
    p: &SystemParams,
    p_k: f64,
    g_pr: f64,
    d_alpha: f64,
    approximate: bool,
) -> Result<f64> {
    check_pathloss(d_alpha)?;
    let received = p.p_t * g_pr / d_alpha;
    let denom = if approximate { received } else { received + p.n0 };
    if !(denom > 0.0) {
        return Err(Error::Domain(
            "amplification factor needs a positive received power".into(),
        ));
    }
    Ok((p.a_f * p_k / denom).sqrt())
}

/// PU SINR `a·X / (b·g_RP + c·X + N_0)` with `X = g_RP G_PR/d^α`.
pub fn sinr_pu(dc: &DerivedConstants, r: &ChannelRealization, n0: f64) -> f64 {
    let x = r.g_rp * r.g_pr / r.d_alpha;
    dc.a * x / (dc.b * r.g_rp + dc.c * x + n0)
}

/// SU SINR `q·Y / (e·G_RS + w·Y + N_0)` with `Y = G_RS G_PR/d^α`.
pub fn sinr_su(dc: &DerivedConstants, r: &ChannelRealization, n0: f64) -> f64 {
    let y = r.g_rs * r.g_pr / r.d_alpha;
    dc.q * y / (dc.e * r.g_rs + dc.w * y + n0)
}

/// PU SINR assembled from the received-signal model for a given relay gain
/// `Λ`, before the constants are collected.
pub fn sinr_pu_from_gain(p: &SystemParams, r: &ChannelRealization, lambda: f64) -> Result<f64> {
    let p_k = relay_power(p, r.g_pr, r.d_alpha)?;
    let l2 = lambda * lambda;
    let signal = (1.0 - p.nu_p) * l2 * r.g_rp * p.p_t / r.d_alpha * r.g_pr;
    Ok(signal / (p.n0 * r.g_rp * l2 + r.g_rp * (1.0 - p.a_f) * p_k + p.n0))
}

/// SU counterpart of [`sinr_pu_from_gain`].
pub fn sinr_su_from_gain(p: &SystemParams, r: &ChannelRealization, lambda: f64) -> Result<f64> {
    let p_k = relay_power(p, r.g_pr, r.d_alpha)?;
    let l2 = lambda * lambda;
    let signal = (1.0 - p.nu_s) * (1.0 - p.a_f) * p_k * r.g_rs;
    let relayed = l2 * p.p_t * r.g_pr / r.d_alpha * r.g_rs;
    Ok(signal / (p.n0 * l2 * r.g_rs + relayed + p.n0))
}

/// `(1−ρ)T·log2(1+γ)` in bits/s/Hz.
pub fn rate(gamma: f64, rho: f64, slot: f64) -> f64 {
    (1.0 - rho) * slot * gamma.ln_1p() / std::f64::consts::LN_2
}
