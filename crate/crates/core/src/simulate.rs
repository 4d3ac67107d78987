//! Monte-Carlo estimation of outage, throughput and energy efficiency by
//! direct sampling of the link model.
//!
//! Trial `i` draws from its own ChaCha8 stream `(seed, i)`, and trials are
//! reduced as integer outage counts, so estimates do not depend on batch
//! size, thread count or scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{energy_efficiency, throughput, Throughput};
use crate::error::{Error, Result};
use crate::fading::{sample_cascaded_power, sample_exp_mrc, sample_mrc_power_sum};
use crate::geometry::sample_kth_pathloss;
use crate::linkmodel::{rate, sinr_pu, sinr_su, ChannelRealization, DerivedConstants, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    /// Trials per reduction chunk.
    pub batch: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            trials: 1_000_000,
            seed: 1,
            batch: 65_536,
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::invalid("trials", "must be >= 1"));
        }
        if self.batch == 0 {
            return Err(Error::invalid("batch", "must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    pub channel: ChannelRealization,
    pub gamma_p: f64,
    pub gamma_s: f64,
    pub r_p: f64,
    pub r_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub op_p_hat: f64,
    pub op_s_hat: f64,
    pub se_p: f64,
    pub se_s: f64,
    pub trials: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McMetrics {
    pub outage: McEstimate,
    pub throughput: Throughput,
    pub ee: f64,
}

/// The random stream of trial `index` under `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draws `d^α`, `G_PR`, `g_RP` and `G_RS`, in that order.
pub fn sample_channel<R: Rng + ?Sized>(p: &SystemParams, rng: &mut R) -> ChannelRealization {
    let d_alpha = sample_kth_pathloss(&p.geometry, rng);
    let g_pr = sample_exp_mrc(&p.pr_channel, rng);
    let g_rp = sample_cascaded_power(&p.rp_channel, rng);
    let g_rs = sample_mrc_power_sum(&p.rs_channel, p.l_s, rng);
    ChannelRealization {
        g_pr,
        g_rp,
        g_rs,
        d_alpha,
    }
}

fn evaluate(p: &SystemParams, dc: &DerivedConstants, channel: ChannelRealization) -> TrialOutcome {
    let gamma_p = sinr_pu(dc, &channel, p.n0);
    let gamma_s = sinr_su(dc, &channel, p.n0);
    TrialOutcome {
        channel,
        gamma_p,
        gamma_s,
        r_p: rate(gamma_p, p.rho, p.slot),
        r_s: rate(gamma_s, p.rho, p.slot),
    }
}

/// One sampled network realization with both SINRs and rates.
pub fn run_trial<R: Rng + ?Sized>(p: &SystemParams, rng: &mut R) -> TrialOutcome {
    evaluate(p, &p.derived(), sample_channel(p, rng))
}

fn standard_error(p_hat: f64, n: u64) -> f64 {
    (p_hat * (1.0 - p_hat) / n as f64).sqrt()
}

/// Fraction of trials with `R_p ≤ R_thp` and `R_s ≤ R_ths`.
pub fn estimate_outage(p: &SystemParams, cfg: &McConfig) -> Result<McEstimate> {
    p.validate()?;
    cfg.validate()?;
    let dc = p.derived();
    let base = ChaCha8Rng::seed_from_u64(cfg.seed);
    let chunks = cfg.trials.div_ceil(cfg.batch);
    let (out_p, out_s) = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let start = chunk * cfg.batch;
            let end = (start + cfg.batch).min(cfg.trials);
            let (mut out_p, mut out_s) = (0u64, 0u64);
            for index in start..end {
                let mut rng = base.clone();
                rng.set_stream(index);
                let t = evaluate(p, &dc, sample_channel(p, &mut rng));
                out_p += u64::from(t.r_p <= p.r_thp);
                out_s += u64::from(t.r_s <= p.r_ths);
            }
            (out_p, out_s)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let n = cfg.trials;
    let op_p_hat = out_p as f64 / n as f64;
    let op_s_hat = out_s as f64 / n as f64;
    Ok(McEstimate {
        op_p_hat,
        op_s_hat,
        se_p: standard_error(op_p_hat, n),
        se_s: standard_error(op_s_hat, n),
        trials: n,
    })
}

/// Outage estimates pushed through throughput and energy efficiency.
pub fn estimate_metrics(p: &SystemParams, cfg: &McConfig) -> Result<McMetrics> {
    let outage = estimate_outage(p, cfg)?;
    let tp = throughput(p, outage.op_p_hat, outage.op_s_hat)?;
    Ok(McMetrics {
        outage,
        throughput: tp,
        ee: energy_efficiency(p, tp.tau)?,
    })
}
