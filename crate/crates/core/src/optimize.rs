//! Alternating maximization of the SU rate over the time-switching factor
//! ρ and the power-allocation factor A_f, subject to a PU rate floor.
//!
//! Each half-step solves a one-dimensional constrained problem: the
//! Lagrangian is maximized by projected gradient ascent with
//! finite-difference gradients, and the multiplier of the rate floor is set
//! by bisection so that the floor is met with equality whenever it binds.
//! The box multipliers follow from stationarity at the box edges.
//!
//! Two objectives are available. [`ObjectiveKind::MeanChannel`] evaluates
//! the rates at the mean channel state and is smooth and deterministic.
//! [`ObjectiveKind::MonteCarlo`] uses the SU throughput τ_S with the floor
//! on τ_P, averaged over a fixed set of channel draws; the relay MRC gain is
//! integrated out analytically so the surface stays smooth.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fading::{erlang_survival, sample_cascaded_power, sample_mrc_power_sum};
use crate::geometry::sample_kth_pathloss;
use crate::linkmodel::{rate, sinr_pu, sinr_su, ChannelRealization, SystemParams};
use crate::simulate::trial_rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ObjectiveKind {
    MeanChannel,
    MonteCarlo { trials: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptConfig {
    pub rho0: f64,
    pub af0: f64,
    pub step0: f64,
    pub fd_h: f64,
    pub tol_obj: f64,
    pub tol_kkt: f64,
    pub max_outer: usize,
    pub max_inner: usize,
    pub box_margin: f64,
    pub objective: ObjectiveKind,
}

impl Default for OptConfig {
    fn default() -> Self {
        Self {
            rho0: 0.5,
            af0: 0.5,
            step0: 0.05,
            fd_h: 1e-4,
            tol_obj: 1e-6,
            tol_kkt: 1e-4,
            max_outer: 50,
            max_inner: 500,
            box_margin: 1e-3,
            objective: ObjectiveKind::MeanChannel,
        }
    }
}

impl OptConfig {
    pub fn validate(&self) -> Result<()> {
        let m = self.box_margin;
        if !(m > 0.0 && m < 0.5) {
            return Err(Error::invalid("box_margin", "must lie in (0, 0.5)"));
        }
        for (v, name) in [(self.rho0, "rho0"), (self.af0, "af0")] {
            if !(v >= m && v <= 1.0 - m) {
                return Err(Error::invalid(name, "must lie inside the shrunk box"));
            }
        }
        for (v, name) in [
            (self.step0, "step0"),
            (self.fd_h, "fd_h"),
            (self.tol_obj, "tol_obj"),
            (self.tol_kkt, "tol_kkt"),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, "must be finite and > 0"));
            }
        }
        if self.max_outer == 0 || self.max_inner == 0 {
            return Err(Error::invalid("max_outer/max_inner", "must be >= 1"));
        }
        if let ObjectiveKind::MonteCarlo { trials: 0, .. } = self.objective {
            return Err(Error::invalid("trials", "must be >= 1"));
        }
        Ok(())
    }

    fn lower(&self) -> f64 {
        self.box_margin
    }

    fn upper(&self) -> f64 {
        1.0 - self.box_margin
    }
}

/// Multipliers of `x ≥ lower`, `x ≤ upper` and `R_p ≥ R_pt`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Duals {
    pub lower: f64,
    pub upper: f64,
    pub rate_floor: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InnerResult {
    pub x_star: f64,
    pub objective: f64,
    pub pu_rate: f64,
    pub duals: Duals,
    pub converged: bool,
    pub iterations: usize,
    /// The concavity probe failed and a bracketing search was used instead.
    pub line_search: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptResult {
    pub rho_star: f64,
    pub af_star: f64,
    pub objective: f64,
    pub duals: Duals,
    pub outer_iters: usize,
    pub converged: bool,
    /// `max(0, R_pt − R_p)` at the returned point.
    pub constraint_residual: f64,
    /// Objective after each outer iteration, starting with the first
    /// feasible iterate.
    pub history: Vec<f64>,
}

/// Objective and PU-rate surface over (ρ, A_f).
#[derive(Debug, Clone)]
pub struct Objective {
    params: SystemParams,
    kind: ObjectiveKind,
    mean_channel: ChannelRealization,
    draws: Vec<[f64; 3]>,
}

impl Objective {
    pub fn new(p: &SystemParams, kind: ObjectiveKind) -> Result<Self> {
        p.validate()?;
        let mean_channel = ChannelRealization {
            g_pr: p.pr_channel.mean(),
            g_rp: p.rp_channel.mean(),
            g_rs: p.l_s as f64 * p.rs_channel.mean(),
            d_alpha: p.geometry.mean_pathloss(),
        };
        let draws = match kind {
            ObjectiveKind::MeanChannel => Vec::new(),
            ObjectiveKind::MonteCarlo { trials, seed } => (0..trials as u64)
                .map(|i| {
                    let mut rng = trial_rng(seed, i);
                    [
                        sample_kth_pathloss(&p.geometry, &mut rng),
                        sample_cascaded_power(&p.rp_channel, &mut rng),
                        sample_mrc_power_sum(&p.rs_channel, p.l_s, &mut rng),
                    ]
                })
                .collect(),
        };
        Ok(Self {
            params: p.clone(),
            kind,
            mean_channel,
            draws,
        })
    }

    /// `(objective, PU rate)` at `(ρ, A_f)`.
    pub fn eval(&self, rho: f64, af: f64) -> Result<(f64, f64)> {
        if !(rho > 0.0 && rho < 1.0 && af > 0.0 && af < 1.0) {
            return Err(Error::Domain(format!(
                "(ρ, A_f) = ({rho}, {af}) must lie strictly inside the unit square"
            )));
        }
        let mut p = self.params.clone();
        p.rho = rho;
        p.a_f = af;
        let dc = p.derived();
        match self.kind {
            ObjectiveKind::MeanChannel => {
                let r = &self.mean_channel;
                Ok((
                    rate(sinr_su(&dc, r, p.n0), rho, p.slot),
                    rate(sinr_pu(&dc, r, p.n0), rho, p.slot),
                ))
            }
            ObjectiveKind::MonteCarlo { .. } => {
                let lambda = p.pr_channel.rate;
                let l_r = p.l_r();
                let (mut ok_p, mut ok_s) = (0.0, 0.0);
                for &[d, g_rp, g_rs] in &self.draws {
                    if dc.pu_feasible() {
                        ok_p += erlang_survival(lambda * d * (dc.c1 + dc.c2 / g_rp), l_r);
                    }
                    if dc.su_feasible() {
                        ok_s += erlang_survival(lambda * d * (dc.d2 + dc.d1 / g_rs), l_r);
                    }
                }
                let n = self.draws.len() as f64;
                let share = (1.0 - rho) * p.slot;
                Ok((ok_s / n * p.r_ths * share, ok_p / n * p.r_thp * share))
            }
        }
    }

    pub fn rate_floor(&self) -> f64 {
        self.params.r_pt
    }
}

/// Mean-channel SU rate at `(ρ, A_f)`.
pub fn objective(p: &SystemParams, rho: f64, af: f64) -> Result<f64> {
    Ok(Objective::new(p, ObjectiveKind::MeanChannel)?.eval(rho, af)?.0)
}

/// Central-difference gradient of the objective in (ρ, A_f).
pub fn objective_gradient(obj: &Objective, rho: f64, af: f64, h: f64) -> Result<[f64; 2]> {
    let d_rho = (obj.eval(rho + h, af)?.0 - obj.eval(rho - h, af)?.0) / (2.0 * h);
    let d_af = (obj.eval(rho, af + h)?.0 - obj.eval(rho, af - h)?.0) / (2.0 * h);
    Ok([d_rho, d_af])
}

/// Which coordinate an inner solve moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Axis {
    Rho,
    Af,
}

struct LineProblem<'a> {
    obj: &'a Objective,
    axis: Axis,
    fixed: f64,
    cfg: &'a OptConfig,
}

impl LineProblem<'_> {
    fn eval(&self, x: f64) -> Result<(f64, f64)> {
        match self.axis {
            Axis::Rho => self.obj.eval(x, self.fixed),
            Axis::Af => self.obj.eval(self.fixed, x),
        }
    }

    fn lagrangian(&self, x: f64, mult: f64) -> Result<f64> {
        let (f, r_p) = self.eval(x)?;
        Ok(f + mult * (r_p - self.obj.rate_floor()))
    }

    /// Finite-difference derivatives of objective and PU rate; one-sided at
    /// the box edges.
    fn gradients(&self, x: f64) -> Result<(f64, f64)> {
        let h = self.cfg.fd_h;
        let lo = (x - h).max(self.cfg.lower());
        let hi = (x + h).min(self.cfg.upper());
        let (f_lo, p_lo) = self.eval(lo)?;
        let (f_hi, p_hi) = self.eval(hi)?;
        Ok(((f_hi - f_lo) / (hi - lo), (p_hi - p_lo) / (hi - lo)))
    }

    fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.cfg.lower(), self.cfg.upper())
    }

    fn is_concave(&self) -> Result<bool> {
        let (lo, hi) = (self.cfg.lower(), self.cfg.upper());
        let values = (0..11)
            .map(|i| self.eval(lo + (hi - lo) * i as f64 / 10.0).map(|v| v.0))
            .collect::<Result<Vec<_>>>()?;
        let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-12);
        Ok(values
            .windows(3)
            .all(|w| w[0] - 2.0 * w[1] + w[2] <= 1e-9 * scale))
    }

    /// Projected gradient ascent of the Lagrangian for a fixed multiplier.
    fn ascend(&self, start: f64, mult: f64) -> Result<(f64, bool, usize)> {
        let mut x = self.clamp(start);
        let mut value = self.lagrangian(x, mult)?;
        let mut step = self.cfg.step0;
        for it in 1..=self.cfg.max_inner {
            let (g_f, g_p) = self.gradients(x)?;
            let g = g_f + mult * g_p;
            // projected-gradient stationarity
            let probe = self.clamp(x + 1e-3 * g.signum()) - x;
            if g.abs() < self.cfg.tol_kkt || probe == 0.0 {
                return Ok((x, true, it));
            }
            let mut moved = false;
            while step * g.abs() > 1e-14 {
                let trial = self.clamp(x + step * g);
                let trial_value = self.lagrangian(trial, mult)?;
                if trial_value > value {
                    x = trial;
                    value = trial_value;
                    step *= 1.5;
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
            if !moved {
                // no ascent direction at resolution: a stationary point
                return Ok((x, true, it));
            }
        }
        Ok((x, false, self.cfg.max_inner))
    }

    /// Dense scan plus golden-section refinement over feasible points.
    fn bracket_search(&self) -> Result<Option<f64>> {
        let (lo, hi) = (self.cfg.lower(), self.cfg.upper());
        let floor = self.obj.rate_floor();
        let grid = 400;
        let point = |i: usize| lo + (hi - lo) * i as f64 / grid as f64;
        let mut best: Option<(usize, f64)> = None;
        for i in 0..=grid {
            let (f, r_p) = self.eval(point(i))?;
            if r_p >= floor && best.is_none_or(|(_, b)| f > b) {
                best = Some((i, f));
            }
        }
        let Some((i, _)) = best else { return Ok(None) };
        let (mut a, mut b) = (point(i.saturating_sub(1)), point((i + 1).min(grid)));
        let score = |x: f64| -> Result<f64> {
            let (f, r_p) = self.eval(x)?;
            Ok(if r_p >= floor { f } else { f64::NEG_INFINITY })
        };
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..60 {
            let x1 = b - g * (b - a);
            let x2 = a + g * (b - a);
            if score(x1)? >= score(x2)? {
                b = x2;
            } else {
                a = x1;
            }
        }
        let mid = 0.5 * (a + b);
        Ok(Some(if score(mid)? >= score(point(i))? { mid } else { point(i) }))
    }

    fn solve(&self, start: f64) -> Result<InnerResult> {
        let floor = self.obj.rate_floor();
        if !self.is_concave()? {
            let Some(x) = self.bracket_search()? else {
                return Err(Error::Infeasible(
                    "no point on this coordinate meets the PU rate floor".into(),
                ));
            };
            let (f, r_p) = self.eval(x)?;
            // the floor is active when the search stopped on its boundary
            let mut mult = 0.0;
            if r_p - floor <= self.cfg.tol_kkt {
                let (g_f, g_p) = self.gradients(x)?;
                if g_p != 0.0 {
                    mult = (-g_f / g_p).max(0.0);
                }
            }
            return Ok(InnerResult {
                x_star: x,
                objective: f,
                pu_rate: r_p,
                duals: self.box_duals(x, mult)?,
                converged: true,
                iterations: 0,
                line_search: true,
            });
        }

        let (mut x, mut converged, mut iterations) = self.ascend(start, 0.0)?;
        let mut mult = 0.0;
        if self.eval(x)?.1 < floor {
            // raise the multiplier until the floor is met, then bisect
            let mut hi = 1.0;
            let mut hi_x = None;
            for _ in 0..40 {
                let (xh, c, it) = self.ascend(x, hi)?;
                iterations += it;
                if self.eval(xh)?.1 >= floor {
                    hi_x = Some((xh, c));
                    break;
                }
                hi *= 4.0;
            }
            let Some((mut best_x, mut best_c)) = hi_x else {
                return Err(Error::Infeasible(
                    "no point on this coordinate meets the PU rate floor".into(),
                ));
            };
            let mut lo = 0.0;
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                let (xm, c, it) = self.ascend(best_x, mid)?;
                iterations += it;
                if self.eval(xm)?.1 >= floor {
                    hi = mid;
                    best_x = xm;
                    best_c = c;
                } else {
                    lo = mid;
                }
                if hi - lo <= 1e-12 * hi {
                    break;
                }
            }
            x = best_x;
            converged = best_c;
            mult = hi;
        }
        let (f, r_p) = self.eval(x)?;
        Ok(InnerResult {
            x_star: x,
            objective: f,
            pu_rate: r_p,
            duals: self.box_duals(x, mult)?,
            converged,
            iterations,
            line_search: false,
        })
    }

    /// Box multipliers from stationarity of the Lagrangian at `x`.
    fn box_duals(&self, x: f64, rate_floor: f64) -> Result<Duals> {
        let (g_f, g_p) = self.gradients(x)?;
        let g = g_f + rate_floor * g_p;
        let edge = 1e-12;
        Ok(Duals {
            lower: if x <= self.cfg.lower() + edge { (-g).max(0.0) } else { 0.0 },
            upper: if x >= self.cfg.upper() - edge { g.max(0.0) } else { 0.0 },
            rate_floor,
        })
    }
}

/// Maximize over A_f with ρ held fixed.
pub fn solve_inner_fixed_rho(obj: &Objective, rho: f64, cfg: &OptConfig) -> Result<InnerResult> {
    cfg.validate()?;
    LineProblem {
        obj,
        axis: Axis::Af,
        fixed: rho,
        cfg,
    }
    .solve(cfg.af0)
}

/// Maximize over ρ with A_f held fixed.
pub fn solve_inner_fixed_af(obj: &Objective, af: f64, cfg: &OptConfig) -> Result<InnerResult> {
    cfg.validate()?;
    LineProblem {
        obj,
        axis: Axis::Rho,
        fixed: af,
        cfg,
    }
    .solve(cfg.rho0)
}

/// Largest PU rate reachable in the box; R_p grows with A_f, so only ρ is
/// searched.
/// Largest PU rate over ρ with A_f at its upper bound, and the ρ reaching it.
fn max_pu_rate(obj: &Objective, cfg: &OptConfig) -> Result<(f64, f64)> {
    let af = cfg.upper();
    let (lo, hi) = (cfg.lower(), cfg.upper());
    let mut best = (f64::NEG_INFINITY, lo);
    for i in 0..=400 {
        let rho = lo + (hi - lo) * i as f64 / 400.0;
        let r = obj.eval(rho, af)?.1;
        if r > best.0 {
            best = (r, rho);
        }
    }
    Ok(best)
}

/// Alternating maximization over (ρ, A_f).
pub fn solve_biconvex(p: &SystemParams, cfg: &OptConfig) -> Result<OptResult> {
    cfg.validate()?;
    let obj = Objective::new(p, cfg.objective)?;
    solve_biconvex_with(&obj, cfg)
}

pub fn solve_biconvex_with(obj: &Objective, cfg: &OptConfig) -> Result<OptResult> {
    cfg.validate()?;
    let floor = obj.rate_floor();
    let (reachable, rho_reach) = max_pu_rate(obj, cfg)?;
    if reachable < floor - cfg.tol_kkt {
        return Err(Error::Infeasible(format!(
            "PU rate floor {floor} exceeds the largest reachable PU rate {reachable:.6}"
        )));
    }

    let (mut rho, mut af) = (cfg.rho0, cfg.af0);
    if obj.eval(rho, af)?.1 < floor && reachable >= floor {
        // the configured start misses the floor; begin where the floor is met
        (rho, af) = (rho_reach, cfg.upper());
    }
    let (f0, r0) = obj.eval(rho, af)?;
    let mut current = (r0 >= floor).then_some(f0);
    let mut history: Vec<f64> = current.into_iter().collect();
    let mut duals = Duals::default();
    let mut converged = false;
    let mut outer_iters = 0;

    let accept = |cand: &InnerResult, current: Option<f64>| {
        cand.pu_rate >= floor && current.is_none_or(|c| cand.objective >= c)
    };

    for it in 1..=cfg.max_outer {
        outer_iters = it;
        let before = current;
        let step_cfg = OptConfig {
            af0: af,
            rho0: rho,
            ..*cfg
        };
        match solve_inner_fixed_rho(obj, rho, &step_cfg) {
            Ok(r) if accept(&r, current) => {
                af = r.x_star;
                current = Some(r.objective);
                duals = r.duals;
            }
            Ok(_) | Err(Error::Infeasible(_)) => {}
            Err(e) => return Err(e),
        }
        let step_cfg = OptConfig {
            af0: af,
            rho0: rho,
            ..*cfg
        };
        match solve_inner_fixed_af(obj, af, &step_cfg) {
            Ok(r) if accept(&r, current) => {
                rho = r.x_star;
                current = Some(r.objective);
                duals = r.duals;
            }
            Ok(_) | Err(Error::Infeasible(_)) => {}
            Err(e) => return Err(e),
        }
        if let Some(c) = current {
            history.push(c);
            if let Some(b) = before {
                if c - b < cfg.tol_obj {
                    converged = true;
                    break;
                }
            }
        }
    }

    let Some(objective) = current else {
        return Err(Error::Infeasible(
            "alternating search found no point meeting the PU rate floor".into(),
        ));
    };
    let r_p = obj.eval(rho, af)?.1;
    Ok(OptResult {
        rho_star: rho,
        af_star: af,
        objective,
        duals,
        outer_iters,
        converged,
        constraint_residual: (floor - r_p).max(0.0),
        history,
    })
}

/// Feasible maximum of the objective on the `n × n` grid `i/(n+1)`.
/// Returns `(ρ, A_f, objective)`, or `None` when no grid point is feasible.
pub fn grid_search(obj: &Objective, n: usize) -> Result<Option<(f64, f64, f64)>> {
    let floor = obj.rate_floor();
    let mut best: Option<(f64, f64, f64)> = None;
    for i in 1..=n {
        let rho = i as f64 / (n + 1) as f64;
        for j in 1..=n {
            let af = j as f64 / (n + 1) as f64;
            let (f, r_p) = obj.eval(rho, af)?;
            if r_p >= floor && best.is_none_or(|b| f > b.2) {
                best = Some((rho, af, f));
            }
        }
    }
    Ok(best)
}
