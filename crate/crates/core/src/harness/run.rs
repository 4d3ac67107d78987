use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::Instant;

use super::scenario::{Engine, Scenario, SweepPoint};
use crate::analysis::{energy_efficiency, outage_pu_closed_form, outage_su_closed_form, throughput};
use crate::error::Result;
use crate::meijer::SeriesBudget;
use crate::optimize::{solve_biconvex_with, solve_inner_fixed_af, solve_inner_fixed_rho, Objective, OptConfig};
use crate::simulate::{estimate_metrics, McConfig};

/// One sweep point with every engine's columns; absent engines leave
/// their columns empty.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub series_value: Option<f64>,
    pub sweep_value: f64,
    pub mc_op_p: Option<f64>,
    pub mc_se_p: Option<f64>,
    pub mc_op_s: Option<f64>,
    pub mc_se_s: Option<f64>,
    pub mc_tau: Option<f64>,
    pub mc_ee: Option<f64>,
    pub an_op_p: Option<f64>,
    pub an_op_s: Option<f64>,
    pub an_converged: Option<bool>,
    pub an_tau: Option<f64>,
    pub an_ee: Option<f64>,
    pub rs_joint: Option<f64>,
    pub rho_joint: Option<f64>,
    pub af_joint: Option<f64>,
    pub rs_rho_only: Option<f64>,
    pub rs_af_only: Option<f64>,
    pub rs_fixed: Option<f64>,
    pub error: Option<String>,
    /// Seconds spent on this row; not written to CSV.
    pub wall_time: f64,
}

impl ResultRow {
    fn push_error(&mut self, engine: &str, e: impl std::fmt::Display) {
        let msg = format!("{engine}: {e}");
        self.error = Some(match self.error.take() {
            Some(prev) => format!("{prev}; {msg}"),
            None => msg,
        });
    }
}

fn fill_mc(row: &mut ResultRow, point: &SweepPoint, mc: &McConfig) -> Result<()> {
    let m = estimate_metrics(&point.params, mc)?;
    row.mc_op_p = Some(m.outage.op_p_hat);
    row.mc_se_p = Some(m.outage.se_p);
    row.mc_op_s = Some(m.outage.op_s_hat);
    row.mc_se_s = Some(m.outage.se_s);
    row.mc_tau = Some(m.throughput.tau);
    row.mc_ee = Some(m.ee);
    Ok(())
}

fn fill_analytic(row: &mut ResultRow, point: &SweepPoint, budget: &SeriesBudget) -> Result<()> {
    let p = &point.params;
    let op_p = outage_pu_closed_form(p, budget)?;
    let op_s = outage_su_closed_form(p, budget)?;
    row.an_op_p = Some(op_p.value);
    row.an_op_s = Some(op_s.value);
    row.an_converged = Some(op_p.converged && op_s.converged);
    let tp = throughput(p, op_p.value, op_s.value)?;
    row.an_tau = Some(tp.tau);
    row.an_ee = Some(energy_efficiency(p, tp.tau)?);
    Ok(())
}

fn fill_optimize(row: &mut ResultRow, point: &SweepPoint, cfg: &OptConfig) -> Result<()> {
    let obj = Objective::new(&point.params, cfg.objective)?;
    row.rs_fixed = Some(obj.eval(cfg.rho0, cfg.af0)?.0);
    // single-coordinate variants are reported even when the joint solve fails
    match solve_inner_fixed_af(&obj, cfg.af0, cfg) {
        Ok(r) => row.rs_rho_only = Some(r.objective),
        Err(e) => row.push_error("optimize(rho only)", e),
    }
    match solve_inner_fixed_rho(&obj, cfg.rho0, cfg) {
        Ok(r) => row.rs_af_only = Some(r.objective),
        Err(e) => row.push_error("optimize(af only)", e),
    }
    let joint = solve_biconvex_with(&obj, cfg)?;
    row.rs_joint = Some(joint.objective);
    row.rho_joint = Some(joint.rho_star);
    row.af_joint = Some(joint.af_star);
    Ok(())
}

/// Evaluates every requested engine at one point. Engine failures are
/// recorded in the row's `error` column.
pub fn run_point(point: &SweepPoint, scenario: &Scenario) -> ResultRow {
    let start = Instant::now();
    let mut row = ResultRow {
        series_value: point.series_value,
        sweep_value: point.sweep_value,
        ..ResultRow::default()
    };
    for engine in &scenario.engines {
        let outcome = match engine {
            Engine::Mc => fill_mc(&mut row, point, &scenario.mc),
            Engine::Analytic => fill_analytic(&mut row, point, &scenario.budget),
            Engine::Optimize => fill_optimize(&mut row, point, &scenario.optimize),
        };
        if let Err(e) = outcome {
            let name = match engine {
                Engine::Mc => "mc",
                Engine::Analytic => "analytic",
                Engine::Optimize => "optimize",
            };
            row.push_error(name, e);
        }
    }
    row.wall_time = start.elapsed().as_secs_f64();
    row
}

/// Runs all sweep points concurrently; rows come back in sweep order.
pub fn run_scenario(scenario: &Scenario) -> Result<Vec<ResultRow>> {
    let points = scenario.points()?;
    Ok(points.par_iter().map(|pt| run_point(pt, scenario)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::parse_scenario;

    #[test]
    fn mc_rows_carry_standard_errors() {
        let s = parse_scenario(
            r#"
            engines = ["mc"]
            [sweep]
            variable = "p_t_db"
            values = [0, 10, 20]
            [mc]
            trials = 10000
            "#,
        )
        .unwrap();
        let rows = run_scenario(&s).unwrap();
        assert_eq!(rows.len(), 3);
        for r in &rows {
            assert!(r.mc_se_p.unwrap() > 0.0);
            assert!(r.an_op_p.is_none());
            assert!(r.error.is_none());
        }
    }

    #[test]
    fn unsupported_engine_is_recorded_not_fatal() {
        let s = parse_scenario(
            r#"
            engines = ["mc", "analytic"]
            [params]
            delta = 2.0
            [mc]
            trials = 1000
            "#,
        )
        .unwrap();
        let rows = run_scenario(&s).unwrap();
        assert!(rows[0].mc_op_p.is_some());
        assert!(rows[0].an_op_p.is_none());
        assert!(rows[0].error.as_deref().unwrap().starts_with("analytic:"));
    }
}
