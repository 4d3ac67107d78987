//! Cross-engine validation grid: closed-form outage against Monte Carlo.

use serde::Serialize;

use super::scenario::ParamSet;
use crate::analysis::{outage_pu_closed_form, outage_su_closed_form};
use crate::error::Result;
use crate::meijer::SeriesBudget;
use crate::simulate::{estimate_outage, McConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Link {
    Pu,
    Su,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    pub link: Link,
    pub cascade: u32,
    pub kappa: f64,
    pub k: u32,
    pub p_t_db: f64,
    pub params: ParamSet,
}

impl GridPoint {
    pub fn label(&self) -> String {
        let link = match self.link {
            Link::Pu => "OP_P",
            Link::Su => "OP_S",
        };
        format!(
            "{link} n={} kappa={} k={} P_T={}dB",
            self.cascade, self.kappa, self.k, self.p_t_db
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridCheck {
    pub label: String,
    pub analytic: f64,
    pub converged: bool,
    pub mc: f64,
    pub se: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Cascade level n ∈ {1,2} (both links), κ ∈ {0,1}, μ = 1, k ∈ {1,2} and
/// five transmit powers; PU points use the PU-outage reference
/// configuration, SU points the SU-outage one with a single SU antenna.
pub fn validation_grid() -> Vec<GridPoint> {
    let mut out = Vec::new();
    for link in [Link::Pu, Link::Su] {
        for cascade in [1u32, 2] {
            for kappa in [0.0, 1.0] {
                for k in [1u32, 2] {
                    for p_t_db in [0.0, 5.0, 10.0, 15.0, 20.0] {
                        let base = match link {
                            Link::Pu => ParamSet::default(),
                            Link::Su => ParamSet {
                                rho: 0.2,
                                a_f: 0.2,
                                nu_p: 0.2,
                                nu_s: 0.2,
                                r_ths: 1.0,
                                l_s: 1,
                                ..ParamSet::default()
                            },
                        };
                        let params = ParamSet {
                            n_p: cascade,
                            n_s: cascade,
                            kappa,
                            mu: 1.0,
                            k,
                            l_r: 2,
                            p_t_db: Some(p_t_db),
                            ..base
                        };
                        out.push(GridPoint {
                            link,
                            cascade,
                            kappa,
                            k,
                            p_t_db,
                            params,
                        });
                    }
                }
            }
        }
    }
    out
}

/// Evaluates both engines on every grid point. A point passes when
/// `|analytic − MC| ≤ max(3·SE, 0.01)` and the series converged.
pub fn run_validation(mc: &McConfig, budget: &SeriesBudget) -> Result<Vec<GridCheck>> {
    validation_grid()
        .iter()
        .map(|pt| {
            let p = pt.params.to_system()?;
            let est = estimate_outage(&p, mc)?;
            let (closed, mc_value, se) = match pt.link {
                Link::Pu => (outage_pu_closed_form(&p, budget)?, est.op_p_hat, est.se_p),
                Link::Su => (outage_su_closed_form(&p, budget)?, est.op_s_hat, est.se_s),
            };
            let tolerance = (3.0 * se).max(0.01);
            Ok(GridCheck {
                label: pt.label(),
                analytic: closed.value,
                converged: closed.converged,
                mc: mc_value,
                se,
                tolerance,
                pass: closed.converged && (closed.value - mc_value).abs() <= tolerance,
            })
        })
        .collect()
}
