//! Scenario files: a flat, versioned TOML schema mapped onto
//! [`SystemParams`] plus sweep, engine and budget settings.

use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::error::{Error, Result};
use crate::fading::{CascadeSpec, ExpMrcSpec, KappaMuSpec};
use crate::geometry::GeometrySpec;
use crate::linkmodel::{db_to_linear, SystemParams};
use crate::meijer::SeriesBudget;
use crate::optimize::{ObjectiveKind, OptConfig};
use crate::simulate::McConfig;

pub const SCHEMA_VERSION: u32 = 1;

/// Every scenario symbol as a flat record. Defaults are the PU-outage
/// reference configuration with unit noise power, so `p_t_db` reads as the
/// transmit SNR.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParamSet {
    pub p_t_db: Option<f64>,
    pub p_t_w: Option<f64>,
    pub rho: f64,
    pub eta: f64,
    pub slot: f64,
    pub a_f: f64,
    pub nu_p: f64,
    pub nu_s: f64,
    pub n0: f64,
    pub l_r: u32,
    pub l_s: u32,
    pub r_thp: f64,
    pub r_ths: f64,
    pub r_pt: f64,
    pub lambda_p: f64,
    pub n_p: u32,
    pub n_s: u32,
    pub kappa: f64,
    pub mu: f64,
    pub omega: f64,
    pub phi: f64,
    pub dimension: u32,
    pub alpha: f64,
    /// Overrides `dimension/alpha` when set.
    pub delta: Option<f64>,
    pub k: u32,
}

impl Default for ParamSet {
    fn default() -> Self {
        Self {
            p_t_db: None,
            p_t_w: None,
            rho: 0.6,
            eta: 0.8,
            slot: 1.0,
            a_f: 0.8,
            nu_p: 0.0,
            nu_s: 0.0,
            n0: 1.0,
            l_r: 2,
            l_s: 2,
            r_thp: 0.5,
            r_ths: 0.5,
            r_pt: 0.0,
            lambda_p: 0.5,
            n_p: 2,
            n_s: 2,
            kappa: 1.0,
            mu: 1.0,
            omega: 1.0,
            phi: 1.0,
            dimension: 2,
            alpha: 2.0,
            delta: None,
            k: 1,
        }
    }
}

/// Names accepted by [`ParamSet::set`] and as sweep variables.
pub const SWEEPABLE: &[&str] = &[
    "p_t_db", "p_t_w", "rho", "eta", "slot", "a_f", "nu_p", "nu_s", "n0", "l_r", "l_s", "r_thp",
    "r_ths", "r_th", "r_pt", "lambda_p", "n_p", "n_s", "kappa", "mu", "omega", "phi",
    "dimension", "alpha", "delta", "k",
];

const DEFAULT_P_T_DB: f64 = 10.0;

fn integral(field: &str, value: f64) -> Result<u32> {
    if value.fract() != 0.0 || !(0.0..=u32::MAX as f64).contains(&value) {
        return Err(Error::scenario(field, format!("expects a non-negative integer, got {value}")));
    }
    Ok(value as u32)
}

impl ParamSet {
    /// Sets one field by name. `r_th` sets both rate thresholds.
    pub fn set(&mut self, field: &str, value: f64) -> Result<()> {
        match field {
            "p_t_db" => {
                self.p_t_db = Some(value);
                self.p_t_w = None;
            }
            "p_t_w" => {
                self.p_t_w = Some(value);
                self.p_t_db = None;
            }
            "rho" => self.rho = value,
            "eta" => self.eta = value,
            "slot" => self.slot = value,
            "a_f" => self.a_f = value,
            "nu_p" => self.nu_p = value,
            "nu_s" => self.nu_s = value,
            "n0" => self.n0 = value,
            "l_r" => self.l_r = integral(field, value)?,
            "l_s" => self.l_s = integral(field, value)?,
            "r_thp" => self.r_thp = value,
            "r_ths" => self.r_ths = value,
            "r_th" => {
                self.r_thp = value;
                self.r_ths = value;
            }
            "r_pt" => self.r_pt = value,
            "lambda_p" => self.lambda_p = value,
            "n_p" => self.n_p = integral(field, value)?,
            "n_s" => self.n_s = integral(field, value)?,
            "kappa" => self.kappa = value,
            "mu" => self.mu = value,
            "omega" => self.omega = value,
            "phi" => self.phi = value,
            "dimension" => self.dimension = integral(field, value)?,
            "alpha" => self.alpha = value,
            "delta" => self.delta = Some(value),
            "k" => self.k = integral(field, value)?,
            other => return Err(Error::scenario(other, "unknown parameter")),
        }
        Ok(())
    }

    /// Transmit power in watts.
    pub fn p_t_watts(&self) -> Result<f64> {
        match (self.p_t_db, self.p_t_w) {
            (Some(_), Some(_)) => Err(Error::scenario(
                "p_t_db/p_t_w",
                "transmit power given both in dB and in watts",
            )),
            (None, Some(w)) => Ok(w),
            (Some(db), None) => Ok(db_to_linear(db)),
            (None, None) => Ok(db_to_linear(DEFAULT_P_T_DB)),
        }
    }

    pub fn to_system(&self) -> Result<SystemParams> {
        let stage = KappaMuSpec::new(self.kappa, self.mu, self.omega)?;
        let cascade = |n: u32, field: &str| -> Result<CascadeSpec> {
            if n == 0 {
                return Err(Error::scenario(field, "cascade level must be >= 1"));
            }
            CascadeSpec::new(vec![stage; n as usize])
        };
        let mut geometry = GeometrySpec::new(self.phi, self.dimension, self.alpha, self.k)?;
        if let Some(delta) = self.delta {
            geometry = geometry.with_delta(delta)?;
        }
        let p = SystemParams {
            p_t: self.p_t_watts()?,
            rho: self.rho,
            eta: self.eta,
            slot: self.slot,
            a_f: self.a_f,
            nu_p: self.nu_p,
            nu_s: self.nu_s,
            n0: self.n0,
            l_s: self.l_s as usize,
            r_thp: self.r_thp,
            r_ths: self.r_ths,
            r_pt: self.r_pt,
            geometry,
            pr_channel: ExpMrcSpec::new(self.lambda_p, self.l_r as usize)?,
            rp_channel: cascade(self.n_p, "n_p")?,
            rs_channel: cascade(self.n_s, "n_s")?,
        };
        p.validate()?;
        Ok(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Mc,
    Analytic,
    Optimize,
}

impl std::str::FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mc" => Ok(Engine::Mc),
            "analytic" => Ok(Engine::Analytic),
            "optimize" => Ok(Engine::Optimize),
            other => Err(Error::scenario("engines", format!("unknown engine `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub variable: String,
    pub values: Vec<f64>,
    #[serde(default)]
    pub series_variable: Option<String>,
    #[serde(default)]
    pub series_values: Option<Vec<f64>>,
}

/// One evaluated parameter point of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub series_value: Option<f64>,
    pub sweep_value: f64,
    pub params: SystemParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub params: ParamSet,
    pub sweep: Sweep,
    pub engines: Vec<Engine>,
    pub mc: McConfig,
    pub budget: SeriesBudget,
    pub optimize: OptConfig,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    #[serde(default = "default_schema")]
    schema: u32,
    #[serde(default = "default_name")]
    name: String,
    #[serde(default = "default_engines")]
    engines: Vec<Engine>,
    #[serde(default)]
    params: ParamSet,
    #[serde(default)]
    sweep: Option<Sweep>,
    #[serde(default)]
    mc: McSection,
    #[serde(default)]
    budget: BudgetSection,
    #[serde(default)]
    optimize: OptimizeSection,
}

fn default_schema() -> u32 {
    SCHEMA_VERSION
}

fn default_name() -> String {
    "scenario".into()
}

fn default_engines() -> Vec<Engine> {
    vec![Engine::Mc]
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct McSection {
    trials: u64,
    seed: u64,
    batch: u64,
}

impl Default for McSection {
    fn default() -> Self {
        let d = McConfig::default();
        Self {
            trials: d.trials,
            seed: d.seed,
            batch: d.batch,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct BudgetSection {
    rel_tol: f64,
    max_index: usize,
}

impl Default for BudgetSection {
    fn default() -> Self {
        let d = SeriesBudget::default();
        Self {
            rel_tol: d.rel_tol,
            max_index: d.max_index_per_sum,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
enum ObjectiveName {
    MeanChannel,
    MonteCarlo,
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct OptimizeSection {
    rho0: f64,
    af0: f64,
    step0: f64,
    fd_h: f64,
    tol_obj: f64,
    tol_kkt: f64,
    max_outer: usize,
    max_inner: usize,
    box_margin: f64,
    objective: ObjectiveName,
    objective_trials: usize,
    objective_seed: u64,
}

impl Default for OptimizeSection {
    fn default() -> Self {
        let d = OptConfig::default();
        Self {
            rho0: d.rho0,
            af0: d.af0,
            step0: d.step0,
            fd_h: d.fd_h,
            tol_obj: d.tol_obj,
            tol_kkt: d.tol_kkt,
            max_outer: d.max_outer,
            max_inner: d.max_inner,
            box_margin: d.box_margin,
            objective: ObjectiveName::MeanChannel,
            objective_trials: 20_000,
            objective_seed: 1,
        }
    }
}

impl From<OptimizeSection> for OptConfig {
    fn from(s: OptimizeSection) -> Self {
        OptConfig {
            rho0: s.rho0,
            af0: s.af0,
            step0: s.step0,
            fd_h: s.fd_h,
            tol_obj: s.tol_obj,
            tol_kkt: s.tol_kkt,
            max_outer: s.max_outer,
            max_inner: s.max_inner,
            box_margin: s.box_margin,
            objective: match s.objective {
                ObjectiveName::MeanChannel => ObjectiveKind::MeanChannel,
                ObjectiveName::MonteCarlo => ObjectiveKind::MonteCarlo {
                    trials: s.objective_trials,
                    seed: s.objective_seed,
                },
            },
        }
    }
}

/// Parses and fully validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let file: ScenarioFile =
        toml::from_str(text).map_err(|e| Error::scenario("scenario", e.to_string().trim()))?;
    if file.schema != SCHEMA_VERSION {
        return Err(Error::scenario(
            "schema",
            format!("unsupported schema {} (expected {SCHEMA_VERSION})", file.schema),
        ));
    }
    let sweep = match file.sweep {
        Some(s) => s,
        None => Sweep {
            variable: "p_t_w".into(),
            values: vec![file.params.p_t_watts()?],
            series_variable: None,
            series_values: None,
        },
    };
    let scenario = Scenario {
        name: file.name,
        params: file.params,
        sweep,
        engines: file.engines,
        mc: McConfig {
            trials: file.mc.trials,
            seed: file.mc.seed,
            batch: file.mc.batch,
        },
        budget: SeriesBudget {
            rel_tol: file.budget.rel_tol,
            max_index_per_sum: file.budget.max_index,
        },
        optimize: file.optimize.into(),
    };
    scenario.validate()?;
    Ok(scenario)
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let text = std::fs::read_to_string(path.as_ref())?;
    parse_scenario(&text)
}

impl Scenario {
    pub fn system_params(&self) -> Result<SystemParams> {
        self.params.to_system()
    }

    pub fn validate(&self) -> Result<()> {
        if self.engines.is_empty() {
            return Err(Error::scenario("engines", "at least one engine is required"));
        }
        let check_var = |v: &str, field: &str| {
            if SWEEPABLE.contains(&v) {
                Ok(())
            } else {
                Err(Error::scenario(field, format!("`{v}` is not a parameter")))
            }
        };
        check_var(&self.sweep.variable, "sweep.variable")?;
        if self.sweep.values.is_empty() {
            return Err(Error::scenario("sweep.values", "needs at least one value"));
        }
        match (&self.sweep.series_variable, &self.sweep.series_values) {
            (None, None) => {}
            (Some(v), Some(vals)) if !vals.is_empty() => check_var(v, "sweep.series_variable")?,
            _ => {
                return Err(Error::scenario(
                    "sweep.series_values",
                    "series_variable and a non-empty series_values go together",
                ))
            }
        }
        self.mc.validate()?;
        self.budget.validate()?;
        if self.engines.contains(&Engine::Optimize) {
            self.optimize.validate()?;
        }
        self.points().map(|_| ())
    }

    /// Parameter points in output order: series-major, then sweep order.
    pub fn points(&self) -> Result<Vec<SweepPoint>> {
        let series: Vec<Option<f64>> = match &self.sweep.series_values {
            Some(vals) => vals.iter().copied().map(Some).collect(),
            None => vec![None],
        };
        let mut out = Vec::with_capacity(series.len() * self.sweep.values.len());
        for s in series {
            for &v in &self.sweep.values {
                let mut ps = self.params.clone();
                if let (Some(name), Some(sv)) = (&self.sweep.series_variable, s) {
                    ps.set(name, sv)?;
                }
                ps.set(&self.sweep.variable, v)?;
                out.push(SweepPoint {
                    series_value: s,
                    sweep_value: v,
                    params: ps.to_system()?,
                });
            }
        }
        Ok(out)
    }
}
