//! Built-in scenarios reproducing the parameter sets of the reference
//! figures, plus one for the relay-order / SU power-split surface.

use super::scenario::{Engine, ParamSet, Scenario, Sweep};
use crate::error::{Error, Result};
use crate::meijer::SeriesBudget;
use crate::optimize::OptConfig;
use crate::simulate::McConfig;

pub const PRESET_NAMES: &[&str] = &[
    "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "kth_relay",
];

fn steps(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let n = ((stop - start) / step).round() as usize;
    (0..=n).map(|i| start + step * i as f64).collect()
}

fn sweep(variable: &str, values: Vec<f64>, series: Option<(&str, Vec<f64>)>) -> Sweep {
    let (series_variable, series_values) = match series {
        Some((v, vals)) => (Some(v.to_string()), Some(vals)),
        None => (None, None),
    };
    Sweep {
        variable: variable.into(),
        values,
        series_variable,
        series_values,
    }
}

/// SU-outage reference configuration shared by several presets.
fn su_reference() -> ParamSet {
    ParamSet {
        rho: 0.2,
        a_f: 0.2,
        nu_p: 0.2,
        nu_s: 0.2,
        l_r: 2,
        r_ths: 1.0,
        ..ParamSet::default()
    }
}

/// Parameter record of a preset, before its sweep is applied.
pub fn preset_params(name: &str) -> Result<ParamSet> {
    let base = ParamSet::default();
    Ok(match name {
        "fig3" => base,
        "fig4" => su_reference(),
        "fig5" => ParamSet {
            kappa: 0.0,
            l_s: 1,
            n_p: 1,
            p_t_db: Some(2.0),
            ..su_reference()
        },
        "fig6" => ParamSet {
            r_ths: 0.5,
            a_f: 0.9,
            l_s: 1,
            p_t_db: Some(5.0),
            phi: 0.5,
            ..base
        },
        "fig7" => ParamSet {
            delta: Some(100.0),
            lambda_p: 1.0,
            n_p: 1,
            n_s: 1,
            kappa: 0.0,
            r_thp: 0.2,
            eta: 0.7,
            p_t_db: Some(5.0),
            phi: 100.0,
            rho: 0.5,
            ..base
        },
        "fig8" => ParamSet {
            rho: 0.2,
            n_p: 1,
            n_s: 1,
            kappa: 0.0,
            a_f: 0.5,
            nu_p: 0.1,
            nu_s: 0.1,
            l_s: 1,
            ..base
        },
        "fig9" => ParamSet {
            kappa: 0.0,
            l_s: 1,
            r_pt: 0.4,
            r_thp: 0.6,
            r_ths: 0.6,
            rho: 0.5,
            a_f: 0.5,
            ..base
        },
        "kth_relay" => ParamSet {
            a_f: 0.1,
            l_s: 3,
            p_t_db: Some(5.0),
            ..su_reference()
        },
        other => {
            return Err(Error::scenario(
                "preset",
                format!("unknown preset `{other}` (known: {})", PRESET_NAMES.join(", ")),
            ))
        }
    })
}

pub fn preset(name: &str) -> Result<Scenario> {
    let params = preset_params(name)?;
    let p_t_axis = steps(0.0, 20.0, 2.5);
    let (sweep, engines) = match name {
        "fig3" => (
            sweep("p_t_db", p_t_axis, Some(("l_r", vec![1.0, 2.0, 3.0]))),
            vec![Engine::Mc, Engine::Analytic],
        ),
        "fig4" => (
            sweep("p_t_db", p_t_axis, Some(("l_s", vec![1.0, 2.0, 3.0]))),
            vec![Engine::Mc, Engine::Analytic],
        ),
        "fig5" => (
            sweep(
                "phi",
                vec![0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0],
                Some(("n_s", vec![1.0, 2.0, 3.0])),
            ),
            vec![Engine::Mc, Engine::Analytic],
        ),
        "fig6" => (
            sweep("rho", steps(0.05, 0.95, 0.05), Some(("nu_p", vec![0.0, 0.3, 0.6]))),
            vec![Engine::Mc, Engine::Analytic],
        ),
        "fig7" => (
            sweep("a_f", steps(0.5, 0.95, 0.05).into_iter().rev().collect(), Some(("l_r", vec![1.0, 4.0]))),
            vec![Engine::Mc],
        ),
        "fig8" => (
            sweep("p_t_db", steps(0.0, 30.0, 2.5), Some(("r_th", vec![0.5, 1.0, 2.0]))),
            vec![Engine::Mc, Engine::Analytic],
        ),
        "fig9" => (
            sweep("p_t_db", steps(0.0, 20.0, 5.0), None),
            vec![Engine::Optimize],
        ),
        "kth_relay" => (
            sweep("nu_s", steps(0.0, 0.8, 0.1), Some(("k", vec![1.0, 2.0, 3.0, 4.0]))),
            vec![Engine::Mc, Engine::Analytic],
        ),
        _ => unreachable!("preset_params rejected unknown names"),
    };
    let scenario = Scenario {
        name: name.into(),
        params,
        sweep,
        engines,
        mc: McConfig::default(),
        budget: SeriesBudget::default(),
        optimize: OptConfig::default(),
    };
    scenario.validate()?;
    Ok(scenario)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_builds() {
        for name in PRESET_NAMES {
            let s = preset(name).unwrap();
            assert!(!s.points().unwrap().is_empty(), "{name}");
        }
        assert!(preset("fig42").is_err());
    }

    #[test]
    fn steps_hit_endpoints() {
        assert_eq!(steps(0.05, 0.95, 0.05).len(), 19);
        assert!((steps(0.05, 0.95, 0.05)[18] - 0.95).abs() < 1e-12);
    }
}
