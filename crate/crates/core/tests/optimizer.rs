use overlay_crn::harness::preset_params;
use overlay_crn::optimize::{
    grid_search, solve_biconvex_with, solve_inner_fixed_af, solve_inner_fixed_rho, Objective,
    ObjectiveKind, OptConfig,
};

fn fig9_objective(p_t_db: f64) -> Objective {
    let mut ps = preset_params("fig9").unwrap();
    ps.p_t_db = Some(p_t_db);
    Objective::new(&ps.to_system().unwrap(), ObjectiveKind::MeanChannel).unwrap()
}

#[test]
fn biconvex_solution_matches_grid_oracle() {
    let cfg = OptConfig::default();
    for p_t_db in [5.0, 10.0, 15.0, 20.0] {
        let obj = fig9_objective(p_t_db);
        let res = solve_biconvex_with(&obj, &cfg).unwrap();
        let (rho_g, af_g, best) = grid_search(&obj, 99).unwrap().expect("feasible grid point");
        assert!(res.converged, "{p_t_db} dB");
        assert!(
            (res.rho_star - rho_g).abs() <= 0.02 && (res.af_star - af_g).abs() <= 0.02,
            "{p_t_db} dB: ({}, {}) vs grid ({rho_g}, {af_g})",
            res.rho_star,
            res.af_star
        );
        assert!(res.objective >= best - 1e-6, "{p_t_db} dB");
        assert!(res.constraint_residual <= 1e-4);
        assert!(res.history.windows(2).all(|w| w[1] >= w[0]), "{:?}", res.history);

        let (_, pu_rate) = obj.eval(res.rho_star, res.af_star).unwrap();
        let slack = pu_rate - obj.rate_floor();
        assert!(res.duals.rate_floor >= 0.0 && res.duals.lower >= 0.0 && res.duals.upper >= 0.0);
        assert!((res.duals.rate_floor * slack).abs() < cfg.tol_kkt, "{p_t_db} dB");
    }
}

#[test]
fn joint_beats_single_parameter_tuning() {
    let cfg = OptConfig::default();
    for p_t_db in [0.0, 5.0, 10.0, 15.0, 20.0] {
        let obj = fig9_objective(p_t_db);
        let joint = solve_biconvex_with(&obj, &cfg).unwrap();
        let rho_only = solve_inner_fixed_af(&obj, cfg.af0, &cfg).unwrap();
        let af_only = solve_inner_fixed_rho(&obj, cfg.rho0, &cfg).unwrap();
        let fixed = obj.eval(cfg.rho0, cfg.af0).unwrap();
        for single in [rho_only.objective, af_only.objective] {
            assert!(joint.objective >= single - cfg.tol_obj, "{p_t_db} dB");
        }
        if fixed.1 >= obj.rate_floor() {
            assert!(joint.objective >= fixed.0 - cfg.tol_obj);
        }
    }
}

#[test]
fn monte_carlo_objective_agrees_with_its_grid() {
    let mut ps = preset_params("fig9").unwrap();
    ps.p_t_db = Some(20.0);
    let kind = ObjectiveKind::MonteCarlo {
        trials: 4000,
        seed: 3,
    };
    let obj = Objective::new(&ps.to_system().unwrap(), kind).unwrap();
    let res = solve_biconvex_with(&obj, &OptConfig::default()).unwrap();
    let (_, _, best) = grid_search(&obj, 49).unwrap().unwrap();
    assert!(best > 0.0);
    assert!(res.objective >= best - 1e-3, "{} vs {best}", res.objective);
    assert!(res.constraint_residual <= 1e-4);
}
