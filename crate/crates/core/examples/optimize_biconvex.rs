//! Joint time-switching / power-allocation optimization against the
//! single-parameter variants and a brute-force grid.

use overlay_crn::harness::preset_params;
use overlay_crn::optimize::{
    grid_search, solve_biconvex_with, solve_inner_fixed_af, solve_inner_fixed_rho, Objective,
    ObjectiveKind, OptConfig,
};

fn main() -> overlay_crn::Result<()> {
    let cfg = OptConfig::default();
    println!(
        "{:>6} {:>8} {:>8} {:>8} {:>8} {:>8} {:>14}",
        "P_T dB", "joint", "ρ only", "A_f only", "fixed", "Υ3", "(ρ*, A_f*)"
    );
    for p_t_db in [0.0, 5.0, 10.0, 15.0, 20.0] {
        let mut ps = preset_params("fig9")?;
        ps.p_t_db = Some(p_t_db);
        let obj = Objective::new(&ps.to_system()?, ObjectiveKind::MeanChannel)?;
        let joint = solve_biconvex_with(&obj, &cfg)?;
        let rho_only = solve_inner_fixed_af(&obj, cfg.af0, &cfg)?;
        let af_only = solve_inner_fixed_rho(&obj, cfg.rho0, &cfg)?;
        let (fixed, _) = obj.eval(cfg.rho0, cfg.af0)?;
        println!(
            "{p_t_db:>6} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>8.4}   ({:.3}, {:.3})",
            joint.objective,
            rho_only.objective,
            af_only.objective,
            fixed,
            joint.duals.rate_floor,
            joint.rho_star,
            joint.af_star
        );
    }

    let mut ps = preset_params("fig9")?;
    ps.p_t_db = Some(10.0);
    let obj = Objective::new(&ps.to_system()?, ObjectiveKind::MeanChannel)?;
    if let Some((rho, af, best)) = grid_search(&obj, 99)? {
        let joint = solve_biconvex_with(&obj, &cfg)?;
        println!(
            "10 dB: solver ({:.4}, {:.4}) -> {:.5}, 99x99 grid ({rho}, {af}) -> {best:.5}; outer history {:?}",
            joint.rho_star, joint.af_star, joint.objective, joint.history
        );
    }

    // sample-average throughput objective; at 10 dB the PU floor leaves the
    // SU no throughput, so look at 20 dB
    ps.p_t_db = Some(20.0);
    let mc_obj = Objective::new(
        &ps.to_system()?,
        ObjectiveKind::MonteCarlo {
            trials: 20_000,
            seed: 1,
        },
    )?;
    let res = solve_biconvex_with(&mc_obj, &cfg)?;
    let grid = grid_search(&mc_obj, 49)?;
    println!(
        "sampled objective at 20 dB: τ_S {:.4} at ({:.3}, {:.3}), PU floor residual {:.1e}; 49x49 grid {grid:?}",
        res.objective, res.rho_star, res.af_star, res.constraint_residual
    );
    Ok(())
}
