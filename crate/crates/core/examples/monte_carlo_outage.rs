//! Monte Carlo outage, throughput and energy efficiency, plus a look at a
//! few individual trials.

use overlay_crn::harness::preset_params;
use overlay_crn::simulate::{estimate_metrics, run_trial, trial_rng, McConfig};

fn main() -> overlay_crn::Result<()> {
    let p = preset_params("fig3")?.to_system()?;

    println!("first trials of seed 7:");
    for i in 0..4 {
        let t = run_trial(&p, &mut trial_rng(7, i));
        println!(
            "  d^α {:.3}  G_PR {:.3}  g_RP {:.3}  γ_P {:.3}  R_P {:.3}",
            t.channel.d_alpha, t.channel.g_pr, t.channel.g_rp, t.gamma_p, t.r_p
        );
    }

    for trials in [10_000, 100_000, 1_000_000] {
        let cfg = McConfig {
            trials,
            seed: 7,
            ..McConfig::default()
        };
        let m = estimate_metrics(&p, &cfg)?;
        println!(
            "{trials:>8} trials: OP_P {:.5} ± {:.5}  τ {:.4}  EE {:.4}",
            m.outage.op_p_hat, m.outage.se_p, m.throughput.tau, m.ee
        );
    }
    Ok(())
}
