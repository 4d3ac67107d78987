//! Energy efficiency versus transmit power for several target rates, from
//! both engines.

use overlay_crn::analysis::{energy_efficiency, outage_pair, throughput};
use overlay_crn::harness::preset_params;
use overlay_crn::meijer::SeriesBudget;
use overlay_crn::simulate::{estimate_metrics, McConfig};

fn main() -> overlay_crn::Result<()> {
    let budget = SeriesBudget::default();
    let cfg = McConfig {
        trials: 100_000,
        ..McConfig::default()
    };
    for r_th in [0.25, 0.5, 0.7, 1.0] {
        println!("R_th = {r_th}");
        let mut best = (f64::NEG_INFINITY, 0.0);
        for step in 0..=12 {
            let p_t_db = 2.5 * step as f64;
            let mut ps = preset_params("fig8")?;
            ps.p_t_db = Some(p_t_db);
            ps.r_thp = r_th;
            ps.r_ths = r_th;
            let p = ps.to_system()?;
            let (pu, su) = outage_pair(&p, &budget)?;
            let tau = throughput(&p, pu.value, su.value)?.tau;
            let ee = energy_efficiency(&p, tau)?;
            let mc = estimate_metrics(&p, &cfg)?;
            if ee > best.0 {
                best = (ee, p_t_db);
            }
            if step % 4 == 0 {
                println!("  {p_t_db:>5} dB  τ {tau:.4}  EE {ee:.4}  (MC EE {:.4})", mc.ee);
            }
        }
        println!("  peak EE {:.4} at {} dB", best.0, best.1);
    }
    Ok(())
}
