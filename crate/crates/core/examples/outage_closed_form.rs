//! Closed-form primary and secondary outage over transmit power, plus the
//! feasibility gates that pin outage at one.

use overlay_crn::analysis::{outage_pair, thresholds};
use overlay_crn::harness::{preset_params, ParamSet};
use overlay_crn::meijer::SeriesBudget;

fn main() -> overlay_crn::Result<()> {
    let budget = SeriesBudget::default();
    println!("{:>6} {:>10} {:>10} {:>8}", "P_T dB", "OP_P", "OP_S", "shells");
    for p_t_db in [0.0, 5.0, 10.0, 15.0, 20.0] {
        // each link at its own reference setup
        let pu_setup = ParamSet {
            p_t_db: Some(p_t_db),
            ..preset_params("fig3")?
        };
        let su_setup = ParamSet {
            p_t_db: Some(p_t_db),
            ..preset_params("fig4")?
        };
        let (pu, _) = outage_pair(&pu_setup.to_system()?, &budget)?;
        let (_, su) = outage_pair(&su_setup.to_system()?, &budget)?;
        println!(
            "{p_t_db:>6} {:>10.6} {:>10.6} {:>8}",
            pu.value,
            su.value,
            pu.shells_used.max(su.shells_used)
        );
    }

    // A_f = 0.3 leaves a/c = 0.43 below J = 1.38: no power reaches the PU target
    let capped = ParamSet {
        a_f: 0.3,
        ..ParamSet::default()
    }
    .to_system()?;
    let dc = capped.derived();
    let (pu, _) = outage_pair(&capped, &budget)?;
    println!(
        "a/c = {:.3}, J = {:.3}: OP_P = {} (feasible: {})",
        dc.a / dc.c,
        dc.j,
        pu.value,
        pu.feasible
    );
    let [pu_pair, su_pair] = thresholds(&ParamSet::default().to_system()?.derived());
    println!("threshold pairs at the default point: PU {pu_pair:?}, SU {su_pair:?}");
    Ok(())
}
