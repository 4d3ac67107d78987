//! Closed form against Monte Carlo on the validation grid.
//!
//! `cargo run --release --example cross_validate -- 1000000` runs the full
//! trial count; the default is lighter.

use overlay_crn::harness::run_validation;
use overlay_crn::meijer::SeriesBudget;
use overlay_crn::simulate::McConfig;

fn main() -> overlay_crn::Result<()> {
    let trials = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(100_000);
    let cfg = McConfig {
        trials,
        ..McConfig::default()
    };
    let checks = run_validation(&cfg, &SeriesBudget::default())?;
    for c in &checks {
        println!(
            "{:<36} closed {:.5}  mc {:.5}  |Δ| {:.5}  tol {:.5}  {}",
            c.label,
            c.analytic,
            c.mc,
            (c.analytic - c.mc).abs(),
            c.tolerance,
            if c.pass { "ok" } else { "MISMATCH" }
        );
    }
    let passed = checks.iter().filter(|c| c.pass).count();
    println!("{passed}/{} agree at {trials} trials", checks.len());
    Ok(())
}
