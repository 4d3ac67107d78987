//! Runs a TOML scenario through both engines and writes CSV plus
//! per-series plot data.
//!
//! `cargo run --release --example scenario_sweep -- [scenario.toml] [out_dir]`

use overlay_crn::harness::{emit_csv, emit_plotdata, load_scenario, parse_scenario, run_scenario};

const DEMO: &str = r#"
schema = 1
name = "relay_antennas"
engines = ["mc", "analytic"]

[params]
kappa = 1.0
n_p = 2
n_s = 2

[sweep]
variable = "p_t_db"
values = [0.0, 5.0, 10.0, 15.0, 20.0]
series_variable = "l_r"
series_values = [1, 2, 3]

[mc]
trials = 100000
seed = 11
"#;

fn main() -> overlay_crn::Result<()> {
    let mut args = std::env::args().skip(1);
    let scenario = match args.next() {
        Some(path) => load_scenario(path)?,
        None => parse_scenario(DEMO)?,
    };
    let out_dir = args.next().unwrap_or_else(|| "target/scenario_sweep".into());
    std::fs::create_dir_all(&out_dir)?;

    let rows = run_scenario(&scenario)?;
    for r in &rows {
        println!(
            "series {:?} sweep {:>5}: mc {:?} analytic {:?} ({:.2}s){}",
            r.series_value,
            r.sweep_value,
            r.mc_op_p,
            r.an_op_p,
            r.wall_time,
            r.error.as_deref().map(|e| format!(" error: {e}")).unwrap_or_default()
        );
    }
    let csv = std::path::Path::new(&out_dir).join(format!("{}.csv", scenario.name));
    emit_csv(&rows, &csv)?;
    let plots = emit_plotdata(&rows, &out_dir, &scenario.name)?;
    println!("wrote {} and {} plot files", csv.display(), plots.len());
    Ok(())
}
