//! Scenario ingestion, figure presets, sweep execution and result output.

mod output;
mod presets;
mod run;
mod scenario;
mod validate;

pub use output::{emit_csv, emit_plotdata, read_csv, write_csv, CSV_HEADER};
pub use presets::{preset, preset_params, PRESET_NAMES};
pub use run::{run_point, run_scenario, ResultRow};
pub use scenario::{
    load_scenario, parse_scenario, Engine, ParamSet, Scenario, Sweep, SweepPoint, SCHEMA_VERSION,
    SWEEPABLE,
};
pub use validate::{run_validation, validation_grid, GridCheck, GridPoint, Link};
