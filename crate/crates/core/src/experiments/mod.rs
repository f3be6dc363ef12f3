//! Configuration files, scenario execution, parameter sweeps and CSV output.

pub mod config;
mod csv;
mod scenario;
mod sweep;

pub use config::{ConfigMap, Value};
pub use csv::{format_digits, format_number, CsvTable, DEFAULT_DIGITS, ROUND_TRIP_DIGITS};
pub use scenario::{
    cascaded_final_variance, dissipative_full_steady_variance, parallel_minimum_variance, run_scenario,
    schedule_state_at, scheme_figure_of_merit, scheme_state_at, state_at, sweep, ScenarioName, ScenarioSpec,
    DEVICE_PRESETS, PHOTON_NUMBER_FLOOR,
};
pub use sweep::{golden_minimize, linspace, scan, SweepResult, REFINE_TOLERANCE};
