//! Config-driven experiment runner behind the `ii-kit` binary.

pub mod config;
pub mod presets;
pub mod report;
pub mod run;

pub use config::{parse_config, ConfigError, Experiment, ExperimentConfig, Format};
pub use presets::{preset, Preset, PRESETS};
pub use report::{emit_table, human_table, ReportError, CSV_COLUMNS};
pub use run::{run, Report, ReportRow};
