//! Experiment driver: configuration, execution, records and reports.

pub mod config;
pub mod records;
pub mod report;
pub mod run;

pub use config::ExperimentConfig;
pub use records::{read_records, Record, CSV_HEADER};
pub use report::{fit_report, write_plot_data, FitOptions, FitReport};
pub use run::{run_experiment, run_instance, stratum_seed, RunManifest};
