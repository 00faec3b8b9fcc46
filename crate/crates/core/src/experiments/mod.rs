//! Drivers behind the command-line tool: surveys, CSV/JSON reports and the
//! density exponent fit.

mod commands;
mod config_file;
mod cost_survey;
mod fit;
mod report;

pub use commands::{cmd_cost_survey, cmd_decompose, cmd_expand, cmd_zaremba, ZarembaOutput, SURVEY_CAP, ZAREMBA_CAP};
pub use config_file::ConfigFile;
pub use cost_survey::{cost_survey, survey_one, CostRow, CostSurvey, RowOutcome, Sampling};
pub use fit::{fit_exponent, FitError};
pub use report::{decomposition_json, write_density_csv, write_scan_csv};
