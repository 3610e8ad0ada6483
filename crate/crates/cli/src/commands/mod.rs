pub mod bias;
pub mod featurize;
pub mod rc_curve;
pub mod run;
pub mod simulate;
pub mod survival;
pub mod validate;

use std::path::Path;

use clap::Args;
use sudo_eval::data::{load_dataset, CsvSchema, Dataset, DatasetRole};
use sudo_eval::engine::SudoReport;

use crate::cli_error::{CliError, CliResult};

/// Column-name remapping shared by every dataset-consuming subcommand.
#[derive(Debug, Clone, Args)]
pub struct SchemaArgs {
    /// Column holding the record id
    #[arg(long, default_value = "id")]
    pub id_col: String,
    /// Column holding the model probability
    #[arg(long, default_value = "p")]
    pub p_col: String,
    /// Column holding the class label
    #[arg(long, default_value = "label")]
    pub label_col: String,
    /// Column holding the group tag
    #[arg(long, default_value = "group")]
    pub group_col: String,
    /// Column holding the survival time
    #[arg(long, default_value = "time")]
    pub time_col: String,
    /// Column holding the event flag (1/0)
    #[arg(long, default_value = "event")]
    pub event_col: String,
    /// Explicit comma-separated feature columns (default: every unclaimed column)
    #[arg(long)]
    pub features: Option<String>,
}

impl SchemaArgs {
    pub fn to_schema(&self) -> CsvSchema {
        CsvSchema {
            id: self.id_col.clone(),
            p: self.p_col.clone(),
            label: self.label_col.clone(),
            group: self.group_col.clone(),
            time: self.time_col.clone(),
            event: self.event_col.clone(),
            feature_cols: self
                .features
                .as_ref()
                .map(|f| f.split(',').map(|c| c.trim().to_string()).collect()),
        }
    }

    pub fn load(&self, path: &Path, role: DatasetRole) -> CliResult<Dataset> {
        load_dataset(path, &self.to_schema(), role).map_err(CliError::from)
    }
}

/// Reads the `report` object back out of an emitted report JSON file.
pub fn load_report(path: &Path) -> CliResult<SudoReport> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Data(format!("{}: invalid JSON: {e}", path.display())))?;
    let report = value.get("report").cloned().unwrap_or(value);
    serde_json::from_value(report)
        .map_err(|e| CliError::Data(format!("{}: not a discrepancy report: {e}", path.display())))
}
