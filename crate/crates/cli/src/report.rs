use std::fs;
use std::path::{Path, PathBuf};

use crate::error::CliError;
use crate::suites::Section;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// One JSON document per suite.
    Obj,
    /// One CSV row per evaluation point.
    Table,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Obj => "json",
            Format::Table => "csv",
        }
    }
}

pub fn report_path(dir: &Path, stem: &str, suite: &str, format: Format) -> PathBuf {
    dir.join(format!("{stem}.{suite}.{}", format.extension()))
}

fn output_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Output(format!("{}: {e}", path.display()))
}

pub fn write(dir: &Path, section: &Section, format: Format) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|e| output_error(dir, e))?;
    let path = report_path(dir, &section.scenario, &section.suite, format);
    match format {
        Format::Obj => {
            let mut text = serde_json::to_string_pretty(section).map_err(|e| output_error(&path, e))?;
            text.push('\n');
            fs::write(&path, text).map_err(|e| output_error(&path, e))?;
        }
        Format::Table => {
            let mut w = csv::Writer::from_path(&path).map_err(|e| output_error(&path, e))?;
            w.write_record(&section.columns).map_err(|e| output_error(&path, e))?;
            for row in &section.rows {
                w.write_record(row.iter().map(|x| format!("{x:e}")))
                    .map_err(|e| output_error(&path, e))?;
            }
            w.flush().map_err(|e| output_error(&path, e))?;
        }
    }
    Ok(path)
}
