use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

use crate::{CliError, Common};

#[derive(Debug, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// What a command did. Serialized without timings so identical inputs give
/// byte-identical `report.json`; timings go to `timings.json`.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: Value,
    pub checks: Vec<CheckLine>,
    pub artifacts: Vec<String>,
    #[serde(skip)]
    pub timings: Vec<(String, Duration)>,
}

impl RunReport {
    pub fn new(command: &str, parameters: Value) -> Self {
        RunReport {
            command: command.into(),
            parameters,
            checks: Vec::new(),
            artifacts: Vec::new(),
            timings: Vec::new(),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(CheckLine {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Writes the report into `dir` and returns exit status 0 or 1.
    pub fn finish(mut self, dir: &RunDir) -> crate::CliResult {
        self.artifacts.sort();
        dir.write("report.json", &(serde_json::to_string_pretty(&self).expect("serializable") + "\n"))?;
        let timings: serde_json::Map<String, Value> = self
            .timings
            .iter()
            .map(|(k, d)| (k.clone(), Value::from(d.as_secs_f64())))
            .collect();
        dir.write("timings.json", &(serde_json::to_string_pretty(&timings).expect("serializable") + "\n"))?;
        println!("report: {}", dir.path().join("report.json").display());
        if self.passed() {
            Ok(())
        } else {
            Err(CliError::Failed)
        }
    }
}

pub struct RunDir {
    path: PathBuf,
}

impl RunDir {
    pub fn create(common: &Common, command: &str) -> Result<Self, CliError> {
        let base = common.out.join(command);
        let path = match &common.label {
            Some(l) => {
                if l.is_empty() || l.contains(['/', '\\']) || l == ".." {
                    return Err(CliError::Usage(format!("invalid label `{l}`")));
                }
                base.join(l)
            }
            None => {
                let stamp = chrono::Local::now().format("%Y%m%d-%H%M%S").to_string();
                let mut p = base.join(&stamp);
                let mut i = 1;
                while p.exists() {
                    i += 1;
                    p = base.join(format!("{stamp}-{i}"));
                }
                p
            }
        };
        fs::create_dir_all(&path).map_err(|e| CliError::Aborted(format!("{}: {e}", path.display())))?;
        Ok(RunDir { path })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn file(&self, name: &str) -> PathBuf {
        self.path.join(name)
    }

    pub fn write(&self, name: &str, text: &str) -> Result<(), CliError> {
        fs::write(self.file(name), text).map_err(|e| CliError::Aborted(format!("{}: {e}", self.file(name).display())))
    }
}
