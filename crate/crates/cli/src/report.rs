use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::{CliResult, ExitStatus};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub name: String,
    pub verified: bool,
}

impl Certificate {
    pub fn new(name: impl Into<String>, verified: bool) -> Self {
        Certificate {
            name: name.into(),
            verified,
        }
    }
}

/// Counters only; wall-clock times are printed to stderr so that reports
/// stay reproducible.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metrics {
    pub queries: u64,
    pub budget_exhausted: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub config: ExperimentConfig,
    pub result: serde_json::Value,
    pub certificates: Vec<Certificate>,
    pub metrics: Metrics,
    /// CSV form of a density table, written separately on request.
    #[serde(skip)]
    pub csv: Option<String>,
}

impl Report {
    pub fn new(config: ExperimentConfig) -> Self {
        Report {
            tool: "amenable".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config,
            result: serde_json::Value::Null,
            certificates: Vec::new(),
            metrics: Metrics::default(),
            csv: None,
        }
    }

    pub fn certify(&mut self, name: impl Into<String>, verified: bool) {
        self.certificates.push(Certificate::new(name, verified));
    }

    pub fn failed_certificates(&self) -> Vec<&str> {
        self.certificates
            .iter()
            .filter(|c| !c.verified)
            .map(|c| c.name.as_str())
            .collect()
    }

    pub fn status(&self) -> ExitStatus {
        if !self.failed_certificates().is_empty() {
            ExitStatus::CertificateFailure
        } else if self.metrics.budget_exhausted {
            ExitStatus::BudgetExhausted
        } else {
            ExitStatus::Ok
        }
    }

    pub fn to_json(&self) -> CliResult<String> {
        to_json(self)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

/// Writes through a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}
