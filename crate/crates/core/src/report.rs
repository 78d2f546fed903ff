//! Machine-readable report covering one or more analysed files.

use serde::Serialize;

use crate::applicability::ApplicabilityResult;
use crate::diagnostic::Diagnostic;
use crate::interpretation::TraceReport;
use crate::milestones::MilestoneStatus;
use crate::pipeline::Analysis;

pub const REPORT_SCHEMA: &str = "am4rre-report/1";

#[derive(Debug, Clone, Serialize)]
pub struct FileReport<'a> {
    pub source: &'a str,
    pub diagnostics: &'a [Diagnostic],
    pub applicability: Option<&'a ApplicabilityResult>,
    pub trace: Option<&'a TraceReport>,
    pub milestones: Option<&'a MilestoneStatus>,
}

impl<'a> From<&'a Analysis> for FileReport<'a> {
    fn from(a: &'a Analysis) -> Self {
        FileReport {
            source: &a.source_name,
            diagnostics: &a.diagnostics,
            applicability: a.applicability.as_ref(),
            trace: a.trace.as_ref(),
            milestones: a.milestones.as_ref(),
        }
    }
}

/// Output is a pure function of its inputs unless `generated_at` is set.
#[derive(Debug, Clone, Serialize)]
pub struct Report<'a> {
    pub schema: &'static str,
    pub tool_version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<u64>,
    pub files: Vec<FileReport<'a>>,
}

impl<'a> Report<'a> {
    pub fn new(analyses: &'a [Analysis]) -> Self {
        Report {
            schema: REPORT_SCHEMA,
            tool_version: env!("CARGO_PKG_VERSION"),
            generated_at: None,
            files: analyses.iter().map(FileReport::from).collect(),
        }
    }

    pub fn with_timestamp(mut self, unix_seconds: u64) -> Self {
        self.generated_at = Some(unix_seconds);
        self
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }
}
