//! Diagnostics shared by every analysis stage.

use std::fmt;
use std::ops::Range;

use serde::Serialize;

/// A location in a specification file. Lines and columns are 1-based; the
/// end column points one past the last character of the span.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
pub struct SourceSpan {
    pub file: String,
    pub start_line: u32,
    pub start_col: u32,
    pub end_line: u32,
    pub end_col: u32,
    /// Byte range in the source text. Not part of the report format.
    #[serde(skip)]
    pub offsets: Range<usize>,
}

impl SourceSpan {
    /// A span for items built in code rather than parsed from a file.
    pub fn synthetic(file: impl Into<String>) -> Self {
        SourceSpan {
            file: file.into(),
            ..Default::default()
        }
    }

    pub fn is_synthetic(&self) -> bool {
        self.start_line == 0
    }

    /// Smallest span covering both `self` and `other`.
    pub fn to(&self, other: &SourceSpan) -> SourceSpan {
        SourceSpan {
            file: self.file.clone(),
            start_line: self.start_line,
            start_col: self.start_col,
            end_line: other.end_line,
            end_col: other.end_col,
            offsets: self.offsets.start..other.offsets.end,
        }
    }

    /// The text the span covers in `source`.
    pub fn slice<'a>(&self, source: &'a str) -> &'a str {
        source.get(self.offsets.clone()).unwrap_or("")
    }

    fn key(&self) -> (&str, u32, u32, u32, u32) {
        (
            &self.file,
            self.start_line,
            self.start_col,
            self.end_line,
            self.end_col,
        )
    }
}

impl PartialOrd for SourceSpan {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SourceSpan {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.start_line, self.start_col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Info,
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Info => "info",
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

/// Stable rule code. Codes never change meaning between releases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Code(&'static str);

impl Code {
    pub const UNEXPECTED_TOKEN: Code = Code("E-PARSE-001");
    pub const DUPLICATE_IDENTIFIER: Code = Code("E-PARSE-002");
    pub const UNKNOWN_PROPERTY: Code = Code("E-PARSE-003");
    pub const INVALID_TAG: Code = Code("E-PARSE-004");

    pub const UNKNOWN_IDENTIFIER: Code = Code("E-RES-001");
    pub const ENDPOINT_MISMATCH: Code = Code("E-RES-002");

    pub const LAYER_CONFORMANCE: Code = Code("E-VAL-001");
    pub const DELEGATION_TRIAD: Code = Code("E-VAL-002");
    pub const PERSON_TYPE: Code = Code("E-VAL-003");
    pub const FORCE_DIRECTION: Code = Code("E-VAL-004");
    pub const SIGNOFF_ROLE: Code = Code("E-VAL-005");
    pub const EMPTY_CRITERIA: Code = Code("E-VAL-006");
    pub const DEMAND_PROVENANCE: Code = Code("E-VAL-007");

    pub const MISSING_APPLICABILITY_LINK: Code = Code("E-APP-001");

    pub const DELEGATION_CYCLE: Code = Code("E-INT-001");

    pub fn as_str(&self) -> &'static str {
        self.0
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: Code,
    pub message: String,
    pub span: SourceSpan,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub related_spans: Vec<SourceSpan>,
    /// Instance the diagnostic is about, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<String>,
}

impl Diagnostic {
    pub fn error(code: Code, span: SourceSpan, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            code,
            message: message.into(),
            span,
            related_spans: Vec::new(),
            instance: None,
        }
    }

    pub fn warning(code: Code, span: SourceSpan, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            ..Diagnostic::error(code, span, message)
        }
    }

    pub fn with_related(mut self, span: SourceSpan) -> Self {
        self.related_spans.push(span);
        self
    }

    pub fn about(mut self, instance: impl Into<String>) -> Self {
        self.instance = Some(instance.into());
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {}[{}]: {}",
            self.span, self.severity, self.code, self.message
        )
    }
}

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(Diagnostic::is_error)
}

/// Orders diagnostics by code, then span, then message.
pub fn canonicalize(diagnostics: &mut [Diagnostic]) {
    diagnostics.sort_by(|a, b| {
        (a.code, &a.span, &a.message).cmp(&(b.code, &b.span, &b.message))
    });
}
