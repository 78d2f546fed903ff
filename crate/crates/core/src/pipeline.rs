//! The full analysis of one source text, stage by stage.
//!
//! Parse errors stop the pipeline before resolution, and resolution errors
//! stop it before validation. Applicability is only computed for models
//! without content errors; delegation expansion is skipped while a
//! delegation triad is broken.

use crate::applicability::{compute_applicability, ApplicabilityResult};
use crate::diagnostic::{has_errors, Code, Diagnostic};
use crate::interpretation::{coverage, TraceReport};
use crate::milestones::{milestone_status, MilestoneStatus};
use crate::resolver::{resolve, ResolvedModel};
use crate::specfmt::parse;
use crate::validator::{check, is_content_rule};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    pub derive_delegations: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            derive_delegations: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Parse,
    Resolve,
    Validate,
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub source_name: String,
    /// Last stage that ran.
    pub stage: Stage,
    pub model: Option<ResolvedModel>,
    /// Every diagnostic from every stage that ran, ordered by position.
    pub diagnostics: Vec<Diagnostic>,
    pub applicability: Option<ApplicabilityResult>,
    pub trace: Option<TraceReport>,
    pub milestones: Option<MilestoneStatus>,
}

impl Analysis {
    pub fn has_errors(&self) -> bool {
        has_errors(&self.diagnostics)
    }

    pub fn has_warnings(&self) -> bool {
        self.diagnostics.iter().any(|d| !d.is_error())
    }

    fn stopped(source_name: &str, stage: Stage, diagnostics: Vec<Diagnostic>) -> Self {
        let mut analysis = Analysis {
            source_name: source_name.to_owned(),
            stage,
            model: None,
            diagnostics,
            applicability: None,
            trace: None,
            milestones: None,
        };
        sort_by_position(&mut analysis.diagnostics);
        analysis
    }
}

fn sort_by_position(diagnostics: &mut [Diagnostic]) {
    diagnostics.sort_by(|a, b| {
        (&a.span, a.code, &a.message).cmp(&(&b.span, b.code, &b.message))
    });
}

pub fn analyze(source_name: &str, text: &str, options: &Options) -> Analysis {
    let parsed = parse(source_name, text);
    if has_errors(&parsed.diagnostics) {
        return Analysis::stopped(source_name, Stage::Parse, parsed.diagnostics);
    }
    let mut diagnostics = parsed.diagnostics;

    let (model, resolve_diags) = resolve(parsed.model);
    diagnostics.extend(resolve_diags);
    if has_errors(&diagnostics) {
        return Analysis::stopped(source_name, Stage::Resolve, diagnostics);
    }

    let mut validation = check(&model, None);
    let content_ok = !validation.iter().any(|d| d.is_error() && is_content_rule(d.code));
    let applicability = content_ok.then(|| compute_applicability(&model));
    if let Some(result) = &applicability {
        validation = check(&model, Some(result));
        diagnostics.extend(result.diagnostics.iter().cloned());
    }

    let triads_ok = !validation.iter().any(|d| d.code == Code::DELEGATION_TRIAD);
    let trace = coverage(&model, options.derive_delegations && triads_ok);
    diagnostics.extend(trace.diagnostics.iter().cloned());
    let milestones = milestone_status(&model, &validation, applicability.as_ref(), &trace);
    diagnostics.extend(validation);
    sort_by_position(&mut diagnostics);

    Analysis {
        source_name: source_name.to_owned(),
        stage: Stage::Validate,
        model: Some(model),
        diagnostics,
        applicability,
        trace: Some(trace),
        milestones: Some(milestones),
    }
}
