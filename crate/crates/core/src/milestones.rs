//! Milestone status from artifact content and sign-offs.
//!
//! Each milestone is first judged on its own (content conditions, then the
//! sign-offs of its accepting roles) and then capped by its predecessor:
//! no milestone may be in a higher state than the one before it.

use std::fmt;

use serde::Serialize;

use crate::applicability::ApplicabilityResult;
use crate::diagnostic::{Code, Diagnostic, SourceSpan};
use crate::interpretation::TraceReport;
use crate::metamodel::{ConceptClass, LayerId, MilestoneId, RelationshipKind};
use crate::resolver::ResolvedModel;
use crate::validator::is_content_rule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MilestoneState {
    NotStarted,
    ContentComplete,
    Accepted,
}

impl fmt::Display for MilestoneState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MilestoneState::NotStarted => "not started",
            MilestoneState::ContentComplete => "content complete",
            MilestoneState::Accepted => "accepted",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockingReason {
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub span: Option<SourceSpan>,
}

impl BlockingReason {
    fn new(message: impl Into<String>) -> Self {
        BlockingReason {
            message: message.into(),
            span: None,
        }
    }

    fn at(message: impl Into<String>, span: &SourceSpan) -> Self {
        BlockingReason {
            message: message.into(),
            span: (!span.is_synthetic()).then(|| span.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MilestoneReport {
    pub milestone: MilestoneId,
    pub state: MilestoneState,
    pub blocking_reasons: Vec<BlockingReason>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct MilestoneStatus {
    pub milestones: Vec<MilestoneReport>,
}

impl MilestoneStatus {
    pub fn state(&self, milestone: MilestoneId) -> MilestoneState {
        self.milestones
            .iter()
            .find(|m| m.milestone == milestone)
            .map_or(MilestoneState::NotStarted, |m| m.state)
    }

    pub fn report(&self, milestone: MilestoneId) -> Option<&MilestoneReport> {
        self.milestones.iter().find(|m| m.milestone == milestone)
    }

    pub fn states(&self) -> [MilestoneState; 4] {
        MilestoneId::ALL.map(|m| self.state(m))
    }
}

struct Inputs<'a> {
    model: &'a ResolvedModel,
    content_errors: Vec<&'a Diagnostic>,
    applicability: Option<&'a ApplicabilityResult>,
    trace: &'a TraceReport,
}

impl Inputs<'_> {
    fn layer_of(&self, diagnostic: &Diagnostic) -> Option<LayerId> {
        let id = diagnostic.instance.as_deref()?;
        Some(self.model.instance(id)?.class().layer())
    }

    fn errors_reason(d: &Diagnostic) -> BlockingReason {
        BlockingReason::at(format!("{}: {}", d.code, d.message), &d.span)
    }

    fn applicability(&self, reasons: &mut Vec<BlockingReason>) -> Option<&ApplicabilityResult> {
        if self.applicability.is_none() {
            reasons.push(BlockingReason::new(
                "applicability has not been computed (fix validation errors first)",
            ));
        }
        self.applicability
    }
}

fn m1_content(inputs: &Inputs<'_>, reasons: &mut Vec<BlockingReason>) {
    let described = inputs
        .model
        .instances_of(ConceptClass::ProjectScope)
        .any(|s| s.text("description").is_some_and(|d| !d.trim().is_empty()));
    if !described {
        reasons.push(BlockingReason::new("no project scope with a description"));
    }
}

fn m2_content(inputs: &Inputs<'_>, reasons: &mut Vec<BlockingReason>) {
    let model = inputs.model;
    let mut acts = model.instances_of(ConceptClass::RegulatoryAct).peekable();
    if acts.peek().is_none() {
        reasons.push(BlockingReason::new("no regulatory act declared"));
    }
    for act in acts {
        for kind in [RelationshipKind::AppliesWithin, RelationshipKind::BelongsToField] {
            if model.targets(act.id(), kind).next().is_none() {
                reasons.push(BlockingReason::at(
                    format!("act `{}` has no `{kind}` link", act.id()),
                    act.span(),
                ));
            }
        }
    }
    for d in &inputs.content_errors {
        if inputs.layer_of(d) == Some(LayerId::RegulatoryContext) {
            reasons.push(Inputs::errors_reason(d));
        }
    }
    if let Some(result) = inputs.applicability(reasons) {
        for d in result.diagnostics.iter().filter(|d| d.code == Code::MISSING_APPLICABILITY_LINK) {
            if !reasons.iter().any(|r| r.span.as_ref() == Some(&d.span)) {
                reasons.push(Inputs::errors_reason(d));
            }
        }
    }
}

fn m3_content(inputs: &Inputs<'_>, reasons: &mut Vec<BlockingReason>) {
    let model = inputs.model;
    if let Some(result) = inputs.applicability(reasons) {
        for act in result.applicable_acts() {
            let has_content = model.targets(act, RelationshipKind::Contains).any(|t| {
                model
                    .instance(t)
                    .is_some_and(|i| i.class().layer() == LayerId::RegulatoryDemands)
            });
            if !has_content {
                let span = model.instance(act).map(|a| a.span().clone()).unwrap_or_default();
                reasons.push(BlockingReason::at(
                    format!("applicable act `{act}` contains no legal subject or demand"),
                    &span,
                ));
            }
        }
    }
    for d in &inputs.content_errors {
        if d.code == Code::DELEGATION_TRIAD || d.code == Code::PERSON_TYPE {
            reasons.push(Inputs::errors_reason(d));
        }
    }
    for id in &inputs.trace.unmapped_subjects {
        let Some(subject) = model.instance(id) else { continue };
        if !subject.flag("unmapped") {
            reasons.push(BlockingReason::at(
                format!("legal subject `{id}` is not mapped to a stakeholder (set `unmapped: true` if intended)"),
                subject.span(),
            ));
        }
    }
}

fn m4_content(inputs: &Inputs<'_>, reasons: &mut Vec<BlockingReason>) {
    for id in &inputs.trace.uncovered_demands {
        let span = inputs.model.instance(id).map(|d| d.span().clone()).unwrap_or_default();
        reasons.push(BlockingReason::at(
            format!("demand `{id}` has no requirement derived from it"),
            &span,
        ));
    }
    for d in &inputs.content_errors {
        reasons.push(Inputs::errors_reason(d));
    }
}

/// Computes M1..M4. `diagnostics` are the validator's; sign-off role
/// violations among them never block content.
pub fn milestone_status(
    model: &ResolvedModel,
    diagnostics: &[Diagnostic],
    applicability: Option<&ApplicabilityResult>,
    trace: &TraceReport,
) -> MilestoneStatus {
    let inputs = Inputs {
        model,
        content_errors: diagnostics
            .iter()
            .filter(|d| d.is_error() && is_content_rule(d.code))
            .collect(),
        applicability,
        trace,
    };

    let mut milestones: Vec<MilestoneReport> = Vec::with_capacity(4);
    for milestone in MilestoneId::ALL {
        let mut reasons = Vec::new();
        match milestone {
            MilestoneId::M1 => m1_content(&inputs, &mut reasons),
            MilestoneId::M2 => m2_content(&inputs, &mut reasons),
            MilestoneId::M3 => m3_content(&inputs, &mut reasons),
            MilestoneId::M4 => m4_content(&inputs, &mut reasons),
        }
        let mut state = MilestoneState::NotStarted;
        if reasons.is_empty() {
            state = MilestoneState::ContentComplete;
            let missing: Vec<_> = milestone
                .accepting_roles()
                .iter()
                .filter(|r| !model.has_signoff(milestone, **r))
                .collect();
            if missing.is_empty() {
                state = MilestoneState::Accepted;
            }
            for role in missing {
                reasons.push(BlockingReason::new(format!("awaiting sign-off by {role}")));
            }
        }

        if let (Some(prev), Some(prev_id)) = (milestones.last(), milestone.predecessor()) {
            if state > prev.state {
                let message = if prev.state == MilestoneState::NotStarted {
                    format!("{prev_id} content not complete")
                } else {
                    format!("{prev_id} not accepted")
                };
                reasons.push(BlockingReason::new(message));
                state = prev.state;
            }
        }
        milestones.push(MilestoneReport {
            milestone,
            state,
            blocking_reasons: reasons,
        });
    }
    MilestoneStatus { milestones }
}
