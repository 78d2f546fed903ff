//! Layered regulatory requirements specifications.
//!
//! A specification is written in the `.amr` text format ([`specfmt`]),
//! resolved into an [`ArtifactModel`], checked by the [`validator`], and then
//! analysed: which acts apply ([`applicability`]), which duties follow from
//! delegation and how well demands are covered ([`interpretation`]), and how
//! far each milestone has progressed ([`milestones`]). [`pipeline::analyze`]
//! runs all of it.

pub mod applicability;
pub mod diagnostic;
pub mod fixtures;
pub mod interpretation;
pub mod metamodel;
pub mod milestones;
pub mod pipeline;
pub mod report;
pub mod resolver;
pub mod specfmt;
pub mod validator;

pub use applicability::{compute_applicability, priority_order, ActVerdict, ApplicabilityResult, Evidence};
pub use diagnostic::{Code, Diagnostic, Severity, SourceSpan};
pub use interpretation::{coverage, expand_delegations, suggest_mappings, DerivedDuty, MappingSuggestion, TraceReport};
pub use metamodel::{
    ArtifactModel, ConceptClass, ConceptInstance, LayerId, MilestoneId, Relationship, RelationshipKind, RoleId,
};
pub use milestones::{milestone_status, MilestoneState, MilestoneStatus};
pub use pipeline::{analyze, Analysis, Options};
pub use report::Report;
pub use resolver::{resolve, ResolvedModel};
pub use specfmt::{parse, serialize};
pub use validator::check;
