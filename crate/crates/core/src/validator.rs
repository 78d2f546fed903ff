//! Well-formedness rules over a resolved model.
//!
//! | code      | rule                                                         |
//! |-----------|--------------------------------------------------------------|
//! | E-VAL-001 | instance conforms to its class blueprint (layer, required properties) |
//! | E-VAL-002 | delegation triad: delegator -> delegatee, delegator -> obligee |
//! | E-VAL-003 | person type of a mapped stakeholder satisfies the legal subject |
//! | E-VAL-004 | `ensures_consistent_application_of` points to an act of higher force |
//! | E-VAL-005 | sign-off role may accept the milestone                        |
//! | E-VAL-006 | referenced jurisdictions and fields of law have criteria      |
//! | E-VAL-007 | demand provenance (warning when the source act does not apply) |

use crate::applicability::ApplicabilityResult;
use crate::diagnostic::{canonicalize, Code, Diagnostic};
use crate::metamodel::{ConceptClass, ConceptInstance, DelegatoryRole, RelationshipKind};
use crate::resolver::ResolvedModel;

/// Runs every rule. `applicability` enables the inapplicable-source-act
/// warning of E-VAL-007. Output is ordered by code, then span.
pub fn check(model: &ResolvedModel, applicability: Option<&ApplicabilityResult>) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    blueprint_conformance(model, &mut out);
    delegation_triads(model, &mut out);
    person_types(model, &mut out);
    force_direction(model, &mut out);
    signoff_roles(model, &mut out);
    criteria(model, &mut out);
    demand_provenance(model, applicability, &mut out);
    canonicalize(&mut out);
    out
}

/// Whether a diagnostic concerns specification content rather than the
/// acceptance process. Sign-off role violations are the only process rule.
pub fn is_content_rule(code: Code) -> bool {
    code != Code::SIGNOFF_ROLE
}

fn blueprint_conformance(model: &ResolvedModel, out: &mut Vec<Diagnostic>) {
    for instance in model.instances() {
        for spec in instance.missing_required() {
            out.push(
                Diagnostic::error(
                    Code::LAYER_CONFORMANCE,
                    instance.span().clone(),
                    format!(
                        "{} `{}` is missing required property `{}`",
                        instance.class(),
                        instance.id(),
                        spec.name
                    ),
                )
                .about(instance.id()),
            );
        }
    }
}

fn role_of<'a>(model: &'a ResolvedModel, id: &str) -> Option<(&'a ConceptInstance, DelegatoryRole)> {
    let instance = model.instance(id)?;
    Some((instance, instance.delegatory_role()?))
}

fn delegation_triads(model: &ResolvedModel, out: &mut Vec<Diagnostic>) {
    use DelegatoryRole::*;

    for subject in model.instances_of(ConceptClass::LegalSubject) {
        if subject.delegatory_role() != Some(Delegator) {
            continue;
        }
        let has_link = |kind, wanted| {
            model
                .targets(subject.id(), kind)
                .any(|t| role_of(model, t).is_some_and(|(_, r)| r == wanted))
        };
        if !has_link(RelationshipKind::DelegatesTo, Delegatee) {
            out.push(
                Diagnostic::error(
                    Code::DELEGATION_TRIAD,
                    subject.span().clone(),
                    format!("delegator `{}` has no `delegates_to` link to a delegatee", subject.id()),
                )
                .about(subject.id()),
            );
        }
        if !has_link(RelationshipKind::OwesDutyTo, Obligee) {
            out.push(
                Diagnostic::error(
                    Code::DELEGATION_TRIAD,
                    subject.span().clone(),
                    format!("delegator `{}` has no `owes_duty_to` link to an obligee", subject.id()),
                )
                .about(subject.id()),
            );
        }
    }

    // Delegatees may delegate further; chains are followed during interpretation.
    let endpoint_rules = [
        (RelationshipKind::DelegatesTo, Delegatee),
        (RelationshipKind::OwesDutyTo, Obligee),
    ];
    for (kind, target_role) in endpoint_rules {
        for rel in model.relationships_of(kind).filter(|r| !r.derived) {
            let (Some((source, s_role)), Some((target, t_role))) =
                (role_of(model, &rel.source), role_of(model, &rel.target))
            else {
                continue;
            };
            if !matches!(s_role, Delegator | Delegatee) {
                out.push(
                    Diagnostic::error(
                        Code::DELEGATION_TRIAD,
                        rel.source_span.clone(),
                        format!(
                            "`{kind}` must start at a delegator or delegatee, but `{}` is {s_role}",
                            source.id()
                        ),
                    )
                    .with_related(source.span().clone())
                    .about(source.id()),
                );
            }
            if t_role != target_role {
                out.push(
                    Diagnostic::error(
                        Code::DELEGATION_TRIAD,
                        rel.target_span.clone(),
                        format!(
                            "`{kind}` must end at a {target_role}, but `{}` is {t_role}",
                            target.id()
                        ),
                    )
                    .with_related(target.span().clone())
                    .about(source.id()),
                );
            }
        }
    }
}

fn person_types(model: &ResolvedModel, out: &mut Vec<Diagnostic>) {
    for rel in model.relationships_of(RelationshipKind::MapsTo) {
        let (Some(subject), Some(stakeholder)) = (model.instance(&rel.source), model.instance(&rel.target)) else {
            continue;
        };
        let (Some(wanted), Some(actual)) = (subject.person(), stakeholder.person()) else {
            continue;
        };
        if !wanted.admits(actual) {
            out.push(
                Diagnostic::error(
                    Code::PERSON_TYPE,
                    rel.span.clone(),
                    format!(
                        "`{}` can only be a {wanted} person, but stakeholder `{}` is a {actual} person",
                        subject.id(),
                        stakeholder.id()
                    ),
                )
                .with_related(stakeholder.span().clone())
                .about(subject.id()),
            );
        }
    }
}

fn force_direction(model: &ResolvedModel, out: &mut Vec<Diagnostic>) {
    for rel in model.relationships_of(RelationshipKind::EnsuresConsistentApplicationOf) {
        let (Some(source), Some(target)) = (model.instance(&rel.source), model.instance(&rel.target)) else {
            continue;
        };
        let (Some(sk), Some(tk)) = (source.act_kind(), target.act_kind()) else {
            continue;
        };
        if sk.force_rank() <= tk.force_rank() {
            out.push(
                Diagnostic::error(
                    Code::FORCE_DIRECTION,
                    rel.span.clone(),
                    format!(
                        "`{}` ({sk}) cannot ensure consistent application of `{}` ({tk}): the target must have higher force",
                        source.id(),
                        target.id()
                    ),
                )
                .about(source.id()),
            );
        }
    }
}

fn signoff_roles(model: &ResolvedModel, out: &mut Vec<Diagnostic>) {
    for signoff in model.signoffs() {
        let allowed = signoff.milestone.accepting_roles();
        if !allowed.contains(&signoff.role) {
            let names: Vec<&str> = allowed.iter().map(|r| r.keyword()).collect();
            out.push(Diagnostic::error(
                Code::SIGNOFF_ROLE,
                signoff.span.clone(),
                format!(
                    "{} cannot be accepted by {}; accepting roles: {}",
                    signoff.milestone,
                    signoff.role,
                    names.join(", ")
                ),
            ));
        }
    }
}

fn criteria(model: &ResolvedModel, out: &mut Vec<Diagnostic>) {
    for instance in model.instances() {
        let kind = match instance.class() {
            ConceptClass::Jurisdiction => RelationshipKind::AppliesWithin,
            ConceptClass::FieldOfLaw => RelationshipKind::BelongsToField,
            _ => continue,
        };
        let referenced = model.relationships_of(kind).any(|r| r.target == instance.id());
        if referenced && instance.tags("criteria").is_empty() {
            out.push(
                Diagnostic::error(
                    Code::EMPTY_CRITERIA,
                    instance.span().clone(),
                    format!(
                        "{} `{}` is referenced by `{kind}` but has no criteria",
                        instance.class(),
                        instance.id()
                    ),
                )
                .about(instance.id()),
            );
        }
    }
}

fn demand_provenance(model: &ResolvedModel, applicability: Option<&ApplicabilityResult>, out: &mut Vec<Diagnostic>) {
    for demand in model.instances_of(ConceptClass::RegulatoryDemand) {
        let Some(act_id) = demand.reference("source_act") else {
            continue;
        };
        let span = demand.property_span("source_act").clone();
        match model.instance(act_id) {
            Some(act) if act.class() == ConceptClass::RegulatoryAct => {
                if applicability.is_some_and(|a| !a.is_applicable(act_id)) {
                    out.push(
                        Diagnostic::warning(
                            Code::DEMAND_PROVENANCE,
                            span,
                            format!("demand `{}` comes from `{act_id}`, which does not apply to this project", demand.id()),
                        )
                        .with_related(act.span().clone())
                        .about(demand.id()),
                    );
                }
            }
            _ => out.push(
                Diagnostic::error(
                    Code::DEMAND_PROVENANCE,
                    span,
                    format!("source act `{act_id}` of demand `{}` is not a regulatory act", demand.id()),
                )
                .about(demand.id()),
            ),
        }
    }
}
