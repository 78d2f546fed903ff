//! Which regulatory acts apply to the project, and in what order to process them.
//!
//! An act applies when both hold:
//! - one of its jurisdictions shares a `loc:` tag with a stakeholder
//!   location or a domain model's processor location, and
//! - one of its fields of law shares an `intent:` tag with a statement of intent.
//!
//! Criteria match on any shared tag. Every matching (criterion, tag,
//! context instance) triple is kept as evidence.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::diagnostic::{Code, Diagnostic};
use crate::metamodel::{ActKind, ArtifactModel, ConceptClass, RelationshipKind, Tag};
use crate::resolver::ResolvedModel;

/// One matching tag between a criterion holder and a context instance.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Evidence {
    /// Jurisdiction or field of law whose criteria matched.
    pub criterion: String,
    pub tag: Tag,
    /// Stakeholder, domain model or statement of intent carrying the tag.
    pub instance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActVerdict {
    pub act: String,
    pub kind: Option<ActKind>,
    pub force_rank: Option<u8>,
    pub applicable: bool,
    pub jurisdiction_evidence: Vec<Evidence>,
    pub field_evidence: Vec<Evidence>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApplicabilityResult {
    /// One verdict per act, in declaration order.
    pub acts: Vec<ActVerdict>,
    /// Applicable acts, highest force first.
    pub priority: Vec<String>,
    #[serde(skip)]
    pub diagnostics: Vec<Diagnostic>,
}

impl ApplicabilityResult {
    pub fn verdict(&self, act: &str) -> Option<&ActVerdict> {
        self.acts.iter().find(|v| v.act == act)
    }

    pub fn is_applicable(&self, act: &str) -> bool {
        self.verdict(act).is_some_and(|v| v.applicable)
    }

    pub fn applicable_acts(&self) -> impl Iterator<Item = &str> {
        self.acts.iter().filter(|v| v.applicable).map(|v| v.act.as_str())
    }

    /// True when some act could not be evaluated for lack of links.
    pub fn is_incomplete(&self) -> bool {
        self.diagnostics.iter().any(|d| d.code == Code::MISSING_APPLICABILITY_LINK)
    }
}

/// Tag-bearing context instances for one criterion namespace.
fn context_tags(model: &ArtifactModel, sources: &[(ConceptClass, &'static str)]) -> Vec<(String, Vec<Tag>)> {
    model
        .instances()
        .iter()
        .filter_map(|i| {
            let tags: Vec<Tag> = sources
                .iter()
                .filter(|(class, _)| i.class() == *class)
                .flat_map(|(_, prop)| i.tags(prop).iter().cloned())
                .collect();
            (!tags.is_empty()).then(|| (i.id().to_owned(), tags))
        })
        .collect()
}

fn evidence_for(
    model: &ArtifactModel,
    act: &str,
    kind: RelationshipKind,
    context: &[(String, Vec<Tag>)],
) -> Vec<Evidence> {
    let mut found = BTreeSet::new();
    for criterion_id in model.targets(act, kind) {
        let Some(criterion) = model.instance(criterion_id) else {
            continue;
        };
        let criteria = criterion.tags("criteria");
        for (instance, tags) in context {
            for tag in tags.iter().filter(|t| criteria.contains(t)) {
                found.insert(Evidence {
                    criterion: criterion_id.to_owned(),
                    tag: tag.clone(),
                    instance: instance.clone(),
                });
            }
        }
    }
    found.into_iter().collect()
}

pub fn compute_applicability(model: &ResolvedModel) -> ApplicabilityResult {
    let locations = context_tags(
        model,
        &[
            (ConceptClass::Stakeholder, "location"),
            (ConceptClass::DomainModel, "processor_location"),
        ],
    );
    let intents = context_tags(model, &[(ConceptClass::StatementOfIntent, "intents")]);

    let mut diagnostics = Vec::new();
    let mut acts = Vec::new();
    for act in model.instances_of(ConceptClass::RegulatoryAct) {
        let id = act.id();
        for (kind, what) in [
            (RelationshipKind::AppliesWithin, "jurisdiction"),
            (RelationshipKind::BelongsToField, "field of law"),
        ] {
            if model.targets(id, kind).next().is_none() {
                diagnostics.push(
                    Diagnostic::warning(
                        Code::MISSING_APPLICABILITY_LINK,
                        act.span().clone(),
                        format!("act `{id}` has no `{kind}` link; it cannot apply without a {what}"),
                    )
                    .about(id),
                );
            }
        }
        let jurisdiction_evidence = evidence_for(model, id, RelationshipKind::AppliesWithin, &locations);
        let field_evidence = evidence_for(model, id, RelationshipKind::BelongsToField, &intents);
        acts.push(ActVerdict {
            act: id.to_owned(),
            kind: act.act_kind(),
            force_rank: act.act_kind().map(ActKind::force_rank),
            applicable: !jurisdiction_evidence.is_empty() && !field_evidence.is_empty(),
            jurisdiction_evidence,
            field_evidence,
        });
    }

    let mut result = ApplicabilityResult {
        acts,
        priority: Vec::new(),
        diagnostics,
    };
    result.priority = priority_order(&result, model);
    result
}

/// Orders applicable acts by force (highest first). Among acts of equal
/// force, an act that ensures consistent application of another follows
/// it directly; remaining ties keep declaration order.
pub fn priority_order(result: &ApplicabilityResult, model: &ArtifactModel) -> Vec<String> {
    let applicable: Vec<&ActVerdict> = result.acts.iter().filter(|v| v.applicable).collect();
    let rank_of: HashMap<&str, u8> = applicable
        .iter()
        .map(|v| (v.act.as_str(), v.force_rank.unwrap_or(u8::MAX)))
        .collect();
    let position = |id: &str| model.position(id).unwrap_or(usize::MAX);

    let mut ranks: Vec<u8> = rank_of.values().copied().collect();
    ranks.sort_unstable();
    ranks.dedup();

    let mut order = Vec::with_capacity(applicable.len());
    for rank in ranks {
        let mut group: Vec<&str> = applicable
            .iter()
            .map(|v| v.act.as_str())
            .filter(|a| rank_of[a] == rank)
            .collect();
        group.sort_by_key(|a| position(a));

        let mut parent: HashMap<&str, &str> = HashMap::new();
        for &act in &group {
            let candidate = model
                .targets(act, RelationshipKind::EnsuresConsistentApplicationOf)
                .filter(|t| *t != act && group.contains(t))
                .min_by_key(|t| position(t));
            let Some(target) = candidate else { continue };
            let target = group[group.iter().position(|g| *g == target).expect("in group")];
            // Skip links that would close a cycle.
            let mut cursor = Some(target);
            let mut cyclic = false;
            while let Some(node) = cursor {
                if node == act {
                    cyclic = true;
                    break;
                }
                cursor = parent.get(node).copied();
            }
            if !cyclic {
                parent.insert(act, target);
            }
        }

        fn emit<'a>(node: &'a str, group: &[&'a str], parent: &HashMap<&'a str, &'a str>, out: &mut Vec<String>) {
            out.push(node.to_owned());
            for child in group.iter().filter(|c| parent.get(*c) == Some(&node)) {
                emit(child, group, parent, out);
            }
        }
        for root in group.iter().filter(|a| !parent.contains_key(*a)) {
            emit(root, &group, &parent, &mut order);
        }
    }
    order
}
