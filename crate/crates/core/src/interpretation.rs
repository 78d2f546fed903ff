//! Interpretation support: duties carried along delegation, candidate
//! legal-subject-to-stakeholder mappings, and demand coverage by requirements.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::diagnostic::{Code, Diagnostic};
use crate::metamodel::{ConceptClass, Relationship, RelationshipId, RelationshipKind};
use crate::resolver::ResolvedModel;

/// A duty derived along a delegation chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivedDuty {
    pub relationship: Relationship,
    /// Delegator whose declared duty was carried over.
    pub delegator: String,
    /// Number of `delegates_to` hops from the delegator.
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MappingSuggestion {
    pub subject: String,
    pub stakeholder: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Delegations {
    pub derived: Vec<DerivedDuty>,
    /// One E-INT-001 per delegation cycle.
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceReport {
    pub derived_relationships: Vec<DerivedDuty>,
    pub mapping_suggestions: Vec<MappingSuggestion>,
    pub unmapped_subjects: Vec<String>,
    /// Covered demands over all demands; 1.0 when there are none.
    pub demand_coverage: f64,
    pub uncovered_demands: Vec<String>,
    #[serde(skip)]
    pub diagnostics: Vec<Diagnostic>,
}

/// Successors along declared `delegates_to`, by declaration order.
fn delegation_graph(model: &ResolvedModel) -> BTreeMap<usize, Vec<usize>> {
    let mut graph: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for rel in model.relationships_of(RelationshipKind::DelegatesTo).filter(|r| !r.derived) {
        let (Some(s), Some(t)) = (model.position(&rel.source), model.position(&rel.target)) else {
            continue;
        };
        let next = graph.entry(s).or_default();
        if !next.contains(&t) {
            next.push(t);
        }
    }
    graph
}

/// Minimum hop count to every node reachable from `start` by one or more edges.
fn reachable(graph: &BTreeMap<usize, Vec<usize>>, start: usize) -> HashMap<usize, usize> {
    let mut depth = HashMap::new();
    let mut queue = VecDeque::new();
    for &n in graph.get(&start).into_iter().flatten() {
        if depth.insert(n, 1).is_none() {
            queue.push_back(n);
        }
    }
    while let Some(node) = queue.pop_front() {
        let d = depth[&node];
        for &n in graph.get(&node).into_iter().flatten() {
            if let std::collections::hash_map::Entry::Vacant(e) = depth.entry(n) {
                e.insert(d + 1);
                queue.push_back(n);
            }
        }
    }
    depth
}

/// Carries every declared `owes_duty_to` from a delegator to each subject it
/// delegates to, directly or through a chain. Subjects on a delegation
/// cycle receive no derived duties; each cycle is reported once.
pub fn expand_delegations(model: &ResolvedModel) -> Delegations {
    let graph = delegation_graph(model);
    let instances = model.instances();

    let mut reach: HashMap<usize, HashMap<usize, usize>> = HashMap::new();
    for &node in graph.keys() {
        reach.insert(node, reachable(&graph, node));
    }
    let cyclic: HashSet<usize> = reach
        .iter()
        .filter(|(node, r)| r.contains_key(node))
        .map(|(node, _)| *node)
        .collect();

    let mut diagnostics = Vec::new();
    let mut cyclic_sorted: Vec<usize> = cyclic.iter().copied().collect();
    cyclic_sorted.sort_unstable();
    let mut assigned = HashSet::new();
    for &node in &cyclic_sorted {
        if !assigned.insert(node) {
            continue;
        }
        let members: Vec<usize> = cyclic_sorted
            .iter()
            .copied()
            .filter(|&m| m == node || (reach[&node].contains_key(&m) && reach[&m].contains_key(&node)))
            .collect();
        assigned.extend(members.iter().copied());
        let names: Vec<&str> = members.iter().map(|&m| instances[m].id()).collect();
        let first_edge = model
            .relationships_of(RelationshipKind::DelegatesTo)
            .find(|r| names.contains(&r.source.as_str()) && names.contains(&r.target.as_str()));
        let span = first_edge.map_or_else(|| instances[node].span().clone(), |r| r.span.clone());
        let mut diag = Diagnostic::error(
            Code::DELEGATION_CYCLE,
            span,
            format!(
                "delegation cycle between {}; no duties are derived for these subjects",
                names.iter().map(|n| format!("`{n}`")).collect::<Vec<_>>().join(", ")
            ),
        )
        .about(names[0]);
        for &m in &members {
            diag = diag.with_related(instances[m].span().clone());
        }
        diagnostics.push(diag);
    }

    let declared: HashSet<(&str, &str)> = model
        .relationships_of(RelationshipKind::OwesDutyTo)
        .map(|r| (r.source.as_str(), r.target.as_str()))
        .collect();

    // (delegatee, obligee) -> (depth, delegator, span of the carried duty)
    let mut best: BTreeMap<(usize, usize), (usize, usize, &Relationship)> = BTreeMap::new();
    for duty in model.relationships_of(RelationshipKind::OwesDutyTo).filter(|r| !r.derived) {
        let (Some(delegator), Some(obligee)) = (model.position(&duty.source), model.position(&duty.target)) else {
            continue;
        };
        let Some(reached) = reach.get(&delegator) else {
            continue;
        };
        for (&delegatee, &depth) in reached {
            if delegatee == obligee
                || cyclic.contains(&delegatee)
                || declared.contains(&(instances[delegatee].id(), duty.target.as_str()))
            {
                continue;
            }
            let entry = best.entry((delegatee, obligee)).or_insert((depth, delegator, duty));
            if (depth, delegator) < (entry.0, entry.1) {
                *entry = (depth, delegator, duty);
            }
        }
    }

    let next_id = model.relationships().iter().map(|r| r.id.0 + 1).max().unwrap_or(0);
    let derived = best
        .into_iter()
        .enumerate()
        .map(|(k, ((delegatee, obligee), (depth, delegator, duty)))| {
            let mut relationship = Relationship::declared(
                RelationshipKind::OwesDutyTo,
                instances[delegatee].id(),
                instances[obligee].id(),
            )
            .with_spans(duty.span.clone(), duty.source_span.clone(), duty.target_span.clone());
            relationship.id = RelationshipId(next_id + k as u32);
            relationship.derived = true;
            DerivedDuty {
                relationship,
                delegator: instances[delegator].id().to_owned(),
                depth,
            }
        })
        .collect();

    Delegations { derived, diagnostics }
}

fn mapped_subjects(model: &ResolvedModel) -> HashSet<&str> {
    model
        .relationships_of(RelationshipKind::MapsTo)
        .map(|r| r.source.as_str())
        .collect()
}

/// For each legal subject without a declared mapping, the stakeholders
/// whose person type the subject admits.
pub fn suggest_mappings(model: &ResolvedModel) -> Vec<MappingSuggestion> {
    let mapped = mapped_subjects(model);
    let mut out = Vec::new();
    for subject in model.instances_of(ConceptClass::LegalSubject) {
        if mapped.contains(subject.id()) {
            continue;
        }
        let Some(wanted) = subject.person() else { continue };
        for stakeholder in model.instances_of(ConceptClass::Stakeholder) {
            if stakeholder.person().is_some_and(|p| wanted.admits(p)) {
                out.push(MappingSuggestion {
                    subject: subject.id().to_owned(),
                    stakeholder: stakeholder.id().to_owned(),
                });
            }
        }
    }
    out
}

/// Builds the trace report. With `derive_delegations` off, no duties are
/// derived and cycles go unreported.
pub fn coverage(model: &ResolvedModel, derive_delegations: bool) -> TraceReport {
    let delegations = if derive_delegations {
        expand_delegations(model)
    } else {
        Delegations::default()
    };

    let mapped = mapped_subjects(model);
    let unmapped_subjects = model
        .instances_of(ConceptClass::LegalSubject)
        .filter(|s| !mapped.contains(s.id()))
        .map(|s| s.id().to_owned())
        .collect();

    let covered: HashSet<&str> = model
        .relationships_of(RelationshipKind::DerivedFrom)
        .map(|r| r.target.as_str())
        .collect();
    let demands: Vec<&str> = model
        .instances_of(ConceptClass::RegulatoryDemand)
        .map(|d| d.id())
        .collect();
    let uncovered_demands: Vec<String> = demands
        .iter()
        .filter(|d| !covered.contains(*d))
        .map(|d| (*d).to_owned())
        .collect();
    let demand_coverage = if demands.is_empty() {
        1.0
    } else {
        (demands.len() - uncovered_demands.len()) as f64 / demands.len() as f64
    };

    TraceReport {
        derived_relationships: delegations.derived,
        mapping_suggestions: suggest_mappings(model),
        unmapped_subjects,
        demand_coverage,
        uncovered_demands,
        diagnostics: delegations.diagnostics,
    }
}
