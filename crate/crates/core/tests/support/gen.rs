//! Random model generators. Each returns both a plain description (fed to
//! the oracles) and the equivalent `ArtifactModel` (fed to the engine).

use am4rre_core::metamodel::{
    ActKind, ArtifactModel, ConceptClass, ConceptInstance, MilestoneId, Namespace, PropertyType, PropertyValue,
    RelationshipKind, RoleId, Tag, TagSet,
};
use am4rre_core::SourceSpan;
use rand::seq::IndexedRandom;
use rand::Rng;

pub const LOC_POOL: [&str; 6] = ["EU", "US", "UK", "CH", "JP", "BR"];
pub const INTENT_POOL: [&str; 6] = ["process-personal-data", "store-health", "profile", "track", "sell-data", "export"];

pub fn tag(ns: Namespace, name: &str) -> Tag {
    Tag::new(ns, name).unwrap()
}

fn tag_set(ns: Namespace, names: &[&str]) -> TagSet {
    names.iter().map(|n| tag(ns, n)).collect()
}

fn pick_tags<'a, R: Rng>(rng: &mut R, pool: &[&'a str], max: usize) -> Vec<&'a str> {
    let n = rng.random_range(0..=max);
    let mut out: Vec<&str> = pool.choose_multiple(rng, n).copied().collect();
    out.sort_unstable();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContextKind {
    Stakeholder,
    DomainModel,
    Intent,
}

#[derive(Debug, Clone)]
pub struct ContextSpec {
    pub id: String,
    pub kind: ContextKind,
    /// Location tags for stakeholders and domain models, intent tags otherwise.
    pub tags: Vec<&'static str>,
}

/// Regulatory context plus project context, described as plain data.
#[derive(Debug, Clone, Default)]
pub struct ApplicabilitySpec {
    pub acts: Vec<(String, ActKind)>,
    pub jurisdictions: Vec<(String, Vec<&'static str>)>,
    pub fields: Vec<(String, Vec<&'static str>)>,
    pub context: Vec<ContextSpec>,
    pub applies_within: Vec<(usize, usize)>,
    pub belongs_to_field: Vec<(usize, usize)>,
    /// (supporting act, supported act); always from lower to strictly higher force.
    pub ensures: Vec<(usize, usize)>,
}

pub fn applicability_spec<R: Rng>(rng: &mut R) -> ApplicabilitySpec {
    let mut spec = ApplicabilitySpec::default();
    let n_acts = rng.random_range(0..=10);
    let n_juris = rng.random_range(0..=5);
    let n_fields = rng.random_range(0..=5);
    let n_context = rng.random_range(0..=10);
    for i in 0..n_acts {
        spec.acts.push((format!("act{i}"), *ActKind::ALL.choose(rng).unwrap()));
    }
    for i in 0..n_juris {
        spec.jurisdictions.push((format!("jur{i}"), pick_tags(rng, &LOC_POOL, 3)));
    }
    for i in 0..n_fields {
        spec.fields.push((format!("fld{i}"), pick_tags(rng, &INTENT_POOL, 3)));
    }
    for i in 0..n_context {
        let kind = *[ContextKind::Stakeholder, ContextKind::DomainModel, ContextKind::Intent]
            .choose(rng)
            .unwrap();
        let tags = match kind {
            ContextKind::Intent => pick_tags(rng, &INTENT_POOL, 2),
            _ => pick_tags(rng, &LOC_POOL, 2),
        };
        spec.context.push(ContextSpec {
            id: format!("ctx{i}"),
            kind,
            tags,
        });
    }
    for a in 0..n_acts {
        if n_juris > 0 {
            for _ in 0..rng.random_range(0..=2) {
                spec.applies_within.push((a, rng.random_range(0..n_juris)));
            }
        }
        if n_fields > 0 {
            for _ in 0..rng.random_range(0..=2) {
                spec.belongs_to_field.push((a, rng.random_range(0..n_fields)));
            }
        }
        if n_acts > 1 && rng.random_bool(0.3) {
            let b = rng.random_range(0..n_acts);
            if spec.acts[b].1.force_rank() < spec.acts[a].1.force_rank() {
                spec.ensures.push((a, b));
            }
        }
    }
    spec
}

impl ApplicabilitySpec {
    pub fn to_model(&self) -> ArtifactModel {
        let mut m = ArtifactModel::new("random.amr");
        let text = |s: &str| PropertyValue::Text(s.to_owned());
        for (id, kind) in &self.acts {
            let act = ConceptInstance::new(id.as_str(), ConceptClass::RegulatoryAct)
                .unwrap()
                .with("kind", PropertyValue::ActKind(*kind))
                .unwrap()
                .with("title", text(id))
                .unwrap();
            m.add_instance(act).unwrap();
        }
        for (list, class, ns) in [
            (&self.jurisdictions, ConceptClass::Jurisdiction, Namespace::Loc),
            (&self.fields, ConceptClass::FieldOfLaw, Namespace::Intent),
        ] {
            for (id, tags) in list {
                let mut inst = ConceptInstance::new(id.as_str(), class).unwrap();
                if !tags.is_empty() {
                    inst = inst.with("criteria", PropertyValue::Tags(tag_set(ns, tags))).unwrap();
                }
                m.add_instance(inst).unwrap();
            }
        }
        for c in &self.context {
            let (class, prop, ns) = match c.kind {
                ContextKind::Stakeholder => (ConceptClass::Stakeholder, "location", Namespace::Loc),
                ContextKind::DomainModel => (ConceptClass::DomainModel, "processor_location", Namespace::Loc),
                ContextKind::Intent => (ConceptClass::StatementOfIntent, "intents", Namespace::Intent),
            };
            let mut inst = ConceptInstance::new(c.id.as_str(), class).unwrap();
            if class == ConceptClass::Stakeholder {
                inst = inst.with("person", PropertyValue::Person(am4rre_core::metamodel::PersonType::Natural)).unwrap();
            }
            if !c.tags.is_empty() {
                inst = inst.with(prop, PropertyValue::Tags(tag_set(ns, &c.tags))).unwrap();
            }
            m.add_instance(inst).unwrap();
        }
        for &(a, j) in &self.applies_within {
            m.relate(RelationshipKind::AppliesWithin, &self.acts[a].0, &self.jurisdictions[j].0);
        }
        for &(a, f) in &self.belongs_to_field {
            m.relate(RelationshipKind::BelongsToField, &self.acts[a].0, &self.fields[f].0);
        }
        for &(a, b) in &self.ensures {
            m.relate(RelationshipKind::EnsuresConsistentApplicationOf, &self.acts[a].0, &self.acts[b].0);
        }
        m
    }
}

/// Delegation graph over subjects `s0..s{n-1}`.
#[derive(Debug, Clone, Default)]
pub struct DelegationSpec {
    pub subjects: usize,
    pub delegates: Vec<(usize, usize)>,
    pub duties: Vec<(usize, usize)>,
}

pub fn subject_id(i: usize) -> String {
    format!("s{i}")
}

/// All ordered pairs of distinct subjects.
pub fn distinct_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect()
}

pub fn delegation_spec<R: Rng>(rng: &mut R, max_subjects: usize) -> DelegationSpec {
    let n = rng.random_range(1..=max_subjects);
    let pairs = distinct_pairs(n);
    let density: f64 = rng.random_range(0.05..0.5);
    DelegationSpec {
        subjects: n,
        delegates: pairs.iter().copied().filter(|_| rng.random_bool(density)).collect(),
        duties: pairs.iter().copied().filter(|_| rng.random_bool(0.25)).collect(),
    }
}

impl DelegationSpec {
    pub fn to_model(&self) -> ArtifactModel {
        let mut m = ArtifactModel::new("delegation.amr");
        for i in 0..self.subjects {
            let s = ConceptInstance::new(subject_id(i), ConceptClass::LegalSubject)
                .unwrap()
                .with("person", PropertyValue::Person(am4rre_core::metamodel::PersonType::Any))
                .unwrap()
                .with("delegatory_role", PropertyValue::DelegatoryRole(am4rre_core::metamodel::DelegatoryRole::None))
                .unwrap();
            m.add_instance(s).unwrap();
        }
        for &(a, b) in &self.duties {
            m.relate(RelationshipKind::OwesDutyTo, &subject_id(a), &subject_id(b));
        }
        for &(a, b) in &self.delegates {
            m.relate(RelationshipKind::DelegatesTo, &subject_id(a), &subject_id(b));
        }
        m
    }
}

const TEXT_CHARS: &[char] = &[
    'a', 'b', 'Z', '0', ' ', ' ', '"', '\\', '\n', '\t', '#', '{', '}', '[', ']', ':', ',', 'é', '§', '→', '\'',
];

fn random_text<R: Rng>(rng: &mut R) -> String {
    let len = rng.random_range(0..12);
    (0..len).map(|_| *TEXT_CHARS.choose(rng).unwrap()).collect()
}

fn random_identifier<R: Rng>(rng: &mut R, i: usize) -> String {
    let stems = ["x", "Item", "data_subject", "A1", "é-node", "v.2", "_p"];
    format!("{}{i}", stems.choose(rng).unwrap())
}

fn random_value<R: Rng>(rng: &mut R, ty: PropertyType, ids: &[String]) -> PropertyValue {
    match ty {
        PropertyType::Text => PropertyValue::Text(random_text(rng)),
        PropertyType::Tags(ns) => {
            let pool: &[&str] = match ns {
                Namespace::Loc => &LOC_POOL,
                Namespace::Intent => &INTENT_POOL,
                Namespace::Data => &["health", "contact", "location", "biometric"],
            };
            let n = rng.random_range(1..=3);
            let names: Vec<&str> = pool.choose_multiple(rng, n).copied().collect();
            PropertyValue::Tags(tag_set(ns, &names))
        }
        PropertyType::Reference(_) => PropertyValue::Reference(
            ids.choose(rng).cloned().unwrap_or_else(|| "nothing".to_owned()),
        ),
        other => {
            let word = other.keywords().choose(rng).unwrap();
            other.value_from_word(word).unwrap()
        }
    }
}

/// An arbitrary (not necessarily valid) model: random instances with random
/// subsets of their properties, random relationships between any ids, and
/// random sign-offs.
pub fn random_model<R: Rng>(rng: &mut R) -> ArtifactModel {
    let mut m = ArtifactModel::new("random.amr");
    let n = rng.random_range(0..=14);
    let ids: Vec<String> = (0..n).map(|i| random_identifier(rng, i)).collect();
    for id in &ids {
        let class = *ConceptClass::ALL.choose(rng).unwrap();
        let mut inst = ConceptInstance::new(id.as_str(), class).unwrap();
        for spec in class.properties() {
            if rng.random_bool(0.7) {
                inst = inst.with(spec.name, random_value(rng, spec.ty, &ids)).unwrap();
            }
        }
        m.add_instance(inst).unwrap();
    }
    if !ids.is_empty() {
        for _ in 0..rng.random_range(0..=12) {
            let kind = *RelationshipKind::ALL.choose(rng).unwrap();
            m.relate(kind, ids.choose(rng).unwrap(), ids.choose(rng).unwrap());
        }
    }
    for _ in 0..rng.random_range(0..=4) {
        let milestone = *MilestoneId::ALL.choose(rng).unwrap();
        let role = *RoleId::ALL.choose(rng).unwrap();
        let _ = m.add_signoff(milestone, role, SourceSpan::default());
    }
    m
}
