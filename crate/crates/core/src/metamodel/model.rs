use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::property::{ActKind, DelegatoryRole, PersonType, PropertySpec, PropertyValue};
use super::tag::TagSet;
use super::{ConceptClass, MilestoneId, RoleId};
use crate::diagnostic::SourceSpan;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetamodelError {
    #[error("`{0}` is not a valid identifier")]
    InvalidIdentifier(String),
    #[error("duplicate identifier `{0}`")]
    DuplicateId(String),
    #[error("{class} has no property `{name}`")]
    UnknownProperty { class: ConceptClass, name: String },
    #[error("property `{name}` of {class} does not accept this value")]
    InvalidValue { class: ConceptClass, name: String },
    #[error("{milestone} is already accepted by {role}")]
    DuplicateSignOff { milestone: MilestoneId, role: RoleId },
}

pub(crate) fn is_word_start(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

pub(crate) fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '.')
}

/// Whether `s` can be written as a bare word in a specification file.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(is_word_start) && chars.all(is_word_char)
}

static EMPTY_TAGS: std::sync::OnceLock<TagSet> = std::sync::OnceLock::new();

/// A typed instance of a content-model class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConceptInstance {
    id: String,
    class: ConceptClass,
    properties: BTreeMap<String, PropertyValue>,
    #[serde(skip)]
    span: SourceSpan,
    #[serde(skip)]
    property_spans: BTreeMap<String, SourceSpan>,
}

impl ConceptInstance {
    pub fn new(id: impl Into<String>, class: ConceptClass) -> Result<Self, MetamodelError> {
        let id = id.into();
        if !is_identifier(&id) {
            return Err(MetamodelError::InvalidIdentifier(id));
        }
        Ok(ConceptInstance {
            id,
            class,
            properties: BTreeMap::new(),
            span: SourceSpan::default(),
            property_spans: BTreeMap::new(),
        })
    }

    pub fn with_span(mut self, span: SourceSpan) -> Self {
        self.span = span;
        self
    }

    /// Builder form of [`ConceptInstance::set_property`].
    pub fn with(mut self, name: &str, value: PropertyValue) -> Result<Self, MetamodelError> {
        self.set_property(name, value, None)?;
        Ok(self)
    }

    /// Sets a declared property. Names outside the class blueprint and
    /// ill-typed values are rejected. Returns the previous value.
    pub fn set_property(
        &mut self,
        name: &str,
        value: PropertyValue,
        span: Option<SourceSpan>,
    ) -> Result<Option<PropertyValue>, MetamodelError> {
        let spec = self
            .class
            .property(name)
            .ok_or_else(|| MetamodelError::UnknownProperty {
                class: self.class,
                name: name.to_owned(),
            })?;
        if !spec.ty.accepts(&value) {
            return Err(MetamodelError::InvalidValue {
                class: self.class,
                name: name.to_owned(),
            });
        }
        if let PropertyValue::Reference(r) = &value {
            if !is_identifier(r) {
                return Err(MetamodelError::InvalidIdentifier(r.clone()));
            }
        }
        if let Some(span) = span {
            self.property_spans.insert(name.to_owned(), span);
        }
        Ok(self.properties.insert(name.to_owned(), value))
    }

    pub fn remove_property(&mut self, name: &str) -> Option<PropertyValue> {
        self.property_spans.remove(name);
        self.properties.remove(name)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn class(&self) -> ConceptClass {
        self.class
    }

    pub fn span(&self) -> &SourceSpan {
        &self.span
    }

    /// Span of a property value, falling back to the instance span.
    pub fn property_span(&self, name: &str) -> &SourceSpan {
        self.property_spans.get(name).unwrap_or(&self.span)
    }

    pub fn get(&self, name: &str) -> Option<&PropertyValue> {
        self.properties.get(name)
    }

    pub fn properties(&self) -> &BTreeMap<String, PropertyValue> {
        &self.properties
    }

    /// Required properties that have not been set.
    pub fn missing_required(&self) -> impl Iterator<Item = &'static PropertySpec> + '_ {
        self.class
            .properties()
            .iter()
            .filter(|p| p.required && !self.properties.contains_key(p.name))
    }

    pub fn text(&self, name: &str) -> Option<&str> {
        match self.get(name) {
            Some(PropertyValue::Text(t)) => Some(t),
            _ => None,
        }
    }

    /// Tag set property; absent tag sets are empty.
    pub fn tags(&self, name: &str) -> &TagSet {
        match self.get(name) {
            Some(PropertyValue::Tags(t)) => t,
            _ => EMPTY_TAGS.get_or_init(TagSet::new),
        }
    }

    pub fn reference(&self, name: &str) -> Option<&str> {
        match self.get(name) {
            Some(PropertyValue::Reference(r)) => Some(r),
            _ => None,
        }
    }

    pub fn flag(&self, name: &str) -> bool {
        matches!(self.get(name), Some(PropertyValue::Flag(true)))
    }

    pub fn act_kind(&self) -> Option<ActKind> {
        match self.get("kind") {
            Some(PropertyValue::ActKind(k)) => Some(*k),
            _ => None,
        }
    }

    pub fn person(&self) -> Option<PersonType> {
        match self.get("person") {
            Some(PropertyValue::Person(p)) => Some(*p),
            _ => None,
        }
    }

    pub fn delegatory_role(&self) -> Option<DelegatoryRole> {
        match self.get("delegatory_role") {
            Some(PropertyValue::DelegatoryRole(r)) => Some(*r),
            _ => None,
        }
    }

    pub fn display_name(&self) -> &str {
        self.text("title")
            .or_else(|| self.text("name"))
            .unwrap_or(&self.id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationshipKind {
    EnsuresConsistentApplicationOf,
    AppliesWithin,
    BelongsToField,
    IssuedBy,
    OwesDutyTo,
    DelegatesTo,
    MapsTo,
    DerivedFrom,
    Contains,
}

impl RelationshipKind {
    pub const ALL: [RelationshipKind; 9] = [
        RelationshipKind::EnsuresConsistentApplicationOf,
        RelationshipKind::AppliesWithin,
        RelationshipKind::BelongsToField,
        RelationshipKind::IssuedBy,
        RelationshipKind::OwesDutyTo,
        RelationshipKind::DelegatesTo,
        RelationshipKind::MapsTo,
        RelationshipKind::DerivedFrom,
        RelationshipKind::Contains,
    ];

    pub fn keyword(self) -> &'static str {
        use RelationshipKind::*;
        match self {
            EnsuresConsistentApplicationOf => "ensures_consistent_application_of",
            AppliesWithin => "applies_within",
            BelongsToField => "belongs_to_field",
            IssuedBy => "issued_by",
            OwesDutyTo => "owes_duty_to",
            DelegatesTo => "delegates_to",
            MapsTo => "maps_to",
            DerivedFrom => "derived_from",
            Contains => "contains",
        }
    }

    pub fn from_keyword(word: &str) -> Option<RelationshipKind> {
        RelationshipKind::ALL.into_iter().find(|k| k.keyword() == word)
    }

    pub fn source_classes(self) -> &'static [ConceptClass] {
        use ConceptClass as C;
        use RelationshipKind::*;
        match self {
            EnsuresConsistentApplicationOf | AppliesWithin | BelongsToField | IssuedBy | Contains => {
                &[C::RegulatoryAct]
            }
            OwesDutyTo | DelegatesTo | MapsTo => &[C::LegalSubject],
            DerivedFrom => &[C::Requirement],
        }
    }

    pub fn target_classes(self) -> &'static [ConceptClass] {
        use ConceptClass as C;
        use RelationshipKind::*;
        match self {
            EnsuresConsistentApplicationOf => &[C::RegulatoryAct],
            AppliesWithin => &[C::Jurisdiction],
            BelongsToField => &[C::FieldOfLaw],
            IssuedBy => &[C::Regulator],
            OwesDutyTo | DelegatesTo => &[C::LegalSubject],
            MapsTo => &[C::Stakeholder],
            DerivedFrom => &[C::RegulatoryDemand],
            Contains => &[C::LegalSubject, C::RegulatoryDemand],
        }
    }

    pub fn admits(self, source: ConceptClass, target: ConceptClass) -> bool {
        self.source_classes().contains(&source) && self.target_classes().contains(&target)
    }

    /// Kinds whose source and target must be different instances.
    pub fn requires_distinct_endpoints(self) -> bool {
        matches!(self, RelationshipKind::OwesDutyTo | RelationshipKind::DelegatesTo)
    }
}

impl fmt::Display for RelationshipKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct RelationshipId(pub u32);

/// A directed, typed link between two instances, by id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relationship {
    pub id: RelationshipId,
    pub kind: RelationshipKind,
    pub source: String,
    pub target: String,
    /// True when produced by analysis rather than declared.
    pub derived: bool,
    #[serde(skip)]
    pub span: SourceSpan,
    #[serde(skip)]
    pub source_span: SourceSpan,
    #[serde(skip)]
    pub target_span: SourceSpan,
}

impl Relationship {
    pub fn declared(kind: RelationshipKind, source: impl Into<String>, target: impl Into<String>) -> Self {
        Relationship {
            id: RelationshipId(0),
            kind,
            source: source.into(),
            target: target.into(),
            derived: false,
            span: SourceSpan::default(),
            source_span: SourceSpan::default(),
            target_span: SourceSpan::default(),
        }
    }

    pub fn with_spans(mut self, span: SourceSpan, source_span: SourceSpan, target_span: SourceSpan) -> Self {
        self.span = span;
        self.source_span = source_span;
        self.target_span = target_span;
        self
    }
}

/// Acceptance of a milestone by one role.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignOff {
    pub milestone: MilestoneId,
    pub role: RoleId,
    pub sequence: u32,
    #[serde(skip)]
    pub span: SourceSpan,
}

/// Root container: instances, relationships and sign-offs of one file.
#[derive(Debug, Clone, Default)]
pub struct ArtifactModel {
    source_name: String,
    instances: Vec<ConceptInstance>,
    index: HashMap<String, usize>,
    relationships: Vec<Relationship>,
    signoffs: Vec<SignOff>,
    next_relationship: u32,
}

impl ArtifactModel {
    pub fn new(source_name: impl Into<String>) -> Self {
        ArtifactModel {
            source_name: source_name.into(),
            ..Default::default()
        }
    }

    pub fn source_name(&self) -> &str {
        &self.source_name
    }

    pub fn add_instance(&mut self, instance: ConceptInstance) -> Result<(), MetamodelError> {
        if self.index.contains_key(instance.id()) {
            return Err(MetamodelError::DuplicateId(instance.id.clone()));
        }
        self.index.insert(instance.id.clone(), self.instances.len());
        self.instances.push(instance);
        Ok(())
    }

    /// Adds a relationship, assigning it the next id.
    pub fn add_relationship(&mut self, mut relationship: Relationship) -> RelationshipId {
        let id = RelationshipId(self.next_relationship);
        self.next_relationship += 1;
        relationship.id = id;
        self.relationships.push(relationship);
        id
    }

    /// Shorthand for a declared relationship without source spans.
    pub fn relate(&mut self, kind: RelationshipKind, source: &str, target: &str) -> RelationshipId {
        self.add_relationship(Relationship::declared(kind, source, target))
    }

    pub fn add_signoff(
        &mut self,
        milestone: MilestoneId,
        role: RoleId,
        span: SourceSpan,
    ) -> Result<(), MetamodelError> {
        if self.has_signoff(milestone, role) {
            return Err(MetamodelError::DuplicateSignOff { milestone, role });
        }
        let sequence = self.signoffs.last().map_or(0, |s| s.sequence + 1);
        self.signoffs.push(SignOff {
            milestone,
            role,
            sequence,
            span,
        });
        Ok(())
    }

    pub fn has_signoff(&self, milestone: MilestoneId, role: RoleId) -> bool {
        self.signoffs
            .iter()
            .any(|s| s.milestone == milestone && s.role == role)
    }

    pub fn clear_signoffs(&mut self) {
        self.signoffs.clear();
    }

    pub fn retain_relationships(&mut self, keep: impl FnMut(&Relationship) -> bool) {
        self.relationships.retain(keep);
    }

    pub fn instance(&self, id: &str) -> Option<&ConceptInstance> {
        self.index.get(id).map(|&i| &self.instances[i])
    }

    pub fn instance_mut(&mut self, id: &str) -> Option<&mut ConceptInstance> {
        self.index.get(id).map(|&i| &mut self.instances[i])
    }

    /// Declaration position of an instance.
    pub fn position(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn instances(&self) -> &[ConceptInstance] {
        &self.instances
    }

    pub fn instances_of(&self, class: ConceptClass) -> impl Iterator<Item = &ConceptInstance> + '_ {
        self.instances.iter().filter(move |i| i.class() == class)
    }

    pub fn relationships(&self) -> &[Relationship] {
        &self.relationships
    }

    pub fn relationships_of(&self, kind: RelationshipKind) -> impl Iterator<Item = &Relationship> + '_ {
        self.relationships.iter().filter(move |r| r.kind == kind)
    }

    /// Targets of `kind` relationships leaving `source`.
    pub fn targets<'a>(&'a self, source: &'a str, kind: RelationshipKind) -> impl Iterator<Item = &'a str> + 'a {
        self.relationships_of(kind)
            .filter(move |r| r.source == source)
            .map(|r| r.target.as_str())
    }

    pub fn has_relationship(&self, kind: RelationshipKind, source: &str, target: &str) -> bool {
        self.relationships_of(kind)
            .any(|r| r.source == source && r.target == target)
    }

    pub fn signoffs(&self) -> &[SignOff] {
        &self.signoffs
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty() && self.relationships.is_empty() && self.signoffs.is_empty()
    }

    pub fn canonical(&self) -> CanonicalModel {
        let instances = self
            .instances
            .iter()
            .map(|i| (i.id.clone(), (i.class, i.properties.clone())))
            .collect();
        let mut relationships: Vec<_> = self
            .relationships
            .iter()
            .filter(|r| !r.derived)
            .map(|r| (r.kind, r.source.clone(), r.target.clone()))
            .collect();
        relationships.sort();
        let signoffs = self.signoffs.iter().map(|s| (s.milestone, s.role)).collect();
        CanonicalModel {
            instances,
            relationships,
            signoffs,
        }
    }
}

/// Span- and order-independent view of a model's declared content.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalModel {
    pub instances: BTreeMap<String, (ConceptClass, BTreeMap<String, PropertyValue>)>,
    pub relationships: Vec<(RelationshipKind, String, String)>,
    pub signoffs: BTreeSet<(MilestoneId, RoleId)>,
}
