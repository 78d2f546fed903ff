use std::fmt;

use serde::Serialize;

use super::tag::{Namespace, TagSet};
use super::ConceptClass;

/// Kind of regulatory act. Determines normative force.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ActKind {
    Law,
    Regulation,
    Directive,
    Decision,
    Guideline,
    Recommendation,
}

impl ActKind {
    pub const ALL: [ActKind; 6] = [
        ActKind::Law,
        ActKind::Regulation,
        ActKind::Directive,
        ActKind::Decision,
        ActKind::Guideline,
        ActKind::Recommendation,
    ];

    /// Lower rank means higher force.
    pub fn force_rank(self) -> u8 {
        match self {
            ActKind::Law => 0,
            ActKind::Regulation => 1,
            ActKind::Directive => 2,
            ActKind::Decision => 3,
            ActKind::Guideline => 4,
            ActKind::Recommendation => 5,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            ActKind::Law => "law",
            ActKind::Regulation => "regulation",
            ActKind::Directive => "directive",
            ActKind::Decision => "decision",
            ActKind::Guideline => "guideline",
            ActKind::Recommendation => "recommendation",
        }
    }
}

impl fmt::Display for ActKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// Person type of a legal subject or stakeholder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PersonType {
    Natural,
    Legal,
    Any,
}

impl PersonType {
    pub fn keyword(self) -> &'static str {
        match self {
            PersonType::Natural => "natural",
            PersonType::Legal => "legal",
            PersonType::Any => "any",
        }
    }

    /// Whether a stakeholder of person type `other` satisfies this constraint.
    pub fn admits(self, other: PersonType) -> bool {
        self == PersonType::Any || self == other
    }
}

impl fmt::Display for PersonType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DelegatoryRole {
    Delegator,
    Delegatee,
    Obligee,
    None,
}

impl DelegatoryRole {
    pub const ALL: [DelegatoryRole; 4] = [
        DelegatoryRole::Delegator,
        DelegatoryRole::Delegatee,
        DelegatoryRole::Obligee,
        DelegatoryRole::None,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            DelegatoryRole::Delegator => "delegator",
            DelegatoryRole::Delegatee => "delegatee",
            DelegatoryRole::Obligee => "obligee",
            DelegatoryRole::None => "none",
        }
    }
}

impl fmt::Display for DelegatoryRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RequirementKind {
    Functional,
    Nonfunctional,
}

impl RequirementKind {
    pub fn keyword(self) -> &'static str {
        match self {
            RequirementKind::Functional => "functional",
            RequirementKind::Nonfunctional => "nonfunctional",
        }
    }
}

/// The value type a property accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropertyType {
    Text,
    ActKind,
    /// `allow_any` is false for stakeholders, which are always a concrete person.
    Person { allow_any: bool },
    DelegatoryRole,
    RequirementKind,
    Flag,
    Reference(ConceptClass),
    Tags(Namespace),
}

impl PropertyType {
    /// Keywords accepted for enumerated types.
    pub fn keywords(self) -> &'static [&'static str] {
        match self {
            PropertyType::ActKind => &["law", "regulation", "directive", "decision", "guideline", "recommendation"],
            PropertyType::Person { allow_any: true } => &["natural", "legal", "any"],
            PropertyType::Person { allow_any: false } => &["natural", "legal"],
            PropertyType::DelegatoryRole => &["delegator", "delegatee", "obligee", "none"],
            PropertyType::RequirementKind => &["functional", "nonfunctional"],
            PropertyType::Flag => &["true", "false"],
            _ => &[],
        }
    }

    /// Converts a bare word into a value of this type.
    pub fn value_from_word(self, word: &str) -> Option<PropertyValue> {
        let v = match (self, word) {
            (PropertyType::ActKind, w) => PropertyValue::ActKind(
                ActKind::ALL.into_iter().find(|k| k.keyword() == w)?,
            ),
            (PropertyType::Person { .. }, "natural") => PropertyValue::Person(PersonType::Natural),
            (PropertyType::Person { .. }, "legal") => PropertyValue::Person(PersonType::Legal),
            (PropertyType::Person { allow_any: true }, "any") => PropertyValue::Person(PersonType::Any),
            (PropertyType::DelegatoryRole, w) => PropertyValue::DelegatoryRole(
                DelegatoryRole::ALL.into_iter().find(|r| r.keyword() == w)?,
            ),
            (PropertyType::RequirementKind, "functional") => {
                PropertyValue::RequirementKind(RequirementKind::Functional)
            }
            (PropertyType::RequirementKind, "nonfunctional") => {
                PropertyValue::RequirementKind(RequirementKind::Nonfunctional)
            }
            (PropertyType::Flag, "true") => PropertyValue::Flag(true),
            (PropertyType::Flag, "false") => PropertyValue::Flag(false),
            (PropertyType::Reference(_), w) => PropertyValue::Reference(w.to_owned()),
            _ => return None,
        };
        Some(v)
    }

    /// Whether `value` is a well-typed value for this property type.
    pub fn accepts(self, value: &PropertyValue) -> bool {
        match (self, value) {
            (PropertyType::Text, PropertyValue::Text(_))
            | (PropertyType::ActKind, PropertyValue::ActKind(_))
            | (PropertyType::DelegatoryRole, PropertyValue::DelegatoryRole(_))
            | (PropertyType::RequirementKind, PropertyValue::RequirementKind(_))
            | (PropertyType::Flag, PropertyValue::Flag(_))
            | (PropertyType::Reference(_), PropertyValue::Reference(_)) => true,
            (PropertyType::Person { allow_any }, PropertyValue::Person(p)) => {
                allow_any || *p != PersonType::Any
            }
            (PropertyType::Tags(ns), PropertyValue::Tags(tags)) => tags.all_in(ns),
            _ => false,
        }
    }
}

/// A declared property of a concept class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PropertySpec {
    pub name: &'static str,
    pub ty: PropertyType,
    /// Tag sets are never required; an absent tag set is empty.
    pub required: bool,
}

const fn req(name: &'static str, ty: PropertyType) -> PropertySpec {
    PropertySpec { name, ty, required: true }
}

const fn opt(name: &'static str, ty: PropertyType) -> PropertySpec {
    PropertySpec { name, ty, required: false }
}

static ACT: [PropertySpec; 2] = [req("kind", PropertyType::ActKind), req("title", PropertyType::Text)];
static JURISDICTION: [PropertySpec; 1] = [opt("criteria", PropertyType::Tags(Namespace::Loc))];
static FIELD: [PropertySpec; 1] = [opt("criteria", PropertyType::Tags(Namespace::Intent))];
static REGULATOR: [PropertySpec; 1] = [req("name", PropertyType::Text)];
static SUBJECT: [PropertySpec; 3] = [
    req("person", PropertyType::Person { allow_any: true }),
    req("delegatory_role", PropertyType::DelegatoryRole),
    opt("unmapped", PropertyType::Flag),
];
static DEMAND: [PropertySpec; 2] = [
    req("text", PropertyType::Text),
    req("source_act", PropertyType::Reference(ConceptClass::RegulatoryAct)),
];
static SCOPE: [PropertySpec; 1] = [req("description", PropertyType::Text)];
static STAKEHOLDER: [PropertySpec; 2] = [
    req("person", PropertyType::Person { allow_any: false }),
    opt("location", PropertyType::Tags(Namespace::Loc)),
];
static DOMAIN_MODEL: [PropertySpec; 2] = [
    opt("processor_location", PropertyType::Tags(Namespace::Loc)),
    opt("data_categories", PropertyType::Tags(Namespace::Data)),
];
static INTENT: [PropertySpec; 1] = [opt("intents", PropertyType::Tags(Namespace::Intent))];
static REQUIREMENT: [PropertySpec; 2] = [
    req("text", PropertyType::Text),
    req("kind", PropertyType::RequirementKind),
];
static SYSTEM: [PropertySpec; 1] = [req("text", PropertyType::Text)];

pub(super) fn blueprint(class: ConceptClass) -> &'static [PropertySpec] {
    use ConceptClass::*;
    match class {
        RegulatoryAct => &ACT,
        Jurisdiction => &JURISDICTION,
        FieldOfLaw => &FIELD,
        Regulator => &REGULATOR,
        LegalSubject => &SUBJECT,
        RegulatoryDemand => &DEMAND,
        ProjectScope => &SCOPE,
        Stakeholder => &STAKEHOLDER,
        DomainModel => &DOMAIN_MODEL,
        StatementOfIntent => &INTENT,
        Requirement => &REQUIREMENT,
        SystemElement => &SYSTEM,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(untagged)]
pub enum PropertyValue {
    Text(String),
    ActKind(ActKind),
    Person(PersonType),
    DelegatoryRole(DelegatoryRole),
    RequirementKind(RequirementKind),
    Flag(bool),
    Reference(String),
    Tags(TagSet),
}
