//! In-memory representation of the layered artifact model.
//!
//! Every concept class lives on exactly one of five layers and has one
//! responsible role. Instances carry class-specific properties checked
//! against the class blueprint at construction time.

mod model;
mod property;
mod tag;

use std::fmt;

use serde::Serialize;

pub(crate) use model::{is_word_char, is_word_start};
pub use model::{is_identifier, ArtifactModel, CanonicalModel, ConceptInstance, MetamodelError, Relationship, RelationshipId, RelationshipKind, SignOff};
pub use property::{ActKind, DelegatoryRole, PersonType, PropertySpec, PropertyType, PropertyValue, RequirementKind};
pub use tag::{Namespace, Tag, TagError, TagSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LayerId {
    RegulatoryContext,
    RegulatoryDemands,
    Context,
    Requirements,
    System,
}

impl LayerId {
    pub const ALL: [LayerId; 5] = [
        LayerId::RegulatoryContext,
        LayerId::RegulatoryDemands,
        LayerId::Context,
        LayerId::Requirements,
        LayerId::System,
    ];
}

impl fmt::Display for LayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LayerId::RegulatoryContext => "regulatory context",
            LayerId::RegulatoryDemands => "regulatory demands",
            LayerId::Context => "context",
            LayerId::Requirements => "requirements",
            LayerId::System => "system",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RoleId {
    RequirementsEngineer,
    LegalExpert,
    DomainExpert,
}

impl RoleId {
    pub const ALL: [RoleId; 3] = [
        RoleId::RequirementsEngineer,
        RoleId::LegalExpert,
        RoleId::DomainExpert,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            RoleId::RequirementsEngineer => "requirements_engineer",
            RoleId::LegalExpert => "legal_expert",
            RoleId::DomainExpert => "domain_expert",
        }
    }

    pub fn from_keyword(word: &str) -> Option<RoleId> {
        RoleId::ALL.into_iter().find(|r| r.keyword() == word)
    }
}

impl fmt::Display for RoleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// Process milestones, ordered `M1 < M2 < M3 < M4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum MilestoneId {
    M1,
    M2,
    M3,
    M4,
}

impl MilestoneId {
    pub const ALL: [MilestoneId; 4] = [
        MilestoneId::M1,
        MilestoneId::M2,
        MilestoneId::M3,
        MilestoneId::M4,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            MilestoneId::M1 => "M1",
            MilestoneId::M2 => "M2",
            MilestoneId::M3 => "M3",
            MilestoneId::M4 => "M4",
        }
    }

    pub fn from_keyword(word: &str) -> Option<MilestoneId> {
        MilestoneId::ALL.into_iter().find(|m| m.keyword() == word)
    }

    pub fn predecessor(self) -> Option<MilestoneId> {
        match self {
            MilestoneId::M1 => None,
            MilestoneId::M2 => Some(MilestoneId::M1),
            MilestoneId::M3 => Some(MilestoneId::M2),
            MilestoneId::M4 => Some(MilestoneId::M3),
        }
    }

    /// Roles whose sign-off is required for acceptance. M2 needs both.
    pub fn accepting_roles(self) -> &'static [RoleId] {
        match self {
            MilestoneId::M1 => &[RoleId::RequirementsEngineer],
            MilestoneId::M2 => &[RoleId::LegalExpert, RoleId::DomainExpert],
            MilestoneId::M3 => &[RoleId::LegalExpert],
            MilestoneId::M4 => &[RoleId::RequirementsEngineer],
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            MilestoneId::M1 => "project scope defined",
            MilestoneId::M2 => "regulatory context specification accepted",
            MilestoneId::M3 => "regulatory demands specification accepted",
            MilestoneId::M4 => "requirements specification accepted",
        }
    }
}

impl fmt::Display for MilestoneId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// Content-model classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConceptClass {
    RegulatoryAct,
    Jurisdiction,
    FieldOfLaw,
    Regulator,
    LegalSubject,
    RegulatoryDemand,
    ProjectScope,
    Stakeholder,
    DomainModel,
    StatementOfIntent,
    Requirement,
    SystemElement,
}

impl ConceptClass {
    pub const ALL: [ConceptClass; 12] = [
        ConceptClass::RegulatoryAct,
        ConceptClass::Jurisdiction,
        ConceptClass::FieldOfLaw,
        ConceptClass::Regulator,
        ConceptClass::LegalSubject,
        ConceptClass::RegulatoryDemand,
        ConceptClass::ProjectScope,
        ConceptClass::Stakeholder,
        ConceptClass::DomainModel,
        ConceptClass::StatementOfIntent,
        ConceptClass::Requirement,
        ConceptClass::SystemElement,
    ];

    pub fn layer(self) -> LayerId {
        use ConceptClass::*;
        match self {
            RegulatoryAct | Jurisdiction | FieldOfLaw | Regulator => LayerId::RegulatoryContext,
            LegalSubject | RegulatoryDemand => LayerId::RegulatoryDemands,
            ProjectScope | Stakeholder | DomainModel | StatementOfIntent => LayerId::Context,
            Requirement => LayerId::Requirements,
            SystemElement => LayerId::System,
        }
    }

    pub fn responsible_role(self) -> RoleId {
        match self.layer() {
            LayerId::RegulatoryContext | LayerId::RegulatoryDemands => RoleId::LegalExpert,
            LayerId::Context => RoleId::DomainExpert,
            LayerId::Requirements | LayerId::System => RoleId::RequirementsEngineer,
        }
    }

    /// Roles sharing responsibility with [`ConceptClass::responsible_role`].
    /// Matching jurisdictions and fields of law against the project context
    /// involves the domain expert on the whole regulatory-context layer.
    pub fn co_responsible_roles(self) -> &'static [RoleId] {
        match self.layer() {
            LayerId::RegulatoryContext => &[RoleId::DomainExpert],
            _ => &[],
        }
    }

    pub fn keyword(self) -> &'static str {
        use ConceptClass::*;
        match self {
            RegulatoryAct => "act",
            Jurisdiction => "jurisdiction",
            FieldOfLaw => "field",
            Regulator => "regulator",
            LegalSubject => "subject",
            RegulatoryDemand => "demand",
            ProjectScope => "scope",
            Stakeholder => "stakeholder",
            DomainModel => "domain_model",
            StatementOfIntent => "intent",
            Requirement => "requirement",
            SystemElement => "system",
        }
    }

    pub fn from_keyword(word: &str) -> Option<ConceptClass> {
        ConceptClass::ALL.into_iter().find(|c| c.keyword() == word)
    }

    /// Declared properties, in canonical order.
    pub fn properties(self) -> &'static [PropertySpec] {
        property::blueprint(self)
    }

    pub fn property(self, name: &str) -> Option<&'static PropertySpec> {
        self.properties().iter().find(|p| p.name == name)
    }
}

impl fmt::Display for ConceptClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ConceptClass::*;
        f.write_str(match self {
            RegulatoryAct => "regulatory act",
            Jurisdiction => "jurisdiction",
            FieldOfLaw => "field of law",
            Regulator => "regulator",
            LegalSubject => "legal subject",
            RegulatoryDemand => "regulatory demand",
            ProjectScope => "project scope",
            Stakeholder => "stakeholder",
            DomainModel => "domain model",
            StatementOfIntent => "statement of intent",
            Requirement => "requirement",
            SystemElement => "system element",
        })
    }
}

pub fn layer_of(class: ConceptClass) -> LayerId {
    class.layer()
}

pub fn responsible_role(class: ConceptClass) -> RoleId {
    class.responsible_role()
}

pub fn force_rank(kind: ActKind) -> u8 {
    kind.force_rank()
}
