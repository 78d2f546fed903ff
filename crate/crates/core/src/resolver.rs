//! Binds relationship endpoints and property references to instances.

use std::ops::Deref;

use crate::diagnostic::{canonicalize, Code, Diagnostic};
use crate::metamodel::{ArtifactModel, PropertyType, Relationship};

/// A model whose relationships all have bound, class-conformant endpoints.
///
/// Relationships that fail resolution are reported and left out, so
/// resolving a resolved model again leaves it unchanged. Unresolvable
/// property references stay in place and are reported each time.
#[derive(Debug, Clone)]
pub struct ResolvedModel {
    model: ArtifactModel,
}

impl ResolvedModel {
    pub fn into_inner(self) -> ArtifactModel {
        self.model
    }
}

impl Deref for ResolvedModel {
    type Target = ArtifactModel;

    fn deref(&self) -> &ArtifactModel {
        &self.model
    }
}

pub fn resolve(mut model: ArtifactModel) -> (ResolvedModel, Vec<Diagnostic>) {
    let mut diagnostics = Vec::new();

    let mut rejected = Vec::new();
    for rel in model.relationships() {
        let before = diagnostics.len();
        check_relationship(&model, rel, &mut diagnostics);
        if diagnostics.len() > before {
            rejected.push(rel.id);
        }
    }
    model.retain_relationships(|r| !rejected.contains(&r.id));

    for instance in model.instances() {
        for spec in instance.class().properties() {
            let PropertyType::Reference(expected) = spec.ty else {
                continue;
            };
            let Some(target) = instance.reference(spec.name) else {
                continue;
            };
            let span = instance.property_span(spec.name).clone();
            match model.instance(target) {
                None => diagnostics.push(
                    Diagnostic::error(
                        Code::UNKNOWN_IDENTIFIER,
                        span,
                        format!("`{}` of `{}` refers to unknown identifier `{target}`", spec.name, instance.id()),
                    )
                    .about(instance.id()),
                ),
                Some(found) if found.class() != expected => diagnostics.push(
                    Diagnostic::error(
                        Code::ENDPOINT_MISMATCH,
                        span,
                        format!(
                            "`{}` of `{}` must refer to a {expected}, but `{target}` is a {}",
                            spec.name,
                            instance.id(),
                            found.class()
                        ),
                    )
                    .with_related(found.span().clone())
                    .about(instance.id()),
                ),
                Some(_) => {}
            }
        }
    }

    canonicalize(&mut diagnostics);
    (ResolvedModel { model }, diagnostics)
}

fn check_relationship(model: &ArtifactModel, rel: &Relationship, out: &mut Vec<Diagnostic>) {
    let source = model.instance(&rel.source);
    let target = model.instance(&rel.target);
    if source.is_none() {
        out.push(Diagnostic::error(
            Code::UNKNOWN_IDENTIFIER,
            rel.source_span.clone(),
            format!("unknown identifier `{}`", rel.source),
        ));
    }
    if target.is_none() {
        out.push(Diagnostic::error(
            Code::UNKNOWN_IDENTIFIER,
            rel.target_span.clone(),
            format!("unknown identifier `{}`", rel.target),
        ));
    }
    let (Some(source), Some(target)) = (source, target) else {
        return;
    };

    if !rel.kind.admits(source.class(), target.class()) {
        let expected = |classes: &[crate::metamodel::ConceptClass]| {
            classes.iter().map(ToString::to_string).collect::<Vec<_>>().join(" or ")
        };
        out.push(
            Diagnostic::error(
                Code::ENDPOINT_MISMATCH,
                rel.span.clone(),
                format!(
                    "`{}` relates a {} to a {}, found {} `{}` -> {} `{}`",
                    rel.kind,
                    expected(rel.kind.source_classes()),
                    expected(rel.kind.target_classes()),
                    source.class(),
                    source.id(),
                    target.class(),
                    target.id()
                ),
            )
            .with_related(source.span().clone())
            .with_related(target.span().clone())
            .about(source.id()),
        );
    }
    if rel.kind.requires_distinct_endpoints() && rel.source == rel.target {
        out.push(
            Diagnostic::error(
                Code::ENDPOINT_MISMATCH,
                rel.span.clone(),
                format!("`{}` cannot relate `{}` to itself", rel.kind, rel.source),
            )
            .about(source.id()),
        );
    }
}
