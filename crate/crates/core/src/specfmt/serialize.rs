use std::fmt::Write as _;

use crate::metamodel::{ArtifactModel, ConceptInstance, PropertyValue};

/// Writes `model` back as canonical `.amr` text: instances in declaration
/// order, then declared relationships, then sign-offs. Derived
/// relationships are never written.
pub fn serialize(model: &ArtifactModel) -> String {
    let mut sections: Vec<String> = model.instances().iter().map(instance_block).collect();

    let rels: String = model
        .relationships()
        .iter()
        .filter(|r| !r.derived)
        .map(|r| format!("rel {} {} {}\n", r.source, r.kind.keyword(), r.target))
        .collect();
    if !rels.is_empty() {
        sections.push(rels);
    }

    let mut signoffs = model.signoffs().to_vec();
    signoffs.sort_by_key(|s| s.sequence);
    let accepts: String = signoffs
        .iter()
        .map(|s| format!("accept {} by {}\n", s.milestone.keyword(), s.role.keyword()))
        .collect();
    if !accepts.is_empty() {
        sections.push(accepts);
    }

    sections.join("\n")
}

fn instance_block(instance: &ConceptInstance) -> String {
    let mut out = format!("{} {} {{", instance.class().keyword(), instance.id());
    let mut any = false;
    for spec in instance.class().properties() {
        let Some(value) = instance.get(spec.name) else {
            continue;
        };
        let Some(text) = value_text(value) else {
            continue;
        };
        if !any {
            out.push('\n');
            any = true;
        }
        let _ = writeln!(out, "  {}: {}", spec.name, text);
    }
    out.push_str("}\n");
    out
}

/// `None` for values with no concrete syntax (the empty tag set).
fn value_text(value: &PropertyValue) -> Option<String> {
    Some(match value {
        PropertyValue::Text(s) => quote(s),
        PropertyValue::ActKind(k) => k.keyword().to_owned(),
        PropertyValue::Person(p) => p.keyword().to_owned(),
        PropertyValue::DelegatoryRole(r) => r.keyword().to_owned(),
        PropertyValue::RequirementKind(k) => k.keyword().to_owned(),
        PropertyValue::Flag(b) => b.to_string(),
        PropertyValue::Reference(r) => r.clone(),
        PropertyValue::Tags(tags) if tags.is_empty() => return None,
        PropertyValue::Tags(tags) => {
            let items: Vec<String> = tags.iter().map(ToString::to_string).collect();
            format!("[{}]", items.join(", "))
        }
    })
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}
