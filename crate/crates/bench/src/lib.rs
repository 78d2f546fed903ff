//! Synthetic specifications of configurable size for benchmarking.

use std::fmt::Write;

/// A valid specification with `acts` acts, each with its own jurisdiction
/// and demand, and a delegation chain of `subjects` legal subjects.
pub fn synthetic_spec(acts: usize, subjects: usize) -> String {
    let mut out = String::new();
    out.push_str("scope s { description: \"bench\" }\n");
    out.push_str("field f { criteria: [intent:p] }\n");
    out.push_str("intent i { intents: [intent:p] }\n");
    out.push_str("stakeholder st { person: legal location: [loc:EU] }\n");
    for a in 0..acts {
        let kind = if a == 0 { "regulation" } else { "guideline" };
        writeln!(out, "act A{a} {{ kind: {kind} title: \"act {a}\" }}").unwrap();
        writeln!(out, "jurisdiction J{a} {{ criteria: [loc:EU, loc:R{a}] }}").unwrap();
        writeln!(out, "demand D{a} {{ text: \"demand {a}\" source_act: A{a} }}").unwrap();
        writeln!(out, "rel A{a} applies_within J{a}\nrel A{a} belongs_to_field f\nrel A{a} contains D{a}").unwrap();
        if a > 0 {
            writeln!(out, "rel A{a} ensures_consistent_application_of A0").unwrap();
        }
    }
    if subjects > 0 {
        out.push_str("subject obligee { person: any delegatory_role: obligee }\n");
        for s in 0..subjects {
            let role = if s == 0 { "delegator" } else { "delegatee" };
            writeln!(out, "subject S{s} {{ person: any delegatory_role: {role} }}").unwrap();
            writeln!(out, "rel S{s} maps_to st").unwrap();
            if s > 0 {
                writeln!(out, "rel S{} delegates_to S{s}", s - 1).unwrap();
            }
        }
        out.push_str("rel S0 owes_duty_to obligee\nrel obligee maps_to st\n");
        if subjects == 1 {
            out.push_str("subject S_tail { person: any delegatory_role: delegatee }\nrel S0 delegates_to S_tail\n");
        }
    }
    out
}
