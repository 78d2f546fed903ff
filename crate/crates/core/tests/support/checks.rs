//! Whole-criterion checks shared by the core integration tests and the
//! acceptance suite. Each returns the number of cases examined, or a
//! description of the first mismatch.

use std::collections::{BTreeMap, BTreeSet};

use am4rre_core::fixtures::GDPR_EXAMPLE;
use am4rre_core::metamodel::{ArtifactModel, RoleId};
use am4rre_core::{
    analyze, compute_applicability, expand_delegations, parse, serialize, Code, MilestoneId, MilestoneState, Options,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::gen::{self, DelegationSpec};
use super::oracle;

pub type CheckResult = Result<usize, String>;

pub fn applicability_equivalence(cases: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..cases {
        let spec = gen::applicability_spec(&mut rng);
        let model = super::resolved(spec.to_model());
        let engine = compute_applicability(&model);
        let expected = oracle::applicability(&spec);

        let rows = |ev: &[am4rre_core::Evidence]| -> Vec<oracle::EvidenceRow> {
            ev.iter()
                .map(|e| (e.criterion.clone(), e.tag.to_string(), e.instance.clone()))
                .collect()
        };
        let actual: Vec<oracle::ActOracle> = engine
            .acts
            .iter()
            .map(|v| oracle::ActOracle {
                act: v.act.clone(),
                applicable: v.applicable,
                jurisdiction_evidence: rows(&v.jurisdiction_evidence),
                field_evidence: rows(&v.field_evidence),
            })
            .collect();
        if actual != expected.acts {
            return Err(format!("case {case}: verdicts differ\nengine: {actual:#?}\noracle: {:#?}\nspec: {spec:#?}", expected.acts));
        }
        if engine.priority != expected.priority {
            return Err(format!(
                "case {case}: priority differs: engine {:?}, oracle {:?}\nspec: {spec:#?}",
                engine.priority, expected.priority
            ));
        }
    }
    Ok(cases)
}

fn delegation_case(spec: &DelegationSpec) -> Result<(), String> {
    let model = super::resolved(spec.to_model());
    let engine = expand_delegations(&model);
    let expected = oracle::delegation(spec);

    let index = |id: &str| -> usize { id[1..].parse().expect("subject id") };
    let mut actual: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for duty in &engine.derived {
        let rel = &duty.relationship;
        if rel.kind != am4rre_core::RelationshipKind::OwesDutyTo || !rel.derived {
            return Err(format!("unexpected derived relationship {rel:?}"));
        }
        if actual.insert((index(&rel.source), index(&rel.target)), duty.depth).is_some() {
            return Err(format!("duplicate derived duty {} -> {}", rel.source, rel.target));
        }
    }
    if actual != expected.derived {
        return Err(format!("derived duties differ: engine {actual:?}, oracle {:?}\n{spec:?}", expected.derived));
    }
    let cycles = engine.diagnostics.iter().filter(|d| d.code == Code::DELEGATION_CYCLE).count();
    if cycles != expected.cycle_groups || engine.diagnostics.len() != cycles {
        return Err(format!(
            "expected {} E-INT-001, got {:?}\n{spec:?}",
            expected.cycle_groups, engine.diagnostics
        ));
    }
    if let Some(d) = engine.diagnostics.iter().find(|d| !d.is_error()) {
        return Err(format!("E-INT-001 must be an error: {d:?}"));
    }
    for (e, _) in actual.keys() {
        if expected.cyclic.contains(e) {
            return Err(format!("duty derived for cycle member s{e}"));
        }
    }
    Ok(())
}

pub fn delegation_random(cases: usize, max_subjects: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..cases {
        delegation_case(&gen::delegation_spec(&mut rng, max_subjects))?;
    }
    Ok(cases)
}

/// Every delegation graph on up to `max_subjects` subjects. Duty sets are
/// exhaustive up to three subjects; with four, a fixed family is used.
pub fn delegation_exhaustive(max_subjects: usize) -> CheckResult {
    let mut cases = 0;
    for n in 1..=max_subjects {
        let pairs = gen::distinct_pairs(n);
        let duty_sets: Vec<Vec<(usize, usize)>> = if n <= 3 {
            (0..1u32 << pairs.len())
                .map(|mask| subset(&pairs, mask))
                .collect()
        } else {
            vec![
                vec![(0, n - 1)],
                vec![(0, n - 1), (1, 2)],
                (0..n - 1).map(|i| (i, n - 1)).collect(),
                pairs.clone(),
            ]
        };
        for mask in 0..1u32 << pairs.len() {
            let delegates = subset(&pairs, mask);
            for duties in &duty_sets {
                delegation_case(&DelegationSpec {
                    subjects: n,
                    delegates: delegates.clone(),
                    duties: duties.clone(),
                })?;
                cases += 1;
            }
        }
    }
    Ok(cases)
}

fn subset<T: Copy>(items: &[T], mask: u32) -> Vec<T> {
    items
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, x)| *x)
        .collect()
}

/// A single edit of the fixture and the one diagnostic code it must produce.
pub struct Mutation {
    pub name: &'static str,
    pub apply: fn(&str) -> String,
    pub expected: Code,
}

fn replace(text: &str, from: &str, to: &str) -> String {
    assert!(text.contains(from), "fixture no longer contains {from:?}");
    text.replacen(from, to, 1)
}

pub fn mutations() -> Vec<Mutation> {
    vec![
        Mutation {
            name: "delete delegates_to edge",
            apply: |t| replace(t, "rel data_controller delegates_to data_processor\n", ""),
            expected: Code::DELEGATION_TRIAD,
        },
        Mutation {
            name: "delete owes_duty_to edge",
            apply: |t| replace(t, "rel data_controller owes_duty_to data_subject\n", ""),
            expected: Code::DELEGATION_TRIAD,
        },
        Mutation {
            name: "processor becomes an obligee",
            apply: |t| {
                replace(
                    t,
                    "subject data_processor {\n  person: any\n  delegatory_role: delegatee",
                    "subject data_processor {\n  person: any\n  delegatory_role: obligee",
                )
            },
            expected: Code::DELEGATION_TRIAD,
        },
        Mutation {
            name: "flip patient to a legal person",
            apply: |t| replace(t, "stakeholder patient_alice {\n  person: natural", "stakeholder patient_alice {\n  person: legal"),
            expected: Code::PERSON_TYPE,
        },
        Mutation {
            name: "flip data subject to a legal person",
            apply: |t| replace(t, "subject data_subject {\n  person: natural", "subject data_subject {\n  person: legal"),
            expected: Code::PERSON_TYPE,
        },
        Mutation {
            name: "reverse force relationship",
            apply: |t| {
                replace(
                    t,
                    "rel EDPB_07_2020 ensures_consistent_application_of GDPR",
                    "rel GDPR ensures_consistent_application_of EDPB_07_2020",
                )
            },
            expected: Code::FORCE_DIRECTION,
        },
        Mutation {
            name: "guideline raised to a law",
            apply: |t| replace(t, "kind: guideline", "kind: law"),
            expected: Code::FORCE_DIRECTION,
        },
        Mutation {
            name: "empty jurisdiction criteria",
            apply: |t| replace(t, "jurisdiction EU_domestic {\n  criteria: [loc:EU]\n}", "jurisdiction EU_domestic {\n}"),
            expected: Code::EMPTY_CRITERIA,
        },
        Mutation {
            name: "empty field-of-law criteria",
            apply: |t| {
                replace(
                    t,
                    "field personal_data_protection {\n  criteria: [intent:process-personal-data]\n}",
                    "field personal_data_protection {\n}",
                )
            },
            expected: Code::EMPTY_CRITERIA,
        },
        Mutation {
            name: "dangling maps_to target",
            apply: |t| replace(t, "rel data_subject maps_to patient_alice", "rel data_subject maps_to patient_bob"),
            expected: Code::UNKNOWN_IDENTIFIER,
        },
        Mutation {
            name: "dangling source act",
            apply: |t| replace(t, "source_act: EDPB_07_2020", "source_act: EDPB_99_2099"),
            expected: Code::UNKNOWN_IDENTIFIER,
        },
        Mutation {
            name: "mapping declared in the wrong direction",
            apply: |t| replace(t, "rel data_subject maps_to patient_alice", "rel patient_alice maps_to data_subject"),
            expected: Code::ENDPOINT_MISMATCH,
        },
        Mutation {
            name: "act without a kind",
            apply: |t| replace(t, "  kind: regulation\n", ""),
            expected: Code::LAYER_CONFORMANCE,
        },
        Mutation {
            name: "sign-off by a role that cannot accept",
            apply: |t| format!("{t}accept M2 by requirements_engineer\n"),
            expected: Code::SIGNOFF_ROLE,
        },
        Mutation {
            name: "demand sourced from an inapplicable act",
            apply: |t| {
                format!(
                    "{t}act CCPA {{ kind: law title: \"California Consumer Privacy Act\" }}\n\
                     jurisdiction california {{ criteria: [loc:US-CA] }}\n\
                     demand opt_out {{ text: \"Consumers may opt out of sale.\" source_act: CCPA }}\n\
                     rel CCPA applies_within california\n\
                     rel CCPA belongs_to_field personal_data_protection\n\
                     rel CCPA contains opt_out\n"
                )
            },
            expected: Code::DEMAND_PROVENANCE,
        },
        Mutation {
            name: "act without applicability links",
            apply: |t| format!("{t}act ePrivacy {{ kind: directive title: \"ePrivacy Directive\" }}\n"),
            expected: Code::MISSING_APPLICABILITY_LINK,
        },
        Mutation {
            name: "unknown property",
            apply: |t| replace(t, "scope telemedicine {\n", "scope telemedicine {\n  budget: \"high\"\n"),
            expected: Code::UNKNOWN_PROPERTY,
        },
        Mutation {
            name: "tag without namespace",
            apply: |t| replace(t, "  location: [loc:EU]\n", "  location: [EU]\n"),
            expected: Code::INVALID_TAG,
        },
        Mutation {
            name: "duplicate legal subject",
            apply: |t| format!("{t}subject data_subject {{ person: natural delegatory_role: obligee }}\n"),
            expected: Code::DUPLICATE_IDENTIFIER,
        },
        Mutation {
            name: "invalid act kind",
            apply: |t| replace(t, "kind: regulation", "kind: treaty"),
            expected: Code::UNEXPECTED_TOKEN,
        },
    ]
}

/// Runs one mutation; the set of produced codes must be exactly `{expected}`.
pub fn run_mutation(m: &Mutation) -> Result<(), String> {
    let text = (m.apply)(GDPR_EXAMPLE);
    if text == GDPR_EXAMPLE {
        return Err("mutation did not change the fixture".to_owned());
    }
    let analysis = analyze("gdpr_example.amr", &text, &Options::default());
    let codes: BTreeSet<Code> = analysis.diagnostics.iter().map(|d| d.code).collect();
    if codes == BTreeSet::from([m.expected]) {
        Ok(())
    } else {
        let lines: Vec<String> = analysis.diagnostics.iter().map(ToString::to_string).collect();
        Err(format!("expected only {}, got:\n{}", m.expected, lines.join("\n")))
    }
}

/// Fixture with its sign-off lines removed.
pub fn fixture_without_signoffs() -> String {
    GDPR_EXAMPLE
        .lines()
        .filter(|l| !l.starts_with("accept "))
        .map(|l| format!("{l}\n"))
        .collect()
}

pub fn signoff_pairs() -> Vec<(MilestoneId, RoleId)> {
    MilestoneId::ALL
        .into_iter()
        .flat_map(|m| RoleId::ALL.into_iter().map(move |r| (m, r)))
        .collect()
}

fn with_signoffs(base: &str, signoffs: &[(MilestoneId, RoleId)]) -> String {
    let mut text = base.to_owned();
    for (m, r) in signoffs {
        text.push_str(&format!("accept {} by {}\n", m.keyword(), r.keyword()));
    }
    text
}

pub fn states_of(text: &str) -> [MilestoneState; 4] {
    analyze("gdpr_example.amr", text, &Options::default())
        .milestones
        .map_or([MilestoneState::NotStarted; 4], |m| m.states())
}

fn monotone_chain(states: &[MilestoneState; 4]) -> bool {
    states.windows(2).all(|w| w[0] >= w[1])
}

/// Which milestones have complete content in the unsigned fixture.
pub const FIXTURE_CONTENT_COMPLETE: [bool; 4] = [true, true, true, false];

/// Every subset of the 12 (milestone, role) sign-offs on the fixture.
/// Checks the states against a direct evaluation of the acceptance rule,
/// the Accepted-prefix property, and that adding any sign-off never lowers
/// a state.
pub fn milestone_signoff_enumeration() -> CheckResult {
    let base = fixture_without_signoffs();
    let pairs = signoff_pairs();
    let mut table = Vec::with_capacity(1 << pairs.len());
    for mask in 0..1u32 << pairs.len() {
        let chosen = subset(&pairs, mask);
        let states = states_of(&with_signoffs(&base, &chosen));

        let mut expected = [MilestoneState::NotStarted; 4];
        let mut cap = MilestoneState::Accepted;
        for (k, m) in MilestoneId::ALL.into_iter().enumerate() {
            let raw = if !FIXTURE_CONTENT_COMPLETE[k] {
                MilestoneState::NotStarted
            } else if m.accepting_roles().iter().all(|r| chosen.contains(&(m, *r))) {
                MilestoneState::Accepted
            } else {
                MilestoneState::ContentComplete
            };
            expected[k] = raw.min(cap);
            cap = expected[k];
        }
        if states != expected {
            return Err(format!("sign-offs {chosen:?}: got {states:?}, expected {expected:?}"));
        }
        if !monotone_chain(&states) {
            return Err(format!("sign-offs {chosen:?}: chain not monotone: {states:?}"));
        }
        table.push(states);
    }
    for mask in 0..table.len() {
        for bit in 0..pairs.len() {
            let larger = mask | (1 << bit);
            if (0..4).any(|k| table[larger][k] < table[mask][k]) {
                return Err(format!(
                    "adding {:?} to {:?} lowered states {:?} -> {:?}",
                    pairs[bit],
                    subset(&pairs, mask as u32),
                    table[mask],
                    table[larger]
                ));
            }
        }
    }
    Ok(table.len())
}

/// Removing any one or two of the fixture's relationships never raises a
/// milestone, under every valid sign-off combination.
pub fn milestone_relationship_monotonicity() -> CheckResult {
    let base = fixture_without_signoffs();
    let rel_lines: Vec<&str> = base.lines().filter(|l| l.starts_with("rel ")).collect();
    let valid: Vec<(MilestoneId, RoleId)> = signoff_pairs()
        .into_iter()
        .filter(|(m, r)| m.accepting_roles().contains(r))
        .collect();
    let remove = |text: &str, drop: &[usize]| -> String {
        text.lines()
            .filter(|l| !drop.iter().any(|&i| *l == rel_lines[i]))
            .map(|l| format!("{l}\n"))
            .collect()
    };
    let mut cases = 0;
    for mask in 0..1u32 << valid.len() {
        let full = with_signoffs(&base, &subset(&valid, mask));
        let full_states = states_of(&full);
        for i in 0..rel_lines.len() {
            let one = remove(&full, &[i]);
            let one_states = states_of(&one);
            if (0..4).any(|k| one_states[k] > full_states[k]) {
                return Err(format!("removing `{}` raised {full_states:?} -> {one_states:?}", rel_lines[i]));
            }
            cases += 1;
            if mask + 1 == 1 << valid.len() {
                for j in i + 1..rel_lines.len() {
                    let two_states = states_of(&remove(&full, &[i, j]));
                    if (0..4).any(|k| two_states[k] > one_states[k]) {
                        return Err(format!(
                            "removing `{}` after `{}` raised {one_states:?} -> {two_states:?}",
                            rel_lines[j], rel_lines[i]
                        ));
                    }
                    cases += 1;
                }
            }
        }
    }
    Ok(cases)
}

/// parse(serialize(m)) equals m modulo spans, and serializing again is a fixpoint.
pub fn round_trip_model(model: &ArtifactModel) -> Result<(), String> {
    let text = serialize(model);
    let parsed = parse(model.source_name(), &text);
    if !parsed.diagnostics.is_empty() {
        return Err(format!("serialized text does not parse: {:?}\n{text}", parsed.diagnostics));
    }
    if parsed.model.canonical() != model.canonical() {
        return Err(format!("model changed across round trip:\n{text}"));
    }
    let again = serialize(&parsed.model);
    if again != text {
        return Err(format!("serialization is not a fixpoint:\n{text}\n---\n{again}"));
    }
    Ok(())
}

pub fn round_trip_fixture() -> CheckResult {
    let parsed = parse("gdpr_example.amr", GDPR_EXAMPLE);
    if !parsed.diagnostics.is_empty() {
        return Err(format!("fixture does not parse: {:?}", parsed.diagnostics));
    }
    round_trip_model(&parsed.model)?;
    Ok(1)
}

pub fn round_trip_random(cases: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..cases {
        let model = gen::random_model(&mut rng);
        round_trip_model(&model).map_err(|e| format!("case {case}: {e}"))?;
    }
    Ok(cases)
}
