#![allow(dead_code)]

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;

use genet::model::{
    EthicalTheoryInstance, InfluenceThresholds, MoralAgent, MoralPrinciple, PatientKind, Subject,
};
use genet::scenario::{
    ActionOption, DeonticAssertion, Direction, EffectAssertion, GroupKind, InfluenceKind,
    RequestContext, Scenario, StakeholderGroup, Target,
};
use proptest::collection::{btree_set, vec};
use proptest::prelude::*;
use proptest::sample::select;

pub fn fixture(rel: &str) -> Vec<u8> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(rel);
    fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn theory_fixture(name: &str) -> EthicalTheoryInstance {
    genet::parse_theory(&fixture(&format!("theories/{name}.xml"))).unwrap()
}

pub fn scenario_fixture(name: &str) -> Scenario {
    genet::load_scenario(&fixture(&format!("scenarios/{name}.scenario.json"))).unwrap()
}

// ---- theory instances ----

pub fn patient_kind() -> impl Strategy<Value = PatientKind> {
    select(PatientKind::ALL.to_vec())
}

pub fn subject() -> impl Strategy<Value = Subject> {
    select(Subject::ALL.to_vec())
}

/// Free text that exercises escaping: markup characters, quotes, non-ASCII and
/// embedded whitespace.
pub fn free_text() -> impl Strategy<Value = String> {
    "[a-zA-Z0-9 &<>\"'_.,;:!?()\\[\\]éßøΩ漢\t\n-]{1,24}"
}

pub fn token() -> impl Strategy<Value = String> {
    "[a-zA-Z][a-zA-Z0-9_.-]{0,15}"
}

pub fn uri() -> impl Strategy<Value = String> {
    prop_oneof![
        "https?://[a-z]{1,10}\\.[a-z]{2,3}(/[a-zA-Z0-9_-]{0,8}){0,3}",
        "urn:[a-z]{1,6}:[a-z0-9]{1,8}",
        "mailto:[a-z]{1,6}@[a-z]{1,6}\\.org",
        "[a-z]{1,8}/[a-z]{1,8}",
    ]
}

pub fn principles(max: usize) -> impl Strategy<Value = Vec<MoralPrinciple>> {
    vec((any::<bool>(), subject(), token()), 1..=max).prop_map(|raw| {
        let mut seen = BTreeSet::new();
        raw.into_iter()
            .filter(|(_, s, spec)| seen.insert((spec.clone(), *s)))
            .map(|(m, s, spec)| MoralPrinciple::new(m, s, spec))
            .collect()
    })
}

pub fn instance() -> impl Strategy<Value = EthicalTheoryInstance> {
    (
        free_text(),
        proptest::option::of(free_text()),
        any::<bool>(),
        free_text(),
        proptest::option::of(uri()),
        btree_set(patient_kind(), 1..=4),
        (0u8..=100, 0u8..=100),
        principles(10),
    )
        .prop_map(
            |(base, name, cons, agent, reference, kinds, (ext, sub), principles)| {
                let mut agent = MoralAgent::new(agent);
                agent.reference = reference;
                EthicalTheoryInstance {
                    base_theory: base,
                    instance_name: name,
                    consequentiality: cons,
                    agent,
                    patient_kinds: kinds,
                    influence_thresholds: InfluenceThresholds::new(ext, sub),
                    principles,
                }
            },
        )
}

// ---- random decision situations ----

pub const AGENT_NAME: &str = "Ann";
const SPECS: [&str; 4] = ["s0", "s1", "s2", "s3"];

fn spec() -> impl Strategy<Value = String> {
    select(SPECS.to_vec()).prop_map(str::to_owned)
}

pub fn small_theory(consequentiality: bool) -> impl Strategy<Value = EthicalTheoryInstance> {
    (
        btree_set(patient_kind(), 1..=4),
        (0u8..=100, 0u8..=100),
        vec((any::<bool>(), subject(), spec()), 1..=6),
    )
        .prop_map(move |(kinds, (ext, sub), raw)| {
            let mut seen = BTreeSet::new();
            let principles = raw
                .into_iter()
                .filter(|(_, s, spec)| seen.insert((spec.clone(), *s)))
                .map(|(m, s, spec)| MoralPrinciple::new(m, s, spec))
                .collect();
            EthicalTheoryInstance {
                base_theory: "random".into(),
                instance_name: None,
                consequentiality,
                agent: MoralAgent::new(AGENT_NAME),
                patient_kinds: kinds,
                influence_thresholds: InfluenceThresholds::new(ext, sub),
                principles,
            }
        })
}

fn groups(max: usize) -> impl Strategy<Value = Vec<StakeholderGroup>> {
    vec((any::<bool>(), patient_kind(), 1u32..=50), 1..=max).prop_map(|raw| {
        raw.into_iter()
            .enumerate()
            .map(|(i, (agent_group, kind, n))| StakeholderGroup {
                id: format!("g{i}"),
                kind: if agent_group {
                    GroupKind::AgentGroup
                } else {
                    GroupKind::PatientGroup
                },
                patient_kind: kind,
                cardinality: n,
            })
            .collect()
    })
}

fn actions(n: usize) -> Vec<ActionOption> {
    (0..n)
        .map(|i| ActionOption {
            id: format!("a{i}"),
            description: None,
        })
        .collect()
}

fn request() -> impl Strategy<Value = Option<RequestContext>> {
    proptest::option::of(
        (any::<bool>(), 0u8..=100).prop_map(|(substance, level)| RequestContext {
            requester: Target::Agent,
            influence_kind: if substance {
                InfluenceKind::Substance
            } else {
                InfluenceKind::External
            },
            influence_level: level,
            requested_action: "a0".into(),
        }),
    )
}

/// A scenario with group targets only, so every weight scales with cardinality.
/// `with_agent` also allows effects and assertions on the agent itself.
pub fn situation(with_agent: bool) -> impl Strategy<Value = Scenario> {
    (groups(4), 2usize..=4, request()).prop_flat_map(move |(groups, n_actions, request)| {
        let n_groups = groups.len();
        let target = move || {
            (0..n_groups + usize::from(with_agent)).prop_map(move |i| {
                if i == n_groups {
                    Target::Agent
                } else {
                    Target::Group(format!("g{i}"))
                }
            })
        };
        let has_request = request.is_some();
        let effect = (0..n_actions, spec(), any::<bool>(), target(), any::<bool>()).prop_map(
            move |(a, spec, up, target, derived)| EffectAssertion {
                action: format!("a{a}"),
                specification: spec,
                direction: if up {
                    Direction::Increase
                } else {
                    Direction::Decrease
                },
                target,
                request_derived: derived && has_request,
                note: None,
            },
        );
        let deontic =
            (0..n_actions, spec(), any::<bool>(), target()).prop_map(|(a, spec, holds, target)| {
                DeonticAssertion {
                    action: format!("a{a}"),
                    specification: spec,
                    holds,
                    target,
                    note: None,
                }
            });
        (vec(effect, 0..=10), vec(deontic, 0..=10)).prop_map(move |(effects, deontics)| Scenario {
            name: "random".into(),
            acting_for: AGENT_NAME.into(),
            notes: Vec::new(),
            groups: groups.clone(),
            actions: actions(n_actions),
            effects,
            deontics,
            request: request.clone(),
        })
    })
}

/// Two actions whose effects and assertions are copies of each other.
pub fn symmetric_situation() -> impl Strategy<Value = Scenario> {
    situation(true).prop_map(|mut s| {
        s.actions = actions(2);
        for e in &mut s.effects {
            e.action = "a0".into();
        }
        for d in &mut s.deontics {
            d.action = "a0".into();
        }
        let mirrored_effects: Vec<_> = s
            .effects
            .iter()
            .map(|e| EffectAssertion {
                action: "a1".into(),
                ..e.clone()
            })
            .collect();
        let mirrored_deontics: Vec<_> = s
            .deontics
            .iter()
            .map(|d| DeonticAssertion {
                action: "a1".into(),
                ..d.clone()
            })
            .collect();
        s.effects.extend(mirrored_effects);
        s.deontics.extend(mirrored_deontics);
        if let Some(r) = &mut s.request {
            r.requested_action = "a0".into();
        }
        s
    })
}

pub fn scale(s: &Scenario, k: u32) -> Scenario {
    let mut s = s.clone();
    for g in &mut s.groups {
        g.cardinality *= k;
    }
    s
}

/// Independent consequentialist scorer: sum of direction × morality × weight
/// over matching principles, skipping excluded kinds and gated request goods.
pub fn oracle_score(t: &EthicalTheoryInstance, s: &Scenario, action: &str) -> i64 {
    let voided = s.request.as_ref().is_some_and(|r| {
        let limit = match r.influence_kind {
            InfluenceKind::Substance => t.influence_thresholds.substance,
            InfluenceKind::External => t.influence_thresholds.external,
        };
        r.influence_level > limit
    });
    let mut total = 0i64;
    for e in s.effects.iter().filter(|e| e.action == action) {
        let (agent_class, weight, kind) = match &e.target {
            Target::Agent => (true, 1i64, None),
            Target::Group(id) => {
                let g = s.groups.iter().find(|g| &g.id == id).unwrap();
                (
                    g.kind == GroupKind::AgentGroup,
                    i64::from(g.cardinality),
                    Some(g.patient_kind),
                )
            }
        };
        if kind.is_some_and(|k| !t.patient_kinds.contains(&k)) {
            continue;
        }
        for p in &t.principles {
            let covers = match p.subject {
                Subject::All => true,
                Subject::Agent => agent_class,
                Subject::Patients => !agent_class,
            };
            if p.specification != e.specification || !covers {
                continue;
            }
            let dir = if e.direction == Direction::Increase {
                1
            } else {
                -1
            };
            let mor = if p.morality { 1 } else { -1 };
            let v = dir * mor * weight;
            if e.request_derived && voided && v > 0 {
                continue;
            }
            total += v;
        }
    }
    total
}
