//! Decision situations: the actions on offer, what each action does to whom,
//! and the request (if any) that prompted the decision.
//!
//! Scenarios are JSON documents (`*.scenario.json`):
//!
//! ```json
//! {
//!   "scenario": "trolley",
//!   "actingFor": "Train Company",
//!   "notes": ["optional free text"],
//!   "groups": [{"id": "worker", "kind": "patientGroup", "patientKind": "human", "cardinality": 1}],
//!   "actions": [{"id": "T1", "description": "switch tracks"}, {"id": "T2"}],
//!   "effects": [{"action": "T1", "specification": "physiologySatisfaction",
//!                "direction": "decrease", "target": "worker", "requestDerived": false}],
//!   "deontics": [{"action": "T1", "specification": "kill", "holds": true, "target": "worker"}],
//!   "request": {"requester": "AGENT", "influenceKind": "substance",
//!               "influenceLevel": 85, "requestedAction": "T1"}
//! }
//! ```
//!
//! `"AGENT"` is the reserved target naming the theory's agent. Effects and
//! deontic assertions may carry a free-text `"note"`.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::model::{is_specification_token, EthicalTheoryInstance, PatientKind, TargetClass};
use crate::report::{ValidationReport, ViolationCode};

pub const AGENT_TARGET: &str = "AGENT";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum GroupKind {
    /// Individuals who together make up the agent (e.g. the members of a family).
    AgentGroup,
    PatientGroup,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StakeholderGroup {
    pub id: String,
    pub kind: GroupKind,
    pub patient_kind: PatientKind,
    pub cardinality: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ActionOption {
    pub id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Target {
    Agent,
    Group(String),
}

impl Target {
    fn parse(s: String) -> Self {
        if s == AGENT_TARGET {
            Target::Agent
        } else {
            Target::Group(s)
        }
    }

    pub fn as_str(&self) -> &str {
        match self {
            Target::Agent => AGENT_TARGET,
            Target::Group(id) => id,
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Target {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Direction {
    Increase,
    Decrease,
}

impl Direction {
    pub fn sign(self) -> i64 {
        match self {
            Direction::Increase => 1,
            Direction::Decrease => -1,
        }
    }

    pub fn verb(self) -> &'static str {
        match self {
            Direction::Increase => "increases",
            Direction::Decrease => "decreases",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EffectAssertion {
    pub action: String,
    pub specification: String,
    pub direction: Direction,
    pub target: Target,
    pub request_derived: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DeonticAssertion {
    pub action: String,
    pub specification: String,
    pub holds: bool,
    pub target: Target,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum InfluenceKind {
    Substance,
    External,
}

impl fmt::Display for InfluenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InfluenceKind::Substance => "substance",
            InfluenceKind::External => "external",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RequestContext {
    pub requester: Target,
    pub influence_kind: InfluenceKind,
    pub influence_level: u8,
    pub requested_action: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Scenario {
    #[serde(rename = "scenario")]
    pub name: String,
    pub acting_for: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub groups: Vec<StakeholderGroup>,
    pub actions: Vec<ActionOption>,
    pub effects: Vec<EffectAssertion>,
    pub deontics: Vec<DeonticAssertion>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub request: Option<RequestContext>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("PARSE_ERROR: {0}")]
    Parse(String),
    #[error("DANGLING_REFERENCE at {path}: {message}")]
    DanglingReference { path: String, message: String },
    #[error("DUPLICATE_ID at {path}: {message}")]
    DuplicateId { path: String, message: String },
    #[error("RANGE_ERROR at {path}: {message}")]
    Range { path: String, message: String },
}

impl ScenarioError {
    pub fn code(&self) -> &'static str {
        match self {
            ScenarioError::Parse(_) => "PARSE_ERROR",
            ScenarioError::DanglingReference { .. } => "DANGLING_REFERENCE",
            ScenarioError::DuplicateId { .. } => "DUPLICATE_ID",
            ScenarioError::Range { .. } => "RANGE_ERROR",
        }
    }
}

// Wire shapes. Numeric fields are wide so that out-of-range values surface as
// RANGE_ERROR rather than as a deserialisation failure.

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct RawScenario {
    scenario: String,
    acting_for: String,
    #[serde(default)]
    notes: Vec<String>,
    #[serde(default)]
    groups: Vec<RawGroup>,
    actions: Vec<RawAction>,
    #[serde(default)]
    effects: Vec<RawEffect>,
    #[serde(default)]
    deontics: Vec<RawDeontic>,
    request: Option<RawRequest>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct RawGroup {
    id: String,
    kind: GroupKind,
    patient_kind: PatientKind,
    cardinality: i64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAction {
    id: String,
    description: Option<String>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct RawEffect {
    action: String,
    specification: String,
    direction: Direction,
    target: String,
    #[serde(default)]
    request_derived: bool,
    note: Option<String>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct RawDeontic {
    action: String,
    specification: String,
    holds: bool,
    target: String,
    note: Option<String>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct RawRequest {
    requester: String,
    influence_kind: InfluenceKind,
    influence_level: i64,
    requested_action: String,
}

/// Decodes and checks a scenario document.
pub fn load_scenario(doc: &[u8]) -> Result<Scenario, ScenarioError> {
    let raw: RawScenario =
        serde_json::from_slice(doc).map_err(|e| ScenarioError::Parse(e.to_string()))?;

    let token = |path: String, value: &str| {
        if is_specification_token(value) {
            Ok(())
        } else {
            Err(ScenarioError::Parse(format!(
                "{path}: `{value}` is not a non-empty token"
            )))
        }
    };
    let dup = |path: String, message: String| ScenarioError::DuplicateId { path, message };
    let range = |path: String, message: String| ScenarioError::Range { path, message };
    let dangling =
        |path: String, message: String| ScenarioError::DanglingReference { path, message };

    let mut group_ids = HashSet::new();
    let mut groups = Vec::with_capacity(raw.groups.len());
    for (i, g) in raw.groups.into_iter().enumerate() {
        token(format!("groups[{i}].id"), &g.id)?;
        if g.id == AGENT_TARGET {
            return Err(dup(
                format!("groups[{i}].id"),
                format!("{AGENT_TARGET} is reserved for the agent"),
            ));
        }
        if !group_ids.insert(g.id.clone()) {
            return Err(dup(
                format!("groups[{i}].id"),
                format!("group `{}` declared twice", g.id),
            ));
        }
        let cardinality = u32::try_from(g.cardinality)
            .ok()
            .filter(|c| *c >= 1)
            .ok_or_else(|| {
                range(
                    format!("groups[{i}].cardinality"),
                    format!("{} is not in 1..={}", g.cardinality, u32::MAX),
                )
            })?;
        groups.push(StakeholderGroup {
            id: g.id,
            kind: g.kind,
            patient_kind: g.patient_kind,
            cardinality,
        });
    }

    if raw.actions.len() < 2 {
        return Err(range(
            "actions".into(),
            format!(
                "{} action(s); a decision needs at least 2",
                raw.actions.len()
            ),
        ));
    }
    let mut action_ids = HashSet::new();
    let mut actions = Vec::with_capacity(raw.actions.len());
    for (i, a) in raw.actions.into_iter().enumerate() {
        token(format!("actions[{i}].id"), &a.id)?;
        if !action_ids.insert(a.id.clone()) {
            return Err(dup(
                format!("actions[{i}].id"),
                format!("action `{}` declared twice", a.id),
            ));
        }
        actions.push(ActionOption {
            id: a.id,
            description: a.description,
        });
    }

    let check_action = |path: String, id: &str| {
        if action_ids.contains(id) {
            Ok(())
        } else {
            Err(dangling(path, format!("undeclared action `{id}`")))
        }
    };
    let check_target = |path: String, id: String| {
        let target = Target::parse(id);
        match &target {
            Target::Group(g) if !group_ids.contains(g) => {
                Err(dangling(path, format!("undeclared group `{g}`")))
            }
            _ => Ok(target),
        }
    };

    let request = match raw.request {
        Some(r) => {
            let level = u8::try_from(r.influence_level)
                .ok()
                .filter(|l| *l <= 100)
                .ok_or_else(|| {
                    range(
                        "request.influenceLevel".into(),
                        format!("{} is outside 0..=100", r.influence_level),
                    )
                })?;
            check_action("request.requestedAction".into(), &r.requested_action)?;
            Some(RequestContext {
                requester: check_target("request.requester".into(), r.requester)?,
                influence_kind: r.influence_kind,
                influence_level: level,
                requested_action: r.requested_action,
            })
        }
        None => None,
    };

    let mut effects = Vec::with_capacity(raw.effects.len());
    for (i, e) in raw.effects.into_iter().enumerate() {
        check_action(format!("effects[{i}].action"), &e.action)?;
        token(format!("effects[{i}].specification"), &e.specification)?;
        if e.request_derived && request.is_none() {
            return Err(dangling(
                format!("effects[{i}].requestDerived"),
                "request-derived effect but the scenario has no request".into(),
            ));
        }
        effects.push(EffectAssertion {
            target: check_target(format!("effects[{i}].target"), e.target)?,
            action: e.action,
            specification: e.specification,
            direction: e.direction,
            request_derived: e.request_derived,
            note: e.note,
        });
    }

    let mut deontics = Vec::with_capacity(raw.deontics.len());
    for (i, d) in raw.deontics.into_iter().enumerate() {
        check_action(format!("deontics[{i}].action"), &d.action)?;
        token(format!("deontics[{i}].specification"), &d.specification)?;
        deontics.push(DeonticAssertion {
            target: check_target(format!("deontics[{i}].target"), d.target)?,
            action: d.action,
            specification: d.specification,
            holds: d.holds,
            note: d.note,
        });
    }

    Ok(Scenario {
        name: raw.scenario,
        acting_for: raw.acting_for,
        notes: raw.notes,
        groups,
        actions,
        effects,
        deontics,
        request,
    })
}

impl Scenario {
    /// Pretty-printed JSON in the load format. Loading the output yields an
    /// equal scenario.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("scenario serialises");
        s.push('\n');
        s
    }

    pub fn group(&self, id: &str) -> Option<&StakeholderGroup> {
        self.groups.iter().find(|g| g.id == id)
    }

    pub fn action(&self, id: &str) -> Option<&ActionOption> {
        self.actions.iter().find(|a| a.id == id)
    }

    /// Agent-class for the agent itself and agent groups, patient-class otherwise.
    pub fn target_class(&self, target: &Target) -> TargetClass {
        match target {
            Target::Agent => TargetClass::Agent,
            Target::Group(id) => match self.group(id).map(|g| g.kind) {
                Some(GroupKind::AgentGroup) => TargetClass::Agent,
                _ => TargetClass::Patients,
            },
        }
    }

    /// Number of morally considerable individuals behind a target. The agent
    /// itself counts once.
    pub fn target_weight(&self, target: &Target) -> u32 {
        match target {
            Target::Agent => 1,
            Target::Group(id) => self.group(id).map_or(0, |g| g.cardinality),
        }
    }

    /// Patient kind of a group target; `None` for the agent, which is always
    /// considered.
    pub fn target_kind(&self, target: &Target) -> Option<PatientKind> {
        match target {
            Target::Agent => None,
            Target::Group(id) => self.group(id).map(|g| g.patient_kind),
        }
    }

    pub fn effects_of<'s>(
        &'s self,
        action: &'s str,
    ) -> impl Iterator<Item = (usize, &'s EffectAssertion)> + 's {
        self.effects
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.action == action)
    }

    pub fn deontics_of<'s>(
        &'s self,
        action: &'s str,
    ) -> impl Iterator<Item = (usize, &'s DeonticAssertion)> + 's {
        self.deontics
            .iter()
            .enumerate()
            .filter(move |(_, d)| d.action == action)
    }
}

/// Cross-checks a scenario against the theory that will judge it.
///
/// `AGENT_MISMATCH` is an error; everything else is a warning. Only the
/// assertions the theory's mode reads are checked for inert specifications:
/// effects for consequentialist theories, deontic assertions otherwise.
pub fn validate_scenario_against_theory(
    s: &Scenario,
    t: &EthicalTheoryInstance,
) -> ValidationReport {
    let mut report = ValidationReport::new();
    if s.acting_for != t.agent.name {
        report.error(
            ViolationCode::AgentMismatch,
            "actingFor",
            format!(
                "scenario acts for `{}` but the theory's agent is `{}`",
                s.acting_for, t.agent.name
            ),
        );
    }
    let inert = |report: &mut ValidationReport, path: String, spec: &str, target: &Target| {
        let class = s.target_class(target);
        if t.matching_principles(spec, class).is_empty() {
            report.warning(
                ViolationCode::InertSpecification,
                path,
                format!(
                    "no principle covers {spec} for the {class}; the assertion is morally inert"
                ),
            );
        }
    };
    if t.consequentiality {
        for (i, e) in s.effects.iter().enumerate() {
            inert(
                &mut report,
                format!("effects[{i}]"),
                &e.specification,
                &e.target,
            );
        }
    } else {
        for (i, d) in s.deontics.iter().enumerate() {
            inert(
                &mut report,
                format!("deontics[{i}]"),
                &d.specification,
                &d.target,
            );
        }
    }
    for (i, g) in s.groups.iter().enumerate() {
        if !t.considers(g.patient_kind) {
            report.warning(
                ViolationCode::ExcludedGroup,
                format!("groups[{i}]"),
                format!(
                    "{} is {}, not a patient kind of this theory; excluded from weighting",
                    g.id, g.patient_kind
                ),
            );
        }
    }
    report
}
