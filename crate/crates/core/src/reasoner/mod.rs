//! Applying a theory instance to a scenario.
//!
//! Consequentialist theories score each action by summing the signed,
//! cardinality-weighted contributions of its effects; deontological theories
//! check each action against every principle. [`decide`] compares the
//! per-action results and either picks one action or reports a tie.

mod render;
mod trace;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::model::{EthicalTheoryInstance, MoralPrinciple};
use crate::report::ValidationReport;
use crate::scenario::{
    validate_scenario_against_theory, InfluenceKind, RequestContext, Scenario, Target,
};

pub use render::{
    render_decision_json, render_decision_text, render_evaluation_json, render_evaluation_text,
};
pub use trace::{ArgumentTrace, Contribution, ContributionStatus, Inference, Premise, PremiseKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum MoralVerdict {
    ObligatoryBest,
    Permissible,
    /// Good, but not obligatory.
    Supererogatory,
    Wrong,
    Undecidable,
}

impl MoralVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            MoralVerdict::ObligatoryBest => "obligatoryBest",
            MoralVerdict::Permissible => "permissible",
            MoralVerdict::Supererogatory => "supererogatory",
            MoralVerdict::Wrong => "wrong",
            MoralVerdict::Undecidable => "undecidable",
        }
    }
}

impl fmt::Display for MoralVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ActionEvaluation {
    pub action: String,
    pub verdict: MoralVerdict,
    /// Present exactly for consequentialist theories.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub score: Option<i64>,
    pub trace: ArgumentTrace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum DecisionKind {
    Decided,
    MultiplePermissible,
    Conflict,
}

impl DecisionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DecisionKind::Decided => "decided",
            DecisionKind::MultiplePermissible => "multiplePermissible",
            DecisionKind::Conflict => "conflict",
        }
    }
}

impl fmt::Display for DecisionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Decision {
    pub kind: DecisionKind,
    /// One id when decided, every permissible id when several are, empty on conflict.
    pub chosen: Vec<String>,
    /// On conflict, the actions that could not be separated.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub contenders: Vec<String>,
    pub evaluations: Vec<ActionEvaluation>,
    #[serde(skip_serializing_if = "ValidationReport::is_empty")]
    pub warnings: ValidationReport,
}

impl Decision {
    pub fn evaluation(&self, action: &str) -> Option<&ActionEvaluation> {
        self.evaluations.iter().find(|e| e.action == action)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReasonError {
    #[error("MODE_MISMATCH: {operation} needs a {expected} theory")]
    ModeMismatch {
        operation: &'static str,
        expected: &'static str,
    },
    #[error("AGENT_MISMATCH: scenario acts for `{scenario}` but the theory's agent is `{theory}`")]
    AgentMismatch { theory: String, scenario: String },
    #[error("UNKNOWN_ACTION: `{0}` is not an action of the scenario")]
    UnknownAction(String),
}

impl ReasonError {
    pub fn code(&self) -> &'static str {
        match self {
            ReasonError::ModeMismatch { .. } => "MODE_MISMATCH",
            ReasonError::AgentMismatch { .. } => "AGENT_MISMATCH",
            ReasonError::UnknownAction(_) => "UNKNOWN_ACTION",
        }
    }
}

/// True when a request is voided: its influence level is strictly above the
/// theory's threshold for that kind of influence.
pub fn influence_gate(t: &EthicalTheoryInstance, r: &RequestContext) -> bool {
    r.influence_level > threshold(t, r.influence_kind)
}

fn threshold(t: &EthicalTheoryInstance, kind: InfluenceKind) -> u8 {
    match kind {
        InfluenceKind::Substance => t.influence_thresholds.substance,
        InfluenceKind::External => t.influence_thresholds.external,
    }
}

/// Weight of one effect on one target. Linear in the number of individuals.
pub fn contribution(increase: bool, morality: bool, weight: u32) -> i64 {
    let dir = if increase { 1 } else { -1 };
    let mor = if morality { 1 } else { -1 };
    dir * mor * i64::from(weight)
}

fn label(s: &Scenario, target: &Target) -> String {
    match target {
        Target::Agent => s.acting_for.clone(),
        Target::Group(id) => match s.group(id) {
            Some(g) => match g.kind {
                crate::scenario::GroupKind::AgentGroup => {
                    format!("{id} (agent group of {} {})", g.cardinality, g.patient_kind)
                }
                crate::scenario::GroupKind::PatientGroup => {
                    format!("{id} ({} {})", g.cardinality, g.patient_kind)
                }
            },
            None => id.clone(),
        },
    }
}

fn indexed_matches<'t>(
    t: &'t EthicalTheoryInstance,
    s: &Scenario,
    spec: &str,
    target: &Target,
) -> Vec<(usize, &'t MoralPrinciple)> {
    let class = s.target_class(target);
    t.principles
        .iter()
        .enumerate()
        .filter(|(_, p)| p.specification == spec && p.subject.covers(class))
        .collect()
}

fn check_action(s: &Scenario, action: &str) -> Result<(), ReasonError> {
    match s.action(action) {
        Some(_) => Ok(()),
        None => Err(ReasonError::UnknownAction(action.to_owned())),
    }
}

pub fn evaluate_consequentialist(
    t: &EthicalTheoryInstance,
    s: &Scenario,
    action: &str,
) -> Result<ActionEvaluation, ReasonError> {
    if !t.consequentiality {
        return Err(ReasonError::ModeMismatch {
            operation: "evaluate_consequentialist",
            expected: "consequentialist",
        });
    }
    check_action(s, action)?;

    let mut trace = ArgumentTrace::default();
    let mut leaves = Vec::new();
    let mut gate: Option<(String, bool)> = None;

    for (i, e) in s.effects_of(action) {
        let class = s.target_class(&e.target);
        let who = label(s, &e.target);
        let fact = trace.premise(
            PremiseKind::SituationalFact,
            format!(
                "{action} {} {} of {who}",
                e.direction.verb(),
                e.specification
            ),
            format!("effects[{i}]"),
        );
        let matches = indexed_matches(t, s, &e.specification, &e.target);
        if matches.is_empty() {
            leaves.push(trace.infer(
                &[fact],
                format!(
                    "no principle covers {} for the {class}; the effect is morally inert",
                    e.specification
                ),
            ));
            trace.contributions.push(Contribution {
                effect: i,
                principle: None,
                value: 0,
                status: ContributionStatus::Inert,
            });
            continue;
        }
        if let Some(kind) = s.target_kind(&e.target).filter(|k| !t.considers(*k)) {
            leaves.push(trace.infer(
                &[fact],
                format!("{kind} is not a patient kind of this theory; the effect on {who} is weighted zero"),
            ));
            for (j, _) in matches {
                trace.contributions.push(Contribution {
                    effect: i,
                    principle: Some(j),
                    value: 0,
                    status: ContributionStatus::Excluded,
                });
            }
            continue;
        }

        let weight = s.target_weight(&e.target);
        for (j, p) in matches {
            let pid = trace.premise(
                PremiseKind::TheoryPrinciple,
                p.to_string(),
                format!("principles[{j}]"),
            );
            let value = contribution(e.direction.sign() > 0, p.morality, weight);
            let mut leaf = trace.infer(
                &[fact.clone(), pid],
                format!(
                    "{action} has some moral {} for {who} ({value:+})",
                    if value > 0 { "good" } else { "wrong" }
                ),
            );
            let mut status = ContributionStatus::Counted;
            if e.request_derived {
                let r = s
                    .request
                    .as_ref()
                    .expect("load_scenario rejects request-derived effects without a request");
                let (gate_id, voided) = match &gate {
                    Some(g) => g.clone(),
                    None => {
                        let g = gate_inference(&mut trace, t, s, r);
                        gate = Some(g.clone());
                        g
                    }
                };
                if voided && value > 0 {
                    status = ContributionStatus::Diverted;
                    leaf = trace.infer(
                        &[leaf, gate_id],
                        format!(
                            "{action}'s good for {who} is supererogatory (good, but not obligatory) and is left out of the score"
                        ),
                    );
                } else {
                    leaf = trace.infer(
                        &[leaf, gate_id],
                        format!("{value:+} counts toward the score of {action}"),
                    );
                }
            }
            trace.contributions.push(Contribution {
                effect: i,
                principle: Some(j),
                value,
                status,
            });
            leaves.push(leaf);
        }
    }

    if leaves.is_empty() {
        leaves.push(trace.premise(
            PremiseKind::SituationalFact,
            format!("no effects are asserted for {action}"),
            "effects",
        ));
    }
    let score = trace.counted_total();
    let diverted = trace.diverted_total();
    let summary = if diverted > 0 {
        format!("{action} scores {score}, with {diverted:+} set aside as supererogatory")
    } else {
        format!("{action} scores {score}")
    };
    let total = trace.infer(&leaves, summary);

    let verdict = if score < 0 {
        if diverted > 0 {
            trace.infer(
                &[total],
                format!("{action} is supererogatory but has net moral wrong; the wrongness wins"),
            );
            trace.conclusion = format!("{action} should not be done");
        } else {
            trace.conclusion = format!("{action} has net moral wrong; it should not be done");
        }
        MoralVerdict::Wrong
    } else if score > 0 {
        trace.conclusion = format!("{action} is a good action");
        MoralVerdict::Permissible
    } else if diverted > 0 {
        trace.conclusion = format!("{action} is supererogatory (good, but not obligatory)");
        MoralVerdict::Supererogatory
    } else {
        trace.conclusion = format!("{action} is morally neutral");
        MoralVerdict::Permissible
    };

    Ok(ActionEvaluation {
        action: action.to_owned(),
        verdict,
        score: Some(score),
        trace,
    })
}

fn gate_inference(
    trace: &mut ArgumentTrace,
    t: &EthicalTheoryInstance,
    s: &Scenario,
    r: &RequestContext,
) -> (String, bool) {
    let kind = r.influence_kind;
    let level = r.influence_level;
    let limit = threshold(t, kind);
    let req = trace.premise(
        PremiseKind::ThresholdFact,
        format!(
            "{} requests {} under {level}% {kind} influence",
            label(s, &r.requester),
            r.requested_action
        ),
        "request",
    );
    let thr = trace.premise(
        PremiseKind::ThresholdFact,
        format!("the {kind} influence threshold is {limit}%"),
        format!("influenceThresholds.{kind}"),
    );
    let voided = influence_gate(t, r);
    let text = if voided {
        format!("{level}% is over the {limit}% limit, so the request carries no moral weight")
    } else {
        format!("{level}% is within the {limit}% limit, so the request keeps its moral weight")
    };
    (trace.infer(&[req, thr], text), voided)
}

pub fn evaluate_deontological(
    t: &EthicalTheoryInstance,
    s: &Scenario,
    action: &str,
) -> Result<ActionEvaluation, ReasonError> {
    if t.consequentiality {
        return Err(ReasonError::ModeMismatch {
            operation: "evaluate_deontological",
            expected: "deontological",
        });
    }
    check_action(s, action)?;

    let mut trace = ArgumentTrace::default();
    let mut leaves = Vec::new();
    let mut violated = Vec::new();

    for (j, p) in t.principles.iter().enumerate() {
        let pid = trace.premise(
            PremiseKind::TheoryPrinciple,
            p.to_string(),
            format!("principles[{j}]"),
        );
        let spec = p.specification.as_str();
        let assertions: Vec<_> = s
            .deontics_of(action)
            .filter(|(_, d)| d.specification == spec && p.subject.covers(s.target_class(&d.target)))
            .collect();

        let mut engaged = false;
        for (k, d) in assertions {
            let who = label(s, &d.target);
            let fact = trace.premise(
                PremiseKind::SituationalFact,
                format!(
                    "{action} {} {spec} toward {who}",
                    if d.holds {
                        "involves"
                    } else {
                        "does not involve"
                    }
                ),
                format!("deontics[{k}]"),
            );
            if let Some(kind) = s.target_kind(&d.target).filter(|k| !t.considers(*k)) {
                leaves.push(trace.infer(
                    &[pid.clone(), fact],
                    format!("{kind} is not a patient kind of this theory; this does not bear on {action}"),
                ));
                continue;
            }
            engaged = true;
            if d.holds != p.morality {
                violated.push(spec.to_owned());
                leaves.push(trace.infer(
                    &[pid.clone(), fact],
                    format!("{action} violates {spec}, so {action} is wrong"),
                ));
            } else {
                leaves.push(trace.infer(
                    &[pid.clone(), fact],
                    format!("{action} is in line with {spec}"),
                ));
            }
        }
        if !engaged {
            if p.morality {
                trace
                    .warnings
                    .push(format!("nothing is asserted about {spec} for {action}; the requirement passes by default"));
                leaves.push(trace.infer(
                    &[pid],
                    format!(
                        "{spec} is not asserted for {action}; the requirement passes by default"
                    ),
                ));
            } else {
                leaves.push(trace.infer(
                    &[pid],
                    format!("{action} does not engage the prohibition on {spec}"),
                ));
            }
        }
    }

    violated.dedup();
    let verdict = if violated.is_empty() {
        trace.infer(
            &leaves,
            format!(
                "{action} violates none of the {} principles",
                t.principles.len()
            ),
        );
        trace.conclusion = format!("{action} is permissible");
        MoralVerdict::Permissible
    } else {
        trace.infer(
            &leaves,
            format!("{action} violates {}", violated.join(", ")),
        );
        trace.conclusion = format!("{action} is wrong");
        MoralVerdict::Wrong
    };

    Ok(ActionEvaluation {
        action: action.to_owned(),
        verdict,
        score: None,
        trace,
    })
}

/// Evaluates one action in whichever mode the theory calls for.
pub fn evaluate(
    t: &EthicalTheoryInstance,
    s: &Scenario,
    action: &str,
) -> Result<ActionEvaluation, ReasonError> {
    if t.consequentiality {
        evaluate_consequentialist(t, s, action)
    } else {
        evaluate_deontological(t, s, action)
    }
}

/// Evaluates every action and compares them.
///
/// Ties are reported as conflicts and never broken arbitrarily.
pub fn decide(t: &EthicalTheoryInstance, s: &Scenario) -> Result<Decision, ReasonError> {
    if s.acting_for != t.agent.name {
        return Err(ReasonError::AgentMismatch {
            theory: t.agent.name.clone(),
            scenario: s.acting_for.clone(),
        });
    }
    let mut evaluations = s
        .actions
        .iter()
        .map(|a| evaluate(t, s, &a.id))
        .collect::<Result<Vec<_>, _>>()?;
    let warnings = validate_scenario_against_theory(s, t);

    let (kind, chosen, contenders) = if t.consequentiality {
        rank_scores(&mut evaluations)
    } else {
        partition(&mut evaluations)
    };
    Ok(Decision {
        kind,
        chosen,
        contenders,
        evaluations,
        warnings,
    })
}

fn rank_key(e: &ActionEvaluation) -> (i64, bool) {
    (
        e.score.unwrap_or(0),
        e.verdict == MoralVerdict::Supererogatory,
    )
}

fn rank_scores(evaluations: &mut [ActionEvaluation]) -> (DecisionKind, Vec<String>, Vec<String>) {
    let best = evaluations
        .iter()
        .map(rank_key)
        .max()
        .expect("scenarios have at least two actions");
    let top: Vec<usize> = (0..evaluations.len())
        .filter(|&i| rank_key(&evaluations[i]) == best)
        .collect();
    let standings = evaluations
        .iter()
        .map(|e| format!("{} {}", e.action, e.score.unwrap_or(0)))
        .collect::<Vec<_>>()
        .join(", ");

    if let [winner] = top[..] {
        let e = &mut evaluations[winner];
        let a = e.action.clone();
        let score = best.0;
        let last = last_id(&e.trace);
        e.trace.infer(
            &[last],
            format!("{a} ranks first among the alternatives ({standings})"),
        );
        if e.verdict != MoralVerdict::Supererogatory {
            e.verdict = MoralVerdict::ObligatoryBest;
            if score < 0 {
                e.trace.conclusion = format!("{a} harms the least of the available actions");
            } else if score == 0 {
                e.trace.conclusion = format!("{a} is the best available action");
            }
        }
        return (DecisionKind::Decided, vec![a], Vec::new());
    }

    let tied: Vec<String> = top.iter().map(|&i| evaluations[i].action.clone()).collect();
    for &i in &top {
        let e = &mut evaluations[i];
        let a = e.action.clone();
        let others = tied
            .iter()
            .filter(|x| **x != a)
            .cloned()
            .collect::<Vec<_>>()
            .join(", ");
        let last = last_id(&e.trace);
        e.trace.infer(
            &[last],
            format!("{a} ties with {others} at the top ({standings}); the theory gives no way to separate them"),
        );
        e.verdict = MoralVerdict::Undecidable;
        e.trace.conclusion = format!("no decision can be reached between {}", tied.join(" and "));
    }
    (DecisionKind::Conflict, Vec::new(), tied)
}

fn partition(evaluations: &mut [ActionEvaluation]) -> (DecisionKind, Vec<String>, Vec<String>) {
    let permissible: Vec<usize> = (0..evaluations.len())
        .filter(|&i| evaluations[i].verdict == MoralVerdict::Permissible)
        .collect();
    match permissible[..] {
        [only] => {
            let e = &mut evaluations[only];
            let a = e.action.clone();
            let last = last_id(&e.trace);
            e.trace
                .infer(&[last], format!("{a} is the only permissible action"));
            e.verdict = MoralVerdict::ObligatoryBest;
            e.trace.conclusion = format!("{a} is the right action");
            (DecisionKind::Decided, vec![a], Vec::new())
        }
        [] => {
            let all: Vec<String> = evaluations.iter().map(|e| e.action.clone()).collect();
            (DecisionKind::Conflict, Vec::new(), all)
        }
        _ => {
            let ids = permissible
                .iter()
                .map(|&i| evaluations[i].action.clone())
                .collect();
            (DecisionKind::MultiplePermissible, ids, Vec::new())
        }
    }
}

fn last_id(trace: &ArgumentTrace) -> String {
    match (trace.inferences.last(), trace.premises.last()) {
        (Some(inf), _) => inf.id.clone(),
        (None, Some(p)) => p.id.clone(),
        (None, None) => unreachable!("every evaluation records at least one premise"),
    }
}
