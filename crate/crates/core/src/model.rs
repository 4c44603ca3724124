//! In-memory representation of a theory instance and its structural checks.
//!
//! Nothing here knows about XML; see [`crate::xml`] for the document format.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::report::{ValidationReport, ViolationCode};

/// Kinds of entity that may be first-order moral patients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum PatientKind {
    Human,
    OtherAnimal,
    Nature,
    OtherSentient,
}

impl PatientKind {
    pub const ALL: [PatientKind; 4] = [
        PatientKind::Human,
        PatientKind::OtherAnimal,
        PatientKind::Nature,
        PatientKind::OtherSentient,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PatientKind::Human => "human",
            PatientKind::OtherAnimal => "otherAnimal",
            PatientKind::Nature => "nature",
            PatientKind::OtherSentient => "otherSentient",
        }
    }
}

impl fmt::Display for PatientKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("`{value}` is not one of: {expected}")]
pub struct UnknownVariant {
    pub value: String,
    pub expected: &'static str,
}

impl FromStr for PatientKind {
    type Err = UnknownVariant;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PatientKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| UnknownVariant {
                value: s.to_owned(),
                expected: "human, otherAnimal, nature, otherSentient",
            })
    }
}

/// Who a principle applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Subject {
    /// The agent alone.
    Agent,
    /// The moral patients, excluding the agent.
    Patients,
    /// Agent and patients.
    All,
}

impl Subject {
    pub const ALL: [Subject; 3] = [Subject::Agent, Subject::Patients, Subject::All];

    pub fn as_str(self) -> &'static str {
        match self {
            Subject::Agent => "agent",
            Subject::Patients => "patients",
            Subject::All => "all",
        }
    }

    pub fn covers(self, class: TargetClass) -> bool {
        matches!(
            (self, class),
            (Subject::All, _)
                | (Subject::Agent, TargetClass::Agent)
                | (Subject::Patients, TargetClass::Patients)
        )
    }
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Subject {
    type Err = UnknownVariant;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Subject::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| UnknownVariant {
                value: s.to_owned(),
                expected: "agent, patients, all",
            })
    }
}

/// The class of entity an occurrence affects, as seen by principle matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum TargetClass {
    Agent,
    Patients,
}

impl fmt::Display for TargetClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TargetClass::Agent => "agent",
            TargetClass::Patients => "patients",
        })
    }
}

/// The entity the reasoner acts on behalf of.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MoralAgent {
    pub name: String,
    /// Opaque pointer to further information about the agent. Never dereferenced.
    pub reference: Option<String>,
}

impl MoralAgent {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            reference: None,
        }
    }

    pub fn with_reference(mut self, reference: impl Into<String>) -> Self {
        self.reference = Some(reference.into());
        self
    }
}

/// Percentages above which a request made under influence loses its moral weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InfluenceThresholds {
    pub external: u8,
    pub substance: u8,
}

impl InfluenceThresholds {
    pub fn new(external: u8, substance: u8) -> Self {
        Self {
            external,
            substance,
        }
    }
}

/// A `(morality, subject, specification)` triple.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoralPrinciple {
    /// `true` when the specified occurrence is morally good.
    pub morality: bool,
    pub subject: Subject,
    pub specification: String,
}

impl MoralPrinciple {
    pub fn new(morality: bool, subject: Subject, specification: impl Into<String>) -> Self {
        Self {
            morality,
            subject,
            specification: specification.into(),
        }
    }

    pub fn good(subject: Subject, specification: impl Into<String>) -> Self {
        Self::new(true, subject, specification)
    }

    pub fn bad(subject: Subject, specification: impl Into<String>) -> Self {
        Self::new(false, subject, specification)
    }

    /// Identity used for uniqueness and removal.
    pub fn key(&self) -> (&str, Subject) {
        (&self.specification, self.subject)
    }
}

impl fmt::Display for MoralPrinciple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} is morally {} (subject: {})",
            self.specification,
            if self.morality { "good" } else { "bad" },
            self.subject
        )
    }
}

/// A layer-3 theory: one agent's instantiation of a base theory.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EthicalTheoryInstance {
    pub base_theory: String,
    pub instance_name: Option<String>,
    /// `true` when consequences are judged, `false` when actions are.
    pub consequentiality: bool,
    pub agent: MoralAgent,
    pub patient_kinds: BTreeSet<PatientKind>,
    pub influence_thresholds: InfluenceThresholds,
    pub principles: Vec<MoralPrinciple>,
}

impl EthicalTheoryInstance {
    pub fn validate(&self) -> ValidationReport {
        validate_instance(self)
    }

    pub fn matching_principles(
        &self,
        specification: &str,
        class: TargetClass,
    ) -> Vec<&MoralPrinciple> {
        matching_principles(self, specification, class)
    }

    pub fn considers(&self, kind: PatientKind) -> bool {
        self.patient_kinds.contains(&kind)
    }
}

/// Checks every structural invariant of a theory instance.
///
/// Total and deterministic; violations come back in field order.
pub fn validate_instance(theory: &EthicalTheoryInstance) -> ValidationReport {
    let mut report = ValidationReport::new();

    if theory.base_theory.is_empty() {
        report.error(
            ViolationCode::EmptyBaseTheory,
            "baseTheory",
            "baseTheory must not be empty",
        );
    }
    check_chars(&mut report, "baseTheory", &theory.base_theory);
    if let Some(name) = &theory.instance_name {
        check_chars(&mut report, "instanceName", name);
    }

    if theory.agent.name.is_empty() {
        report.error(
            ViolationCode::EmptyAgentName,
            "agent.name",
            "agent name must not be empty",
        );
    }
    check_chars(&mut report, "agent.name", &theory.agent.name);
    if let Some(reference) = &theory.agent.reference {
        if !is_uri_reference(reference) {
            report.error(
                ViolationCode::InvalidUri,
                "agent.reference",
                format!("`{reference}` is not a URI"),
            );
        }
    }

    if theory.patient_kinds.is_empty() {
        report.error(
            ViolationCode::EmptyPatientKinds,
            "patientKinds",
            "at least one patient kind is required",
        );
    }

    for (field, value) in [
        ("external", theory.influence_thresholds.external),
        ("substance", theory.influence_thresholds.substance),
    ] {
        if value > 100 {
            report.error(
                ViolationCode::PercentOutOfRange,
                format!("influenceThresholds.{field}"),
                format!("{value} is outside 0..=100"),
            );
        }
    }

    if theory.principles.is_empty() {
        report.error(
            ViolationCode::EmptyPrinciples,
            "principles",
            "at least one principle is required",
        );
    }
    report.extend(check_principles(&theory.principles, "principles"));

    report
}

/// Per-principle checks plus `(specification, subject)` uniqueness.
pub(crate) fn check_principles(principles: &[MoralPrinciple], prefix: &str) -> ValidationReport {
    let mut report = ValidationReport::new();
    let mut seen = BTreeSet::new();
    for (i, p) in principles.iter().enumerate() {
        let path = format!("{prefix}[{i}].specification");
        if !is_specification_token(&p.specification) {
            report.error(
                ViolationCode::InvalidSpecification,
                &path,
                format!(
                    "`{}` is not a non-empty token without whitespace",
                    p.specification
                ),
            );
        }
        check_chars(&mut report, &path, &p.specification);
        if !seen.insert(p.key()) {
            report.error(
                ViolationCode::DuplicatePrinciple,
                format!("{prefix}[{i}]"),
                format!("duplicate principle ({}, {})", p.specification, p.subject),
            );
        }
    }
    report
}

/// Principles whose specification equals `specification` and whose subject
/// covers `class`, in document order.
pub fn matching_principles<'t>(
    theory: &'t EthicalTheoryInstance,
    specification: &str,
    class: TargetClass,
) -> Vec<&'t MoralPrinciple> {
    theory
        .principles
        .iter()
        .filter(|p| p.specification == specification && p.subject.covers(class))
        .collect()
}

pub fn is_specification_token(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(char::is_whitespace)
}

/// Characters permitted in XML 1.0 documents.
pub fn is_xml_char(c: char) -> bool {
    matches!(c,
        '\u{9}' | '\u{A}' | '\u{D}'
        | '\u{20}'..='\u{D7FF}'
        | '\u{E000}'..='\u{FFFD}'
        | '\u{10000}'..='\u{10FFFF}')
}

fn check_chars(report: &mut ValidationReport, path: &str, value: &str) {
    if let Some(c) = value.chars().find(|c| !is_xml_char(*c)) {
        report.error(
            ViolationCode::InvalidCharacter,
            path,
            format!(
                "character U+{:04X} cannot be represented in a theory document",
                c as u32
            ),
        );
    }
}

/// Syntactic URI-reference check in the spirit of `xs:anyURI`: no whitespace
/// or excluded delimiters, well-formed percent escapes, and a valid scheme when
/// one is present.
pub fn is_uri_reference(s: &str) -> bool {
    if s.is_empty() {
        return false;
    }
    if s.chars()
        .any(|c| c.is_whitespace() || c.is_control() || "<>\"{}|\\^`".contains(c))
    {
        return false;
    }
    let bytes = s.as_bytes();
    for (i, b) in bytes.iter().enumerate() {
        if *b == b'%'
            && !(i + 2 < bytes.len()
                && bytes[i + 1].is_ascii_hexdigit()
                && bytes[i + 2].is_ascii_hexdigit())
        {
            return false;
        }
    }
    // The first ':' before any '/', '?' or '#' delimits a scheme.
    if let Some(end) = s.find([':', '/', '?', '#']) {
        if s.as_bytes()[end] == b':' {
            let scheme = &s[..end];
            let mut chars = scheme.chars();
            let valid = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
                && chars.all(|c| c.is_ascii_alphanumeric() || "+-.".contains(c));
            if !valid {
                return false;
            }
        }
    }
    true
}
