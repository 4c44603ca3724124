//! Violation reports shared by every validator in the crate.

use std::fmt;

use serde::Serialize;

/// Machine-readable violation codes.
///
/// The string form (`as_str`) is the stable identifier printed by the CLI and
/// matched by tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ViolationCode {
    // document level
    WellFormedness,
    NamespaceMismatch,
    UnexpectedElement,
    MissingElement,
    MinOccurs,
    UnexpectedText,
    MissingAttribute,
    UnknownAttribute,
    InvalidBoolean,
    InvalidInteger,
    InvalidEnumeration,
    InvalidUri,
    // model level
    EmptyBaseTheory,
    EmptyAgentName,
    EmptyPatientKinds,
    DuplicatePatientKind,
    EmptyPrinciples,
    DuplicatePrinciple,
    InvalidSpecification,
    InvalidCharacter,
    PercentOutOfRange,
    // conformance
    ConsequentialityMismatch,
    PatientKindsMismatch,
    NotReachable,
    // scenario against theory
    AgentMismatch,
    InertSpecification,
    ExcludedGroup,
}

impl ViolationCode {
    pub fn as_str(self) -> &'static str {
        use ViolationCode::*;
        match self {
            WellFormedness => "WELL_FORMEDNESS",
            NamespaceMismatch => "NAMESPACE_MISMATCH",
            UnexpectedElement => "UNEXPECTED_ELEMENT",
            MissingElement => "MISSING_ELEMENT",
            MinOccurs => "MIN_OCCURS",
            UnexpectedText => "UNEXPECTED_TEXT",
            MissingAttribute => "MISSING_ATTRIBUTE",
            UnknownAttribute => "UNKNOWN_ATTRIBUTE",
            InvalidBoolean => "INVALID_BOOLEAN",
            InvalidInteger => "INVALID_INTEGER",
            InvalidEnumeration => "INVALID_ENUMERATION",
            InvalidUri => "INVALID_URI",
            EmptyBaseTheory => "EMPTY_BASE_THEORY",
            EmptyAgentName => "EMPTY_AGENT_NAME",
            EmptyPatientKinds => "EMPTY_PATIENT_KINDS",
            DuplicatePatientKind => "DUPLICATE_PATIENT_KIND",
            EmptyPrinciples => "EMPTY_PRINCIPLES",
            DuplicatePrinciple => "DUPLICATE_PRINCIPLE",
            InvalidSpecification => "INVALID_SPECIFICATION",
            InvalidCharacter => "INVALID_CHARACTER",
            PercentOutOfRange => "PERCENT_OUT_OF_RANGE",
            ConsequentialityMismatch => "CONSEQUENTIALITY_MISMATCH",
            PatientKindsMismatch => "PATIENT_KINDS_MISMATCH",
            NotReachable => "NOT_REACHABLE",
            AgentMismatch => "AGENT_MISMATCH",
            InertSpecification => "INERT_SPECIFICATION",
            ExcludedGroup => "EXCLUDED_GROUP",
        }
    }
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub code: ViolationCode,
    /// Dotted path to the offending field, e.g. `principles[2].subject`.
    pub path: String,
    pub message: String,
    pub severity: Severity,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}", self.code, self.path, self.message)
    }
}

/// An ordered list of violations. Empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ValidationReport {
    violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn error(
        &mut self,
        code: ViolationCode,
        path: impl Into<String>,
        message: impl Into<String>,
    ) {
        self.violations.push(Violation {
            code,
            path: path.into(),
            message: message.into(),
            severity: Severity::Error,
        });
    }

    pub fn warning(
        &mut self,
        code: ViolationCode,
        path: impl Into<String>,
        message: impl Into<String>,
    ) {
        self.violations.push(Violation {
            code,
            path: path.into(),
            message: message.into(),
            severity: Severity::Warning,
        });
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    /// True when no entry has error severity.
    pub fn is_ok(&self) -> bool {
        self.errors().next().is_none()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Violation> {
        self.violations.iter()
    }

    pub fn errors(&self) -> impl Iterator<Item = &Violation> {
        self.violations
            .iter()
            .filter(|v| v.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Violation> {
        self.violations
            .iter()
            .filter(|v| v.severity == Severity::Warning)
    }

    pub fn contains(&self, code: ViolationCode) -> bool {
        self.violations.iter().any(|v| v.code == code)
    }

    pub fn codes(&self) -> Vec<ViolationCode> {
        self.violations.iter().map(|v| v.code).collect()
    }
}

impl<'a> IntoIterator for &'a ValidationReport {
    type Item = &'a Violation;
    type IntoIter = std::slice::Iter<'a, Violation>;

    fn into_iter(self) -> Self::IntoIter {
        self.violations.iter()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}
