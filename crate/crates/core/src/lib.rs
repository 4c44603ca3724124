//! Genet: machine-readable normative ethical theories and a reasoner that
//! applies them to decision scenarios.
//!
//! - [`model`]: theory instances, principles and their invariants.
//! - [`xml`]: the XML document format and its schema checker.
//! - [`registry`]: base-theory templates, instantiation and conformance.
//! - [`scenario`]: decision situations.
//! - [`reasoner`]: evaluation, decisions and argument traces.

pub mod model;
pub mod reasoner;
pub mod registry;
pub mod report;
pub mod scenario;
pub mod xml;

pub use model::{
    EthicalTheoryInstance, InfluenceThresholds, MoralAgent, MoralPrinciple, PatientKind, Subject,
    TargetClass,
};
pub use reasoner::{decide, ArgumentTrace, Decision, DecisionKind, MoralVerdict, ReasonError};
pub use registry::{
    builtin_bases, check_conformance, instantiate, BaseTheoryTemplate, InstantiateError,
    Mutability, PrincipleEdit, Registry,
};
pub use report::{Severity, ValidationReport, Violation, ViolationCode};
pub use scenario::{load_scenario, validate_scenario_against_theory, Scenario, ScenarioError};
pub use xml::{emit_theory, parse_theory, schema_check, ParseError, TheoryDocument};
