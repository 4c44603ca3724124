//! Reading, writing and schema-checking theory documents.
//!
//! Documents live in the `http://genet.cs.uct.ac.za` namespace with root
//! element `ethicalTheory`. The schema constraints are implemented directly in
//! [`decode`] rather than through a generic XSD engine; the schema text itself
//! ships in `schema/ethicalTheory.xsd` and is exposed as [`SCHEMA_XSD`].

mod decode;
mod emit;

use thiserror::Error;

use crate::model::{validate_instance, EthicalTheoryInstance};
use crate::report::{ValidationReport, ViolationCode};

pub const GENET_NS: &str = "http://genet.cs.uct.ac.za";
pub const XSI_NS: &str = "http://www.w3.org/2001/XMLSchema-instance";
pub const ROOT_ELEMENT: &str = "ethicalTheory";

/// The schema the checker implements, verbatim.
pub const SCHEMA_XSD: &str = include_str!("../../schema/ethicalTheory.xsd");

/// Raw bytes of a theory document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoryDocument(Vec<u8>);

impl TheoryDocument {
    pub fn new(bytes: impl Into<Vec<u8>>) -> Self {
        Self(bytes.into())
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.0
    }

    /// Emitted documents are always UTF-8; this only fails for foreign input.
    pub fn as_str(&self) -> Option<&str> {
        std::str::from_utf8(&self.0).ok()
    }
}

impl From<Vec<u8>> for TheoryDocument {
    fn from(bytes: Vec<u8>) -> Self {
        Self(bytes)
    }
}

impl From<String> for TheoryDocument {
    fn from(s: String) -> Self {
        Self(s.into_bytes())
    }
}

impl From<&str> for TheoryDocument {
    fn from(s: &str) -> Self {
        Self(s.as_bytes().to_vec())
    }
}

#[derive(Debug, Clone, Error)]
pub enum ParseError {
    #[error("document is not well-formed XML: {0}")]
    WellFormedness(String),
    #[error("document is not in the {GENET_NS} namespace")]
    NamespaceMismatch(ValidationReport),
    #[error("document violates the theory schema ({} violation(s))", .0.len())]
    SchemaViolation(ValidationReport),
    #[error("decoded theory breaks model invariants ({} violation(s))", .0.len())]
    InvalidInstance(ValidationReport),
}

impl ParseError {
    pub fn code(&self) -> &'static str {
        match self {
            ParseError::WellFormedness(_) => "WELL_FORMEDNESS",
            ParseError::NamespaceMismatch(_) => "NAMESPACE_MISMATCH",
            ParseError::SchemaViolation(_) => "SCHEMA_VIOLATION",
            ParseError::InvalidInstance(_) => "INVALID_INSTANCE",
        }
    }

    /// The detailed violations behind this error.
    pub fn report(&self) -> ValidationReport {
        match self {
            ParseError::WellFormedness(msg) => {
                let mut r = ValidationReport::new();
                r.error(ViolationCode::WellFormedness, "document", msg.clone());
                r
            }
            ParseError::NamespaceMismatch(r)
            | ParseError::SchemaViolation(r)
            | ParseError::InvalidInstance(r) => r.clone(),
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum EmitError {
    #[error("instance is invalid ({} violation(s))", .0.len())]
    InvalidInstance(ValidationReport),
}

impl EmitError {
    pub fn code(&self) -> &'static str {
        "INVALID_INSTANCE"
    }
}

/// Decodes a theory document.
///
/// Succeeds exactly when [`schema_check`] reports nothing and the decoded
/// value passes [`validate_instance`].
pub fn parse_theory(doc: &[u8]) -> Result<EthicalTheoryInstance, ParseError> {
    let decoded = decode::decode(doc);
    if !decoded.schema.is_empty() {
        let first = decoded.schema.iter().next().map(|v| v.code);
        return Err(match first {
            Some(ViolationCode::WellFormedness) => {
                ParseError::WellFormedness(decoded.schema.iter().next().unwrap().message.clone())
            }
            Some(ViolationCode::NamespaceMismatch) if decoded.schema.len() == 1 => {
                ParseError::NamespaceMismatch(decoded.schema)
            }
            _ => ParseError::SchemaViolation(decoded.schema),
        });
    }
    let instance = decoded
        .instance
        .expect("a schema-clean document always decodes to an instance");
    let mut model = decoded.model;
    model.extend(validate_instance(&instance));
    if model.is_empty() {
        Ok(instance)
    } else {
        Err(ParseError::InvalidInstance(model))
    }
}

/// Structural report against the theory schema. Model invariants the schema
/// does not express (token syntax, uniqueness) are not reported here.
pub fn schema_check(doc: &[u8]) -> ValidationReport {
    decode::decode(doc).schema
}

/// Canonical UTF-8 serialisation: XML declaration, 4-space indentation, fixed
/// attribute order. Identical instances produce identical bytes.
pub fn emit_theory(instance: &EthicalTheoryInstance) -> Result<TheoryDocument, EmitError> {
    let report = validate_instance(instance);
    if !report.is_empty() {
        return Err(EmitError::InvalidInstance(report));
    }
    Ok(TheoryDocument(emit::render(instance).into_bytes()))
}
