//! Layer-2 base theories and the rules for instantiating them.
//!
//! A template fixes some fields of a theory (consequentiality, optionally the
//! patient kinds) and supplies default principles together with a
//! [`Mutability`] mode describing how an instantiator may edit them.
//! Templates are data: one TOML file per base theory, see `bases/`.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    check_principles, validate_instance, EthicalTheoryInstance, InfluenceThresholds, MoralAgent,
    MoralPrinciple, PatientKind, Subject,
};
use crate::report::{ValidationReport, ViolationCode};

pub const TEMPLATE_FORMAT_VERSION: u32 = 1;

const BUILTIN_SOURCES: [(&str, &str); 4] = [
    (
        "utilitarianism.toml",
        include_str!("../bases/utilitarianism.toml"),
    ),
    ("egoism.toml", include_str!("../bases/egoism.toml")),
    (
        "christian-divine-command-theory.toml",
        include_str!("../bases/christian-divine-command-theory.toml"),
    ),
    ("kantianism.toml", include_str!("../bases/kantianism.toml")),
];

/// How a template's principle collection may be edited on instantiation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mutability {
    Add,
    Remove,
    None,
    All,
}

impl Mutability {
    pub fn allows_add(self) -> bool {
        matches!(self, Mutability::Add | Mutability::All)
    }

    pub fn allows_remove(self) -> bool {
        matches!(self, Mutability::Remove | Mutability::All)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mutability::Add => "add",
            Mutability::Remove => "remove",
            Mutability::None => "none",
            Mutability::All => "all",
        }
    }
}

impl fmt::Display for Mutability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Instance fields a template leaves to the instantiator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum FreeField {
    Agent,
    InfluenceThresholds,
    InstanceName,
    PatientKinds,
}

impl FreeField {
    pub fn as_str(self) -> &'static str {
        match self {
            FreeField::Agent => "agent",
            FreeField::InfluenceThresholds => "influenceThresholds",
            FreeField::InstanceName => "instanceName",
            FreeField::PatientKinds => "patientKinds",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BaseTheoryTemplate {
    pub name: String,
    pub consequentiality: bool,
    /// When present, every instance must carry exactly this set.
    pub fixed_patient_kinds: Option<BTreeSet<PatientKind>>,
    pub default_principles: Vec<MoralPrinciple>,
    pub mutability: Mutability,
    pub free_fields: Vec<FreeField>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct TemplateFile {
    format_version: u32,
    name: String,
    consequentiality: bool,
    fixed_patient_kinds: Option<Vec<PatientKind>>,
    mutability: Mutability,
    default_principles: Vec<MoralPrinciple>,
    free_fields: Vec<FreeField>,
}

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("{source_name}: {error}")]
    Syntax {
        source_name: String,
        error: Box<toml::de::Error>,
    },
    #[error(
        "{source_name}: unsupported formatVersion {found} (expected {TEMPLATE_FORMAT_VERSION})"
    )]
    UnsupportedVersion { source_name: String, found: u32 },
    #[error("{source_name}: invalid template: {reason}")]
    InvalidTemplate { source_name: String, reason: String },
    #[error("base theory `{0}` is defined twice")]
    DuplicateName(String),
    #[error("{path}: {error}")]
    Io {
        path: PathBuf,
        error: std::io::Error,
    },
}

impl BaseTheoryTemplate {
    /// Parses and checks one template file.
    pub fn from_toml(source_name: &str, text: &str) -> Result<Self, RegistryError> {
        let file: TemplateFile = toml::from_str(text).map_err(|e| RegistryError::Syntax {
            source_name: source_name.to_owned(),
            error: Box::new(e),
        })?;
        if file.format_version != TEMPLATE_FORMAT_VERSION {
            return Err(RegistryError::UnsupportedVersion {
                source_name: source_name.to_owned(),
                found: file.format_version,
            });
        }
        let invalid = |reason: String| RegistryError::InvalidTemplate {
            source_name: source_name.to_owned(),
            reason,
        };
        if file.name.is_empty() {
            return Err(invalid("name must not be empty".into()));
        }
        if file.default_principles.is_empty() {
            return Err(invalid("defaultPrinciples must not be empty".into()));
        }
        let report = check_principles(&file.default_principles, "defaultPrinciples");
        if let Some(v) = report.iter().next() {
            return Err(invalid(format!("{} at {}: {}", v.code, v.path, v.message)));
        }
        let fixed = match file.fixed_patient_kinds {
            Some(kinds) => {
                let set: BTreeSet<_> = kinds.iter().copied().collect();
                if set.len() != kinds.len() {
                    return Err(invalid("fixedPatientKinds lists a kind twice".into()));
                }
                if set.is_empty() {
                    return Err(invalid("fixedPatientKinds must not be empty".into()));
                }
                Some(set)
            }
            None => None,
        };
        for required in [
            FreeField::Agent,
            FreeField::InfluenceThresholds,
            FreeField::InstanceName,
        ] {
            if !file.free_fields.contains(&required) {
                return Err(invalid(format!(
                    "freeFields must include {}",
                    required.as_str()
                )));
            }
        }
        if file.free_fields.contains(&FreeField::PatientKinds) == fixed.is_some() {
            return Err(invalid(
                "patientKinds must be a free field exactly when fixedPatientKinds is absent".into(),
            ));
        }
        Ok(Self {
            name: file.name,
            consequentiality: file.consequentiality,
            fixed_patient_kinds: fixed,
            default_principles: file.default_principles,
            mutability: file.mutability,
            free_fields: file.free_fields,
        })
    }
}

/// An immutable set of templates, looked up by name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Registry {
    templates: Vec<BaseTheoryTemplate>,
}

impl Registry {
    /// The four shipped base theories.
    pub fn builtin() -> Self {
        let templates = BUILTIN_SOURCES
            .iter()
            .map(|(name, text)| {
                BaseTheoryTemplate::from_toml(name, text).expect("shipped templates are valid")
            })
            .collect();
        Self { templates }
    }

    /// Loads every `*.toml` file in `dir`, ordered by file name.
    pub fn load_dir(dir: impl AsRef<Path>) -> Result<Self, RegistryError> {
        let dir = dir.as_ref();
        let io = |path: &Path| {
            let path = path.to_owned();
            move |error| RegistryError::Io { path, error }
        };
        let mut paths = Vec::new();
        for entry in std::fs::read_dir(dir).map_err(io(dir))? {
            let path = entry.map_err(io(dir))?.path();
            if path.extension().is_some_and(|e| e == "toml") {
                paths.push(path);
            }
        }
        paths.sort();
        let mut templates = Vec::with_capacity(paths.len());
        for path in paths {
            let text = std::fs::read_to_string(&path).map_err(io(&path))?;
            templates.push(BaseTheoryTemplate::from_toml(
                &path.display().to_string(),
                &text,
            )?);
        }
        Self::from_templates(templates)
    }

    pub fn from_templates(templates: Vec<BaseTheoryTemplate>) -> Result<Self, RegistryError> {
        let mut names = BTreeSet::new();
        for t in &templates {
            if !names.insert(t.name.as_str()) {
                return Err(RegistryError::DuplicateName(t.name.clone()));
            }
        }
        Ok(Self { templates })
    }

    pub fn get(&self, name: &str) -> Option<&BaseTheoryTemplate> {
        self.templates.iter().find(|t| t.name == name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.templates.iter().map(|t| t.name.as_str())
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BaseTheoryTemplate> {
        self.templates.iter()
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }
}

impl Default for Registry {
    fn default() -> Self {
        Self::builtin()
    }
}

/// The shipped templates: utilitarianism, egoism, Christian divine command
/// theory and Kantianism, in that order.
pub fn builtin_bases() -> Vec<BaseTheoryTemplate> {
    Registry::builtin().templates
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase", tag = "kind")]
pub enum PrincipleEdit {
    AddPrinciple(MoralPrinciple),
    /// Removal is by `(specification, subject)`; morality is not consulted.
    RemovePrinciple {
        specification: String,
        subject: Subject,
    },
}

impl PrincipleEdit {
    pub fn add(p: MoralPrinciple) -> Self {
        PrincipleEdit::AddPrinciple(p)
    }

    pub fn remove(specification: impl Into<String>, subject: Subject) -> Self {
        PrincipleEdit::RemovePrinciple {
            specification: specification.into(),
            subject,
        }
    }
}

impl fmt::Display for PrincipleEdit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrincipleEdit::AddPrinciple(p) => {
                write!(
                    f,
                    "add ({}, {}, {})",
                    p.specification, p.subject, p.morality
                )
            }
            PrincipleEdit::RemovePrinciple {
                specification,
                subject,
            } => {
                write!(f, "remove ({specification}, {subject})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstantiateError {
    #[error("{edit} is not permitted: {base} has mutability {mutability}")]
    MutabilityViolation {
        base: String,
        mutability: Mutability,
        edit: PrincipleEdit,
    },
    #[error("{field} is fixed by {base} and cannot be changed")]
    FixedFieldViolation { base: String, field: &'static str },
    #[error("{field} must be supplied for {base}")]
    MissingField { base: String, field: &'static str },
    #[error("edits leave no principles")]
    EmptyPrinciples,
    #[error("cannot remove ({specification}, {subject}): no such principle")]
    UnknownRemoval {
        specification: String,
        subject: Subject,
    },
    #[error("cannot add ({specification}, {subject}): a principle with that specification and subject exists")]
    DuplicatePrinciple {
        specification: String,
        subject: Subject,
    },
    #[error("resulting instance is invalid ({} violation(s))", .0.len())]
    InvalidInstance(ValidationReport),
}

impl InstantiateError {
    pub fn code(&self) -> &'static str {
        match self {
            InstantiateError::MutabilityViolation { .. } => "MUTABILITY_VIOLATION",
            InstantiateError::FixedFieldViolation { .. } => "FIXED_FIELD_VIOLATION",
            InstantiateError::MissingField { .. } => "MISSING_FIELD",
            InstantiateError::EmptyPrinciples => "EMPTY_PRINCIPLES",
            InstantiateError::UnknownRemoval { .. } => "UNKNOWN_REMOVAL",
            InstantiateError::DuplicatePrinciple { .. } => "DUPLICATE_PRINCIPLE",
            InstantiateError::InvalidInstance(_) => "INVALID_INSTANCE",
        }
    }
}

/// Builds a theory instance from a template.
///
/// Edits apply in order: additions append, removals delete by
/// `(specification, subject)`. Only the final list must be non-empty.
pub fn instantiate(
    base: &BaseTheoryTemplate,
    agent: MoralAgent,
    thresholds: InfluenceThresholds,
    instance_name: impl Into<String>,
    patient_kinds: Option<BTreeSet<PatientKind>>,
    edits: &[PrincipleEdit],
) -> Result<EthicalTheoryInstance, InstantiateError> {
    let patient_kinds = match (&base.fixed_patient_kinds, patient_kinds) {
        (Some(fixed), Some(given)) if *fixed != given => {
            return Err(InstantiateError::FixedFieldViolation {
                base: base.name.clone(),
                field: "patientKinds",
            })
        }
        (Some(fixed), _) => fixed.clone(),
        (None, Some(given)) => given,
        (None, None) => {
            return Err(InstantiateError::MissingField {
                base: base.name.clone(),
                field: "patientKinds",
            })
        }
    };

    let mut principles = base.default_principles.clone();
    for edit in edits {
        let permitted = match edit {
            PrincipleEdit::AddPrinciple(_) => base.mutability.allows_add(),
            PrincipleEdit::RemovePrinciple { .. } => base.mutability.allows_remove(),
        };
        if !permitted {
            return Err(InstantiateError::MutabilityViolation {
                base: base.name.clone(),
                mutability: base.mutability,
                edit: edit.clone(),
            });
        }
        match edit {
            PrincipleEdit::AddPrinciple(p) => {
                if principles.iter().any(|q| q.key() == p.key()) {
                    return Err(InstantiateError::DuplicatePrinciple {
                        specification: p.specification.clone(),
                        subject: p.subject,
                    });
                }
                principles.push(p.clone());
            }
            PrincipleEdit::RemovePrinciple {
                specification,
                subject,
            } => {
                let at = principles
                    .iter()
                    .position(|q| q.key() == (specification.as_str(), *subject))
                    .ok_or_else(|| InstantiateError::UnknownRemoval {
                        specification: specification.clone(),
                        subject: *subject,
                    })?;
                principles.remove(at);
            }
        }
    }
    if principles.is_empty() {
        return Err(InstantiateError::EmptyPrinciples);
    }

    let instance = EthicalTheoryInstance {
        base_theory: base.name.clone(),
        instance_name: Some(instance_name.into()),
        consequentiality: base.consequentiality,
        agent,
        patient_kinds,
        influence_thresholds: thresholds,
        principles,
    };
    let report = validate_instance(&instance);
    if report.is_empty() {
        Ok(instance)
    } else {
        Err(InstantiateError::InvalidInstance(report))
    }
}

/// Discrepancies between an instance and its template; empty means conformant.
pub type ConformanceReport = ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConformanceError {
    #[error("base theory `{0}` is not registered")]
    UnknownBaseTheory(String),
}

impl ConformanceError {
    pub fn code(&self) -> &'static str {
        "UNKNOWN_BASE_THEORY"
    }
}

/// Checks that `instance` could have been produced from its registered
/// template.
///
/// Principle reachability is a set comparison: defaults missing from the
/// instance need `remove` permission, principles absent from the defaults need
/// `add` permission. A default re-added with a different morality counts as
/// both.
pub fn check_conformance(
    instance: &EthicalTheoryInstance,
    registry: &Registry,
) -> Result<ConformanceReport, ConformanceError> {
    let base = registry
        .get(&instance.base_theory)
        .ok_or_else(|| ConformanceError::UnknownBaseTheory(instance.base_theory.clone()))?;
    let mut report = ConformanceReport::new();

    if instance.consequentiality != base.consequentiality {
        report.error(
            ViolationCode::ConsequentialityMismatch,
            "consequentiality",
            format!(
                "{} fixes consequentiality to {}",
                base.name, base.consequentiality
            ),
        );
    }
    if let Some(fixed) = &base.fixed_patient_kinds {
        if *fixed != instance.patient_kinds {
            let list = |s: &BTreeSet<PatientKind>| {
                s.iter().map(|k| k.as_str()).collect::<Vec<_>>().join(", ")
            };
            report.error(
                ViolationCode::PatientKindsMismatch,
                "patientKinds",
                format!(
                    "{} fixes patient kinds to {{{}}}, found {{{}}}",
                    base.name,
                    list(fixed),
                    list(&instance.patient_kinds)
                ),
            );
        }
    }

    if !base.mutability.allows_remove() {
        for p in &base.default_principles {
            if !instance.principles.contains(p) {
                report.error(
                    ViolationCode::NotReachable,
                    "principles",
                    format!(
                        "default principle ({}, {}, {}) is missing but {} has mutability {}",
                        p.specification, p.subject, p.morality, base.name, base.mutability
                    ),
                );
            }
        }
    }
    if !base.mutability.allows_add() {
        for (i, p) in instance.principles.iter().enumerate() {
            if !base.default_principles.contains(p) {
                report.error(
                    ViolationCode::NotReachable,
                    format!("principles[{i}]"),
                    format!(
                        "principle ({}, {}, {}) is not a default but {} has mutability {}",
                        p.specification, p.subject, p.morality, base.name, base.mutability
                    ),
                );
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doe() -> MoralAgent {
        MoralAgent::new("Doe Family").with_reference("http://thedoes.fam")
    }

    fn build(
        base: &str,
        edits: &[PrincipleEdit],
    ) -> Result<EthicalTheoryInstance, InstantiateError> {
        let reg = Registry::builtin();
        instantiate(
            reg.get(base).unwrap(),
            doe(),
            InfluenceThresholds::new(50, 30),
            "test",
            None,
            edits,
        )
    }

    #[test]
    fn four_builtin_templates() {
        let bases = builtin_bases();
        let names: Vec<_> = bases.iter().map(|b| b.name.as_str()).collect();
        assert_eq!(
            names,
            [
                "utilitarianism",
                "egoism",
                "ChristianDivineCommandTheory",
                "Kantianism"
            ]
        );
        let reg = Registry::builtin();
        let util = reg.get("utilitarianism").unwrap();
        assert_eq!(util.default_principles.len(), 5);
        assert!(util.consequentiality);
        assert_eq!(util.mutability, Mutability::Remove);
        assert!(util
            .default_principles
            .iter()
            .all(|p| p.morality && p.subject == Subject::All));
        let ego = reg.get("egoism").unwrap();
        assert!(ego
            .default_principles
            .iter()
            .all(|p| p.subject == Subject::Agent));
        assert_eq!(ego.mutability, Mutability::All);
        let dct = reg.get("ChristianDivineCommandTheory").unwrap();
        assert_eq!(dct.mutability, Mutability::Add);
        assert!(!dct.consequentiality);
        assert_eq!(dct.default_principles.len(), 6);
        assert_eq!(
            dct.fixed_patient_kinds,
            Some(
                [
                    PatientKind::Human,
                    PatientKind::OtherAnimal,
                    PatientKind::Nature
                ]
                .into()
            )
        );
        let kill = dct
            .default_principles
            .iter()
            .find(|p| p.specification == "kill")
            .unwrap();
        assert_eq!((kill.morality, kill.subject), (false, Subject::Patients));
        let kant = reg.get("Kantianism").unwrap();
        assert_eq!(kant.mutability, Mutability::None);
        assert_eq!(
            kant.default_principles,
            vec![
                MoralPrinciple::good(Subject::All, "universallyWillable"),
                MoralPrinciple::bad(Subject::All, "mereMeans")
            ]
        );
        assert!(reg.get("nosuch").is_none());
    }

    #[test]
    fn utilitarian_remove_love() {
        let t = build(
            "utilitarianism",
            &[PrincipleEdit::remove("loveSatisfaction", Subject::All)],
        )
        .unwrap();
        assert_eq!(t.principles.len(), 4);
        assert!(t
            .principles
            .iter()
            .all(|p| p.specification != "loveSatisfaction"));
        assert!(validate_instance(&t).is_empty());
    }

    #[test]
    fn mutability_errors() {
        let foo = PrincipleEdit::add(MoralPrinciple::good(Subject::All, "foo"));
        assert_eq!(
            build("Kantianism", std::slice::from_ref(&foo))
                .unwrap_err()
                .code(),
            "MUTABILITY_VIOLATION"
        );
        assert_eq!(
            build("utilitarianism", std::slice::from_ref(&foo))
                .unwrap_err()
                .code(),
            "MUTABILITY_VIOLATION"
        );
        assert_eq!(
            build(
                "ChristianDivineCommandTheory",
                &[PrincipleEdit::remove("kill", Subject::Patients)]
            )
            .unwrap_err()
            .code(),
            "MUTABILITY_VIOLATION"
        );
        assert!(build("ChristianDivineCommandTheory", &[foo]).is_ok());
    }

    #[test]
    fn removal_errors() {
        let err = build(
            "utilitarianism",
            &[PrincipleEdit::remove("loveSatisfaction", Subject::Agent)],
        )
        .unwrap_err();
        assert_eq!(err.code(), "UNKNOWN_REMOVAL");
        let all: Vec<_> = Registry::builtin()
            .get("utilitarianism")
            .unwrap()
            .default_principles
            .iter()
            .map(|p| PrincipleEdit::remove(p.specification.clone(), p.subject))
            .collect();
        assert_eq!(
            build("utilitarianism", &all).unwrap_err(),
            InstantiateError::EmptyPrinciples
        );
    }

    #[test]
    fn duplicate_add_rejected() {
        let err = build(
            "ChristianDivineCommandTheory",
            &[PrincipleEdit::add(MoralPrinciple::good(
                Subject::Patients,
                "kill",
            ))],
        )
        .unwrap_err();
        assert_eq!(err.code(), "DUPLICATE_PRINCIPLE");
    }

    #[test]
    fn fixed_patient_kinds() {
        let reg = Registry::builtin();
        let err = instantiate(
            reg.get("utilitarianism").unwrap(),
            doe(),
            InfluenceThresholds::new(0, 0),
            "x",
            Some([PatientKind::Human, PatientKind::Nature].into()),
            &[],
        )
        .unwrap_err();
        assert_eq!(err.code(), "FIXED_FIELD_VIOLATION");
        // supplying the fixed set verbatim is fine
        assert!(instantiate(
            reg.get("utilitarianism").unwrap(),
            doe(),
            InfluenceThresholds::new(0, 0),
            "x",
            Some([PatientKind::Human].into()),
            &[],
        )
        .is_ok());
    }

    #[test]
    fn invalid_thresholds_surface() {
        let reg = Registry::builtin();
        let err = instantiate(
            reg.get("Kantianism").unwrap(),
            doe(),
            InfluenceThresholds::new(101, 0),
            "x",
            None,
            &[],
        )
        .unwrap_err();
        assert_eq!(err.code(), "INVALID_INSTANCE");
    }

    #[test]
    fn business_egoism_replaces_everything() {
        let reg = Registry::builtin();
        let ego = reg.get("egoism").unwrap();
        let mut edits: Vec<_> = [
            "socialWelfare",
            "environmentalProtection",
            "profitPerpetuation",
        ]
        .into_iter()
        .map(|s| PrincipleEdit::add(MoralPrinciple::good(Subject::Agent, s)))
        .collect();
        edits.extend(
            ego.default_principles
                .iter()
                .map(|p| PrincipleEdit::remove(p.specification.clone(), p.subject)),
        );
        let t = build("egoism", &edits).unwrap();
        assert_eq!(t.principles.len(), 3);
        assert!(check_conformance(&t, &reg).unwrap().is_empty());
    }

    #[test]
    fn conformance_discrepancies() {
        let reg = Registry::builtin();
        let mut kant = build("Kantianism", &[]).unwrap();
        assert!(check_conformance(&kant, &reg).unwrap().is_empty());
        kant.principles
            .push(MoralPrinciple::good(Subject::All, "honesty"));
        let r = check_conformance(&kant, &reg).unwrap();
        assert_eq!(r.codes(), vec![ViolationCode::NotReachable]);
        assert_eq!(r.iter().next().unwrap().path, "principles[2]");

        let mut dct = build("ChristianDivineCommandTheory", &[]).unwrap();
        dct.principles.retain(|p| p.specification != "kill");
        assert_eq!(
            check_conformance(&dct, &reg).unwrap().codes(),
            vec![ViolationCode::NotReachable]
        );

        let mut util = build("utilitarianism", &[]).unwrap();
        util.consequentiality = false;
        util.patient_kinds.insert(PatientKind::Nature);
        assert_eq!(
            check_conformance(&util, &reg).unwrap().codes(),
            vec![
                ViolationCode::ConsequentialityMismatch,
                ViolationCode::PatientKindsMismatch
            ]
        );

        util.base_theory = "stoicism".into();
        assert_eq!(
            check_conformance(&util, &reg).unwrap_err(),
            ConformanceError::UnknownBaseTheory("stoicism".into())
        );
    }

    #[test]
    fn morality_flip_is_not_reachable_under_remove() {
        let reg = Registry::builtin();
        let mut util = build("utilitarianism", &[]).unwrap();
        util.principles[2].morality = false;
        assert_eq!(
            check_conformance(&util, &reg).unwrap().codes(),
            vec![ViolationCode::NotReachable]
        );
    }

    #[test]
    fn template_file_errors() {
        let good = include_str!("../bases/kantianism.toml");
        assert!(BaseTheoryTemplate::from_toml("k", good).is_ok());
        let bad_version = good.replace("formatVersion = 1", "formatVersion = 2");
        assert!(matches!(
            BaseTheoryTemplate::from_toml("k", &bad_version),
            Err(RegistryError::UnsupportedVersion { found: 2, .. })
        ));
        let unknown_key = format!("{good}\nweight = 3\n");
        assert!(matches!(
            BaseTheoryTemplate::from_toml("k", &unknown_key),
            Err(RegistryError::Syntax { .. })
        ));
        let no_free = good.replace(
            "freeFields = [\"agent\", \"influenceThresholds\", \"instanceName\"]",
            "freeFields = [\"agent\"]",
        );
        assert!(matches!(
            BaseTheoryTemplate::from_toml("k", &no_free),
            Err(RegistryError::InvalidTemplate { .. })
        ));
        let dup = good
            .replace("mereMeans", "universallyWillable")
            .replace("morality = false", "morality = true");
        assert!(matches!(
            BaseTheoryTemplate::from_toml("k", &dup),
            Err(RegistryError::InvalidTemplate { .. })
        ));
    }

    #[test]
    fn duplicate_template_names() {
        let mut ts = builtin_bases();
        ts.push(ts[0].clone());
        assert!(matches!(
            Registry::from_templates(ts),
            Err(RegistryError::DuplicateName(_))
        ));
    }
}
