use std::collections::BTreeSet;

use roxmltree::{Document, Node};

use super::{GENET_NS, ROOT_ELEMENT, XSI_NS};
use crate::model::{
    is_uri_reference, EthicalTheoryInstance, InfluenceThresholds, MoralAgent, MoralPrinciple,
    PatientKind, Subject,
};
use crate::report::{ValidationReport, ViolationCode};

const SEQUENCE: [&str; 4] = ["agent", "patientKinds", "influenceThresholds", "principles"];
const XSI_ALLOWED: [&str; 2] = ["schemaLocation", "noNamespaceSchemaLocation"];

pub(crate) struct Decoded {
    pub instance: Option<EthicalTheoryInstance>,
    /// Violations of the schema itself.
    pub schema: ValidationReport,
    /// Model-level problems only visible while decoding (duplicate patient kinds).
    pub model: ValidationReport,
}

pub(crate) fn decode(bytes: &[u8]) -> Decoded {
    let mut d = Decoder::default();
    let instance = d.run(bytes);
    Decoded {
        instance: if d.schema.is_empty() { instance } else { None },
        schema: d.schema,
        model: d.model,
    }
}

#[derive(Default)]
struct Decoder {
    schema: ValidationReport,
    model: ValidationReport,
}

#[derive(Default)]
struct Parts {
    agent: Option<MoralAgent>,
    patient_kinds: Option<BTreeSet<PatientKind>>,
    thresholds: Option<InfluenceThresholds>,
    principles: Option<Vec<MoralPrinciple>>,
}

impl Decoder {
    fn run(&mut self, bytes: &[u8]) -> Option<EthicalTheoryInstance> {
        let text = match std::str::from_utf8(bytes) {
            Ok(t) => t,
            Err(e) => {
                self.schema.error(
                    ViolationCode::WellFormedness,
                    "document",
                    format!("not UTF-8: {e}"),
                );
                return None;
            }
        };
        let doc = match Document::parse(text) {
            Ok(doc) => doc,
            Err(e) => {
                self.schema
                    .error(ViolationCode::WellFormedness, "document", e.to_string());
                return None;
            }
        };
        let root = doc.root_element();
        if root.tag_name().namespace() != Some(GENET_NS) {
            self.schema.error(
                ViolationCode::NamespaceMismatch,
                ROOT_ELEMENT,
                format!(
                    "root element namespace is {}, expected {GENET_NS}",
                    root.tag_name().namespace().unwrap_or("(none)")
                ),
            );
            return None;
        }
        if root.tag_name().name() != ROOT_ELEMENT {
            self.schema.error(
                ViolationCode::UnexpectedElement,
                root.tag_name().name(),
                format!("root element must be {ROOT_ELEMENT}"),
            );
            return None;
        }

        self.check_attributes(
            root,
            "",
            &["baseTheory", "instanceName", "consequentiality"],
            true,
        );
        let base_theory = self
            .required(root, "baseTheory", "baseTheory")
            .map(str::to_owned);
        let instance_name = root.attribute("instanceName").map(str::to_owned);
        let consequentiality = self
            .required(root, "consequentiality", "consequentiality")
            .and_then(|v| self.boolean(v, "consequentiality"));

        let parts = self.sequence(root);

        Some(EthicalTheoryInstance {
            base_theory: base_theory?,
            instance_name,
            consequentiality: consequentiality?,
            agent: parts.agent?,
            patient_kinds: parts.patient_kinds?,
            influence_thresholds: parts.thresholds?,
            principles: parts.principles?,
        })
    }

    fn sequence(&mut self, root: Node) -> Parts {
        let mut parts = Parts::default();
        let mut next = 0;
        self.check_text(root, "");
        for child in root.children().filter(Node::is_element) {
            let Some(name) = self.genet_name(child, child.tag_name().name()) else {
                continue;
            };
            match SEQUENCE[next..].iter().position(|s| *s == name) {
                Some(offset) => {
                    for skipped in &SEQUENCE[next..next + offset] {
                        self.missing_element(skipped);
                    }
                    next += offset + 1;
                    match name {
                        "agent" => parts.agent = self.agent(child),
                        "patientKinds" => parts.patient_kinds = self.patient_kinds(child),
                        "influenceThresholds" => parts.thresholds = self.thresholds(child),
                        _ => parts.principles = self.principles(child),
                    }
                }
                None => {
                    let msg = if SEQUENCE.contains(&name) {
                        format!("element {name} is repeated or out of sequence (expected order: agent, patientKinds, influenceThresholds, principles)")
                    } else {
                        format!("unknown element {name}")
                    };
                    self.schema
                        .error(ViolationCode::UnexpectedElement, name, msg);
                }
            }
        }
        for missing in &SEQUENCE[next..] {
            self.missing_element(missing);
        }
        parts
    }

    fn missing_element(&mut self, name: &str) {
        self.schema.error(
            ViolationCode::MissingElement,
            name,
            format!("required element {name} is missing"),
        );
    }

    /// Local name of a child element, reporting foreign-namespace elements.
    fn genet_name<'a>(&mut self, node: Node<'a, '_>, path: &str) -> Option<&'a str> {
        if node.tag_name().namespace() != Some(GENET_NS) {
            self.schema.error(
                ViolationCode::NamespaceMismatch,
                path,
                format!(
                    "element {} is in namespace {}, expected {GENET_NS}",
                    node.tag_name().name(),
                    node.tag_name().namespace().unwrap_or("(none)")
                ),
            );
            return None;
        }
        Some(node.tag_name().name())
    }

    fn agent(&mut self, node: Node) -> Option<MoralAgent> {
        self.check_attributes(node, "agent", &["name", "reference"], false);
        self.check_empty(node, "agent");
        let name = self.required(node, "name", "agent.name");
        let reference = node.attribute("reference");
        if let Some(r) = reference {
            if !is_uri_reference(r) {
                self.schema.error(
                    ViolationCode::InvalidUri,
                    "agent.reference",
                    format!("`{r}` is not a valid anyURI"),
                );
            }
        }
        Some(MoralAgent {
            name: name?.to_owned(),
            reference: reference.map(str::to_owned),
        })
    }

    fn patient_kinds(&mut self, node: Node) -> Option<BTreeSet<PatientKind>> {
        self.check_attributes(node, "patientKinds", &[], false);
        self.check_text(node, "patientKinds");
        let mut kinds = Vec::new();
        let mut ok = true;
        for (i, child) in node.children().filter(Node::is_element).enumerate() {
            let path = format!("patientKinds[{i}]");
            match self.genet_name(child, &path) {
                Some("patientKind") => {}
                Some(other) => {
                    self.schema.error(
                        ViolationCode::UnexpectedElement,
                        &path,
                        format!("unexpected element {other}; only patientKind is allowed"),
                    );
                    ok = false;
                    continue;
                }
                None => {
                    ok = false;
                    continue;
                }
            }
            self.check_attributes(child, &path, &[], false);
            let Some(text) = self.simple_content(child, &path) else {
                ok = false;
                continue;
            };
            match text.parse::<PatientKind>() {
                Ok(kind) => {
                    if kinds.contains(&kind) {
                        self.model.error(
                            ViolationCode::DuplicatePatientKind,
                            &path,
                            format!("patient kind {kind} listed twice"),
                        );
                    }
                    kinds.push(kind);
                }
                Err(e) => {
                    self.schema
                        .error(ViolationCode::InvalidEnumeration, &path, e.to_string());
                    ok = false;
                }
            }
        }
        if node.children().filter(Node::is_element).count() == 0 {
            self.schema.error(
                ViolationCode::MinOccurs,
                "patientKinds",
                "patientKinds requires at least one patientKind",
            );
            ok = false;
        }
        ok.then(|| kinds.into_iter().collect())
    }

    fn thresholds(&mut self, node: Node) -> Option<InfluenceThresholds> {
        self.check_attributes(
            node,
            "influenceThresholds",
            &["external", "substance"],
            false,
        );
        self.check_empty(node, "influenceThresholds");
        let external = self.percentage(node, "external");
        let substance = self.percentage(node, "substance");
        Some(InfluenceThresholds {
            external: external?,
            substance: substance?,
        })
    }

    fn percentage(&mut self, node: Node, attr: &str) -> Option<u8> {
        let path = format!("influenceThresholds.{attr}");
        let raw = self.required(node, attr, &path)?;
        let value = raw.trim_matches(|c| matches!(c, ' ' | '\t' | '\n' | '\r'));
        let digits = value.strip_prefix(['+', '-']).unwrap_or(value);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            self.schema.error(
                ViolationCode::InvalidInteger,
                &path,
                format!("`{raw}` is not an integer"),
            );
            return None;
        }
        // Anything too long for i128 is certainly outside 0..=100.
        match value.parse::<i128>() {
            Ok(n) if (0..=100).contains(&n) => Some(n as u8),
            _ => {
                self.schema.error(
                    ViolationCode::PercentOutOfRange,
                    &path,
                    format!("{value} is outside 0..=100"),
                );
                None
            }
        }
    }

    fn principles(&mut self, node: Node) -> Option<Vec<MoralPrinciple>> {
        self.check_attributes(node, "principles", &[], false);
        self.check_text(node, "principles");
        let mut out = Vec::new();
        let mut ok = true;
        for (i, child) in node.children().filter(Node::is_element).enumerate() {
            let path = format!("principles[{i}]");
            match self.genet_name(child, &path) {
                Some("principle") => {}
                Some(other) => {
                    self.schema.error(
                        ViolationCode::UnexpectedElement,
                        &path,
                        format!("unexpected element {other}; only principle is allowed"),
                    );
                    ok = false;
                    continue;
                }
                None => {
                    ok = false;
                    continue;
                }
            }
            match self.principle(child, &path) {
                Some(p) => out.push(p),
                None => ok = false,
            }
        }
        if node.children().filter(Node::is_element).count() == 0 {
            self.schema.error(
                ViolationCode::MinOccurs,
                "principles",
                "principles requires at least one principle",
            );
            ok = false;
        }
        ok.then_some(out)
    }

    fn principle(&mut self, node: Node, path: &str) -> Option<MoralPrinciple> {
        self.check_attributes(node, path, &["morality", "subject", "specification"], false);
        self.check_empty(node, path);
        let morality = self
            .required(node, "morality", &format!("{path}.morality"))
            .and_then(|v| self.boolean(v, &format!("{path}.morality")));
        let subject = self
            .required(node, "subject", &format!("{path}.subject"))
            .and_then(|v| {
                v.parse::<Subject>()
                    .map_err(|e| {
                        self.schema.error(
                            ViolationCode::InvalidEnumeration,
                            format!("{path}.subject"),
                            e.to_string(),
                        )
                    })
                    .ok()
            });
        let specification = self.required(node, "specification", &format!("{path}.specification"));
        Some(MoralPrinciple {
            morality: morality?,
            subject: subject?,
            specification: specification?.to_owned(),
        })
    }

    fn required<'a>(&mut self, node: Node<'a, '_>, attr: &str, path: &str) -> Option<&'a str> {
        let value = node.attribute(attr);
        if value.is_none() {
            self.schema.error(
                ViolationCode::MissingAttribute,
                path,
                format!("required attribute {attr} is missing"),
            );
        }
        value
    }

    fn boolean(&mut self, raw: &str, path: &str) -> Option<bool> {
        match raw.trim_matches(|c| matches!(c, ' ' | '\t' | '\n' | '\r')) {
            "true" | "1" => Some(true),
            "false" | "0" => Some(false),
            _ => {
                self.schema.error(
                    ViolationCode::InvalidBoolean,
                    path,
                    format!("`{raw}` is not a boolean"),
                );
                None
            }
        }
    }

    fn check_attributes(&mut self, node: Node, path: &str, allowed: &[&str], allow_xsi: bool) {
        for attr in node.attributes() {
            let known = match attr.namespace() {
                None => allowed.contains(&attr.name()),
                Some(XSI_NS) => allow_xsi && XSI_ALLOWED.contains(&attr.name()),
                Some(_) => false,
            };
            if !known {
                let name = match attr.namespace() {
                    Some(ns) => format!("{{{ns}}}{}", attr.name()),
                    None => attr.name().to_owned(),
                };
                let at = if path.is_empty() {
                    name.clone()
                } else {
                    format!("{path}.{name}")
                };
                self.schema.error(
                    ViolationCode::UnknownAttribute,
                    at,
                    format!("attribute {name} is not allowed here"),
                );
            }
        }
    }

    /// Element-only content: whitespace is fine, anything else is not.
    fn check_text(&mut self, node: Node, path: &str) {
        for child in node.children().filter(Node::is_text) {
            if child.text().is_some_and(|t| !t.trim().is_empty()) {
                let at = if path.is_empty() { ROOT_ELEMENT } else { path };
                self.schema.error(
                    ViolationCode::UnexpectedText,
                    at,
                    "character data is not allowed in element-only content",
                );
                return;
            }
        }
    }

    fn check_empty(&mut self, node: Node, path: &str) {
        self.check_text(node, path);
        for child in node.children().filter(Node::is_element) {
            self.schema.error(
                ViolationCode::UnexpectedElement,
                path,
                format!(
                    "element {} is not allowed inside {path}",
                    child.tag_name().name()
                ),
            );
        }
    }

    fn simple_content(&mut self, node: Node, path: &str) -> Option<String> {
        if node.children().any(|c| c.is_element()) {
            self.schema.error(
                ViolationCode::UnexpectedElement,
                path,
                "elements are not allowed in simple content",
            );
            return None;
        }
        Some(
            node.children()
                .filter_map(|c| c.is_text().then(|| c.text()).flatten())
                .collect(),
        )
    }
}
