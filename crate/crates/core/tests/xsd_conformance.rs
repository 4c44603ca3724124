//! The hand-written checker against the schema text shipped with the crate.

mod common;

use std::collections::BTreeMap;

use genet::model::{PatientKind, Subject};
use genet::xml::{emit_theory, schema_check, GENET_NS, SCHEMA_XSD};
use genet::ViolationCode;
use roxmltree::{Document, Node};

const XS: &str = "http://www.w3.org/2001/XMLSchema";

fn xs<'a, 'i>(n: &Node<'a, 'i>, name: &str) -> bool {
    n.is_element() && n.tag_name().namespace() == Some(XS) && n.tag_name().name() == name
}

fn named<'a, 'i>(doc: &'a Document<'i>, kind: &str, name: &str) -> Node<'a, 'i> {
    doc.descendants()
        .find(|n| xs(n, kind) && n.attribute("name") == Some(name))
        .unwrap_or_else(|| panic!("no xs:{kind} named {name}"))
}

fn enumeration(node: Node) -> Vec<String> {
    node.descendants()
        .filter(|n| xs(n, "enumeration"))
        .map(|n| n.attribute("value").unwrap().to_owned())
        .collect()
}

/// Attributes declared directly on a complex type, with their `use` flag.
fn attributes(node: Node) -> BTreeMap<String, bool> {
    node.children()
        .filter(|n| xs(n, "attribute"))
        .map(|n| {
            (
                n.attribute("name").unwrap().to_owned(),
                n.attribute("use") == Some("required"),
            )
        })
        .collect()
}

fn sample() -> String {
    let t = common::theory_fixture("mia-kantianism");
    String::from_utf8(emit_theory(&t).unwrap().into_bytes()).unwrap()
}

#[test]
fn target_namespace() {
    let doc = Document::parse(SCHEMA_XSD).unwrap();
    assert_eq!(
        doc.root_element().attribute("targetNamespace"),
        Some(GENET_NS)
    );
    assert_eq!(
        doc.root_element().attribute("elementFormDefault"),
        Some("qualified")
    );
}

#[test]
fn enumerations_match() {
    let doc = Document::parse(SCHEMA_XSD).unwrap();
    let kinds: Vec<_> = PatientKind::ALL
        .iter()
        .map(|k| k.as_str().to_owned())
        .collect();
    assert_eq!(
        enumeration(named(&doc, "simpleType", "moralPatientKind")),
        kinds
    );
    let subjects: Vec<_> = Subject::ALL.iter().map(|s| s.as_str().to_owned()).collect();
    let subject = named(&doc, "attribute", "subject");
    assert_eq!(enumeration(subject), subjects);
}

#[test]
fn percentage_bounds_match() {
    let doc = Document::parse(SCHEMA_XSD).unwrap();
    let pct = named(&doc, "simpleType", "percentage");
    let bound = |kind| {
        pct.descendants()
            .find(|n| xs(n, kind))
            .and_then(|n| n.attribute("value"))
            .unwrap()
            .parse::<i64>()
            .unwrap()
    };
    let (lo, hi) = (bound("minInclusive"), bound("maxInclusive"));
    let doc = sample();
    for v in [lo - 1, lo, hi, hi + 1] {
        let report = schema_check(
            doc.replace("external=\"0\"", &format!("external=\"{v}\""))
                .as_bytes(),
        );
        let inside = (lo..=hi).contains(&v);
        assert_eq!(report.is_empty(), inside, "external={v}: {report}");
        if !inside {
            assert_eq!(report.codes(), [ViolationCode::PercentOutOfRange]);
        }
    }
}

#[test]
fn root_sequence_matches() {
    let doc = Document::parse(SCHEMA_XSD).unwrap();
    let seq = named(&doc, "complexType", "ethicalTheory")
        .children()
        .find(|n| xs(n, "sequence"))
        .unwrap();
    let names: Vec<_> = seq
        .children()
        .filter(|n| xs(n, "element"))
        .map(|n| n.attribute("name").unwrap())
        .collect();
    assert_eq!(
        names,
        ["agent", "patientKinds", "influenceThresholds", "principles"]
    );

    // Dropping any one of them is reported.
    let sample = sample();
    for name in names {
        let parsed = Document::parse(&sample).unwrap();
        let el = parsed
            .descendants()
            .find(|n| n.tag_name().name() == name)
            .unwrap();
        let cut = format!(
            "{}{}",
            &sample[..el.range().start],
            &sample[el.range().end..]
        );
        assert!(
            schema_check(cut.as_bytes()).contains(ViolationCode::MissingElement),
            "without {name}"
        );
    }
}

#[test]
fn required_attributes_match() {
    let doc = Document::parse(SCHEMA_XSD).unwrap();
    // complex type -> element carrying it in an emitted document
    let carriers = [
        ("ethicalTheory", "ethicalTheory"),
        ("moralAgent", "agent"),
        ("influencesType", "influenceThresholds"),
        ("moralPrincipleType", "principle"),
    ];
    let sample = sample();
    for (ty, element) in carriers {
        let declared = attributes(named(&doc, "complexType", ty));
        assert!(!declared.is_empty(), "{ty}");
        for (attr, required) in declared {
            let parsed = Document::parse(&sample).unwrap();
            let el = parsed
                .descendants()
                .find(|n| n.tag_name().name() == element)
                .unwrap();
            let a = el
                .attribute_node(attr.as_str())
                .unwrap_or_else(|| panic!("sample lacks {element}@{attr}"));
            let span = a.range();
            let cut = format!("{}{}", &sample[..span.start], &sample[span.end..]);
            let report = schema_check(cut.as_bytes());
            if required {
                assert_eq!(
                    report.codes(),
                    [ViolationCode::MissingAttribute],
                    "{element}@{attr}"
                );
            } else {
                assert!(report.is_empty(), "{element}@{attr} is optional: {report}");
            }
        }
    }
}

#[test]
fn min_occurs_match() {
    let doc = Document::parse(SCHEMA_XSD).unwrap();
    let sample = sample();
    for (child, parent) in [("patientKind", "patientKinds"), ("principle", "principles")] {
        let decl = named(&doc, "element", child);
        assert_eq!(decl.attribute("minOccurs"), Some("1"));
        assert_eq!(decl.attribute("maxOccurs"), Some("unbounded"));
        let open = format!("<{parent}>");
        let close = format!("</{parent}>");
        let start = sample.find(&open).unwrap() + open.len();
        let end = sample.find(&close).unwrap();
        let emptied = format!("{}{}", &sample[..start], &sample[end..]);
        assert_eq!(
            schema_check(emptied.as_bytes()).codes(),
            [ViolationCode::MinOccurs],
            "{parent}"
        );
    }
}
