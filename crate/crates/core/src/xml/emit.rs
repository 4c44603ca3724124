use std::fmt::Write;

use super::{GENET_NS, ROOT_ELEMENT, XSI_NS};
use crate::model::EthicalTheoryInstance;

const INDENT: &str = "    ";

pub(crate) fn render(t: &EthicalTheoryInstance) -> String {
    let mut out = String::with_capacity(1024);
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = write!(
        out,
        "<{ROOT_ELEMENT} xmlns=\"{GENET_NS}\" xmlns:xsi=\"{XSI_NS}\" xsi:schemaLocation=\"{GENET_NS} ethicalTheory.xsd\" baseTheory=\"{}\"",
        escape(&t.base_theory)
    );
    if let Some(name) = &t.instance_name {
        let _ = write!(out, " instanceName=\"{}\"", escape(name));
    }
    let _ = writeln!(out, " consequentiality=\"{}\">", t.consequentiality);

    let _ = write!(out, "{INDENT}<agent name=\"{}\"", escape(&t.agent.name));
    if let Some(reference) = &t.agent.reference {
        let _ = write!(out, " reference=\"{}\"", escape(reference));
    }
    out.push_str("/>\n");

    let _ = writeln!(out, "{INDENT}<patientKinds>");
    for kind in &t.patient_kinds {
        let _ = writeln!(out, "{INDENT}{INDENT}<patientKind>{kind}</patientKind>");
    }
    let _ = writeln!(out, "{INDENT}</patientKinds>");

    let _ = writeln!(
        out,
        "{INDENT}<influenceThresholds external=\"{}\" substance=\"{}\"/>",
        t.influence_thresholds.external, t.influence_thresholds.substance
    );

    let _ = writeln!(out, "{INDENT}<principles>");
    for p in &t.principles {
        let _ = writeln!(
            out,
            "{INDENT}{INDENT}<principle morality=\"{}\" subject=\"{}\" specification=\"{}\"/>",
            p.morality,
            p.subject,
            escape(&p.specification)
        );
    }
    let _ = writeln!(out, "{INDENT}</principles>");
    let _ = writeln!(out, "</{ROOT_ELEMENT}>");
    out
}

/// Attribute-value escaping. Whitespace other than the space character is
/// written as a character reference so attribute normalisation on re-read
/// leaves it intact.
fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\t' => out.push_str("&#9;"),
            '\n' => out.push_str("&#10;"),
            '\r' => out.push_str("&#13;"),
            c => out.push(c),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escapes() {
        assert_eq!(
            escape("a&b<c>\"d\"\te\nf\rg'"),
            "a&amp;b&lt;c&gt;&quot;d&quot;&#9;e&#10;f&#13;g'"
        );
    }
}
