use std::fmt::Write;

use super::{ActionEvaluation, Decision, DecisionKind};

/// One-line summary: `T1: obligatoryBest (score 1)`.
fn summary(e: &ActionEvaluation) -> String {
    match e.score {
        Some(score) => format!("{}: {} (score {score})", e.action, e.verdict),
        None => format!("{}: {}", e.action, e.verdict),
    }
}

/// Plain-text evaluation. With `explain`, the full trace follows the summary
/// and the last line is `  conclusion: <text>`.
pub fn render_evaluation_text(e: &ActionEvaluation, explain: bool) -> String {
    let mut out = summary(e);
    out.push('\n');
    if explain {
        let t = &e.trace;
        for p in &t.premises {
            let _ = writeln!(
                out,
                "  {} [{}] {}  ({})",
                p.id,
                p.kind.as_str(),
                p.text,
                p.source
            );
        }
        for i in &t.inferences {
            let _ = writeln!(out, "  {} <- {}: {}", i.id, i.from.join(" "), i.text);
        }
        for w in &t.warnings {
            let _ = writeln!(out, "  warning: {w}");
        }
        let _ = writeln!(out, "  conclusion: {}", t.conclusion);
    }
    out
}

/// Plain-text decision. The first line is `<kind>: <ids>`.
pub fn render_decision_text(d: &Decision, explain: bool) -> String {
    let ids = match d.kind {
        DecisionKind::Conflict => &d.contenders,
        _ => &d.chosen,
    };
    let mut out = format!("{}: {}\n", d.kind, ids.join(" "));
    for e in &d.evaluations {
        let _ = writeln!(out, "{}", summary(e));
    }
    for w in &d.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    if explain {
        for e in &d.evaluations {
            out.push('\n');
            out.push_str(&render_evaluation_text(e, true));
        }
    }
    out
}

pub fn render_evaluation_json(e: &ActionEvaluation) -> String {
    let mut s = serde_json::to_string_pretty(e).expect("evaluation serialises");
    s.push('\n');
    s
}

pub fn render_decision_json(d: &Decision) -> String {
    let mut s = serde_json::to_string_pretty(d).expect("decision serialises");
    s.push('\n');
    s
}
