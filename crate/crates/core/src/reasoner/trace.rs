use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum PremiseKind {
    /// A fact about the scenario.
    SituationalFact,
    /// A principle of the theory.
    TheoryPrinciple,
    /// A request or one of the theory's influence thresholds.
    ThresholdFact,
}

impl PremiseKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PremiseKind::SituationalFact => "situationalFact",
            PremiseKind::TheoryPrinciple => "theoryPrinciple",
            PremiseKind::ThresholdFact => "thresholdFact",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Premise {
    pub id: String,
    pub kind: PremiseKind,
    pub text: String,
    /// Dotted path into the scenario or theory this premise came from.
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Inference {
    pub id: String,
    /// Ids of earlier premises or inferences.
    pub from: Vec<String>,
    pub text: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum ContributionStatus {
    /// Added to the score.
    Counted,
    /// Positive, request-derived and gated: moved to the supererogation ledger.
    Diverted,
    /// The target's patient kind is not considered by the theory.
    Excluded,
    /// No principle matches the specification for the target.
    Inert,
}

/// How one effect (under one matching principle) bears on a score.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Contribution {
    pub effect: usize,
    pub principle: Option<usize>,
    /// Signed contribution before gating or exclusion; zero when inert or excluded.
    pub value: i64,
    pub status: ContributionStatus,
}

/// The argument behind one action's verdict.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ArgumentTrace {
    pub premises: Vec<Premise>,
    pub inferences: Vec<Inference>,
    pub conclusion: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub contributions: Vec<Contribution>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl ArgumentTrace {
    pub(crate) fn premise(
        &mut self,
        kind: PremiseKind,
        text: impl Into<String>,
        source: impl Into<String>,
    ) -> String {
        let id = format!("P{}", self.premises.len() + 1);
        self.premises.push(Premise {
            id: id.clone(),
            kind,
            text: text.into(),
            source: source.into(),
        });
        id
    }

    pub(crate) fn infer(&mut self, from: &[String], text: impl Into<String>) -> String {
        let id = format!("S{}", self.inferences.len() + 1);
        self.inferences.push(Inference {
            id: id.clone(),
            from: from.to_vec(),
            text: text.into(),
        });
        id
    }

    pub fn last_inference(&self) -> Option<&Inference> {
        self.inferences.last()
    }

    /// Sum of counted contributions.
    pub fn counted_total(&self) -> i64 {
        self.contributions
            .iter()
            .filter(|c| c.status == ContributionStatus::Counted)
            .map(|c| c.value)
            .sum()
    }

    /// Sum of contributions moved to the supererogation ledger.
    pub fn diverted_total(&self) -> i64 {
        self.contributions
            .iter()
            .filter(|c| c.status == ContributionStatus::Diverted)
            .map(|c| c.value)
            .sum()
    }

    /// True when every inference cites at least one id defined before it.
    pub fn is_well_founded(&self) -> bool {
        let mut known: Vec<&str> = self.premises.iter().map(|p| p.id.as_str()).collect();
        for inf in &self.inferences {
            if inf.from.is_empty() || !inf.from.iter().all(|f| known.contains(&f.as_str())) {
                return false;
            }
            known.push(&inf.id);
        }
        true
    }
}
