//! Completeness and consistency rules checked before code generation.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::metamodel::{find_element, ContractModel, ElementId, ElementRef, Parameter};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RuleId {
    V1,
    V2,
    V3,
    V4,
    V5,
    V6,
    V7,
}

impl RuleId {
    pub const ALL: [RuleId; 7] = [
        RuleId::V1,
        RuleId::V2,
        RuleId::V3,
        RuleId::V4,
        RuleId::V5,
        RuleId::V6,
        RuleId::V7,
    ];

    /// What the rule demands.
    pub fn description(self) -> &'static str {
        match self {
            RuleId::V1 => "A target platform must be specified.",
            RuleId::V2 => "A contract name must be specified.",
            RuleId::V3 => "Every asset must specify its type (tangible or intangible).",
            RuleId::V4 => "A unique identifier must be specified for an asset and participant.",
            RuleId::V5 => "Every relationship must relate to an existing participant or asset.",
            RuleId::V6 => "Parameter names must be unique within an element.",
            RuleId::V7 => "An identifier must name one of the element's own parameters.",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: RuleId,
    pub message: String,
    pub element: Option<ElementId>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.rule, self.message)
    }
}

fn violation(rule: RuleId, message: String, element: Option<ElementId>) -> Violation {
    Violation {
        rule,
        message,
        element,
    }
}

fn duplicate_params(params: &[Parameter]) -> Vec<&str> {
    let mut seen = HashSet::new();
    let mut dups = Vec::new();
    for p in params {
        if !seen.insert(p.name.to_lowercase()) {
            dups.push(p.name.as_str());
        }
    }
    dups
}

/// Checks every rule in order V1..V7 and returns all violations. Empty means valid.
pub fn validate(model: &ContractModel) -> Vec<Violation> {
    let mut out = Vec::new();

    if model.platform.is_none() {
        out.push(violation(RuleId::V1, RuleId::V1.description().into(), None));
    }
    if model.name.is_none() {
        out.push(violation(RuleId::V2, RuleId::V2.description().into(), None));
    }

    for a in &model.assets {
        if a.kind.is_none() {
            out.push(violation(
                RuleId::V3,
                format!(
                    "Please specify the type of the asset `{}` (tangible or intangible).",
                    a.name
                ),
                Some(ElementRef::Asset(a).id()),
            ));
        }
    }

    for e in model.elements() {
        if matches!(e, ElementRef::Transaction(_)) {
            continue;
        }
        if e.identifier().is_none() {
            out.push(violation(
                RuleId::V4,
                format!(
                    "A unique identifier must be specified for the {} `{}`.",
                    e.kind(),
                    e.name()
                ),
                Some(e.id()),
            ));
        }
    }

    for t in &model.transactions {
        for r in &t.relationships {
            let resolved = find_element(model, &r.target_name)
                .is_some_and(|e| e.kind() == r.target_kind.concept());
            if !resolved {
                out.push(violation(
                    RuleId::V5,
                    format!(
                        "The transaction `{}` relates to {} {} `{}` that does not exist.",
                        t.name,
                        r.target_kind.concept().article(),
                        r.target_kind.concept(),
                        r.target_name
                    ),
                    Some(ElementRef::Transaction(t).id()),
                ));
            }
        }
    }

    for e in model.elements() {
        for dup in duplicate_params(e.params()) {
            out.push(violation(
                RuleId::V6,
                format!(
                    "The parameter `{dup}` is declared more than once in `{}`.",
                    e.name()
                ),
                Some(e.id()),
            ));
        }
    }

    for e in model.elements() {
        if let Some(id) = e.identifier() {
            if !e.params().iter().any(|p| p.name == id) {
                out.push(violation(
                    RuleId::V7,
                    format!(
                        "The identifier `{id}` of `{}` is not one of its parameters.",
                        e.name()
                    ),
                    Some(e.id()),
                ));
            }
        }
    }

    out
}
