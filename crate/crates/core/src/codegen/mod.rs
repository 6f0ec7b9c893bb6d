//! Model-to-text transformation.
//!
//! Each platform has an emitter that fills the templates under `templates/`.
//! [`generate`] refuses invalid models and checks every artifact it produces
//! (balanced delimiters, no leftover slots, every transaction declared) before
//! handing it back.

mod azure;
mod composer;
pub mod sanity;
mod solidity;
pub mod template;

use std::collections::HashSet;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metamodel::{
    find_element, ConceptKind, ContractModel, DataType, PlatformTarget, Transaction,
};
use crate::validator::{validate, Violation};

pub use template::{LineRange, Provenance, Rendered};

/// One generated file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratedArtifact {
    pub filename: String,
    pub content: String,
    pub platform: PlatformTarget,
    pub provenance: Vec<Provenance>,
}

impl GeneratedArtifact {
    pub fn extension(&self) -> &str {
        self.filename.rsplit_once('.').map_or("", |(_, ext)| ext)
    }

    /// `<platform slug>/<filename>`, relative to an output directory.
    pub fn relative_path(&self) -> PathBuf {
        PathBuf::from(self.platform.slug()).join(&self.filename)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodegenError {
    #[error("the model is not valid:\n{}", render_violations(.0))]
    InvalidModel(Vec<Violation>),
    #[error("template `{template}` has no value for slot `{slot}`")]
    Template {
        template: &'static str,
        slot: String,
    },
    #[error("generated `{filename}` failed the sanity check: {reason}")]
    Sanity { filename: String, reason: String },
}

fn render_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("\n")
}

/// Platform type token for a model data type.
///
/// Azure contracts are Solidity, so Azure shares the Ethereum tokens; the
/// Workbench document uses [`workbench_type`].
pub fn datatype_map(dtype: DataType, platform: PlatformTarget) -> &'static str {
    match platform {
        PlatformTarget::Ethereum | PlatformTarget::AzureWorkbench => match dtype {
            DataType::StringType => "bytes32",
            DataType::IntegerType => "int256",
            DataType::DecimalType => "int256",
            DataType::BooleanType => "bool",
            DataType::AddressType => "address",
        },
        PlatformTarget::HyperledgerComposer => match dtype {
            DataType::StringType => "String",
            DataType::IntegerType => "Integer",
            DataType::DecimalType => "Double",
            DataType::BooleanType => "Boolean",
            DataType::AddressType => "String",
        },
    }
}

/// Type name in an Azure Workbench configuration document.
pub fn workbench_type(dtype: DataType) -> &'static str {
    match dtype {
        DataType::StringType => "string",
        DataType::IntegerType => "int",
        DataType::DecimalType => "money",
        DataType::BooleanType => "bool",
        DataType::AddressType => "address",
    }
}

/// Comment attached to Solidity decimals, which have no native fixed-point type.
pub const DECIMAL_NOTE: &str = "fixed-point decimal, scaled by 10**18";

/// What each concept becomes on a platform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TemplateRuleSet {
    pub platform: PlatformTarget,
}

impl TemplateRuleSet {
    pub fn for_platform(platform: PlatformTarget) -> Self {
        TemplateRuleSet { platform }
    }

    pub fn emission(&self, kind: ConceptKind) -> &'static str {
        use ConceptKind::*;
        match (self.platform, kind) {
            (PlatformTarget::HyperledgerComposer, Contract) => "namespace org.<contract>",
            (PlatformTarget::HyperledgerComposer, Participant) => {
                "participant <Name> identified by <identifier>"
            }
            (PlatformTarget::HyperledgerComposer, Asset) => {
                "asset <Name> identified by <identifier>"
            }
            (PlatformTarget::HyperledgerComposer, Transaction) => {
                "transaction <Name> plus a processor function"
            }
            (PlatformTarget::HyperledgerComposer, Parameter) => "o <Type> <name>",
            (PlatformTarget::HyperledgerComposer, Relationship) => "--> <Target> <target>",
            (PlatformTarget::AzureWorkbench, Contract) => "application, workflow and contract",
            (PlatformTarget::AzureWorkbench, Participant) => "application role and user property",
            (PlatformTarget::AzureWorkbench, Asset) => "workflow properties and struct",
            (PlatformTarget::AzureWorkbench, Transaction) => "workflow function and transition",
            (PlatformTarget::AzureWorkbench, Parameter) => "typed property or function parameter",
            (PlatformTarget::AzureWorkbench, Relationship) => {
                "function parameter holding the target identifier"
            }
            (PlatformTarget::Ethereum, Contract) => "contract <Name>{ constructor }",
            (PlatformTarget::Ethereum, Participant) => "struct <Name>{ fields }",
            (PlatformTarget::Ethereum, Asset) => "struct <Name>{ fields }",
            (PlatformTarget::Ethereum, Transaction) => "function <name>(params) public",
            (PlatformTarget::Ethereum, Parameter) => "<type> <name>;",
            (PlatformTarget::Ethereum, Relationship) => {
                "function parameter holding the target identifier"
            }
        }
    }

    pub fn datatype(&self, dtype: DataType) -> &'static str {
        datatype_map(dtype, self.platform)
    }
}

/// `patient` -> `Patient`.
pub(crate) fn type_name(name: &str) -> String {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// `Patient` -> `patient`.
pub(crate) fn lower_first(name: &str) -> String {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) => c.to_lowercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// `updateRecord` -> `Update Record`.
pub(crate) fn display_name(name: &str) -> String {
    let mut out = String::new();
    for (i, c) in name.chars().enumerate() {
        if i == 0 {
            out.extend(c.to_uppercase());
        } else if c == '_' {
            out.push(' ');
        } else {
            if c.is_uppercase() && !out.ends_with(' ') {
                out.push(' ');
            }
            out.push(c);
        }
    }
    out
}

/// Appends a numeric suffix until `name` is not in `taken`.
pub(crate) fn unique_name(name: String, taken: &mut HashSet<String>) -> String {
    if taken.insert(name.clone()) {
        return name;
    }
    let mut n = 2;
    loop {
        let candidate = format!("{name}{n}");
        if taken.insert(candidate.clone()) {
            return candidate;
        }
        n += 1;
    }
}

/// Call parameters of a transaction: its own parameters, then one per
/// relationship carrying the target's identifier (`record` identified by `id`
/// becomes `recordId`).
pub(crate) fn call_params(model: &ContractModel, tx: &Transaction) -> Vec<(String, DataType)> {
    let mut taken = HashSet::new();
    let mut out = Vec::new();
    for p in &tx.params {
        out.push((unique_name(p.name.clone(), &mut taken), p.dtype));
    }
    for r in &tx.relationships {
        let (base, dtype) = match find_element(model, &r.target_name) {
            Some(target) => {
                let ident = target.identifier().unwrap_or("id");
                let dtype = target
                    .params()
                    .iter()
                    .find(|p| p.name == ident)
                    .map_or(DataType::StringType, |p| p.dtype);
                (
                    format!("{}{}", lower_first(target.name()), type_name(ident)),
                    dtype,
                )
            }
            None => (
                format!("{}Id", lower_first(&r.target_name)),
                DataType::StringType,
            ),
        };
        out.push((unique_name(base, &mut taken), dtype));
    }
    out
}

fn artifact(platform: PlatformTarget, filename: String, rendered: Rendered) -> GeneratedArtifact {
    GeneratedArtifact {
        filename,
        content: rendered.text,
        platform,
        provenance: rendered.provenance,
    }
}

/// Generates the artifact set for `platform`. The model's own platform is
/// ignored, so one model can be compiled for every target.
pub fn generate(
    model: &ContractModel,
    platform: PlatformTarget,
) -> Result<Vec<GeneratedArtifact>, CodegenError> {
    let violations = validate(model);
    if !violations.is_empty() {
        return Err(CodegenError::InvalidModel(violations));
    }
    let name = model.name.as_deref().unwrap_or_default();
    let artifacts = match platform {
        PlatformTarget::Ethereum => vec![artifact(
            platform,
            format!("{name}.sol"),
            solidity::emit(model)?,
        )],
        PlatformTarget::HyperledgerComposer => vec![
            artifact(
                platform,
                format!("{name}.cto"),
                composer::emit_model(model)?,
            ),
            artifact(platform, format!("{name}.js"), composer::emit_logic(model)?),
        ],
        PlatformTarget::AzureWorkbench => vec![
            artifact(platform, format!("{name}.json"), azure::emit(model)?),
            artifact(platform, format!("{name}.sol"), solidity::emit(model)?),
        ],
    };
    for a in &artifacts {
        sanity::check_artifact(a).map_err(|reason| CodegenError::Sanity {
            filename: a.filename.clone(),
            reason,
        })?;
    }
    for tx in &model.transactions {
        if !artifacts
            .iter()
            .any(|a| sanity::declares_transaction(a, &tx.name))
        {
            return Err(CodegenError::Sanity {
                filename: format!("{}/*", platform.slug()),
                reason: format!("transaction `{}` is not declared", tx.name),
            });
        }
    }
    Ok(artifacts)
}

/// Generates all three platforms in parallel, in [`PlatformTarget::ALL`] order.
pub fn generate_all(model: &ContractModel) -> Result<Vec<GeneratedArtifact>, CodegenError> {
    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = PlatformTarget::ALL
            .iter()
            .map(|&p| s.spawn(move || generate(model, p)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("generator thread panicked"))
            .collect()
    });
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}
