//! Hyperledger Composer emitter: a `.cto` model plus a processor script.

use std::collections::HashSet;
use std::sync::OnceLock;

use super::template::{Rendered, Template};
use super::{datatype_map, lower_first, type_name, unique_name, CodegenError};
use crate::metamodel::{find_element, ContractModel, ElementRef, Parameter, PlatformTarget};

struct Templates {
    model: Template,
    participant: Template,
    asset: Template,
    transaction: Template,
    logic: Template,
    function: Template,
}

fn templates() -> &'static Templates {
    static T: OnceLock<Templates> = OnceLock::new();
    T.get_or_init(|| Templates {
        model: Template::parse(
            "composer/model",
            include_str!("../../templates/composer/model.tpl"),
        ),
        participant: Template::parse(
            "composer/participant",
            include_str!("../../templates/composer/participant.tpl"),
        ),
        asset: Template::parse(
            "composer/asset",
            include_str!("../../templates/composer/asset.tpl"),
        ),
        transaction: Template::parse(
            "composer/transaction",
            include_str!("../../templates/composer/transaction.tpl"),
        ),
        logic: Template::parse(
            "composer/logic",
            include_str!("../../templates/composer/logic.tpl"),
        ),
        function: Template::parse(
            "composer/function",
            include_str!("../../templates/composer/function.tpl"),
        ),
    })
}

pub(super) fn namespace(model: &ContractModel) -> String {
    format!(
        "org.{}",
        model.name.as_deref().unwrap_or_default().to_lowercase()
    )
}

fn field_lines(params: &[Parameter], identifier: Option<&str>) -> String {
    let mut out = String::new();
    for p in params {
        let ty = datatype_map(p.dtype, PlatformTarget::HyperledgerComposer);
        if identifier == Some(p.name.as_str()) && ty != "String" {
            // `identified by` fields must be Strings in Composer.
            out.push_str(&format!(
                "  // {} is {} in the model; Composer identifiers are Strings\n  o String {}\n",
                p.name, ty, p.name
            ));
        } else {
            out.push_str(&format!("  o {ty} {}\n", p.name));
        }
    }
    out
}

pub(super) fn emit_model(model: &ContractModel) -> Result<Rendered, CodegenError> {
    let t = templates();
    let mut decls = Vec::new();
    for p in &model.participants {
        let e = ElementRef::Participant(p);
        let r = t.participant.render(vec![
            ("type_name", type_name(&p.name).into()),
            (
                "identifier",
                p.identifier.as_deref().unwrap_or_default().into(),
            ),
            (
                "fields",
                field_lines(&p.params, p.identifier.as_deref()).into(),
            ),
        ])?;
        decls.push(r.owned_by(e.id()));
    }
    for a in &model.assets {
        let e = ElementRef::Asset(a);
        let kind = a.kind.map_or("", |k| k.dsl_token()).to_lowercase();
        let r = t.asset.render(vec![
            ("kind", kind.into()),
            ("type_name", type_name(&a.name).into()),
            (
                "identifier",
                a.identifier.as_deref().unwrap_or_default().into(),
            ),
            (
                "fields",
                field_lines(&a.params, a.identifier.as_deref()).into(),
            ),
        ])?;
        decls.push(r.owned_by(e.id()));
    }
    for tx in &model.transactions {
        let mut fields = field_lines(&tx.params, None);
        let mut taken: HashSet<String> = tx.params.iter().map(|p| p.name.clone()).collect();
        for r in &tx.relationships {
            let target =
                find_element(model, &r.target_name).map_or(r.target_name.as_str(), |e| e.name());
            let field = unique_name(lower_first(target), &mut taken);
            fields.push_str(&format!("  --> {} {field}\n", type_name(target)));
        }
        let r = t.transaction.render(vec![
            ("type_name", type_name(&tx.name).into()),
            ("fields", fields.into()),
        ])?;
        decls.push(r.owned_by(ElementRef::Transaction(tx).id()));
    }
    let r = t.model.render(vec![
        ("contract", model.name.as_deref().unwrap_or_default().into()),
        ("namespace", namespace(model).into()),
        ("declarations", Rendered::join(decls, "").into()),
    ])?;
    Ok(match model.contract_id() {
        Some(id) => r.owned_by(id),
        None => r,
    })
}

pub(super) fn emit_logic(model: &ContractModel) -> Result<Rendered, CodegenError> {
    let t = templates();
    let ns = namespace(model);
    let mut functions = Vec::new();
    for tx in &model.transactions {
        let r = t.function.render(vec![
            ("type_name", type_name(&tx.name).into()),
            ("namespace", ns.as_str().into()),
            ("function_name", lower_first(&tx.name).into()),
        ])?;
        functions.push(r.owned_by(ElementRef::Transaction(tx).id()));
    }
    let r = t.logic.render(vec![
        ("contract", model.name.as_deref().unwrap_or_default().into()),
        ("functions", Rendered::join(functions, "").into()),
    ])?;
    Ok(match model.contract_id() {
        Some(id) => r.owned_by(id),
        None => r,
    })
}
