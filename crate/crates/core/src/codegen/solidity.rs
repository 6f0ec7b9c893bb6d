//! Ethereum Solidity emitter.

use std::sync::OnceLock;

use super::template::{Rendered, Template};
use super::{call_params, datatype_map, lower_first, type_name, CodegenError, DECIMAL_NOTE};
use crate::metamodel::{ContractModel, DataType, ElementRef, Parameter, PlatformTarget};

struct Templates {
    contract: Template,
    structure: Template,
    function: Template,
}

fn templates() -> &'static Templates {
    static T: OnceLock<Templates> = OnceLock::new();
    T.get_or_init(|| Templates {
        contract: Template::parse(
            "solidity/contract",
            include_str!("../../templates/solidity/contract.tpl"),
        ),
        structure: Template::parse(
            "solidity/struct",
            include_str!("../../templates/solidity/struct.tpl"),
        ),
        function: Template::parse(
            "solidity/function",
            include_str!("../../templates/solidity/function.tpl"),
        ),
    })
}

fn sol_type(dtype: DataType) -> &'static str {
    datatype_map(dtype, PlatformTarget::Ethereum)
}

fn field_lines(params: &[Parameter], creator: Option<&str>) -> String {
    let mut lines = Vec::new();
    for p in params {
        if p.dtype == DataType::DecimalType {
            lines.push(format!("    /// {DECIMAL_NOTE}"));
        }
        lines.push(format!("    {} {};", sol_type(p.dtype), p.name));
    }
    if let Some(name) = creator {
        lines.push(format!("    address {}Address;", lower_first(name)));
    }
    lines.join("\n")
}

fn structure(e: ElementRef<'_>) -> Result<Rendered, CodegenError> {
    let creator = match e {
        ElementRef::Participant(p) if p.is_creator => Some(p.name.as_str()),
        _ => None,
    };
    let r = templates().structure.render(vec![
        ("type_name", type_name(e.name()).into()),
        ("fields", field_lines(e.params(), creator).into()),
    ])?;
    Ok(r.owned_by(e.id()))
}

pub(super) fn emit(model: &ContractModel) -> Result<Rendered, CodegenError> {
    let t = templates();
    let mut structs = Vec::new();
    for p in &model.participants {
        structs.push(structure(ElementRef::Participant(p))?);
    }
    for a in &model.assets {
        structs.push(structure(ElementRef::Asset(a))?);
    }

    let mut functions = Vec::new();
    for tx in &model.transactions {
        let params = call_params(model, tx);
        let doc: String = params
            .iter()
            .filter(|(_, d)| *d == DataType::DecimalType)
            .map(|(n, _)| format!("    /// @param {n} {DECIMAL_NOTE}\n"))
            .collect();
        let list = params
            .iter()
            .map(|(n, d)| format!("{} {n}", sol_type(*d)))
            .collect::<Vec<_>>()
            .join(", ");
        let r = t.function.render(vec![
            ("doc", doc.into()),
            ("name", tx.name.as_str().into()),
            ("params", list.into()),
        ])?;
        functions.push(r.owned_by(ElementRef::Transaction(tx).id()));
    }

    let name = model.name.as_deref().unwrap_or_default();
    let r = t.contract.render(vec![
        ("contract", name.into()),
        ("structs", Rendered::join(structs, "").into()),
        ("functions", Rendered::join(functions, "").into()),
    ])?;
    Ok(match model.contract_id() {
        Some(id) => r.owned_by(id),
        None => r,
    })
}
