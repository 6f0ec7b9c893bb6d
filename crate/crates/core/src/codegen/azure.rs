//! Azure Blockchain Workbench configuration document.

use std::collections::HashSet;
use std::sync::OnceLock;

use super::template::{Rendered, Template};
use super::{call_params, display_name, type_name, unique_name, workbench_type, CodegenError};
use crate::metamodel::{ContractModel, ElementRef};

struct Templates {
    workbench: Template,
    role: Template,
    property: Template,
    function: Template,
    parameter: Template,
    transition: Template,
}

fn templates() -> &'static Templates {
    static T: OnceLock<Templates> = OnceLock::new();
    T.get_or_init(|| Templates {
        workbench: Template::parse(
            "azure/workbench",
            include_str!("../../templates/azure/workbench.tpl"),
        ),
        role: Template::parse("azure/role", include_str!("../../templates/azure/role.tpl")),
        property: Template::parse(
            "azure/property",
            include_str!("../../templates/azure/property.tpl"),
        ),
        function: Template::parse(
            "azure/function",
            include_str!("../../templates/azure/function.tpl"),
        ),
        parameter: Template::parse(
            "azure/parameter",
            include_str!("../../templates/azure/parameter.tpl"),
        ),
        transition: Template::parse(
            "azure/transition",
            include_str!("../../templates/azure/transition.tpl"),
        ),
    })
}

fn quoted_list<'a>(names: impl Iterator<Item = &'a str>) -> String {
    names
        .map(|n| format!("\"{n}\""))
        .collect::<Vec<_>>()
        .join(", ")
}

fn property(name: String, description: String, ty: &str) -> Result<Rendered, CodegenError> {
    templates().property.render(vec![
        ("display", display_name(&name).into()),
        ("name", name.into()),
        ("description", description.into()),
        ("type", ty.into()),
    ])
}

pub(super) fn emit(model: &ContractModel) -> Result<Rendered, CodegenError> {
    let t = templates();
    let roles: Vec<String> = model
        .participants
        .iter()
        .map(|p| type_name(&p.name))
        .collect();

    let mut role_blocks = Vec::new();
    for p in &model.participants {
        let r = t.role.render(vec![
            ("type_name", type_name(&p.name).into()),
            ("name", p.name.as_str().into()),
        ])?;
        role_blocks.push(r.owned_by(ElementRef::Participant(p).id()));
    }

    let creators: Vec<String> = model
        .participants
        .iter()
        .filter(|p| p.is_creator)
        .map(|p| type_name(&p.name))
        .collect();
    let initiators = if creators.is_empty() {
        &roles
    } else {
        &creators
    };

    // "State" is declared by the template itself.
    let mut taken: HashSet<String> = HashSet::from(["State".to_string()]);
    let mut properties = Vec::new();
    for p in &model.participants {
        let name = unique_name(p.name.clone(), &mut taken);
        let r = property(name, format!("The {} of this contract", p.name), "user")?;
        properties.push(r.owned_by(ElementRef::Participant(p).id()));
    }
    for a in &model.assets {
        let mut lines = Vec::new();
        for param in &a.params {
            let name = unique_name(format!("{}{}", a.name, type_name(&param.name)), &mut taken);
            lines.push(property(
                name,
                format!("{} of the {}", param.name, a.name),
                workbench_type(param.dtype),
            )?);
        }
        properties.push(Rendered::join(lines, ",").owned_by(ElementRef::Asset(a).id()));
    }
    let mut property_block = Rendered::join(properties, ",");
    if !property_block.text.is_empty() {
        property_block = Rendered::join([Rendered::plain(","), property_block], "");
    }

    let role_list = quoted_list(roles.iter().map(String::as_str));
    let mut functions = Vec::new();
    let mut transitions = Vec::new();
    for tx in &model.transactions {
        let id = ElementRef::Transaction(tx).id();
        let mut params = Vec::new();
        for (name, dtype) in call_params(model, tx) {
            params.push(t.parameter.render(vec![
                ("display", display_name(&name).into()),
                ("name", name.into()),
                ("type", workbench_type(dtype).into()),
            ])?);
        }
        let f = t.function.render(vec![
            ("name", tx.name.as_str().into()),
            ("display", display_name(&tx.name).into()),
            ("parameters", Rendered::join(params, ",").into()),
        ])?;
        functions.push(f.owned_by(id.clone()));
        let tr = t.transition.render(vec![
            ("roles", role_list.as_str().into()),
            ("name", tx.name.as_str().into()),
            ("display", display_name(&tx.name).into()),
        ])?;
        transitions.push(tr.owned_by(id));
    }

    let r = t.workbench.render(vec![
        ("contract", model.name.as_deref().unwrap_or_default().into()),
        ("roles", Rendered::join(role_blocks, ",").into()),
        (
            "initiators",
            quoted_list(initiators.iter().map(String::as_str)).into(),
        ),
        ("properties", property_block.into()),
        ("functions", Rendered::join(functions, ",").into()),
        ("transitions", Rendered::join(transitions, ",").into()),
    ])?;
    Ok(match model.contract_id() {
        Some(id) => r.owned_by(id),
        None => r,
    })
}
