//! Construction, querying, editing and (de)serialization of contract models.
//!
//! The textual form (`.icb`) looks like this:
//!
//! ```text
//! Contract: MedicalRecord
//! Platform: Solidity
//! Participant {
//!   Name: patient
//!   Creator: T
//!   Identifier: name
//!   Parameter {
//!     Name: name
//!     Type: String
//!   }
//! }
//! Transaction {
//!   Name: updateRecord
//!   Relationship {
//!     Target: Asset:record
//!   }
//! }
//! ```
//!
//! Two-space indentation, one field per line, LF line endings.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::metamodel::{
    find_element, is_identifier, Asset, AssetKind, ConceptKind, ContractModel, DataType, Element,
    ElementId, ElementRef, Parameter, Participant, PlatformTarget, Relationship, TargetKind,
    Transaction, UtteranceId,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StoreError {
    #[error("the contract name and platform must be set first")]
    ContractUndefined,
    #[error("an element named `{0}` already exists")]
    DuplicateName(String),
    #[error("invalid element: {0}")]
    InvalidPayload(String),
    #[error("no element named `{0}`")]
    NotFound(String),
    #[error("invalid edit: {0}")]
    InvalidEdit(String),
}

/// A single change applied by [`ContractModel::update_element`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Edit {
    Rename(String),
    AddParameter(Parameter),
    RemoveParameter(String),
    RetypeParameter { name: String, dtype: DataType },
    SetIdentifier(String),
    SetCreator(bool),
    SetAssetKind(AssetKind),
    AddRelationship(Relationship),
}

fn check_params(params: &[Parameter]) -> Result<(), StoreError> {
    let mut seen = HashSet::new();
    for p in params {
        if !is_identifier(&p.name) {
            return Err(StoreError::InvalidPayload(format!(
                "`{}` is not a valid parameter name",
                p.name
            )));
        }
        if !seen.insert(p.name.to_lowercase()) {
            return Err(StoreError::InvalidPayload(format!(
                "parameter `{}` is declared twice",
                p.name
            )));
        }
    }
    Ok(())
}

fn check_identifier(identifier: Option<&str>, params: &[Parameter]) -> Result<(), StoreError> {
    match identifier {
        Some(id) if !params.iter().any(|p| p.name == id) => Err(StoreError::InvalidPayload(
            format!("identifier `{id}` is not one of the parameters"),
        )),
        _ => Ok(()),
    }
}

impl ContractModel {
    fn record_trace(&mut self, id: ElementId, origin: &[UtteranceId]) {
        if origin.is_empty() {
            return;
        }
        let links = self.trace.entry(id).or_default();
        for u in origin {
            if !links.contains(u) {
                links.push(*u);
            }
        }
    }

    /// Element names may not repeat the contract name, since generated code
    /// declares both in one namespace.
    pub fn is_contract_name(&self, name: &str) -> bool {
        self.name
            .as_deref()
            .is_some_and(|n| n.eq_ignore_ascii_case(name))
    }

    /// Records that `origin` set the contract name or platform.
    pub fn trace_contract(&mut self, origin: UtteranceId) {
        if let Some(id) = self.contract_id() {
            self.record_trace(id, &[origin]);
        }
    }

    /// Sets or changes the contract name, carrying its trace links over.
    pub fn rename_contract(
        &mut self,
        new_name: &str,
        origin: &[UtteranceId],
    ) -> Result<(), StoreError> {
        if !is_identifier(new_name) {
            return Err(StoreError::InvalidEdit(format!(
                "`{new_name}` is not a valid name"
            )));
        }
        if find_element(self, new_name).is_some() {
            return Err(StoreError::DuplicateName(new_name.to_string()));
        }
        let old = self.contract_id();
        self.name = Some(new_name.to_string());
        let new = self.contract_id().expect("name was just set");
        if let Some(links) = old.and_then(|old| self.trace.remove(&old)) {
            self.trace.insert(new.clone(), links);
        }
        self.record_trace(new, origin);
        Ok(())
    }

    /// Appends a new element; `origin` lists the utterances that supplied its fields.
    ///
    /// Relationships are not resolved here; dangling targets are reported by the validator.
    pub fn create_element(
        &mut self,
        element: Element,
        origin: &[UtteranceId],
    ) -> Result<ElementId, StoreError> {
        if self.name.is_none() || self.platform.is_none() {
            return Err(StoreError::ContractUndefined);
        }
        let name = element.name();
        if !is_identifier(name) {
            return Err(StoreError::InvalidPayload(format!(
                "`{name}` is not a valid name"
            )));
        }
        if find_element(self, name).is_some() || self.is_contract_name(name) {
            return Err(StoreError::DuplicateName(name.to_string()));
        }
        check_params(element.params())?;
        match &element {
            Element::Participant(p) => check_identifier(p.identifier.as_deref(), &p.params)?,
            Element::Asset(a) => check_identifier(a.identifier.as_deref(), &a.params)?,
            Element::Transaction(t) => {
                for r in &t.relationships {
                    if !is_identifier(&r.target_name) {
                        return Err(StoreError::InvalidPayload(format!(
                            "`{}` is not a valid relationship target",
                            r.target_name
                        )));
                    }
                }
            }
        }
        let id = element.id();
        match element {
            Element::Participant(p) => self.participants.push(p),
            Element::Asset(a) => self.assets.push(a),
            Element::Transaction(t) => self.transactions.push(t),
        }
        self.record_trace(id.clone(), origin);
        Ok(id)
    }

    /// Human-readable summary of one element.
    pub fn read_element(&self, name: &str) -> Result<String, StoreError> {
        let element = find_element(self, name).ok_or_else(|| StoreError::NotFound(name.into()))?;
        Ok(summarize(element))
    }

    /// Applies one edit to the named element.
    pub fn update_element(
        &mut self,
        name: &str,
        edit: Edit,
        origin: &[UtteranceId],
    ) -> Result<ElementId, StoreError> {
        let element = find_element(self, name).ok_or_else(|| StoreError::NotFound(name.into()))?;
        let kind = element.kind();
        let current = element.name().to_string();
        let old_id = element.id();

        if let Edit::Rename(new_name) = &edit {
            if !is_identifier(new_name) {
                return Err(StoreError::InvalidEdit(format!(
                    "`{new_name}` is not a valid name"
                )));
            }
            if let Some(other) = find_element(self, new_name) {
                if other.id() != old_id {
                    return Err(StoreError::DuplicateName(new_name.clone()));
                }
            }
            if self.is_contract_name(new_name) {
                return Err(StoreError::DuplicateName(new_name.clone()));
            }
            self.rename(kind, &current, new_name);
            let new_id = ElementId::new(kind, new_name);
            if let Some(links) = self.trace.remove(&old_id) {
                self.trace.insert(new_id.clone(), links);
            }
            self.record_trace(new_id.clone(), origin);
            return Ok(new_id);
        }

        let mut owned = element.to_owned();
        apply_edit(&mut owned, edit)?;
        self.replace(owned);
        self.record_trace(old_id.clone(), origin);
        Ok(old_id)
    }

    /// Removes the named element and every relationship that targets it.
    pub fn delete_element(&mut self, name: &str) -> Result<Element, StoreError> {
        let element = find_element(self, name).ok_or_else(|| StoreError::NotFound(name.into()))?;
        let id = element.id();
        let lowered = element.name().to_lowercase();
        let removed = match element.kind() {
            ConceptKind::Participant => {
                let i = self
                    .participants
                    .iter()
                    .position(|p| p.name.to_lowercase() == lowered)
                    .expect("found above");
                Element::Participant(self.participants.remove(i))
            }
            ConceptKind::Asset => {
                let i = self
                    .assets
                    .iter()
                    .position(|a| a.name.to_lowercase() == lowered)
                    .expect("found above");
                Element::Asset(self.assets.remove(i))
            }
            _ => {
                let i = self
                    .transactions
                    .iter()
                    .position(|t| t.name.to_lowercase() == lowered)
                    .expect("found above");
                Element::Transaction(self.transactions.remove(i))
            }
        };
        for t in &mut self.transactions {
            t.relationships.retain(|r| r.target_id() != id);
        }
        self.trace.remove(&id);
        Ok(removed)
    }

    /// Ids of the utterances that set or edited any field of the element, in order.
    pub fn trace(&self, name: &str) -> Result<Vec<UtteranceId>, StoreError> {
        let id = match find_element(self, name) {
            Some(e) => e.id(),
            None => match &self.name {
                Some(n) if n.eq_ignore_ascii_case(name) => ElementId::new(ConceptKind::Contract, n),
                _ => return Err(StoreError::NotFound(name.into())),
            },
        };
        Ok(self.trace.get(&id).cloned().unwrap_or_default())
    }

    fn rename(&mut self, kind: ConceptKind, current: &str, new_name: &str) {
        let same = |n: &str| n.eq_ignore_ascii_case(current);
        match kind {
            ConceptKind::Participant => {
                if let Some(p) = self.participants.iter_mut().find(|p| same(&p.name)) {
                    p.name = new_name.to_string();
                }
            }
            ConceptKind::Asset => {
                if let Some(a) = self.assets.iter_mut().find(|a| same(&a.name)) {
                    a.name = new_name.to_string();
                }
            }
            _ => {
                if let Some(t) = self.transactions.iter_mut().find(|t| same(&t.name)) {
                    t.name = new_name.to_string();
                }
            }
        }
        if let Some(target_kind) = TargetKind::from_concept(kind) {
            for t in &mut self.transactions {
                for r in &mut t.relationships {
                    if r.target_kind == target_kind && same(&r.target_name) {
                        r.target_name = new_name.to_string();
                    }
                }
            }
        }
    }

    fn replace(&mut self, element: Element) {
        let lowered = element.name().to_lowercase();
        match element {
            Element::Participant(p) => {
                if let Some(slot) = self
                    .participants
                    .iter_mut()
                    .find(|x| x.name.to_lowercase() == lowered)
                {
                    *slot = p;
                }
            }
            Element::Asset(a) => {
                if let Some(slot) = self
                    .assets
                    .iter_mut()
                    .find(|x| x.name.to_lowercase() == lowered)
                {
                    *slot = a;
                }
            }
            Element::Transaction(t) => {
                if let Some(slot) = self
                    .transactions
                    .iter_mut()
                    .find(|x| x.name.to_lowercase() == lowered)
                {
                    *slot = t;
                }
            }
        }
    }
}

fn param_index(params: &[Parameter], name: &str) -> Option<usize> {
    params
        .iter()
        .position(|p| p.name.eq_ignore_ascii_case(name))
}

fn apply_edit(element: &mut Element, edit: Edit) -> Result<(), StoreError> {
    let identifier = match element {
        Element::Participant(p) => p.identifier.clone(),
        Element::Asset(a) => a.identifier.clone(),
        Element::Transaction(_) => None,
    };
    match edit {
        Edit::Rename(_) => unreachable!("handled by update_element"),
        Edit::AddParameter(param) => {
            if !is_identifier(&param.name) {
                return Err(StoreError::InvalidEdit(format!(
                    "`{}` is not a valid parameter name",
                    param.name
                )));
            }
            if param_index(element.params(), &param.name).is_some() {
                return Err(StoreError::InvalidEdit(format!(
                    "`{}` already has a parameter `{}`",
                    element.name(),
                    param.name
                )));
            }
            element.params_mut().push(param);
        }
        Edit::RemoveParameter(name) => {
            let i = param_index(element.params(), &name).ok_or_else(|| {
                StoreError::InvalidEdit(format!("`{}` has no parameter `{name}`", element.name()))
            })?;
            if identifier
                .as_deref()
                .is_some_and(|id| id == element.params()[i].name)
            {
                return Err(StoreError::InvalidEdit(format!(
                    "`{name}` is the identifier of `{}`; choose another identifier first",
                    element.name()
                )));
            }
            element.params_mut().remove(i);
        }
        Edit::RetypeParameter { name, dtype } => {
            let i = param_index(element.params(), &name).ok_or_else(|| {
                StoreError::InvalidEdit(format!("`{}` has no parameter `{name}`", element.name()))
            })?;
            element.params_mut()[i].dtype = dtype;
        }
        Edit::SetIdentifier(name) => {
            let i = param_index(element.params(), &name).ok_or_else(|| {
                StoreError::InvalidEdit(format!("`{}` has no parameter `{name}`", element.name()))
            })?;
            let canonical = element.params()[i].name.clone();
            match element {
                Element::Participant(p) => p.identifier = Some(canonical),
                Element::Asset(a) => a.identifier = Some(canonical),
                Element::Transaction(t) => {
                    return Err(StoreError::InvalidEdit(format!(
                        "transaction `{}` has no identifier",
                        t.name
                    )))
                }
            }
        }
        Edit::SetCreator(flag) => match element {
            Element::Participant(p) => p.is_creator = flag,
            other => {
                return Err(StoreError::InvalidEdit(format!(
                    "only participants can create the contract, `{}` is {} {}",
                    other.name(),
                    other.kind().article(),
                    other.kind()
                )))
            }
        },
        Edit::SetAssetKind(kind) => match element {
            Element::Asset(a) => a.kind = Some(kind),
            other => {
                return Err(StoreError::InvalidEdit(format!(
                    "`{}` is not an asset",
                    other.name()
                )))
            }
        },
        Edit::AddRelationship(rel) => match element {
            Element::Transaction(t) => {
                if !t.relationships.contains(&rel) {
                    t.relationships.push(rel);
                }
            }
            other => {
                return Err(StoreError::InvalidEdit(format!(
                    "only transactions have relationships, `{}` is {} {}",
                    other.name(),
                    other.kind().article(),
                    other.kind()
                )))
            }
        },
    }
    Ok(())
}

/// Multi-line summary used by read turns.
pub fn summarize(element: ElementRef<'_>) -> String {
    let mut out = String::new();
    let kind = element.kind().as_str();
    let mut title = format!(
        "{}{} {}",
        kind[..1].to_uppercase(),
        &kind[1..],
        element.name()
    );
    match element {
        ElementRef::Participant(p) if p.is_creator => title.push_str(" (contract creator)"),
        ElementRef::Asset(a) => {
            if let Some(k) = a.kind {
                let _ = write!(title, " ({})", k.dsl_token().to_lowercase());
            }
        }
        _ => {}
    }
    out.push_str(&title);
    out.push('\n');
    let params = element.params();
    if params.is_empty() {
        out.push_str("  no parameters\n");
    } else {
        let noun = if params.len() == 1 {
            "parameter"
        } else {
            "parameters"
        };
        let _ = writeln!(out, "  {} {noun}:", params.len());
        for p in params {
            let mark = if element.identifier() == Some(p.name.as_str()) {
                " (identifier)"
            } else {
                ""
            };
            let _ = writeln!(out, "    {}: {}{mark}", p.name, p.dtype);
        }
    }
    if let ElementRef::Transaction(t) = element {
        if !t.relationships.is_empty() {
            let targets: Vec<String> = t
                .relationships
                .iter()
                .map(|r| format!("{} {}", r.target_kind.concept(), r.target_name))
                .collect();
            let _ = writeln!(out, "  relates to: {}", targets.join(", "));
        }
    }
    out
}

/// Renders the whole model as a DSL document.
pub fn serialize(model: &ContractModel) -> String {
    let mut out = String::new();
    if let Some(name) = &model.name {
        let _ = writeln!(out, "Contract: {name}");
    }
    if let Some(platform) = model.platform {
        let _ = writeln!(out, "Platform: {}", platform.dsl_token());
    }
    let params = |out: &mut String, params: &[Parameter]| {
        for p in params {
            out.push_str("  Parameter {\n");
            let _ = writeln!(out, "    Name: {}", p.name);
            let _ = writeln!(out, "    Type: {}", p.dtype.dsl_token());
            out.push_str("  }\n");
        }
    };
    for p in &model.participants {
        out.push_str("Participant {\n");
        let _ = writeln!(out, "  Name: {}", p.name);
        let _ = writeln!(out, "  Creator: {}", if p.is_creator { "T" } else { "F" });
        if let Some(id) = &p.identifier {
            let _ = writeln!(out, "  Identifier: {id}");
        }
        params(&mut out, &p.params);
        out.push_str("}\n");
    }
    for a in &model.assets {
        out.push_str("Asset {\n");
        let _ = writeln!(out, "  Name: {}", a.name);
        if let Some(kind) = a.kind {
            let _ = writeln!(out, "  Kind: {}", kind.dsl_token());
        }
        if let Some(id) = &a.identifier {
            let _ = writeln!(out, "  Identifier: {id}");
        }
        params(&mut out, &a.params);
        out.push_str("}\n");
    }
    for t in &model.transactions {
        out.push_str("Transaction {\n");
        let _ = writeln!(out, "  Name: {}", t.name);
        params(&mut out, &t.params);
        for r in &t.relationships {
            out.push_str("  Relationship {\n");
            let _ = writeln!(
                out,
                "    Target: {}:{}",
                r.target_kind.dsl_token(),
                r.target_name
            );
            out.push_str("  }\n");
        }
        out.push_str("}\n");
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: expected {expected}")]
pub struct SyntaxError {
    pub line: usize,
    pub expected: String,
}

struct Lines<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
    last_line: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        let last_line = text.lines().count().max(1);
        Lines {
            lines,
            pos: 0,
            last_line,
        }
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.lines.get(self.pos).copied()
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        let l = self.peek();
        self.pos += 1;
        l
    }

    fn eof_line(&self) -> usize {
        self.last_line
    }
}

fn err(line: usize, expected: impl Into<String>) -> SyntaxError {
    SyntaxError {
        line,
        expected: expected.into(),
    }
}

/// Splits `Key: value` and checks the key.
fn field<'a>(line: usize, text: &'a str, key: &str) -> Result<&'a str, SyntaxError> {
    match text.split_once(':') {
        Some((k, v)) if k.trim() == key => {
            let v = v.trim();
            if v.is_empty() {
                Err(err(line, format!("a value after `{key}:`")))
            } else {
                Ok(v)
            }
        }
        _ => Err(err(line, format!("`{key}: <value>`"))),
    }
}

fn ident(line: usize, value: &str) -> Result<String, SyntaxError> {
    if is_identifier(value) {
        Ok(value.to_string())
    } else {
        Err(err(line, format!("an identifier, found `{value}`")))
    }
}

fn open_block(line: usize, text: &str, keyword: &str) -> bool {
    let _ = line;
    text.strip_prefix(keyword)
        .is_some_and(|rest| rest.trim() == "{")
}

fn parse_parameter(lines: &mut Lines<'_>) -> Result<Parameter, SyntaxError> {
    let mut name = None;
    let mut dtype = None;
    loop {
        let Some((n, text)) = lines.next() else {
            return Err(err(lines.eof_line(), "`}` closing Parameter"));
        };
        if text == "}" {
            break;
        }
        match text.split_once(':').map(|(k, _)| k.trim()) {
            Some("Name") if name.is_none() => name = Some(ident(n, field(n, text, "Name")?)?),
            Some("Type") if dtype.is_none() => {
                let v = field(n, text, "Type")?;
                dtype = Some(DataType::from_dsl_token(v).ok_or_else(|| {
                    err(n, "a type: String, Integer, Decimal, Boolean or Address")
                })?);
            }
            _ => return Err(err(n, "`Name:`, `Type:` or `}` in Parameter")),
        }
    }
    let last = lines.lines[lines.pos - 1].0;
    Ok(Parameter {
        name: name.ok_or_else(|| err(last, "`Name:` in Parameter"))?,
        dtype: dtype.ok_or_else(|| err(last, "`Type:` in Parameter"))?,
    })
}

fn parse_relationship(lines: &mut Lines<'_>) -> Result<Relationship, SyntaxError> {
    let mut target = None;
    loop {
        let Some((n, text)) = lines.next() else {
            return Err(err(lines.eof_line(), "`}` closing Relationship"));
        };
        if text == "}" {
            break;
        }
        if target.is_some() {
            return Err(err(n, "`}` closing Relationship"));
        }
        let v = field(n, text, "Target")?;
        let (kind, name) = v
            .split_once(':')
            .ok_or_else(|| err(n, "`Target: <Participant|Asset>:<name>`"))?;
        let kind = match kind.trim() {
            "Participant" => TargetKind::Participant,
            "Asset" => TargetKind::Asset,
            _ => return Err(err(n, "a target kind: Participant or Asset")),
        };
        target = Some(Relationship::new(kind, ident(n, name.trim())?));
    }
    let last = lines.lines[lines.pos - 1].0;
    target.ok_or_else(|| err(last, "`Target:` in Relationship"))
}

fn parse_element(lines: &mut Lines<'_>, kind: ConceptKind) -> Result<Element, SyntaxError> {
    let mut name = None;
    let mut creator = None;
    let mut identifier = None;
    let mut asset_kind = None;
    let mut params = Vec::new();
    let mut relationships = Vec::new();
    let block = kind.as_str();
    loop {
        let Some((n, text)) = lines.next() else {
            return Err(err(lines.eof_line(), format!("`}}` closing {block}")));
        };
        if text == "}" {
            break;
        }
        if open_block(n, text, "Parameter") {
            params.push(parse_parameter(lines)?);
            continue;
        }
        if kind == ConceptKind::Transaction && open_block(n, text, "Relationship") {
            relationships.push(parse_relationship(lines)?);
            continue;
        }
        let key = text.split_once(':').map(|(k, _)| k.trim());
        match (kind, key) {
            (_, Some("Name")) if name.is_none() => name = Some(ident(n, field(n, text, "Name")?)?),
            (ConceptKind::Participant, Some("Creator")) if creator.is_none() => {
                creator = Some(match field(n, text, "Creator")? {
                    "T" => true,
                    "F" => false,
                    _ => return Err(err(n, "`T` or `F` after `Creator:`")),
                })
            }
            (ConceptKind::Participant | ConceptKind::Asset, Some("Identifier"))
                if identifier.is_none() =>
            {
                identifier = Some(ident(n, field(n, text, "Identifier")?)?)
            }
            (ConceptKind::Asset, Some("Kind")) if asset_kind.is_none() => {
                asset_kind = Some(
                    AssetKind::from_dsl_token(field(n, text, "Kind")?)
                        .ok_or_else(|| err(n, "`Tangible` or `Intangible` after `Kind:`"))?,
                )
            }
            _ => return Err(err(n, format!("a {block} field, `Parameter {{` or `}}`"))),
        }
    }
    let last = lines.lines[lines.pos - 1].0;
    let name = name.ok_or_else(|| err(last, format!("`Name:` in {block}")))?;
    Ok(match kind {
        ConceptKind::Participant => Element::Participant(Participant {
            name,
            is_creator: creator.unwrap_or(false),
            identifier,
            params,
        }),
        ConceptKind::Asset => Element::Asset(Asset {
            name,
            kind: asset_kind,
            identifier,
            params,
        }),
        _ => Element::Transaction(Transaction {
            name,
            params,
            relationships,
        }),
    })
}

/// Parses a DSL document. Reports the first syntax error.
///
/// Missing platforms, asset kinds, identifiers or unresolved relationships are
/// accepted here and reported by the validator.
pub fn parse(text: &str) -> Result<ContractModel, SyntaxError> {
    let mut lines = Lines::new(text);
    let mut model = ContractModel::new();
    let mut seen = HashSet::new();

    if let Some((n, t)) = lines.peek() {
        if t.starts_with("Contract") && !t.ends_with('{') {
            model.name = Some(ident(n, field(n, t, "Contract")?)?);
            lines.next();
        }
    }
    if let Some((n, t)) = lines.peek() {
        if t.starts_with("Platform") {
            let v = field(n, t, "Platform")?;
            model.platform = Some(
                PlatformTarget::from_dsl_token(v)
                    .ok_or_else(|| err(n, "a platform: Solidity, HyperledgerComposer or Azure"))?,
            );
            lines.next();
        }
    }
    while let Some((n, text)) = lines.next() {
        let kind = if open_block(n, text, "Participant") {
            ConceptKind::Participant
        } else if open_block(n, text, "Asset") {
            ConceptKind::Asset
        } else if open_block(n, text, "Transaction") {
            ConceptKind::Transaction
        } else {
            return Err(err(n, "`Participant {`, `Asset {` or `Transaction {`"));
        };
        let element = parse_element(&mut lines, kind)?;
        if !seen.insert(element.name().to_lowercase()) {
            return Err(err(
                n,
                format!("a unique element name, `{}` is taken", element.name()),
            ));
        }
        match element {
            Element::Participant(p) => model.participants.push(p),
            Element::Asset(a) => model.assets.push(a),
            Element::Transaction(t) => model.transactions.push(t),
        }
    }
    Ok(model)
}
