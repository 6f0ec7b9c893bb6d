//! Smart-contract meta-model: the abstract syntax every other module conforms to.
//!
//! A [`ContractModel`] has a name, a target platform and three element lists
//! (participants, assets, transactions). Elements carry parameters; transactions
//! additionally carry relationships to participants or assets.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Target blockchain platform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PlatformTarget {
    Ethereum,
    HyperledgerComposer,
    AzureWorkbench,
}

impl PlatformTarget {
    pub const ALL: [PlatformTarget; 3] = [
        PlatformTarget::Ethereum,
        PlatformTarget::HyperledgerComposer,
        PlatformTarget::AzureWorkbench,
    ];

    /// Token used on the `Platform:` line of a DSL document.
    pub fn dsl_token(self) -> &'static str {
        match self {
            PlatformTarget::Ethereum => "Solidity",
            PlatformTarget::HyperledgerComposer => "HyperledgerComposer",
            PlatformTarget::AzureWorkbench => "Azure",
        }
    }

    pub fn from_dsl_token(token: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.dsl_token() == token)
    }

    /// Directory name used in output layouts and on the command line.
    pub fn slug(self) -> &'static str {
        match self {
            PlatformTarget::Ethereum => "ethereum",
            PlatformTarget::HyperledgerComposer => "composer",
            PlatformTarget::AzureWorkbench => "azure",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            PlatformTarget::Ethereum => "Ethereum (Solidity)",
            PlatformTarget::HyperledgerComposer => "Hyperledger Composer",
            PlatformTarget::AzureWorkbench => "Azure Blockchain Workbench",
        }
    }
}

impl fmt::Display for PlatformTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.display_name())
    }
}

impl FromStr for PlatformTarget {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ethereum" | "solidity" => Ok(PlatformTarget::Ethereum),
            "composer" | "hyperledger" | "hyperledgercomposer" => {
                Ok(PlatformTarget::HyperledgerComposer)
            }
            "azure" | "workbench" | "azureworkbench" => Ok(PlatformTarget::AzureWorkbench),
            other => Err(format!(
                "unknown platform `{other}` (expected ethereum, composer or azure)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConceptKind {
    Contract,
    Participant,
    Asset,
    Transaction,
    Parameter,
    Relationship,
}

impl ConceptKind {
    pub const ALL: [ConceptKind; 6] = [
        ConceptKind::Contract,
        ConceptKind::Participant,
        ConceptKind::Asset,
        ConceptKind::Transaction,
        ConceptKind::Parameter,
        ConceptKind::Relationship,
    ];

    /// The three kinds that live in the model's element lists.
    pub fn is_element(self) -> bool {
        matches!(
            self,
            ConceptKind::Participant | ConceptKind::Asset | ConceptKind::Transaction
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ConceptKind::Contract => "contract",
            ConceptKind::Participant => "participant",
            ConceptKind::Asset => "asset",
            ConceptKind::Transaction => "transaction",
            ConceptKind::Parameter => "parameter",
            ConceptKind::Relationship => "relationship",
        }
    }

    /// Indefinite article for prompts ("an asset", "a participant").
    pub fn article(self) -> &'static str {
        match self {
            ConceptKind::Asset => "an",
            _ => "a",
        }
    }
}

impl fmt::Display for ConceptKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CrudAction {
    Create,
    Read,
    Update,
    Delete,
}

impl CrudAction {
    pub const ALL: [CrudAction; 4] = [
        CrudAction::Create,
        CrudAction::Read,
        CrudAction::Update,
        CrudAction::Delete,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CrudAction::Create => "create",
            CrudAction::Read => "read",
            CrudAction::Update => "update",
            CrudAction::Delete => "delete",
        }
    }
}

impl fmt::Display for CrudAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DataType {
    StringType,
    IntegerType,
    DecimalType,
    BooleanType,
    AddressType,
}

impl DataType {
    pub const ALL: [DataType; 5] = [
        DataType::StringType,
        DataType::IntegerType,
        DataType::DecimalType,
        DataType::BooleanType,
        DataType::AddressType,
    ];

    /// Token used on `Type:` lines and in user-facing prompts.
    pub fn dsl_token(self) -> &'static str {
        match self {
            DataType::StringType => "String",
            DataType::IntegerType => "Integer",
            DataType::DecimalType => "Decimal",
            DataType::BooleanType => "Boolean",
            DataType::AddressType => "Address",
        }
    }

    pub fn from_dsl_token(token: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|d| d.dsl_token() == token)
    }
}

impl fmt::Display for DataType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.dsl_token())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AssetKind {
    Tangible,
    Intangible,
}

impl AssetKind {
    pub fn dsl_token(self) -> &'static str {
        match self {
            AssetKind::Tangible => "Tangible",
            AssetKind::Intangible => "Intangible",
        }
    }

    pub fn from_dsl_token(token: &str) -> Option<Self> {
        match token {
            "Tangible" => Some(AssetKind::Tangible),
            "Intangible" => Some(AssetKind::Intangible),
            _ => None,
        }
    }
}

impl fmt::Display for AssetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.dsl_token())
    }
}

/// Words that cannot name anything in at least one generated language:
/// Solidity keywords, units and globals, JavaScript reserved words and the
/// Composer modeling language's keywords and primitive types.
const RESERVED: &[&str] = &[
    // Solidity
    "abi",
    "abstract",
    "address",
    "after",
    "alias",
    "anonymous",
    "apply",
    "as",
    "assembly",
    "auto",
    "block",
    "bool",
    "break",
    "byte",
    "bytes",
    "calldata",
    "case",
    "catch",
    "constant",
    "constructor",
    "continue",
    "contract",
    "copyof",
    "days",
    "default",
    "define",
    "delete",
    "do",
    "else",
    "emit",
    "enum",
    "ether",
    "event",
    "external",
    "fallback",
    "false",
    "final",
    "finney",
    "for",
    "function",
    "gwei",
    "hex",
    "hours",
    "if",
    "immutable",
    "implements",
    "in",
    "indexed",
    "inline",
    "int",
    "interface",
    "internal",
    "is",
    "let",
    "library",
    "macro",
    "mapping",
    "match",
    "memory",
    "minutes",
    "modifier",
    "msg",
    "mutable",
    "new",
    "now",
    "null",
    "of",
    "override",
    "partial",
    "payable",
    "pragma",
    "private",
    "promise",
    "public",
    "pure",
    "receive",
    "reference",
    "relocatable",
    "return",
    "returns",
    "sealed",
    "seconds",
    "selfdestruct",
    "sizeof",
    "static",
    "storage",
    "string",
    "struct",
    "suicide",
    "super",
    "supports",
    "switch",
    "szabo",
    "this",
    "throw",
    "true",
    "try",
    "tx",
    "type",
    "typedef",
    "typeof",
    "uint",
    "unchecked",
    "using",
    "var",
    "view",
    "virtual",
    "weeks",
    "wei",
    "while",
    "years",
    // JavaScript
    "arguments",
    "await",
    "class",
    "const",
    "debugger",
    "eval",
    "export",
    "extends",
    "finally",
    "import",
    "infinity",
    "instanceof",
    "nan",
    "package",
    "protected",
    "undefined",
    "void",
    "with",
    "yield",
    // Composer modeling language
    "asset",
    "boolean",
    "by",
    "concept",
    "datetime",
    "double",
    "identified",
    "integer",
    "long",
    "namespace",
    "o",
    "optional",
    "participant",
    "range",
    "regex",
    "transaction",
];

/// True for words reserved in any target language, compared without case.
/// Covers Solidity's sized types (`uint8`, `bytes32`, `fixed128x18`, ...).
pub fn is_reserved(name: &str) -> bool {
    let lower = name.to_ascii_lowercase();
    if RESERVED.contains(&lower.as_str()) {
        return true;
    }
    let digits_after = |prefix: &str| {
        lower.strip_prefix(prefix).is_some_and(|rest| {
            !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit() || c == 'x')
        })
    };
    ["int", "uint", "bytes", "fixed", "ufixed"]
        .into_iter()
        .any(digits_after)
}

/// Checks the identifier pattern `[A-Za-z][A-Za-z0-9_]*` and rejects
/// reserved words.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && !is_reserved(name)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameter {
    pub name: String,
    pub dtype: DataType,
}

impl Parameter {
    pub fn new(name: impl Into<String>, dtype: DataType) -> Self {
        Self {
            name: name.into(),
            dtype,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Participant {
    pub name: String,
    pub is_creator: bool,
    pub identifier: Option<String>,
    pub params: Vec<Parameter>,
}

impl Participant {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            is_creator: false,
            identifier: None,
            params: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Asset {
    pub name: String,
    pub kind: Option<AssetKind>,
    pub identifier: Option<String>,
    pub params: Vec<Parameter>,
}

impl Asset {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            kind: None,
            identifier: None,
            params: Vec::new(),
        }
    }
}

/// Kinds a relationship may point at. Transactions and the contract are not targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TargetKind {
    Participant,
    Asset,
}

impl TargetKind {
    pub fn concept(self) -> ConceptKind {
        match self {
            TargetKind::Participant => ConceptKind::Participant,
            TargetKind::Asset => ConceptKind::Asset,
        }
    }

    pub fn from_concept(kind: ConceptKind) -> Option<Self> {
        match kind {
            ConceptKind::Participant => Some(TargetKind::Participant),
            ConceptKind::Asset => Some(TargetKind::Asset),
            _ => None,
        }
    }

    pub fn dsl_token(self) -> &'static str {
        match self {
            TargetKind::Participant => "Participant",
            TargetKind::Asset => "Asset",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relationship {
    pub target_kind: TargetKind,
    pub target_name: String,
}

impl Relationship {
    pub fn new(target_kind: TargetKind, target_name: impl Into<String>) -> Self {
        Self {
            target_kind,
            target_name: target_name.into(),
        }
    }

    pub fn target_id(&self) -> ElementId {
        ElementId::new(self.target_kind.concept(), &self.target_name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transaction {
    pub name: String,
    pub params: Vec<Parameter>,
    pub relationships: Vec<Relationship>,
}

impl Transaction {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            params: Vec::new(),
            relationships: Vec::new(),
        }
    }
}

/// Owned element of any of the three element kinds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Element {
    Participant(Participant),
    Asset(Asset),
    Transaction(Transaction),
}

impl Element {
    pub fn kind(&self) -> ConceptKind {
        match self {
            Element::Participant(_) => ConceptKind::Participant,
            Element::Asset(_) => ConceptKind::Asset,
            Element::Transaction(_) => ConceptKind::Transaction,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Element::Participant(p) => &p.name,
            Element::Asset(a) => &a.name,
            Element::Transaction(t) => &t.name,
        }
    }

    pub fn params(&self) -> &[Parameter] {
        match self {
            Element::Participant(p) => &p.params,
            Element::Asset(a) => &a.params,
            Element::Transaction(t) => &t.params,
        }
    }

    pub fn params_mut(&mut self) -> &mut Vec<Parameter> {
        match self {
            Element::Participant(p) => &mut p.params,
            Element::Asset(a) => &mut a.params,
            Element::Transaction(t) => &mut t.params,
        }
    }

    pub fn id(&self) -> ElementId {
        ElementId::new(self.kind(), self.name())
    }
}

/// Borrowed view of an element found in a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementRef<'a> {
    Participant(&'a Participant),
    Asset(&'a Asset),
    Transaction(&'a Transaction),
}

impl<'a> ElementRef<'a> {
    pub fn kind(&self) -> ConceptKind {
        match self {
            ElementRef::Participant(_) => ConceptKind::Participant,
            ElementRef::Asset(_) => ConceptKind::Asset,
            ElementRef::Transaction(_) => ConceptKind::Transaction,
        }
    }

    pub fn name(&self) -> &'a str {
        match self {
            ElementRef::Participant(p) => &p.name,
            ElementRef::Asset(a) => &a.name,
            ElementRef::Transaction(t) => &t.name,
        }
    }

    pub fn params(&self) -> &'a [Parameter] {
        match self {
            ElementRef::Participant(p) => &p.params,
            ElementRef::Asset(a) => &a.params,
            ElementRef::Transaction(t) => &t.params,
        }
    }

    /// Identifier parameter; transactions have none.
    pub fn identifier(&self) -> Option<&'a str> {
        match self {
            ElementRef::Participant(p) => p.identifier.as_deref(),
            ElementRef::Asset(a) => a.identifier.as_deref(),
            ElementRef::Transaction(_) => None,
        }
    }

    pub fn id(&self) -> ElementId {
        ElementId::new(self.kind(), self.name())
    }

    pub fn to_owned(&self) -> Element {
        match *self {
            ElementRef::Participant(p) => Element::Participant(p.clone()),
            ElementRef::Asset(a) => Element::Asset(a.clone()),
            ElementRef::Transaction(t) => Element::Transaction(t.clone()),
        }
    }
}

/// Trace-link key of the form `<kind>:<lowercased-name>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementId(String);

impl ElementId {
    pub fn new(kind: ConceptKind, name: &str) -> Self {
        ElementId(format!("{}:{}", kind.as_str(), name.to_lowercase()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Id of a user utterance in a session log.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UtteranceId(pub u64);

impl fmt::Display for UtteranceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u{}", self.0)
    }
}

/// The in-progress instance model built by a conversation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractModel {
    pub name: Option<String>,
    pub platform: Option<PlatformTarget>,
    pub participants: Vec<Participant>,
    pub assets: Vec<Asset>,
    pub transactions: Vec<Transaction>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub trace: BTreeMap<ElementId, Vec<UtteranceId>>,
}

impl ContractModel {
    pub fn new() -> Self {
        Self::default()
    }

    /// Id of the contract itself, when named.
    pub fn contract_id(&self) -> Option<ElementId> {
        self.name
            .as_deref()
            .map(|n| ElementId::new(ConceptKind::Contract, n))
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementRef<'_>> {
        self.participants
            .iter()
            .map(ElementRef::Participant)
            .chain(self.assets.iter().map(ElementRef::Asset))
            .chain(self.transactions.iter().map(ElementRef::Transaction))
    }

    pub fn element_names(&self) -> Vec<&str> {
        self.elements().map(|e| e.name()).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.participants.is_empty() && self.assets.is_empty() && self.transactions.is_empty()
    }

    /// Copy of the model without trace links (the part a DSL document carries).
    pub fn without_trace(&self) -> ContractModel {
        ContractModel {
            trace: BTreeMap::new(),
            ..self.clone()
        }
    }
}

/// Finds the element with `name`, compared case-insensitively. Never returns the contract.
pub fn find_element<'a>(model: &'a ContractModel, name: &str) -> Option<ElementRef<'a>> {
    let wanted = name.to_lowercase();
    model.elements().find(|e| e.name().to_lowercase() == wanted)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("`{0}` is not a valid identifier")]
    BadIdentifier(String),
    #[error("element name `{0}` is used more than once")]
    DuplicateElement(String),
    #[error("parameter `{param}` appears twice in `{element}`")]
    DuplicateParameter { element: String, param: String },
    #[error("identifier `{identifier}` of `{element}` is not one of its parameters")]
    DanglingIdentifier { element: String, identifier: String },
    #[error("trace key `{0}` does not reference an element")]
    DanglingTrace(ElementId),
}

/// Checks the structural invariants a model built through conversation always satisfies.
///
/// Relationship closure and asset kinds are completeness concerns and are left
/// to the validator, since a DSL file may legitimately be incomplete.
pub fn check_invariants(model: &ContractModel) -> Result<(), InvariantError> {
    if let Some(name) = &model.name {
        if !is_identifier(name) {
            return Err(InvariantError::BadIdentifier(name.clone()));
        }
    }
    let mut seen = HashSet::new();
    for element in model.elements() {
        let name = element.name();
        if !is_identifier(name) {
            return Err(InvariantError::BadIdentifier(name.to_string()));
        }
        let clashes_contract = model
            .name
            .as_deref()
            .is_some_and(|c| c.eq_ignore_ascii_case(name));
        if !seen.insert(name.to_lowercase()) || clashes_contract {
            return Err(InvariantError::DuplicateElement(name.to_string()));
        }
        let mut params = HashSet::new();
        for p in element.params() {
            if !is_identifier(&p.name) {
                return Err(InvariantError::BadIdentifier(p.name.clone()));
            }
            if !params.insert(p.name.to_lowercase()) {
                return Err(InvariantError::DuplicateParameter {
                    element: name.to_string(),
                    param: p.name.clone(),
                });
            }
        }
        if let Some(identifier) = element.identifier() {
            if !element.params().iter().any(|p| p.name == identifier) {
                return Err(InvariantError::DanglingIdentifier {
                    element: name.to_string(),
                    identifier: identifier.to_string(),
                });
            }
        }
        if let ElementRef::Transaction(t) = element {
            for r in &t.relationships {
                if !is_identifier(&r.target_name) {
                    return Err(InvariantError::BadIdentifier(r.target_name.clone()));
                }
            }
        }
    }
    let contract = model.contract_id();
    for key in model.trace.keys() {
        let live = Some(key) == contract.as_ref() || model.elements().any(|e| &e.id() == key);
        if !live {
            return Err(InvariantError::DanglingTrace(key.clone()));
        }
    }
    Ok(())
}
