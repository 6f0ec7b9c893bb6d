//! Statechart dialogue engine.
//!
//! A [`Session`] sits in one [`DialogueState`]. Each message is classified
//! against the intents legal in that state; slot states (names, types, yes/no
//! answers) fall back to reading the utterance as the slot value. Elements are
//! built in a pending frame and only committed to the model once complete.
//!
//! ```
//! use icb::dialogue::{Engine, ResponseKind};
//!
//! let engine = Engine::builtin();
//! let mut session = engine.new_session();
//! let reply = engine.handle_message(&mut session, "I want to create a contract").unwrap();
//! assert_eq!(reply.kind, ResponseKind::Prompt);
//! assert!(reply.text.contains("name of the contract"));
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codegen::{generate, GeneratedArtifact};
use crate::lexicon::{Intent, Keyword, Term};
use crate::metamodel::{
    find_element, is_identifier, is_reserved, Asset, AssetKind, ConceptKind, ContractModel,
    CrudAction, DataType, Element, ElementRef, Parameter, Participant, PlatformTarget,
    Relationship, TargetKind, Transaction, UtteranceId,
};
use crate::model_store::{serialize, summarize, Edit, StoreError};
use crate::nlu::{Item, Nlu, ParsedInput};
use crate::sanitizer::nearest_match;
use crate::validator::validate;

/// Node of the conversation statechart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "state", content = "arg")]
pub enum DialogueState {
    Start,
    AwaitContractName,
    AwaitPlatform,
    MainMenu,
    /// Waiting for the name of a new element of this kind.
    CreateElement(ConceptKind),
    /// Waiting for the new name of the element being edited.
    AwaitElementName,
    AwaitParamName,
    AwaitParamType,
    AwaitIdentifierChoice,
    AwaitCreatorChoice,
    AwaitAssetKind,
    AwaitRelationshipTarget,
    /// Waiting for the name of the element to read, update or delete.
    QueryElement(CrudAction),
    /// An element was resolved for update; waiting for the edit.
    AwaitEdit,
    AwaitCorrectionConfirm,
    AwaitDeleteConfirm,
    ReadyToGenerate,
    Done,
}

impl DialogueState {
    /// Intents considered in this state. Slot states list only the
    /// escape intents; anything else is read as the slot value.
    pub fn legal_intents(&self) -> &'static [Intent] {
        use DialogueState::*;
        use Intent as I;
        match self {
            Start => &[I::CreateContract, I::CreateElement, I::Help, I::Cancel],
            AwaitContractName
            | AwaitPlatform
            | CreateElement(_)
            | AwaitElementName
            | AwaitParamType
            | AwaitIdentifierChoice
            | AwaitAssetKind
            | QueryElement(_) => &[I::Cancel, I::Help],
            MainMenu => &[
                I::CreateElement,
                I::ReadElement,
                I::UpdateElement,
                I::DeleteElement,
                I::ShowModel,
                I::GenerateCode,
                I::UpdateContract,
                I::CreateContract,
                I::Finish,
                I::Help,
                I::Cancel,
            ],
            AwaitParamName | AwaitRelationshipTarget => &[I::Finish, I::Cancel, I::Help],
            AwaitCreatorChoice | AwaitCorrectionConfirm | AwaitDeleteConfirm => {
                &[I::Affirm, I::Deny, I::Cancel, I::Help]
            }
            AwaitEdit => &[
                I::AddParameter,
                I::RemoveParameter,
                I::RetypeParameter,
                I::ChangeIdentifier,
                I::RenameElement,
                I::Finish,
                I::Cancel,
                I::Help,
            ],
            ReadyToGenerate | Done => &[],
        }
    }

    pub fn is_terminal(&self) -> bool {
        *self == DialogueState::Done
    }
}

impl fmt::Display for DialogueState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DialogueState::CreateElement(k) => write!(f, "CreateElement·{k}"),
            DialogueState::QueryElement(a) => write!(f, "QueryElement·{a}"),
            other => write!(f, "{other:?}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ResponseKind {
    Prompt,
    Confirm,
    Error,
    Info,
    CodeReady,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BotResponse {
    pub text: String,
    pub kind: ResponseKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub suggestions: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub artifacts: Vec<GeneratedArtifact>,
}

impl BotResponse {
    fn new(kind: ResponseKind, text: impl Into<String>) -> Self {
        BotResponse {
            text: text.into(),
            kind,
            suggestions: Vec::new(),
            artifacts: Vec::new(),
        }
    }

    fn with_suggestions(mut self, suggestions: Vec<String>) -> Self {
        self.suggestions = suggestions;
        self
    }
}

/// Partially built work carried between turns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "pending")]
pub enum Pending {
    Create {
        element: Element,
        origin: Vec<UtteranceId>,
        /// Parameter whose type is still missing.
        param: Option<String>,
    },
    Edit {
        target: String,
        origin: Vec<UtteranceId>,
        param: Option<String>,
    },
    Delete {
        target: String,
    },
}

/// What to do once a suggested correction is accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Resume {
    Query(CrudAction),
    Relationship,
    Identifier,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Correction {
    pub original: String,
    pub suggestion: String,
    pub resume: Resume,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogEntry {
    pub id: UtteranceId,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Session {
    pub id: String,
    pub state: DialogueState,
    pub pending: Option<Pending>,
    pub model: ContractModel,
    pub log: Vec<LogEntry>,
    pub pending_correction: Option<Correction>,
}

impl Session {
    pub fn with_id(id: impl Into<String>) -> Self {
        Session {
            id: id.into(),
            state: DialogueState::Start,
            pending: None,
            model: ContractModel::new(),
            log: Vec::new(),
            pending_correction: None,
        }
    }

    fn next_utterance(&self) -> UtteranceId {
        UtteranceId(self.log.last().map_or(1, |e| e.id.0 + 1))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DialogueError {
    #[error("the session is finished; start a new one to build another contract")]
    SessionDone,
}

/// The outcome of one turn's handling before it is wrapped as a response.
type Reply = BotResponse;

/// Why `name` cannot be used, if it cannot.
fn name_problem(name: &str) -> Option<&'static str> {
    if is_reserved(name) {
        Some("it is a reserved word in the generated code; please choose another.")
    } else if !is_identifier(name) {
        Some("use letters, digits and underscores, starting with a letter.")
    } else {
        None
    }
}

fn prompt(text: impl Into<String>) -> Reply {
    BotResponse::new(ResponseKind::Prompt, text)
}

fn error(text: impl Into<String>) -> Reply {
    BotResponse::new(ResponseKind::Error, text)
}

fn info(text: impl Into<String>) -> Reply {
    BotResponse::new(ResponseKind::Info, text)
}

fn confirm(text: impl Into<String>) -> Reply {
    BotResponse::new(ResponseKind::Confirm, text)
}

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

/// `bid amount` -> `bidAmount`; single words are kept as typed.
pub fn element_name(phrase: &str) -> String {
    let words: Vec<&str> = phrase.split_whitespace().collect();
    if words.len() == 1 {
        return words[0].to_string();
    }
    let mut out = String::new();
    for (i, w) in words.iter().enumerate() {
        if i == 0 {
            out.push_str(&w.to_lowercase());
        } else {
            out.push_str(&capitalize(w));
        }
    }
    out
}

/// `medical record` -> `MedicalRecord`; single words are kept as typed.
pub fn contract_name(phrase: &str) -> String {
    let words: Vec<&str> = phrase.split_whitespace().collect();
    if words.len() == 1 {
        return words[0].to_string();
    }
    words.iter().map(|w| capitalize(w)).collect()
}

fn capitalize(w: &str) -> String {
    let mut chars = w.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// The name an utterance supplies: a noun right after `called`, `named` or
/// `to` if there is one, otherwise the first noun.
fn name_phrase(p: &ParsedInput) -> Option<String> {
    let mut named = None;
    for pair in p.items.windows(2) {
        if let [Item::Marker(m), Item::Noun(n)] = pair {
            if matches!(m.as_str(), "called" | "named" | "to") {
                named = Some(n.clone());
            }
        }
    }
    named.or_else(|| p.proper_nouns.first().cloned())
}

/// A noun that follows the `type` keyword, as in "amount of type integr".
fn noun_after_type_keyword(p: &ParsedInput) -> Option<String> {
    let at = p.items.iter().position(|i| {
        matches!(
            i,
            Item::Term {
                term: Term::Keyword(Keyword::Type),
                ..
            }
        )
    })?;
    p.items[at + 1..].iter().find_map(|i| match i {
        Item::Noun(n) => Some(n.clone()),
        _ => None,
    })
}

fn fuzzy<T: Copy>(word: &str, table: &[(&str, T)]) -> Option<T> {
    let names: Vec<&str> = table.iter().map(|(n, _)| *n).collect();
    nearest_match(&word.to_lowercase(), &names).map(|m| table[m.index].1)
}

const DATATYPE_NAMES: [(&str, DataType); 5] = [
    ("string", DataType::StringType),
    ("integer", DataType::IntegerType),
    ("decimal", DataType::DecimalType),
    ("boolean", DataType::BooleanType),
    ("address", DataType::AddressType),
];

const ASSET_KIND_NAMES: [(&str, AssetKind); 2] = [
    ("tangible", AssetKind::Tangible),
    ("intangible", AssetKind::Intangible),
];

/// Datatype named in the utterance; with `whole_answer`, a misspelt noun is
/// matched against the predefined type names.
fn datatype_of(p: &ParsedInput, whole_answer: bool) -> Option<DataType> {
    if let Some(t) = p
        .values
        .get("type")
        .and_then(|t| DataType::from_dsl_token(t))
    {
        return Some(t);
    }
    let word = noun_after_type_keyword(p).or_else(|| {
        if whole_answer {
            p.proper_nouns.first().cloned()
        } else {
            None
        }
    })?;
    fuzzy(&word, &DATATYPE_NAMES)
}

fn kind_label(e: &Element) -> String {
    format!("{} {}", e.kind(), e.name())
}

/// Drives sessions. Holds no per-session data, so one engine serves any
/// number of sessions.
#[derive(Debug, Clone)]
pub struct Engine {
    nlu: Nlu,
}

impl Engine {
    pub fn new(nlu: Nlu) -> Self {
        Engine { nlu }
    }

    pub fn builtin() -> Self {
        Engine::new(Nlu::builtin())
    }

    pub fn nlu(&self) -> &Nlu {
        &self.nlu
    }

    /// A fresh session with a random id.
    pub fn new_session(&self) -> Session {
        Session::with_id(uuid::Uuid::new_v4().to_string())
    }

    /// The bot's opening message.
    pub fn greeting(&self) -> BotResponse {
        prompt(
            "Hi! I help you model smart contracts. A contract must first be defined: \
             tell me, for example, \"I want to create a contract\".",
        )
        .with_suggestions(strings(&["I want to create a contract", "help"]))
    }

    /// Feeds utterances into a fresh session.
    pub fn replay<'a>(
        &self,
        session_id: &str,
        utterances: impl IntoIterator<Item = &'a str>,
    ) -> Result<(Session, Vec<BotResponse>), DialogueError> {
        let mut s = Session::with_id(session_id);
        let mut out = Vec::new();
        for u in utterances {
            out.push(self.handle_message(&mut s, u)?);
        }
        Ok((s, out))
    }

    pub fn handle_message(
        &self,
        s: &mut Session,
        utterance: &str,
    ) -> Result<BotResponse, DialogueError> {
        if s.state.is_terminal() {
            return Err(DialogueError::SessionDone);
        }
        let uid = s.next_utterance();
        s.log.push(LogEntry {
            id: uid,
            text: utterance.to_string(),
        });
        let p = self.nlu.match_intent(utterance, s.state.legal_intents());
        let reply = self.dispatch(s, uid, &p);
        debug_assert_eq!(
            s.pending_correction.is_some(),
            s.state == DialogueState::AwaitCorrectionConfirm
        );
        Ok(reply)
    }

    fn dispatch(&self, s: &mut Session, uid: UtteranceId, p: &ParsedInput) -> Reply {
        use DialogueState::*;
        match p.intent {
            Some(Intent::Help) => return self.help(s),
            Some(Intent::Cancel) => return self.cancel(s),
            _ => {}
        }
        match s.state {
            Start => self.on_start(s, uid, p),
            AwaitContractName => self.on_contract_name(s, uid, p),
            AwaitPlatform => self.on_platform(s, uid, p),
            MainMenu => self.on_main_menu(s, uid, p),
            CreateElement(kind) => match name_phrase(p) {
                Some(n) => self.accept_new_element(s, uid, kind, &element_name(&n)),
                None => self.reprompt(s),
            },
            AwaitParamName => self.on_param_name(s, uid, p),
            AwaitParamType => self.on_param_type(s, uid, p),
            AwaitIdentifierChoice => match name_phrase(p) {
                Some(n) => self.choose_identifier(s, uid, &element_name(&n)),
                None => self.reprompt(s),
            },
            AwaitCreatorChoice => match p.intent {
                Some(Intent::Affirm) => self.set_creator(s, uid, true),
                Some(Intent::Deny) => self.set_creator(s, uid, false),
                _ => self.reprompt(s),
            },
            AwaitAssetKind => self.on_asset_kind(s, uid, p),
            AwaitRelationshipTarget => match p.intent {
                Some(Intent::Finish) => self.commit(s),
                _ => match name_phrase(p) {
                    Some(n) => self.add_relationship(s, uid, &element_name(&n)),
                    None => self.reprompt(s),
                },
            },
            QueryElement(action) => match name_phrase(p) {
                Some(n) => self.resolve_target(s, uid, action, &element_name(&n)),
                None => self.reprompt(s),
            },
            AwaitEdit => self.on_edit(s, uid, p),
            AwaitElementName => match name_phrase(p) {
                Some(n) => self.apply_edit(s, uid, Edit::Rename(element_name(&n))),
                None => self.reprompt(s),
            },
            AwaitCorrectionConfirm => match p.intent {
                Some(Intent::Affirm) => self.accept_correction(s, uid),
                Some(Intent::Deny) => self.reject_correction(s),
                _ => self.reprompt(s),
            },
            AwaitDeleteConfirm => match p.intent {
                Some(Intent::Affirm) => self.delete(s),
                Some(Intent::Deny) => {
                    s.pending = None;
                    self.to_main_menu(s, "Nothing was deleted.")
                }
                _ => self.reprompt(s),
            },
            ReadyToGenerate | Done => unreachable!("terminal states are handled before dispatch"),
        }
    }

    // ---- prompts -------------------------------------------------------

    fn pending_element<'a>(&self, s: &'a Session) -> Option<&'a Element> {
        match &s.pending {
            Some(Pending::Create { element, .. }) => Some(element),
            _ => None,
        }
    }

    fn pending_target<'a>(&self, s: &'a Session) -> Option<ElementRef<'a>> {
        match &s.pending {
            Some(Pending::Edit { target, .. }) | Some(Pending::Delete { target }) => {
                find_element(&s.model, target)
            }
            _ => None,
        }
    }

    fn element_names(&self, s: &Session, kinds: &[ConceptKind]) -> Vec<String> {
        s.model
            .elements()
            .filter(|e| kinds.contains(&e.kind()))
            .map(|e| e.name().to_string())
            .collect()
    }

    /// The question the current state asks, with example replies.
    fn state_prompt(&self, s: &Session) -> (String, Vec<String>) {
        use DialogueState::*;
        match s.state {
            Start => (
                "A contract must first be defined. Say, for example, \"I want to create a contract\"."
                    .into(),
                strings(&["I want to create a contract", "create a contract named MedicalRecord"]),
            ),
            AwaitContractName => (
                "What is the name of the contract?".into(),
                strings(&["MedicalRecord", "VehicleAuction"]),
            ),
            AwaitPlatform => (
                "Which platform should the contract target: Ethereum (Solidity), Hyperledger Composer or Azure Workbench?"
                    .into(),
                strings(&["Solidity", "Hyperledger Composer", "Azure"]),
            ),
            MainMenu => (
                "What would you like to do next? You can create, read, update or delete participants, assets and transactions, show the model, or generate the code."
                    .into(),
                strings(&[
                    "create a participant patient",
                    "create an asset record",
                    "show the model",
                    "generate the code",
                ]),
            ),
            CreateElement(kind) => {
                let example = match kind {
                    ConceptKind::Asset => "record",
                    ConceptKind::Transaction => "updateRecord",
                    _ => "patient",
                };
                (format!("What is the name of the new {kind}?"), strings(&[example]))
            }
            AwaitElementName => (
                "What should the new name be?".into(),
                strings(&["rename it to doctor"]),
            ),
            AwaitParamName => {
                let label = self.pending_element(s).map(kind_label).unwrap_or_default();
                (
                    format!(
                        "Name a parameter of the {label} with its type, for example \"name of type string\". Say \"done\" when there are no more parameters."
                    ),
                    strings(&["name of type string", "amount of type integer", "done"]),
                )
            }
            AwaitParamType => {
                let param = match &s.pending {
                    Some(Pending::Create { param, .. }) | Some(Pending::Edit { param, .. }) => {
                        param.clone().unwrap_or_default()
                    }
                    _ => String::new(),
                };
                (
                    format!(
                        "What is the type of `{param}`? The predefined types are String, Integer, Decimal, Boolean and Address."
                    ),
                    strings(&["String", "Integer", "Decimal", "Boolean", "Address"]),
                )
            }
            AwaitIdentifierChoice => {
                let e = self.pending_element(s);
                let params: Vec<String> = e
                    .map(|e| e.params().iter().map(|p| p.name.clone()).collect())
                    .unwrap_or_default();
                (
                    format!(
                        "Which parameter uniquely identifies the {}? Choose one of: {}.",
                        e.map(kind_label).unwrap_or_default(),
                        params.join(", ")
                    ),
                    params,
                )
            }
            AwaitCreatorChoice => (
                format!(
                    "Is the {} the creator of the contract? (yes/no)",
                    self.pending_element(s).map(kind_label).unwrap_or_default()
                ),
                strings(&["yes", "no"]),
            ),
            AwaitAssetKind => (
                format!(
                    "Is the {} tangible or intangible?",
                    self.pending_element(s).map(kind_label).unwrap_or_default()
                ),
                strings(&["tangible", "intangible"]),
            ),
            AwaitRelationshipTarget => {
                let mut names =
                    self.element_names(s, &[ConceptKind::Participant, ConceptKind::Asset]);
                names.push("done".into());
                (
                    format!(
                        "Which participants or assets does the {} relate to? Name one at a time, or say \"done\".",
                        self.pending_element(s).map(kind_label).unwrap_or_default()
                    ),
                    names,
                )
            }
            QueryElement(action) => (
                format!("Which element do you want to {action}?"),
                self.element_names(
                    s,
                    &[ConceptKind::Participant, ConceptKind::Asset, ConceptKind::Transaction],
                ),
            ),
            AwaitEdit => {
                let label = self
                    .pending_target(s)
                    .map(|e| format!("{} {}", e.kind(), e.name()))
                    .unwrap_or_default();
                (
                    format!(
                        "How should the {label} change? You can add, remove or retype a parameter, change the identifier, or rename it. Say \"done\" to stop editing."
                    ),
                    strings(&[
                        "add a parameter amount of type integer",
                        "remove the parameter amount",
                        "change the identifier to id",
                        "rename it to doctor",
                    ]),
                )
            }
            AwaitCorrectionConfirm => {
                let c = s.pending_correction.as_ref();
                (
                    format!(
                        "There is no element called `{}`. Did you mean {}? (yes/no)",
                        c.map_or("", |c| c.original.as_str()),
                        c.map_or("", |c| c.suggestion.as_str())
                    ),
                    strings(&["yes", "no"]),
                )
            }
            AwaitDeleteConfirm => {
                let label = self
                    .pending_target(s)
                    .map(|e| format!("{} {}", e.kind(), e.name()))
                    .unwrap_or_default();
                (format!("Delete the {label}? (yes/no)"), strings(&["yes", "no"]))
            }
            ReadyToGenerate | Done => ("The code has been generated.".into(), Vec::new()),
        }
    }

    fn ask(&self, s: &Session, kind: ResponseKind, lead: &str) -> Reply {
        let (question, suggestions) = self.state_prompt(s);
        let text = if lead.is_empty() {
            question
        } else {
            format!("{lead} {question}")
        };
        BotResponse::new(kind, text).with_suggestions(suggestions)
    }

    fn reprompt(&self, s: &Session) -> Reply {
        self.ask(s, ResponseKind::Prompt, "Sorry, I did not understand that.")
    }

    fn help(&self, s: &Session) -> Reply {
        let (question, suggestions) = self.state_prompt(s);
        let mut text = question;
        if !suggestions.is_empty() {
            text.push_str(" For example: ");
            text.push_str(
                &suggestions
                    .iter()
                    .take(4)
                    .map(|x| format!("\"{x}\""))
                    .collect::<Vec<_>>()
                    .join(", "),
            );
            text.push('.');
        }
        info(text).with_suggestions(suggestions)
    }

    fn to_main_menu(&self, s: &mut Session, lead: &str) -> Reply {
        s.state = DialogueState::MainMenu;
        s.pending = None;
        s.pending_correction = None;
        self.ask(s, ResponseKind::Info, lead)
    }

    fn cancel(&self, s: &mut Session) -> Reply {
        use DialogueState::*;
        match s.state {
            Start | MainMenu => info("There is nothing to cancel."),
            AwaitContractName | AwaitPlatform if s.model.platform.is_none() => {
                s.model = ContractModel::new();
                s.state = Start;
                s.pending = None;
                self.ask(s, ResponseKind::Info, "Cancelled.")
            }
            _ => self.to_main_menu(s, "Cancelled."),
        }
    }

    // ---- contract ------------------------------------------------------

    fn on_start(&self, s: &mut Session, uid: UtteranceId, p: &ParsedInput) -> Reply {
        let wants_contract = p.intent == Some(Intent::CreateContract)
            || (p.intent == Some(Intent::CreateElement)
                && p.concept == Some(ConceptKind::Contract));
        if !wants_contract {
            return self.ask(s, ResponseKind::Prompt, "");
        }
        if let Some(platform) = p
            .values
            .get("platform")
            .and_then(|t| PlatformTarget::from_dsl_token(t))
        {
            s.model.platform = Some(platform);
        }
        if let Some(n) = name_phrase(p) {
            let name = contract_name(&n);
            if is_identifier(&name) && s.model.rename_contract(&name, &[uid]).is_ok() {
                return self.after_contract_slot(s, "");
            }
        }
        s.state = DialogueState::AwaitContractName;
        self.ask(s, ResponseKind::Prompt, "Great, let's create a contract.")
    }

    /// Moves on once the contract name or platform has been set.
    fn after_contract_slot(&self, s: &mut Session, lead: &str) -> Reply {
        if s.model.name.is_none() {
            s.state = DialogueState::AwaitContractName;
            return self.ask(s, ResponseKind::Prompt, lead);
        }
        if s.model.platform.is_none() {
            s.state = DialogueState::AwaitPlatform;
            return self.ask(s, ResponseKind::Prompt, lead);
        }
        if let Some(id) = s.model.contract_id() {
            // Platform supplied together with the name is traced to the same turn.
            let _ = id;
        }
        self.to_main_menu(s, lead)
    }

    fn on_contract_name(&self, s: &mut Session, uid: UtteranceId, p: &ParsedInput) -> Reply {
        let Some(n) = name_phrase(p) else {
            return self.reprompt(s);
        };
        let name = contract_name(&n);
        match s.model.rename_contract(&name, &[uid]) {
            Ok(()) => {
                if let Some(pl) = p.values.get("platform").and_then(|t| PlatformTarget::from_dsl_token(t)) {
                    s.model.platform = Some(pl);
                }
                let lead = format!("The contract is called {name}.");
                self.after_contract_slot(s, &lead)
            }
            Err(StoreError::DuplicateName(_)) => error(format!(
                "`{name}` is already the name of an element; please choose another contract name."
            )),
            Err(_) => error(format!(
                "`{name}` is not a valid name: use letters, digits and underscores, starting with a letter."
            )),
        }
    }

    fn platform_of(&self, p: &ParsedInput) -> Option<PlatformTarget> {
        if let Some(pl) = p
            .values
            .get("platform")
            .and_then(|t| PlatformTarget::from_dsl_token(t))
        {
            return Some(pl);
        }
        let word = p.proper_nouns.first()?.to_lowercase();
        let mut table = Vec::new();
        for pl in PlatformTarget::ALL {
            for syn in self.nlu.lexicon().synonyms_of(Term::Platform(pl)) {
                table.push((syn, pl));
            }
        }
        fuzzy(&word, &table)
    }

    fn on_platform(&self, s: &mut Session, uid: UtteranceId, p: &ParsedInput) -> Reply {
        let Some(platform) = self.platform_of(p) else {
            return self.ask(
                s,
                ResponseKind::Error,
                "That is not a platform I can generate code for.",
            );
        };
        s.model.platform = Some(platform);
        s.model.trace_contract(uid);
        let lead = format!("The contract targets {}.", platform.display_name());
        self.after_contract_slot(s, &lead)
    }

    fn update_contract(&self, s: &mut Session, uid: UtteranceId, p: &ParsedInput) -> Reply {
        if let Some(platform) = p
            .values
            .get("platform")
            .and_then(|t| PlatformTarget::from_dsl_token(t))
        {
            s.model.platform = Some(platform);
            s.model.trace_contract(uid);
            return self.to_main_menu(
                s,
                &format!("The contract now targets {}.", platform.display_name()),
            );
        }
        if let Some(n) = name_phrase(p) {
            let name = contract_name(&n);
            return match s.model.rename_contract(&name, &[uid]) {
                Ok(()) => self.to_main_menu(s, &format!("The contract is now called {name}.")),
                Err(e) => error(format!("Cannot rename the contract: {e}.")),
            };
        }
        s.state = if p.has_term(Term::Keyword(Keyword::Platform)) {
            DialogueState::AwaitPlatform
        } else {
            DialogueState::AwaitContractName
        };
        self.ask(s, ResponseKind::Prompt, "")
    }

    // ---- main menu -----------------------------------------------------

    fn on_main_menu(&self, s: &mut Session, uid: UtteranceId, p: &ParsedInput) -> Reply {
        let action = match p.intent {
            Some(Intent::CreateElement) => return self.start_create(s, uid, p),
            Some(Intent::ReadElement) => CrudAction::Read,
            Some(Intent::UpdateElement) => CrudAction::Update,
            Some(Intent::DeleteElement) => CrudAction::Delete,
            Some(Intent::ShowModel) => {
                return info(format!("Here is the model so far:\n{}", serialize(&s.model)))
            }
            Some(Intent::GenerateCode) => return self.generate(s),
            Some(Intent::UpdateContract) => return self.update_contract(s, uid, p),
            Some(Intent::CreateContract) => {
                return error(format!(
                    "The contract {} is already defined. You can rename it, for example \"rename the contract to NewName\".",
                    s.model.name.as_deref().unwrap_or_default()
                ))
            }
            Some(Intent::Finish) => {
                return info("When the model is complete, say \"generate the code\".")
                    .with_suggestions(strings(&["generate the code", "show the model"]))
            }
            _ => return self.reprompt(s),
        };
        if p.concept == Some(ConceptKind::Contract) && action == CrudAction::Read {
            return info(format!(
                "Here is the model so far:\n{}",
                serialize(&s.model)
            ));
        }
        match name_phrase(p) {
            Some(n) => self.resolve_target(s, uid, action, &element_name(&n)),
            None => {
                s.state = DialogueState::QueryElement(action);
                self.ask(s, ResponseKind::Prompt, "")
            }
        }
    }

    fn generate(&self, s: &mut Session) -> Reply {
        let violations = validate(&s.model);
        if !violations.is_empty() {
            let lines: Vec<String> = violations.iter().map(|v| format!("- {v}")).collect();
            return error(format!(
                "The model is not complete yet:\n{}",
                lines.join("\n")
            ));
        }
        let platform = s.model.platform.expect("validated");
        s.state = DialogueState::ReadyToGenerate;
        match generate(&s.model, platform) {
            Ok(artifacts) => {
                s.state = DialogueState::Done;
                let files: Vec<&str> = artifacts.iter().map(|a| a.filename.as_str()).collect();
                BotResponse {
                    text: format!(
                        "Your {} code is ready: {}.",
                        platform.display_name(),
                        files.join(", ")
                    ),
                    kind: ResponseKind::CodeReady,
                    suggestions: Vec::new(),
                    artifacts,
                }
            }
            Err(e) => {
                s.state = DialogueState::MainMenu;
                error(format!("Code generation failed: {e}"))
            }
        }
    }

    // ---- element creation ----------------------------------------------

    fn start_create(&self, s: &mut Session, uid: UtteranceId, p: &ParsedInput) -> Reply {
        match p.concept {
            Some(kind) if kind.is_element() => match name_phrase(p) {
                Some(n) => self.accept_new_element(s, uid, kind, &element_name(&n)),
                None => {
                    s.state = DialogueState::CreateElement(kind);
                    self.ask(s, ResponseKind::Prompt, "")
                }
            },
            Some(ConceptKind::Contract) => error(format!(
                "The contract {} is already defined.",
                s.model.name.as_deref().unwrap_or_default()
            )),
            Some(_) => error(
                "Parameters and relationships are added while creating or editing a participant, asset or transaction.",
            ),
            None => prompt("What would you like to create: a participant, an asset or a transaction?")
                .with_suggestions(strings(&[
                    "create a participant patient",
                    "create an asset record",
                    "create a transaction updateRecord",
                ])),
        }
    }

    fn accept_new_element(
        &self,
        s: &mut Session,
        uid: UtteranceId,
        kind: ConceptKind,
        name: &str,
    ) -> Reply {
        if let Some(problem) = name_problem(name) {
            return error(format!("`{name}` is not a valid name: {problem}"));
        }
        if let Some(existing) = find_element(&s.model, name) {
            return error(format!(
                "There is already a {} called {}; please choose another name.",
                existing.kind(),
                existing.name()
            ));
        }
        if s.model.is_contract_name(name) {
            return error(format!(
                "{name} is the name of the contract; please choose another name."
            ));
        }
        let element = match kind {
            ConceptKind::Participant => Element::Participant(Participant::new(name)),
            ConceptKind::Asset => Element::Asset(Asset::new(name)),
            _ => Element::Transaction(Transaction::new(name)),
        };
        s.pending = Some(Pending::Create {
            element,
            origin: vec![uid],
            param: None,
        });
        s.state = DialogueState::AwaitParamName;
        self.ask(
            s,
            ResponseKind::Prompt,
            &format!("Creating the {kind} {name}."),
        )
    }

    fn on_param_name(&self, s: &mut Session, uid: UtteranceId, p: &ParsedInput) -> Reply {
        if p.intent == Some(Intent::Finish) {
            return self.finish_params(s);
        }
        let Some(n) = name_phrase(p) else {
            return self.reprompt(s);
        };
        let name = element_name(&n);
        if let Some(problem) = name_problem(&name) {
            return error(format!("`{name}` is not a valid parameter name: {problem}"));
        }
        let dtype = datatype_of(p, false);
        let Some(Pending::Create {
            element,
            origin,
            param,
        }) = &mut s.pending
        else {
            return self.to_main_menu(s, "");
        };
        if let Some(dup) = element
            .params()
            .iter()
            .find(|q| q.name.eq_ignore_ascii_case(&name))
        {
            return error(format!(
                "The {} already has a parameter called {}.",
                kind_label(element),
                dup.name
            ));
        }
        origin.push(uid);
        match dtype {
            Some(d) => {
                element.params_mut().push(Parameter::new(name.clone(), d));
                self.ask(s, ResponseKind::Prompt, &format!("Added {name} ({d})."))
            }
            None => {
                *param = Some(name);
                s.state = DialogueState::AwaitParamType;
                self.ask(s, ResponseKind::Prompt, "")
            }
        }
    }

    fn on_param_type(&self, s: &mut Session, uid: UtteranceId, p: &ParsedInput) -> Reply {
        let Some(dtype) = datatype_of(p, true) else {
            return self.ask(
                s,
                ResponseKind::Error,
                "That is not one of the predefined types.",
            );
        };
        match &mut s.pending {
            Some(Pending::Create {
                element,
                origin,
                param,
            }) => {
                let name = param.take().unwrap_or_default();
                element
                    .params_mut()
                    .push(Parameter::new(name.clone(), dtype));
                origin.push(uid);
                s.state = DialogueState::AwaitParamName;
                self.ask(s, ResponseKind::Prompt, &format!("Added {name} ({dtype})."))
            }
            Some(Pending::Edit { target, param, .. }) => {
                let name = param.take().unwrap_or_default();
                let exists = find_element(&s.model, target)
                    .is_some_and(|e| e.params().iter().any(|q| q.name == name));
                let edit = if exists {
                    Edit::RetypeParameter { name, dtype }
                } else {
                    Edit::AddParameter(Parameter::new(name, dtype))
                };
                self.apply_edit(s, uid, edit)
            }
            _ => self.to_main_menu(s, ""),
        }
    }

    fn finish_params(&self, s: &mut Session) -> Reply {
        let Some(element) = self.pending_element(s) else {
            return self.to_main_menu(s, "");
        };
        match element {
            Element::Transaction(_) => {
                s.state = DialogueState::AwaitRelationshipTarget;
                self.ask(s, ResponseKind::Prompt, "")
            }
            e if e.params().is_empty() => self.ask(
                s,
                ResponseKind::Error,
                &format!(
                    "The {} needs at least one parameter to serve as its identifier.",
                    kind_label(e)
                ),
            ),
            _ => {
                s.state = DialogueState::AwaitIdentifierChoice;
                self.ask(s, ResponseKind::Prompt, "")
            }
        }
    }

    fn choose_identifier(&self, s: &mut Session, uid: UtteranceId, name: &str) -> Reply {
        let Some(element) = self.pending_element(s) else {
            return self.to_main_menu(s, "");
        };
        let params: Vec<String> = element.params().iter().map(|p| p.name.clone()).collect();
        if let Some(found) = params.iter().find(|p| p.eq_ignore_ascii_case(name)) {
            let found = found.clone();
            return self.set_identifier(s, uid, &found);
        }
        let lowered: Vec<String> = params.iter().map(|p| p.to_lowercase()).collect();
        match nearest_match(&name.to_lowercase(), &lowered) {
            Some(m) => self.suggest(s, name, &params[m.index], Resume::Identifier),
            None => self.ask(
                s,
                ResponseKind::Error,
                &format!("`{name}` is not one of the parameters."),
            ),
        }
    }

    fn set_identifier(&self, s: &mut Session, uid: UtteranceId, name: &str) -> Reply {
        let Some(Pending::Create {
            element, origin, ..
        }) = &mut s.pending
        else {
            return self.to_main_menu(s, "");
        };
        origin.push(uid);
        match element {
            Element::Participant(p) => {
                p.identifier = Some(name.to_string());
                s.state = DialogueState::AwaitCreatorChoice;
            }
            Element::Asset(a) => {
                a.identifier = Some(name.to_string());
                s.state = DialogueState::AwaitAssetKind;
            }
            Element::Transaction(_) => return self.commit(s),
        }
        self.ask(
            s,
            ResponseKind::Prompt,
            &format!("{name} is the identifier."),
        )
    }

    fn set_creator(&self, s: &mut Session, uid: UtteranceId, creator: bool) -> Reply {
        if let Some(Pending::Create {
            element: Element::Participant(p),
            origin,
            ..
        }) = &mut s.pending
        {
            p.is_creator = creator;
            origin.push(uid);
        }
        self.commit(s)
    }

    fn on_asset_kind(&self, s: &mut Session, uid: UtteranceId, p: &ParsedInput) -> Reply {
        let kind = p
            .values
            .get("kind")
            .and_then(|k| AssetKind::from_dsl_token(k))
            .or_else(|| {
                p.proper_nouns
                    .first()
                    .and_then(|w| fuzzy(w, &ASSET_KIND_NAMES))
            });
        let Some(kind) = kind else {
            return self.reprompt(s);
        };
        if let Some(Pending::Create {
            element: Element::Asset(a),
            origin,
            ..
        }) = &mut s.pending
        {
            a.kind = Some(kind);
            origin.push(uid);
        }
        self.commit(s)
    }

    fn add_relationship(&self, s: &mut Session, uid: UtteranceId, name: &str) -> Reply {
        let target = find_element(&s.model, name)
            .and_then(|e| TargetKind::from_concept(e.kind()).map(|k| (k, e.name().to_string())));
        let Some((kind, target)) = target else {
            if find_element(&s.model, name).is_some() {
                return error("A transaction can only relate to participants and assets.");
            }
            let names = self.element_names(s, &[ConceptKind::Participant, ConceptKind::Asset]);
            let lowered: Vec<String> = names.iter().map(|n| n.to_lowercase()).collect();
            return match nearest_match(&name.to_lowercase(), &lowered) {
                Some(m) => self.suggest(s, name, &names[m.index], Resume::Relationship),
                None => self.ask(
                    s,
                    ResponseKind::Error,
                    &format!("There is no participant or asset called `{name}`."),
                ),
            };
        };
        let Some(Pending::Create {
            element: Element::Transaction(t),
            origin,
            ..
        }) = &mut s.pending
        else {
            return self.to_main_menu(s, "");
        };
        let rel = Relationship::new(kind, target.clone());
        if t.relationships
            .iter()
            .any(|r| r.target_id() == rel.target_id())
        {
            return error(format!("The transaction already relates to {target}."));
        }
        t.relationships.push(rel);
        origin.push(uid);
        s.state = DialogueState::AwaitRelationshipTarget;
        self.ask(
            s,
            ResponseKind::Prompt,
            &format!("Linked to the {} {target}.", kind.concept()),
        )
    }

    fn commit(&self, s: &mut Session) -> Reply {
        let Some(Pending::Create {
            element, origin, ..
        }) = s.pending.take()
        else {
            return self.to_main_menu(s, "");
        };
        let label = kind_label(&element);
        match s.model.create_element(element, &origin) {
            Ok(_) => self.to_main_menu(s, &format!("Created the {label}.")),
            Err(e) => {
                let r = self.to_main_menu(s, "");
                error(format!("Could not create the {label}: {e}. {}", r.text))
                    .with_suggestions(r.suggestions)
            }
        }
    }

    // ---- read / update / delete ----------------------------------------

    fn suggest(&self, s: &mut Session, original: &str, suggestion: &str, resume: Resume) -> Reply {
        s.pending_correction = Some(Correction {
            original: original.to_string(),
            suggestion: suggestion.to_string(),
            resume,
        });
        s.state = DialogueState::AwaitCorrectionConfirm;
        let text = match resume {
            Resume::Identifier => format!(
                "There is no parameter called `{original}`. Did you mean {suggestion}? (yes/no)"
            ),
            _ => format!(
                "There is no element called `{original}`. Did you mean {suggestion}? (yes/no)"
            ),
        };
        confirm(text).with_suggestions(strings(&["yes", "no"]))
    }

    fn resolve_target(
        &self,
        s: &mut Session,
        uid: UtteranceId,
        action: CrudAction,
        name: &str,
    ) -> Reply {
        if let Some(e) = find_element(&s.model, name) {
            let found = e.name().to_string();
            return self.act_on(s, uid, action, &found);
        }
        let names = self.element_names(
            s,
            &[
                ConceptKind::Participant,
                ConceptKind::Asset,
                ConceptKind::Transaction,
            ],
        );
        let lowered: Vec<String> = names.iter().map(|n| n.to_lowercase()).collect();
        match nearest_match(&name.to_lowercase(), &lowered) {
            Some(m) => self.suggest(s, name, &names[m.index], Resume::Query(action)),
            None => error(format!("There is no element called `{name}`.")),
        }
    }

    /// `name` resolves in the model.
    fn act_on(&self, s: &mut Session, uid: UtteranceId, action: CrudAction, name: &str) -> Reply {
        let e = find_element(&s.model, name).expect("resolved by caller");
        match action {
            CrudAction::Read | CrudAction::Create => {
                let text = summarize(e);
                s.state = DialogueState::MainMenu;
                info(text)
            }
            CrudAction::Update => {
                s.pending = Some(Pending::Edit {
                    target: name.to_string(),
                    origin: vec![uid],
                    param: None,
                });
                s.state = DialogueState::AwaitEdit;
                self.ask(s, ResponseKind::Prompt, "")
            }
            CrudAction::Delete => {
                s.pending = Some(Pending::Delete {
                    target: name.to_string(),
                });
                s.state = DialogueState::AwaitDeleteConfirm;
                self.ask(s, ResponseKind::Confirm, "")
            }
        }
    }

    fn accept_correction(&self, s: &mut Session, uid: UtteranceId) -> Reply {
        let c = s
            .pending_correction
            .take()
            .expect("state implies a correction");
        match c.resume {
            Resume::Query(action) => {
                s.state = DialogueState::MainMenu;
                self.act_on(s, uid, action, &c.suggestion)
            }
            Resume::Relationship => {
                s.state = DialogueState::AwaitRelationshipTarget;
                self.add_relationship(s, uid, &c.suggestion)
            }
            Resume::Identifier => {
                s.state = DialogueState::AwaitIdentifierChoice;
                self.set_identifier(s, uid, &c.suggestion)
            }
        }
    }

    fn reject_correction(&self, s: &mut Session) -> Reply {
        let c = s
            .pending_correction
            .take()
            .expect("state implies a correction");
        match c.resume {
            Resume::Query(_) => self.to_main_menu(s, "OK."),
            Resume::Relationship => {
                s.state = DialogueState::AwaitRelationshipTarget;
                self.ask(s, ResponseKind::Prompt, "OK.")
            }
            Resume::Identifier => {
                s.state = DialogueState::AwaitIdentifierChoice;
                self.ask(s, ResponseKind::Prompt, "OK.")
            }
        }
    }

    fn on_edit(&self, s: &mut Session, uid: UtteranceId, p: &ParsedInput) -> Reply {
        let name = name_phrase(p).map(|n| element_name(&n));
        match p.intent {
            Some(Intent::Finish) => self.to_main_menu(s, "Done editing."),
            Some(Intent::AddParameter) | Some(Intent::RetypeParameter) => {
                let Some(name) = name else {
                    return self.reprompt(s);
                };
                let adding = p.intent == Some(Intent::AddParameter);
                match datatype_of(p, false) {
                    Some(dtype) if adding => {
                        self.apply_edit(s, uid, Edit::AddParameter(Parameter::new(name, dtype)))
                    }
                    Some(dtype) => self.apply_edit(s, uid, Edit::RetypeParameter { name, dtype }),
                    None => {
                        if let Some(Pending::Edit { param, origin, .. }) = &mut s.pending {
                            *param = Some(name);
                            origin.push(uid);
                        }
                        s.state = DialogueState::AwaitParamType;
                        self.ask(s, ResponseKind::Prompt, "")
                    }
                }
            }
            Some(Intent::RemoveParameter) => match name {
                Some(n) => self.apply_edit(s, uid, Edit::RemoveParameter(n)),
                None => self.reprompt(s),
            },
            Some(Intent::ChangeIdentifier) => match name {
                Some(n) => self.apply_edit(s, uid, Edit::SetIdentifier(n)),
                None => self.reprompt(s),
            },
            Some(Intent::RenameElement) => match name {
                Some(n) => self.apply_edit(s, uid, Edit::Rename(n)),
                None => {
                    s.state = DialogueState::AwaitElementName;
                    self.ask(s, ResponseKind::Prompt, "")
                }
            },
            _ => self.reprompt(s),
        }
    }

    fn apply_edit(&self, s: &mut Session, uid: UtteranceId, edit: Edit) -> Reply {
        let Some(Pending::Edit { target, origin, .. }) = &s.pending else {
            return self.to_main_menu(s, "");
        };
        let target = target.clone();
        let mut origin = origin.clone();
        origin.push(uid);
        // Parameter names are matched case-insensitively, as elsewhere.
        let edit = match edit {
            Edit::RemoveParameter(n) => Edit::RemoveParameter(self.param_name(s, &target, n)),
            Edit::RetypeParameter { name, dtype } => Edit::RetypeParameter {
                name: self.param_name(s, &target, name),
                dtype,
            },
            Edit::SetIdentifier(n) => Edit::SetIdentifier(self.param_name(s, &target, n)),
            other => other,
        };
        let what = match &edit {
            Edit::Rename(n) => format!("Renamed {target} to {n}."),
            Edit::AddParameter(p) => format!("Added {} ({}) to {target}.", p.name, p.dtype),
            Edit::RemoveParameter(n) => format!("Removed {n} from {target}."),
            Edit::RetypeParameter { name, dtype } => {
                format!("{name} of {target} is now {dtype}.")
            }
            Edit::SetIdentifier(n) => format!("{n} now identifies {target}."),
            _ => format!("Updated {target}."),
        };
        match s.model.update_element(&target, edit, &origin) {
            Ok(_) => self.to_main_menu(s, &what),
            Err(e) => {
                s.state = DialogueState::AwaitEdit;
                if let Some(Pending::Edit { param, .. }) = &mut s.pending {
                    *param = None;
                }
                self.ask(s, ResponseKind::Error, &format!("That did not work: {e}."))
            }
        }
    }

    fn param_name(&self, s: &Session, target: &str, name: String) -> String {
        find_element(&s.model, target)
            .and_then(|e| {
                e.params()
                    .iter()
                    .find(|p| p.name.eq_ignore_ascii_case(&name))
                    .map(|p| p.name.clone())
            })
            .unwrap_or(name)
    }

    fn delete(&self, s: &mut Session) -> Reply {
        let Some(Pending::Delete { target }) = s.pending.take() else {
            return self.to_main_menu(s, "");
        };
        let before: usize = s
            .model
            .transactions
            .iter()
            .map(|t| t.relationships.len())
            .sum();
        match s.model.delete_element(&target) {
            Ok(removed) => {
                let after: usize = s
                    .model
                    .transactions
                    .iter()
                    .map(|t| t.relationships.len())
                    .sum();
                let mut lead = format!("Deleted the {}.", kind_label(&removed));
                match before - after {
                    0 => {}
                    1 => lead.push_str(" One relationship that referred to it was removed too."),
                    n => lead.push_str(&format!(
                        " {n} relationships that referred to it were removed too."
                    )),
                }
                self.to_main_menu(s, &lead)
            }
            Err(e) => {
                let r = self.to_main_menu(s, "");
                error(format!("{e}. {}", r.text)).with_suggestions(r.suggestions)
            }
        }
    }
}
