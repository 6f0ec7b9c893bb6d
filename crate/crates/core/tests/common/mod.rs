//! Shared fixtures, generators and reference oracles for the integration
//! tests and the acceptance harness.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use icb::dialogue::{DialogueState, Engine, ResponseKind, Session};
use icb::lexicon::{Intent, Lexicon, Term};
use icb::metamodel::{
    check_invariants, Asset, AssetKind, ConceptKind, ContractModel, DataType, Parameter,
    Participant, PlatformTarget, Relationship, TargetKind, Transaction,
};
use icb::model_store::parse;
use icb::nlu::is_stopword;
use icb::validator::RuleId;
use rand::seq::SliceRandom;
use rand::Rng;

// ---- fixtures ------------------------------------------------------------

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn fixture(name: &str) -> String {
    let path = fixtures_dir().join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Utterances of a plain transcript fixture.
pub fn script(name: &str) -> Vec<String> {
    fixture(name)
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect()
}

/// (transcript fixture, contract name, platform chosen in the conversation)
pub const USE_CASES: [(&str, &str, PlatformTarget); 3] = [
    (
        "medical.transcript",
        "MedicalRecord",
        PlatformTarget::Ethereum,
    ),
    (
        "certificate.transcript",
        "DigitalCertificate",
        PlatformTarget::HyperledgerComposer,
    ),
    (
        "auction.transcript",
        "VehicleAuction",
        PlatformTarget::AzureWorkbench,
    ),
];

pub fn run_script(engine: &Engine, lines: &[String]) -> Session {
    let refs: Vec<&str> = lines.iter().map(String::as_str).collect();
    engine.replay("fixture", refs).unwrap().0
}

pub fn without_whitespace(s: &str) -> String {
    s.split_whitespace().collect()
}

// ---- vocabulary ------------------------------------------------------------

const ELEMENT_WORDS: [&str; 24] = [
    "ledger",
    "invoice",
    "shipment",
    "warehouse",
    "carrier",
    "insurer",
    "policy",
    "claim",
    "tenant",
    "landlord",
    "lease",
    "deed",
    "parcel",
    "courier",
    "vendor",
    "buyer",
    "loan",
    "escrow",
    "patent",
    "royalty",
    "voucher",
    "ticket",
    "coupon",
    "pallet",
];

const PARAM_WORDS: [&str; 16] = [
    "price", "quantity", "weight", "colour", "serial", "owner", "email", "phone", "street", "city",
    "zipcode", "balance", "rating", "expiry", "title", "label",
];

fn free_words(lex: &Lexicon, words: &[&'static str]) -> Vec<&'static str> {
    words
        .iter()
        .copied()
        .filter(|w| lex.lookup(w).is_none() && !is_stopword(w))
        .collect()
}

pub fn element_words(lex: &Lexicon) -> Vec<&'static str> {
    free_words(lex, &ELEMENT_WORDS)
}

pub fn param_words(lex: &Lexicon) -> Vec<&'static str> {
    free_words(lex, &PARAM_WORDS)
}

pub fn spoken_type(d: DataType) -> &'static str {
    match d {
        DataType::StringType => "string",
        DataType::IntegerType => "integer",
        DataType::DecimalType => "decimal",
        DataType::BooleanType => "boolean",
        DataType::AddressType => "address",
    }
}

// ---- CRUD scripts and the reference-map oracle -----------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Op {
    CreateParticipant {
        name: String,
        params: Vec<(String, DataType)>,
        identifier: String,
        creator: bool,
    },
    CreateAsset {
        name: String,
        params: Vec<(String, DataType)>,
        identifier: String,
        kind: AssetKind,
    },
    CreateTransaction {
        name: String,
        params: Vec<(String, DataType)>,
        rels: Vec<String>,
    },
    AddParam {
        target: String,
        param: (String, DataType),
    },
    RemoveParam {
        target: String,
        param: String,
    },
    RetypeParam {
        target: String,
        param: String,
        dtype: DataType,
    },
    ChangeIdentifier {
        target: String,
        param: String,
    },
    Rename {
        target: String,
        to: String,
    },
    Delete {
        target: String,
    },
    Read {
        target: String,
    },
}

/// Plain view of one element, keyed by name in [`RefModel`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefElement {
    pub kind: ConceptKind,
    pub params: Vec<(String, DataType)>,
    pub identifier: Option<String>,
    pub creator: bool,
    pub asset_kind: Option<AssetKind>,
    pub rels: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RefModel {
    pub elements: BTreeMap<String, RefElement>,
}

impl RefModel {
    /// Projects a real model into the reference shape.
    pub fn of(model: &ContractModel) -> RefModel {
        let params = |ps: &[Parameter]| ps.iter().map(|p| (p.name.clone(), p.dtype)).collect();
        let mut elements = BTreeMap::new();
        for p in &model.participants {
            elements.insert(
                p.name.clone(),
                RefElement {
                    kind: ConceptKind::Participant,
                    params: params(&p.params),
                    identifier: p.identifier.clone(),
                    creator: p.is_creator,
                    asset_kind: None,
                    rels: vec![],
                },
            );
        }
        for a in &model.assets {
            elements.insert(
                a.name.clone(),
                RefElement {
                    kind: ConceptKind::Asset,
                    params: params(&a.params),
                    identifier: a.identifier.clone(),
                    creator: false,
                    asset_kind: a.kind,
                    rels: vec![],
                },
            );
        }
        for t in &model.transactions {
            elements.insert(
                t.name.clone(),
                RefElement {
                    kind: ConceptKind::Transaction,
                    params: params(&t.params),
                    identifier: None,
                    creator: false,
                    asset_kind: None,
                    rels: t
                        .relationships
                        .iter()
                        .map(|r| r.target_name.clone())
                        .collect(),
                },
            );
        }
        RefModel { elements }
    }

    pub fn apply(&mut self, op: &Op) {
        match op {
            Op::CreateParticipant {
                name,
                params,
                identifier,
                creator,
            } => {
                self.elements.insert(
                    name.clone(),
                    RefElement {
                        kind: ConceptKind::Participant,
                        params: params.clone(),
                        identifier: Some(identifier.clone()),
                        creator: *creator,
                        asset_kind: None,
                        rels: vec![],
                    },
                );
            }
            Op::CreateAsset {
                name,
                params,
                identifier,
                kind,
            } => {
                self.elements.insert(
                    name.clone(),
                    RefElement {
                        kind: ConceptKind::Asset,
                        params: params.clone(),
                        identifier: Some(identifier.clone()),
                        creator: false,
                        asset_kind: Some(*kind),
                        rels: vec![],
                    },
                );
            }
            Op::CreateTransaction { name, params, rels } => {
                self.elements.insert(
                    name.clone(),
                    RefElement {
                        kind: ConceptKind::Transaction,
                        params: params.clone(),
                        identifier: None,
                        creator: false,
                        asset_kind: None,
                        rels: rels.clone(),
                    },
                );
            }
            Op::AddParam { target, param } => {
                self.elements
                    .get_mut(target)
                    .unwrap()
                    .params
                    .push(param.clone());
            }
            Op::RemoveParam { target, param } => {
                self.elements
                    .get_mut(target)
                    .unwrap()
                    .params
                    .retain(|(n, _)| n != param);
            }
            Op::RetypeParam {
                target,
                param,
                dtype,
            } => {
                let e = self.elements.get_mut(target).unwrap();
                e.params.iter_mut().find(|(n, _)| n == param).unwrap().1 = *dtype;
            }
            Op::ChangeIdentifier { target, param } => {
                self.elements.get_mut(target).unwrap().identifier = Some(param.clone());
            }
            Op::Rename { target, to } => {
                let e = self.elements.remove(target).unwrap();
                self.elements.insert(to.clone(), e);
                for e in self.elements.values_mut() {
                    for r in &mut e.rels {
                        if r == target {
                            *r = to.clone();
                        }
                    }
                }
            }
            Op::Delete { target } => {
                self.elements.remove(target);
                for e in self.elements.values_mut() {
                    e.rels.retain(|r| r != target);
                }
            }
            Op::Read { .. } => {}
        }
    }

    fn names_of(&self, pred: impl Fn(&RefElement) -> bool) -> Vec<String> {
        self.elements
            .iter()
            .filter(|(_, e)| pred(e))
            .map(|(n, _)| n.clone())
            .collect()
    }
}

fn kind_word(kind: ConceptKind) -> &'static str {
    match kind {
        ConceptKind::Participant => "participant",
        ConceptKind::Asset => "asset",
        _ => "transaction",
    }
}

fn param_phrase((name, dtype): &(String, DataType)) -> String {
    format!("{name} of type {}", spoken_type(*dtype))
}

/// Utterances that perform `op` from the main menu and return to it.
pub fn utterances(op: &Op, model: &RefModel) -> Vec<String> {
    let kind_of = |name: &str| kind_word(model.elements[name].kind);
    let mut out = Vec::new();
    match op {
        Op::CreateParticipant {
            name,
            params,
            identifier,
            creator,
        } => {
            out.push(format!("create a participant {name}"));
            out.extend(params.iter().map(param_phrase));
            out.push("done".into());
            out.push(identifier.clone());
            out.push(if *creator { "yes" } else { "no" }.into());
        }
        Op::CreateAsset {
            name,
            params,
            identifier,
            kind,
        } => {
            out.push(format!("create an asset {name}"));
            out.extend(params.iter().map(param_phrase));
            out.push("done".into());
            out.push(identifier.clone());
            out.push(kind.dsl_token().to_lowercase());
        }
        Op::CreateTransaction { name, params, rels } => {
            out.push(format!("create a transaction {name}"));
            out.extend(params.iter().map(param_phrase));
            out.push("done".into());
            out.extend(rels.iter().cloned());
            out.push("done".into());
        }
        Op::AddParam { target, param } => {
            out.push(format!("update the {} {target}", kind_of(target)));
            out.push(format!("add a parameter {}", param_phrase(param)));
        }
        Op::RemoveParam { target, param } => {
            out.push(format!("update the {} {target}", kind_of(target)));
            out.push(format!("remove the parameter {param}"));
        }
        Op::RetypeParam {
            target,
            param,
            dtype,
        } => {
            out.push(format!("update the {} {target}", kind_of(target)));
            out.push(format!(
                "change the type of {param} to {}",
                spoken_type(*dtype)
            ));
        }
        Op::ChangeIdentifier { target, param } => {
            out.push(format!("update the {} {target}", kind_of(target)));
            out.push(format!("change the identifier to {param}"));
        }
        Op::Rename { target, to } => {
            out.push(format!("update the {} {target}", kind_of(target)));
            out.push(format!("rename it to {to}"));
        }
        Op::Delete { target } => {
            out.push(format!("delete the {} {target}", kind_of(target)));
            out.push("yes".into());
        }
        Op::Read { target } => {
            out.push(format!("read the {} {target}", kind_of(target)));
        }
    }
    out
}

pub const SCRIPT_PREAMBLE: [&str; 3] = ["I want to create a contract", "Exchange", "ethereum"];

pub struct Vocabulary {
    pub elements: Vec<&'static str>,
    pub params: Vec<&'static str>,
}

impl Vocabulary {
    pub fn new(lex: &Lexicon) -> Self {
        Vocabulary {
            elements: element_words(lex),
            params: param_words(lex),
        }
    }
}

fn random_params<R: Rng>(
    rng: &mut R,
    vocab: &Vocabulary,
    min: usize,
    max: usize,
) -> Vec<(String, DataType)> {
    let n = rng.gen_range(min..=max);
    vocab
        .params
        .choose_multiple(rng, n)
        .map(|p| (p.to_string(), *DataType::ALL.choose(rng).unwrap()))
        .collect()
}

fn fresh_name<R: Rng>(rng: &mut R, vocab: &Vocabulary, model: &RefModel) -> Option<String> {
    let free: Vec<&&str> = vocab
        .elements
        .iter()
        .filter(|w| !model.elements.contains_key(**w))
        .collect();
    free.choose(rng).map(|w| w.to_string())
}

/// A random op that is valid against `model`.
pub fn random_op<R: Rng>(rng: &mut R, vocab: &Vocabulary, model: &RefModel) -> Op {
    let targets = model.names_of(|e| e.kind != ConceptKind::Transaction);
    let all = model.names_of(|_| true);
    loop {
        let choice = rng.gen_range(0..10);
        let op = match choice {
            0 | 1 => fresh_name(rng, vocab, model).map(|name| {
                let params = random_params(rng, vocab, 1, 3);
                let identifier = params.choose(rng).unwrap().0.clone();
                Op::CreateParticipant {
                    name,
                    params,
                    identifier,
                    creator: rng.gen_bool(0.5),
                }
            }),
            2 => fresh_name(rng, vocab, model).map(|name| {
                let params = random_params(rng, vocab, 1, 3);
                let identifier = params.choose(rng).unwrap().0.clone();
                let kind = if rng.gen_bool(0.5) {
                    AssetKind::Tangible
                } else {
                    AssetKind::Intangible
                };
                Op::CreateAsset {
                    name,
                    params,
                    identifier,
                    kind,
                }
            }),
            3 => fresh_name(rng, vocab, model).map(|name| {
                let n = rng.gen_range(0..=targets.len().min(2));
                Op::CreateTransaction {
                    name,
                    params: random_params(rng, vocab, 0, 2),
                    rels: targets.choose_multiple(rng, n).cloned().collect(),
                }
            }),
            4 => all.choose(rng).and_then(|t| {
                let e = &model.elements[t];
                let free: Vec<&&str> = vocab
                    .params
                    .iter()
                    .filter(|p| !e.params.iter().any(|(n, _)| n == **p))
                    .collect();
                free.choose(rng).map(|p| Op::AddParam {
                    target: t.clone(),
                    param: (p.to_string(), *DataType::ALL.choose(rng).unwrap()),
                })
            }),
            5 => all.choose(rng).and_then(|t| {
                let e = &model.elements[t];
                let removable: Vec<&String> = e
                    .params
                    .iter()
                    .map(|(n, _)| n)
                    .filter(|n| e.identifier.as_ref() != Some(*n))
                    .collect();
                removable.choose(rng).map(|p| Op::RemoveParam {
                    target: t.clone(),
                    param: p.to_string(),
                })
            }),
            6 => all.choose(rng).and_then(|t| {
                let e = &model.elements[t];
                e.params.choose(rng).map(|(p, _)| Op::RetypeParam {
                    target: t.clone(),
                    param: p.clone(),
                    dtype: *DataType::ALL.choose(rng).unwrap(),
                })
            }),
            7 => targets.choose(rng).and_then(|t| {
                let e = &model.elements[t];
                e.params.choose(rng).map(|(p, _)| Op::ChangeIdentifier {
                    target: t.clone(),
                    param: p.clone(),
                })
            }),
            8 => all.choose(rng).and_then(|t| {
                fresh_name(rng, vocab, model).map(|to| {
                    if rng.gen_bool(0.5) {
                        Op::Rename {
                            target: t.clone(),
                            to,
                        }
                    } else {
                        Op::Delete { target: t.clone() }
                    }
                })
            }),
            _ => all.choose(rng).map(|t| Op::Read { target: t.clone() }),
        };
        if let Some(op) = op {
            return op;
        }
    }
}

pub fn random_ops<R: Rng>(rng: &mut R, vocab: &Vocabulary, len: usize) -> Vec<Op> {
    let mut model = RefModel::default();
    let mut ops = Vec::with_capacity(len);
    for _ in 0..len {
        let op = random_op(rng, vocab, &model);
        model.apply(&op);
        ops.push(op);
    }
    ops
}

#[derive(Debug)]
pub struct CrudFailure {
    pub op_index: usize,
    pub op: Op,
    pub detail: String,
}

/// Drives `ops` through a fresh session. After every turn the metamodel
/// invariants must hold; after every op the model must equal the oracle.
pub fn check_crud_script(engine: &Engine, ops: &[Op]) -> Result<Session, CrudFailure> {
    let mut session = engine.new_session();
    for u in SCRIPT_PREAMBLE {
        engine.handle_message(&mut session, u).unwrap();
    }
    let mut oracle = RefModel::default();
    for (i, op) in ops.iter().enumerate() {
        let fail = |detail: String| CrudFailure {
            op_index: i,
            op: op.clone(),
            detail,
        };
        for u in utterances(op, &oracle) {
            let reply = engine
                .handle_message(&mut session, &u)
                .map_err(|e| fail(e.to_string()))?;
            if let Err(e) = check_invariants(&session.model) {
                return Err(fail(format!("invariant broken after `{u}`: {e}")));
            }
            if reply.kind == ResponseKind::Error {
                return Err(fail(format!("`{u}` was rejected: {}", reply.text)));
            }
        }
        oracle.apply(op);
        if session.state != DialogueState::MainMenu {
            return Err(fail(format!(
                "ended in {} instead of MainMenu",
                session.state
            )));
        }
        let actual = RefModel::of(&session.model);
        if actual != oracle {
            return Err(fail(format!("model {actual:?} != oracle {oracle:?}")));
        }
    }
    Ok(session)
}

// ---- random valid models ---------------------------------------------------

/// A model that passes validation, built directly rather than by chat.
pub fn random_valid_model<R: Rng>(rng: &mut R, vocab: &Vocabulary) -> ContractModel {
    let mut m = ContractModel::new();
    m.name = Some(
        ["Trade", "Registry", "Escrow", "Supply"]
            .choose(rng)
            .unwrap()
            .to_string(),
    );
    m.platform = Some(*PlatformTarget::ALL.choose(rng).unwrap());
    let mut names: Vec<&str> = vocab.elements.clone();
    names.shuffle(rng);
    let mut names = names.into_iter();
    let params = |rng: &mut R, min| {
        random_params(rng, vocab, min, 4)
            .into_iter()
            .map(|(n, d)| Parameter::new(n, d))
            .collect::<Vec<_>>()
    };
    let mut targets = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let mut p = Participant::new(names.next().unwrap());
        p.params = params(rng, 1);
        p.identifier = Some(p.params.choose(rng).unwrap().name.clone());
        p.is_creator = rng.gen_bool(0.5);
        targets.push((TargetKind::Participant, p.name.clone()));
        m.participants.push(p);
    }
    for _ in 0..rng.gen_range(0..=3) {
        let mut a = Asset::new(names.next().unwrap());
        a.params = params(rng, 1);
        a.identifier = Some(a.params.choose(rng).unwrap().name.clone());
        a.kind = Some(if rng.gen_bool(0.5) {
            AssetKind::Tangible
        } else {
            AssetKind::Intangible
        });
        targets.push((TargetKind::Asset, a.name.clone()));
        m.assets.push(a);
    }
    for _ in 0..rng.gen_range(0..=3) {
        let mut t = Transaction::new(names.next().unwrap());
        t.params = params(rng, 0);
        let n = rng.gen_range(0..=targets.len().min(3));
        t.relationships = targets
            .choose_multiple(rng, n)
            .map(|(k, name)| Relationship::new(*k, name.clone()))
            .collect();
        m.transactions.push(t);
    }
    m
}

// ---- edit distance oracles -------------------------------------------------

/// Textbook recursive definition, no memo. Exponential; short inputs only.
pub fn naive_levenshtein(a: &[char], b: &[char]) -> usize {
    match (a.split_first(), b.split_first()) {
        (None, _) => b.len(),
        (_, None) => a.len(),
        (Some((x, ra)), Some((y, rb))) => {
            if x == y {
                naive_levenshtein(ra, rb)
            } else {
                1 + naive_levenshtein(ra, b)
                    .min(naive_levenshtein(a, rb))
                    .min(naive_levenshtein(ra, rb))
            }
        }
    }
}

/// The same recursion with a memo table over suffix pairs.
pub fn memo_levenshtein(a: &[char], b: &[char]) -> usize {
    fn go(a: &[char], b: &[char], i: usize, j: usize, memo: &mut [Vec<usize>]) -> usize {
        if i == a.len() {
            return b.len() - j;
        }
        if j == b.len() {
            return a.len() - i;
        }
        if memo[i][j] != usize::MAX {
            return memo[i][j];
        }
        let d = if a[i] == b[j] {
            go(a, b, i + 1, j + 1, memo)
        } else {
            1 + go(a, b, i + 1, j, memo)
                .min(go(a, b, i, j + 1, memo))
                .min(go(a, b, i + 1, j + 1, memo))
        };
        memo[i][j] = d;
        d
    }
    let mut memo = vec![vec![usize::MAX; b.len()]; a.len()];
    go(a, b, 0, 0, &mut memo)
}

/// Every string over `alphabet` of length at most `max_len`.
pub fn all_strings(alphabet: &[char], max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut frontier = vec![String::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &frontier {
            for c in alphabet {
                let mut t = s.clone();
                t.push(*c);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

pub fn random_string<R: Rng>(rng: &mut R, alphabet: &[char], max_len: usize) -> String {
    let n = rng.gen_range(0..=max_len);
    (0..n).map(|_| *alphabet.choose(rng).unwrap()).collect()
}

// ---- held-out paraphrases --------------------------------------------------

/// Every state a session can wait in.
pub fn all_states() -> Vec<DialogueState> {
    use icb::metamodel::CrudAction;
    use DialogueState::*;
    let mut v = vec![
        Start,
        AwaitContractName,
        AwaitPlatform,
        MainMenu,
        AwaitElementName,
        AwaitParamName,
        AwaitParamType,
        AwaitIdentifierChoice,
        AwaitCreatorChoice,
        AwaitAssetKind,
        AwaitRelationshipTarget,
        AwaitEdit,
        AwaitCorrectionConfirm,
        AwaitDeleteConfirm,
    ];
    for k in [
        ConceptKind::Participant,
        ConceptKind::Asset,
        ConceptKind::Transaction,
    ] {
        v.push(CreateElement(k));
    }
    for a in CrudAction::ALL {
        v.push(QueryElement(a));
    }
    v
}

/// States whose legal set contains `intent`.
pub fn contexts_for(intent: Intent) -> Vec<DialogueState> {
    all_states()
        .into_iter()
        .filter(|s| s.legal_intents().contains(&intent))
        .collect()
}

fn fill_placeholders(sentence: &str) -> String {
    sentence
        .replace("<name>", "ledger")
        .replace("<concept>", "asset")
        .replace("<type>", "integer")
        .replace("<platform>", "azure")
        .replace("<kind>", "tangible")
}

/// Paraphrases built by swapping one lexicon phrase of a training sentence
/// for another synonym of the same term. None equals a training sentence.
pub fn paraphrases(lex: &Lexicon) -> BTreeMap<Intent, Vec<String>> {
    let training: std::collections::BTreeSet<String> = lex
        .corpus()
        .values()
        .flatten()
        .map(|s| fill_placeholders(s).to_lowercase())
        .collect();
    let mut out: BTreeMap<Intent, Vec<String>> = BTreeMap::new();
    for (intent, sentences) in lex.corpus() {
        let mut found = Vec::new();
        for s in sentences {
            let filled = fill_placeholders(s).to_lowercase();
            let words: Vec<&str> = filled
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|w| !w.is_empty())
                .collect();
            for width in 1..=lex.max_phrase_words() {
                for start in 0..words.len().saturating_sub(width - 1) {
                    let phrase = words[start..start + width].join(" ");
                    let Some(term) = lex.lookup(&phrase) else {
                        continue;
                    };
                    for syn in synonyms(lex, term) {
                        if syn == phrase {
                            continue;
                        }
                        let mut w: Vec<String> = words.iter().map(|s| s.to_string()).collect();
                        w.splice(start..start + width, [syn.to_string()]);
                        let candidate = w.join(" ");
                        if !training.contains(&candidate) && !found.contains(&candidate) {
                            found.push(candidate);
                        }
                    }
                }
            }
        }
        out.insert(*intent, found);
    }
    out
}

fn synonyms(lex: &Lexicon, term: Term) -> Vec<&str> {
    lex.synonyms_of(term)
}

/// (correct, total) over every (paraphrase, admitting state) pair.
pub fn held_out_accuracy(engine: &Engine) -> (usize, usize, Vec<String>) {
    let set = paraphrases(engine.nlu().lexicon());
    let mut correct = 0;
    let mut total = 0;
    let mut misses = Vec::new();
    for (intent, sentences) in &set {
        for s in sentences {
            for state in contexts_for(*intent) {
                total += 1;
                let got = engine.nlu().match_intent(s, state.legal_intents()).intent;
                if got == Some(*intent) {
                    correct += 1;
                } else {
                    misses.push(format!("{intent} in {state}: `{s}` -> {got:?}"));
                }
            }
        }
    }
    (correct, total, misses)
}

// ---- validator mutants -----------------------------------------------------

pub fn medical() -> ContractModel {
    parse(&fixture("medical.icb")).unwrap()
}

/// One minimal mutant per rule.
pub fn mutants() -> Vec<(RuleId, ContractModel)> {
    let base = medical();
    let mut out = Vec::new();
    let mut m = base.clone();
    m.platform = None;
    out.push((RuleId::V1, m));
    let mut m = base.clone();
    m.name = None;
    out.push((RuleId::V2, m));
    let mut m = base.clone();
    m.assets[0].kind = None;
    out.push((RuleId::V3, m));
    let mut m = base.clone();
    m.participants[0].identifier = None;
    out.push((RuleId::V4, m));
    let mut m = base.clone();
    m.transactions[0]
        .relationships
        .push(Relationship::new(TargetKind::Asset, "invoice"));
    out.push((RuleId::V5, m));
    let mut m = base.clone();
    m.assets[0]
        .params
        .push(Parameter::new("owner", DataType::IntegerType));
    out.push((RuleId::V6, m));
    let mut m = base;
    m.assets[0].identifier = Some("serial".into());
    out.push((RuleId::V7, m));
    out
}
