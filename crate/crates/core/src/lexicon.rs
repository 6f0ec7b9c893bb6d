//! Synonym tables and training sentences linking everyday wording to meta-model concepts.
//!
//! Both tables are plain UTF-8 text. The synonym file holds
//! `kind<TAB>canonical<TAB>synonym` records and the corpus file holds
//! `intent<TAB>sentence` records; `#` starts a comment line.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metamodel::{AssetKind, ConceptKind, CrudAction, DataType, PlatformTarget};

pub const BUILTIN_LEXICON: &str = include_str!("../data/lexicon.tsv");
pub const BUILTIN_CORPUS: &str = include_str!("../data/training.tsv");

/// Dialogue words that are not meta-model concepts but still must never be
/// mistaken for element names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Keyword {
    Generate,
    Code,
    Done,
    Yes,
    No,
    Help,
    Cancel,
    Identifier,
    Type,
    Creator,
    Platform,
}

impl Keyword {
    pub const ALL: [Keyword; 11] = [
        Keyword::Generate,
        Keyword::Code,
        Keyword::Done,
        Keyword::Yes,
        Keyword::No,
        Keyword::Help,
        Keyword::Cancel,
        Keyword::Identifier,
        Keyword::Type,
        Keyword::Creator,
        Keyword::Platform,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Keyword::Generate => "generate",
            Keyword::Code => "code",
            Keyword::Done => "done",
            Keyword::Yes => "yes",
            Keyword::No => "no",
            Keyword::Help => "help",
            Keyword::Cancel => "cancel",
            Keyword::Identifier => "identifier",
            Keyword::Type => "type",
            Keyword::Creator => "creator",
            Keyword::Platform => "platform",
        }
    }
}

/// A lexicon hit, already mapped to its canonical target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "table", content = "value")]
pub enum Term {
    Concept(ConceptKind),
    Action(CrudAction),
    DataType(DataType),
    Platform(PlatformTarget),
    AssetKind(AssetKind),
    Keyword(Keyword),
}

impl Term {
    /// Stable feature string used for similarity scoring.
    pub fn feature(&self) -> String {
        match self {
            Term::Concept(c) => format!("concept:{c}"),
            Term::Action(a) => format!("action:{a}"),
            Term::DataType(d) => format!("type:{}", d.dsl_token().to_lowercase()),
            Term::Platform(p) => format!("platform:{}", p.slug()),
            Term::AssetKind(k) => format!("kind:{}", k.dsl_token().to_lowercase()),
            Term::Keyword(k) => format!("kw:{}", k.as_str()),
        }
    }
}

/// Dialogue intents recognised by the training corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Intent {
    CreateContract,
    UpdateContract,
    CreateElement,
    ReadElement,
    UpdateElement,
    DeleteElement,
    ShowModel,
    GenerateCode,
    Finish,
    Affirm,
    Deny,
    Cancel,
    Help,
    AddParameter,
    RemoveParameter,
    RetypeParameter,
    ChangeIdentifier,
    RenameElement,
}

impl Intent {
    pub const ALL: [Intent; 18] = [
        Intent::CreateContract,
        Intent::UpdateContract,
        Intent::CreateElement,
        Intent::ReadElement,
        Intent::UpdateElement,
        Intent::DeleteElement,
        Intent::ShowModel,
        Intent::GenerateCode,
        Intent::Finish,
        Intent::Affirm,
        Intent::Deny,
        Intent::Cancel,
        Intent::Help,
        Intent::AddParameter,
        Intent::RemoveParameter,
        Intent::RetypeParameter,
        Intent::ChangeIdentifier,
        Intent::RenameElement,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Intent::CreateContract => "create_contract",
            Intent::UpdateContract => "update_contract",
            Intent::CreateElement => "create_element",
            Intent::ReadElement => "read_element",
            Intent::UpdateElement => "update_element",
            Intent::DeleteElement => "delete_element",
            Intent::ShowModel => "show_model",
            Intent::GenerateCode => "generate_code",
            Intent::Finish => "finish",
            Intent::Affirm => "affirm",
            Intent::Deny => "deny",
            Intent::Cancel => "cancel",
            Intent::Help => "help",
            Intent::AddParameter => "add_parameter",
            Intent::RemoveParameter => "remove_parameter",
            Intent::RetypeParameter => "retype_parameter",
            Intent::ChangeIdentifier => "change_identifier",
            Intent::RenameElement => "rename_element",
        }
    }
}

impl fmt::Display for Intent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Intent {
    type Err = LexiconError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Intent::ALL
            .into_iter()
            .find(|i| i.as_str() == s)
            .ok_or_else(|| LexiconError::UnknownIntent(s.to_string()))
    }
}

/// Typed placeholder slots allowed in training sentences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Placeholder {
    Name,
    Concept,
    Type,
    Platform,
    Kind,
}

impl Placeholder {
    pub fn parse(token: &str) -> Option<Self> {
        match token {
            "<name>" => Some(Placeholder::Name),
            "<concept>" => Some(Placeholder::Concept),
            "<type>" => Some(Placeholder::Type),
            "<platform>" => Some(Placeholder::Platform),
            "<kind>" => Some(Placeholder::Kind),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexiconError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: synonym `{term}` is already mapped")]
    DuplicateSynonym { line: usize, term: String },
    #[error("no synonym maps to {0}")]
    MissingCanonical(String),
    #[error("unknown intent `{0}`")]
    UnknownIntent(String),
    #[error("intent `{intent}` has {count} training sentences, at least 3 are required")]
    TooFewSentences { intent: Intent, count: usize },
    #[error("line {line}: unknown placeholder `{placeholder}`")]
    UnknownPlaceholder { line: usize, placeholder: String },
}

/// Synonym tables plus training corpus. Immutable after loading.
#[derive(Debug, Clone)]
pub struct Lexicon {
    terms: HashMap<String, Term>,
    max_phrase_words: usize,
    corpus: BTreeMap<Intent, Vec<String>>,
}

fn normalize_key(term: &str) -> String {
    term.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

fn parse_canonical(kind: &str, canonical: &str) -> Option<Term> {
    let term = match kind {
        "concept" => Term::Concept(*ConceptKind::ALL.iter().find(|c| c.as_str() == canonical)?),
        "action" => Term::Action(*CrudAction::ALL.iter().find(|a| a.as_str() == canonical)?),
        "datatype" => Term::DataType(
            *DataType::ALL
                .iter()
                .find(|d| d.dsl_token().eq_ignore_ascii_case(canonical))?,
        ),
        "platform" => Term::Platform(*PlatformTarget::ALL.iter().find(|p| p.slug() == canonical)?),
        "assetkind" => Term::AssetKind(match canonical {
            "tangible" => AssetKind::Tangible,
            "intangible" => AssetKind::Intangible,
            _ => return None,
        }),
        "keyword" => Term::Keyword(*Keyword::ALL.iter().find(|k| k.as_str() == canonical)?),
        _ => return None,
    };
    Some(term)
}

fn records(src: &str) -> impl Iterator<Item = (usize, &str)> {
    src.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
}

impl Lexicon {
    /// The lexicon shipped with the crate. Parsed once.
    pub fn builtin() -> Arc<Lexicon> {
        static BUILTIN: OnceLock<Arc<Lexicon>> = OnceLock::new();
        BUILTIN
            .get_or_init(|| {
                Arc::new(
                    Lexicon::load(BUILTIN_LEXICON, BUILTIN_CORPUS)
                        .expect("builtin lexicon is well-formed"),
                )
            })
            .clone()
    }

    pub fn load(synonyms: &str, corpus: &str) -> Result<Self, LexiconError> {
        let mut terms = HashMap::new();
        for (line, record) in records(synonyms) {
            let fields: Vec<&str> = record.split('\t').collect();
            let [kind, canonical, synonym] = fields[..] else {
                return Err(LexiconError::Malformed {
                    line,
                    message: "expected kind<TAB>canonical<TAB>synonym".into(),
                });
            };
            let term = parse_canonical(kind.trim(), canonical.trim()).ok_or_else(|| {
                LexiconError::Malformed {
                    line,
                    message: format!(
                        "unknown target `{}` for kind `{}`",
                        canonical.trim(),
                        kind.trim()
                    ),
                }
            })?;
            let key = normalize_key(synonym);
            if key.is_empty() {
                return Err(LexiconError::Malformed {
                    line,
                    message: "empty synonym".into(),
                });
            }
            // A term must belong to exactly one table so classification is unambiguous.
            if terms.insert(key.clone(), term).is_some() {
                return Err(LexiconError::DuplicateSynonym { line, term: key });
            }
        }

        let covered = |t: Term| terms.values().any(|v| *v == t);
        let required = ConceptKind::ALL
            .into_iter()
            .map(Term::Concept)
            .chain(CrudAction::ALL.into_iter().map(Term::Action))
            .chain(DataType::ALL.into_iter().map(Term::DataType))
            .chain(PlatformTarget::ALL.into_iter().map(Term::Platform))
            .chain([AssetKind::Tangible, AssetKind::Intangible].map(Term::AssetKind))
            .chain(Keyword::ALL.into_iter().map(Term::Keyword));
        for t in required {
            if !covered(t) {
                return Err(LexiconError::MissingCanonical(t.feature()));
            }
        }

        let mut sentences: BTreeMap<Intent, Vec<String>> = BTreeMap::new();
        for (line, record) in records(corpus) {
            let Some((intent, sentence)) = record.split_once('\t') else {
                return Err(LexiconError::Malformed {
                    line,
                    message: "expected intent<TAB>sentence".into(),
                });
            };
            let intent: Intent = intent.trim().parse()?;
            for word in sentence.split_whitespace() {
                if word.starts_with('<') && Placeholder::parse(word).is_none() {
                    return Err(LexiconError::UnknownPlaceholder {
                        line,
                        placeholder: word.to_string(),
                    });
                }
            }
            sentences
                .entry(intent)
                .or_default()
                .push(sentence.trim().to_string());
        }
        for intent in Intent::ALL {
            let count = sentences.get(&intent).map_or(0, Vec::len);
            if count < 3 {
                return Err(LexiconError::TooFewSentences { intent, count });
            }
        }

        let max_phrase_words = terms
            .keys()
            .map(|k| k.split(' ').count())
            .max()
            .unwrap_or(1);
        Ok(Lexicon {
            terms,
            max_phrase_words,
            corpus: sentences,
        })
    }

    /// Looks up a single- or multi-word term.
    pub fn lookup(&self, term: &str) -> Option<Term> {
        self.terms.get(&normalize_key(term)).copied()
    }

    pub fn max_phrase_words(&self) -> usize {
        self.max_phrase_words
    }

    pub fn normalize_concept(&self, term: &str) -> Option<ConceptKind> {
        match self.lookup(term)? {
            Term::Concept(c) => Some(c),
            _ => None,
        }
    }

    pub fn normalize_action(&self, term: &str) -> Option<CrudAction> {
        match self.lookup(term)? {
            Term::Action(a) => Some(a),
            _ => None,
        }
    }

    pub fn normalize_datatype(&self, term: &str) -> Option<DataType> {
        match self.lookup(term)? {
            Term::DataType(d) => Some(d),
            _ => None,
        }
    }

    pub fn normalize_platform(&self, term: &str) -> Option<PlatformTarget> {
        match self.lookup(term)? {
            Term::Platform(p) => Some(p),
            _ => None,
        }
    }

    pub fn normalize_asset_kind(&self, term: &str) -> Option<AssetKind> {
        match self.lookup(term)? {
            Term::AssetKind(k) => Some(k),
            _ => None,
        }
    }

    pub fn training_sentences(&self, intent: Intent) -> &[String] {
        self.corpus.get(&intent).map(Vec::as_slice).unwrap_or(&[])
    }

    /// String-keyed variant of [`Lexicon::training_sentences`].
    pub fn training_sentences_for(&self, intent: &str) -> Result<&[String], LexiconError> {
        let intent: Intent = intent.parse()?;
        Ok(self.training_sentences(intent))
    }

    /// All `(synonym, term)` pairs, sorted by synonym.
    pub fn synonyms(&self) -> Vec<(&str, Term)> {
        let mut all: Vec<_> = self.terms.iter().map(|(k, v)| (k.as_str(), *v)).collect();
        all.sort_by(|a, b| a.0.cmp(b.0));
        all
    }

    /// Synonyms mapping to `term`, sorted.
    pub fn synonyms_of(&self, term: Term) -> Vec<&str> {
        let mut out: Vec<&str> = self
            .terms
            .iter()
            .filter(|(_, v)| **v == term)
            .map(|(k, _)| k.as_str())
            .collect();
        out.sort_unstable();
        out
    }

    pub fn corpus(&self) -> &BTreeMap<Intent, Vec<String>> {
        &self.corpus
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex() -> Arc<Lexicon> {
        Lexicon::builtin()
    }

    #[test]
    fn table_one_cells_map_to_their_columns() {
        let cells = [
            ("Template", ConceptKind::Contract),
            ("Application", ConceptKind::Contract),
            ("Program", ConceptKind::Contract),
            ("Contractual Party", ConceptKind::Participant),
            ("Role", ConceptKind::Participant),
            ("Party", ConceptKind::Participant),
            ("Good", ConceptKind::Asset),
            ("Struct", ConceptKind::Asset),
            ("State variable", ConceptKind::Asset),
            ("Method", ConceptKind::Transaction),
            ("Function", ConceptKind::Transaction),
            ("Choice", ConceptKind::Transaction),
        ];
        for (cell, kind) in cells {
            assert_eq!(lex().normalize_concept(cell), Some(kind), "{cell}");
        }
    }

    #[test]
    fn canonical_terms_map_to_themselves() {
        for c in ConceptKind::ALL {
            assert_eq!(lex().normalize_concept(c.as_str()), Some(c));
        }
        for a in CrudAction::ALL {
            assert_eq!(lex().normalize_action(a.as_str()), Some(a));
        }
        for d in DataType::ALL {
            assert_eq!(lex().normalize_datatype(d.dsl_token()), Some(d));
        }
        for p in PlatformTarget::ALL {
            assert_eq!(lex().normalize_platform(p.slug()), Some(p));
        }
    }

    #[test]
    fn action_synonyms() {
        assert_eq!(lex().normalize_action("edit"), Some(CrudAction::Update));
        assert_eq!(lex().normalize_action("remove"), Some(CrudAction::Delete));
        assert_eq!(lex().normalize_action("create"), Some(CrudAction::Create));
        assert_eq!(
            lex().normalize_action("  Remove "),
            Some(CrudAction::Delete)
        );
    }

    #[test]
    fn numeric_synonyms() {
        assert_eq!(
            lex().normalize_datatype("integer"),
            Some(DataType::IntegerType)
        );
        assert_eq!(
            lex().normalize_datatype("number"),
            Some(DataType::IntegerType)
        );
        assert_eq!(
            lex().normalize_datatype("float"),
            Some(DataType::DecimalType)
        );
        assert_eq!(
            lex().normalize_datatype("decimal"),
            Some(DataType::DecimalType)
        );
        assert_eq!(
            lex().normalize_datatype("string"),
            Some(DataType::StringType)
        );
    }

    #[test]
    fn unknown_terms_are_none() {
        assert_eq!(lex().normalize_concept("patient"), None);
        assert_eq!(lex().normalize_concept("participnt"), None);
        assert_eq!(lex().normalize_action("participant"), None);
    }

    #[test]
    fn concept_and_action_tables_never_overlap() {
        for (term, _) in lex().synonyms() {
            let hits = lex().normalize_concept(term).is_some() as u8
                + lex().normalize_action(term).is_some() as u8;
            assert!(hits <= 1, "{term}");
        }
    }

    #[test]
    fn create_contract_sentences() {
        let l = lex();
        let s = l.training_sentences(Intent::CreateContract);
        assert!(s.iter().any(|x| x == "I want to create a contract"));
        assert!(s.iter().any(|x| x == "Create a contract"));
    }

    #[test]
    fn every_intent_has_three_sentences() {
        for i in Intent::ALL {
            assert!(lex().training_sentences(i).len() >= 3, "{i}");
        }
    }

    #[test]
    fn bogus_intent_is_an_error() {
        assert_eq!(
            lex().training_sentences_for("bogus-intent"),
            Err(LexiconError::UnknownIntent("bogus-intent".into()))
        );
        assert!(lex().training_sentences_for("create_contract").is_ok());
    }

    #[test]
    fn duplicate_synonym_is_a_load_error() {
        let src = format!("{BUILTIN_LEXICON}\nconcept\tasset\trole\n");
        assert!(matches!(
            Lexicon::load(&src, BUILTIN_CORPUS),
            Err(LexiconError::DuplicateSynonym { term, .. }) if term == "role"
        ));
    }

    #[test]
    fn missing_canonical_is_a_load_error() {
        let src: String = BUILTIN_LEXICON
            .lines()
            .filter(|l| !l.starts_with("datatype\tboolean"))
            .map(|l| format!("{l}\n"))
            .collect();
        assert!(matches!(
            Lexicon::load(&src, BUILTIN_CORPUS),
            Err(LexiconError::MissingCanonical(_))
        ));
    }

    #[test]
    fn malformed_records_are_rejected() {
        assert!(matches!(
            Lexicon::load("concept\tasset\n", BUILTIN_CORPUS),
            Err(LexiconError::Malformed { line: 1, .. })
        ));
        let corpus = format!("{BUILTIN_CORPUS}\nhelp\tshow <widget>\n");
        assert!(matches!(
            Lexicon::load(BUILTIN_LEXICON, &corpus),
            Err(LexiconError::UnknownPlaceholder { .. })
        ));
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let src = format!("# header\n\n{BUILTIN_LEXICON}");
        assert!(Lexicon::load(&src, BUILTIN_CORPUS).is_ok());
    }

    #[test]
    fn multi_word_terms() {
        assert_eq!(
            lex().normalize_concept("smart   contract"),
            Some(ConceptKind::Contract)
        );
        assert_eq!(
            lex().normalize_platform("Hyperledger Composer"),
            Some(PlatformTarget::HyperledgerComposer)
        );
        assert!(lex().max_phrase_words() >= 3);
    }
}
