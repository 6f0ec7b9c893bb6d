//! Rule-based understanding of a single utterance.
//!
//! An utterance is tokenized, each word is classified against the lexicon
//! (verbs, regular nouns, proper nouns), and the canonicalized content is
//! scored against every training sentence of the intents legal in the current
//! dialogue state.
//!
//! Similarity is a weighted Jaccard overlap: verbs (the CRUD actions and
//! `generate`) weigh 2, every other feature weighs 1, and placeholders in a training sentence match any one
//! unmatched utterance feature of their slot class.

use std::collections::{BTreeMap, HashSet};
use std::ops::Range;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::lexicon::{Intent, Keyword, Lexicon, Placeholder, Term};
use crate::metamodel::{ConceptKind, CrudAction};

/// Minimum score for an intent to be accepted.
pub const INTENT_THRESHOLD: f64 = 0.5;

const ACTION_WEIGHT: u32 = 2;

/// Function words dropped before scoring.
pub const STOPWORDS: &[&str] = &[
    "a", "an", "the", "i", "me", "my", "mine", "we", "us", "our", "you", "your", "it", "its",
    "this", "that", "these", "those", "is", "are", "was", "were", "be", "been", "am", "to", "of",
    "for", "with", "and", "or", "in", "on", "at", "by", "from", "as", "into", "please", "want",
    "would", "like", "wish", "need", "let", "lets", "can", "could", "will", "shall", "should",
    "do", "does", "so", "just", "now", "then", "also", "called", "named", "call", "some", "any",
    "another", "more", "other", "new", "what", "which", "there", "here", "have", "has", "had",
    "about", "all", "whole", "entire", "current", "get", "go", "ahead", "thanks", "thank", "else",
    "give", "use", "s", "t", "m", "ll", "re", "ve", "hi", "hello", "hey", "one",
];

/// Stopwords that introduce a value ("rename it *to* owner", "*called* patient").
pub const MARKERS: &[&str] = &["to", "is", "as", "called", "named", "of"];

pub fn is_stopword(word: &str) -> bool {
    STOPWORDS.contains(&word)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TokenKind {
    Word,
    Number,
    Punct,
    Quoted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    /// Text as typed; for quoted spans, the text between the quotes.
    pub surface: String,
    pub lowered: String,
    pub kind: TokenKind,
    /// Byte range in the utterance, including quotes for quoted spans.
    pub span: Range<usize>,
}

/// Splits an utterance into words, numbers, punctuation and quoted spans.
///
/// Only whitespace lies between consecutive token spans, so the utterance can
/// be rebuilt from the spans.
pub fn tokenize(utterance: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut iter = utterance.char_indices().peekable();
    while let Some(&(start, c)) = iter.peek() {
        if c.is_whitespace() {
            iter.next();
            continue;
        }
        if c == '"' {
            if let Some(close) = utterance[start + 1..].find('"') {
                let end = start + 1 + close + 1;
                let inner = &utterance[start + 1..end - 1];
                tokens.push(Token {
                    surface: inner.to_string(),
                    lowered: inner.to_lowercase(),
                    kind: TokenKind::Quoted,
                    span: start..end,
                });
                while iter.peek().is_some_and(|&(i, _)| i < end) {
                    iter.next();
                }
                continue;
            }
        }
        if c.is_alphanumeric() || c == '_' {
            let mut end = start;
            while let Some(&(i, ch)) = iter.peek() {
                if ch.is_alphanumeric() || ch == '_' {
                    end = i + ch.len_utf8();
                    iter.next();
                } else {
                    break;
                }
            }
            let surface = &utterance[start..end];
            let kind = if surface.chars().all(|ch| ch.is_ascii_digit()) {
                TokenKind::Number
            } else {
                TokenKind::Word
            };
            tokens.push(Token {
                surface: surface.to_string(),
                lowered: surface.to_lowercase(),
                kind,
                span: start..end,
            });
            continue;
        }
        iter.next();
        let end = start + c.len_utf8();
        tokens.push(Token {
            surface: c.to_string(),
            lowered: c.to_string(),
            kind: TokenKind::Punct,
            span: start..end,
        });
    }
    tokens
}

/// One classified unit of an utterance, in utterance order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "item", content = "value")]
pub enum Item {
    Term {
        surface: String,
        term: Term,
    },
    /// A proper-noun phrase: adjacent non-lexicon words, or a quoted span.
    Noun(String),
    Number(String),
    Marker(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Phrases {
    pub verbs: Vec<(String, CrudAction)>,
    pub regular_nouns: Vec<(String, Term)>,
    pub proper_nouns: Vec<String>,
    pub items: Vec<Item>,
}

/// Splits tokens into verbs (action synonyms), regular nouns (other lexicon
/// terms) and proper nouns (everything else except stopwords).
pub fn classify_phrases(lexicon: &Lexicon, tokens: &[Token]) -> Phrases {
    let mut out = Phrases::default();
    let max_words = lexicon.max_phrase_words();
    let mut i = 0;
    // Index of the token that ended the last proper-noun phrase, for merging.
    let mut last_noun_end: Option<usize> = None;
    while i < tokens.len() {
        let tok = &tokens[i];
        match tok.kind {
            TokenKind::Punct => {
                i += 1;
                continue;
            }
            TokenKind::Quoted => {
                if !tok.surface.trim().is_empty() {
                    out.items.push(Item::Noun(tok.surface.trim().to_string()));
                }
                i += 1;
                continue;
            }
            TokenKind::Number => {
                out.items.push(Item::Number(tok.surface.clone()));
                i += 1;
                continue;
            }
            TokenKind::Word => {}
        }

        // Longest lexicon phrase over consecutive words.
        let mut hit = None;
        let run = tokens[i..]
            .iter()
            .take(max_words)
            .take_while(|t| t.kind == TokenKind::Word)
            .count();
        for n in (1..=run).rev() {
            let phrase = tokens[i..i + n]
                .iter()
                .map(|t| t.lowered.as_str())
                .collect::<Vec<_>>()
                .join(" ");
            if let Some(term) = lexicon.lookup(&phrase) {
                let surface = tokens[i..i + n]
                    .iter()
                    .map(|t| t.surface.as_str())
                    .collect::<Vec<_>>()
                    .join(" ");
                hit = Some((n, surface, term));
                break;
            }
        }
        if let Some((n, surface, term)) = hit {
            match term {
                Term::Action(a) => out.verbs.push((surface.clone(), a)),
                other => out.regular_nouns.push((surface.clone(), other)),
            }
            out.items.push(Item::Term { surface, term });
            i += n;
            continue;
        }

        if is_stopword(&tok.lowered) {
            if MARKERS.contains(&tok.lowered.as_str()) {
                out.items.push(Item::Marker(tok.lowered.clone()));
            }
            i += 1;
            continue;
        }

        let merge = last_noun_end == Some(i.wrapping_sub(1));
        match (merge, out.items.last_mut()) {
            (true, Some(Item::Noun(phrase))) => {
                phrase.push(' ');
                phrase.push_str(&tok.surface);
            }
            _ => out.items.push(Item::Noun(tok.surface.clone())),
        }
        last_noun_end = Some(i);
        i += 1;
    }
    out.proper_nouns = out
        .items
        .iter()
        .filter_map(|it| match it {
            Item::Noun(n) => Some(n.clone()),
            _ => None,
        })
        .collect();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SlotClass {
    Name,
    Concept,
    Type,
    Platform,
    Kind,
    Other,
}

impl From<Placeholder> for SlotClass {
    fn from(p: Placeholder) -> Self {
        match p {
            Placeholder::Name => SlotClass::Name,
            Placeholder::Concept => SlotClass::Concept,
            Placeholder::Type => SlotClass::Type,
            Placeholder::Platform => SlotClass::Platform,
            Placeholder::Kind => SlotClass::Kind,
        }
    }
}

#[derive(Debug, Clone)]
struct Feature {
    key: String,
    weight: u32,
    class: SlotClass,
}

fn features(items: &[Item]) -> Vec<Feature> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for item in items {
        let feature = match item {
            Item::Term { term, .. } => Feature {
                key: term.feature(),
                weight: if matches!(term, Term::Action(_) | Term::Keyword(Keyword::Generate)) {
                    ACTION_WEIGHT
                } else {
                    1
                },
                class: match term {
                    // `<concept>` slots stand for element kinds only.
                    Term::Concept(c) if c.is_element() => SlotClass::Concept,
                    Term::DataType(_) => SlotClass::Type,
                    Term::Platform(_) => SlotClass::Platform,
                    Term::AssetKind(_) => SlotClass::Kind,
                    _ => SlotClass::Other,
                },
            },
            Item::Noun(n) => Feature {
                key: format!("noun:{}", n.to_lowercase()),
                weight: 1,
                class: SlotClass::Name,
            },
            Item::Number(n) => Feature {
                key: format!("num:{n}"),
                weight: 1,
                class: SlotClass::Other,
            },
            Item::Marker(_) => continue,
        };
        if seen.insert(feature.key.clone()) {
            out.push(feature);
        }
    }
    out
}

/// A compiled training sentence.
#[derive(Debug, Clone)]
struct Pattern {
    literals: Vec<Feature>,
    placeholders: Vec<SlotClass>,
}

impl Pattern {
    fn compile(lexicon: &Lexicon, sentence: &str) -> Self {
        let mut literals = Vec::new();
        let mut placeholders = Vec::new();
        let mut segment = String::new();
        let flush = |segment: &mut String, literals: &mut Vec<Feature>| {
            let phrases = classify_phrases(lexicon, &tokenize(segment));
            literals.extend(features(&phrases.items));
            segment.clear();
        };
        for word in sentence.split_whitespace() {
            if let Some(p) = Placeholder::parse(word) {
                flush(&mut segment, &mut literals);
                placeholders.push(p.into());
            } else {
                segment.push_str(word);
                segment.push(' ');
            }
        }
        flush(&mut segment, &mut literals);
        let mut seen = HashSet::new();
        literals.retain(|f| seen.insert(f.key.clone()));
        Pattern {
            literals,
            placeholders,
        }
    }

    fn weight(&self) -> u32 {
        self.literals.iter().map(|f| f.weight).sum::<u32>() + self.placeholders.len() as u32
    }

    fn score(&self, utterance: &[Feature]) -> f64 {
        let mut used = vec![false; utterance.len()];
        let mut matched = 0u32;
        for lit in &self.literals {
            if let Some(i) = utterance.iter().position(|f| f.key == lit.key) {
                used[i] = true;
                matched += lit.weight;
            }
        }
        for class in &self.placeholders {
            if let Some(i) = utterance
                .iter()
                .enumerate()
                .position(|(i, f)| !used[i] && f.class == *class)
            {
                used[i] = true;
                matched += utterance[i].weight;
            }
        }
        let total_u: u32 = utterance.iter().map(|f| f.weight).sum();
        let union = total_u + self.weight() - matched;
        if union == 0 {
            0.0
        } else {
            f64::from(matched) / f64::from(union)
        }
    }
}

/// Result of understanding one utterance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParsedInput {
    pub intent: Option<Intent>,
    pub score: f64,
    pub action: Option<CrudAction>,
    pub concept: Option<ConceptKind>,
    pub proper_nouns: Vec<String>,
    /// Typed values found in the utterance, keyed by slot (`type`, `platform`, `kind`, `number`).
    pub values: BTreeMap<String, String>,
    pub items: Vec<Item>,
}

impl ParsedInput {
    pub fn terms(&self) -> impl Iterator<Item = Term> + '_ {
        self.items.iter().filter_map(|it| match it {
            Item::Term { term, .. } => Some(*term),
            _ => None,
        })
    }

    pub fn has_term(&self, term: Term) -> bool {
        self.terms().any(|t| t == term)
    }
}

/// Intent matcher over an immutable lexicon.
#[derive(Debug, Clone)]
pub struct Nlu {
    lexicon: Arc<Lexicon>,
    patterns: BTreeMap<Intent, Vec<Pattern>>,
}

impl Nlu {
    pub fn new(lexicon: Arc<Lexicon>) -> Self {
        let patterns = lexicon
            .corpus()
            .iter()
            .map(|(intent, sentences)| {
                let compiled = sentences
                    .iter()
                    .map(|s| Pattern::compile(&lexicon, s))
                    .collect();
                (*intent, compiled)
            })
            .collect();
        Nlu { lexicon, patterns }
    }

    pub fn builtin() -> Self {
        Nlu::new(Lexicon::builtin())
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    pub fn classify(&self, utterance: &str) -> Phrases {
        classify_phrases(&self.lexicon, &tokenize(utterance))
    }

    /// Best score of `intent` for an utterance, ignoring the dialogue context.
    pub fn score(&self, utterance: &str, intent: Intent) -> f64 {
        let feats = features(&self.classify(utterance).items);
        self.best_score(intent, &feats)
    }

    fn best_score(&self, intent: Intent, feats: &[Feature]) -> f64 {
        self.patterns
            .get(&intent)
            .into_iter()
            .flatten()
            .map(|p| p.score(feats))
            .fold(0.0, f64::max)
    }

    /// Scores the intents in `legal` and keeps the best one if it clears
    /// [`INTENT_THRESHOLD`]. Ties go to the lexicographically smaller intent id.
    pub fn match_intent(&self, utterance: &str, legal: &[Intent]) -> ParsedInput {
        let phrases = self.classify(utterance);
        let feats = features(&phrases.items);

        let mut best: Option<(f64, Intent)> = None;
        for &intent in legal {
            let score = self.best_score(intent, &feats);
            let better = match best {
                None => true,
                Some((s, i)) => score > s || (score == s && intent.as_str() < i.as_str()),
            };
            if better {
                best = Some((score, intent));
            }
        }
        let score = best.map_or(0.0, |(s, _)| s);
        let intent = best.filter(|(s, _)| *s >= INTENT_THRESHOLD).map(|(_, i)| i);

        let mut values = BTreeMap::new();
        for (_, term) in &phrases.regular_nouns {
            let (slot, value) = match term {
                Term::DataType(d) => ("type", d.dsl_token().to_string()),
                Term::Platform(p) => ("platform", p.dsl_token().to_string()),
                Term::AssetKind(k) => ("kind", k.dsl_token().to_string()),
                _ => continue,
            };
            values.entry(slot.to_string()).or_insert(value);
        }
        if let Some(Item::Number(n)) = phrases.items.iter().find(|i| matches!(i, Item::Number(_))) {
            values.insert("number".to_string(), n.clone());
        }

        ParsedInput {
            intent,
            score,
            action: phrases.verbs.first().map(|(_, a)| *a),
            concept: phrases.regular_nouns.iter().find_map(|(_, t)| match t {
                Term::Concept(c) => Some(*c),
                _ => None,
            }),
            proper_nouns: phrases.proper_nouns,
            values,
            items: phrases.items,
        }
    }
}
