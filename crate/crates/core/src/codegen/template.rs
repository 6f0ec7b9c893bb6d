//! Minimal slot templates with line provenance.
//!
//! A template is plain text with `{{slot}}` markers (slot names are lowercase
//! ASCII and `_`). Rendering substitutes either plain text or an already
//! rendered block; blocks carry their own provenance, which is shifted to the
//! line where the block lands.

use serde::{Deserialize, Serialize};

use super::CodegenError;
use crate::metamodel::ElementId;

/// 1-based inclusive line range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineRange {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub lines: LineRange,
    pub element: ElementId,
}

/// Rendered text plus the model elements each line range came from.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Rendered {
    pub text: String,
    pub provenance: Vec<Provenance>,
}

fn line_count(text: &str) -> usize {
    text.lines().count()
}

impl Rendered {
    pub fn plain(text: impl Into<String>) -> Self {
        Rendered {
            text: text.into(),
            provenance: Vec::new(),
        }
    }

    fn append(&mut self, other: Rendered) {
        // Line on which the first character of `other` lands.
        let offset = self.text.matches('\n').count();
        self.provenance
            .extend(other.provenance.into_iter().map(|p| Provenance {
                lines: LineRange {
                    start: p.lines.start + offset,
                    end: p.lines.end + offset,
                },
                element: p.element,
            }));
        self.text.push_str(&other.text);
    }

    /// Joins blocks with a plain separator.
    pub fn join(parts: impl IntoIterator<Item = Rendered>, sep: &str) -> Rendered {
        let mut out = Rendered::default();
        for (i, part) in parts.into_iter().enumerate() {
            if i > 0 {
                out.append(Rendered::plain(sep));
            }
            out.append(part);
        }
        out
    }

    /// Attributes every line of the block to `element`. Leading newlines
    /// close the line the block is inserted on and are not counted.
    pub fn owned_by(mut self, element: ElementId) -> Rendered {
        let lines = line_count(&self.text);
        let start = 1 + self.text.len() - self.text.trim_start_matches('\n').len();
        if lines >= start {
            self.provenance.insert(
                0,
                Provenance {
                    lines: LineRange { start, end: lines },
                    element,
                },
            );
        }
        self
    }
}

pub enum SlotValue {
    Text(String),
    Block(Rendered),
}

impl From<String> for SlotValue {
    fn from(s: String) -> Self {
        SlotValue::Text(s)
    }
}

impl From<&str> for SlotValue {
    fn from(s: &str) -> Self {
        SlotValue::Text(s.to_string())
    }
}

impl From<Rendered> for SlotValue {
    fn from(r: Rendered) -> Self {
        SlotValue::Block(r)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Part {
    Text(String),
    Slot(String),
}

#[derive(Debug, Clone)]
pub struct Template {
    name: &'static str,
    parts: Vec<Part>,
}

fn is_slot_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_lowercase() || c == '_')
}

impl Template {
    pub fn parse(name: &'static str, src: &str) -> Self {
        let mut parts = Vec::new();
        let mut text = String::new();
        let mut rest = src;
        while let Some(open) = rest.find("{{") {
            // `{{{x}}}` is a literal brace around slot `x`.
            let mut open = open;
            while rest[open + 2..].starts_with('{') {
                open += 1;
            }
            let after = &rest[open + 2..];
            match after.find("}}") {
                Some(close) if is_slot_name(&after[..close]) => {
                    text.push_str(&rest[..open]);
                    if !text.is_empty() {
                        parts.push(Part::Text(std::mem::take(&mut text)));
                    }
                    parts.push(Part::Slot(after[..close].to_string()));
                    rest = &after[close + 2..];
                }
                _ => {
                    text.push_str(&rest[..open + 2]);
                    rest = after;
                }
            }
        }
        text.push_str(rest);
        if !text.is_empty() {
            parts.push(Part::Text(text));
        }
        Template { name, parts }
    }

    pub fn slots(&self) -> impl Iterator<Item = &str> {
        self.parts.iter().filter_map(|p| match p {
            Part::Slot(s) => Some(s.as_str()),
            Part::Text(_) => None,
        })
    }

    /// Fills every slot; a slot without a value is an error.
    pub fn render(&self, values: Vec<(&str, SlotValue)>) -> Result<Rendered, CodegenError> {
        let mut values: Vec<(&str, Option<SlotValue>)> =
            values.into_iter().map(|(k, v)| (k, Some(v))).collect();
        let mut out = Rendered::default();
        for part in &self.parts {
            match part {
                Part::Text(t) => out.append(Rendered::plain(t.as_str())),
                Part::Slot(slot) => {
                    let value = values.iter_mut().find(|(k, _)| k == slot).ok_or_else(|| {
                        CodegenError::Template {
                            template: self.name,
                            slot: slot.clone(),
                        }
                    })?;
                    match &mut value.1 {
                        Some(SlotValue::Text(t)) => out.append(Rendered::plain(t.clone())),
                        Some(SlotValue::Block(b)) => {
                            // A block may be used once; later uses get a copy.
                            out.append(b.clone())
                        }
                        None => unreachable!(),
                    }
                }
            }
        }
        Ok(out)
    }
}
