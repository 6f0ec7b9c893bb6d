//! Post-generation checks on artifact text.

use super::{lower_first, type_name, GeneratedArtifact};

/// Checks that `()`, `[]` and `{}` nest properly, ignoring string literals
/// and `//` / `/* */` comments.
pub fn check_delimiters(text: &str) -> Result<(), String> {
    let chars: Vec<char> = text.chars().collect();
    let mut stack: Vec<(char, usize)> = Vec::new();
    let mut line = 1;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            '\n' => line += 1,
            '/' if chars.get(i + 1) == Some(&'/') => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            '/' if chars.get(i + 1) == Some(&'*') => {
                i += 2;
                while i < chars.len() && !(chars[i] == '*' && chars.get(i + 1) == Some(&'/')) {
                    if chars[i] == '\n' {
                        line += 1;
                    }
                    i += 1;
                }
                if i >= chars.len() {
                    return Err(format!("unterminated comment at line {line}"));
                }
                i += 2;
                continue;
            }
            '"' | '\'' => {
                let open_line = line;
                i += 1;
                while i < chars.len() && chars[i] != c {
                    match chars[i] {
                        '\\' => i += 1,
                        '\n' => return Err(format!("unterminated string at line {open_line}")),
                        _ => {}
                    }
                    i += 1;
                }
                if i >= chars.len() {
                    return Err(format!("unterminated string at line {open_line}"));
                }
            }
            '(' | '[' | '{' => stack.push((c, line)),
            ')' | ']' | '}' => {
                let want = match c {
                    ')' => '(',
                    ']' => '[',
                    _ => '{',
                };
                match stack.pop() {
                    Some((open, _)) if open == want => {}
                    Some((open, at)) => {
                        return Err(format!(
                            "`{c}` at line {line} does not close `{open}` from line {at}"
                        ))
                    }
                    None => return Err(format!("unmatched `{c}` at line {line}")),
                }
            }
            _ => {}
        }
        i += 1;
    }
    match stack.pop() {
        Some((open, at)) => Err(format!("`{open}` from line {at} is never closed")),
        None => Ok(()),
    }
}

/// First unresolved `{{slot}}` marker, if any.
pub fn find_placeholder(text: &str) -> Option<&str> {
    let mut rest = text;
    let mut base = 0;
    while let Some(i) = rest.find("{{") {
        let after = &rest[i + 2..];
        let name_len = after
            .find(|c: char| !(c.is_ascii_lowercase() || c == '_'))
            .unwrap_or(after.len());
        if name_len > 0 && after[name_len..].starts_with("}}") {
            let start = base + i;
            return Some(&text[start..start + name_len + 4]);
        }
        base += i + 1;
        rest = &rest[i + 1..];
    }
    None
}

/// Number of top-level `contract X` declarations in Solidity source.
pub fn contract_declarations(source: &str) -> usize {
    source
        .lines()
        .filter(|l| {
            let mut words = l.split_whitespace();
            words.next() == Some("contract")
                && words
                    .next()
                    .is_some_and(|w| w.starts_with(|c: char| c.is_ascii_alphabetic()))
        })
        .count()
}

/// Whether the artifact declares the transaction in its platform's syntax.
pub fn declares_transaction(artifact: &GeneratedArtifact, name: &str) -> bool {
    let c = &artifact.content;
    match artifact.extension() {
        "sol" => c.contains(&format!("function {name}(")),
        "cto" => c.contains(&format!("transaction {} {{", type_name(name))),
        "js" => c.contains(&format!("async function {}(tx)", lower_first(name))),
        "json" => c.contains(&format!("\"Function\": \"{name}\"")),
        _ => false,
    }
}

/// All per-file invariants of a generated artifact.
pub fn check_artifact(a: &GeneratedArtifact) -> Result<(), String> {
    if a.content.trim().is_empty() {
        return Err("content is empty".into());
    }
    check_delimiters(&a.content)?;
    if let Some(p) = find_placeholder(&a.content) {
        return Err(format!("unresolved placeholder {p}"));
    }
    if a.extension() == "sol" {
        let n = contract_declarations(&a.content);
        if n != 1 {
            return Err(format!("expected one contract declaration, found {n}"));
        }
    }
    let lines = a.content.lines().count();
    for p in &a.provenance {
        if p.lines.start < 1 || p.lines.start > p.lines.end || p.lines.end > lines {
            return Err(format!(
                "provenance {}..{} for {} is outside 1..{lines}",
                p.lines.start, p.lines.end, p.element
            ));
        }
    }
    Ok(())
}
