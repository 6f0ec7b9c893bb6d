//! Edit-distance input sanitization.
//!
//! User-typed names are compared against known vocabulary with the
//! Levenshtein distance; a close candidate is offered as a correction that the
//! dialogue confirms before substituting.

use serde::{Deserialize, Serialize};

/// Largest normalized distance still offered as a correction.
pub const SUGGESTION_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchSuggestion {
    pub candidate: String,
    /// Position of `candidate` in the list that was searched.
    pub index: usize,
    pub distance: usize,
    /// `distance / max(len(input), len(candidate))`, in code points.
    pub normalized: f64,
}

impl MatchSuggestion {
    pub fn is_exact(&self) -> bool {
        self.distance == 0
    }
}

/// Minimum number of single code-point insertions, deletions and substitutions
/// turning `a` into `b`. Bottom-up over two rolling rows.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    // Iterate over the shorter string in the inner loop.
    let (a, b) = if a.len() < b.len() { (b, a) } else { (a, b) };
    if b.is_empty() {
        return a.len();
    }

    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let substitution = prev[j] + usize::from(ca != cb);
            cur[j + 1] = substitution.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

pub fn normalized_distance(a: &str, b: &str) -> f64 {
    let longest = a.chars().count().max(b.chars().count());
    if longest == 0 {
        return 0.0;
    }
    levenshtein(a, b) as f64 / longest as f64
}

/// Closest candidate to `input`, provided its normalized distance is within
/// [`SUGGESTION_THRESHOLD`]. Ties go to the earliest candidate.
pub fn nearest_match<S: AsRef<str>>(input: &str, candidates: &[S]) -> Option<MatchSuggestion> {
    let mut best: Option<MatchSuggestion> = None;
    for (index, candidate) in candidates.iter().enumerate() {
        let candidate = candidate.as_ref();
        let distance = levenshtein(input, candidate);
        if distance == 0 {
            return Some(MatchSuggestion {
                candidate: candidate.to_string(),
                index,
                distance: 0,
                normalized: 0.0,
            });
        }
        if best.as_ref().is_some_and(|b| b.distance <= distance) {
            continue;
        }
        let longest = input.chars().count().max(candidate.chars().count());
        best = Some(MatchSuggestion {
            candidate: candidate.to_string(),
            index,
            distance,
            normalized: distance as f64 / longest as f64,
        });
    }
    best.filter(|b| b.normalized <= SUGGESTION_THRESHOLD)
}
