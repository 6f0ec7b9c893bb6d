mod common;

use std::collections::BTreeSet;

use common::{held_out_accuracy, paraphrases};
use icb::dialogue::{DialogueState, Engine};
use icb::lexicon::Intent;

#[test]
fn paraphrase_set_is_large_and_held_out() {
    let e = Engine::builtin();
    let lex = e.nlu().lexicon();
    let set = paraphrases(lex);
    let training: BTreeSet<String> = lex
        .corpus()
        .values()
        .flatten()
        .map(|s| s.to_lowercase())
        .collect();
    for intent in Intent::ALL {
        let p = &set[&intent];
        assert!(p.len() >= 3, "{intent} has only {p:?}");
        for s in p {
            assert!(!training.contains(s), "{s} is a training sentence");
        }
    }
}

#[test]
fn held_out_paraphrases_reach_ninety_percent() {
    let e = Engine::builtin();
    let (correct, total, misses) = held_out_accuracy(&e);
    let acc = correct as f64 / total as f64;
    eprintln!("accuracy {correct}/{total} = {acc:.3}");
    for m in misses.iter().take(40) {
        eprintln!("  {m}");
    }
    assert!(acc >= 0.9);
}

#[test]
fn create_contract_utterance_is_recognised_and_bare_noun_is_not() {
    let e = Engine::builtin();
    let legal = DialogueState::Start.legal_intents();
    let yes = e.nlu().match_intent("I want to create a contract", legal);
    assert_eq!(yes.intent, Some(Intent::CreateContract));
    let no = e.nlu().match_intent("A contract", legal);
    assert_eq!(no.intent, None, "score {}", no.score);
}
