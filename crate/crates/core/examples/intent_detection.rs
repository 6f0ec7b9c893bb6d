//! Shows how utterances are tokenized, mapped onto lexicon terms and scored
//! against the training sentences.
//!
//! ```bash
//! cargo run --example intent_detection
//! cargo run --example intent_detection -- "please remove the asset car"
//! ```

use icb::lexicon::Intent;
use icb::nlu::Nlu;

fn main() {
    let nlu = Nlu::builtin();
    let inputs: Vec<String> = match std::env::args().nth(1) {
        Some(u) => vec![u],
        None => [
            "I want to create a contract",
            "A contract",
            "add a new member called nurse",
            "remove the asset car",
            "show me the transaction transfer",
            "generate the code",
        ]
        .map(String::from)
        .to_vec(),
    };
    for u in &inputs {
        let parsed = nlu.match_intent(u, &Intent::ALL);
        println!("{u}");
        match parsed.intent {
            Some(i) => println!("  intent      {i} (score {:.2})", parsed.score),
            None => println!("  intent      none (best score {:.2})", parsed.score),
        }
        let terms: Vec<String> = parsed.terms().map(|t| format!("{t:?}")).collect();
        println!("  terms       {}", terms.join(", "));
        if !parsed.proper_nouns.is_empty() {
            println!("  names       {}", parsed.proper_nouns.join(", "));
        }
        for (slot, value) in &parsed.values {
            println!("  {slot:<11} {value}");
        }
    }
}
