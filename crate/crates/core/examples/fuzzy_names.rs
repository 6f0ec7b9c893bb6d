//! Edit distance and the "did you mean" lookup used when a user misspells
//! an element name.
//!
//! ```bash
//! cargo run --example fuzzy_names
//! ```

use icb::dialogue::Engine;
use icb::sanitizer::{levenshtein, nearest_match, normalized_distance};

fn main() {
    for (a, b) in [
        ("kitten", "sitting"),
        ("recrod", "record"),
        ("café", "cafe"),
    ] {
        println!(
            "d({a}, {b}) = {} (normalized {:.2})",
            levenshtein(a, b),
            normalized_distance(a, b)
        );
    }

    let names = ["patient", "record", "updateRecord"];
    for typo in ["pateint", "recrod", "invoice"] {
        match nearest_match(typo, &names) {
            Some(m) => println!(
                "{typo}: did you mean {}? (distance {})",
                m.candidate, m.distance
            ),
            None => println!("{typo}: no close match"),
        }
    }

    // The same lookup inside a conversation.
    let engine = Engine::builtin();
    let mut s = engine.new_session();
    for line in [
        "I want to create a contract",
        "Clinic",
        "ethereum",
        "create a participant doctor",
        "name of type string",
        "done",
        "name",
        "yes",
        "delete the participant docter",
        "no",
    ] {
        let reply = engine
            .handle_message(&mut s, line)
            .expect("session is open");
        println!("you> {line}\nbot> {}", reply.text);
    }
}
