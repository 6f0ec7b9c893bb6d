//! Records a conversation as a transcript, then replays it and checks that
//! every turn comes out the same.
//!
//! ```bash
//! cargo run --example replay_transcript
//! ```

use icb::dialogue::Engine;
use icb::model_store::serialize;
use icb::service::transcript::{self, Recorded};

fn main() {
    let engine = Engine::builtin();
    let lines = [
        "I want to create a contract",
        "Registry",
        "azure",
        "create a participant clerk",
        "email of type string",
        "done",
        "email",
        "yes",
        "create an asset parcel",
        "plot of type integer",
        "done",
        "plot",
        "tangible",
        "generate the code",
    ];
    let plain: Vec<Recorded> = lines
        .iter()
        .map(|u| Recorded {
            user: u.to_string(),
            expected: None,
        })
        .collect();
    let first = transcript::replay(&engine, "first", &plain).expect("session is open");
    let jsonl = transcript::render(&first.turns);
    println!("{jsonl}");

    let recorded = transcript::parse(&jsonl).expect("rendered transcripts parse");
    let second = transcript::replay(&engine, "second", &recorded).expect("session is open");
    println!("mismatches: {}", second.mismatches.len());
    println!("same artifacts: {}", first.artifacts == second.artifacts);
    print!("{}", serialize(&second.session.model));
}
