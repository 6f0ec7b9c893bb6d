//! Chats a medical-record contract into existence and prints the model and
//! the Solidity it compiles to.
//!
//! ```bash
//! cargo run --example medical_record
//! ```

use icb::dialogue::{Engine, ResponseKind};
use icb::model_store::serialize;

const SCRIPT: &[&str] = &[
    "I want to create a contract",
    "MedicalRecord",
    "Solidity",
    "create a participant patient",
    "name of type string",
    "done",
    "name",
    "yes",
    "create an asset record",
    "id of type string",
    "owner of type string",
    "done",
    "id",
    "intangible",
    "create a transaction updateRecord",
    "done",
    "record",
    "patient",
    "done",
    "generate the code",
];

fn main() {
    let engine = Engine::builtin();
    let mut session = engine.new_session();
    println!("bot> {}", engine.greeting().text);
    for line in SCRIPT {
        println!("you> {line}");
        let reply = engine
            .handle_message(&mut session, line)
            .expect("session is open");
        println!("bot> {}", reply.text);
        if reply.kind == ResponseKind::CodeReady {
            for a in &reply.artifacts {
                println!("\n--- {} ---\n{}", a.relative_path().display(), a.content);
            }
        }
    }
    println!("--- model.icb ---\n{}", serialize(&session.model));
}
