//! Parses a model written in the `.icb` text format, validates it and
//! compiles it for every platform.
//!
//! ```bash
//! cargo run --example compile_dsl
//! cargo run --example compile_dsl -- path/to/model.icb
//! ```

use icb::codegen::generate_all;
use icb::model_store::parse;
use icb::validator::validate;

const MODEL: &str = "\
Contract: Lending
Platform: HyperledgerComposer
Participant {
  Name: librarian
  Creator: T
  Identifier: email
  Parameter {
    Name: email
    Type: String
  }
}
Asset {
  Name: book
  Kind: Tangible
  Identifier: isbn
  Parameter {
    Name: isbn
    Type: String
  }
  Parameter {
    Name: copies
    Type: Integer
  }
}
Transaction {
  Name: lend
  Parameter {
    Name: loanDays
    Type: Integer
  }
  Relationship {
    Target: Asset:book
  }
}
";

fn main() {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}")),
        None => MODEL.to_string(),
    };
    let model = match parse(&text) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("syntax error: {e}");
            std::process::exit(2);
        }
    };
    let violations = validate(&model);
    if !violations.is_empty() {
        for v in &violations {
            println!("{v}");
        }
        std::process::exit(1);
    }
    for a in generate_all(&model).expect("valid models generate") {
        println!("--- {} ---\n{}", a.relative_path().display(), a.content);
    }
}
