//! Runs the validator over a model with several problems and prints every
//! violation with its rule.
//!
//! ```bash
//! cargo run --example validation_report
//! ```

use icb::model_store::parse;
use icb::validator::validate;

const BROKEN: &str = "\
Contract: Shipping
Participant {
  Name: carrier
  Creator: F
  Parameter {
    Name: name
    Type: String
  }
}
Asset {
  Name: parcel
  Kind: Tangible
}
Transaction {
  Name: deliver
  Relationship {
    Target: Asset:pallet
  }
}
";

fn main() {
    let model = parse(BROKEN).expect("well-formed text");
    let violations = validate(&model);
    println!("{} violation(s)", violations.len());
    for v in &violations {
        println!("  {v}");
        println!("    rule: {}", v.rule.description());
    }
}
