mod common;

use common::{check_crud_script, random_ops, utterances, Op, RefModel, Vocabulary};
use icb::dialogue::{Engine, ResponseKind};
use icb::metamodel::check_invariants;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn engine() -> Engine {
    Engine::builtin()
}

#[test]
fn vocabulary_avoids_lexicon_terms() {
    let e = engine();
    let v = Vocabulary::new(e.nlu().lexicon());
    assert!(v.elements.len() >= 20, "{:?}", v.elements);
    assert!(v.params.len() >= 12, "{:?}", v.params);
}

#[test]
fn scripted_ops_match_oracle() {
    let e = engine();
    let v = Vocabulary::new(e.nlu().lexicon());
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let ops = random_ops(&mut rng, &v, 40);
        if let Err(f) = check_crud_script(&e, &ops) {
            panic!("op {} {:?}: {}", f.op_index, f.op, f.detail);
        }
    }
}

#[test]
fn every_op_kind_is_generated() {
    let e = engine();
    let v = Vocabulary::new(e.nlu().lexicon());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let ops = random_ops(&mut rng, &v, 2000);
    let seen = |f: fn(&Op) -> bool| ops.iter().any(f);
    assert!(seen(|o| matches!(o, Op::CreateParticipant { .. })));
    assert!(seen(|o| matches!(o, Op::CreateAsset { .. })));
    assert!(seen(
        |o| matches!(o, Op::CreateTransaction { rels, .. } if !rels.is_empty())
    ));
    assert!(seen(|o| matches!(o, Op::AddParam { .. })));
    assert!(seen(|o| matches!(o, Op::RemoveParam { .. })));
    assert!(seen(|o| matches!(o, Op::RetypeParam { .. })));
    assert!(seen(|o| matches!(o, Op::ChangeIdentifier { .. })));
    assert!(seen(|o| matches!(o, Op::Rename { .. })));
    assert!(seen(|o| matches!(o, Op::Delete { .. })));
    assert!(seen(|o| matches!(o, Op::Read { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn crud_scripts_agree_with_reference_map(seed in any::<u64>(), len in 1usize..=40) {
        let e = engine();
        let v = Vocabulary::new(e.nlu().lexicon());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ops = random_ops(&mut rng, &v, len);
        let result = check_crud_script(&e, &ops);
        prop_assert!(result.is_ok(), "{:?}", result.err());
    }

    #[test]
    fn unknown_names_never_mutate_the_model(
        seed in any::<u64>(),
        bogus in "[a-z]{3,10}",
        action in 0usize..3,
    ) {
        let e = engine();
        let lex = e.nlu().lexicon();
        prop_assume!(lex.lookup(&bogus).is_none() && !icb::nlu::is_stopword(&bogus));
        let v = Vocabulary::new(lex);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ops = random_ops(&mut rng, &v, 8);
        let mut s = check_crud_script(&e, &ops).unwrap();
        prop_assume!(icb::metamodel::find_element(&s.model, &bogus).is_none());
        prop_assume!(!s.model.is_contract_name(&bogus));
        let before = s.model.clone();
        let verb = ["read", "update", "delete"][action];
        let reply = e.handle_message(&mut s, &format!("{verb} the asset {bogus}")).unwrap();
        prop_assert_eq!(&s.model, &before);
        match reply.kind {
            ResponseKind::Error => {}
            ResponseKind::Confirm => {
                prop_assert!(reply.text.to_lowercase().contains("did you mean"), "{}", reply.text);
                e.handle_message(&mut s, "no").unwrap();
                prop_assert_eq!(&s.model, &before);
            }
            other => prop_assert!(false, "unexpected {:?}: {}", other, reply.text),
        }
        prop_assert!(check_invariants(&s.model).is_ok());
    }
}

#[test]
fn utterances_name_the_element_kind() {
    let mut m = RefModel::default();
    let create = Op::CreateAsset {
        name: "parcel".into(),
        params: vec![("weight".into(), icb::metamodel::DataType::DecimalType)],
        identifier: "weight".into(),
        kind: icb::metamodel::AssetKind::Tangible,
    };
    assert_eq!(
        utterances(&create, &m),
        [
            "create an asset parcel",
            "weight of type decimal",
            "done",
            "weight",
            "tangible"
        ]
    );
    m.apply(&create);
    assert_eq!(
        utterances(
            &Op::Delete {
                target: "parcel".into()
            },
            &m
        ),
        ["delete the asset parcel", "yes"]
    );
}
