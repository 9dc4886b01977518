use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use swaptwist::fo::{
    enumerate_swap_models, enumerate_twist_models, qlfi1_consequence, qmbc_consequence, ModelShape,
    DEFAULT_CLOSURE_CAP,
};
use swaptwist::hilbert::{
    check_derivation, check_step, match_axiom, random_derivation, Derivation, DerivationVerdict, Justification, Logic,
    SchemaId,
};
use swaptwist::prop::is_valid;
use swaptwist::swap::m5;
use swaptwist::syntax::{parse_formula, Formula, Signature};
use swaptwist::twist::{lfi1_consequence, lfi1_matrix};

fn replace_atoms(f: &Formula, map: &BTreeMap<String, Formula>) -> Formula {
    match f {
        Formula::Atom(p, args) if args.is_empty() => map.get(p).cloned().unwrap_or_else(|| f.clone()),
        Formula::Neg(a) => Formula::neg(replace_atoms(a, map)),
        Formula::Cons(a) => Formula::cons(replace_atoms(a, map)),
        Formula::And(a, b) => Formula::and(replace_atoms(a, map), replace_atoms(b, map)),
        Formula::Or(a, b) => Formula::or(replace_atoms(a, map), replace_atoms(b, map)),
        Formula::Imp(a, b) => Formula::imp(replace_atoms(a, map), replace_atoms(b, map)),
        other => other.clone(),
    }
}

#[test]
fn catalog_instances_match_their_schemas() {
    for logic in Logic::ALL {
        for s in logic.schemas() {
            assert!(match_axiom(s, &s.sample_instance()), "{s}");
        }
    }
    assert!(!Logic::Qlfi1o.has_schema(SchemaId::Ax14));
    assert!(Logic::QmbCEq.has_schema(SchemaId::AxEq2));
}

#[test]
fn propositional_derivations_are_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (swap, twist) = (m5(), lfi1_matrix());
    for logic in [Logic::MbC, Logic::Lfi1o] {
        for _ in 0..50 {
            let d = random_derivation(logic, &["p", "q"], 12, &mut rng);
            let DerivationVerdict::Valid(c) = check_derivation(&d) else { panic!("{:?}", check_derivation(&d)) };
            assert!(lfi1_consequence(&[], &c, &twist).unwrap().holds(), "{c}");
            if logic == Logic::MbC {
                assert!(is_valid(&c, &swap).unwrap(), "{c}");
            }
        }
    }
}

/// Propositional derivations with atoms replaced by sentences stay valid in
/// the first-order calculi, and their conclusions hold on small models.
#[test]
fn first_order_derivations_are_sound_on_small_models() {
    let sig = Signature::new().with_constant("c").with_predicate("P", 1);
    let map: BTreeMap<String, Formula> = [("p", "forall x. P(x)"), ("q", "exists x. ~P(x) & *P(c)")]
        .into_iter()
        .map(|(k, v)| (k.to_string(), parse_formula(v, &sig).unwrap()))
        .collect();
    let shape = ModelShape {
        size: 2,
        constants: vec!["c".into()],
        predicates: vec![("P".into(), 1)],
        ..Default::default()
    };
    let swap_models = enumerate_swap_models(&m5(), &shape, 100).unwrap();
    let twist_models = enumerate_twist_models(&lfi1_matrix(), &shape, 100).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for logic in [Logic::QmbC, Logic::Qlfi1o] {
        for k in 0..12 {
            let d = random_derivation(logic, &["p", "q"], 8, &mut rng);
            let mut fo = Derivation::new(logic, Vec::new());
            for s in &d.steps {
                fo.push(replace_atoms(&s.formula, &map), s.by);
            }
            let DerivationVerdict::Valid(c) = check_derivation(&fo) else { panic!("{:?}", check_derivation(&fo)) };
            for s in twist_models.iter().step_by(2) {
                assert!(qlfi1_consequence(&[], &c, s).unwrap().holds(), "{c}");
            }
            if logic == Logic::QmbC {
                for s in swap_models.iter().skip(k % 5).step_by(5) {
                    assert!(qmbc_consequence(&[], &c, s, DEFAULT_CLOSURE_CAP).unwrap().holds(), "{c}");
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn verdicts_do_not_depend_on_checking_order(seed in any::<u64>(), victim in any::<prop::sample::Index>(), swap_to in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut d = random_derivation(Logic::MbC, &["p", "q", "r"], 10, &mut rng);
        let k = victim.index(d.steps.len());
        d.steps[k].by = match swap_to {
            0 => Justification::Premise,
            1 => Justification::Axiom(SchemaId::A1),
            2 => Justification::Mp(k.saturating_sub(1), k),
            _ => d.steps[k].by,
        };
        let forward: Vec<_> = (0..d.steps.len()).map(|i| check_step(&d, i)).collect();
        let backward: Vec<_> = (0..d.steps.len()).rev().map(|i| check_step(&d, i)).collect();
        prop_assert_eq!(&forward, &backward.into_iter().rev().collect::<Vec<_>>());
        let verdict = check_derivation(&d);
        prop_assert_eq!(&verdict, &check_derivation(&d.clone()));
        match forward.iter().position(|r| r.is_err()) {
            Some(i) => {
                let DerivationVerdict::Invalid { step, error } = verdict else { panic!("expected a rejection") };
                prop_assert_eq!(step, i);
                prop_assert_eq!(Err(error), forward[i].clone());
            }
            None => prop_assert!(verdict.is_valid()),
        }
    }
}
