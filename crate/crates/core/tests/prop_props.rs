mod common;

use proptest::prelude::*;
use swaptwist::algebra::powerset_algebra;
use swaptwist::hilbert::{Logic, SchemaId};
use swaptwist::prop::{is_valid, prop_consequence};
use swaptwist::swap::{full_swap, m5};
use swaptwist::syntax::Formula;

use common::prop_formula;

const ATOMS: &[&str] = &["p", "q", "r"];

/// Atoms over `p, q` and every formula with exactly one connective over them.
fn depth_one_fillings() -> Vec<Formula> {
    let atoms = [Formula::prop("p"), Formula::prop("q")];
    let mut out = atoms.to_vec();
    for a in &atoms {
        out.push(Formula::neg(a.clone()));
        out.push(Formula::cons(a.clone()));
        for b in &atoms {
            out.push(Formula::and(a.clone(), b.clone()));
            out.push(Formula::or(a.clone(), b.clone()));
            out.push(Formula::imp(a.clone(), b.clone()));
        }
    }
    out
}

#[test]
fn mbc_axiom_instances_are_valid_in_m5() {
    let m = m5();
    let fills = depth_one_fillings();
    let mut checked = 0;
    for s in Logic::MbC.schemas() {
        let k = s.metavariables().len();
        let mut digits = vec![0usize; k];
        loop {
            let args: Vec<Formula> = digits.iter().map(|&d| fills[d].clone()).collect();
            let f = s.instantiate(&args).unwrap();
            assert!(is_valid(&f, &m).unwrap(), "{s}: {f}");
            checked += 1;
            let mut i = k;
            while i > 0 && digits[i - 1] + 1 == fills.len() {
                digits[i - 1] = 0;
                i -= 1;
            }
            if i == 0 {
                break;
            }
            digits[i - 1] += 1;
        }
    }
    assert_eq!(Logic::MbC.schemas().len(), 11);
    assert!(checked > 10_000);
    assert!(!Logic::MbC.schemas().contains(&SchemaId::Ci));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn countermodels_are_legal(
        gamma in prop::collection::vec(prop_formula(ATOMS, 3), 0..3),
        phi in prop_formula(ATOMS, 3),
        atoms in 1u32..=2,
    ) {
        let m = full_swap(&powerset_algebra(atoms).unwrap()).unwrap();
        if let Some(v) = prop_consequence(&gamma, &phi, &m).unwrap().countermodel() {
            prop_assert_eq!(v.check(&m), Ok(()));
            for g in &gamma {
                prop_assert!(v.get(g).unwrap().is_designated());
            }
            prop_assert!(!v.get(&phi).unwrap().is_designated());
        }
    }

    #[test]
    fn consequence_is_monotone(
        gamma in prop::collection::vec(prop_formula(ATOMS, 3), 0..3),
        extra in prop_formula(ATOMS, 3),
        phi in prop_formula(ATOMS, 3),
    ) {
        let m = m5();
        let base = prop_consequence(&gamma, &phi, &m).unwrap();
        let mut wider = gamma.clone();
        wider.push(extra);
        if base.holds() {
            prop_assert!(prop_consequence(&wider, &phi, &m).unwrap().holds());
        }
        prop_assert_eq!(base, prop_consequence(&gamma, &phi, &m).unwrap());
    }
}
