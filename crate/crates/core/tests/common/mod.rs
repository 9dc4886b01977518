//! Strategies shared by the property tests.
#![allow(dead_code)]

use proptest::prelude::*;
use swaptwist::syntax::{Formula, Signature, Term};

pub const VARS: [&str; 3] = ["x", "y", "z"];

/// `P/1`, `Q/2`, nullary `r`, constant `c`, function `f/1`, and equality.
pub fn signature() -> Signature {
    Signature::new()
        .with_predicate("P", 1)
        .with_predicate("Q", 2)
        .with_predicate("r", 0)
        .with_constant("c")
        .with_function("f", 1)
        .with_equality()
}

pub fn var() -> impl Strategy<Value = String> {
    prop::sample::select(&VARS[..]).prop_map(str::to_string)
}

/// Terms over `x, y, z`, `c`, and `f`; domain constants `@0 .. @{domain}` when
/// `domain > 0`.
pub fn term(domain: usize) -> impl Strategy<Value = Term> {
    let mut leaves = vec![var().prop_map(Term::Var).boxed(), Just(Term::constant("c")).boxed()];
    if domain > 0 {
        leaves.push((0..domain).prop_map(Term::Domain).boxed());
    }
    prop::strategy::Union::new(leaves).prop_recursive(2, 4, 1, |t| t.prop_map(|a| Term::app("f", vec![a])))
}

fn atom(domain: usize) -> impl Strategy<Value = Formula> {
    prop_oneof![
        term(domain).prop_map(|t| Formula::atom("P", vec![t])),
        (term(domain), term(domain)).prop_map(|(a, b)| Formula::atom("Q", vec![a, b])),
        Just(Formula::prop("r")),
        (term(domain), term(domain)).prop_map(|(a, b)| Formula::eq(a, b)),
    ]
}

fn grow(leaf: BoxedStrategy<Formula>, depth: u32) -> BoxedStrategy<Formula> {
    leaf.prop_recursive(depth, 24, 2, |f| {
        prop_oneof![
            f.clone().prop_map(Formula::neg),
            f.clone().prop_map(Formula::cons),
            (f.clone(), f.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (f.clone(), f.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (f.clone(), f.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            (var(), f.clone()).prop_map(|(x, a)| Formula::forall(&x, a)),
            (var(), f).prop_map(|(x, a)| Formula::exists(&x, a)),
        ]
    })
    .boxed()
}

/// First-order formulas over [`signature`].
pub fn formula(depth: u32) -> BoxedStrategy<Formula> {
    grow(atom(0).boxed(), depth)
}

/// First-order formulas that may mention `@0 .. @{domain - 1}`.
pub fn diagram_formula(domain: usize, depth: u32) -> BoxedStrategy<Formula> {
    grow(atom(domain).boxed(), depth)
}

/// Formulas over `P/1` and `c` only, as used with small enumerated models.
pub fn monadic_formula(depth: u32) -> BoxedStrategy<Formula> {
    let leaf = prop_oneof![var().prop_map(Term::Var), Just(Term::constant("c"))]
        .prop_map(|t| Formula::atom("P", vec![t]))
        .boxed();
    grow(leaf, depth)
}

/// Propositional formulas over `atoms`.
pub fn prop_formula(atoms: &'static [&'static str], depth: u32) -> BoxedStrategy<Formula> {
    prop::sample::select(atoms)
        .prop_map(Formula::prop)
        .prop_recursive(depth, 16, 2, |f| {
            prop_oneof![
                f.clone().prop_map(Formula::neg),
                f.clone().prop_map(Formula::cons),
                (f.clone(), f.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (f.clone(), f.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                (f.clone(), f).prop_map(|(a, b)| Formula::imp(a, b)),
            ]
        })
        .boxed()
}
