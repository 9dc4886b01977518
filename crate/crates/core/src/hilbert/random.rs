//! Random premise-free derivations built by forward chaining: axiom
//! instances of the logic's propositional schemas combined with MP.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::random::random_formula;
use crate::syntax::Formula;

use super::{Derivation, Justification, Logic, SchemaId};

/// A metavariable value: a fresh small formula, or a proven formula or one
/// of its immediate parts, so that MP has something to act on.
fn pick<R: Rng>(rng: &mut R, d: &Derivation, atoms: &[&str]) -> Formula {
    if d.steps.is_empty() || rng.gen_bool(0.5) {
        return random_formula(rng, atoms, 2);
    }
    let f = &d.steps.choose(rng).unwrap().formula;
    match f {
        Formula::Imp(a, b) | Formula::And(a, b) | Formula::Or(a, b) if rng.gen_bool(0.5) => {
            if rng.gen_bool(0.5) { (**a).clone() } else { (**b).clone() }
        }
        _ => f.clone(),
    }
}

fn find_mp(d: &Derivation) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (j, s) in d.steps.iter().enumerate() {
        if let Formula::Imp(a, b) = &s.formula {
            if d.steps.iter().any(|t| t.formula == **b) {
                continue;
            }
            if let Some(i) = d.steps.iter().position(|t| t.formula == **a) {
                out.push((i, j));
            }
        }
    }
    out
}

/// A derivation without premises of about `length` steps whose last step,
/// whenever possible, comes from MP.
pub fn random_derivation<R: Rng>(logic: Logic, atoms: &[&str], length: usize, rng: &mut R) -> Derivation {
    let schemas: Vec<SchemaId> = logic.schemas().into_iter().filter(|s| s.pattern().is_some()).collect();
    let mut d = Derivation::new(logic, Vec::new());
    let mp = |d: &mut Derivation, i: usize, j: usize| {
        let Formula::Imp(_, b) = &d.steps[j].formula else { unreachable!() };
        let b = (**b).clone();
        d.push(b, Justification::Mp(i, j));
    };
    while d.steps.len() < length {
        let action = rng.gen_range(0..10);
        if action < 4 && !d.steps.is_empty() {
            // Weaken a proven formula through an axiom with a bare antecedent.
            let i = rng.gen_range(0..d.steps.len());
            let alpha = d.steps[i].formula.clone();
            let other = pick(rng, &d, atoms);
            let (schema, args) = match rng.gen_range(0..4) {
                0 => (SchemaId::A1, vec![alpha, other]),
                1 => (SchemaId::A3, vec![alpha, other]),
                2 => (SchemaId::A6, vec![alpha, other]),
                _ => (SchemaId::A7, vec![other, alpha]),
            };
            let j = d.push(schema.instantiate(&args).unwrap(), Justification::Axiom(schema));
            mp(&mut d, i, j);
            continue;
        }
        if action < 7 {
            let pairs = find_mp(&d);
            if let Some(&(i, j)) = pairs.choose(rng) {
                mp(&mut d, i, j);
                continue;
            }
        }
        let schema = *schemas.choose(rng).unwrap();
        let args: Vec<Formula> = (0..3).map(|_| pick(rng, &d, atoms)).collect();
        d.push(schema.instantiate(&args).unwrap(), Justification::Axiom(schema));
    }
    if !matches!(d.steps.last().map(|s| s.by), Some(Justification::Mp(..))) {
        if let Some(&(i, j)) = find_mp(&d).first() {
            mp(&mut d, i, j);
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::check_derivation;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_derivations_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for logic in [Logic::MbC, Logic::Lfi1o, Logic::QmbC] {
            for _ in 0..20 {
                let d = random_derivation(logic, &["p", "q"], 12, &mut rng);
                assert!(check_derivation(&d).is_valid(), "{:?}", check_derivation(&d));
                assert!(d.steps.len() >= 12);
            }
        }
    }
}
