//! Seeded random propositional formulas and consequence instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::syntax::Formula;

/// A formula of depth at most `depth` over `atoms`.
pub fn random_formula<R: Rng>(rng: &mut R, atoms: &[&str], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        return Formula::prop(atoms.choose(rng).expect("at least one atom"));
    }
    let sub = |rng: &mut R| random_formula(rng, atoms, depth - 1);
    match rng.gen_range(0..5) {
        0 => Formula::neg(sub(rng)),
        1 => Formula::cons(sub(rng)),
        2 => Formula::and(sub(rng), sub(rng)),
        3 => Formula::or(sub(rng), sub(rng)),
        _ => Formula::imp(sub(rng), sub(rng)),
    }
}

/// Up to two premises and a goal over `p, q, r`, each of depth at most 3.
pub fn random_instance<R: Rng>(rng: &mut R) -> (Vec<Formula>, Formula) {
    const ATOMS: [&str; 3] = ["p", "q", "r"];
    let n = rng.gen_range(0..=2);
    let premises = (0..n).map(|_| random_formula(rng, &ATOMS, 3)).collect();
    (premises, random_formula(rng, &ATOMS, 3))
}

/// `count` instances from a ChaCha8 stream seeded with `seed`.
pub fn seeded_instances(seed: u64, count: usize) -> Vec<(Vec<Formula>, Formula)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_instance(&mut rng)).collect()
}
