//! Seeded random formulas over `p`, `q`, `r`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::Formula;

const VARS: [&str; 3] = ["p", "q", "r"];

/// A formula with exactly `connectives` connectives.
pub fn random_formula<R: Rng>(rng: &mut R, connectives: usize) -> Formula {
    if connectives == 0 {
        return if rng.gen_ratio(1, 10) {
            Formula::bottom()
        } else {
            Formula::var(VARS[rng.gen_range(0..VARS.len())])
        };
    }
    let rest = connectives - 1;
    match rng.gen_range(0..5) {
        0 => Formula::k(random_formula(rng, rest)),
        1 => Formula::not(random_formula(rng, rest)),
        op => {
            let left = rng.gen_range(0..=rest);
            let a = random_formula(rng, left);
            let b = random_formula(rng, rest - left);
            match op {
                2 => Formula::and(a, b),
                3 => Formula::or(a, b),
                _ => Formula::imp(a, b),
            }
        }
    }
}

/// `count` formulas with at most `max_connectives` connectives each,
/// determined by `seed`.
pub fn random_formulas(seed: u64, count: usize, max_connectives: usize) -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(0..=max_connectives);
            random_formula(&mut rng, n)
        })
        .collect()
}
