//! Reproducible random equations for soundness checks.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Equation, Term};

pub const DEFAULT_SEED: u64 = 0x5142_2024;
pub const MAX_DEPTH: usize = 4;
pub const VARIABLES: [&str; 3] = ["x", "y", "z"];

// var, join, meet, star, const
const WEIGHTS: [u32; 5] = [35, 20, 20, 20, 5];

fn sample(rng: &mut ChaCha8Rng, dist: &WeightedIndex<u32>, depth: usize) -> Term {
    let choice = if depth == 0 {
        // only leaves fit; keep their relative weights
        if rng.gen_ratio(WEIGHTS[4], WEIGHTS[0] + WEIGHTS[4]) {
            4
        } else {
            0
        }
    } else {
        dist.sample(rng)
    };
    match choice {
        0 => Term::var(VARIABLES[rng.gen_range(0..VARIABLES.len())]),
        1 => Term::join(sample(rng, dist, depth - 1), sample(rng, dist, depth - 1)),
        2 => Term::meet(sample(rng, dist, depth - 1), sample(rng, dist, depth - 1)),
        3 => Term::star(sample(rng, dist, depth - 1)),
        _ => {
            if rng.gen_bool(0.5) {
                Term::Zero
            } else {
                Term::One
            }
        }
    }
}

/// `count` equations over `x`, `y`, `z` with both sides of depth at most 4.
pub fn equation_corpus(seed: u64, count: usize) -> Vec<Equation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = WeightedIndex::new(WEIGHTS).expect("weights are positive");
    (0..count)
        .map(|_| {
            let lhs = sample(&mut rng, &dist, MAX_DEPTH);
            let rhs = sample(&mut rng, &dist, MAX_DEPTH);
            Equation::new(lhs, rhs)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_reproducible_and_bounded() {
        let a = equation_corpus(DEFAULT_SEED, 200);
        assert_eq!(a, equation_corpus(DEFAULT_SEED, 200));
        assert_ne!(a, equation_corpus(DEFAULT_SEED + 1, 200));
        for eq in &a {
            assert!(eq.lhs.depth() <= MAX_DEPTH && eq.rhs.depth() <= MAX_DEPTH);
            assert!(eq.variables().len() <= 3);
        }
    }
}
