#![allow(dead_code)]

use boolebell::rational::{rat, Rational};
use boolebell::AtomDistribution;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Random weights with small integer numerators over their sum; some atoms
/// get exactly zero weight.
pub fn random_weights(rng: &mut ChaCha8Rng, len: usize) -> Vec<Rational> {
    loop {
        let raw: Vec<i64> = (0..len)
            .map(|_| if rng.gen_bool(0.3) { 0 } else { rng.gen_range(1..=9) })
            .collect();
        let total: i64 = raw.iter().sum();
        if total > 0 {
            return raw.into_iter().map(|w| rat(w, total)).collect();
        }
    }
}

pub fn random_distribution(rng: &mut ChaCha8Rng, n: usize) -> AtomDistribution {
    AtomDistribution::new(n, random_weights(rng, 1 << n)).unwrap()
}

/// Rational in [0, 1] with denominator at most `max_den`.
pub fn random_probability(rng: &mut ChaCha8Rng, max_den: i64) -> Rational {
    let d = rng.gen_range(1..=max_den);
    rat(rng.gen_range(0..=d), d)
}
