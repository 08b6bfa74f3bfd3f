//! Shared fixtures for the benchmarks.

use nlfsr_core::attack::{random_toy_generator, FilterGenerator};
use nlfsr_core::gf2::BitSeq;
use nlfsr_core::{BooleanFunction, Monomial, RegisterState, Var};
use rand::seq::IteratorRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random function with `terms` monomials of degree up to `max_degree` over `n` variables.
pub fn random_function(
    rng: &mut ChaCha8Rng,
    n: usize,
    terms: usize,
    max_degree: usize,
) -> BooleanFunction {
    let mut f = BooleanFunction::zero();
    for _ in 0..terms {
        let d = rng.random_range(1..=max_degree);
        f.toggle(Monomial::new((0..n as Var).choose_multiple(rng, d)));
    }
    f
}

pub fn random_bits(rng: &mut ChaCha8Rng, len: usize) -> BitSeq {
    BitSeq::from_bools(&(0..len).map(|_| rng.random()).collect::<Vec<bool>>())
}

/// Toy filter generator, a nonzero initial state and `len` keystream bits.
pub fn toy_instance(
    n: usize,
    len: usize,
    seed: u64,
) -> (FilterGenerator, RegisterState, Vec<bool>) {
    let mut rng = rng(seed);
    let gen = random_toy_generator(n, &mut rng).expect("toy generator");
    let mut init = RegisterState::from_word(rng.random::<u64>() & ((1 << n) - 1), n);
    init.set(0, true);
    let ks = gen.keystream(&init, len).expect("keystream");
    (gen, init, ks)
}
