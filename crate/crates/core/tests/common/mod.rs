#![allow(dead_code)]

use nlfsr_core::attack::FilterGenerator;
use nlfsr_core::{BooleanFunction, FsrSpec, Monomial, RegisterState, ShiftPlan, Var};
use rand::seq::IteratorRandom;
use rand::Rng;

/// Bit `i` of `word` as the value of `x_i`.
pub fn assignment(word: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| (word >> i) & 1 == 1).collect()
}

/// Truth table of `f` over `n` variables, computed term by term.
pub fn truth_table(f: &BooleanFunction, n: usize) -> Vec<bool> {
    (0..1u64 << n)
        .map(|w| {
            f.terms().fold(false, |acc, m| {
                acc ^ m.vars().iter().all(|&v| (w >> v) & 1 == 1)
            })
        })
        .collect()
}

/// Möbius transform of a truth table back to ANF.
pub fn from_truth_table(table: &[bool], n: usize) -> BooleanFunction {
    let mut a = table.to_vec();
    for i in 0..n {
        for w in 0..a.len() {
            if (w >> i) & 1 == 1 {
                a[w] ^= a[w ^ (1 << i)];
            }
        }
    }
    BooleanFunction::from_terms(
        a.iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(w, _)| Monomial::new((0..n as Var).filter(|&v| (w >> v) & 1 == 1))),
    )
}

pub fn random_monomial<R: Rng>(rng: &mut R, n: usize, max_degree: usize) -> Monomial {
    let d = rng.random_range(0..=max_degree.min(n));
    Monomial::new((0..n as Var).choose_multiple(rng, d))
}

pub fn random_function<R: Rng>(
    rng: &mut R,
    n: usize,
    max_terms: usize,
    max_degree: usize,
) -> BooleanFunction {
    let mut f = BooleanFunction::zero();
    for _ in 0..rng.random_range(0..=max_terms) {
        f.toggle(random_monomial(rng, n, max_degree));
    }
    f
}

/// Fibonacci NLFSR with `f_{n-1} = x_0 + (random terms avoiding x_0)` and a
/// random output function.
pub fn random_fibonacci<R: Rng>(rng: &mut R, n: usize) -> FsrSpec {
    let mut last = BooleanFunction::var(0);
    for _ in 0..rng.random_range(1..=6) {
        let d = rng.random_range(1..=3);
        last.toggle(Monomial::new((1..n as Var).choose_multiple(rng, d)));
    }
    let mut output = random_function(rng, n, 5, 3);
    if output.is_zero() {
        output = BooleanFunction::var(0);
    }
    FsrSpec::fibonacci(n, last, output).unwrap()
}

/// Random subset of the movable terms of `f_{n-1}`, each sent to a random
/// admissible stage.
pub fn random_plan<R: Rng>(rng: &mut R, spec: &FsrSpec) -> ShiftPlan {
    let n = spec.n();
    let top = n - 1;
    let mut text = String::new();
    for m in spec.feedback(top).terms() {
        let Some(lo) = m.min_var().filter(|&v| v > 0) else {
            continue;
        };
        if rng.random_bool(0.7) {
            let to = rng.random_range(top - lo as usize..=n - 2);
            text.push_str(&format!("m={m} from={top} to={to}\n"));
        }
    }
    text.parse().unwrap()
}

pub fn random_state<R: Rng>(rng: &mut R, n: usize) -> RegisterState {
    RegisterState::from_bits((0..n).map(|_| rng.random()).collect())
}

/// Random state other than all-zero, which no attack can pin down.
pub fn random_nonzero_state<R: Rng>(rng: &mut R, n: usize) -> RegisterState {
    loop {
        let s = random_state(rng, n);
        if s.bits().iter().any(|&b| b) {
            return s;
        }
    }
}

/// Every initial state whose keystream starts with `prefix`.
pub fn exhaustive_search(gen: &FilterGenerator, prefix: &[bool]) -> Vec<RegisterState> {
    let n = gen.n();
    let spec = gen.spec();
    (0..1u64 << n)
        .filter_map(|w| {
            let init = RegisterState::from_word(w, n);
            let mut sim = spec.simulator(&init).unwrap();
            prefix.iter().all(|&z| sim.next_bit() == z).then_some(init)
        })
        .collect()
}
