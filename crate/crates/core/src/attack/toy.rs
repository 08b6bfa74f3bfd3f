use rand::seq::IteratorRandom;
use rand::Rng;

use crate::anf::{BooleanFunction, Monomial, Var};
use crate::fsr::FsrSpec;
use crate::gf2::Poly2;

use super::{AttackError, FilterGenerator};

/// Largest degree [`is_primitive`] accepts.
pub const MAX_PRIMITIVE_DEGREE: usize = 40;

fn prime_factors(mut m: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut q = 2u128;
    while q * q <= m {
        if m.is_multiple_of(q) {
            out.push(q);
            while m.is_multiple_of(q) {
                m /= q;
            }
        }
        q += if q == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// True if `x` has multiplicative order `2^n - 1` modulo `p`, `n = deg p`.
pub fn is_primitive(p: &Poly2) -> bool {
    let Some(n) = p.degree() else {
        return false;
    };
    if n == 0 || n > MAX_PRIMITIVE_DEGREE || !p.coeff(0) {
        return false;
    }
    let order = (1u128 << n) - 1;
    let x = Poly2::monomial(1);
    if !x.pow_mod(order, p).is_one() {
        return false;
    }
    prime_factors(order)
        .into_iter()
        .all(|q| !x.pow_mod(order / q, p).is_one())
}

/// Fibonacci LFSR with characteristic polynomial `p`:
/// `f_{n-1} = Σ_{i<n, p_i = 1} x_i`.
pub fn lfsr_from_poly(p: &Poly2) -> Result<FsrSpec, AttackError> {
    let n = p.degree().unwrap_or(0);
    if n == 0 || !p.coeff(0) {
        return Err(AttackError::NotFilterGenerator(format!(
            "{p} is not a usable feedback polynomial"
        )));
    }
    let fb = BooleanFunction::linear((0..n).filter(|&i| p.coeff(i)).map(|i| i as Var));
    Ok(FsrSpec::fibonacci(n, fb, BooleanFunction::var(0))?)
}

/// Uniformly drawn primitive feedback polynomial of degree `n`, as an LFSR.
pub fn random_primitive_lfsr<R: Rng>(n: usize, rng: &mut R) -> Result<FsrSpec, AttackError> {
    if !(2..=MAX_PRIMITIVE_DEGREE).contains(&n) {
        return Err(AttackError::DeskScale {
            what: "n",
            value: n as u128,
            limit: MAX_PRIMITIVE_DEGREE as u128,
        });
    }
    loop {
        let mut p = Poly2::monomial(n);
        p.set(0, true);
        for i in 1..n {
            p.set(i, rng.random());
        }
        if is_primitive(&p) {
            return lfsr_from_poly(&p);
        }
    }
}

/// Filter generator with a degree-3 filter `x_a·(x_b x_c + x_d x_e) + r`,
/// `a..e` distinct and `r` affine with at least two variables other than
/// `x_a`. `(x_a + 1)` is then the only reducing multiplier, giving `h` of
/// degree 2, and no linear function lowers the degree, so the linearized
/// systems of both attacks have full rank given enough keystream.
pub fn random_toy_generator<R: Rng>(n: usize, rng: &mut R) -> Result<FilterGenerator, AttackError> {
    if n < 6 {
        return Err(AttackError::NotFilterGenerator(format!(
            "toy generators need n >= 6, got {n}"
        )));
    }
    let lfsr = random_primitive_lfsr(n, rng)?;
    let vars: Vec<Var> = (0..n as Var).choose_multiple(rng, 5);
    let (a, q) = (vars[0], &vars[1..]);
    let mut filter = BooleanFunction::from_terms([
        Monomial::new([a, q[0], q[1]]),
        Monomial::new([a, q[2], q[3]]),
    ]);
    let others: Vec<Var> = (0..n as Var).filter(|&v| v != a).collect();
    let k = rng.random_range(2..=3);
    for v in others.into_iter().choose_multiple(rng, k) {
        filter.toggle(Monomial::var(v));
    }
    if rng.random() {
        filter.toggle(Monomial::var(a));
    }
    if rng.random() {
        filter.toggle(Monomial::one());
    }
    FilterGenerator::new(lfsr, filter)
}
