use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::anf::BooleanFunction;
use crate::gf2::{minimal_polynomial, BitSeq, Poly2};

use super::{expand, mask_monomial, AttackError, FilterGenerator, MonomialBasis, MAX_BASIS};

/// Polynomial `p(x) = Σ p_i x^i` with `Σ p_i s_{t+i} = 0` for every
/// nonconstant monomial sequence of degree at most `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPoly {
    poly: Poly2,
    d: usize,
}

impl CharPoly {
    pub fn poly(&self) -> &Poly2 {
        &self.poly
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }

    pub fn coeffs(&self) -> Vec<bool> {
        self.poly.coeffs()
    }

    pub fn annihilates(&self, seq: &[bool]) -> bool {
        BitSeq::from_bools(seq).annihilated_by(&self.poly)
    }
}

/// Random nonzero `n`-bit state.
pub(crate) fn random_state(rng: &mut ChaCha8Rng, n: usize) -> u64 {
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    loop {
        let s = rng.random::<u64>() & mask;
        if s != 0 {
            return s;
        }
    }
}

/// Least common multiple of the minimal polynomials of a family of
/// sequences, learned on windows of `2·bound + 64` and checked on fresh
/// sequences covering `3·bound` positions. One retry with a doubled window.
///
/// `family(rng, len, fresh)` returns sequences of length `len`.
pub(crate) fn synthesize<F>(bound: usize, seed: u64, mut family: F) -> Result<Poly2, AttackError>
where
    F: FnMut(&mut ChaCha8Rng, usize, bool) -> Vec<BitSeq>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut window = 2 * bound + 64;
    for _ in 0..2 {
        let mut p = Poly2::one();
        for s in family(&mut rng, window, false) {
            let rest = s.filter(&p);
            if rest.is_zero() {
                continue;
            }
            p = p.mul(&minimal_polynomial(&rest));
        }
        let deg = p.degree().unwrap_or(0);
        let check = family(&mut rng, 3 * bound.max(1) + deg, true);
        if check.iter().all(|s| s.annihilated_by(&p)) {
            return Ok(p);
        }
        window *= 2;
    }
    Err(AttackError::CharPolyUnverified { window: window / 2 })
}

/// Number of random initial states whose monomial sequences are combined.
const LEARN_STATES: usize = 3;
const CHECK_STATES: usize = 2;

/// Annihilator of all nonconstant monomial sequences of degree `<= d`.
pub fn char_poly(gen: &FilterGenerator, d: usize) -> Result<CharPoly, AttackError> {
    let n = gen.n();
    let basis = MonomialBasis::new(n, d)?;
    let masks = &basis.masks()[1..];
    if masks.len() > MAX_BASIS {
        return Err(AttackError::DeskScale {
            what: "D",
            value: masks.len() as u128,
            limit: MAX_BASIS as u128,
        });
    }
    let seed = 0x6368_6172_706f_6c79 ^ ((n as u64) << 8) ^ d as u64;
    let poly = synthesize(masks.len(), seed, |rng, len, fresh| {
        let count = if fresh { CHECK_STATES } else { LEARN_STATES };
        let mut out = Vec::with_capacity(count * masks.len());
        for _ in 0..count {
            let states = gen.states(random_state(rng, n), len);
            for &m in masks {
                let mut s = BitSeq::zeros(len);
                for (t, &st) in states.iter().enumerate() {
                    if st & m == m {
                        s.set(t, true);
                    }
                }
                out.push(s);
            }
        }
        out
    })?;
    Ok(CharPoly { poly, d })
}

/// Largest basis for which [`transition_matrix_check`] runs.
pub const MAX_MATRIX_BASIS: usize = 600;

/// Checks `Σ p_i R_d^i = 0`, where column `μ` of `R_d` expands `μ(X^{t+1})`
/// over the nonconstant monomials of `X^t` of degree at most `d`.
pub fn transition_matrix_check(
    gen: &FilterGenerator,
    d: usize,
    p: &Poly2,
) -> Result<bool, AttackError> {
    let basis = MonomialBasis::new(gen.n(), d)?;
    let size = basis.len() - 1;
    if size > MAX_MATRIX_BASIS {
        return Err(AttackError::DeskScale {
            what: "D",
            value: size as u128,
            limit: MAX_MATRIX_BASIS as u128,
        });
    }
    let step = &gen.linear_forms(2)[1];
    let cols: Vec<Vec<usize>> = basis.masks()[1..]
        .iter()
        .map(|&m| {
            let mu = BooleanFunction::from_monomial(mask_monomial(m));
            expand(&mu, step)
                .into_iter()
                .map(|nu| basis.index_of_mask(nu).expect("degree cannot grow") - 1)
                .collect()
        })
        .collect();

    // Horner: S <- S·R + p_i·I, columns packed as bit vectors
    let words = size.div_ceil(64);
    let mut s = vec![vec![0u64; words]; size];
    for i in (0..=p.degree().unwrap_or(0)).rev() {
        let mut next = vec![vec![0u64; words]; size];
        for (mu, col) in cols.iter().enumerate() {
            for &nu in col {
                for (a, b) in next[mu].iter_mut().zip(&s[nu]) {
                    *a ^= b;
                }
            }
        }
        if p.coeff(i) {
            for (k, c) in next.iter_mut().enumerate() {
                c[k / 64] ^= 1 << (k % 64);
            }
        }
        s = next;
    }
    Ok(s.iter().all(|c| c.iter().all(|&w| w == 0)))
}
