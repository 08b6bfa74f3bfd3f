use std::time::Instant;

use crate::fsr::RegisterState;
use crate::gf2::{BitSeq, Echelon, Insert, Poly2};

use super::charpoly::{random_state, synthesize};
use super::{
    binomial_sum, check_desk_scale, monomial_mask, verify_state, AttackError, AttackKind,
    AttackReport, FilterGenerator, MaskFunction, MAX_BASIS,
};

/// Linear part of `f(X^t)` as a mask over `X^0`, for each `t < len`. The
/// linear coefficient of a product of linear forms is the AND of the forms.
fn linear_parts(gen: &FilterGenerator, len: usize) -> Vec<u64> {
    let terms: Vec<u64> = gen
        .filter()
        .terms()
        .map(monomial_mask)
        .filter(|&m| m != 0)
        .collect();
    gen.linear_forms(len)
        .iter()
        .map(|forms| {
            terms.iter().fold(0, |acc, &m| {
                acc ^ super::bits(m).fold(u64::MAX, |a, v| a & forms[v])
            })
        })
        .collect()
}

const LEARN_POINTS: usize = 8;
const CHECK_POINTS: usize = 4;

/// Polynomial annihilating the coefficient sequences of every monomial of
/// degree `>= 2` in `f(X^t)`, learned from the nonlinear part
/// `f(X^t) + lin_t·X^0 + f(0)` at random points `X^0`.
pub fn rh_polynomial(gen: &FilterGenerator) -> Result<Poly2, AttackError> {
    let n = gen.n();
    let f = gen.filter();
    let d_f = f.degree();
    if d_f <= 1 {
        return Ok(Poly2::one());
    }
    let bound = binomial_sum(n, d_f as usize);
    if bound > MAX_BASIS as u128 {
        return Err(AttackError::DeskScale {
            what: "D",
            value: bound,
            limit: MAX_BASIS as u128,
        });
    }
    let eval = MaskFunction::new(f);
    let c = f.has_constant();
    let seed = 0x726f_6e6a_6f6d ^ ((n as u64) << 8) ^ d_f as u64;
    synthesize(bound as usize, seed, |rng, len, fresh| {
        let lins = linear_parts(gen, len);
        let count = if fresh { CHECK_POINTS } else { LEARN_POINTS };
        (0..count)
            .map(|_| {
                let x = random_state(rng, n);
                let mut s = BitSeq::zeros(len);
                for (t, st) in gen.states(x, len).into_iter().enumerate() {
                    let lin = (lins[t] & x).count_ones() % 2 == 1;
                    s.set(t, eval.eval(st) ^ lin ^ c);
                }
                s
            })
            .collect()
    })
}

/// Rønjom–Helleseth attack: filter the keystream with [`rh_polynomial`] so
/// that only the linear part of `f` survives, then solve for `X^0`.
pub fn rh_attack(gen: &FilterGenerator, keystream: &[bool]) -> Result<AttackReport, AttackError> {
    let start = Instant::now();
    check_desk_scale(gen)?;
    let n = gen.n();
    let f = gen.filter();
    let d_f = f.degree();
    if d_f < 1 {
        return Err(AttackError::Degenerate(d_f));
    }
    let need = binomial_sum(n, d_f as usize);
    if need > MAX_BASIS as u128 {
        return Err(AttackError::DeskScale {
            what: "D",
            value: need,
            limit: MAX_BASIS as u128,
        });
    }
    let need = need as usize;
    if keystream.len() < need {
        return Err(AttackError::InsufficientKeystream {
            need,
            got: keystream.len(),
        });
    }
    let p = rh_polynomial(gen)?;
    let deg = p.degree().unwrap_or(0);
    let support = p.support();
    let len = keystream.len();
    let lins = linear_parts(gen, len);
    let constant = f.has_constant() && p.eval_one();

    let mut echelon = Echelon::new(n);
    let mut equations = 0;
    let mut last = 0;
    let mut t = 0;
    while t + deg < len && !echelon.is_full_rank() {
        let mut z = constant;
        let mut row = 0u64;
        for &j in &support {
            z ^= keystream[t + j];
            row ^= lins[t + j];
        }
        equations += 1;
        last = t + deg;
        if echelon.insert(vec![row], z) == Insert::Inconsistent {
            break;
        }
        t += 1;
    }
    if !echelon.is_full_rank() && !echelon.is_inconsistent() {
        return Err(AttackError::RankDeficient {
            rank: echelon.rank(),
            unknowns: n,
            equations,
        });
    }
    let state = echelon.solution().map(RegisterState::from_bits);
    let verified = match &state {
        Some(s) => verify_state(gen, s, keystream)?,
        None => false,
    };
    Ok(AttackReport {
        kind: AttackKind::Rh,
        state,
        verified,
        equations,
        unknowns: n,
        data_bits: last + 1,
        char_poly_degree: deg,
        multiplier: Vec::new(),
        degree_h: d_f,
        e: 0,
        elapsed: start.elapsed(),
    })
}
