use std::time::Instant;

use crate::anf::BooleanFunction;
use crate::fsr::RegisterState;
use crate::gf2::{Echelon, Insert};

use super::{
    binomial_sum, char_poly, check_desk_scale, expand, multiplier_search, relation, verify_state,
    AttackError, AttackKind, AttackReport, FilterGenerator, MonomialBasis,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StandardOptions {
    /// Most factors `(x_i + 1)` tried in the multiplier.
    pub max_e: usize,
}

impl Default for StandardOptions {
    fn default() -> Self {
        StandardOptions { max_e: 2 }
    }
}

/// Extra batches of `E` equations tried before giving up on full rank.
const RETRIES: usize = 5;

/// Equation budget: a first batch of `first`, then up to [`RETRIES`]
/// increments of `step`.
fn budget(first: u128, step: u128) -> usize {
    (first + RETRIES as u128 * step).min(usize::MAX as u128) as usize
}

/// Linear system over the nonconstant monomials of `basis`, filled row by row.
struct System {
    basis: MonomialBasis,
    echelon: Echelon,
    equations: usize,
    last_clock: usize,
}

impl System {
    fn new(basis: MonomialBasis) -> Self {
        let cols = basis.len() - 1;
        System {
            basis,
            echelon: Echelon::new(cols),
            equations: 0,
            last_clock: 0,
        }
    }

    fn unknowns(&self) -> usize {
        self.echelon.ncols()
    }

    /// Row `Σ μ(X^0) = 0` over the XOR of the given monomial sets.
    fn insert(&mut self, monomials: impl IntoIterator<Item = u64>, clock: usize) -> Insert {
        let mut row = vec![0u64; self.unknowns().div_ceil(64)];
        let mut rhs = false;
        for m in monomials {
            if m == 0 {
                rhs ^= true;
                continue;
            }
            let col = self
                .basis
                .index_of_mask(m)
                .expect("monomial degree within basis")
                - 1;
            row[col / 64] ^= 1 << (col % 64);
        }
        self.equations += 1;
        self.last_clock = clock;
        self.echelon.insert(row, rhs)
    }

    fn state(&self, n: usize) -> Option<RegisterState> {
        let x = self.echelon.solution()?;
        Some(RegisterState::from_bits(
            (0..n)
                .map(|i| {
                    x[self
                        .basis
                        .index_of_mask(1 << i)
                        .expect("linear monomials present")
                        - 1]
                })
                .collect(),
        ))
    }
}

/// Standard algebraic attack: find a low-degree multiplier `g` with
/// `h = f·g`, cancel `h` with the characteristic polynomial of the degree
/// `deg h` monomial sequences, and linearize the remaining equations
/// `Σ p_i z_{t+i} g(X^{t+i}) = h(0)·p(1)` over monomials of degree `<= deg g`.
///
/// When `deg h <= deg g` (including annihilators, and filters without a
/// useful multiplier) the relations `h(X^t) + z_t g(X^t) = 0` are linearized
/// directly.
pub fn standard_attack(
    gen: &FilterGenerator,
    keystream: &[bool],
    opts: StandardOptions,
) -> Result<AttackReport, AttackError> {
    let start = Instant::now();
    check_desk_scale(gen)?;
    let n = gen.n();
    let f = gen.filter();
    if f.degree() < 1 {
        return Err(AttackError::Degenerate(f.degree()));
    }
    let best = multiplier_search(f, opts.max_e)
        .into_iter()
        .min_by(|a, b| (a.degree, a.e(), &a.factors).cmp(&(b.degree, b.e(), &b.factors)));
    let (g, h, factors) = match best {
        Some(m) => (m.g, m.h, m.factors),
        None => (BooleanFunction::one(), f.clone(), Vec::new()),
    };
    let e = factors.len();
    let dh = h.degree();

    let big_d = binomial_sum(n, dh.max(0) as usize);
    let big_e = binomial_sum(n, e);
    let need = (big_d + big_e - 1) as usize;
    if keystream.len() < need {
        return Err(AttackError::InsufficientKeystream {
            need,
            got: keystream.len(),
        });
    }
    let len = keystream.len();
    let forms = gen.linear_forms(len);

    let (system, poly_degree) = if dh > e as i32 {
        let cp = char_poly(gen, dh as usize)?;
        let p = cp.poly();
        let deg = cp.degree();
        let support = p.support();
        let h0 = h.has_constant() && p.eval_one();
        let mut system = System::new(MonomialBasis::new(n, e)?);
        // filtered rows mix windows of deg p <= D clocks, so the first batch
        // covers one such window
        let cap = budget(big_e.max(big_d), big_e);
        let mut g_at: Vec<Option<Vec<u64>>> = vec![None; len];
        let mut t = 0;
        while t + deg < len && system.equations < cap && !system.echelon.is_full_rank() {
            let mut acc: Vec<u64> = Vec::new();
            for &i in &support {
                if keystream[t + i] {
                    let gi = g_at[t + i].get_or_insert_with(|| expand(&g, &forms[t + i]));
                    acc.extend_from_slice(gi);
                }
            }
            if h0 {
                acc.push(0);
            }
            if system.insert(acc, t + deg) == Insert::Inconsistent {
                break;
            }
            t += 1;
        }
        (system, deg)
    } else {
        let k = dh.max(e as i32) as usize;
        let mut system = System::new(MonomialBasis::new(n, k)?);
        let size = system.basis.len() as u128;
        let cap = budget(size, size);
        let mut t = 0;
        while t < len && system.equations < cap && !system.echelon.is_full_rank() {
            let r = relation(&h, &g, keystream[t]);
            if system.insert(expand(&r, &forms[t]), t) == Insert::Inconsistent {
                break;
            }
            t += 1;
        }
        (system, 0)
    };

    if !system.echelon.is_full_rank() && !system.echelon.is_inconsistent() {
        return Err(AttackError::RankDeficient {
            rank: system.echelon.rank(),
            unknowns: system.unknowns(),
            equations: system.equations,
        });
    }
    let state = system.state(n);
    let verified = match &state {
        Some(s) => verify_state(gen, s, keystream)?,
        None => false,
    };
    Ok(AttackReport {
        kind: AttackKind::Standard,
        state,
        verified,
        equations: system.equations,
        unknowns: system.unknowns(),
        data_bits: system.last_clock + 1,
        char_poly_degree: poly_degree,
        multiplier: factors,
        degree_h: dh,
        e,
        elapsed: start.elapsed(),
    })
}
