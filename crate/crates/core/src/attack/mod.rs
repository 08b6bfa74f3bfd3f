//! Algebraic attacks on LFSR filter generators.
//!
//! Everything here works on registers of at most 64 stages, with states and
//! monomials packed into `u64` masks (bit `i` is `x_i`). The attacks
//! themselves are limited to [`MAX_ATTACK_N`] stages and bases of at most
//! [`MAX_BASIS`] monomials.

mod charpoly;
mod estimate;
mod multiplier;
mod rh;
mod standard;
mod toy;

use std::collections::HashMap;
use std::fmt;
use std::time::Duration;

use thiserror::Error;

use crate::anf::{BooleanFunction, Monomial, Var};
use crate::fsr::{FsrError, FsrSpec, RegisterState};
use crate::gf2::Poly2;

pub use charpoly::{char_poly, transition_matrix_check, CharPoly};
pub use estimate::{estimate, estimate_with, AttackKind, ComplexityEstimate, OMEGA};
pub use multiplier::{multiplier_search, Multiplier};
pub use rh::{rh_attack, rh_polynomial};
pub use standard::{standard_attack, StandardOptions};
pub use toy::{is_primitive, lfsr_from_poly, random_primitive_lfsr, random_toy_generator};

/// Largest register the attacks run on.
pub const MAX_ATTACK_N: usize = 24;
/// Largest monomial basis the characteristic polynomial is synthesized for.
pub const MAX_BASIS: usize = 5000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AttackError {
    #[error("not an LFSR filter generator: {0}")]
    NotFilterGenerator(String),
    #[error("{what} = {value} exceeds the desk-scale limit {limit}")]
    DeskScale {
        what: &'static str,
        value: u128,
        limit: u128,
    },
    #[error("insufficient keystream: need {need} bits, got {got}")]
    InsufficientKeystream { need: usize, got: usize },
    #[error("rank {rank} of {unknowns} after {equations} equations; keystream exhausted")]
    RankDeficient {
        rank: usize,
        unknowns: usize,
        equations: usize,
    },
    #[error("characteristic polynomial failed verification with window {window}")]
    CharPolyUnverified { window: usize },
    #[error("filter of degree {0} leaves nothing to attack")]
    Degenerate(i32),
    #[error("invalid estimate parameters: {0}")]
    Estimate(String),
    #[error(transparent)]
    Fsr(#[from] FsrError),
}

/// Boolean function over a `u64` state; mask `0` is the constant term.
#[derive(Clone, Debug)]
pub(crate) struct MaskFunction {
    masks: Vec<u64>,
}

impl MaskFunction {
    pub(crate) fn new(f: &BooleanFunction) -> Self {
        MaskFunction {
            masks: f.terms().map(monomial_mask).collect(),
        }
    }

    #[inline]
    pub(crate) fn eval(&self, s: u64) -> bool {
        self.masks.iter().filter(|&&m| s & m == m).count() % 2 == 1
    }
}

pub(crate) fn monomial_mask(m: &Monomial) -> u64 {
    m.vars().iter().fold(0, |acc, &v| acc | 1 << v)
}

pub(crate) fn mask_monomial(mask: u64) -> Monomial {
    Monomial::new(bits(mask).map(|i| i as Var))
}

pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (mask != 0).then(|| {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            i
        })
    })
}

/// Fibonacci LFSR with linear feedback, observed through a nonlinear filter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilterGenerator {
    lfsr: FsrSpec,
    filter: BooleanFunction,
    taps: u64,
}

impl FilterGenerator {
    pub fn new(lfsr: FsrSpec, filter: BooleanFunction) -> Result<Self, AttackError> {
        let n = lfsr.n();
        if n > 64 {
            return Err(AttackError::DeskScale {
                what: "n",
                value: n as u128,
                limit: 64,
            });
        }
        if !lfsr.is_fibonacci() {
            return Err(AttackError::NotFilterGenerator(
                "register is not in Fibonacci configuration".into(),
            ));
        }
        let fb = lfsr.feedback(n - 1);
        if fb.degree() != 1 || fb.has_constant() {
            return Err(AttackError::NotFilterGenerator(format!(
                "last feedback {fb} is not linear"
            )));
        }
        if filter.is_zero() {
            return Err(AttackError::NotFilterGenerator("filter is zero".into()));
        }
        if filter.max_var().is_some_and(|v| v as usize >= n) {
            return Err(AttackError::NotFilterGenerator(
                "filter reads a stage outside the register".into(),
            ));
        }
        let taps = fb.dep().iter().fold(0, |acc, &v| acc | 1 << v);
        let lfsr = lfsr.with_output(BooleanFunction::var(0))?;
        Ok(FilterGenerator { lfsr, filter, taps })
    }

    /// Splits a spec into its LFSR and its output function.
    pub fn from_spec(spec: &FsrSpec) -> Result<Self, AttackError> {
        Self::new(spec.clone(), spec.output().clone())
    }

    pub fn n(&self) -> usize {
        self.lfsr.n()
    }

    pub fn lfsr(&self) -> &FsrSpec {
        &self.lfsr
    }

    pub fn filter(&self) -> &BooleanFunction {
        &self.filter
    }

    /// LFSR carrying the filter as output function.
    pub fn spec(&self) -> FsrSpec {
        self.lfsr
            .clone()
            .with_output(self.filter.clone())
            .expect("filter range checked on construction")
    }

    /// `x^n + Σ_{i in taps} x^i`.
    pub fn feedback_polynomial(&self) -> Poly2 {
        let mut p = Poly2::monomial(self.n());
        for i in bits(self.taps) {
            p.set(i, true);
        }
        p
    }

    #[inline]
    pub(crate) fn step_word(&self, s: u64) -> u64 {
        let fb = ((s & self.taps).count_ones() & 1) as u64;
        (s >> 1) | (fb << (self.n() - 1))
    }

    /// States `X^0 … X^{len-1}` as words.
    pub(crate) fn states(&self, init: u64, len: usize) -> Vec<u64> {
        let mut out = Vec::with_capacity(len);
        let mut s = init;
        for _ in 0..len {
            out.push(s);
            s = self.step_word(s);
        }
        out
    }

    pub fn keystream(&self, init: &RegisterState, t: usize) -> Result<Vec<bool>, AttackError> {
        Ok(self.spec().keystream(init, t)?)
    }

    /// `X^t` as linear forms in `X^0`, for `t = 0 … len-1`.
    pub(crate) fn linear_forms(&self, len: usize) -> Vec<Vec<u64>> {
        let n = self.n();
        let mut cur: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            let top = bits(self.taps).fold(0, |acc, j| acc ^ cur[j]);
            let next: Vec<u64> = (1..n).map(|i| cur[i]).chain([top]).collect();
            out.push(std::mem::replace(&mut cur, next));
        }
        out
    }
}

/// `f(X^t)` expanded over monomials of `X^0`, given `X^t`'s linear forms.
pub(crate) fn expand(f: &BooleanFunction, forms: &[u64]) -> Vec<u64> {
    let mut acc: HashMap<u64, bool> = HashMap::new();
    for m in f.terms() {
        let mut prod: HashMap<u64, bool> = HashMap::from([(0u64, true)]);
        for &v in m.vars() {
            let mut next: HashMap<u64, bool> = HashMap::new();
            for (&p, _) in prod.iter().filter(|(_, &on)| on) {
                for i in bits(forms[v as usize]) {
                    *next.entry(p | 1 << i).or_insert(false) ^= true;
                }
            }
            prod = next;
        }
        for (p, on) in prod {
            if on {
                *acc.entry(p).or_insert(false) ^= true;
            }
        }
    }
    let mut out: Vec<u64> = acc
        .into_iter()
        .filter_map(|(m, on)| on.then_some(m))
        .collect();
    out.sort_unstable();
    out
}

/// `Σ_{i<=d} C(n, i)`.
pub fn binomial_sum(n: usize, d: usize) -> u128 {
    let mut total = 0u128;
    let mut c = 1u128;
    for i in 0..=d.min(n) {
        if i > 0 {
            c = c * (n - i + 1) as u128 / i as u128;
        }
        total += c;
    }
    total
}

/// All monomials of degree at most `d` in `n` variables, ordered by degree
/// and then lexicographically by sorted index list.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    n: usize,
    d: usize,
    masks: Vec<u64>,
    index: HashMap<u64, usize>,
}

impl MonomialBasis {
    pub fn new(n: usize, d: usize) -> Result<Self, AttackError> {
        let size = binomial_sum(n, d);
        if n > 64 || size > 10 * MAX_BASIS as u128 {
            return Err(AttackError::DeskScale {
                what: "basis size",
                value: size,
                limit: 10 * MAX_BASIS as u128,
            });
        }
        let mut masks = Vec::with_capacity(size as usize);
        for k in 0..=d.min(n) {
            combinations(n, k, &mut |c: &[usize]| {
                masks.push(c.iter().fold(0, |acc, &i| acc | 1 << i));
            });
        }
        let index = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        Ok(MonomialBasis { n, d, masks, index })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn monomial(&self, i: usize) -> Monomial {
        mask_monomial(self.masks[i])
    }

    pub fn monomials(&self) -> Vec<Monomial> {
        self.masks.iter().map(|&m| mask_monomial(m)).collect()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(&monomial_mask(m)).copied()
    }

    pub(crate) fn masks(&self) -> &[u64] {
        &self.masks
    }

    pub(crate) fn index_of_mask(&self, m: u64) -> Option<usize> {
        self.index.get(&m).copied()
    }
}

fn combinations(n: usize, k: usize, visit: &mut dyn FnMut(&[usize])) {
    fn rec(
        start: usize,
        n: usize,
        k: usize,
        cur: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if cur.len() == k {
            visit(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, visit);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::with_capacity(k), visit);
}

/// `h + z·g`: zero on the true state at the clock where `z` was observed.
pub fn relation(h: &BooleanFunction, g: &BooleanFunction, z: bool) -> BooleanFunction {
    if z {
        h ^ g
    } else {
        h.clone()
    }
}

/// Outcome of an attack.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttackReport {
    pub kind: AttackKind,
    /// Candidate initial state; present whenever the linear system was solved.
    pub state: Option<RegisterState>,
    /// True only if `state` reproduces the whole observed keystream.
    pub verified: bool,
    pub equations: usize,
    pub unknowns: usize,
    /// Keystream bits read by the equations actually used.
    pub data_bits: usize,
    pub char_poly_degree: usize,
    /// Variables `i` of the multiplier `Π (x_i + 1)`; empty when none was used.
    pub multiplier: Vec<Var>,
    pub degree_h: i32,
    pub e: usize,
    pub elapsed: Duration,
}

impl fmt::Display for AttackReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "attack = {}", self.kind)?;
        match &self.state {
            Some(s) => writeln!(f, "state = {s}")?,
            None => writeln!(f, "state = none")?,
        }
        writeln!(f, "verified = {}", self.verified)?;
        writeln!(f, "equations = {}", self.equations)?;
        writeln!(f, "unknowns = {}", self.unknowns)?;
        writeln!(f, "data_bits = {}", self.data_bits)?;
        writeln!(f, "char_poly_degree = {}", self.char_poly_degree)?;
        if self.kind == AttackKind::Standard {
            let g: Vec<String> = self
                .multiplier
                .iter()
                .map(|v| format!("(x{v} + 1)"))
                .collect();
            let g = if g.is_empty() {
                "1".to_string()
            } else {
                g.join("*")
            };
            writeln!(f, "multiplier = {g}")?;
            writeln!(f, "degree_h = {}", self.degree_h)?;
            writeln!(f, "e = {}", self.e)?;
        }
        Ok(())
    }
}

/// Checks `state` against the whole keystream.
pub(crate) fn verify_state(
    gen: &FilterGenerator,
    state: &RegisterState,
    keystream: &[bool],
) -> Result<bool, AttackError> {
    Ok(gen.keystream(state, keystream.len())? == keystream)
}

pub(crate) fn check_desk_scale(gen: &FilterGenerator) -> Result<(), AttackError> {
    if gen.n() > MAX_ATTACK_N {
        return Err(AttackError::DeskScale {
            what: "n",
            value: gen.n() as u128,
            limit: MAX_ATTACK_N as u128,
        });
    }
    Ok(())
}
