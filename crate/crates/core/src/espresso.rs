//! The Espresso stream cipher: its 256-stage Galois NLFSR, key/IV schedule,
//! and the equivalent LFSR filter generator obtained by moving every
//! nonlinear block back to the last stage.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::anf::{BooleanFunction, Var};
use crate::fsr::{FsrError, FsrSpec, RegisterState};
use crate::transform::{
    compensate_state_ascending, fib_to_galois_with, uniform_galois_to_fib, CompensationList, Move,
    ShiftPlan, TermCheck, TransformError,
};

pub const N: usize = 256;
pub const KEY_BITS: usize = 128;
pub const IV_BITS: usize = 96;
pub const INIT_CLOCKS: usize = 256;

const BASE_FEEDBACK: &str = "x0 + x12 + x48 + x115 + x133 + x213";

const F_LAST: &str = "x0 + x12 + x48 + x115 + x133 + x213 + x41*x70 + x46*x87";
const F_217: &str = "x218 + x3*x32 + x8*x49 + x14*x72 + x17*x92 + x24*x119 + x36*x145 \
                     + x49*x72*x92*x119";

/// Nontrivial feedbacks of G, by stage.
const G_FEEDBACKS: [(usize, &str); 14] = [
    (255, "x0 + x41*x70"),
    (251, "x252 + x42*x83 + x8"),
    (247, "x248 + x44*x102 + x40"),
    (243, "x244 + x43*x118 + x103"),
    (239, "x240 + x46*x141 + x117"),
    (235, "x236 + x67*x90*x110*x137"),
    (231, "x232 + x50*x159 + x189"),
    (217, "x218 + x3*x32"),
    (213, "x214 + x4*x45"),
    (209, "x210 + x6*x64"),
    (205, "x206 + x5*x80"),
    (201, "x202 + x8*x103"),
    (197, "x198 + x29*x52*x72*x99"),
    (193, "x194 + x12*x121"),
];

const OUTPUT: &str = "x80 + x99 + x137 + x227 + x222 + x187 + x243*x217 + x247*x231 \
                      + x213*x235 + x255*x251 + x181*x239 + x174*x44 + x164*x29 \
                      + x255*x247*x243*x213*x181*x174";

/// Stages whose compensated taps appear in the transformed output function.
pub const COMPENSATED_STAGES: [usize; 11] = [213, 217, 222, 227, 231, 235, 239, 243, 247, 251, 255];

#[derive(Debug, Error)]
pub enum EspressoError {
    #[error("{what}: expected {expected}, got {got}")]
    Mismatch {
        what: String,
        expected: String,
        got: String,
    },
    #[error("{what} must be {expected} bits, got {got}")]
    BitLength {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Fsr(#[from] FsrError),
}

fn parse(s: &str) -> BooleanFunction {
    s.parse().expect("built-in function is well formed")
}

/// The published 20-variable output function.
pub fn output_function() -> BooleanFunction {
    parse(OUTPUT)
}

/// The maximum-length LFSR G is derived from, with output `x_0`.
pub fn build_base_lfsr() -> FsrSpec {
    FsrSpec::fibonacci(N, parse(BASE_FEEDBACK), BooleanFunction::var(0))
        .expect("base LFSR is well formed")
}

/// NLFSR F with nontrivial stages 217 and 255, carrying the published output.
pub fn build_espresso_f() -> FsrSpec {
    let mut spec = FsrSpec::fibonacci(N, parse(F_LAST), output_function()).expect("F");
    spec.set_feedback(217, parse(F_217)).expect("F");
    spec
}

/// The Galois NLFSR G of the cipher with the published output function.
pub fn build_espresso_g() -> FsrSpec {
    let mut spec = FsrSpec::shift_register(N).expect("G");
    for (stage, f) in G_FEEDBACKS {
        spec.set_feedback(stage, parse(f)).expect("G");
    }
    spec.set_output(output_function()).expect("G");
    spec
}

/// G with the output bit fed back into stages 255 and 217, used during
/// initialization.
pub fn build_init_spec() -> FsrSpec {
    let mut spec = build_espresso_g();
    let z = output_function();
    for stage in [255, 217] {
        let f = spec.feedback(stage) ^ &z;
        spec.set_feedback(stage, f).expect("init spec");
    }
    spec
}

/// Bit `i` is `bytes[i / 8] >> (i % 8) & 1`.
pub fn bytes_to_bits(bytes: &[u8]) -> Vec<bool> {
    (0..bytes.len() * 8)
        .map(|i| (bytes[i / 8] >> (i % 8)) & 1 == 1)
        .collect()
}

/// Inverse of [`bytes_to_bits`]; the last byte is zero-padded.
pub fn bits_to_bytes(bits: &[bool]) -> Vec<u8> {
    let mut out = vec![0u8; bits.len().div_ceil(8)];
    for (i, &b) in bits.iter().enumerate() {
        out[i / 8] |= (b as u8) << (i % 8);
    }
    out
}

/// Key in stages 0..127, IV in 128..223, ones in 224..254, zero in 255.
pub fn load_state(key: &[bool], iv: &[bool]) -> Result<RegisterState, EspressoError> {
    if key.len() != KEY_BITS {
        return Err(EspressoError::BitLength {
            what: "key",
            expected: KEY_BITS,
            got: key.len(),
        });
    }
    if iv.len() != IV_BITS {
        return Err(EspressoError::BitLength {
            what: "IV",
            expected: IV_BITS,
            got: iv.len(),
        });
    }
    let mut bits = Vec::with_capacity(N);
    bits.extend_from_slice(key);
    bits.extend_from_slice(iv);
    bits.extend(std::iter::repeat_n(true, 31));
    bits.push(false);
    Ok(RegisterState::from_bits(bits))
}

/// State of G after the 256 initialization clocks; no output is emitted
/// during initialization.
pub fn post_init_state(key: &[bool], iv: &[bool]) -> Result<RegisterState, EspressoError> {
    let load = load_state(key, iv)?;
    let mut sim = build_init_spec().simulator(&load)?;
    for _ in 0..INIT_CLOCKS {
        sim.step();
    }
    Ok(sim.state())
}

pub fn espresso_keystream(key: &[bool], iv: &[bool], t: usize) -> Result<Vec<bool>, EspressoError> {
    let state = post_init_state(key, iv)?;
    Ok(build_espresso_g().keystream(&state, t)?)
}

/// Monomial count, variable count and degree of a Boolean function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OutputStats {
    pub monomials: usize,
    pub variables: usize,
    pub degree: i32,
}

impl OutputStats {
    pub fn of(f: &BooleanFunction) -> Self {
        OutputStats {
            monomials: f.len(),
            variables: f.dep().len(),
            degree: f.degree(),
        }
    }
}

/// G rewritten as an LFSR filter generator.
#[derive(Clone, Debug)]
pub struct TransformResult {
    /// Fibonacci LFSR whose output function is the compensated filter.
    pub lfsr: FsrSpec,
    pub output_stats: OutputStats,
    /// `x̂_i = x_i + C[i]` for each stage in [`COMPENSATED_STAGES`].
    pub compensated_taps: BTreeMap<usize, BooleanFunction>,
    pub compensation: CompensationList,
}

impl TransformResult {
    /// LFSR state matching a state of G.
    pub fn lfsr_state(&self, g_state: &RegisterState) -> Result<RegisterState, EspressoError> {
        Ok(
            compensate_state_ascending(g_state, &self.compensation)
                .map_err(TransformError::from)?,
        )
    }
}

fn expect_eq(
    what: &str,
    expected: &BooleanFunction,
    got: &BooleanFunction,
) -> Result<(), EspressoError> {
    if expected == got {
        return Ok(());
    }
    Err(EspressoError::Mismatch {
        what: what.to_string(),
        expected: expected.to_string(),
        got: got.to_string(),
    })
}

/// Moves every `g_i` of G back to `f_255` and checks the result is the base LFSR.
pub fn transform_espresso() -> Result<TransformResult, EspressoError> {
    let g = build_espresso_g();
    let t = uniform_galois_to_fib(&g, &RegisterState::zeros(N))?;
    let base = build_base_lfsr();
    for i in 0..N {
        expect_eq(
            &format!("transformed f{i}"),
            base.feedback(i),
            t.spec.feedback(i),
        )?;
    }
    let compensated_taps = COMPENSATED_STAGES
        .iter()
        .map(|&i| (i, t.compensation.tap(i)))
        .collect();
    Ok(TransformResult {
        output_stats: OutputStats::of(t.spec.output()),
        lfsr: t.spec,
        compensated_taps,
        compensation: t.compensation,
    })
}

/// Plan that moves each monomial of every `g_b` of G, re-based to
/// `f_255`, from `f_255` down to stage `b`. Applied to the base LFSR it
/// reproduces G's feedbacks.
pub fn g_shift_plan() -> ShiftPlan {
    let g = build_espresso_g();
    let mut moves = Vec::new();
    for b in (0..N - 1).rev() {
        for m in g.nonlinear_part(b).terms() {
            let moved = m
                .shifted((N - 1 - b) as i64, N, false)
                .expect("G blocks read stages below 194");
            moves.push(Move {
                monomial: moved,
                from: N - 1,
                to: b,
            });
        }
    }
    ShiftPlan::new(moves)
}

/// Applies [`g_shift_plan`] to the base LFSR carrying `output`.
pub fn base_to_galois(output: &BooleanFunction) -> Result<FsrSpec, EspressoError> {
    let base = build_base_lfsr().with_output(output.clone())?;
    let t = fib_to_galois_with(
        &base,
        &g_shift_plan(),
        &RegisterState::zeros(N),
        TermCheck::Unchecked,
    )?;
    Ok(t.spec)
}

/// Result of [`verify_equivalence`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub trials: usize,
    pub bits: usize,
    /// `(trial, first differing bit)` for every failing trial.
    pub mismatches: Vec<(usize, usize)>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares the keystream of G against the transformed LFSR, started from
/// the compensated post-initialization state, for random keys and IVs.
pub fn verify_equivalence(
    result: &TransformResult,
    trials: usize,
    bits: usize,
    seed: u64,
) -> Result<EquivalenceReport, EspressoError> {
    let g = build_espresso_g();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = Vec::new();
    for trial in 0..trials {
        let key: Vec<bool> = (0..KEY_BITS).map(|_| rng.random()).collect();
        let iv: Vec<bool> = (0..IV_BITS).map(|_| rng.random()).collect();
        let state = post_init_state(&key, &iv)?;
        let mut a = g.simulator(&state)?;
        let mut b = result.lfsr.simulator(&result.lfsr_state(&state)?)?;
        if let Some(pos) = (0..bits).find(|_| a.next_bit() != b.next_bit()) {
            mismatches.push((trial, pos));
        }
    }
    Ok(EquivalenceReport {
        trials,
        bits,
        mismatches,
    })
}

/// Variables of `f` as a sorted list, for reports.
pub fn variables(f: &BooleanFunction) -> Vec<Var> {
    f.dep()
}
