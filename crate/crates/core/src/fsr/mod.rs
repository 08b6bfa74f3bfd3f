//! Feedback shift registers in Fibonacci and Galois configuration.
//!
//! Stage `x_0` is the output end and the register shifts towards it: on each
//! clock every stage `i` is loaded with `f_i` evaluated on the *old* state.
//! Keystream bits are produced before clocking, i.e. `z_t = f_z(X^t)`.

mod file;
mod sim;

pub use file::{FsrFile, FsrFileError};
pub(crate) use sim::CompiledFunction;
pub use sim::Simulator;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::anf::{AnfError, BooleanFunction, Var};

/// Largest register for which [`FsrSpec::period`] walks the cycle.
pub const MAX_PERIOD_BITS: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FsrError {
    #[error("register length must be positive")]
    EmptyRegister,
    #[error("expected {expected} feedback functions, got {got}")]
    FeedbackCount { expected: usize, got: usize },
    #[error("{which} depends on x{index}, outside a register of length {n}")]
    DependencyOutOfRange { which: String, index: Var, n: usize },
    #[error("state has length {got}, register has length {expected}")]
    StateLength { expected: usize, got: usize },
    #[error("period search is limited to n <= {MAX_PERIOD_BITS} (got n = {0})")]
    TooLargeForPeriod(usize),
    #[error("invalid state string: {0}")]
    BadStateString(String),
    #[error(transparent)]
    Anf(#[from] AnfError),
}

/// Structural class of a register (uniformity in the sense of Dubrova).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Configuration {
    /// Only the last stage receives feedback.
    Fibonacci,
    /// Every nontrivial feedback taps at or below `tau`, the lowest
    /// stage with nontrivial feedback.
    UniformGalois {
        tau: usize,
    },
    GeneralGalois,
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Configuration::Fibonacci => f.write_str("fibonacci"),
            Configuration::UniformGalois { tau } => write!(f, "uniform-galois(tau={tau})"),
            Configuration::GeneralGalois => f.write_str("general-galois"),
        }
    }
}

/// Register length, one feedback function per stage, and an output function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FsrSpec {
    n: usize,
    feedback: Vec<BooleanFunction>,
    output: BooleanFunction,
}

impl FsrSpec {
    pub fn new(
        n: usize,
        feedback: Vec<BooleanFunction>,
        output: BooleanFunction,
    ) -> Result<Self, FsrError> {
        if n == 0 {
            return Err(FsrError::EmptyRegister);
        }
        if feedback.len() != n {
            return Err(FsrError::FeedbackCount {
                expected: n,
                got: feedback.len(),
            });
        }
        for (i, f) in feedback.iter().enumerate() {
            check_range(f, n, || format!("f{i}"))?;
        }
        check_range(&output, n, || "output function".to_string())?;
        Ok(FsrSpec {
            n,
            feedback,
            output,
        })
    }

    /// Pure rotation: `f_i = x_{i+1}`, `f_{n-1} = x_0`, output `x_0`.
    pub fn shift_register(n: usize) -> Result<Self, FsrError> {
        if n == 0 {
            return Err(FsrError::EmptyRegister);
        }
        let feedback = (0..n).map(|i| Self::shift_term(n, i)).collect();
        Self::new(n, feedback, BooleanFunction::var(0))
    }

    /// Fibonacci register with last-stage feedback `last`.
    pub fn fibonacci(
        n: usize,
        last: BooleanFunction,
        output: BooleanFunction,
    ) -> Result<Self, FsrError> {
        let mut spec = Self::shift_register(n)?;
        spec.set_feedback(n - 1, last)?;
        spec.set_output(output)?;
        Ok(spec)
    }

    /// The trivial feedback of stage `i`: `x_{i+1}`, or `x_0` for the last stage.
    pub fn shift_term(n: usize, i: usize) -> BooleanFunction {
        if i + 1 == n {
            BooleanFunction::var(0)
        } else {
            BooleanFunction::var(i as Var + 1)
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn feedback(&self, i: usize) -> &BooleanFunction {
        &self.feedback[i]
    }

    pub fn feedbacks(&self) -> &[BooleanFunction] {
        &self.feedback
    }

    pub fn output(&self) -> &BooleanFunction {
        &self.output
    }

    pub fn set_feedback(&mut self, i: usize, f: BooleanFunction) -> Result<(), FsrError> {
        if i >= self.n {
            return Err(FsrError::FeedbackCount {
                expected: self.n,
                got: i + 1,
            });
        }
        check_range(&f, self.n, || format!("f{i}"))?;
        self.feedback[i] = f;
        Ok(())
    }

    pub fn set_output(&mut self, f: BooleanFunction) -> Result<(), FsrError> {
        check_range(&f, self.n, || "output function".to_string())?;
        self.output = f;
        Ok(())
    }

    pub fn with_output(mut self, f: BooleanFunction) -> Result<Self, FsrError> {
        self.set_output(f)?;
        Ok(self)
    }

    /// `g_i = f_i + x_{i+1}` (or `f_{n-1} + x_0`): the part added to a plain shift.
    pub fn nonlinear_part(&self, i: usize) -> BooleanFunction {
        &self.feedback[i] ^ &Self::shift_term(self.n, i)
    }

    pub fn is_trivial_stage(&self, i: usize) -> bool {
        self.feedback[i] == Self::shift_term(self.n, i)
    }

    /// Stages whose feedback is not a plain shift, ascending.
    pub fn nontrivial_stages(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| !self.is_trivial_stage(i)).collect()
    }

    pub fn is_fibonacci(&self) -> bool {
        (0..self.n - 1).all(|i| self.is_trivial_stage(i))
    }

    pub fn classify(&self) -> Configuration {
        let Some(tau) = (0..self.n - 1).find(|&i| !self.is_trivial_stage(i)) else {
            return Configuration::Fibonacci;
        };
        let low_enough = |g: &BooleanFunction| g.max_var().is_none_or(|m| m as usize <= tau);
        let middle_ok = (tau..self.n - 1).all(|i| low_enough(&self.nonlinear_part(i)));
        let last = self.nonlinear_part(self.n - 1);
        if middle_ok && low_enough(&last) && !last.depends_on(0) {
            Configuration::UniformGalois { tau }
        } else {
            Configuration::GeneralGalois
        }
    }

    fn check_state(&self, state: &RegisterState) -> Result<(), FsrError> {
        if state.len() != self.n {
            return Err(FsrError::StateLength {
                expected: self.n,
                got: state.len(),
            });
        }
        Ok(())
    }

    /// One clock, evaluating every feedback directly on the old state.
    pub fn step(&self, state: &RegisterState) -> Result<RegisterState, FsrError> {
        self.check_state(state)?;
        let bits = self
            .feedback
            .iter()
            .map(|f| f.evaluate(&state.bits))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RegisterState { bits })
    }

    /// Output-then-clock keystream of length `t`.
    pub fn keystream(&self, init: &RegisterState, t: usize) -> Result<Vec<bool>, FsrError> {
        let mut sim = self.simulator(init)?;
        Ok(sim.keystream(t))
    }

    /// State after `t` clocks.
    pub fn advance(&self, init: &RegisterState, t: usize) -> Result<RegisterState, FsrError> {
        let mut sim = self.simulator(init)?;
        for _ in 0..t {
            sim.step();
        }
        Ok(sim.state())
    }

    pub fn simulator(&self, init: &RegisterState) -> Result<Simulator, FsrError> {
        self.check_state(init)?;
        Ok(Simulator::new(self, init))
    }

    /// Least `T > 0` with `X^T = X^0`, by walking the orbit. Returns `None`
    /// when `init` lies on a tail rather than a cycle.
    pub fn period(&self, init: &RegisterState) -> Result<Option<u64>, FsrError> {
        if self.n > MAX_PERIOD_BITS {
            return Err(FsrError::TooLargeForPeriod(self.n));
        }
        let mut sim = self.simulator(init)?;
        let start = sim.state_word();
        let limit = 1u64 << self.n;
        for t in 1..=limit {
            sim.step();
            if sim.state_word() == start {
                return Ok(Some(t));
            }
        }
        Ok(None)
    }
}

fn check_range(
    f: &BooleanFunction,
    n: usize,
    which: impl FnOnce() -> String,
) -> Result<(), FsrError> {
    match f.max_var() {
        Some(m) if m as usize >= n => Err(FsrError::DependencyOutOfRange {
            which: which(),
            index: m,
            n,
        }),
        _ => Ok(()),
    }
}

/// Register contents; bit `i` is stage `x_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RegisterState {
    bits: Vec<bool>,
}

impl RegisterState {
    pub fn zeros(n: usize) -> Self {
        RegisterState {
            bits: vec![false; n],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        RegisterState { bits }
    }

    /// Low `n` bits of `word`, bit `i` to stage `i`.
    pub fn from_word(word: u64, n: usize) -> Self {
        RegisterState {
            bits: (0..n).map(|i| i < 64 && (word >> i) & 1 == 1).collect(),
        }
    }

    /// Inverse of [`RegisterState::from_word`]; requires `n <= 64`.
    pub fn to_word(&self) -> u64 {
        assert!(self.bits.len() <= 64, "state longer than 64 bits");
        self.bits
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | ((b as u64) << i))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, v: bool) {
        self.bits[i] = v;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }
}

/// Written with the leftmost character as `x_{n-1}`.
impl fmt::Display for RegisterState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in self.bits.iter().rev() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for RegisterState {
    type Err = FsrError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars().rev() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return Err(FsrError::BadStateString(format!("unexpected '{c}'"))),
            }
        }
        if bits.is_empty() {
            return Err(FsrError::BadStateString("empty".into()));
        }
        Ok(RegisterState { bits })
    }
}
