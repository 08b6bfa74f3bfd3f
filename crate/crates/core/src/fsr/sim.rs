use crate::anf::BooleanFunction;

use super::{FsrSpec, RegisterState};

/// A Boolean function flattened to per-term bit masks over the state words.
#[derive(Clone, Debug)]
pub(crate) struct CompiledFunction {
    words: usize,
    masks: Vec<u64>,
    constant: bool,
}

impl CompiledFunction {
    pub(crate) fn new(f: &BooleanFunction, n: usize) -> Self {
        let words = n.div_ceil(64);
        let mut masks = Vec::new();
        let mut constant = false;
        for m in f.terms() {
            if m.is_one() {
                constant = true;
                continue;
            }
            let start = masks.len();
            masks.resize(start + words, 0);
            for &v in m.vars() {
                masks[start + v as usize / 64] |= 1 << (v % 64);
            }
        }
        CompiledFunction {
            words,
            masks,
            constant,
        }
    }

    #[inline]
    pub(crate) fn eval(&self, state: &[u64]) -> bool {
        let mut acc = self.constant;
        if self.words == 1 {
            let s = state[0];
            for &m in &self.masks {
                acc ^= s & m == m;
            }
        } else {
            for mask in self.masks.chunks_exact(self.words) {
                acc ^= mask.iter().zip(state).all(|(&m, &s)| s & m == m);
            }
        }
        acc
    }
}

/// Compiled register simulation.
///
/// Stages with plain shift feedback are handled by a word shift; only the
/// nontrivial stages evaluate their feedback functions.
#[derive(Clone, Debug)]
pub struct Simulator {
    n: usize,
    state: Vec<u64>,
    nontrivial: Vec<(usize, CompiledFunction)>,
    output: CompiledFunction,
    scratch: Vec<bool>,
}

impl Simulator {
    pub(crate) fn new(spec: &FsrSpec, init: &RegisterState) -> Self {
        let n = spec.n();
        let mut state = vec![0u64; n.div_ceil(64)];
        for (i, &b) in init.bits().iter().enumerate() {
            if b {
                state[i / 64] |= 1 << (i % 64);
            }
        }
        let nontrivial: Vec<_> = spec
            .nontrivial_stages()
            .into_iter()
            .map(|i| (i, CompiledFunction::new(spec.feedback(i), n)))
            .collect();
        Simulator {
            n,
            state,
            scratch: vec![false; nontrivial.len()],
            nontrivial,
            output: CompiledFunction::new(spec.output(), n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `f_z` on the current state.
    #[inline]
    pub fn output_bit(&self) -> bool {
        self.output.eval(&self.state)
    }

    /// Bit of stage `i`.
    pub fn stage(&self, i: usize) -> bool {
        (self.state[i / 64] >> (i % 64)) & 1 == 1
    }

    /// XORs `v` into stage `i`.
    pub fn flip_stage(&mut self, i: usize, v: bool) {
        self.state[i / 64] ^= (v as u64) << (i % 64);
    }

    pub fn step(&mut self) {
        for (k, (_, f)) in self.nontrivial.iter().enumerate() {
            self.scratch[k] = f.eval(&self.state);
        }
        let bit0 = self.state[0] & 1;
        let w = self.state.len();
        for k in 0..w {
            let carry = if k + 1 < w { self.state[k + 1] & 1 } else { 0 };
            self.state[k] = (self.state[k] >> 1) | (carry << 63);
        }
        // rotation: f_{n-1} = x_0 unless overridden below
        let top = self.n - 1;
        self.state[top / 64] |= bit0 << (top % 64);
        for (k, (i, _)) in self.nontrivial.iter().enumerate() {
            let word = &mut self.state[i / 64];
            let bit = 1u64 << (i % 64);
            if self.scratch[k] {
                *word |= bit;
            } else {
                *word &= !bit;
            }
        }
    }

    /// Emits `f_z(X^t)` and clocks.
    #[inline]
    pub fn next_bit(&mut self) -> bool {
        let z = self.output_bit();
        self.step();
        z
    }

    pub fn keystream(&mut self, t: usize) -> Vec<bool> {
        (0..t).map(|_| self.next_bit()).collect()
    }

    pub fn state(&self) -> RegisterState {
        RegisterState::from_bits((0..self.n).map(|i| self.stage(i)).collect())
    }

    pub(crate) fn state_word(&self) -> u64 {
        self.state[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiword_shift_crosses_word_boundary() {
        let spec = FsrSpec::shift_register(130).unwrap();
        let mut init = RegisterState::zeros(130);
        init.set(64, true);
        let mut sim = spec.simulator(&init).unwrap();
        sim.step();
        assert!(sim.stage(63));
        for _ in 0..63 {
            sim.step();
        }
        assert!(sim.stage(0));
        sim.step();
        assert!(sim.stage(129));
    }

    #[test]
    fn matches_direct_step() {
        let spec = FsrSpec::fibonacci(
            70,
            "x0 + x3*x65 + x69 + 1".parse().unwrap(),
            "x1*x68 + x2".parse().unwrap(),
        )
        .unwrap();
        let mut state = RegisterState::from_word(0xdead_beef_1234_5678, 70);
        state.set(69, true);
        let mut sim = spec.simulator(&state).unwrap();
        for _ in 0..200 {
            assert_eq!(
                sim.output_bit(),
                spec.output().evaluate(state.bits()).unwrap()
            );
            sim.step();
            state = spec.step(&state).unwrap();
            assert_eq!(sim.state(), state);
        }
    }
}
