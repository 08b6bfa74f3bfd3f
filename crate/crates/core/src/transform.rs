//! Moving monomials between feedback functions, compensation lists, and the
//! Fibonacci/Galois transformations built on them.
//!
//! A compensation list `C` relates two registers clock by clock: the
//! transformed state satisfies `x̂_i = x_i + C[i](X)`. Every list produced
//! here has `C[i]` depending only on stages below `i`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::anf::{AnfError, BooleanFunction, Monomial, Var};
use crate::fsr::{CompiledFunction, Configuration, FsrError, FsrSpec, RegisterState};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("monomial {monomial} is not a term of f{stage}")]
    NotPresent { monomial: Monomial, stage: usize },
    #[error("monomial {0} is moved more than once")]
    DuplicateMove(Monomial),
    #[error("source and destination stage are both {0}")]
    SameStage(usize),
    #[error("stage {stage} outside a register of length {n}")]
    StageOutOfRange { stage: usize, n: usize },
    #[error("compensation lists are defined for downward moves only, got f{from} to f{to}")]
    NotDownward { from: usize, to: usize },
    #[error("moving {monomial} from f{from} to f{to} needs every index >= {need}")]
    Underflow {
        monomial: Monomial,
        from: usize,
        to: usize,
        need: usize,
    },
    #[error("register is not in Fibonacci configuration")]
    NotFibonacci,
    #[error("move of {monomial} must start at f{expected}, not f{from}")]
    PlanSource {
        monomial: Monomial,
        from: usize,
        expected: usize,
    },
    #[error("move of {monomial} to f{to}: destination must lie in [{lo}, {hi}]")]
    PlanTarget {
        monomial: Monomial,
        to: usize,
        lo: usize,
        hi: usize,
    },
    #[error("g{stage} = {g} depends on stages above {stage}")]
    Shape { stage: usize, g: BooleanFunction },
    #[error("register is {0}, expected uniform Galois")]
    NotUniform(Configuration),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Fsr(#[from] FsrError),
    #[error(transparent)]
    Anf(#[from] AnfError),
}

/// One monomial moved from `f_from` to `f_to`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Move {
    pub monomial: Monomial,
    pub from: usize,
    pub to: usize,
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={} from={} to={}", self.monomial, self.from, self.to)
    }
}

/// Ordered list of moves, text form one `m=<monomial> from=<a> to=<b>` per line.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ShiftPlan {
    pub moves: Vec<Move>,
}

impl ShiftPlan {
    pub fn new(moves: Vec<Move>) -> Self {
        ShiftPlan { moves }
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }
}

impl fmt::Display for ShiftPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.moves {
            writeln!(f, "{m}")?;
        }
        Ok(())
    }
}

impl FromStr for ShiftPlan {
    type Err = TransformError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut moves = Vec::new();
        for (idx, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| TransformError::Syntax { line: idx + 1, msg };
            let (mut m, mut from, mut to) = (None, None, None);
            for field in line.split_whitespace() {
                let (key, value) = field
                    .split_once('=')
                    .ok_or_else(|| err(format!("expected key=value, got `{field}`")))?;
                let stage = || {
                    value
                        .parse::<usize>()
                        .map_err(|_| err(format!("bad stage `{value}`")))
                };
                match key {
                    "m" => m = Some(value.parse::<Monomial>().map_err(|e| err(e.to_string()))?),
                    "from" => from = Some(stage()?),
                    "to" => to = Some(stage()?),
                    _ => return Err(err(format!("unknown field `{key}`"))),
                }
            }
            match (m, from, to) {
                (Some(monomial), Some(from), Some(to)) => moves.push(Move { monomial, from, to }),
                _ => return Err(err("a move needs m=, from= and to=".into())),
            }
        }
        Ok(ShiftPlan { moves })
    }
}

/// `C[0..n]`; text form `n = N` followed by `c<i> = <ANF>` for nonzero entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompensationList {
    entries: Vec<BooleanFunction>,
}

impl CompensationList {
    pub fn zero(n: usize) -> Self {
        CompensationList {
            entries: vec![BooleanFunction::zero(); n],
        }
    }

    pub fn from_entries(entries: Vec<BooleanFunction>) -> Self {
        CompensationList { entries }
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize) -> &BooleanFunction {
        &self.entries[i]
    }

    pub fn set(&mut self, i: usize, f: BooleanFunction) {
        self.entries[i] = f;
    }

    pub fn entries(&self) -> &[BooleanFunction] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(BooleanFunction::is_zero)
    }

    /// `x_i + C[i]`.
    pub fn tap(&self, i: usize) -> BooleanFunction {
        &BooleanFunction::var(i as Var) ^ &self.entries[i]
    }

    /// Entrywise XOR.
    pub fn xor_with(&mut self, other: &CompensationList) -> Result<(), TransformError> {
        if other.n() != self.n() {
            return Err(TransformError::LengthMismatch {
                expected: self.n(),
                got: other.n(),
            });
        }
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a ^= b;
        }
        Ok(())
    }

    /// `C[i](state)` for every stage.
    pub fn evaluate(&self, state: &[bool]) -> Result<Vec<bool>, AnfError> {
        self.entries.iter().map(|c| c.evaluate(state)).collect()
    }
}

impl fmt::Display for CompensationList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n = {}", self.n())?;
        for (i, c) in self.entries.iter().enumerate() {
            if !c.is_zero() {
                writeln!(f, "c{i} = {c}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for CompensationList {
    type Err = TransformError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut list: Option<CompensationList> = None;
        for (idx, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| TransformError::Syntax { line: idx + 1, msg };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err("expected `key = value`".into()))?;
            let (key, value) = (key.trim(), value.trim());
            if key == "n" {
                let n = value
                    .parse()
                    .map_err(|_| err(format!("bad length `{value}`")))?;
                list = Some(CompensationList::zero(n));
                continue;
            }
            let list = list
                .as_mut()
                .ok_or_else(|| err("`n = ...` must come first".into()))?;
            let i = key
                .strip_prefix('c')
                .and_then(|i| i.parse::<usize>().ok())
                .filter(|&i| i < list.n())
                .ok_or_else(|| err(format!("bad entry key `{key}`")))?;
            let f: BooleanFunction = value.parse().map_err(|e: AnfError| err(e.to_string()))?;
            if f.max_var().is_some_and(|v| v as usize >= list.n()) {
                return Err(err(format!("entry {i} uses a stage outside the register")));
            }
            list.entries[i] = f;
        }
        list.ok_or_else(|| TransformError::Syntax {
            line: 0,
            msg: "missing `n = ...` line".into(),
        })
    }
}

/// A transformed register with its matching initial state and the list
/// relating it to the input (`x̂_i = x_i + C[i]`, Galois side hatted).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transformed {
    pub spec: FsrSpec,
    pub init: RegisterState,
    pub compensation: CompensationList,
}

fn check_stage(stage: usize, n: usize) -> Result<(), TransformError> {
    if stage >= n {
        return Err(TransformError::StageOutOfRange { stage, n });
    }
    Ok(())
}

fn check_state(init: &RegisterState, n: usize) -> Result<(), TransformError> {
    if init.len() != n {
        return Err(FsrError::StateLength {
            expected: n,
            got: init.len(),
        }
        .into());
    }
    Ok(())
}

/// Moves `m` from `f_a` to `f_b`, re-basing each index `i` to `(i - a + b) mod n`.
pub fn shift_monomial(
    spec: &FsrSpec,
    m: &Monomial,
    a: usize,
    b: usize,
) -> Result<FsrSpec, TransformError> {
    let n = spec.n();
    check_stage(a, n)?;
    check_stage(b, n)?;
    if a == b {
        return Err(TransformError::SameStage(a));
    }
    if !spec.feedback(a).contains(m) {
        return Err(TransformError::NotPresent {
            monomial: m.clone(),
            stage: a,
        });
    }
    let moved = m.shifted(b as i64 - a as i64, n, true)?;
    let mut out = spec.clone();
    let mut fa = spec.feedback(a).clone();
    fa.toggle(m.clone());
    out.set_feedback(a, fa)?;
    let mut fb = spec.feedback(b).clone();
    fb.toggle(moved);
    out.set_feedback(b, fb)?;
    Ok(out)
}

/// List for moving `m` from `f_a` down to `f_b`: `C[i] = m|_{-(a-i+1)}` for
/// `i` in `[b+1, a]`, zero elsewhere.
pub fn compensation_list(
    m: &Monomial,
    a: usize,
    b: usize,
    n: usize,
) -> Result<CompensationList, TransformError> {
    check_stage(a, n)?;
    if b == a {
        return Err(TransformError::SameStage(a));
    }
    if b > a {
        return Err(TransformError::NotDownward { from: a, to: b });
    }
    let need = a - b;
    if m.min_var().is_some_and(|v| (v as usize) < need) {
        return Err(TransformError::Underflow {
            monomial: m.clone(),
            from: a,
            to: b,
            need,
        });
    }
    let mut list = CompensationList::zero(n);
    for i in b + 1..=a {
        let shift = -((a - i + 1) as i64);
        list.entries[i] = m.shifted(shift, n, false)?.into();
    }
    Ok(list)
}

/// Entrywise XOR of equal-length lists.
pub fn combine<'a, I>(lists: I) -> Result<CompensationList, TransformError>
where
    I: IntoIterator<Item = &'a CompensationList>,
{
    let mut iter = lists.into_iter();
    let Some(first) = iter.next() else {
        return Err(TransformError::LengthMismatch {
            expected: 1,
            got: 0,
        });
    };
    let mut acc = first.clone();
    for l in iter {
        acc.xor_with(l)?;
    }
    Ok(acc)
}

/// Replaces `x_i` by `x_i + C[i]` for `i = n-1` down to `0`, so later
/// (lower) substitutions also rewrite taps introduced by earlier ones.
pub fn compensate_iterative(f: &BooleanFunction, c: &CompensationList) -> BooleanFunction {
    let mut out = f.clone();
    for i in (0..c.n()).rev() {
        out = out.substitute_tap(i as Var, &c.entries[i]);
    }
    out
}

/// Single-pass substitution `x_i -> x_i + C[i]` for all `i` at once.
pub fn compensate_simultaneous(f: &BooleanFunction, c: &CompensationList) -> BooleanFunction {
    f.substitute_all(|v| match c.entries.get(v as usize) {
        Some(e) if !e.is_zero() => &BooleanFunction::var(v) ^ e,
        _ => BooleanFunction::var(v),
    })
}

/// `y_i = x_i + C[i](y)`, computed for `i = 0, 1, …` on the updated vector.
pub fn compensate_state_ascending(
    init: &RegisterState,
    c: &CompensationList,
) -> Result<RegisterState, AnfError> {
    let mut bits = init.bits().to_vec();
    for i in 0..bits.len() {
        bits[i] ^= c.entries[i].evaluate(&bits)?;
    }
    Ok(RegisterState::from_bits(bits))
}

/// `x̂_i = x_i + C[i](X)` with every entry read from the unmodified state.
pub fn compensate_state_plain(
    init: &RegisterState,
    c: &CompensationList,
) -> Result<RegisterState, AnfError> {
    let delta = c.evaluate(init.bits())?;
    Ok(RegisterState::from_bits(
        init.bits().iter().zip(delta).map(|(&x, d)| x ^ d).collect(),
    ))
}

/// How [`fib_to_galois_with`] checks that planned monomials exist in `f_{n-1}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TermCheck {
    /// Every moved monomial is a term of `f_{n-1}` and none is moved twice.
    #[default]
    EachTerm,
    /// No presence check. Moving an absent monomial adds it to `f_{n-1}`;
    /// the transformation stays keystream-equivalent either way.
    Unchecked,
}

/// Checks a plan against a Fibonacci register without changing anything.
fn validate_plan(spec: &FsrSpec, plan: &ShiftPlan, check: TermCheck) -> Result<(), TransformError> {
    let n = spec.n();
    let top = n - 1;
    let last = spec.feedback(top);
    let mut seen = BooleanFunction::zero();
    for mv in &plan.moves {
        let m = &mv.monomial;
        if mv.from != top {
            return Err(TransformError::PlanSource {
                monomial: m.clone(),
                from: mv.from,
                expected: top,
            });
        }
        let hi = n.saturating_sub(2);
        let lo = m.min_var().map_or(n, |v| top - v as usize);
        if n < 2 || mv.to < lo || mv.to > hi {
            return Err(TransformError::PlanTarget {
                monomial: m.clone(),
                to: mv.to,
                lo,
                hi,
            });
        }
        if check == TermCheck::EachTerm {
            if !last.contains(m) {
                return Err(TransformError::NotPresent {
                    monomial: m.clone(),
                    stage: top,
                });
            }
            if seen.contains(m) {
                return Err(TransformError::DuplicateMove(m.clone()));
            }
            seen.toggle(m.clone());
        }
    }
    Ok(())
}

/// Fibonacci to Galois: moves each planned monomial from `f_{n-1}` down to
/// its target stage and compensates the feedbacks, the output function and
/// the initial state. Moves sharing a target are XORed together.
pub fn fib_to_galois(
    spec: &FsrSpec,
    plan: &ShiftPlan,
    init: &RegisterState,
) -> Result<Transformed, TransformError> {
    fib_to_galois_with(spec, plan, init, TermCheck::EachTerm)
}

pub fn fib_to_galois_with(
    spec: &FsrSpec,
    plan: &ShiftPlan,
    init: &RegisterState,
    check: TermCheck,
) -> Result<Transformed, TransformError> {
    let n = spec.n();
    check_state(init, n)?;
    if !spec.is_fibonacci() {
        return Err(TransformError::NotFibonacci);
    }
    validate_plan(spec, plan, check)?;
    let top = n - 1;

    let mut c = CompensationList::zero(n);
    for mv in &plan.moves {
        c.xor_with(&compensation_list(&mv.monomial, top, mv.to, n)?)?;
    }

    let mut moved = vec![BooleanFunction::zero(); n];
    let mut g_top = spec.nonlinear_part(top);
    for mv in &plan.moves {
        g_top.toggle(mv.monomial.clone());
        moved[mv.to].toggle(mv.monomial.shifted(-((top - mv.to) as i64), n, false)?);
    }

    let mut out = spec.clone();
    for (b, h) in moved.iter().enumerate() {
        if !h.is_zero() {
            let g = compensate_iterative(h, &c);
            out.set_feedback(b, &FsrSpec::shift_term(n, b) ^ &g)?;
        }
    }
    let g = compensate_iterative(&g_top, &c);
    out.set_feedback(top, &FsrSpec::shift_term(n, top) ^ &g)?;
    out.set_output(compensate_iterative(spec.output(), &c))?;

    let init = compensate_state_plain(init, &c)?;
    Ok(Transformed {
        spec: out,
        init,
        compensation: c,
    })
}

/// Checks `dep(g_i) ⊆ [0, i]` for every stage below the last.
fn check_galois_shape(spec: &FsrSpec) -> Result<(), TransformError> {
    for i in 0..spec.n() - 1 {
        let g = spec.nonlinear_part(i);
        if g.max_var().is_some_and(|v| v as usize > i) {
            return Err(TransformError::Shape { stage: i, g });
        }
    }
    Ok(())
}

/// General Galois to Fibonacci.
///
/// Stages are processed upward. Each `g_i` (already rewritten in Fibonacci
/// coordinates) contributes `g_i|_{+(j-i-1)}` to `C[j]` for `j > i` and
/// `g_i|_{+(n-1-i)}` to the new last feedback; then tap `x_{i+1}` is replaced
/// by `x_{i+1} + C[i+1]` in every feedback not yet processed.
pub fn galois_to_fib(spec: &FsrSpec, init: &RegisterState) -> Result<Transformed, TransformError> {
    let n = spec.n();
    check_state(init, n)?;
    check_galois_shape(spec)?;
    let top = n - 1;

    let mut g: Vec<BooleanFunction> = (0..n).map(|i| spec.nonlinear_part(i)).collect();
    let mut c = CompensationList::zero(n);
    let mut last = BooleanFunction::zero();
    for i in 0..top {
        if !g[i].is_zero() {
            let h = g[i].clone();
            for j in i + 1..n {
                c.entries[j] ^= h.shift_indices((j - i - 1) as i64, n, false)?;
            }
            last ^= h.shift_indices((top - i) as i64, n, false)?;
        }
        let tap = c.entries[i + 1].clone();
        if !tap.is_zero() {
            for gk in &mut g[i + 1..] {
                *gk = gk.substitute_tap(i as Var + 1, &tap);
            }
        }
    }
    last ^= &g[top];
    finish_fibonacci(spec, init, c, last)
}

fn finish_fibonacci(
    spec: &FsrSpec,
    init: &RegisterState,
    c: CompensationList,
    last_g: BooleanFunction,
) -> Result<Transformed, TransformError> {
    let n = spec.n();
    let output = compensate_simultaneous(spec.output(), &c);
    let last = &FsrSpec::shift_term(n, n - 1) ^ &last_g;
    let out = FsrSpec::fibonacci(n, last, output)?;
    let init = compensate_state_ascending(init, &c)?;
    Ok(Transformed {
        spec: out,
        init,
        compensation: c,
    })
}

/// The per-stage lists `C_i[j] = g_i|_{+(j-i-1)}`, `j` in `[i+1, n-1]`, for
/// every nonzero `g_i` below the last stage.
pub fn uniform_lists(spec: &FsrSpec) -> Result<Vec<(usize, CompensationList)>, TransformError> {
    let n = spec.n();
    let mut lists = Vec::new();
    for i in 0..n - 1 {
        let g = spec.nonlinear_part(i);
        if g.is_zero() {
            continue;
        }
        let mut c = CompensationList::zero(n);
        for j in i + 1..n {
            c.entries[j] = g.shift_indices((j - i - 1) as i64, n, false)?;
        }
        lists.push((i, c));
    }
    Ok(lists)
}

/// Uniform Galois to Fibonacci; no feedback needs rewriting because every
/// `g_i` reads only stages whose compensation entries are zero.
pub fn uniform_galois_to_fib(
    spec: &FsrSpec,
    init: &RegisterState,
) -> Result<Transformed, TransformError> {
    let n = spec.n();
    check_state(init, n)?;
    match spec.classify() {
        Configuration::Fibonacci | Configuration::UniformGalois { .. } => {}
        other => return Err(TransformError::NotUniform(other)),
    }
    let top = n - 1;
    let mut c = CompensationList::zero(n);
    let mut last = spec.nonlinear_part(top);
    for (i, list) in uniform_lists(spec)? {
        c.xor_with(&list)?;
        last ^= spec
            .nonlinear_part(i)
            .shift_indices((top - i) as i64, n, false)?;
    }
    finish_fibonacci(spec, init, c, last)
}

/// Outcome of [`state_relation_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationReport {
    pub clocks: usize,
    /// First `(clock, stage)` where `x̂_i != x_i + C[i](X)`.
    pub first_divergence: Option<(usize, usize)>,
}

impl RelationReport {
    pub fn holds(&self) -> bool {
        self.first_divergence.is_none()
    }
}

/// Simulates both registers for `t` clocks and checks
/// `gal_i = fib_i + C[i](fib)` at every clock and stage.
pub fn state_relation_check(
    fib: &FsrSpec,
    gal: &FsrSpec,
    c: &CompensationList,
    init_fib: &RegisterState,
    init_gal: &RegisterState,
    t: usize,
) -> Result<RelationReport, TransformError> {
    let n = fib.n();
    for got in [gal.n(), c.n()] {
        if got != n {
            return Err(TransformError::LengthMismatch { expected: n, got });
        }
    }
    let mut a = fib.simulator(init_fib)?;
    let mut b = gal.simulator(init_gal)?;
    let compiled: Vec<_> = c
        .entries
        .iter()
        .map(|e| CompiledFunction::new(e, n))
        .collect();
    let mut words = vec![0u64; n.div_ceil(64)];
    for clock in 0..t {
        words.iter_mut().for_each(|w| *w = 0);
        for i in 0..n {
            if a.stage(i) {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        for (i, ci) in compiled.iter().enumerate() {
            if b.stage(i) != a.stage(i) ^ ci.eval(&words) {
                return Ok(RelationReport {
                    clocks: t,
                    first_divergence: Some((clock, i)),
                });
            }
        }
        a.step();
        b.step();
    }
    Ok(RelationReport {
        clocks: t,
        first_divergence: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> BooleanFunction {
        s.parse().unwrap()
    }

    fn m(s: &str) -> Monomial {
        s.parse().unwrap()
    }

    #[test]
    fn shift_down_by_one() {
        let spec = FsrSpec::fibonacci(4, f("x0 + x1*x2"), f("x0")).unwrap();
        let out = shift_monomial(&spec, &m("x1*x2"), 3, 2).unwrap();
        assert_eq!(out.feedback(3), &f("x0"));
        assert_eq!(out.feedback(2), &f("x3 + x0*x1"));
        let back = shift_monomial(&out, &m("x0*x1"), 2, 3).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn shift_wraps_mod_n() {
        let mut spec = FsrSpec::shift_register(256).unwrap();
        spec.set_feedback(217, f("x218 + x3*x32")).unwrap();
        let out = shift_monomial(&spec, &m("x3*x32"), 217, 255).unwrap();
        assert!(out.feedback(255).contains(&m("x41*x70")));
    }

    #[test]
    fn shift_rejects_absent_monomial() {
        let spec = FsrSpec::shift_register(4).unwrap();
        assert!(matches!(
            shift_monomial(&spec, &m("x1*x2"), 3, 2),
            Err(TransformError::NotPresent { stage: 3, .. })
        ));
        assert!(matches!(
            shift_monomial(&spec, &m("x0"), 3, 3),
            Err(TransformError::SameStage(3))
        ));
    }

    #[test]
    fn compensation_list_formula() {
        let c = compensation_list(&m("x2*x3"), 3, 2, 4).unwrap();
        assert_eq!(c.entries(), &[f("0"), f("0"), f("0"), f("x1*x2")]);
        let c = compensation_list(&m("x73*x244"), 255, 193, 256).unwrap();
        assert_eq!(c.get(194), &f("x11*x182"));
        assert_eq!(c.get(255), &f("x72*x243"));
        assert!(c.get(193).is_zero());
        assert!(matches!(
            compensation_list(&m("x1*x3"), 3, 1, 4),
            Err(TransformError::Underflow { need: 2, .. })
        ));
    }

    #[test]
    fn combine_cancels_and_unions() {
        let a = compensation_list(&m("x3"), 3, 2, 4).unwrap();
        assert!(combine([&a, &a]).unwrap().is_zero());
        let b = compensation_list(&m("x1*x2"), 2, 1, 4).unwrap();
        let both = combine([&a, &b]).unwrap();
        assert_eq!(both.get(2), &f("x0*x1"));
        assert_eq!(both.get(3), &f("x2"));
        assert!(combine([&a, &CompensationList::zero(5)]).is_err());
    }

    #[test]
    fn iterative_rewrites_introduced_taps() {
        let c = CompensationList::from_entries(vec![f("0"), f("0"), f("x1"), f("x2")]);
        assert_eq!(compensate_iterative(&f("x3"), &c), f("x3 + x2 + x1"));
        assert_eq!(compensate_simultaneous(&f("x3"), &c), f("x3 + x2"));
        assert_eq!(
            compensate_iterative(&f("x3*x1"), &CompensationList::zero(4)),
            f("x1*x3")
        );
    }

    #[test]
    fn plan_text_round_trip() {
        let text = "m=x3*x32 from=255 to=217\n# note\nm=x5 from=255 to=254\n";
        let plan: ShiftPlan = text.parse().unwrap();
        assert_eq!(plan.len(), 2);
        assert_eq!(plan.moves[0].monomial, m("x3*x32"));
        assert_eq!(plan.to_string().parse::<ShiftPlan>().unwrap(), plan);
        assert!(matches!(
            "m=x1 from=3\n".parse::<ShiftPlan>(),
            Err(TransformError::Syntax { line: 1, .. })
        ));
    }

    #[test]
    fn compensation_text_round_trip() {
        let c = compensation_list(&m("x2*x3"), 3, 1, 4).unwrap();
        let back: CompensationList = c.to_string().parse().unwrap();
        assert_eq!(back, c);
        assert!("c1 = x0\n".parse::<CompensationList>().is_err());
    }

    #[test]
    fn empty_plan_is_identity() {
        let spec = FsrSpec::fibonacci(5, f("x0 + x1*x3"), f("x2 + x4")).unwrap();
        let init = RegisterState::from_word(0b10110, 5);
        let t = fib_to_galois(&spec, &ShiftPlan::default(), &init).unwrap();
        assert_eq!(t.spec, spec);
        assert_eq!(t.init, init);
    }

    #[test]
    fn plan_preconditions() {
        let spec = FsrSpec::fibonacci(6, f("x0 + x2*x4"), f("x0 + x3*x5")).unwrap();
        let init = RegisterState::from_word(0b011010, 6);
        let plan = |s: &str| s.parse::<ShiftPlan>().unwrap();
        // min index 2 allows targets 3 and 4 only
        assert!(fib_to_galois(&spec, &plan("m=x2*x4 from=5 to=3"), &init).is_ok());
        assert!(matches!(
            fib_to_galois(&spec, &plan("m=x2*x4 from=5 to=2"), &init),
            Err(TransformError::PlanTarget { lo: 3, hi: 4, .. })
        ));
        assert!(matches!(
            fib_to_galois(&spec, &plan("m=x1*x4 from=5 to=4"), &init),
            Err(TransformError::NotPresent { stage: 5, .. })
        ));
        assert!(matches!(
            fib_to_galois(&spec, &plan("m=x2*x4 from=4 to=3"), &init),
            Err(TransformError::PlanSource { .. })
        ));
        let twice = plan("m=x2*x4 from=5 to=4\nm=x2*x4 from=5 to=3");
        assert!(matches!(
            fib_to_galois(&spec, &twice, &init),
            Err(TransformError::DuplicateMove(_))
        ));
        let absent = plan("m=x3 from=5 to=4\nm=x3 from=5 to=3");
        assert!(fib_to_galois(&spec, &absent, &init).is_err());
        let t = fib_to_galois_with(&spec, &absent, &init, TermCheck::Unchecked).unwrap();
        assert_eq!(
            spec.keystream(&init, 100).unwrap(),
            t.spec.keystream(&t.init, 100).unwrap()
        );
    }

    #[test]
    fn small_round_trip() {
        let spec = FsrSpec::fibonacci(6, f("x0 + x2*x4 + x3*x5 + x1"), f("x5*x1 + x3")).unwrap();
        let init = RegisterState::from_word(0b101101, 6);
        let plan: ShiftPlan = "m=x2*x4 from=5 to=3\nm=x3*x5 from=5 to=4".parse().unwrap();
        let gal = fib_to_galois(&spec, &plan, &init).unwrap();
        assert_eq!(
            spec.keystream(&init, 200).unwrap(),
            gal.spec.keystream(&gal.init, 200).unwrap()
        );
        let rel = state_relation_check(&spec, &gal.spec, &gal.compensation, &init, &gal.init, 200)
            .unwrap();
        assert!(rel.holds());
        let fib = galois_to_fib(&gal.spec, &gal.init).unwrap();
        assert_eq!(fib.spec, spec);
        assert_eq!(fib.init, init);
        assert_eq!(fib.compensation, gal.compensation);
    }

    #[test]
    fn corrupted_list_reports_divergence() {
        let spec = FsrSpec::fibonacci(6, f("x0 + x2*x4"), f("x0")).unwrap();
        let init = RegisterState::from_word(0b111111, 6);
        let plan: ShiftPlan = "m=x2*x4 from=5 to=3".parse().unwrap();
        let gal = fib_to_galois(&spec, &plan, &init).unwrap();
        let mut bad = gal.compensation.clone();
        bad.set(5, &bad.get(5).clone() ^ &BooleanFunction::one());
        let rel = state_relation_check(&spec, &gal.spec, &bad, &init, &gal.init, 50).unwrap();
        assert_eq!(rel.first_divergence, Some((0, 5)));
    }

    #[test]
    fn uniform_matches_general() {
        let mut spec = FsrSpec::shift_register(8).unwrap();
        spec.set_feedback(7, f("x0 + x1*x2 + x3")).unwrap();
        spec.set_feedback(5, f("x6 + x0*x3")).unwrap();
        spec.set_feedback(3, f("x4 + x1 + x2*x3")).unwrap();
        spec.set_output(f("x7*x4 + x5 + x6*x1")).unwrap();
        assert_eq!(spec.classify(), Configuration::UniformGalois { tau: 3 });
        let init = RegisterState::from_word(0b1100_1011, 8);
        let u = uniform_galois_to_fib(&spec, &init).unwrap();
        let g = galois_to_fib(&spec, &init).unwrap();
        assert_eq!(u, g);
        assert!(u.spec.is_fibonacci());
        assert_eq!(
            spec.keystream(&init, 300).unwrap(),
            u.spec.keystream(&u.init, 300).unwrap()
        );
    }

    #[test]
    fn galois_shape_enforced() {
        let mut spec = FsrSpec::shift_register(4).unwrap();
        spec.set_feedback(1, f("x2 + x3")).unwrap();
        assert!(matches!(
            galois_to_fib(&spec, &RegisterState::zeros(4)),
            Err(TransformError::Shape { stage: 1, .. })
        ));
        assert!(matches!(
            uniform_galois_to_fib(&spec, &RegisterState::zeros(4)),
            Err(TransformError::NotUniform(Configuration::GeneralGalois))
        ));
    }
}
