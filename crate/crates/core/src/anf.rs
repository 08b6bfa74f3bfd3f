//! Sparse algebraic normal form (ANF) over GF(2).
//!
//! A [`BooleanFunction`] is an XOR of [`Monomial`]s, each monomial an AND of
//! distinct variables `x_i`. Variables are idempotent (`x*x = x`), so the
//! representation is canonical: two functions are equal iff their term sets
//! are equal.
//!
//! Text form used by spec files and the CLI:
//!
//! ```text
//! function := term ("+" term)*
//! term     := "0" | "1" | var ("*" var)*
//! var      := "x" decimal-index
//! ```
//!
//! Whitespace is insignificant. `0` denotes the zero function.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{BitXor, BitXorAssign, Mul};
use std::str::FromStr;

use thiserror::Error;

/// Index of a register stage / Boolean variable.
pub type Var = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnfError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("variable index at position {pos} does not fit in 32 bits")]
    IndexOverflow { pos: usize },
    #[error("variable x{index} out of range for a state of length {len}")]
    IndexOutOfRange { index: Var, len: usize },
    #[error("shifting x{index} by {shift} leaves the register range [0, {n})")]
    ShiftOutOfRange { index: Var, shift: i64, n: usize },
}

/// A product of distinct variables. The empty product is the constant 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    vars: Vec<Var>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { vars: Vec::new() }
    }

    pub fn var(i: Var) -> Self {
        Monomial { vars: vec![i] }
    }

    /// Builds a monomial from any list of indices; duplicates collapse.
    pub fn new<I: IntoIterator<Item = Var>>(vars: I) -> Self {
        let mut vars: Vec<Var> = vars.into_iter().collect();
        vars.sort_unstable();
        vars.dedup();
        Monomial { vars }
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn degree(&self) -> usize {
        self.vars.len()
    }

    pub fn is_one(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn contains(&self, v: Var) -> bool {
        self.vars.binary_search(&v).is_ok()
    }

    pub fn min_var(&self) -> Option<Var> {
        self.vars.first().copied()
    }

    pub fn max_var(&self) -> Option<Var> {
        self.vars.last().copied()
    }

    /// Product with idempotent variables: the sorted union of both index lists.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.vars, &other.vars);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial { vars: out }
    }

    /// The monomial with `v` removed (unchanged if absent).
    pub fn without(&self, v: Var) -> Monomial {
        Monomial {
            vars: self.vars.iter().copied().filter(|&x| x != v).collect(),
        }
    }

    /// Re-bases every index by `k`; with `wrap` the result is taken mod `n`,
    /// otherwise leaving `[0, n)` is an error.
    pub fn shifted(&self, k: i64, n: usize, wrap: bool) -> Result<Monomial, AnfError> {
        let n_i = n as i64;
        let mut vars = Vec::with_capacity(self.vars.len());
        for &v in &self.vars {
            let moved = v as i64 + k;
            let idx = if wrap {
                moved.rem_euclid(n_i)
            } else if (0..n_i).contains(&moved) {
                moved
            } else {
                return Err(AnfError::ShiftOutOfRange {
                    index: v,
                    shift: k,
                    n,
                });
            };
            vars.push(idx as Var);
        }
        Ok(Monomial::new(vars))
    }

    pub fn evaluate(&self, state: &[bool]) -> Result<bool, AnfError> {
        let mut acc = true;
        for &v in &self.vars {
            let bit = *state.get(v as usize).ok_or(AnfError::IndexOutOfRange {
                index: v,
                len: state.len(),
            })?;
            acc &= bit;
        }
        Ok(acc)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.vars.is_empty() {
            return f.write_str("1");
        }
        for (k, v) in self.vars.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            write!(f, "x{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Monomial {
    type Err = AnfError;

    /// Parses a single term; a multi-term function is rejected.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let f: BooleanFunction = s.parse()?;
        let mut terms = f.terms();
        match (terms.next(), terms.next()) {
            (Some(m), None) => Ok(m.clone()),
            _ => Err(AnfError::Syntax {
                pos: 0,
                msg: "expected exactly one monomial".into(),
            }),
        }
    }
}

/// XOR of monomials in canonical (sorted, duplicate-free) form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    terms: BTreeSet<Monomial>,
}

impl BooleanFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_monomial(Monomial::one())
    }

    pub fn var(i: Var) -> Self {
        Self::from_monomial(Monomial::var(i))
    }

    pub fn from_monomial(m: Monomial) -> Self {
        let mut terms = BTreeSet::new();
        terms.insert(m);
        BooleanFunction { terms }
    }

    /// XOR-accumulates the given terms: a monomial listed twice cancels.
    pub fn from_terms<I: IntoIterator<Item = Monomial>>(terms: I) -> Self {
        let mut all: Vec<Monomial> = terms.into_iter().collect();
        all.sort_unstable();
        let mut out = BTreeSet::new();
        let mut it = all.into_iter().peekable();
        while let Some(m) = it.next() {
            let mut count = 1usize;
            while it.peek() == Some(&m) {
                it.next();
                count += 1;
            }
            if count % 2 == 1 {
                out.insert(m);
            }
        }
        BooleanFunction { terms: out }
    }

    /// Sum of single variables.
    pub fn linear<I: IntoIterator<Item = Var>>(vars: I) -> Self {
        Self::from_terms(vars.into_iter().map(Monomial::var))
    }

    pub fn terms(&self) -> impl Iterator<Item = &Monomial> + '_ {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.contains(m)
    }

    /// Adds `m` if absent, removes it if present.
    pub fn toggle(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    /// Algebraic degree; the zero function has degree -1.
    pub fn degree(&self) -> i32 {
        self.terms
            .iter()
            .map(|m| m.degree() as i32)
            .max()
            .unwrap_or(-1)
    }

    pub fn has_constant(&self) -> bool {
        self.terms.contains(&Monomial::one())
    }

    /// Degree at most one.
    pub fn is_affine(&self) -> bool {
        self.degree() <= 1
    }

    /// Sorted union of all variable indices.
    pub fn dep(&self) -> Vec<Var> {
        let set: BTreeSet<Var> = self
            .terms
            .iter()
            .flat_map(|m| m.vars.iter().copied())
            .collect();
        set.into_iter().collect()
    }

    pub fn max_var(&self) -> Option<Var> {
        self.terms.iter().filter_map(Monomial::max_var).max()
    }

    pub fn min_var(&self) -> Option<Var> {
        self.terms.iter().filter_map(Monomial::min_var).min()
    }

    pub fn depends_on(&self, v: Var) -> bool {
        self.terms.iter().any(|m| m.contains(v))
    }

    pub fn xor(&self, other: &BooleanFunction) -> BooleanFunction {
        BooleanFunction {
            terms: self
                .terms
                .symmetric_difference(&other.terms)
                .cloned()
                .collect(),
        }
    }

    pub fn mul(&self, other: &BooleanFunction) -> BooleanFunction {
        let mut products = Vec::with_capacity(self.len() * other.len());
        for a in &self.terms {
            for b in &other.terms {
                products.push(a.mul(b));
            }
        }
        Self::from_terms(products)
    }

    /// Multiplies by a single monomial.
    pub fn mul_monomial(&self, m: &Monomial) -> BooleanFunction {
        Self::from_terms(self.terms.iter().map(|t| t.mul(m)))
    }

    pub fn evaluate(&self, state: &[bool]) -> Result<bool, AnfError> {
        let mut acc = false;
        for m in &self.terms {
            acc ^= m.evaluate(state)?;
        }
        Ok(acc)
    }

    /// Re-bases every index by `k`; see [`Monomial::shifted`].
    pub fn shift_indices(&self, k: i64, n: usize, wrap: bool) -> Result<BooleanFunction, AnfError> {
        let moved = self
            .terms
            .iter()
            .map(|m| m.shifted(k, n, wrap))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_terms(moved))
    }

    /// Replaces every occurrence of `x_i` by `x_i + r`.
    pub fn substitute_tap(&self, i: Var, r: &BooleanFunction) -> BooleanFunction {
        if r.is_zero() || !self.depends_on(i) {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.len() + r.len());
        for m in &self.terms {
            out.push(m.clone());
            if m.contains(i) {
                // m = rest * x_i  ->  rest * x_i + rest * r
                let rest = m.without(i);
                out.extend(r.terms.iter().map(|t| t.mul(&rest)));
            }
        }
        Self::from_terms(out)
    }

    /// Simultaneous substitution `x_i -> subs(i)` for every variable; the
    /// introduced functions are never rewritten again.
    pub fn substitute_all<F>(&self, mut subs: F) -> BooleanFunction
    where
        F: FnMut(Var) -> BooleanFunction,
    {
        let mut out = Vec::new();
        for m in &self.terms {
            let mut prod = BooleanFunction::one();
            for &v in &m.vars {
                prod = prod.mul(&subs(v));
                if prod.is_zero() {
                    break;
                }
            }
            out.extend(prod.terms);
        }
        Self::from_terms(out)
    }
}

impl From<Monomial> for BooleanFunction {
    fn from(m: Monomial) -> Self {
        Self::from_monomial(m)
    }
}

impl FromIterator<Monomial> for BooleanFunction {
    fn from_iter<T: IntoIterator<Item = Monomial>>(iter: T) -> Self {
        Self::from_terms(iter)
    }
}

impl BitXor for &BooleanFunction {
    type Output = BooleanFunction;
    fn bitxor(self, rhs: &BooleanFunction) -> BooleanFunction {
        self.xor(rhs)
    }
}

impl BitXor for BooleanFunction {
    type Output = BooleanFunction;
    fn bitxor(self, rhs: BooleanFunction) -> BooleanFunction {
        self.xor(&rhs)
    }
}

impl BitXorAssign<&BooleanFunction> for BooleanFunction {
    fn bitxor_assign(&mut self, rhs: &BooleanFunction) {
        for m in &rhs.terms {
            self.toggle(m.clone());
        }
    }
}

impl BitXorAssign for BooleanFunction {
    fn bitxor_assign(&mut self, rhs: BooleanFunction) {
        for m in rhs.terms {
            self.toggle(m);
        }
    }
}

impl Mul for &BooleanFunction {
    type Output = BooleanFunction;
    fn mul(self, rhs: &BooleanFunction) -> BooleanFunction {
        BooleanFunction::mul(self, rhs)
    }
}

impl fmt::Display for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, m) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl FromStr for BooleanFunction {
    type Err = AnfError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Parser::new(s).parse_function()
    }
}

struct Parser {
    // Non-whitespace characters paired with their byte offset in the input.
    chars: Vec<(usize, char)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(s: &str) -> Self {
        Parser {
            chars: s
                .char_indices()
                .filter(|(_, c)| !c.is_whitespace())
                .collect(),
            pos: 0,
            end: s.len(),
        }
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.end, |&(o, _)| o)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn error(&self, msg: impl Into<String>) -> AnfError {
        AnfError::Syntax {
            pos: self.offset(),
            msg: msg.into(),
        }
    }

    fn parse_function(mut self) -> Result<BooleanFunction, AnfError> {
        let mut terms = Vec::new();
        loop {
            if let Some(m) = self.parse_term()? {
                terms.push(m);
            }
            match self.peek() {
                Some('+') => self.pos += 1,
                None => break,
                Some(c) => return Err(self.error(format!("unexpected '{c}'"))),
            }
        }
        Ok(BooleanFunction::from_terms(terms))
    }

    /// `None` for the literal `0`.
    fn parse_term(&mut self) -> Result<Option<Monomial>, AnfError> {
        match self.peek() {
            Some('0') => {
                self.pos += 1;
                Ok(None)
            }
            Some('1') => {
                self.pos += 1;
                Ok(Some(Monomial::one()))
            }
            Some('x') => {
                let mut vars = vec![self.parse_var()?];
                while self.peek() == Some('*') {
                    self.pos += 1;
                    vars.push(self.parse_var()?);
                }
                Ok(Some(Monomial::new(vars)))
            }
            Some(c) => Err(self.error(format!("expected a term, found '{c}'"))),
            None => Err(self.error("expected a term, found end of input")),
        }
    }

    fn parse_var(&mut self) -> Result<Var, AnfError> {
        if self.peek() != Some('x') {
            return Err(self.error("expected a variable 'x<index>'"));
        }
        self.pos += 1;
        let start = self.offset();
        let mut value: u64 = 0;
        let mut digits = 0;
        while let Some(d) = self.peek().and_then(|c| c.to_digit(10)) {
            value = value * 10 + d as u64;
            if value > Var::MAX as u64 {
                return Err(AnfError::IndexOverflow { pos: start });
            }
            digits += 1;
            self.pos += 1;
        }
        if digits == 0 {
            return Err(self.error("expected a decimal index after 'x'"));
        }
        Ok(value as Var)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> BooleanFunction {
        s.parse().unwrap()
    }

    #[test]
    fn xor_cancels() {
        assert_eq!(f("x0 + x1") ^ f("x1 + x2"), f("x0 + x2"));
        let g = f("x3*x4 + 1");
        assert_eq!(&g ^ &BooleanFunction::zero(), g);
        assert!((&g ^ &g).is_zero());
    }

    #[test]
    fn mul_is_idempotent() {
        assert!((&f("x0 + 1") * &f("x0")).is_zero());
        assert_eq!(&f("x1*x2") * &f("x2*x3"), f("x1*x2*x3"));
        let a = f("x0 + x1");
        // (x0+x1)^2 = x0 + x1 over GF(2) with x*x = x.
        assert_eq!(&a * &a, a);
    }

    #[test]
    fn evaluate_direct() {
        // state 101 read as x0=1, x1=0, x2=1
        let state = [true, false, true];
        assert!(f("x0 + x1*x2").evaluate(&state).unwrap());
        assert!(BooleanFunction::one().evaluate(&[]).unwrap());
        assert_eq!(
            f("x5").evaluate(&state),
            Err(AnfError::IndexOutOfRange { index: 5, len: 3 })
        );
    }

    #[test]
    fn dep_lists() {
        assert_eq!(f("x0 + x1 + x2*x3").dep(), vec![0, 1, 2, 3]);
        assert!(BooleanFunction::one().dep().is_empty());
        assert_eq!(f("x2*x3").dep(), vec![2, 3]);
    }

    #[test]
    fn degree_conventions() {
        assert_eq!(BooleanFunction::zero().degree(), -1);
        assert_eq!(BooleanFunction::one().degree(), 0);
        assert_eq!(f("x1*x2*x3 + x0").degree(), 3);
    }

    #[test]
    fn shift_examples() {
        assert_eq!(f("x2*x3").shift_indices(1, 8, false).unwrap(), f("x3*x4"));
        assert_eq!(
            f("x12*x121").shift_indices(61, 256, false).unwrap(),
            f("x73*x182")
        );
        assert_eq!(f("x0").shift_indices(-1, 4, true).unwrap(), f("x3"));
        assert_eq!(
            f("x0").shift_indices(-1, 4, false),
            Err(AnfError::ShiftOutOfRange {
                index: 0,
                shift: -1,
                n: 4
            })
        );
    }

    #[test]
    fn substitute_examples() {
        let r = f("x0*x1");
        assert_eq!(f("x2").substitute_tap(2, &r), f("x2 + x0*x1"));
        assert_eq!(f("x1*x2").substitute_tap(2, &f("x0")), f("x1*x2 + x0*x1"));
        assert_eq!(f("x3").substitute_tap(2, &f("x7*x9 + 1")), f("x3"));
    }

    #[test]
    fn parse_and_format() {
        let g = f("x0 + x41*x70");
        assert_eq!(g.len(), 2);
        assert!(g.contains(&Monomial::new([41, 70])));
        assert_eq!(f("1"), BooleanFunction::one());
        assert!(f("x0 + x0").is_zero());
        assert!(f("0").is_zero());
        assert_eq!(f(" x3 * x1+1 "), f("1 + x1*x3"));
        assert_eq!(f("x2*x2"), f("x2"));
        assert_eq!(g.to_string(), "x0 + x41*x70");
        assert_eq!(BooleanFunction::zero().to_string(), "0");
    }

    #[test]
    fn parse_errors_carry_position() {
        match "x1 + + x2".parse::<BooleanFunction>() {
            Err(AnfError::Syntax { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            "x".parse::<BooleanFunction>(),
            Err(AnfError::Syntax { .. })
        ));
        assert!(matches!(
            "x1 *".parse::<BooleanFunction>(),
            Err(AnfError::Syntax { .. })
        ));
        assert!(matches!(
            "y1".parse::<BooleanFunction>(),
            Err(AnfError::Syntax { .. })
        ));
        assert!(matches!(
            "x99999999999".parse::<BooleanFunction>(),
            Err(AnfError::IndexOverflow { pos: 1 })
        ));
        assert!(matches!(
            "".parse::<BooleanFunction>(),
            Err(AnfError::Syntax { .. })
        ));
    }

    #[test]
    fn monomial_parse_requires_single_term() {
        assert_eq!(
            "x3*x32".parse::<Monomial>().unwrap(),
            Monomial::new([3, 32])
        );
        assert!("x3 + x4".parse::<Monomial>().is_err());
    }
}
