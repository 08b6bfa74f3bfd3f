use std::fmt;

use super::xor_shifted;

/// Polynomial over GF(2), bit `i` the coefficient of `x^i`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly2 {
    words: Vec<u64>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2 { words: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut words = vec![0; k / 64 + 1];
        words[k / 64] = 1 << (k % 64);
        Poly2 { words }
    }

    pub fn from_u64(bits: u64) -> Self {
        Self::from_words(vec![bits])
    }

    pub fn from_words(words: Vec<u64>) -> Self {
        let mut p = Poly2 { words };
        p.normalize();
        p
    }

    /// `coeffs[i]` is the coefficient of `x^i`.
    pub fn from_coeffs(coeffs: &[bool]) -> Self {
        let mut words = vec![0u64; coeffs.len().div_ceil(64)];
        for (i, &c) in coeffs.iter().enumerate() {
            words[i / 64] |= (c as u64) << (i % 64);
        }
        Self::from_words(words)
    }

    fn normalize(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words == [1]
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - last.leading_zeros() as usize)
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words
            .get(i / 64)
            .is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    pub fn set(&mut self, i: usize, v: bool) {
        if self.words.len() <= i / 64 {
            self.words.resize(i / 64 + 1, 0);
        }
        if v {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
        self.normalize();
    }

    /// Exponents with nonzero coefficient, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (k, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.push(k * 64 + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    }

    pub fn coeffs(&self) -> Vec<bool> {
        let len = self.degree().map_or(0, |d| d + 1);
        (0..len).map(|i| self.coeff(i)).collect()
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// `p(1)`.
    pub fn eval_one(&self) -> bool {
        self.weight() % 2 == 1
    }

    pub fn add(&self, other: &Poly2) -> Poly2 {
        let mut words = self.words.clone();
        xor_shifted(&mut words, &other.words, 0);
        Self::from_words(words)
    }

    pub fn mul(&self, other: &Poly2) -> Poly2 {
        let (small, big) = if self.weight() <= other.weight() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = Vec::new();
        for i in small.support() {
            xor_shifted(&mut words, &big.words, i);
        }
        Self::from_words(words)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, divisor: &Poly2) -> (Poly2, Poly2) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let mut rem = self.words.clone();
        let mut quot = Vec::new();
        let mut r = Self::from_words(rem.clone());
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let shift = rd - dd;
            xor_shifted(&mut rem, &divisor.words, shift);
            if quot.len() <= shift / 64 {
                quot.resize(shift / 64 + 1, 0);
            }
            quot[shift / 64] ^= 1 << (shift % 64);
            r = Self::from_words(rem.clone());
        }
        (Self::from_words(quot), r)
    }

    pub fn rem(&self, divisor: &Poly2) -> Poly2 {
        self.divrem(divisor).1
    }

    pub fn gcd(&self, other: &Poly2) -> Poly2 {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    pub fn lcm(&self, other: &Poly2) -> Poly2 {
        if self.is_zero() || other.is_zero() {
            return Poly2::zero();
        }
        let g = self.gcd(other);
        self.divrem(&g).0.mul(other)
    }

    /// `x^len * p(1/x)`, for `len >= deg p`.
    pub fn reciprocal(&self, len: usize) -> Poly2 {
        let mut out = Poly2::zero();
        for i in self.support() {
            assert!(i <= len, "reciprocal length below degree");
            out.set(len - i, true);
        }
        out
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u128, m: &Poly2) -> Poly2 {
        let mut base = self.rem(m);
        let mut acc = Poly2::one().rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .support()
            .into_iter()
            .rev()
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly2({self})")
    }
}
