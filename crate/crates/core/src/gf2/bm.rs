use super::{word_at, xor_shifted, Poly2};

/// Packed bit sequence `s_0, s_1, …`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BitSeq {
    words: Vec<u64>,
    len: usize,
}

impl BitSeq {
    pub fn zeros(len: usize) -> Self {
        BitSeq {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut s = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                s.words[i / 64] |= 1 << (i % 64);
            }
        }
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, v: bool) {
        if v {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// `s'_t = Σ p_i s_{t+i}` for every `t` with `t + deg p < len`.
    pub fn filter(&self, p: &Poly2) -> BitSeq {
        let Some(deg) = p.degree() else {
            return BitSeq::zeros(self.len);
        };
        let len = self.len.saturating_sub(deg);
        let mut out = BitSeq::zeros(len);
        for i in p.support() {
            for (k, w) in out.words.iter_mut().enumerate() {
                *w ^= word_at(&self.words, i + 64 * k);
            }
        }
        if len % 64 != 0 {
            if let Some(last) = out.words.last_mut() {
                *last &= (1u64 << (len % 64)) - 1;
            }
        }
        out
    }

    /// True if `p` annihilates the whole sequence.
    pub fn annihilated_by(&self, p: &Poly2) -> bool {
        self.filter(p).is_zero()
    }
}

/// Shortest LFSR generating `seq`: the connection polynomial
/// `C(x) = 1 + c_1 x + … + c_L x^L` with `s_n = Σ c_i s_{n-i}`, and `L`.
pub fn berlekamp_massey(seq: &BitSeq) -> (Poly2, usize) {
    let n_total = seq.len();
    // rev[k] = s_{N-1-k}, so a window of rev lines up with C's coefficients
    let mut rev = vec![0u64; n_total.div_ceil(64)];
    for i in 0..n_total {
        if seq.get(i) {
            let k = n_total - 1 - i;
            rev[k / 64] |= 1 << (k % 64);
        }
    }
    let mut c: Vec<u64> = vec![1];
    let mut b: Vec<u64> = vec![1];
    let mut l = 0usize;
    let mut m: isize = -1;
    for n in 0..n_total {
        let pos = n_total - 1 - n;
        let words = (l + 1).div_ceil(64);
        let mut acc = 0u64;
        for (k, &ck) in c.iter().enumerate().take(words) {
            acc ^= ck & word_at(&rev, pos + 64 * k);
        }
        // bits of the window past s_0 read from beyond rev's end only when
        // i > n, and c_i is zero there because l <= n
        if acc.count_ones() % 2 == 1 {
            let t = c.clone();
            xor_shifted(&mut c, &b, (n as isize - m) as usize);
            if 2 * l <= n {
                l = n + 1 - l;
                m = n as isize;
                b = t;
            }
        }
    }
    let mut poly = Poly2::from_words(c);
    // C's degree can be below L; clear anything above L defensively
    for i in poly.support() {
        if i > l {
            poly.set(i, false);
        }
    }
    (poly, l)
}

/// `p(x) = x^L C(1/x)`, so `Σ p_i s_{t+i} = 0` for all `t`.
pub fn minimal_polynomial(seq: &BitSeq) -> Poly2 {
    let (c, l) = berlekamp_massey(seq);
    c.reciprocal(l)
}
