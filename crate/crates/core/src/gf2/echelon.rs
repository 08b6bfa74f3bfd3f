/// Result of adding a row to an [`Echelon`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Insert {
    Independent,
    Redundant,
    /// The row reduced to `0 = 1`.
    Inconsistent,
}

/// Incremental Gaussian elimination for `A x = b` over GF(2). Each stored
/// row has its lowest set column as pivot.
#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    words: usize,
    rows: Vec<(Vec<u64>, bool)>,
    pivot: Vec<Option<usize>>,
    inconsistent: bool,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            words: ncols.div_ceil(64),
            rows: Vec::new(),
            pivot: vec![None; ncols],
            inconsistent: false,
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.ncols
    }

    pub fn is_inconsistent(&self) -> bool {
        self.inconsistent
    }

    /// Adds the row `coeffs · x = rhs`; `coeffs` holds `ncols` packed bits.
    pub fn insert(&mut self, mut coeffs: Vec<u64>, mut rhs: bool) -> Insert {
        coeffs.resize(self.words, 0);
        let mut start = 0;
        loop {
            let Some(col) = first_set(&coeffs, start) else {
                if rhs {
                    self.inconsistent = true;
                    return Insert::Inconsistent;
                }
                return Insert::Redundant;
            };
            match self.pivot[col] {
                Some(r) => {
                    let (row, b) = &self.rows[r];
                    for (a, x) in coeffs[col / 64..].iter_mut().zip(&row[col / 64..]) {
                        *a ^= x;
                    }
                    rhs ^= b;
                    start = col / 64;
                }
                None => {
                    self.pivot[col] = Some(self.rows.len());
                    self.rows.push((coeffs, rhs));
                    return Insert::Independent;
                }
            }
        }
    }

    /// Convenience wrapper taking one bool per column.
    pub fn insert_bools(&mut self, coeffs: &[bool], rhs: bool) -> Insert {
        let mut packed = vec![0u64; self.words];
        for (i, &c) in coeffs.iter().enumerate() {
            packed[i / 64] |= (c as u64) << (i % 64);
        }
        self.insert(packed, rhs)
    }

    /// The unique solution, once the system has full rank and is consistent.
    pub fn solution(&self) -> Option<Vec<bool>> {
        if !self.is_full_rank() || self.inconsistent {
            return None;
        }
        let mut x = vec![false; self.ncols];
        for col in (0..self.ncols).rev() {
            let (row, rhs) = &self.rows[self.pivot[col]?];
            let mut v = *rhs;
            for j in col + 1..self.ncols {
                if (row[j / 64] >> (j % 64)) & 1 == 1 {
                    v ^= x[j];
                }
            }
            x[col] = v;
        }
        Some(x)
    }
}

fn first_set(words: &[u64], start: usize) -> Option<usize> {
    words[start..]
        .iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(k, w)| (start + k) * 64 + w.trailing_zeros() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        // x0 + x1 = 1, x1 + x2 = 0, x0 + x2 = 1 (dependent), x2 = 1
        let mut e = Echelon::new(3);
        assert_eq!(
            e.insert_bools(&[true, true, false], true),
            Insert::Independent
        );
        assert_eq!(
            e.insert_bools(&[false, true, true], false),
            Insert::Independent
        );
        assert_eq!(
            e.insert_bools(&[true, false, true], true),
            Insert::Redundant
        );
        assert!(e.solution().is_none());
        assert_eq!(
            e.insert_bools(&[false, false, true], true),
            Insert::Independent
        );
        assert_eq!(e.solution(), Some(vec![false, true, true]));
    }

    #[test]
    fn detects_inconsistency() {
        let mut e = Echelon::new(2);
        e.insert_bools(&[true, true], false);
        assert_eq!(e.insert_bools(&[true, true], true), Insert::Inconsistent);
        assert!(e.is_inconsistent());
    }

    #[test]
    fn wide_rows() {
        let n = 150;
        let mut e = Echelon::new(n);
        // x_i + x_{i+1} = [i even], x_{n-1} = 1
        for i in 0..n - 1 {
            let mut row = vec![false; n];
            row[i] = true;
            row[i + 1] = true;
            e.insert_bools(&row, i % 2 == 0);
        }
        let mut last = vec![false; n];
        last[n - 1] = true;
        e.insert_bools(&last, true);
        let x = e.solution().unwrap();
        for i in 0..n - 1 {
            assert_eq!(x[i] ^ x[i + 1], i % 2 == 0);
        }
        assert!(x[n - 1]);
    }
}
