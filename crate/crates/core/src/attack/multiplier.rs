use std::collections::BTreeSet;

use crate::anf::{BooleanFunction, Monomial, Var};

/// `g = Π_{i in factors} (x_i + 1)` and `h = f·g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multiplier {
    pub factors: Vec<Var>,
    pub g: BooleanFunction,
    pub h: BooleanFunction,
    /// Degree of `h`; `-1` when `g` annihilates `f`.
    pub degree: i32,
}

impl Multiplier {
    /// Degree of `g`.
    pub fn e(&self) -> usize {
        self.factors.len()
    }
}

/// Variables present in every maximum-degree term of `f`.
fn common_top_vars(f: &BooleanFunction) -> BTreeSet<Var> {
    let deg = f.degree();
    let mut top = f.terms().filter(|m| m.degree() as i32 == deg);
    let Some(first) = top.next() else {
        return BTreeSet::new();
    };
    let mut common: BTreeSet<Var> = first.vars().iter().copied().collect();
    for m in top {
        common.retain(|v| m.contains(*v));
    }
    common
}

/// Breadth-first search over products of up to `max_e` factors `(x_i + 1)`.
///
/// A factor is only tried when it divides every top-degree term of the
/// current product, and a product is kept only if it lowers the degree of
/// its parent. Results are sorted by degree, then by factor set.
pub fn multiplier_search(f: &BooleanFunction, max_e: usize) -> Vec<Multiplier> {
    if f.degree() <= 1 || max_e == 0 {
        return Vec::new();
    }
    let mut seen: BTreeSet<Vec<Var>> = BTreeSet::new();
    let mut frontier = vec![(Vec::<Var>::new(), f.clone())];
    let mut found = Vec::new();
    for _ in 0..max_e {
        let mut next = Vec::new();
        for (factors, h) in &frontier {
            if h.is_zero() {
                continue;
            }
            for v in common_top_vars(h) {
                if factors.contains(&v) {
                    continue;
                }
                let mut child = factors.clone();
                child.push(v);
                child.sort_unstable();
                if !seen.insert(child.clone()) {
                    continue;
                }
                let hv = &h.mul_monomial(&Monomial::var(v)) ^ h;
                if hv.degree() < h.degree() {
                    next.push((child.clone(), hv.clone()));
                    found.push((child, hv));
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<Multiplier> = found
        .into_iter()
        .map(|(factors, h)| Multiplier {
            g: factors.iter().fold(BooleanFunction::one(), |g, &v| {
                &g * &(&BooleanFunction::var(v) ^ &BooleanFunction::one())
            }),
            degree: h.degree(),
            factors,
            h,
        })
        .collect();
    out.sort_by(|a, b| (a.degree, &a.factors).cmp(&(b.degree, &b.factors)));
    out
}
