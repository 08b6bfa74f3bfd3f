mod common;

use common::{from_truth_table, truth_table};
use nlfsr_core::transform::compensate_iterative;
use nlfsr_core::{BooleanFunction, CompensationList, Monomial, Var};
use proptest::prelude::*;

const N: usize = 5;

fn function(n: usize) -> impl Strategy<Value = BooleanFunction> {
    prop::collection::vec(prop::collection::btree_set(0..n as Var, 0..=n), 0..8)
        .prop_map(|terms| BooleanFunction::from_terms(terms.into_iter().map(Monomial::new)))
}

proptest! {
    #[test]
    fn text_round_trip(f in function(N)) {
        let back: BooleanFunction = f.to_string().parse().unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn anf_is_canonical(f in function(N)) {
        prop_assert_eq!(from_truth_table(&truth_table(&f, N), N), f);
    }

    #[test]
    fn xor_matches_oracle(f in function(N), g in function(N)) {
        let h = &f ^ &g;
        let (tf, tg, th) = (truth_table(&f, N), truth_table(&g, N), truth_table(&h, N));
        for w in 0..tf.len() {
            prop_assert_eq!(th[w], tf[w] ^ tg[w]);
        }
    }

    #[test]
    fn mul_matches_oracle(f in function(N), g in function(N)) {
        let h = &f * &g;
        let (tf, tg, th) = (truth_table(&f, N), truth_table(&g, N), truth_table(&h, N));
        for w in 0..tf.len() {
            prop_assert_eq!(th[w], tf[w] & tg[w]);
        }
    }

    #[test]
    fn evaluate_matches_oracle(f in function(N)) {
        let t = truth_table(&f, N);
        for (w, &b) in t.iter().enumerate() {
            prop_assert_eq!(f.evaluate(&common::assignment(w as u64, N)).unwrap(), b);
        }
    }

    #[test]
    fn substitute_matches_oracle(f in function(N), r in function(N), v in 0..N as Var) {
        let s = f.substitute_tap(v, &r);
        let (tf, tr, ts) = (truth_table(&f, N), truth_table(&r, N), truth_table(&s, N));
        for w in 0..tf.len() {
            let x = (w >> v) & 1 == 1;
            let y = x ^ tr[w];
            let w2 = if y { w | 1 << v } else { w & !(1 << v) };
            prop_assert_eq!(ts[w], tf[w2]);
        }
    }

    #[test]
    fn compensate_iterative_matches_oracle(
        f in function(N),
        entries in prop::collection::vec(function(N), N),
    ) {
        // entry i reads only stages below i, as every compensation list does
        let entries: Vec<BooleanFunction> = entries
            .into_iter()
            .enumerate()
            .map(|(i, e)| {
                BooleanFunction::from_terms(
                    e.terms().filter(|m| m.max_var().is_none_or(|v| (v as usize) < i)).cloned(),
                )
            })
            .collect();
        let c = CompensationList::from_entries(entries.clone());
        let g = compensate_iterative(&f, &c);
        let tf = truth_table(&f, N);
        let tg = truth_table(&g, N);
        let te: Vec<Vec<bool>> = entries.iter().map(|e| truth_table(e, N)).collect();
        for (w, &got) in tg.iter().enumerate() {
            // fixed point of x̂_i = x_i + C[i](x̂), ascending
            let mut y = w;
            for (i, t) in te.iter().enumerate() {
                if t[y] {
                    y ^= 1 << i;
                }
            }
            prop_assert_eq!(got, tf[y]);
        }
    }

    #[test]
    fn xor_and_mul_laws(f in function(N), g in function(N), h in function(N)) {
        prop_assert!((&f ^ &f).is_zero());
        prop_assert_eq!(&f * &f, f.clone());
        prop_assert_eq!(&f * &(&g ^ &h), &(&f * &g) ^ &(&f * &h));
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
    }

    #[test]
    fn degree_bounds(f in function(N), g in function(N)) {
        let h = &f * &g;
        if !h.is_zero() {
            prop_assert!(h.degree() <= f.degree() + g.degree());
        }
        prop_assert!((&f ^ &g).degree() <= f.degree().max(g.degree()));
    }
}
