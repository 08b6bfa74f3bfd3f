mod common;

use common::{exhaustive_search, random_nonzero_state, random_state};
use nlfsr_core::attack::{
    binomial_sum, char_poly, estimate, multiplier_search, random_toy_generator, relation,
    rh_attack, rh_polynomial, standard_attack, transition_matrix_check, AttackError, AttackKind,
    FilterGenerator, MonomialBasis, StandardOptions,
};
use nlfsr_core::gf2::Poly2;
use nlfsr_core::{BooleanFunction, FsrSpec, RegisterState};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn f(s: &str) -> BooleanFunction {
    s.parse().unwrap()
}

fn lfsr16() -> FsrSpec {
    // x^16 + x^5 + x^3 + x^2 + 1
    nlfsr_core::attack::lfsr_from_poly(&Poly2::from_coeffs(
        &(0..=16)
            .map(|i| matches!(i, 0 | 2 | 3 | 5 | 16))
            .collect::<Vec<_>>(),
    ))
    .unwrap()
}

#[test]
fn both_attacks_match_exhaustive_search_n16() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let gen = random_toy_generator(16, &mut rng).unwrap();
    let init = random_state(&mut rng, 16);
    let ks = gen.keystream(&init, 1200).unwrap();
    let oracle = exhaustive_search(&gen, &ks[..64]);
    assert_eq!(oracle, vec![init.clone()]);

    let s = standard_attack(&gen, &ks, StandardOptions::default()).unwrap();
    assert!(s.verified);
    assert_eq!(s.state.as_ref(), Some(&init));
    assert_eq!(s.e, 1);
    assert_eq!(s.degree_h, 2);

    let r = rh_attack(&gen, &ks).unwrap();
    assert!(r.verified);
    assert_eq!(r.state.as_ref(), Some(&init));
}

#[test]
fn standard_attack_needs_d_plus_e_minus_one_bits() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let gen = random_toy_generator(12, &mut rng).unwrap();
    let init = random_state(&mut rng, 12);
    let need = (binomial_sum(12, 2) + binomial_sum(12, 1) - 1) as usize;
    let ks = gen.keystream(&init, need - 1).unwrap();
    assert_eq!(
        standard_attack(&gen, &ks, StandardOptions::default()).unwrap_err(),
        AttackError::InsufficientKeystream {
            need,
            got: need - 1
        }
    );
    let ks = gen.keystream(&init, 10).unwrap();
    assert!(matches!(
        rh_attack(&gen, &ks),
        Err(AttackError::InsufficientKeystream { .. })
    ));
}

#[test]
fn linear_filter_gives_trivial_rh_polynomial() {
    let gen = FilterGenerator::new(lfsr16(), f("x1 + x7 + x15 + 1")).unwrap();
    assert!(rh_polynomial(&gen).unwrap().is_one());
    let init = RegisterState::from_word(0xbeef, 16);
    let ks = gen.keystream(&init, 100).unwrap();
    let r = rh_attack(&gen, &ks).unwrap();
    assert_eq!(r.char_poly_degree, 0);
    assert_eq!(r.state, Some(init));
    assert!(r.verified);
}

#[test]
#[allow(clippy::needless_range_loop)]
fn rh_polynomial_cancels_every_nonlinear_monomial() {
    // symbolic check: p annihilates the coefficient sequence of each
    // degree-2 and degree-3 monomial in the expansion of f(X^t)
    let gen = FilterGenerator::new(lfsr16(), f("x0*x3*x9 + x2*x11 + x5 + x14")).unwrap();
    let p = rh_polynomial(&gen).unwrap();
    let deg = p.degree().unwrap();
    assert!((deg as u128) < binomial_sum(16, 3) - 16);
    let basis = MonomialBasis::new(16, 3).unwrap();
    // expand f(X^t) through the state-as-linear-forms view
    let lfsr = gen.lfsr().clone();
    let len = 3 * deg + 10;
    let mut coeff = vec![vec![false; len]; basis.len()];
    let mut forms: Vec<BooleanFunction> = (0..16).map(BooleanFunction::var).collect();
    for t in 0..len {
        let ft = gen.filter().substitute_all(|v| forms[v as usize].clone());
        for m in ft.terms() {
            coeff[basis.index_of(m).unwrap()][t] = true;
        }
        let next: Vec<BooleanFunction> = (0..16)
            .map(|i| {
                lfsr.feedback(i)
                    .substitute_all(|v| forms[v as usize].clone())
            })
            .collect();
        forms = next;
    }
    let support = p.support();
    for (k, seq) in coeff.iter().enumerate() {
        if basis.monomial(k).degree() < 2 {
            continue;
        }
        for t in 0..len - deg {
            let s = support.iter().fold(false, |a, &i| a ^ seq[t + i]);
            assert!(!s, "monomial {} survives at t={t}", basis.monomial(k));
        }
    }
}

#[test]
fn wrong_keystream_fails_verification() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let gen = random_toy_generator(12, &mut rng).unwrap();
    let init = random_state(&mut rng, 12);
    let mut ks = gen.keystream(&init, 800).unwrap();
    ks[700] ^= true;
    let r = rh_attack(&gen, &ks).unwrap();
    assert!(!r.verified);
    let s = standard_attack(&gen, &ks, StandardOptions::default()).unwrap();
    assert!(!s.verified);
}

#[test]
fn char_poly_annihilates_all_monomial_sequences() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let gen = random_toy_generator(10, &mut rng).unwrap();
    for d in 1..=3 {
        let cp = char_poly(&gen, d).unwrap();
        let big_d = binomial_sum(10, d) as usize;
        assert!(cp.degree() <= big_d);
        let basis = MonomialBasis::new(10, d).unwrap();
        let window = 3 * big_d + cp.degree();
        for _ in 0..3 {
            let init = random_state(&mut rng, 10);
            let mut sim = gen.lfsr().simulator(&init).unwrap();
            let mut seqs = vec![Vec::with_capacity(window); basis.len()];
            for _ in 0..window {
                let st = sim.state();
                for (k, m) in basis.monomials().iter().enumerate() {
                    if !m.is_one() {
                        seqs[k].push(m.evaluate(st.bits()).unwrap());
                    }
                }
                sim.step();
            }
            for s in seqs.iter().filter(|s| !s.is_empty()) {
                assert!(cp.annihilates(s));
            }
        }
        assert!(transition_matrix_check(&gen, d, cp.poly()).unwrap());
    }
}

#[test]
fn relation_vanishes_on_true_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let gen = random_toy_generator(12, &mut rng).unwrap();
    let init = random_state(&mut rng, 12);
    let spec = gen.spec();
    let m = multiplier_search(gen.filter(), 2);
    let mut sim = spec.simulator(&init).unwrap();
    for _ in 0..300 {
        let st = sim.state();
        let z = sim.next_bit();
        for mult in &m {
            let r = relation(&mult.h, &mult.g, z);
            assert!(!r.evaluate(st.bits()).unwrap());
        }
    }
}

#[test]
fn rejects_out_of_scope_generators() {
    let mut spec = FsrSpec::shift_register(8).unwrap();
    spec.set_feedback(7, f("x0 + x1*x2")).unwrap();
    assert!(matches!(
        FilterGenerator::new(spec, f("x0")),
        Err(AttackError::NotFilterGenerator(_))
    ));
}

#[test]
fn estimate_monotone() {
    for kind in [AttackKind::Standard, AttackKind::Rh] {
        let base = estimate(64, 4, 2, 4, kind).unwrap();
        for other in [
            estimate(80, 4, 2, 4, kind).unwrap(),
            estimate(64, 5, 2, 5, kind).unwrap(),
            estimate(64, 4, 3, 4, kind).unwrap(),
        ] {
            assert!(other.data >= base.data);
            assert!(other.precomputation >= base.precomputation);
            assert!(other.substitution >= base.substitution);
            assert!(other.solving >= base.solving);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn attacks_recover_random_toys(seed in any::<u64>(), n in 8usize..=14) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gen = random_toy_generator(n, &mut rng).unwrap();
        let init = random_nonzero_state(&mut rng, n);
        let ks = gen.keystream(&init, 2 * binomial_sum(n, 3) as usize).unwrap();
        let candidates = exhaustive_search(&gen, &ks);
        for report in [
            standard_attack(&gen, &ks, StandardOptions::default()).unwrap(),
            rh_attack(&gen, &ks).unwrap(),
        ] {
            prop_assert!(report.verified);
            prop_assert!(candidates.contains(report.state.as_ref().unwrap()));
        }
    }
}
