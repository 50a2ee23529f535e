use std::collections::HashMap;

use fgw::freegroup::*;
use fgw::{symmetric_eigen, trace_power, BigInt};
use proptest::prelude::*;

#[test]
fn counts_agree_with_trace_and_enumeration() {
    for r in 1..=3u32 {
        let a = build_gr(r).unwrap().adjacency_int();
        for m in 1..=8u32 {
            let formula = count_cyclically_reduced(r, m).unwrap();
            assert_eq!(formula, trace_power(&a, m as u64), "r={r} m={m}");
            let words = brute_force_cyclic_words(r, m).unwrap();
            assert_eq!(BigInt::from(words.len()), formula, "r={r} m={m}");
        }
    }
}

#[test]
fn reduced_word_counts() {
    for r in 1..=3u32 {
        for m in 1..=8u32 {
            let words = brute_force_reduced_words(r, m).unwrap();
            assert_eq!(BigInt::from(words.len()), count_reduced(r, m).unwrap(), "r={r} m={m}");
        }
    }
}

#[test]
fn spectra_of_small_ranks() {
    let s = symmetric_eigen(&build_gr(2).unwrap().adjacency_f64()).unwrap();
    for (a, b) in s.values.iter().zip([3.0, 1.0, 1.0, -1.0]) {
        assert!((a - b).abs() < 1e-10);
    }
    let s = symmetric_eigen(&build_gr(3).unwrap().adjacency_f64()).unwrap();
    for (a, b) in s.values.iter().zip([5.0, 1.0, 1.0, 1.0, -1.0, -1.0]) {
        assert!((a - b).abs() < 1e-10);
    }
    let g = build_gr(3).unwrap();
    assert_eq!(g.regular_degree(), Some(5));
}

#[test]
fn emitted_graph_round_trips() {
    let g = build_gr(2).unwrap();
    let back = fgw::Graph::parse(&g.emit()).unwrap();
    assert_eq!(back, g);
    assert_eq!(back.regular_degree(), Some(3));
}

fn brute_force_homology(r: u32, k: u32) -> HashMap<Vec<i32>, BigInt> {
    let mut h: HashMap<Vec<i32>, BigInt> = HashMap::new();
    for w in brute_force_cyclic_words(r, k).unwrap() {
        let e: Vec<i32> = w.abelianization(r).iter().map(|&x| x as i32).collect();
        *h.entry(e).or_default() += 1;
    }
    h
}

#[test]
fn homology_matches_enumeration() {
    for (r, kmax) in [(1u32, 8u32), (2, 7), (3, 5)] {
        for k in 1..=kmax {
            let gf = homology_gf(r, k).unwrap();
            let brute = brute_force_homology(r, k);
            assert_eq!(gf.len(), brute.len(), "r={r} k={k}");
            for (e, c) in &brute {
                assert_eq!(&gf.coeff(e), c, "r={r} k={k} e={e:?}");
            }
        }
    }
}

#[test]
fn homology_symmetries_and_support() {
    for (r, k) in [(2u32, 6u32), (3, 5), (3, 6)] {
        let gf = homology_gf(r, k).unwrap();
        let n = r as usize;
        let ident: Vec<usize> = (0..n).collect();
        let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let swap: Vec<usize> = (0..n).map(|i| if i < 2 { 1 - i } else { i }).collect();
        assert_eq!(gf.substitute(&ident, &vec![true; n]), gf);
        assert_eq!(gf.substitute(&rot, &vec![false; n]), gf);
        assert_eq!(gf.substitute(&swap, &vec![false; n]), gf);
        let mut flip_one = vec![false; n];
        flip_one[0] = true;
        assert_eq!(gf.substitute(&ident, &flip_one), gf);
        for (e, _) in gf.iter() {
            let l1: i32 = e.iter().map(|x| x.abs()).sum();
            let s: i32 = e.iter().sum();
            assert!(l1 <= k as i32);
            assert_eq!((s - k as i32).rem_euclid(2), 0);
        }
    }
}

#[test]
fn total_exponent_is_collapsed_homology() {
    for (r, n) in [(2u32, 6u32), (3, 5), (1, 9)] {
        assert_eq!(total_exponent_gf(r, n).unwrap(), homology_gf(r, n).unwrap().collapse());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn closed_form_identity_holds(r in 1u32..4, k in 1u32..7) {
        let check = homoenum_closed_form_check(r, k).unwrap();
        prop_assert!(check.ok, "{:?}", check.mismatch);
    }

    #[test]
    fn homology_sum_is_count(r in 1u32..4, k in 1u32..7) {
        prop_assert_eq!(homology_gf(r, k).unwrap().coefficient_sum(), count_cyclically_reduced(r, k).unwrap());
    }
}
