mod common;

use fgw::arith::totient;
use fgw::enumeration::*;
use fgw::freegroup::build_gr;
use fgw::{trace_power, BigInt, BigRational, Graph, Matrix, Poly};
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn rat_poly(v: &[i64]) -> Poly<BigRational> {
    Poly::new(v.iter().map(|&x| BigRational::from_integer(x.into())).collect())
}

fn single_loop() -> Graph {
    Graph::from_adjacency(Matrix::filled(1, 1, 1u64), true).unwrap()
}

#[test]
fn small_conjugacy_counts() {
    let t = free_group_counts(2, 2).unwrap();
    assert_eq!(t.n, ints(&[4, 12]));
    assert_eq!(t.c, ints(&[4, 12]));
    assert_eq!(t.cc, ints(&[4, 8]));
    assert_eq!(burnside_oracle(1, 3).unwrap(), BigInt::from(2));
    assert_eq!(burnside_oracle(2, 2).unwrap(), BigInt::from(8));
}

#[test]
fn count_triple_ordering() {
    for k in 1..=4 {
        let t = free_group_counts(k, 14).unwrap();
        for r in 0..14 {
            assert!(t.c[r] <= t.n[r]);
            assert!(t.cc[r] <= t.c[r]);
        }
    }
}

#[test]
fn orbit_enumeration_matches_explicit_orbits() {
    for (k, rmax) in [(1, 8), (2, 8), (3, 6)] {
        for r in 1..=rmax {
            let direct = brute_force_orbits(k, r).unwrap();
            assert_eq!(burnside_oracle(k, r).unwrap(), BigInt::from(direct), "k={k} r={r}");
        }
    }
}

#[test]
fn totient_convolution_matches_orbits() {
    for k in 1..=3u32 {
        let t = free_group_counts(k, 12).unwrap();
        for r in 1..=12u32 {
            assert_eq!(t.cc[r as usize - 1], burnside_oracle(k, r).unwrap(), "k={k} r={r}");
        }
    }
}

#[test]
fn inexact_totient_sum_is_an_error() {
    assert!(matches!(totient_convolution(&ints(&[1, 2])), Err(fgw::Error::InexactDivision(_))));
}

#[test]
fn lambert_coefficients_are_scaled_class_counts() {
    for k in 1..=4u32 {
        let n = 30;
        let h = cc_gf_coeffs(k, n).unwrap();
        let t = free_group_counts(k, n as u32).unwrap();
        assert!(h[0].is_one());
        for r in 1..=n {
            assert_eq!(h[r], BigInt::from(r) * &t.cc[r - 1], "k={k} r={r}");
            // Divisor-sum path: Σ_{d|r} φ(d) C(r/d).
            let direct: BigInt = fgw::arith::divisors(r as u64)
                .into_iter()
                .map(|d| BigInt::from(totient(d)) * &t.c[r / d as usize - 1])
                .sum();
            assert_eq!(h[r], direct);
        }
    }
    let h = cc_gf_coeffs(2, 2).unwrap();
    assert_eq!(h[1], BigInt::from(4));
    assert_eq!(h[2], BigInt::from(16));
}

#[test]
fn cyclically_reduced_series_matches_counts() {
    for k in 1..=4u32 {
        let s = cyclically_reduced_series(k, 20).unwrap();
        assert!(s[0].is_zero());
        let t = free_group_counts(k, 20).unwrap();
        assert_eq!(&s[1..], &t.c[..]);
    }
}

#[test]
fn corrected_closed_form_agrees_and_printed_does_not() {
    for k in 1..=4u32 {
        let h = cc_gf_coeffs(k, 40).unwrap();
        assert_eq!(cc_gf_closed_form(k, 40).unwrap(), h);
        let printed = cc_gf_printed_form(k, 40).unwrap();
        assert_ne!(printed, h);
        // The displayed form is short by r + (k−1)r/2 at even r and by r at odd r.
        for r in 1..=40usize {
            let gap = BigInt::from(r) + if r % 2 == 0 { BigInt::from((k as usize - 1) * r / 2) } else { BigInt::zero() };
            assert_eq!(&h[r] - &printed[r], gap);
        }
    }
}

#[test]
fn rank_one_series_is_twice_the_remark() {
    // 1 + x/(x − 1)² has coefficient r; the true coefficient r·CC(r) is 2r.
    let h = cc_gf_coeffs(1, 10).unwrap();
    for r in 1..=10u32 {
        assert_eq!(h[r as usize], BigInt::from(2 * r));
        assert_eq!(h[r as usize], BigInt::from(r) * burnside_oracle(1, r).unwrap());
    }
}

#[test]
fn class_counts_are_not_eventually_recurrent() {
    // The shortest linear recurrence for C has length 3; for CC it keeps growing with the prefix.
    let t = free_group_counts(2, 60).unwrap();
    for n in [20, 40, 60] {
        assert_eq!(linear_complexity(&t.c[..n]), 3);
    }
    let l: Vec<usize> = [20, 40, 60].iter().map(|&n| linear_complexity(&t.cc[..n])).collect();
    assert!(l[0] < l[1] && l[1] < l[2], "{l:?}");
    assert!(l[2] >= 25, "{l:?}");
}

#[test]
fn massey_connection_polynomial_annihilates() {
    let fib = ints(&[1, 1, 2, 3, 5, 8, 13, 21, 34]);
    assert_eq!(berlekamp_massey(&fib), rat_poly(&[1, -1, -1]));
    let t = free_group_counts(3, 30).unwrap();
    let c = berlekamp_massey(&t.c);
    // C(r) = 5^r + 3 + 2(−1)^r satisfies the recurrence with characteristic roots 5, 1, −1.
    assert_eq!(c, &rat_poly(&[1, -5]) * &rat_poly(&[1, 0, -1]));
}

#[test]
fn class_count_asymptotic_gap() {
    let t = free_group_counts(2, 14).unwrap();
    let mut c_fit: f64 = 0.0;
    for r in 1..=14usize {
        let w = t.c[r - 1].to_f64().unwrap();
        let gap = (t.cc[r - 1].to_f64().unwrap() - w / r as f64).abs();
        c_fit = c_fit.max(gap / w.sqrt());
    }
    println!("fitted constant c = {c_fit:.4}");
    assert!(c_fit < 1.0);
}

#[test]
fn product_rule_matches_lattice() {
    let z = free_group_cc_series(1, 20).unwrap();
    let z2 = product_cc_gf(&z, &z).unwrap();
    assert_eq!(z2, lattice_sphere_counts(2, 20).unwrap());
    let z3 = product_cc_gf(&z2, &z).unwrap();
    assert_eq!(z3, lattice_sphere_counts(3, 20).unwrap());
    for r in 1..=20usize {
        assert_eq!(z2[r], BigInt::from(4 * r));
    }
}

#[test]
fn product_rule_laws() {
    let a = free_group_cc_series(2, 15).unwrap();
    let b = free_group_cc_series(1, 15).unwrap();
    let c = free_group_cc_series(3, 15).unwrap();
    let trivial = ints(&[1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
    assert_eq!(product_cc_gf(&a, &trivial).unwrap(), a);
    let left = product_cc_gf(&product_cc_gf(&a, &b).unwrap(), &c).unwrap();
    let right = product_cc_gf(&a, &product_cc_gf(&b, &c).unwrap()).unwrap();
    assert_eq!(left, right);
    assert_eq!(product_cc_gf(&a, &b).unwrap(), product_cc_gf(&b, &a).unwrap());
    assert!(product_cc_gf(&ints(&[2, 1]), &a).is_err());
}

#[test]
fn zeta_examples() {
    assert_eq!(zeta(&single_loop()), rat_poly(&[1, -1]));
    let c3 = zeta(&Graph::cycle(3));
    assert_eq!(c3, rat_poly(&[1, 0, -3, -2]));
    assert_eq!(c3.to_string(), "1 - 3u^2 - 2u^3");
}

#[test]
fn free_group_zeta_closed_form() {
    for r in 1..=4 {
        let z = zeta(&build_gr(r).unwrap());
        assert_eq!(z, free_group_zeta(r).unwrap(), "r={r}");
        assert!(z.coeff(0).is_one());
        assert!(z.degree().unwrap() <= 2 * r as usize);
    }
}

#[test]
fn zeta_vanishes_at_reciprocal_eigenvalues() {
    // K_4: {3, −1³}; Petersen: {3, 1⁵, −2⁴}; C_4: {2, 0², −2}.
    for (g, eig) in [
        (Graph::complete(4), vec![3, -1]),
        (Graph::petersen(), vec![3, 1, -2]),
        (Graph::cycle(4), vec![2, -2]),
    ] {
        let z = zeta(&g);
        for l in eig {
            let u = BigRational::new(1.into(), l.into());
            assert!(z.eval(&u).is_zero());
        }
    }
}

#[test]
fn cycle_counts_examples() {
    assert!(cycle_counts(&single_loop(), 10).unwrap().iter().all(One::is_one));
    assert_eq!(cycle_counts(&build_gr(2).unwrap(), 2).unwrap()[1], BigInt::from(12));
    assert_eq!(cycle_counts(&Graph::complete(4), 3).unwrap()[2], BigInt::from(24));
}

#[test]
fn printed_free_group_series_disagrees() {
    // Σ N_i uⁱ = (2r−1)u/(1 − (2r−1)u) + ru/(1 − u) − (r−1)u/(1 + u) from the spectrum; the
    // displayed 1/(1 + (2r−1)u) + r/(1 − u) + (r − 1)/(1 + u) already fails at u⁰.
    for r in 1..=4u32 {
        let n = cycle_counts(&build_gr(r).unwrap(), 12).unwrap();
        let a = 2 * r as i64 - 1;
        for (i, ni) in n.iter().enumerate() {
            let i = i as u32 + 1;
            let expect = BigInt::from(a).pow(i) + BigInt::from(r) + BigInt::from(r as i64 - 1) * if i % 2 == 0 { 1 } else { -1 };
            assert_eq!(*ni, expect);
            let printed = BigInt::from(-a).pow(i) + BigInt::from(r) + BigInt::from(r as i64 - 1) * if i % 2 == 0 { 1 } else { -1 };
            if i % 2 == 1 {
                assert_ne!(*ni, printed);
            }
        }
    }
}

#[test]
fn primitive_counts_examples() {
    let p = primitive_cycle_counts(&single_loop(), 8).unwrap();
    assert_eq!(p, ints(&[1, 0, 0, 0, 0, 0, 0, 0]));
    let g1 = build_gr(1).unwrap();
    assert_eq!(primitive_cycle_counts(&g1, 6).unwrap(), ints(&[2, 0, 0, 0, 0, 0]));
    assert_eq!(primitive_cycle_counts(&Graph::complete(4), 3).unwrap()[2], BigInt::from(8));
}

/// Rotation classes of primitive closed walks of length `n`, by explicit walk enumeration.
fn brute_primitive(g: &Graph, n: usize) -> usize {
    let adj = g.adjacency();
    let m = g.n();
    let mut classes = std::collections::HashSet::new();
    let mut walk = vec![0usize; n];
    let total = m.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        for slot in walk.iter_mut() {
            *slot = c % m;
            c /= m;
        }
        if !(0..n).all(|i| adj[(walk[i], walk[(i + 1) % n])] > 0) {
            continue;
        }
        let rots: Vec<Vec<usize>> = (0..n).map(|s| walk[s..].iter().chain(&walk[..s]).copied().collect()).collect();
        let primitive = (1..n).all(|s| rots[s] != walk);
        if primitive {
            classes.insert(rots.into_iter().min().unwrap());
        }
    }
    classes.len()
}

#[test]
fn primitive_counts_match_enumeration() {
    for g in [Graph::complete(4), Graph::cycle(5), build_gr(2).unwrap()] {
        let p = primitive_cycle_counts(&g, 7).unwrap();
        for n in 1..=7 {
            assert_eq!(p[n - 1], BigInt::from(brute_primitive(&g, n)), "n={n}");
        }
    }
}

#[test]
fn euler_product_recovers_zeta() {
    for g in [Graph::complete(4), Graph::petersen(), build_gr(3).unwrap(), Graph::cycle(6)] {
        let z = zeta(&g);
        let n = 14;
        let p = primitive_cycle_counts(&g, n).unwrap();
        let e = euler_product(&p, n).unwrap();
        for (i, ei) in e.iter().enumerate() {
            assert_eq!(BigRational::from_integer(ei.clone()), z.coeff(i), "i={i}");
        }
    }
}

#[test]
fn ihara_equals_bass() {
    for g in [Graph::complete(4), Graph::petersen(), Graph::cycle(5), Graph::complete_bipartite(3)] {
        let check = ihara_identity_check(&g).unwrap();
        assert!(check.holds(), "{} vs {}", check.left, check.right);
    }
    let c5 = ihara_identity_check(&Graph::cycle(5)).unwrap();
    let one_minus_u5 = rat_poly(&[1, 0, 0, 0, 0, -1]);
    assert_eq!(c5.right, &one_minus_u5 * &one_minus_u5);
}

#[test]
fn ihara_on_random_cubic_graphs() {
    let mut rng = common::rng(91);
    for _ in 0..3 {
        let g = common::random_cubic_graph(&mut rng, 10);
        assert!(ihara_identity_check(&g).unwrap().holds());
    }
}

#[test]
fn ihara_preconditions() {
    assert!(ihara_identity_check(&build_gr(2).unwrap()).is_err());
    assert!(ihara_identity_check(&Graph::from_edges(4, false, &[(0, 1), (1, 2), (2, 3)]).unwrap()).is_err());
    assert!(ihara_identity_check(&Graph::complete(2)).is_err());
}

#[test]
fn directed_line_digraph_keeps_nonzero_spectrum() {
    let mut rng = common::rng(17);
    for _ in 0..5 {
        let g = common::random_primitive_digraph(&mut rng, 5, 0.5);
        assert!(directed_zeta_check(&g).unwrap().holds());
    }
    let g = common::random_regular_digraph(&mut rng, 6, 2);
    assert!(directed_zeta_check(&g).unwrap().holds());
    assert!(directed_zeta_check(&Graph::complete(4)).is_err());
}

#[test]
fn newton_counts_match_traces_on_random_graphs() {
    let mut rng = common::rng(5);
    for t in 0..20 {
        let g = if t % 2 == 0 { common::random_graph(&mut rng, 7, 0.4) } else { common::random_primitive_digraph(&mut rng, 6, 0.4) };
        let a = g.adjacency_int();
        let n = cycle_counts(&g, 12).unwrap();
        for i in 1..=12u64 {
            assert_eq!(n[i as usize - 1], trace_power(&a, i));
        }
    }
}

proptest! {
    #[test]
    fn counts_are_integral_and_match_traces(bits in proptest::collection::vec(any::<bool>(), 25)) {
        let adj = Matrix::from_fn(5, 5, |i, j| u64::from(bits[5 * i + j]));
        let g = Graph::from_adjacency(adj, true).unwrap();
        let a = g.adjacency_int();
        let n = cycle_counts_from_zeta(&zeta(&g), 12).unwrap();
        for i in 1..=12u64 {
            prop_assert_eq!(n[i as usize - 1].clone(), BigRational::from_integer(trace_power(&a, i)));
        }
        prop_assert!(primitive_from_counts(&cycle_counts(&g, 12).unwrap()).is_ok());
    }

    #[test]
    fn class_count_divisibility(k in 1u32..6, r in 1u32..40) {
        let t = free_group_counts(k, r).unwrap();
        let h = cc_gf_coeffs(k, r as usize).unwrap();
        prop_assert_eq!(h[r as usize].clone(), BigInt::from(r) * &t.cc[r as usize - 1]);
    }
}
