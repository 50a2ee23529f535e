use fgw::chebyshev::*;
use fgw::{BigInt, BigRational, Poly};
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;

fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(p.into(), d.into())
}

#[test]
fn closed_form_matches_recurrence_up_to_sixty() {
    for (n, t) in cheb_sequence(ChebKind::T, 60).iter().enumerate() {
        for m in 0..=n / 2 {
            assert_eq!(cheb_coeff_closed_form(n as u64, m as u64).unwrap(), t.coeffs[n - 2 * m], "n={n} m={m}");
        }
        for j in 0..=n {
            if (n - j) % 2 == 1 {
                assert!(t.coeffs[j].is_zero());
            }
        }
    }
}

#[test]
fn radical_form_agrees_in_floating_point() {
    for x in [1.1f64, 2.0, 5.0] {
        let s = (x * x - 1.0).sqrt();
        for (n, t) in cheb_sequence(ChebKind::T, 20).iter().enumerate() {
            let rad = 0.5 * ((x - s).powi(n as i32) + (x + s).powi(n as i32));
            let val = t.eval_f64(x);
            assert!((rad - val).abs() <= 1e-9 * val.abs().max(1.0), "x={x} n={n}");
        }
    }
}

#[test]
fn derivative_and_difference_identities() {
    let t = cheb_sequence(ChebKind::T, 61);
    let u = cheb_sequence(ChebKind::U, 60);
    for n in 0..=60 {
        let lhs = u[n].poly().scale(&BigInt::from(n + 1));
        assert_eq!(lhs, t[n + 1].poly().derivative(), "n={n}");
    }
    for n in 2..=60 {
        let diff = &u[n].poly() - &u[n - 2].poly();
        assert_eq!(diff, t[n].poly().scale(&BigInt::from(2)), "n={n}");
    }
}

#[test]
fn composition_and_recurrence_routes_agree() {
    for k in 1..=3 {
        for c in [q(3, 2), q(2, 1), q(1, 3)] {
            for kind in [SymKind::R, SymKind::S] {
                let seq = symmetrized_sequence(kind, 9, &c, k).unwrap();
                for (n, s) in seq.iter().enumerate() {
                    let direct = symmetrized(kind, n, &c, k).unwrap();
                    assert_eq!(s.to_laurent(), direct.to_laurent(), "kind={kind:?} n={n} k={k} c={c}");
                }
            }
        }
    }
}

#[test]
fn univariate_double_sum_matches_expansion() {
    for c in [q(3, 2), q(2, 1), q(10, 1), q(1, 2)] {
        for n in 0..=20u64 {
            let s = symmetrized(SymKind::R, n as usize, &c, 1).unwrap();
            for j in -(n as i64)..=n as i64 {
                assert_eq!(univariate_coefficient(n, j, &c), s.coeff(&[j as i32]), "n={n} j={j} c={c}");
            }
        }
    }
}

#[test]
fn second_kind_coefficient_recurrence() {
    let c = q(3, 2);
    let seq = symmetrized_sequence(SymKind::S, 41, &c, 1).unwrap();
    let a = |n: usize, k: i32| seq[n].coeff(&[k]);
    for n in 1..40 {
        for k in -(n as i32) - 1..=n as i32 + 1 {
            let rhs = c.clone() * (a(n, k - 1) + a(n, k + 1)) - a(n - 1, k);
            assert_eq!(a(n + 1, k), rhs, "n={n} k={k}");
        }
    }
}

#[test]
fn monotone_chain_at_three_halves() {
    let seq = symmetrized_sequence(SymKind::S, 40, &q(3, 2), 1).unwrap();
    let a = |n: usize, k: i32| seq[n].coeff(&[k]);
    for n in 2..=40usize {
        for k in -(n as i32)..=n as i32 {
            let here = a(n, k);
            let side = std::cmp::max(a(n - 1, k - 1), a(n - 1, k + 1));
            assert!(here >= side, "side bound n={n} k={k}");
            assert!(here >= a(n - 2, k), "two-step bound n={n} k={k}");
            if (n as i32 - k) % 2 == 0 {
                assert!(here > side, "strict side n={n} k={k}");
                assert!(here > a(n - 2, k), "strict two-step n={n} k={k}");
            }
        }
    }
}

fn ball_size(k: usize, n: i32) -> usize {
    let mut count = 0;
    let mut stack = vec![Vec::<i32>::new()];
    while let Some(e) = stack.pop() {
        if e.len() == k {
            let l1: i32 = e.iter().map(|x| x.abs()).sum();
            if l1 <= n && (n - l1) % 2 == 0 {
                count += 1;
            }
            continue;
        }
        for x in -n..=n {
            let mut f = e.clone();
            f.push(x);
            stack.push(f);
        }
    }
    count
}

#[test]
fn multivariate_strict_positivity_on_support() {
    for (k, c) in [(2usize, q(3, 2)), (3, q(2, 1)), (3, q(7, 2))] {
        let seq = symmetrized_sequence(SymKind::R, 12, &c, k).unwrap();
        for s in &seq {
            let terms = s.terms();
            assert!(terms.iter().all(|(_, x)| x.is_positive()), "k={k} c={c} n={}", s.n);
            assert_eq!(terms.len(), ball_size(k, s.n as i32), "k={k} n={}", s.n);
        }
    }
}

#[test]
fn multivariate_constant_term_of_degree_two() {
    // R_2 = 2y² − 1 has constant term c²/k − 1, negative whenever 1 < c < √k.
    for (k, c) in [(2usize, q(6, 5)), (3, q(3, 2)), (3, q(8, 5))] {
        let s = symmetrized(SymKind::R, 2, &c, k).unwrap();
        let zero = vec![0; k];
        let want = c.clone() * c.clone() / BigRational::from_integer((k as i64).into()) - BigRational::from_integer(1.into());
        assert_eq!(s.coeff(&zero), want);
        assert!(want.is_negative());
        let report = check_positivity(&s);
        assert!(!report.positive);
        assert_eq!(report.witness, Some(zero));
    }
    let s = symmetrized(SymKind::R, 2, &q(3, 2), 3).unwrap();
    assert_eq!(s.coeff(&[0, 0, 0]), q(-1, 4));
}

#[test]
fn symmetrized_evaluates_like_chebyshev() {
    let c = q(7, 4);
    let s = symmetrized(SymKind::S, 7, &c, 2).unwrap();
    let (x1, x2) = (1.3f64, 0.7f64);
    let mut val = 0.0;
    for (e, coef) in s.terms() {
        val += coef.to_f64().unwrap() * x1.powi(e[0]) * x2.powi(e[1]);
    }
    let y = 1.75 / 4.0 * (x1 + 1.0 / x1 + x2 + 1.0 / x2);
    let want = cheb(ChebKind::U, 7).eval_f64(y);
    assert!((val - want).abs() < 1e-9 * want.abs());
}

proptest! {
    #[test]
    fn parity_support_and_symmetry(n in 0usize..14, k in 1usize..4, p in 0i64..30, d in 1i64..8) {
        let c = q(p, d);
        let s = symmetrized(SymKind::R, n, &c, k).unwrap();
        prop_assert!(s.parity_support_holds());
        for (e, coef) in s.terms() {
            let neg: Vec<i32> = e.iter().map(|x| -x).collect();
            prop_assert_eq!(s.coeff(&neg), coef);
        }
    }

    #[test]
    fn positivity_above_one(n in 1usize..16, extra in 1i64..40, d in 1i64..6) {
        let c = q(d + extra, d);
        prop_assert!(verify_positivity(SymKind::R, n, &c, 1).unwrap().positive);
        prop_assert!(verify_positivity(SymKind::S, n, &c, 1).unwrap().positive);
    }

    #[test]
    fn multivariate_positivity_above_k(n in 1usize..12, k in 2usize..4, extra in 1i64..40, d in 1i64..6) {
        let c = q(k as i64 * d + extra, d);
        prop_assert!(verify_positivity(SymKind::R, n, &c, k).unwrap().positive);
        prop_assert!(verify_positivity(SymKind::S, n, &c, k).unwrap().positive);
    }

    #[test]
    fn closed_form_matches_recurrence(n in 0u64..80) {
        let t = cheb(ChebKind::T, n as usize);
        for m in 0..=n / 2 {
            prop_assert_eq!(cheb_coeff_closed_form(n, m).unwrap(), t.coeffs[(n - 2 * m) as usize].clone());
        }
        let p: Poly<BigInt> = t.poly();
        prop_assert_eq!(p.degree(), Some(n as usize));
    }
}
