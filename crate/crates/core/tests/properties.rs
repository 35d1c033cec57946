// SPDX-License-Identifier: Apache-2.0

mod common;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use proptest::prelude::*;

use quadclass::arith::{factorize, is_perfect_square, isqrt};
use quadclass::diophantine::{
    classify_bs, count_solutions, fibonacci, lucas, lucas_squares_upto, solve_2x2_plus_1_eq_3y,
    solve_x2_plus_1_eq_2kz, BSInstance, Gamma,
};
use quadclass::quadfield::{is_square_in_ring, reduced_forms, unit_group};
use quadclass::{class_number, squarefree_decompose, RingElement};

use common::*;

/// Fundamental discriminants below 2000 in absolute value, picked by index.
fn small_disc() -> impl Strategy<Value = i128> {
    let discs = fundamental_discriminants(-2000);
    (0..discs.len()).prop_map(move |i| discs[i] as i128)
}

/// Squarefree `d < -3` with `|d| < 500`.
fn squarefree_d() -> impl Strategy<Value = i64> {
    (4i64..500)
        .prop_filter("squarefree", |&n| squarefree_by_trial(n))
        .prop_map(|n| -n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn isqrt_brackets(n in any::<u128>()) {
        let n = BigInt::from(n);
        let r = isqrt(&n).unwrap();
        prop_assert!(&r * &r <= n);
        let next = &r + 1;
        prop_assert!(&next * &next > n);
        prop_assert_eq!(is_perfect_square(&n).is_some(), &r * &r == n);
    }

    #[test]
    fn squares_are_recognized(r in 0u64..u64::MAX) {
        let n = BigInt::from(r) * r;
        prop_assert_eq!(is_perfect_square(&n), Some(BigInt::from(r)));
    }

    #[test]
    fn squarefree_round_trip(m in (1i64..1_000_000_000).prop_flat_map(|m| prop_oneof![Just(m), Just(-m)])) {
        let dec = squarefree_decompose(&BigInt::from(m)).unwrap();
        prop_assert_eq!(&dec.a * &dec.a * &dec.d, BigInt::from(m));
        prop_assert_eq!(dec.d.is_negative(), m < 0);
        prop_assert!(squarefree_by_trial(to_i64(&dec.d)));
        if !dec.d.abs().is_one() {
            prop_assert!(factorize(&dec.d.abs()).unwrap().factors.iter().all(|&(_, e)| e == 1));
        }
    }

    #[test]
    fn class_number_matches_brute_force(disc in small_disc()) {
        let d = field_of(disc as i64) as i128;
        prop_assert_eq!(class_number(d).unwrap(), brute_class_number(disc as i64));
    }

    #[test]
    fn lagrange(disc in small_disc()) {
        let forms = reduced_forms(disc).unwrap();
        let h = forms.len() as u64;
        for f in forms {
            prop_assert_eq!(h % f.order(), 0, "order of {} does not divide {}", f, h);
        }
    }

    #[test]
    fn form_group_laws(disc in small_disc(), s in any::<(u64, u64, u64)>()) {
        let r = group_laws(form_from_seed(disc, s.0), form_from_seed(disc, s.1), form_from_seed(disc, s.2));
        prop_assert!(r.is_ok(), "{:?}", r);
    }

    #[test]
    fn conjugate_prime_forms(disc in small_disc(), p in 3u64..300) {
        prop_assume!(quadclass::arith::is_prime(p as u128));
        // Only split primes have prime forms; others are rejected.
        if quadclass::quadfield::prime_form_above(p, disc).is_ok() {
            let r = conjugate_roots_agree(p, disc);
            prop_assert!(r.is_ok(), "{:?}", r);
        }
    }

    #[test]
    fn unit_times_power_never_has_trace_one(
        d in squarefree_d(),
        rho in -60i64..60,
        theta in -60i64..60,
        p in prop::sample::select(vec![3u32, 5, 7]),
        unit_index in 0usize..6,
    ) {
        let Ok(beta) = RingElement::new(rho, theta, d) else { return Ok(()) };
        prop_assume!(beta.norm() > BigInt::one());
        let units = unit_group(&BigInt::from(d)).unwrap();
        let unit = &units[unit_index % units.len()];
        let t = unit.mul(&beta.pow(p)).unwrap();
        prop_assert_ne!(t.trace(), BigInt::one(), "{} * ({})^{}", unit, beta, p);
    }

    #[test]
    fn ring_parity_survives_arithmetic(
        d in squarefree_d(),
        a in (-50i64..50, -50i64..50),
        b in (-50i64..50, -50i64..50),
        e in 0u32..6,
    ) {
        let (Ok(x), Ok(y)) = (RingElement::new(a.0, a.1, d), RingElement::new(b.0, b.1, d)) else {
            return Ok(());
        };
        for z in [x.mul(&y).unwrap(), x.add(&y).unwrap(), x.pow(e), x.conj(), x.neg()] {
            let rebuilt = RingElement::new(z.u().clone(), z.v().clone(), d);
            prop_assert!(rebuilt.is_ok(), "{} broke the parity rule", z);
        }
    }

    #[test]
    fn square_roots_reconstruct(d in squarefree_d(), u in -80i64..80, v in -80i64..80) {
        let Ok(y) = RingElement::new(u, v, d) else { return Ok(()) };
        let x = y.pow(2);
        prop_assert!(is_square_in_ring(&x));
        let root = x.square_root().expect("a square has a root");
        prop_assert_eq!(root.pow(2), x);
    }

    #[test]
    fn x2_plus_1_solutions_substitute(k in 2u64..2000) {
        for (x, z) in solve_x2_plus_1_eq_2kz(k, 30) {
            prop_assert_eq!(&x * &x + 1, BigInt::from(2) * BigInt::from(k).pow(z));
        }
    }

    #[test]
    fn non_exceptional_instances_have_at_most_one_solution(
        g2 in prop::sample::select(vec![1u64, 2, 4]),
        d1 in 1u64..40,
        d2 in 1u64..40,
        p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 17, 19, 23]),
    ) {
        let Ok(inst) = Gamma::from_square(g2).and_then(|g| BSInstance::new(g, d1, d2, p)) else {
            return Ok(());
        };
        let class = classify_bs(&inst, 2000);
        prop_assert!(class.witnesses_hold(&inst));
        let sols = count_solutions(&inst, 30);
        for (x, y) in &sols {
            prop_assert_eq!(BigInt::from(d1) * x * x + d2, BigInt::from(g2) * BigInt::from(p).pow(*y));
        }
        if !class.is_exceptional() {
            prop_assert!(sols.len() <= 1, "{:?} has {:?}", inst, sols);
        }
    }
}

#[test]
fn lucas_from_fibonacci() {
    for n in 1..=200 {
        assert_eq!(lucas(n), fibonacci(n - 1) + fibonacci(n + 1), "n = {n}");
    }
}

#[test]
fn lucas_squares_at_every_bound() {
    for bound in [3, 10, 100, 1000] {
        assert_eq!(lucas_squares_upto(bound), vec![1, 3]);
    }
}

#[test]
fn three_power_solutions_substitute() {
    for (x, y) in solve_2x2_plus_1_eq_3y(200) {
        assert_eq!(BigInt::from(2) * &x * &x + 1, BigInt::from(3).pow(y));
    }
}

#[test]
fn half_elements_are_not_pth_powers() {
    // +-tau with tau = (1 + sqrt(1 - 4k^n))/2 is never a p-th power for odd
    // prime p dividing n.
    for k in (3u64..50).step_by(2) {
        for n in 2u64..=8 {
            let m = BigInt::one() - BigInt::from(4) * BigInt::from(k).pow(n as u32);
            let tau = half_element(&BigInt::one(), &m).expect("factorable");
            for p in primes_dividing(n, false) {
                assert!(!plus_minus_power(&tau, p), "k={k} n={n} p={p}");
            }
        }
    }
}
