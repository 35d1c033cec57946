// SPDX-License-Identifier: Apache-2.0

use num_bigint::BigInt;
use num_integer::Integer;

use super::{
    field_data, order_above, Budgets, FieldOutcome, OrderPrediction, Status, TheoremId,
    TheoremVerdict,
};
use crate::arith::{divisors, factorize, is_prime};
use crate::diophantine::{thm6_square_condition, SquareCondition};

/// Dispatches to the engine for `theorem`. `params` follow
/// [`TheoremId::param_names`].
pub fn verify(theorem: TheoremId, params: &[u64], budgets: &Budgets) -> TheoremVerdict {
    let expected = theorem.param_names().len();
    if params.len() != expected {
        let v = blank(theorem, params);
        return not_applicable(
            v,
            format!("expected {expected} parameters, got {}", params.len()),
        );
    }
    match theorem {
        TheoremId::T2 => verify_thm2(params[0], params[1], budgets),
        TheoremId::T3 => verify_thm3(params[0], params[1], budgets),
        TheoremId::T4 => verify_thm4(params[0], params[1], budgets),
        TheoremId::T5 => verify_thm5(params[0], params[1], budgets),
        TheoremId::T6 => verify_thm6(params[0], params[1], params[2], budgets),
        TheoremId::T41 => verify_thm4_1(params[0], params[1], params[2], budgets),
        TheoremId::T42 => verify_thm4_2(params[0], params[1], params[2], budgets),
    }
}

fn blank(theorem: TheoremId, params: &[u64]) -> TheoremVerdict {
    TheoremVerdict {
        theorem,
        params: theorem
            .param_names()
            .iter()
            .zip(params)
            .map(|(name, &v)| (name.to_string(), v))
            .collect(),
        decomposition: None,
        case_label: String::new(),
        expected_divisor: 1,
        nominal_divisor: 1,
        h: None,
        order_s: None,
        order_prediction: None,
        published_h: None,
        status: Status::Skipped,
        notes: String::new(),
    }
}

fn not_applicable(mut v: TheoremVerdict, why: impl AsRef<str>) -> TheoremVerdict {
    v.status = Status::NotApplicable;
    v.push_note(why.as_ref());
    v
}

fn excluded(mut v: TheoremVerdict, why: impl AsRef<str>) -> TheoremVerdict {
    v.status = Status::Excluded;
    v.push_note(why.as_ref());
    v
}

/// Decomposes the radicand and, budget permitting, computes `h`. Returns
/// the squarefree part when the decomposition is known.
fn load_field(v: &mut TheoremVerdict, params: &[u64], budgets: &Budgets) -> Option<i128> {
    let m = v.theorem.radicand(params);
    match field_data(&m, budgets) {
        FieldOutcome::Ready(f) => {
            v.decomposition = Some(f.decomposition);
            v.h = Some(f.h);
            Some(f.d)
        }
        FieldOutcome::OverDiscBudget(dec, why) => {
            let d = num_traits::ToPrimitive::to_i128(&dec.d);
            v.decomposition = Some(dec);
            v.push_note(&why);
            d
        }
        FieldOutcome::Skipped(why) => {
            v.push_note(&why);
            None
        }
    }
}

/// Computes the class order above `p` when `p` is prime, then settles.
fn finish(mut v: TheoremVerdict, d: i128, order_prime: Option<u64>) -> TheoremVerdict {
    if v.h.is_none() {
        v.status = Status::Skipped;
        return v;
    }
    if let Some(p) = order_prime {
        let disc = if d.rem_euclid(4) == 1 { d } else { 4 * d };
        v.order_s = order_above(p, disc);
    }
    if v.order_s.is_none() {
        v.order_prediction = None;
    }
    v.settle();
    v
}

fn prime_or_none(p: u64) -> Option<u64> {
    is_prime(p as u128).then_some(p)
}

/// Class numbers of `Q(sqrt(1 - 4k^n))` for odd `n` are divisible by `n`.
pub fn verify_thm2(k: u64, n: u64, budgets: &Budgets) -> TheoremVerdict {
    let mut v = blank(TheoremId::T2, &[k, n]);
    if k < 2 {
        return not_applicable(v, "requires k >= 2");
    }
    if n == 0 || n % 2 == 0 {
        return not_applicable(v, "requires n odd");
    }
    v.case_label = "n odd".into();
    v.expected_divisor = n;
    v.nominal_divisor = n;
    let Some(d) = load_field(&mut v, &[k, n], budgets) else {
        return v;
    };
    finish(v, d, prime_or_none(k))
}

/// Positive `(a1, a2)` with `a1 a2 = a` and `a1^2 + a2^2 d = +-2`.
fn plus_minus_two_split(a: u64, d: i128) -> Option<(u64, u64)> {
    divisors(a)
        .into_iter()
        .map(|a1| (a1, a / a1))
        .find(|&(a1, a2)| {
            let v = (a1 as i128) * (a1 as i128) + (a2 as i128) * (a2 as i128) * d;
            v == 2 || v == -2
        })
}

/// `n/2 | h(d)` when `n` is even and `a` splits as
/// `a1 a2` with `a1^2 + a2^2 d = +-2`, otherwise `n | h(d)`.
pub fn verify_thm3(k: u64, n: u64, budgets: &Budgets) -> TheoremVerdict {
    let mut v = blank(TheoremId::T3, &[k, n]);
    if k < 2 {
        return not_applicable(v, "requires k >= 2");
    }
    if n == 0 {
        return not_applicable(v, "requires n >= 1");
    }
    let Some(d) = load_field(&mut v, &[k, n], budgets) else {
        return v;
    };
    if d >= -3 {
        return not_applicable(v, format!("requires d < -3, got d = {d}"));
    }
    let dec = v.decomposition.clone().expect("decomposition is known");
    if (n, k, d) == (4, 2, -7) && dec.a == BigInt::from(3) {
        return excluded(v, "(n, k, a, d) = (4, 2, 3, -7) is excluded");
    }
    v.nominal_divisor = n;
    let split = if n % 2 == 0 {
        match num_traits::ToPrimitive::to_u64(&dec.a) {
            Some(a) => plus_minus_two_split(a, d),
            None => {
                v.push_note("a too large for the a1 a2 search");
                v.status = Status::Skipped;
                return v;
            }
        }
    } else {
        None
    };
    match split {
        Some((a1, a2)) => {
            v.case_label = "(1)".into();
            v.expected_divisor = n / 2;
            v.push_note(&format!("a1 = {a1}, a2 = {a2}"));
        }
        None => {
            v.case_label = "(2)".into();
            v.expected_divisor = n;
        }
    }
    finish(v, d, prime_or_none(k))
}

/// Even `n` and odd `k >= 3` with a prime factor `3 mod 4`: `n | h`.
pub fn verify_thm4(k: u64, n: u64, budgets: &Budgets) -> TheoremVerdict {
    let mut v = blank(TheoremId::T4, &[k, n]);
    if k < 3 || k % 2 == 0 {
        return not_applicable(v, "requires odd k >= 3");
    }
    if n == 0 || n % 2 == 1 {
        return not_applicable(v, "requires n even");
    }
    let witness = match factorize(&BigInt::from(k)) {
        Ok(f) => f.primes().find(|p| p % 4 == 3),
        Err(e) => {
            v.push_note(&e.to_string());
            return v;
        }
    };
    let Some(p) = witness else {
        return not_applicable(v, "no prime factor of k is 3 mod 4");
    };
    v.case_label = format!("prime {p} = 3 mod 4 divides k");
    v.expected_divisor = n;
    v.nominal_divisor = n;
    let Some(d) = load_field(&mut v, &[k, n], budgets) else {
        return v;
    };
    finish(v, d, prime_or_none(k))
}

/// Odd `k > 1`, `n > 1`: `n | h` except for the listed half cases.
pub fn verify_thm5(k: u64, n: u64, budgets: &Budgets) -> TheoremVerdict {
    let mut v = blank(TheoremId::T5, &[k, n]);
    if k < 3 || k % 2 == 0 {
        return not_applicable(v, "requires odd k > 1");
    }
    if n < 2 {
        return not_applicable(v, "requires n > 1");
    }
    v.nominal_divisor = n;
    let half = match (k, n) {
        (5, 2) | (5, 4) | (13, 2) | (13, 8) => {
            v.case_label = if k == 5 { "(2)" } else { "(3)" }.into();
            v.published_h = Some(match (k, n) {
                (5, 2) | (13, 2) => 1,
                (5, 4) => 2,
                _ => 28,
            });
            true
        }
        (5, _) => {
            v.case_label = "(2)".into();
            false
        }
        (13, _) => {
            v.case_label = "(3)".into();
            false
        }
        (_, 2) | (_, 4) => {
            v.case_label = "possible-exception".into();
            if (k, n) == (29, 4) {
                v.published_h = Some(2);
            }
            true
        }
        _ => {
            v.case_label = "(1)".into();
            false
        }
    };
    if half {
        v.expected_divisor = n / 2;
        v.order_prediction = Some(OrderPrediction::HalfOrFull(n));
    } else {
        v.expected_divisor = n;
        v.order_prediction = Some(OrderPrediction::Exact(n));
    }
    let Some(d) = load_field(&mut v, &[k, n], budgets) else {
        return v;
    };
    let mut v = finish(v, d, prime_or_none(k));
    if v.case_label == "possible-exception" {
        match v.full_divisibility() {
            Some(false) => v.push_note(&format!("exceptional: {n} does not divide h")),
            Some(true) => v.push_note(&format!("not exceptional: {n} divides h")),
            None => {}
        }
    }
    v
}

/// `Q(sqrt(3^{2e} - 4q^n))` for a prime `q != 3`, following the case tree.
pub fn verify_thm6(q: u64, n: u64, e: u64, budgets: &Budgets) -> TheoremVerdict {
    let mut v = blank(TheoremId::T6, &[q, n, e]);
    if !is_prime(q as u128) {
        return not_applicable(v, "requires q prime");
    }
    if q == 3 {
        return not_applicable(v, "requires q != 3");
    }
    if n == 0 {
        return not_applicable(v, "requires n >= 1");
    }
    if e == 0 {
        return not_applicable(v, "requires e >= 1");
    }
    let lhs = num_traits::pow(BigInt::from(9), e as usize);
    let rhs = num_traits::pow(BigInt::from(q), n as usize) * 4;
    if lhs >= rhs {
        return not_applicable(v, "requires 3^(2e) < 4 q^n");
    }
    v.nominal_divisor = n;
    let half = if q % 3 == 1 || n % 4 != 2 {
        v.case_label = "(1)".into();
        false
    } else if q == 2 && (n, e) == (6, 2) {
        v.case_label = "(3.2)".into();
        v.published_h = Some(1);
        v.expected_divisor = 1;
        let Some(d) = load_field(&mut v, &[q, n, e], budgets) else {
            return v;
        };
        if d != -7 {
            v.push_note(&format!("field is Q(sqrt({d})), not Q(sqrt(-7))"));
            v.status = Status::Fail;
            return v;
        }
        return finish(v, d, Some(q));
    } else {
        let cond = match (u32::try_from(n), u32::try_from(e)) {
            (Ok(n32), Ok(e32)) => thm6_square_condition(q, n32, e32),
            _ => return not_applicable(v, "n or e out of range"),
        };
        let square = match cond {
            Ok(SquareCondition::Square(r)) => Some(r),
            Ok(_) => None,
            Err(err) => return not_applicable(v, err.to_string()),
        };
        let (full, halved) = if q == 2 {
            if e % 2 == 0 {
                ("(3.1.1)", None)
            } else {
                ("(3.1.2)", Some("(3.1.3)"))
            }
        } else {
            ("(2.1)", Some("(2.2)"))
        };
        match (square, halved) {
            (Some(r), Some(label)) => {
                v.case_label = label.into();
                v.push_note(&format!("square condition holds with root {r}"));
                true
            }
            _ => {
                v.case_label = full.into();
                false
            }
        }
    };
    if half {
        v.expected_divisor = n / 2;
        v.order_prediction = Some(OrderPrediction::HalfOrFull(n));
    } else {
        v.expected_divisor = n;
        v.order_prediction = Some(OrderPrediction::Exact(n));
    }
    if matches!((q, n, e), (5, 2, 2) | (2, 2, 1)) {
        v.published_h = Some(1);
    }
    let Some(d) = load_field(&mut v, &[q, n, e], budgets) else {
        return v;
    };
    finish(v, d, Some(q))
}

/// `Q(sqrt(x^2 - 4k^n))` with `k^n < (1 - d)^2 / 16`.
pub fn verify_thm4_1(x: u64, k: u64, n: u64, budgets: &Budgets) -> TheoremVerdict {
    let mut v = blank(TheoremId::T41, &[x, k, n]);
    if x == 0 || x % 2 == 0 {
        return not_applicable(v, "requires x odd and positive");
    }
    if k < 2 {
        return not_applicable(v, "requires k >= 2");
    }
    if n < 3 {
        return not_applicable(v, "requires n >= 3");
    }
    if x.gcd(&k) != 1 {
        return not_applicable(v, "requires gcd(k, x) = 1");
    }
    let kn = num_traits::pow(BigInt::from(k), n as usize);
    if BigInt::from(x) * BigInt::from(x) >= &kn * 4 {
        return not_applicable(v, "requires x^2 < 4 k^n");
    }
    v.case_label = "k^n < (1 - d)^2 / 16".into();
    v.expected_divisor = n;
    v.nominal_divisor = n;
    let Some(d) = load_field(&mut v, &[x, k, n], budgets) else {
        return v;
    };
    if d >= -3 {
        return not_applicable(v, format!("requires d < -3, got d = {d}"));
    }
    let one_minus_d = BigInt::from(1 - d);
    if kn * 16 >= &one_minus_d * &one_minus_d {
        v.case_label.clear();
        return not_applicable(v, "requires k^n < (1 - d)^2 / 16");
    }
    v.order_prediction = Some(OrderPrediction::Exact(n));
    finish(v, d, prime_or_none(k))
}

/// `Q(sqrt(1 - 4(2 l^e)^n))` for an odd prime `l`, `(n, e) != (4, 0)`.
pub fn verify_thm4_2(l: u64, e: u64, n: u64, budgets: &Budgets) -> TheoremVerdict {
    let mut v = blank(TheoremId::T42, &[l, e, n]);
    if l % 2 == 0 || !is_prime(l as u128) {
        return not_applicable(v, "requires l an odd prime");
    }
    if n == 0 {
        return not_applicable(v, "requires n >= 1");
    }
    if (n, e) == (4, 0) {
        return excluded(v, "(n, e) = (4, 0) is excluded");
    }
    v.case_label = "(n, e) != (4, 0)".into();
    v.expected_divisor = n;
    v.nominal_divisor = n;
    let Some(d) = load_field(&mut v, &[l, e, n], budgets) else {
        return v;
    };
    let order_prime = if e == 0 {
        v.order_prediction = Some(OrderPrediction::Exact(n));
        Some(2)
    } else {
        None
    };
    finish(v, d, order_prime)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> Budgets {
        Budgets::default()
    }

    #[test]
    fn thm2_points() {
        let v = verify_thm2(2, 3, &b());
        assert_eq!(v.d(), Some(-31));
        assert_eq!(v.h, Some(3));
        assert!(v.pass());
        let v = verify_thm2(3, 1, &b());
        assert_eq!(v.expected_divisor, 1);
        assert!(v.pass());
        let v = verify_thm2(5, 3, &b());
        assert_eq!(v.d(), Some(-499));
        assert!(v.pass());
        assert_eq!(verify_thm2(2, 4, &b()).status, Status::NotApplicable);
    }

    #[test]
    fn thm3_points() {
        let v = verify_thm3(5, 2, &b());
        assert_eq!(v.d(), Some(-11));
        assert_eq!(v.case_label, "(1)");
        assert_eq!(v.expected_divisor, 1);
        assert!(v.pass());
        assert_eq!(verify_thm3(2, 4, &b()).status, Status::Excluded);
        let v = verify_thm3(3, 3, &b());
        assert_eq!(v.case_label, "(2)");
        assert_eq!(v.expected_divisor, 3);
        assert!(v.pass());
        // 1 - 4 * 13^2 = -675 = 15^2 * -3.
        assert_eq!(verify_thm3(13, 2, &b()).status, Status::NotApplicable);
    }

    #[test]
    fn thm4_points() {
        let v = verify_thm4(3, 2, &b());
        assert_eq!(v.expected_divisor, 2);
        assert!(v.pass());
        assert_eq!(verify_thm4(5, 2, &b()).status, Status::NotApplicable);
        let v = verify_thm4(21, 4, &b());
        assert_eq!(v.d(), Some(-777923));
        assert_eq!(v.h, Some(240));
        assert!(v.pass());
    }

    #[test]
    fn thm5_points() {
        let v = verify_thm5(29, 4, &b());
        assert_eq!(v.d(), Some(-187));
        assert_eq!(v.h, Some(2));
        assert_eq!(v.case_label, "possible-exception");
        assert_eq!(v.full_divisibility(), Some(false));
        assert!(v.pass());
        let v = verify_thm5(5, 4, &b());
        assert_eq!((v.d(), v.h), (Some(-51), Some(2)));
        assert!(v.pass());
        let v = verify_thm5(5, 2, &b());
        assert_eq!((v.d(), v.h), (Some(-11), Some(1)));
        assert!(v.pass());
        let v = verify_thm5(13, 2, &b());
        assert_eq!((v.d(), v.h), (Some(-3), Some(1)));
        assert!(v.pass());
        let v = verify_thm5(13, 8, &b());
        assert_eq!((v.d(), v.h), (Some(-6347), Some(28)));
        assert_eq!(v.order_s, Some(4));
        assert!(v.pass());
        assert_eq!(verify_thm5(4, 3, &b()).status, Status::NotApplicable);
    }

    #[test]
    fn thm6_points() {
        let v = verify_thm6(5, 2, 2, &b());
        assert_eq!(v.case_label, "(2.2)");
        assert_eq!((v.d(), v.h, v.expected_divisor), (Some(-19), Some(1), 1));
        assert!(v.pass());
        let v = verify_thm6(2, 2, 1, &b());
        assert_eq!(v.case_label, "(3.1.3)");
        assert_eq!((v.d(), v.h, v.expected_divisor), (Some(-7), Some(1), 1));
        assert!(v.pass());
        let v = verify_thm6(2, 6, 2, &b());
        assert_eq!(v.case_label, "(3.2)");
        assert_eq!((v.d(), v.h), (Some(-7), Some(1)));
        assert!(v.pass());
        let v = verify_thm6(5, 4, 1, &b());
        assert_eq!(v.case_label, "(1)");
        assert_eq!(v.d(), Some(-2491));
        assert_eq!(v.order_s, Some(4));
        assert!(v.pass());
        assert_eq!(verify_thm6(3, 2, 1, &b()).status, Status::NotApplicable);
        assert_eq!(verify_thm6(2, 1, 1, &b()).status, Status::NotApplicable);
    }

    #[test]
    fn thm4_1_points() {
        let v = verify_thm4_1(1, 2, 5, &b());
        assert_eq!((v.d(), v.h), (Some(-127), Some(5)));
        assert!(v.pass());
        let v = verify_thm4_1(3, 2, 3, &b());
        assert_eq!((v.d(), v.h), (Some(-23), Some(3)));
        assert!(v.pass());
        assert!(verify_thm4_1(1, 2, 3, &b()).pass());
        assert_eq!(verify_thm4_1(3, 3, 3, &b()).status, Status::NotApplicable);
        assert_eq!(verify_thm4_1(2, 3, 3, &b()).status, Status::NotApplicable);
    }

    #[test]
    fn thm4_2_points() {
        let v = verify_thm4_2(3, 1, 2, &b());
        assert_eq!((v.d(), v.h), (Some(-143), Some(10)));
        assert!(v.pass());
        assert_eq!(verify_thm4_2(3, 0, 4, &b()).status, Status::Excluded);
        let v = verify_thm4_2(5, 1, 3, &b());
        assert_eq!((v.d(), v.h), (Some(-3999), Some(48)));
        assert!(v.pass());
    }

    #[test]
    fn budget_skips() {
        let tight = Budgets {
            disc_cap: 100,
            ..Budgets::default()
        };
        let v = verify_thm2(5, 3, &tight);
        assert_eq!(v.status, Status::Skipped);
        assert_eq!(v.d(), Some(-499));
        assert!(v.notes.contains("budget"));
        let v = verify_thm2(99, 9, &b());
        assert_eq!(v.status, Status::Skipped);
        assert!(v.decomposition.is_none());
    }

    #[test]
    fn dispatch_checks_arity() {
        assert_eq!(
            verify(TheoremId::T6, &[5, 2], &b()).status,
            Status::NotApplicable
        );
        assert!(verify(TheoremId::T6, &[5, 2, 2], &b()).pass());
    }
}
