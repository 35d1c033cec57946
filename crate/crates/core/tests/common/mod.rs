// SPDX-License-Identifier: Apache-2.0

//! Shared helpers for the integration tests: a brute-force class number
//! counter kept independent of the library, and the property checks used
//! both by the proptest suites and by the acceptance run.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use quadclass::arith::{is_prime, squarefree_decompose};
use quadclass::quadfield::{prime_form_with_root, QuadForm, RingElement, RootChoice};

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

/// Trial-division squarefree test.
pub fn squarefree_by_trial(mut n: i64) -> bool {
    n = n.abs();
    let mut p = 2;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        if n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    true
}

/// Fundamental discriminants `D` with `lo < D < 0`, ascending in `|D|`.
pub fn fundamental_discriminants(lo: i64) -> Vec<i64> {
    (1..-lo)
        .map(|x| -x)
        .filter(|&d| match d.rem_euclid(4) {
            1 => squarefree_by_trial(d),
            0 => {
                let m = d / 4;
                matches!(m.rem_euclid(4), 2 | 3) && squarefree_by_trial(m)
            }
            _ => false,
        })
        .collect()
}

/// The squarefree `d` whose field has fundamental discriminant `disc`.
pub fn field_of(disc: i64) -> i64 {
    if disc.rem_euclid(4) == 1 {
        disc
    } else {
        disc / 4
    }
}

/// Counts reduced primitive forms of `disc < 0` by a plain triple loop
/// over `(a, b, c)`.
pub fn brute_class_number(disc: i64) -> u64 {
    let abs = -disc;
    let mut count = 0;
    let mut a = 1;
    while 3 * a * a <= abs {
        for b in (-a + 1)..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            if gcd(gcd(a, b), c) == 1 {
                count += 1;
            }
        }
        a += 1;
    }
    count
}

/// Odd primes dividing `n`, plus 2 when `include_two` and `n` is even.
pub fn primes_dividing(n: u64, include_two: bool) -> Vec<u32> {
    (2..=n)
        .filter(|&p| n % p == 0 && is_prime(p as u128))
        .filter(|&p| p != 2 || include_two)
        .map(|p| p as u32)
        .collect()
}

/// `(x + a sqrt(d))/2` for `x^2 - 4k^n = a^2 d`, when `m` can be factored.
pub fn half_element(x: &BigInt, m: &BigInt) -> Option<RingElement> {
    let dec = squarefree_decompose(m).ok()?;
    RingElement::new(x.clone(), dec.a, dec.d).ok()
}

/// Whether `+-elt` is a `p`-th power (for `p = 2` the sign matters).
pub fn plus_minus_power(elt: &RingElement, p: u32) -> bool {
    elt.is_pth_power(p) || elt.neg().is_pth_power(p)
}

/// For `beta = (rho + theta sqrt d)/2` not a unit and an
/// odd prime `p`, no associate `+-beta^p` has trace 1. Returns whether
/// `(rho, theta)` gave a ring element at all.
pub fn trace_one_power_is_unit(rho: i64, theta: i64, d: i64, p: u32) -> Result<bool, String> {
    let Ok(beta) = RingElement::new(rho, theta, d) else {
        return Ok(false);
    };
    let power = beta.pow(p);
    let trace_one = power.trace() == BigInt::from(1) || power.neg().trace() == BigInt::from(1);
    if trace_one && !beta.is_unit() {
        return Err(format!(
            "{beta}^{p} = {power} has trace +-1 but {beta} is not a unit"
        ));
    }
    Ok(true)
}

/// Group laws on three forms of one discriminant.
pub fn group_laws(f: QuadForm, g: QuadForm, h: QuadForm) -> Result<(), String> {
    let disc = f.discriminant();
    let id = QuadForm::principal(disc).map_err(|e| e.to_string())?;
    let c = |x: &QuadForm, y: &QuadForm| x.compose(y).map_err(|e| e.to_string());
    let (f, g, h) = (f.reduce(), g.reduce(), h.reduce());
    if c(&c(&f, &g)?, &h)? != c(&f, &c(&g, &h)?)? {
        return Err(format!("associativity fails for {f}, {g}, {h}"));
    }
    if c(&f, &g)? != c(&g, &f)? {
        return Err(format!("commutativity fails for {f}, {g}"));
    }
    if c(&f, &id)? != f {
        return Err(format!("{id} is not neutral for {f}"));
    }
    if !c(&f, &f.inverse())?.is_principal() {
        return Err(format!("{f} times its inverse is not principal"));
    }
    let fg = c(&f, &g)?;
    if !fg.is_reduced() || fg.discriminant() != disc {
        return Err(format!("{f} * {g} = {fg} is not a reduced form of {disc}"));
    }
    Ok(())
}

/// The two prime forms above a split `p` have the same order and are inverse.
pub fn conjugate_roots_agree(p: u64, disc: i128) -> Result<(), String> {
    let a = prime_form_with_root(p, disc, RootChoice::Smaller).map_err(|e| e.to_string())?;
    let b = prime_form_with_root(p, disc, RootChoice::Conjugate).map_err(|e| e.to_string())?;
    if a.order() != b.order() {
        return Err(format!("orders differ above {p} in {disc}: {a} vs {b}"));
    }
    if !a.compose(&b).map_err(|e| e.to_string())?.is_principal() {
        return Err(format!("{a} and {b} are not inverse in {disc}"));
    }
    Ok(())
}

/// A reduced form of `disc` picked by `seed`.
pub fn form_from_seed(disc: i128, seed: u64) -> QuadForm {
    let forms = quadclass::quadfield::reduced_forms(disc).expect("valid discriminant");
    forms[(seed % forms.len() as u64) as usize]
}

pub fn to_i64(n: &BigInt) -> i64 {
    n.to_i64().expect("fits in i64")
}
