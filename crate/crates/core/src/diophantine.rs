// SPDX-License-Identifier: Apache-2.0

//! Bounded solvers for the exponential Diophantine side conditions:
//! `x^2 + 1 = 2k^z`, `x^4 - 2y^2 = +-1`, `2x^2 + 1 = 3^y`,
//! `D1 x^2 + D2 = gamma^2 p^y` and its exceptional parameter sets, plus the
//! Fibonacci and Lucas sequences those sets are built from.
//!
//! Every enumerator works up to an explicit bound. None of them claims
//! anything beyond it.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{big_pow, is_perfect_square, is_prime};
use crate::error::{Error, Result};

pub fn fibonacci(n: u32) -> BigUint {
    let (mut a, mut b) = (BigUint::zero(), BigUint::one());
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

pub fn lucas(n: u32) -> BigUint {
    let (mut a, mut b) = (BigUint::from(2u8), BigUint::one());
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

/// Indices `n <= bound` for which `L_n` is a perfect square.
pub fn lucas_squares_upto(bound: u32) -> Vec<u32> {
    let (mut a, mut b) = (BigUint::from(2u8), BigUint::one());
    let mut out = Vec::new();
    for n in 0..=bound {
        if is_perfect_square(&BigInt::from(a.clone())).is_some() {
            out.push(n);
        }
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    out
}

/// Solutions `(x, z)` of `x^2 + 1 = 2 k^z` with `x >= 1` and `1 <= z <= z_max`.
pub fn solve_x2_plus_1_eq_2kz(k: u64, z_max: u32) -> Vec<(BigInt, u32)> {
    let k_big = BigInt::from(k);
    let mut power = BigInt::one();
    let mut out = Vec::new();
    for z in 1..=z_max {
        power *= &k_big;
        let rhs: BigInt = &power * 2 - 1;
        if let Some(x) = is_perfect_square(&rhs).filter(|x| x.is_positive()) {
            out.push((x, z));
        }
    }
    out
}

/// Solutions `(x, y)` of `x^4 - 2y^2 = rhs` (`rhs = +-1`) with
/// `1 <= x <= x_max` and `y >= 1`.
pub fn solve_x4_minus_2y2(rhs: i8, x_max: u64) -> Result<Vec<(u64, BigInt)>> {
    if rhs != 1 && rhs != -1 {
        return Err(Error::Precondition(format!(
            "rhs must be +1 or -1, got {rhs}"
        )));
    }
    let mut out = Vec::new();
    for x in 1..=x_max {
        let x4 = num_traits::pow(BigInt::from(x), 4);
        let twice_y2 = x4 - rhs as i32;
        if twice_y2.is_odd() {
            continue;
        }
        if let Some(y) = is_perfect_square(&(twice_y2 / 2)).filter(|y| y.is_positive()) {
            out.push((x, y));
        }
    }
    Ok(out)
}

/// Solutions `(x, y)` of `2x^2 + 1 = 3^y` with `x >= 1`, `1 <= y <= y_max`.
pub fn solve_2x2_plus_1_eq_3y(y_max: u32) -> Vec<(BigInt, u32)> {
    let mut power = BigInt::one();
    let mut out = Vec::new();
    for y in 1..=y_max {
        power *= 3;
        let x2: BigInt = (&power - 1) / 2;
        if let Some(x) = is_perfect_square(&x2).filter(|x| x.is_positive()) {
            out.push((x, y));
        }
    }
    out
}

/// The constant `gamma` of `D1 x^2 + D2 = gamma^2 p^y`, one of `1, sqrt 2, 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gamma {
    One,
    Sqrt2,
    Two,
}

impl Gamma {
    pub fn from_square(gamma_sq: u64) -> Result<Self> {
        match gamma_sq {
            1 => Ok(Gamma::One),
            2 => Ok(Gamma::Sqrt2),
            4 => Ok(Gamma::Two),
            other => Err(Error::Precondition(format!(
                "gamma^2 must be 1, 2 or 4, got {other}"
            ))),
        }
    }

    pub fn square(self) -> u64 {
        match self {
            Gamma::One => 1,
            Gamma::Sqrt2 => 2,
            Gamma::Two => 4,
        }
    }
}

/// Parameters `(gamma, D1, D2, p)` of `D1 x^2 + D2 = gamma^2 p^y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BSInstance {
    pub gamma: Gamma,
    pub d1: u64,
    pub d2: u64,
    pub p: u64,
}

impl BSInstance {
    pub fn new(gamma: Gamma, d1: u64, d2: u64, p: u64) -> Result<Self> {
        let fail = |why: &str| {
            Err(Error::Precondition(format!(
                "invalid instance (gamma^2={}, D1={d1}, D2={d2}, p={p}): {why}",
                gamma.square()
            )))
        };
        if d1 == 0 || d2 == 0 {
            return fail("D1 and D2 must be positive");
        }
        if !is_prime(p as u128) {
            return fail("p must be prime");
        }
        if d1.gcd(&d2) != 1 {
            return fail("D1 and D2 must be coprime");
        }
        if (d1 as u128 * d2 as u128) % p as u128 == 0 {
            return fail("p must not divide D1*D2");
        }
        if gamma != Gamma::One && d2 % 2 == 0 {
            return fail("D2 must be odd when gamma is sqrt 2 or 2");
        }
        if p == 2 && gamma != Gamma::Two {
            return fail("gamma must be 2 when p = 2");
        }
        Ok(Self { gamma, d1, d2, p })
    }
}

/// The finite exceptional list, as `(gamma^2, D1, D2, p)`.
pub const EXCEPTIONAL_E: [(u64, u64, u64, u64); 7] = [
    (4, 13, 3, 2),
    (2, 7, 11, 3),
    (1, 2, 1, 3),
    (4, 7, 1, 2),
    (2, 1, 1, 5),
    (2, 1, 1, 13),
    (4, 1, 3, 7),
];

/// Witness for the Fibonacci/Lucas family:
/// `(D1, D2, p) = (F_{h1 - 2 eps}, L_{h1 + eps}, F_{h1})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FWitness {
    pub h1: u32,
    pub eps: i8,
}

/// Membership of an instance in the exceptional sets, found by bounded search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BSClassification {
    pub in_e: bool,
    pub in_f: Option<FWitness>,
    /// `h2` with `D2 = 4 p^h2 - 1` and `D1 = 1`.
    pub in_g: Option<u32>,
    /// `(s0, t0)` with `D1 s0^2 + D2 = gamma^2 p^t0` and `3 D1 s0^2 - D2 = +-gamma^2`.
    pub in_h: Option<(u64, u32)>,
    pub search_bound: u64,
}

impl BSClassification {
    pub fn is_exceptional(&self) -> bool {
        self.in_e || self.in_f.is_some() || self.in_g.is_some() || self.in_h.is_some()
    }

    /// Re-checks every witness against its defining identity.
    pub fn witnesses_hold(&self, inst: &BSInstance) -> bool {
        let f_ok = self.in_f.is_none_or(|w| {
            let h1 = w.h1 as i64;
            let eps = w.eps as i64;
            fibonacci((h1 - 2 * eps) as u32) == BigUint::from(inst.d1)
                && lucas((h1 + eps) as u32) == BigUint::from(inst.d2)
                && fibonacci(w.h1) == BigUint::from(inst.p)
        });
        let g_ok = self.in_g.is_none_or(|h2| {
            inst.d1 == 1 && BigInt::from(inst.d2) == big_pow(inst.p as i64, h2) * 4 - 1
        });
        let h_ok = self.in_h.is_none_or(|(s0, t0)| {
            let g2 = BigInt::from(inst.gamma.square());
            let d1s2 = BigInt::from(inst.d1) * BigInt::from(s0) * BigInt::from(s0);
            let d2 = BigInt::from(inst.d2);
            let lhs = &d1s2 + &d2 == &g2 * big_pow(inst.p as i64, t0);
            let diff: BigInt = d1s2 * 3 - d2;
            lhs && (diff == g2 || diff == -g2)
        });
        f_ok && g_ok && h_ok
    }
}

/// Default bound on `s0` and `t0` for the `H_gamma` witness search.
pub const DEFAULT_WITNESS_BOUND: u64 = 10_000;

/// If `n = p^t` with `t >= 1`, returns `t`.
fn log_exact(n: &BigInt, p: u64) -> Option<u32> {
    if *n <= BigInt::one() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut t = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        t += 1;
    }
    n.is_one().then_some(t)
}

pub fn classify_bs(inst: &BSInstance, search_bound: u64) -> BSClassification {
    let key = (inst.gamma.square(), inst.d1, inst.d2, inst.p);
    let in_e = EXCEPTIONAL_E.contains(&key);

    // F_h1 = p pins down h1, since F is strictly increasing from index 2.
    let mut in_f = None;
    let p_big = BigUint::from(inst.p);
    let mut h1 = 2u32;
    loop {
        let f = fibonacci(h1);
        if f > p_big || h1 as u64 > search_bound {
            break;
        }
        if f == p_big {
            for eps in [1i8, -1] {
                let i = h1 as i64 - 2 * eps as i64;
                let j = h1 as i64 + eps as i64;
                if i >= 0
                    && fibonacci(i as u32) == BigUint::from(inst.d1)
                    && lucas(j as u32) == BigUint::from(inst.d2)
                {
                    in_f = Some(FWitness { h1, eps });
                    break;
                }
            }
        }
        h1 += 1;
    }

    let in_g = if inst.d1 == 1 && (inst.d2 + 1) % 4 == 0 {
        log_exact(&BigInt::from((inst.d2 + 1) / 4), inst.p)
    } else {
        None
    };

    // 3 D1 s0^2 = D2 +- gamma^2 determines s0; then look for t0.
    let g2 = inst.gamma.square() as i128;
    let mut in_h = None;
    for sign in [1i128, -1] {
        let num = inst.d2 as i128 + sign * g2;
        let den = 3 * inst.d1 as i128;
        if num <= 0 || num % den != 0 {
            continue;
        }
        let Some(s0) = is_perfect_square(&BigInt::from(num / den)) else {
            continue;
        };
        let Some(s0) = s0.to_u64().filter(|&s| s >= 1 && s <= search_bound) else {
            continue;
        };
        let total = BigInt::from(inst.d1) * BigInt::from(s0) * BigInt::from(s0) + inst.d2;
        if !(&total % g2).is_zero() {
            continue;
        }
        if let Some(t0) = log_exact(&(total / g2), inst.p).filter(|&t| t as u64 <= search_bound) {
            in_h = Some((s0, t0));
            break;
        }
    }

    BSClassification {
        in_e,
        in_f,
        in_g,
        in_h,
        search_bound,
    }
}

/// Solutions `(x, y)` of `D1 x^2 + D2 = gamma^2 p^y` with `x >= 1`, `1 <= y <= y_max`.
pub fn count_solutions(inst: &BSInstance, y_max: u32) -> Vec<(BigInt, u32)> {
    solutions_of(
        inst.gamma.square(),
        inst.d1,
        &BigInt::from(inst.d2),
        inst.p,
        y_max,
    )
}

fn solutions_of(g2: u64, d1: u64, d2: &BigInt, p: u64, y_max: u32) -> Vec<(BigInt, u32)> {
    let d1 = BigInt::from(d1);
    let mut power = BigInt::from(g2);
    let mut out = Vec::new();
    for y in 1..=y_max {
        power *= p;
        let rest = &power - d2;
        if !rest.is_positive() || !(&rest % &d1).is_zero() {
            continue;
        }
        if let Some(x) = is_perfect_square(&(rest / &d1)).filter(|x| x.is_positive()) {
            out.push((x, y));
        }
    }
    out
}

/// Outcome of enumerating `D1 x^2 + 3^(2e) = 4 q^y` for `y <= y_max`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniquenessCheck {
    pub solutions: Vec<(BigInt, u32)>,
    pub y_max: u32,
}

impl UniquenessCheck {
    /// At most one solution within the bound.
    pub fn holds(&self) -> bool {
        self.solutions.len() <= 1
    }
}

/// Enumerates `D1 x^2 + 3^(2e) = 4 q^y`; at most one solution is expected
/// for odd `D1` and prime `q != 3`.
pub fn lemma32_uniqueness(d1: u64, e: u32, q: u64, y_max: u32) -> Result<UniquenessCheck> {
    if d1 == 0 || d1 % 2 == 0 {
        return Err(Error::Precondition(format!(
            "D1 must be odd and positive, got {d1}"
        )));
    }
    if e == 0 {
        return Err(Error::Precondition("e must be positive".into()));
    }
    if q == 3 || !is_prime(q as u128) {
        return Err(Error::Precondition(format!(
            "q must be a prime other than 3, got {q}"
        )));
    }
    let d2 = big_pow(3, 2 * e);
    Ok(UniquenessCheck {
        solutions: solutions_of(4, d1, &d2, q, y_max),
        y_max,
    })
}

/// The square condition separating the full-divisibility and half-divisibility
/// cases when `n = 2 mod 4`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SquareCondition {
    Square(BigInt),
    NotSquare,
    /// `q = 2` with even `e`: no square condition applies.
    NotApplicable,
}

impl SquareCondition {
    pub fn root(&self) -> Option<&BigInt> {
        match self {
            SquareCondition::Square(r) => Some(r),
            _ => None,
        }
    }
}

/// For odd `q`: is `2 q^(n/2) - (-3)^e` a square? For `q = 2` and odd `e`:
/// is `2^(n/2 + 1) - 3^e` a square?
pub fn thm6_square_condition(q: u64, n: u32, e: u32) -> Result<SquareCondition> {
    if n % 4 != 2 {
        return Err(Error::Precondition(format!("n must be 2 mod 4, got {n}")));
    }
    let value = if q == 2 {
        if e % 2 == 0 {
            return Ok(SquareCondition::NotApplicable);
        }
        big_pow(2, n / 2 + 1) - big_pow(3, e)
    } else {
        big_pow(q as i64, n / 2) * 2 - big_pow(-3, e)
    };
    Ok(match is_perfect_square(&value) {
        Some(r) => SquareCondition::Square(r),
        None => SquareCondition::NotSquare,
    })
}
