// SPDX-License-Identifier: Apache-2.0

//! Exact integer primitives: roots, perfect powers, factorization and
//! squarefree extraction.
//!
//! Public entry points accept [`BigInt`]. Factorization itself runs on `u128`
//! (trial division, then Brent's variant of Pollard rho with fixed seeds, then
//! Miller-Rabin on the cofactors), so results are reproducible bit for bit.
//! Anything that cannot be split inside the configured budget comes back as
//! [`Error::Unfactored`] naming the stubborn cofactor.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Floor square root: the `r` with `r^2 <= n < (r+1)^2`.
pub fn isqrt(n: &BigInt) -> Result<BigInt> {
    if n.is_negative() {
        return Err(Error::NegativeInput(n.clone()));
    }
    Ok(n.sqrt())
}

/// Returns `Some(r)` with `r >= 0` iff `n == r^2`.
pub fn is_perfect_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    // Squares are 0, 1, 4 or 9 mod 16.
    let low = (n & BigInt::from(15u8)).to_u8().unwrap_or(0);
    if !matches!(low, 0 | 1 | 4 | 9) {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// `u128` flavour of [`is_perfect_square`].
pub fn square_root_exact(n: u128) -> Option<u128> {
    if !matches!(n & 15, 0 | 1 | 4 | 9) {
        return None;
    }
    let r = n.isqrt();
    (r * r == n).then_some(r)
}

/// Largest-exponent perfect power representation `n = base^exp` with
/// `exp >= 2`, or `None` when `n` is not a perfect power.
pub fn is_perfect_power(n: &BigInt) -> Option<(BigInt, u32)> {
    if *n < BigInt::from(2) {
        return None;
    }
    let max_exp = n.bits() as u32;
    (2..=max_exp).rev().find_map(|k| {
        let r = n.nth_root(k);
        (num_traits::pow(r.clone(), k as usize) == *n).then_some((r, k))
    })
}

/// Exact integer `k`-th root of a nonnegative integer, if it exists.
pub fn exact_nth_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_negative() || k == 0 {
        return None;
    }
    let r = n.nth_root(k);
    (num_traits::pow(r.clone(), k as usize) == *n).then_some(r)
}

/// Prime factorization of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factorization {
    pub value: u128,
    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub factors: Vec<(u128, u32)>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = u128> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn is_prime(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }

    /// Multiplies the factors back together.
    pub fn product(&self) -> BigInt {
        self.factors.iter().fold(BigInt::one(), |acc, &(p, e)| {
            acc * num_traits::pow(BigInt::from(p), e as usize)
        })
    }
}

/// Limits for [`Factorizer`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorBudget {
    /// Trial division runs over all primes up to this bound.
    pub trial_bound: u64,
    /// Iteration cap for a single rho run.
    pub rho_iterations: u64,
    /// Number of rho polynomials `x^2 + c` tried (`c = 1, 2, ...`).
    pub rho_attempts: u32,
}

impl Default for FactorBudget {
    fn default() -> Self {
        Self {
            trial_bound: 1 << 12,
            rho_iterations: 1 << 22,
            rho_attempts: 8,
        }
    }
}

/// Deterministic factorizer. Cheap to copy; holds only its budget.
#[derive(Debug, Clone, Copy, Default)]
pub struct Factorizer {
    budget: FactorBudget,
}

impl Factorizer {
    pub fn new(budget: FactorBudget) -> Self {
        Self { budget }
    }

    pub fn budget(&self) -> FactorBudget {
        self.budget
    }

    /// Factorization of `|n|`.
    pub fn factorize(&self, n: &BigInt) -> Result<Factorization> {
        if n.is_zero() {
            return Err(Error::ZeroInput);
        }
        let value = n.magnitude().to_u128().ok_or_else(|| Error::Unfactored {
            value: n.abs(),
            residual: n.abs(),
        })?;
        self.factorize_u128(value)
    }

    pub fn factorize_u128(&self, value: u128) -> Result<Factorization> {
        if value == 0 {
            return Err(Error::ZeroInput);
        }
        let mut primes: Vec<u128> = Vec::new();
        let mut rest = value;

        while rest % 2 == 0 {
            primes.push(2);
            rest /= 2;
        }
        let mut p: u128 = 3;
        let bound = self.budget.trial_bound as u128;
        while p <= bound && p * p <= rest {
            while rest % p == 0 {
                primes.push(p);
                rest /= p;
            }
            p += 2;
        }

        if rest > 1 {
            if p * p > rest {
                // Trial division already covered sqrt(rest).
                primes.push(rest);
            } else {
                let mut stack = vec![rest];
                while let Some(m) = stack.pop() {
                    if m == 1 {
                        continue;
                    }
                    if is_prime(m) {
                        primes.push(m);
                        continue;
                    }
                    if let Some(r) = square_root_exact(m) {
                        stack.push(r);
                        stack.push(r);
                        continue;
                    }
                    match self.split(m) {
                        Some(f) => {
                            stack.push(f);
                            stack.push(m / f);
                        }
                        None => {
                            return Err(Error::Unfactored {
                                value: BigInt::from(value),
                                residual: BigInt::from(m),
                            })
                        }
                    }
                }
            }
        }

        primes.sort_unstable();
        let mut factors: Vec<(u128, u32)> = Vec::new();
        for q in primes {
            match factors.last_mut() {
                Some((last, e)) if *last == q => *e += 1,
                _ => factors.push((q, 1)),
            }
        }
        Ok(Factorization { value, factors })
    }

    /// Finds a nontrivial factor of the odd composite `n`.
    fn split(&self, n: u128) -> Option<u128> {
        (1..=self.budget.rho_attempts as u128)
            .find_map(|c| brent_rho(n, c, self.budget.rho_iterations))
    }
}

/// Factorization of `|n|` with the default budget.
pub fn factorize(n: &BigInt) -> Result<Factorization> {
    Factorizer::default().factorize(n)
}

/// `m = a^2 * d` with `a > 0` and `d` squarefree carrying the sign of `m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SquarefreeDecomposition {
    pub m: BigInt,
    pub a: BigInt,
    pub d: BigInt,
}

impl SquarefreeDecomposition {
    pub fn from_factorization(m: &BigInt, f: &Factorization) -> Self {
        let mut a = BigInt::one();
        let mut d = BigInt::one();
        for &(p, e) in &f.factors {
            let p = BigInt::from(p);
            a *= num_traits::pow(p.clone(), (e / 2) as usize);
            if e % 2 == 1 {
                d *= p;
            }
        }
        if m.sign() == Sign::Minus {
            d = -d;
        }
        Self { m: m.clone(), a, d }
    }
}

/// Splits a nonzero `m` into `a^2 * d` with the default factorization budget.
pub fn squarefree_decompose(m: &BigInt) -> Result<SquarefreeDecomposition> {
    squarefree_decompose_with(&Factorizer::default(), m)
}

pub fn squarefree_decompose_with(
    factorizer: &Factorizer,
    m: &BigInt,
) -> Result<SquarefreeDecomposition> {
    let f = factorizer.factorize(m)?;
    Ok(SquarefreeDecomposition::from_factorization(m, &f))
}

/// True when no prime square divides `n`. Zero is not squarefree.
pub fn is_squarefree(n: &BigInt) -> Result<bool> {
    Ok(factorize(n)?.is_squarefree())
}

pub fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[inline]
fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    let (s, overflow) = a.overflowing_add(b);
    if overflow || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

/// `a * b mod m` without overflow for any `m`.
pub fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        return (a % m) * (b % m) % m;
    }
    let (mut a, mut b) = (a % m, b % m);
    let mut acc = 0;
    while b > 0 {
        if b & 1 == 1 {
            acc = add_mod(acc, a, m);
        }
        a = add_mod(a, a, m);
        b >>= 1;
    }
    acc
}

pub fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

const MR_BASES: [u128; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Miller-Rabin with the first thirteen prime bases. Deterministic below
/// 3.3e24; above that it is a strong probable-prime test.
pub fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's cycle-finding rho on `x -> x^2 + c`, starting from 2.
fn brent_rho(n: u128, c: u128, max_iter: u64) -> Option<u128> {
    const BATCH: u64 = 128;
    let f = |x: u128| add_mod(mul_mod(x, x, n), c, n);
    let (mut y, mut x, mut ys) = (2u128, 2u128, 2u128);
    let mut q: u128 = 1;
    let mut g: u128 = 1;
    let mut r: u64 = 1;
    let mut spent: u64 = 0;

    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd_u128(q, n);
            k += BATCH;
        }
        spent += r;
        r *= 2;
        if spent > max_iter {
            return None;
        }
    }
    if g == n {
        // Batched gcd overshot; back up one step at a time.
        loop {
            ys = f(ys);
            g = gcd_u128(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

/// Kronecker symbol `(a | n)`.
pub fn kronecker(a: i128, n: u128) -> i8 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut result: i8 = 1;
    let mut n = n;
    let tz = n.trailing_zeros();
    if tz > 0 {
        if a % 2 == 0 {
            return 0;
        }
        // (a | 2) = +1 for a = +-1 mod 8, -1 for a = +-3 mod 8.
        if tz % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            result = -result;
        }
        n >>= tz;
    }
    // Now n is odd: Jacobi symbol.
    let mut a = a.rem_euclid(n as i128) as u128;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Square root of `a` modulo an odd prime `p` (Tonelli-Shanks). Returns the
/// smaller of the two roots, or `None` for a non-residue.
pub fn sqrt_mod_prime(a: i128, p: u128) -> Option<u128> {
    let a = a.rem_euclid(p as i128) as u128;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r.min(p - r))
}

/// Small helper: `base^exp` as a [`BigInt`].
pub fn big_pow(base: i64, exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

/// Divisors of a positive integer in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            small.push(i);
            if i * i != n {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `true` when `a` divides `b` (with `0 | b` only for `b == 0`).
pub fn divides(a: u64, b: u64) -> bool {
    if a == 0 {
        b == 0
    } else {
        b % a == 0
    }
}
