// SPDX-License-Identifier: Apache-2.0

//! Positive definite binary quadratic forms `A x^2 + B xy + C y^2`,
//! reduction and Dirichlet composition.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{kronecker, sqrt_mod_prime};
use crate::error::{Error, Result};

/// A primitive positive definite form `(A, B, C)` of discriminant
/// `B^2 - 4AC < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadForm {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

impl PartialOrd for QuadForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadForm {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.a, self.b, self.c).cmp(&(other.a, other.b, other.c))
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl QuadForm {
    pub fn new(a: i128, b: i128, c: i128) -> Result<Self> {
        let f = Self { a, b, c };
        if a <= 0 || c <= 0 || f.discriminant() >= 0 || a.gcd(&b).gcd(&c) != 1 {
            return Err(Error::InvalidForm(a, b, c));
        }
        Ok(f)
    }

    /// The form `(A, B, (B^2 - D)/4A)`, if that is integral and primitive.
    pub fn from_ab(a: i128, b: i128, disc: i128) -> Result<Self> {
        let num = b * b - disc;
        if a <= 0 || num % (4 * a) != 0 {
            return Err(Error::InvalidForm(a, b, 0));
        }
        Self::new(a, b, num / (4 * a))
    }

    pub fn discriminant(&self) -> i128 {
        self.b * self.b - 4 * self.a * self.c
    }

    /// The identity class: `(1, D mod 2, (D mod 2 - D)/4)`.
    pub fn principal(disc: i128) -> Result<Self> {
        check_discriminant(disc)?;
        let b = disc.rem_euclid(2);
        Self::new(1, b, (b - disc) / 4)
    }

    pub fn is_principal(&self) -> bool {
        self.a == 1
    }

    pub fn is_reduced(&self) -> bool {
        let normal = -self.a < self.b && self.b <= self.a;
        normal && (self.a < self.c || (self.a == self.c && self.b >= 0))
    }

    /// Inverse class: `(A, -B, C)`.
    pub fn inverse(&self) -> Self {
        Self {
            a: self.a,
            b: -self.b,
            c: self.c,
        }
        .reduce()
    }

    fn normalize(mut self) -> Self {
        if -self.a < self.b && self.b <= self.a {
            return self;
        }
        // r with -a < b + 2ar <= a.
        let r = Integer::div_floor(&(self.a - self.b), &(2 * self.a));
        self.c += r * (self.b + self.a * r);
        self.b += 2 * self.a * r;
        self
    }

    /// The unique reduced form equivalent to `self`.
    pub fn reduce(self) -> Self {
        let mut f = self.normalize();
        while f.a > f.c {
            f = Self {
                a: f.c,
                b: -f.b,
                c: f.a,
            }
            .normalize();
        }
        if f.a == f.c && f.b < 0 {
            f.b = -f.b;
        }
        f
    }

    /// Dirichlet composition followed by reduction.
    ///
    /// With `e = gcd(a1, a2, (b1 + b2)/2) = x a1 + y a2 + z (b1 + b2)/2` the
    /// composite is `(a1 a2 / e^2, B, *)` where
    /// `B = (x a1 b2 + y a2 b1 + z (b1 b2 + D)/2) / e`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let disc = self.discriminant();
        if disc != other.discriminant() {
            return Err(Error::DiscriminantMismatch(disc, other.discriminant()));
        }
        let (a1, b1) = (self.a, self.b);
        let (a2, b2) = (other.a, other.b);
        let s = (b1 + b2) / 2;

        let g1 = a1.extended_gcd(&a2);
        let g2 = g1.gcd.extended_gcd(&s);
        let e = g2.gcd;
        let x = g2.x * g1.x;
        let y = g2.x * g1.y;
        let z = g2.y;

        let a3 = (a1 / e) * (a2 / e);
        let m = 2 * a3;
        // (b1 b2 + D)/2 = b1 s - 2 a1 c1, which e divides.
        let third = (b1 * s - 2 * a1 * self.c) / e;
        let t1 = mul_mod_signed(mul_mod_signed(x, a1 / e, m), b2, m);
        let t2 = mul_mod_signed(mul_mod_signed(y, a2 / e, m), b1, m);
        let t3 = mul_mod_signed(z, third, m);
        let b3 = (t1 + t2 + t3) % m;
        Ok(Self::from_ab(a3, b3, disc)
            .expect("composition yields an integral form")
            .reduce())
    }

    pub fn square(&self) -> Self {
        self.compose(self).expect("same discriminant")
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let disc = self.discriminant();
        let mut acc = Self::principal(disc).expect("valid discriminant");
        let mut base = self.reduce();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base).expect("same discriminant");
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Order of the class of `self`: the least `s >= 1` with `self^s` principal.
    pub fn order(&self) -> u64 {
        let start = self.reduce();
        let mut acc = start;
        let mut s = 1;
        while !acc.is_principal() {
            acc = acc.compose(&start).expect("same discriminant");
            s += 1;
        }
        s
    }

    /// Order of the class, given a multiple `h` of it (usually the class
    /// number): the least divisor `t` of `h` with `self^t` principal.
    pub fn order_dividing(&self, h: u64) -> u64 {
        crate::arith::divisors(h)
            .into_iter()
            .find(|&t| self.pow(t).is_principal())
            .unwrap_or_else(|| self.order())
    }
}

/// `a * b mod m` in `[0, m)` for `m > 0`, without overflow.
fn mul_mod_signed(a: i128, b: i128, m: i128) -> i128 {
    let m_u = m as u128;
    let au = a.rem_euclid(m) as u128;
    let bu = b.rem_euclid(m) as u128;
    crate::arith::mul_mod(au, bu, m_u) as i128
}

pub(crate) fn check_discriminant(disc: i128) -> Result<()> {
    if disc >= 0 || !matches!(disc.rem_euclid(4), 0 | 1) {
        return Err(Error::InvalidDiscriminant(disc.into()));
    }
    Ok(())
}

/// `compose`.
pub fn compose(f: &QuadForm, g: &QuadForm) -> Result<QuadForm> {
    f.compose(g)
}

/// `form_order`.
pub fn form_order(f: &QuadForm) -> u64 {
    f.order()
}

/// Which of the two square roots of `D mod 4p` to use for the prime form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootChoice {
    /// The smaller nonnegative `B` in `[0, 2p)`.
    Smaller,
    /// `2p - B`, giving the conjugate ideal and hence the inverse class.
    Conjugate,
}

/// The reduced form of an ideal of norm `p` above a split prime `p`, using
/// the smaller root `B` of `B^2 = D mod 4p`.
pub fn prime_form_above(p: u64, disc: i128) -> Result<QuadForm> {
    prime_form_with_root(p, disc, RootChoice::Smaller)
}

pub fn prime_form_with_root(p: u64, disc: i128, choice: RootChoice) -> Result<QuadForm> {
    check_discriminant(disc)?;
    if !crate::arith::is_prime(p as u128) {
        return Err(Error::NotPrime(p));
    }
    match kronecker(disc, p as u128) {
        0 => return Err(Error::Ramified { p, disc }),
        -1 => return Err(Error::DoesNotSplit { p, disc }),
        _ => {}
    }
    let p_i = p as i128;
    let b = if p == 2 {
        // D = 1 mod 8, B in {1, 3}.
        1
    } else {
        let r = sqrt_mod_prime(disc, p as u128).expect("split prime has a root") as i128;
        // Lift to B = D mod 2 in [0, 2p).
        let parity = disc.rem_euclid(2);
        [r, p_i - r, r + p_i, 2 * p_i - r]
            .into_iter()
            .filter(|&b| (0..2 * p_i).contains(&b) && b.rem_euclid(2) == parity)
            .min()
            .expect("a root of the right parity exists")
    };
    let b = match choice {
        RootChoice::Smaller => b,
        RootChoice::Conjugate => 2 * p_i - b,
    };
    Ok(QuadForm::from_ab(p_i, b, disc)?.reduce())
}
