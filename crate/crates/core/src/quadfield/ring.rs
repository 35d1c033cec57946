// SPDX-License-Identifier: Apache-2.0

//! Elements `(u + v*sqrt(d))/2` of the maximal order of `Q(sqrt(d))`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{exact_nth_root, is_perfect_square};
use crate::error::{Error, Result};

/// An element `(u + v*sqrt(d))/2` of the ring of integers of `Q(sqrt(d))`.
///
/// For `d = 1 mod 4` the coordinates only need `u = v mod 2`; otherwise both
/// are even. The constructor enforces this, and so every value of this type
/// is an algebraic integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingElement {
    u: BigInt,
    v: BigInt,
    d: BigInt,
}

fn d_is_one_mod_four(d: &BigInt) -> bool {
    d.mod_floor(&BigInt::from(4)) == BigInt::one()
}

impl RingElement {
    pub fn new(u: impl Into<BigInt>, v: impl Into<BigInt>, d: impl Into<BigInt>) -> Result<Self> {
        let (u, v, d) = (u.into(), v.into(), d.into());
        let reason = if d.is_zero() || d.is_one() {
            Some("d must be a squarefree integer other than 0 and 1")
        } else if d_is_one_mod_four(&d) {
            (u.is_odd() != v.is_odd()).then_some("u and v must have equal parity")
        } else {
            (u.is_odd() || v.is_odd()).then_some("u and v must be even when d != 1 mod 4")
        };
        match reason {
            Some(reason) => Err(Error::InvalidElement { u, v, d, reason }),
            None => Ok(Self { u, v, d }),
        }
    }

    /// The rational integer `n` viewed in the order of `Q(sqrt(d))`.
    pub fn integer(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Result<Self> {
        Self::new(n.into() * 2, 0, d)
    }

    /// `(x + a*sqrt(d))/2`, the element whose norm is `(x^2 - a^2 d)/4`.
    /// This is how `tau`, `alpha`, `eta` and `xi` are built.
    pub fn half(x: impl Into<BigInt>, a: impl Into<BigInt>, d: impl Into<BigInt>) -> Result<Self> {
        Self::new(x, a, d)
    }

    pub fn u(&self) -> &BigInt {
        &self.u
    }

    pub fn v(&self) -> &BigInt {
        &self.v
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn trace(&self) -> BigInt {
        self.u.clone()
    }

    pub fn norm(&self) -> BigInt {
        (&self.u * &self.u - &self.v * &self.v * &self.d) / 4
    }

    pub fn conj(&self) -> Self {
        Self {
            u: self.u.clone(),
            v: -&self.v,
            d: self.d.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            u: -&self.u,
            v: -&self.v,
            d: self.d.clone(),
        }
    }

    pub fn one(d: impl Into<BigInt>) -> Result<Self> {
        Self::integer(1, d)
    }

    pub fn is_one(&self) -> bool {
        self.u == BigInt::from(2) && self.v.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    fn check_same_field(&self, other: &Self) -> Result<()> {
        if self.d != other.d {
            return Err(Error::FieldMismatch(self.d.clone(), other.d.clone()));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other)?;
        let u = (&self.u * &other.u + &self.v * &other.v * &self.d) / 2;
        let v = (&self.u * &other.v + &other.u * &self.v) / 2;
        Ok(Self {
            u,
            v,
            d: self.d.clone(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other)?;
        Self::new(&self.u + &other.u, &self.v + &other.v, self.d.clone())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self {
            u: BigInt::from(2),
            v: BigInt::zero(),
            d: self.d.clone(),
        };
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same field");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same field");
            }
        }
        acc
    }

    /// A square root `y` with `y^2 = self`, if one exists in the order.
    ///
    /// If `y = (s + t sqrt d)/2` then `N(self) = N(y)^2` and
    /// `Tr(self) + 2 N(y) = s^2`; both signs of `c = sqrt(N(self))` and of
    /// `s` are tried and the candidate is verified by squaring.
    pub fn square_root(&self) -> Option<Self> {
        let n = self.norm();
        let c = is_perfect_square(&n.abs()).filter(|_| !n.is_negative())?;
        let tr = self.trace();
        let mut cs = vec![c.clone()];
        if !c.is_zero() {
            cs.push(-c);
        }
        for c in cs {
            let Some(s) = is_perfect_square(&(&tr + &c * 2)) else {
                continue;
            };
            let candidates_t: Vec<BigInt> = if s.is_zero() {
                // y = t sqrt(d)/2, y^2 = t^2 d/4: recover t^2 = 2u/d.
                let twice_u: BigInt = &self.u * 2;
                if !self.v.is_zero() || !(&twice_u % &self.d).is_zero() {
                    continue;
                }
                match is_perfect_square(&(twice_u / &self.d)) {
                    Some(t) => vec![t],
                    None => continue,
                }
            } else {
                if !(&self.v % &s).is_zero() {
                    continue;
                }
                vec![&self.v / &s]
            };
            for t in candidates_t {
                for (s, t) in [(s.clone(), t.clone()), (-s.clone(), -t.clone())] {
                    if let Ok(y) = Self::new(s, t, self.d.clone()) {
                        if y.pow(2) == *self {
                            return Some(y);
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_square(&self) -> bool {
        self.square_root().is_some()
    }

    /// A `p`-th root by bounded search, for `p >= 2`.
    ///
    /// The root must have norm `m = N(self)^(1/p)`, so `u'^2 - v'^2 d = 4m`
    /// leaves finitely many candidates in an imaginary field.
    pub fn pth_root(&self, p: u32) -> Option<Self> {
        if p == 2 {
            return self.square_root();
        }
        if !self.d.is_negative() {
            return None;
        }
        let norm = self.norm();
        let m = exact_nth_root(&norm, p)?;
        if m.is_zero() {
            return self.u.is_zero().then(|| self.clone());
        }
        let four_m: BigInt = &m * 4;
        let abs_d = -&self.d;
        let bound = four_m.sqrt().to_u128()?;
        for u in 0..=bound {
            let ub = BigInt::from(u);
            let rest = &four_m - &ub * &ub;
            if !(&rest % &abs_d).is_zero() {
                continue;
            }
            let Some(v) = is_perfect_square(&(rest / &abs_d)) else {
                continue;
            };
            for su in [ub.clone(), -ub.clone()] {
                for sv in [v.clone(), -v.clone()] {
                    if let Ok(y) = Self::new(su.clone(), sv, self.d.clone()) {
                        if y.pow(p) == *self {
                            return Some(y);
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_pth_power(&self, p: u32) -> bool {
        self.pth_root(p).is_some()
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}*sqrt({}))/2", self.u, self.v, self.d)
    }
}

/// Units of the maximal order of an imaginary quadratic field.
pub fn unit_group(d: &BigInt) -> Result<Vec<RingElement>> {
    let d_small = d.to_i64();
    let units = match d_small {
        Some(-1) => vec![(2, 0), (-2, 0), (0, 2), (0, -2)],
        // Powers of omega = (-1 + sqrt(-3))/2.
        Some(-3) => vec![(2, 0), (-1, 1), (-1, -1), (-2, 0), (1, -1), (1, 1)],
        _ if d.is_negative() => vec![(2, 0), (-2, 0)],
        _ => {
            return Err(Error::Precondition(format!(
                "unit group only computed for imaginary fields, got d = {d}"
            )))
        }
    };
    units
        .into_iter()
        .map(|(u, v)| RingElement::new(u, v, d.clone()))
        .collect()
}

/// `is_square_in_ring`.
pub fn is_square_in_ring(x: &RingElement) -> bool {
    x.is_square()
}

/// `is_pth_power_in_ring`; `p` is expected to be prime.
pub fn is_pth_power_in_ring(x: &RingElement, p: u32) -> bool {
    x.is_pth_power(p)
}
