// SPDX-License-Identifier: Apache-2.0

//! Verdict engines for the class-number divisibility theorems on
//! `Q(sqrt(x^2 - 4k^n))`, and grid sweeps over them.
//!
//! Each engine places a parameter point into the theorem's case list,
//! derives the divisor the theorem guarantees, computes `h(d)` (and, for a
//! prime `k` or `q`, the order of the ideal class above it) and records
//! whether the claim holds. Points outside a theorem's hypotheses are
//! reported as not applicable or excluded, never as passes.

mod engines;
mod sweep;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::arith::{FactorBudget, Factorizer, SquarefreeDecomposition};
use crate::error::Error;
use crate::quadfield::{fundamental_discriminant, prime_form_above, ClassGroupCache};

pub use engines::{
    verify, verify_thm2, verify_thm3, verify_thm4, verify_thm4_1, verify_thm4_2, verify_thm5,
    verify_thm6,
};
pub use sweep::{sweep, AxisSpec, GridSpec, InvariantCheck, Summary, SweepReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TheoremId {
    T2,
    T3,
    T4,
    T5,
    T6,
    T41,
    T42,
}

impl TheoremId {
    pub const ALL: [TheoremId; 7] = [
        TheoremId::T2,
        TheoremId::T3,
        TheoremId::T4,
        TheoremId::T5,
        TheoremId::T6,
        TheoremId::T41,
        TheoremId::T42,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::T2 => "t2",
            TheoremId::T3 => "t3",
            TheoremId::T4 => "t4",
            TheoremId::T5 => "t5",
            TheoremId::T6 => "t6",
            TheoremId::T41 => "t41",
            TheoremId::T42 => "t42",
        }
    }

    /// Parameter names in grid order.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            TheoremId::T2 | TheoremId::T3 | TheoremId::T4 | TheoremId::T5 => &["k", "n"],
            TheoremId::T6 => &["q", "n", "e"],
            TheoremId::T41 => &["x", "k", "n"],
            TheoremId::T42 => &["l", "e", "n"],
        }
    }

    /// The field `Q(sqrt(m))` studied by the theorem, as the radicand `m`.
    pub fn radicand(self, params: &[u64]) -> BigInt {
        let four_pow = |k: &BigInt, n: u64| num_traits::pow(k.clone(), n as usize) * 4;
        match (self, params) {
            (TheoremId::T6, &[q, n, e]) => {
                num_traits::pow(BigInt::from(9), e as usize) - four_pow(&BigInt::from(q), n)
            }
            (TheoremId::T41, &[x, k, n]) => {
                BigInt::from(x) * BigInt::from(x) - four_pow(&BigInt::from(k), n)
            }
            (TheoremId::T42, &[l, e, n]) => {
                let k = num_traits::pow(BigInt::from(l), e as usize) * 2;
                1 - four_pow(&k, n)
            }
            (_, &[k, n]) => 1 - four_pow(&BigInt::from(k), n),
            _ => panic!("wrong parameter count for {self}"),
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "t2" => TheoremId::T2,
            "t3" => TheoremId::T3,
            "t4" => TheoremId::T4,
            "t5" => TheoremId::T5,
            "t6" => TheoremId::T6,
            "t41" | "t4.1" => TheoremId::T41,
            "t42" | "t4.2" => TheoremId::T42,
            _ => return Err(Error::Precondition(format!("unknown theorem id {s:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
    Excluded,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotApplicable => "not-applicable",
            Status::Excluded => "excluded",
            Status::Skipped => "skipped",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// What the theorem's proof says about the order `s` of the ideal class
/// above a prime `k` or `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderPrediction {
    Exact(u64),
    /// The order is `n/2` or `n`.
    HalfOrFull(u64),
}

impl OrderPrediction {
    pub fn admits(self, s: u64) -> bool {
        match self {
            OrderPrediction::Exact(n) => s == n,
            OrderPrediction::HalfOrFull(n) => s == n || 2 * s == n,
        }
    }
}

/// One grid point's outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremVerdict {
    pub theorem: TheoremId,
    /// `(name, value)` pairs in [`TheoremId::param_names`] order.
    pub params: Vec<(String, u64)>,
    pub decomposition: Option<SquarefreeDecomposition>,
    pub case_label: String,
    /// The divisor of `h` the theorem guarantees at this point.
    pub expected_divisor: u64,
    /// The "full" divisor `n`; differs from `expected_divisor` in the
    /// half-divisibility cases.
    pub nominal_divisor: u64,
    pub h: Option<u64>,
    pub order_s: Option<u64>,
    pub order_prediction: Option<OrderPrediction>,
    /// Class number stated outright for this point, if any.
    pub published_h: Option<u64>,
    pub status: Status,
    pub notes: String,
}

impl TheoremVerdict {
    pub fn pass(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn param(&self, name: &str) -> Option<u64> {
        self.params.iter().find(|(k, _)| k == name).map(|&(_, v)| v)
    }

    pub fn d(&self) -> Option<i128> {
        self.decomposition.as_ref().and_then(|s| s.d.to_i128())
    }

    /// Whether the nominal divisor `n` divides `h`.
    pub fn full_divisibility(&self) -> Option<bool> {
        self.h.map(|h| h % self.nominal_divisor == 0)
    }

    /// Sets `status` from the computed values.
    fn settle(&mut self) {
        let Some(h) = self.h else { return };
        let mut problems = Vec::new();
        if h % self.expected_divisor != 0 {
            problems.push(format!("{} does not divide h = {h}", self.expected_divisor));
        }
        if let Some(published) = self.published_h {
            if published != h {
                problems.push(format!("published h = {published}, computed {h}"));
            }
        }
        if let Some(s) = self.order_s {
            if h % s != 0 {
                problems.push(format!("class order {s} does not divide h = {h}"));
            }
            if let Some(pred) = self.order_prediction {
                if !pred.admits(s) {
                    problems.push(format!("class order {s} outside prediction {pred:?}"));
                }
            }
        }
        if problems.is_empty() {
            self.status = Status::Pass;
        } else {
            self.status = Status::Fail;
            self.push_note(&problems.join("; "));
        }
    }

    fn push_note(&mut self, note: &str) {
        if !self.notes.is_empty() {
            self.notes.push_str("; ");
        }
        self.notes.push_str(note);
    }
}

/// Resource caps for a verdict computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    /// Largest `|x^2 - 4k^n|` that will be factored.
    pub factor_cap: u128,
    /// Largest `|D|` whose class group will be enumerated.
    pub disc_cap: u128,
    /// Bound for exceptional-set witness searches.
    pub witness_bound: u64,
    pub factor: FactorBudget,
}

impl Default for Budgets {
    fn default() -> Self {
        Self {
            factor_cap: 1_000_000_000_000,
            disc_cap: 100_000_000,
            witness_bound: crate::diophantine::DEFAULT_WITNESS_BOUND,
            factor: FactorBudget::default(),
        }
    }
}

/// Field data for one point, or the reason it could not be computed.
pub(crate) struct FieldData {
    pub decomposition: SquarefreeDecomposition,
    pub d: i128,
    pub h: u64,
}

pub(crate) enum FieldOutcome {
    Ready(FieldData),
    /// Decomposition succeeded but the class group is over budget.
    OverDiscBudget(SquarefreeDecomposition, String),
    Skipped(String),
}

/// Decomposes `m` and computes `h` of its squarefree part, within budgets.
pub(crate) fn field_data(m: &BigInt, budgets: &Budgets) -> FieldOutcome {
    let abs = m.abs();
    if abs > BigInt::from(budgets.factor_cap) {
        return FieldOutcome::Skipped(format!(
            "budget: |m| = {abs} exceeds factorization cap {}",
            budgets.factor_cap
        ));
    }
    let factorizer = Factorizer::new(budgets.factor);
    let decomposition = match crate::arith::squarefree_decompose_with(&factorizer, m) {
        Ok(s) => s,
        Err(e) => return FieldOutcome::Skipped(e.to_string()),
    };
    let Some(d) = decomposition.d.to_i128() else {
        return FieldOutcome::OverDiscBudget(decomposition, "d out of range".into());
    };
    let disc = match fundamental_discriminant(d) {
        Ok(disc) => disc,
        Err(e) => return FieldOutcome::Skipped(e.to_string()),
    };
    if disc.unsigned_abs() > budgets.disc_cap {
        let why = format!(
            "budget: |D| = {} exceeds discriminant cap {}",
            disc.unsigned_abs(),
            budgets.disc_cap
        );
        return FieldOutcome::OverDiscBudget(decomposition, why);
    }
    match ClassGroupCache::global().class_number(disc) {
        Ok(h) => FieldOutcome::Ready(FieldData {
            decomposition,
            d,
            h,
        }),
        Err(e) => FieldOutcome::Skipped(e.to_string()),
    }
}

/// Order of the class of a prime above `p`, if `p` is prime and splits.
pub(crate) fn order_above(p: u64, disc: i128) -> Option<u64> {
    if !crate::arith::is_prime(p as u128) {
        return None;
    }
    prime_form_above(p, disc).ok().map(|f| f.order())
}
